//! Points of `V(f_1, ..., f_s)` over `F_{q^e}` by fibration over the last
//! coordinate.
//!
//! Chart `j` holds the points whose first nonzero coordinate is `x_j = 1`.
//! Inside a chart the coordinates `x_{j+1}, ..., x_{n-1}` are enumerated as a
//! base-`Q` counter (`x_{j+1}` most significant); on each such line the forms
//! become univariate in `x_n`, and the common roots are the roots of their
//! gcd. The resulting order is exactly the order of brute-force enumeration.

use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::field::upoly::{self, UPoly};
use crate::field::Extension;
use crate::poly::MPoly;

struct Compiled {
    maxdeg: usize,
    terms: Vec<(u32, Vec<u32>)>,
}

pub(crate) struct Solver {
    ext: Extension,
    nvars: usize,
    forms: Vec<Compiled>,
}

/// Prefix values per parallel chunk.
const CHUNK: u64 = 256;

impl Solver {
    pub fn new(forms: &[MPoly], ext: &Extension, nvars: usize) -> Self {
        let forms = forms
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| Compiled {
                maxdeg: f.degree() as usize,
                terms: f
                    .raw_terms()
                    .map(|(m, c)| (ext.embed(c), m.clone()))
                    .collect(),
            })
            .collect();
        Solver {
            ext: ext.clone(),
            nvars,
            forms,
        }
    }

    fn q(&self) -> u64 {
        self.ext.field.size() as u64
    }

    /// Number of lines in chart `j`.
    fn lines(&self, chart: usize) -> u64 {
        if chart + 1 >= self.nvars {
            1
        } else {
            self.q().pow((self.nvars - chart - 2) as u32)
        }
    }

    fn base_point(&self, chart: usize, mut idx: u64, coords: &mut Vec<u32>) {
        coords.clear();
        coords.resize(self.nvars, 0);
        coords[chart] = 1;
        if chart + 1 >= self.nvars {
            return;
        }
        let q = self.q();
        for v in (chart + 1..self.nvars - 1).rev() {
            coords[v] = (idx % q) as u32;
            idx /= q;
        }
    }

    /// Restriction of form `f` to the line through `coords` with free last
    /// coordinate.
    fn restrict(&self, f: &Compiled, coords: &[u32], pw: &mut Vec<Vec<u32>>) -> UPoly {
        let fld = &self.ext.field;
        let last = self.nvars - 1;
        pw.resize(last, Vec::new());
        for (v, row) in pw.iter_mut().enumerate() {
            row.clear();
            let mut acc = 1;
            for _ in 0..=f.maxdeg {
                row.push(acc);
                acc = fld.mul(acc, coords[v]);
            }
        }
        let mut out = vec![0u32; f.maxdeg + 1];
        for (c, m) in &f.terms {
            let mut t = *c;
            for v in 0..last {
                if m[v] > 0 {
                    t = fld.mul(t, pw[v][m[v] as usize]);
                    if t == 0 {
                        break;
                    }
                }
            }
            let slot = &mut out[m[last] as usize];
            *slot = fld.add(*slot, t);
        }
        upoly::trim(&mut out);
        out
    }

    /// Last coordinates of the points on one line, ascending.
    fn line_points(&self, chart: usize, coords: &[u32], out: &mut Vec<u32>) {
        out.clear();
        let fld = &self.ext.field;
        if chart + 1 == self.nvars {
            let ok = self.forms.iter().all(|f| {
                let mut acc = 0;
                for (c, m) in &f.terms {
                    if m[..chart].iter().all(|&a| a == 0) {
                        acc = fld.add(acc, *c);
                    }
                }
                acc == 0
            });
            if ok {
                out.push(1);
            }
            return;
        }
        let mut pw = Vec::new();
        let mut g: Option<UPoly> = None;
        for f in &self.forms {
            let r = self.restrict(f, coords, &mut pw);
            if r.is_empty() {
                continue;
            }
            let next = match g {
                None => upoly::monic(fld, &r),
                Some(ref h) => upoly::gcd(fld, h, &r),
            };
            if upoly::degree(&next) == Some(0) {
                return;
            }
            g = Some(next);
        }
        match g {
            None => out.extend(0..fld.size()),
            Some(h) => out.extend(upoly::roots(fld, &h).expect("nonzero gcd")),
        }
    }

    fn visit_line<B>(
        &self,
        chart: usize,
        idx: u64,
        coords: &mut Vec<u32>,
        buf: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        self.base_point(chart, idx, coords);
        self.line_points(chart, coords, buf);
        let last = self.nvars - 1;
        for &t in buf.iter() {
            if chart != last {
                coords[last] = t;
            }
            f(coords)?;
        }
        ControlFlow::Continue(())
    }

    /// Sequential visit in canonical order; stops when `f` breaks.
    pub fn for_each<B>(&self, mut f: impl FnMut(&[u32]) -> ControlFlow<B>) -> ControlFlow<B> {
        let mut coords = Vec::new();
        let mut buf = Vec::new();
        for chart in 0..self.nvars {
            for idx in 0..self.lines(chart) {
                self.visit_line(chart, idx, &mut coords, &mut buf, &mut f)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Parallel filter-map; results come back in canonical order.
    pub fn collect<T: Send>(&self, f: impl Fn(&[u32]) -> Option<T> + Sync) -> Vec<T> {
        let mut out = Vec::new();
        for chart in 0..self.nvars {
            let lines = self.lines(chart);
            let chunks = lines.div_ceil(CHUNK);
            let parts: Vec<Vec<T>> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut part = Vec::new();
                    let mut coords = Vec::new();
                    let mut buf = Vec::new();
                    for idx in c * CHUNK..((c + 1) * CHUNK).min(lines) {
                        let _ = self.visit_line::<()>(chart, idx, &mut coords, &mut buf, &mut |p| {
                            if let Some(t) = f(p) {
                                part.push(t);
                            }
                            ControlFlow::Continue(())
                        });
                    }
                    part
                })
                .collect();
            out.extend(parts.into_iter().flatten());
        }
        out
    }

    /// First point in canonical order satisfying `pred`.
    pub fn find_first(&self, pred: impl Fn(&[u32]) -> bool + Sync) -> Option<Vec<u32>> {
        for chart in 0..self.nvars {
            let lines = self.lines(chart);
            let chunks = lines.div_ceil(CHUNK);
            let hit = (0..chunks).into_par_iter().find_map_first(|c| {
                let mut coords = Vec::new();
                let mut buf = Vec::new();
                for idx in c * CHUNK..((c + 1) * CHUNK).min(lines) {
                    let r = self.visit_line(chart, idx, &mut coords, &mut buf, &mut |p| {
                        if pred(p) {
                            ControlFlow::Break(p.to_vec())
                        } else {
                            ControlFlow::Continue(())
                        }
                    });
                    if let ControlFlow::Break(p) = r {
                        return Some(p);
                    }
                }
                None
            });
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}
