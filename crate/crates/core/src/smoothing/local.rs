//! Truncated power series at a point, for the local tests on the surface
//! `div f1`.
//!
//! Coordinates: the chart of `P`, translated so that `P` is the origin, over
//! the residue field `F_{q^e}`. The surface is parametrized by solving
//! `f1 = 0` for one coordinate as a series in the others.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Extension;
use crate::geometry::{jacobian_rank_at, ClosedPoint, SubschemeSpec};
use crate::linalg::Matrix;
use crate::poly::MPoly;

/// Truncation order of all local expansions.
pub const LOCAL_ORDER: u32 = 6;

#[derive(Clone, Debug)]
struct Series {
    nv: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl Series {
    fn zero(nv: usize) -> Self {
        Series {
            nv,
            terms: BTreeMap::new(),
        }
    }

    fn constant(nv: usize, c: u32) -> Self {
        let mut s = Series::zero(nv);
        if c != 0 {
            s.terms.insert(vec![0; nv], c);
        }
        s
    }

    fn var(nv: usize, i: usize) -> Self {
        let mut m = vec![0; nv];
        m[i] = 1;
        let mut s = Series::zero(nv);
        s.terms.insert(m, 1);
        s
    }

    fn add_term(&mut self, ext: &Extension, m: Vec<u32>, c: u32) {
        if c == 0 || m.iter().sum::<u32>() > LOCAL_ORDER {
            return;
        }
        let f = &ext.field;
        let slot = self.terms.entry(m).or_insert(0);
        *slot = f.add(*slot, c);
        self.terms.retain(|_, c| *c != 0);
    }

    fn add(&self, ext: &Extension, other: &Series) -> Series {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(ext, m.clone(), c);
        }
        out
    }

    fn scale(&self, ext: &Extension, c: u32) -> Series {
        let mut out = Series::zero(self.nv);
        for (m, &a) in &self.terms {
            out.add_term(ext, m.clone(), ext.field.mul(a, c));
        }
        out
    }

    fn mul(&self, ext: &Extension, other: &Series) -> Series {
        let f = &ext.field;
        let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for (a, &ca) in &self.terms {
            let da: u32 = a.iter().sum();
            for (b, &cb) in &other.terms {
                if da + b.iter().sum::<u32>() > LOCAL_ORDER {
                    continue;
                }
                let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let slot = acc.entry(m).or_insert(0);
                *slot = f.add(*slot, f.mul(ca, cb));
            }
        }
        acc.retain(|_, c| *c != 0);
        Series { nv: self.nv, terms: acc }
    }

    /// Least total degree of a nonzero term; `None` if zero to the
    /// truncation order.
    fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).min()
    }

    fn coeff(&self, m: &[u32]) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Linear coefficients.
    fn linear(&self) -> Vec<u32> {
        (0..self.nv)
            .map(|i| {
                let mut m = vec![0; self.nv];
                m[i] = 1;
                self.coeff(&m)
            })
            .collect()
    }
}

/// `Σ c_m Π subs_i^{m_i}` with coefficients already in the extension.
fn compose<'a>(ext: &Extension, terms: impl Iterator<Item = (&'a Vec<u32>, u32)>, subs: &[Series]) -> Series {
    let nv = subs[0].nv;
    let mut powers: Vec<Vec<Series>> = subs.iter().map(|s| vec![Series::constant(nv, 1), s.clone()]).collect();
    let mut out = Series::zero(nv);
    for (m, c) in terms {
        let mut t = Series::constant(nv, c);
        for (i, &a) in m.iter().enumerate() {
            if a == 0 {
                continue;
            }
            while powers[i].len() <= a as usize {
                let next = powers[i].last().unwrap().mul(ext, &subs[i]);
                powers[i].push(next);
            }
            t = t.mul(ext, &powers[i][a as usize]);
        }
        out = out.add(ext, &t);
    }
    out
}

/// The surface `f1 = 0` near a point, parametrized by all local
/// coordinates but `t`.
struct Chart {
    ext: Extension,
    /// `x_l = p_l + w_l` for `l != chart`, `x_chart = 1`.
    subs: Vec<Series>,
    f1: Series,
    t: Option<usize>,
    phi: Option<Series>,
}

impl Chart {
    fn new(f1: &MPoly, p: &ClosedPoint) -> Result<Chart> {
        let base = f1.field();
        let rep = p.representative();
        let ext = base.extension(rep.level())?;
        let chart = rep.chart();
        let nvars = rep.nvars();
        let n = nvars - 1;
        let mut subs = Vec::with_capacity(nvars);
        let mut j = 0;
        for (l, &c) in rep.coords().iter().enumerate() {
            if l == chart {
                subs.push(Series::constant(n, 1));
            } else {
                subs.push(Series::constant(n, c).add(&ext, &Series::var(n, j)));
                j += 1;
            }
        }
        let mut ch = Chart {
            ext,
            subs,
            f1: Series::zero(n),
            t: None,
            phi: None,
        };
        ch.f1 = ch.localize(f1);
        ch.eliminate();
        Ok(ch)
    }

    fn localize(&self, f: &MPoly) -> Series {
        let terms: Vec<(Vec<u32>, u32)> = f.raw_terms().map(|(m, c)| (m.clone(), self.ext.embed(c))).collect();
        compose(&self.ext, terms.iter().map(|(m, c)| (m, *c)), &self.subs)
    }

    /// Solves `f1 = 0` for the first coordinate with a nonzero linear
    /// coefficient, one order per iteration.
    fn eliminate(&mut self) {
        let lin = self.f1.linear();
        let Some(t) = lin.iter().position(|&a| a != 0) else {
            return;
        };
        let n = self.f1.nv;
        let fe = &self.ext.field;
        let inv = fe.inv(lin[t]);
        let mut phi = Series::zero(n - 1);
        for _ in 0..=LOCAL_ORDER {
            let val = self.restrict_with(&self.f1, t, &phi);
            phi = phi.add(&self.ext, &val.scale(&self.ext, fe.neg(inv)));
        }
        self.t = Some(t);
        self.phi = Some(phi);
    }

    fn restrict_with(&self, g: &Series, t: usize, phi: &Series) -> Series {
        let m = phi.nv;
        let subs: Vec<Series> = (0..g.nv)
            .map(|i| match i.cmp(&t) {
                std::cmp::Ordering::Less => Series::var(m, i),
                std::cmp::Ordering::Equal => phi.clone(),
                std::cmp::Ordering::Greater => Series::var(m, i - 1),
            })
            .collect();
        compose(&self.ext, g.terms.iter().map(|(m, &c)| (m, c)), &subs)
    }

    /// `f` restricted to the surface, in the remaining coordinates.
    fn on_surface(&self, f: &MPoly) -> Option<Series> {
        let (t, phi) = (self.t?, self.phi.as_ref()?);
        Some(self.restrict_with(&self.localize(f), t, phi))
    }
}

fn check_on(f: &MPoly, p: &ClosedPoint) -> Result<()> {
    let ext = f.field().extension(p.degree())?;
    if f.eval_codes(&ext, p.representative().coords()) != 0 {
        return Err(Error::Precondition(format!(
            "{} does not vanish at {}",
            f,
            p.format(f.field())
        )));
    }
    Ok(())
}

/// Whether the residual curve of `Z` in `V(f1, f2)` is smooth at `P`
/// because `Z ∪ Z'` has an ordinary node there with `Z` as one branch.
///
/// Requires `P` on `V(f1, f2) ∩ Z`, `Z` smooth at `P` and `div f1` smooth
/// at `P`. On the surface the lowest part of `f2` must be a quadratic form
/// with two distinct linear factors, one of them cutting out the tangent
/// line of `Z`. `false` is inconclusive.
pub fn local_node_test(f1: &MPoly, f2: &MPoly, z: &SubschemeSpec, p: &ClosedPoint) -> Result<bool> {
    let base = f1.field();
    let n = p.nvars() - 1;
    if n != 3 {
        return Err(Error::Precondition("the node test works in P^3".into()));
    }
    for f in [f1, f2].into_iter().chain(&z.generators) {
        check_on(f, p)?;
    }
    if z.generators.is_empty() {
        return Err(Error::Precondition("Z needs generators".into()));
    }
    if jacobian_rank_at(base, &z.generators, p.representative())? != n - 1 {
        return Err(Error::Precondition(format!("Z is singular at {}", p.format(base))));
    }
    if jacobian_rank_at(base, std::slice::from_ref(f1), p.representative())? != 1 {
        return Err(Error::Precondition(format!("div f1 is singular at {}", p.format(base))));
    }
    let ch = Chart::new(f1, p)?;
    let fe = &ch.ext.field;
    let h = ch.on_surface(f2).expect("surface is smooth at P");
    if h.order() != Some(2) {
        return Ok(false);
    }
    let a = h.coeff(&[2, 0]);
    let b = h.coeff(&[1, 1]);
    let c = h.coeff(&[0, 2]);
    let distinct = if fe.p() == 2 {
        b != 0
    } else {
        fe.sub(fe.mul(b, b), fe.mul_int(fe.mul(a, c), 4)) != 0
    };
    if !distinct {
        return Ok(false);
    }
    // Tangent direction of Z in local coordinates.
    let rows: Vec<Vec<u32>> = z.generators.iter().map(|g| ch.localize(g).linear()).collect();
    let kernel = Matrix::from_rows(fe, n, rows).kernel();
    let [w] = kernel.as_slice() else {
        return Ok(false);
    };
    let t = ch.t.expect("eliminated");
    let v: Vec<u32> = (0..n).filter(|&i| i != t).map(|i| w[i]).collect();
    let q = fe.add(
        fe.add(fe.mul(a, fe.mul(v[0], v[0])), fe.mul(b, fe.mul(v[0], v[1]))),
        fe.mul(c, fe.mul(v[1], v[1])),
    );
    Ok(q == 0)
}

/// Whether the residual of `Z` in `V(f1, f2)` misses `P`: on the smooth
/// surface `div f1` the order of `f2` equals the order of the local
/// equation of `Z`. `None` when `div f1` is singular at `P` or the orders
/// exceed the truncation.
pub(crate) fn residual_avoids(f1: &MPoly, f2: &MPoly, z: &SubschemeSpec, p: &ClosedPoint) -> Result<Option<bool>> {
    for f in [f1, f2] {
        check_on(f, p)?;
    }
    let ch = Chart::new(f1, p)?;
    let Some(h) = ch.on_surface(f2) else {
        return Ok(None);
    };
    let z_order = z
        .generators
        .iter()
        .filter_map(|g| ch.on_surface(g).and_then(|s| s.order()))
        .min();
    match (h.order(), z_order) {
        (_, None) => Ok(None),
        (None, Some(_)) => Ok(None),
        (Some(a), Some(b)) => Ok(Some(a == b)),
    }
}
