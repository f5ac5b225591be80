//! Exhaustive tallies over a whole section space.
//!
//! The kernel-union engine walks, for every closed point `x`, the kernel of
//! the jet map at `x` and records `deg x` as a candidate least singular
//! degree for each section in it. Its cost is `Σ_x q^{dim - rank_x}`, which
//! is a small multiple of the space size.

use std::sync::atomic::{AtomicU64, AtomicU8, Ordering};

use rayon::prelude::*;

use crate::error::Result;
use crate::field::Extension;
use crate::geometry::ClosedPoint;
use crate::linalg::Matrix;
use crate::poly::{monomial_basis, Monomial};
use crate::sections::{point_conditions_with, LinearSystem};

pub(crate) const NONE: u8 = u8::MAX;

/// Per-section least singular degree (`NONE` when smooth up to the scan
/// bound) and a bitset of sections vanishing somewhere on `S`.
pub(crate) struct Marks {
    pub least: Vec<u8>,
    pub s_hit: Vec<u64>,
}

impl Marks {
    pub fn hit(&self, idx: u64) -> bool {
        self.s_hit[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }
}

pub(crate) struct Context<'a> {
    pub system: &'a LinearSystem,
    pub monos: Vec<Monomial>,
    pub exts: Vec<Extension>,
}

impl<'a> Context<'a> {
    pub fn new(system: &'a LinearSystem, max_level: u32) -> Result<Self> {
        let exts = (1..=max_level.max(1))
            .map(|e| system.field().extension(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Context {
            system,
            monos: monomial_basis(system.nvars(), system.degree()),
            exts,
        })
    }

    pub fn conditions(&self, x: &ClosedPoint, derivs: bool) -> Vec<Vec<u32>> {
        let ext = &self.exts[x.degree() as usize - 1];
        point_conditions_with(self.system, &self.monos, ext, x.representative(), derivs)
    }
}

pub(crate) fn kernel_union(
    ctx: &Context<'_>,
    points: &[ClosedPoint],
    avoid: &[ClosedPoint],
    total: u64,
) -> Marks {
    let p = ctx.system.field().p();
    let least: Vec<AtomicU8> = (0..total).map(|_| AtomicU8::new(NONE)).collect();
    let s_hit: Vec<AtomicU64> = (0..total.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    let width = ctx.system.dim() * ctx.system.field().k() as usize;

    points.par_iter().for_each(|x| {
        let e = x.degree() as u8;
        let rows = ctx.conditions(x, true);
        for_each_kernel_index(p, width, &rows, |idx| {
            least[idx as usize].fetch_min(e, Ordering::Relaxed);
        });
    });
    avoid.par_iter().for_each(|x| {
        let rows = ctx.conditions(x, false);
        for_each_kernel_index(p, width, &rows, |idx| {
            s_hit[(idx / 64) as usize].fetch_or(1 << (idx % 64), Ordering::Relaxed);
        });
    });
    Marks {
        least: least.into_iter().map(AtomicU8::into_inner).collect(),
        s_hit: s_hit.into_iter().map(AtomicU64::into_inner).collect(),
    }
}

/// Calls `visit` with the counter of every vector in the right kernel of
/// `rows` (an `F_p`-matrix with `width` columns).
pub(crate) fn for_each_kernel_index(p: u32, width: usize, rows: &[Vec<u32>], mut visit: impl FnMut(u64)) {
    if p == 2 && width <= 64 {
        let masks: Vec<u64> = rows
            .iter()
            .map(|r| r.iter().enumerate().fold(0u64, |m, (i, &b)| m | ((b as u64 & 1) << i)))
            .collect();
        let basis = kernel_f2(&masks, width);
        let mut idx = 0u64;
        visit(0);
        for i in 1u64..(1u64 << basis.len()) {
            idx ^= basis[i.trailing_zeros() as usize];
            visit(idx);
        }
        return;
    }
    let fp = crate::field::make_field(p, 1).expect("prime field");
    let kernel = Matrix::from_rows(&fp, width, rows.to_vec()).kernel();
    let pw: Vec<u64> = (0..width).map(|m| (p as u64).pow(m as u32)).collect();
    let sparse: Vec<Vec<(usize, u32)>> = kernel
        .iter()
        .map(|v| v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(m, &c)| (m, c)).collect())
        .collect();
    let mut v = vec![0u32; width];
    let mut digits = vec![0u32; sparse.len()];
    let mut idx = 0u64;
    visit(0);
    'outer: loop {
        let mut j = 0;
        loop {
            if j == sparse.len() {
                break 'outer;
            }
            for &(m, c) in &sparse[j] {
                let old = v[m];
                let new = (old + c) % p;
                v[m] = new;
                idx = idx - old as u64 * pw[m] + new as u64 * pw[m];
            }
            digits[j] += 1;
            if digits[j] < p {
                break;
            }
            // p additions of the same vector cancel out.
            digits[j] = 0;
            j += 1;
        }
        visit(idx);
    }
}

/// Kernel basis of a GF(2) matrix given as row bitmasks.
pub(crate) fn kernel_f2(rows: &[u64], width: usize) -> Vec<u64> {
    let mut m: Vec<u64> = rows.iter().copied().filter(|&r| r != 0).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let bit = 1u64 << c;
        let Some(pr) = (r..m.len()).find(|&i| m[i] & bit != 0) else {
            continue;
        };
        m.swap(r, pr);
        let piv = m[r];
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= piv;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    let mut is_pivot = 0u64;
    for &c in &pivots {
        is_pivot |= 1 << c;
    }
    (0..width)
        .filter(|&f| is_pivot >> f & 1 == 0)
        .map(|f| {
            let mut v = 1u64 << f;
            for (row, &c) in m.iter().zip(&pivots) {
                if row >> f & 1 == 1 {
                    v |= 1 << c;
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn f2_kernel_matches_generic() {
        let f2 = make_field(2, 1).unwrap();
        let rows = vec![vec![1, 1, 0, 1, 0], vec![0, 1, 1, 0, 1], vec![1, 0, 1, 1, 1]];
        let mut a: Vec<u64> = Vec::new();
        for_each_kernel_index(2, 5, &rows, |i| a.push(i));
        a.sort();
        let mut b: Vec<u64> = Vec::new();
        let m = Matrix::from_rows(&f2, 5, rows.clone());
        for idx in 0u64..32 {
            let v: Vec<u32> = (0..5).map(|i| (idx >> i & 1) as u32).collect();
            if m.mul_vec(&v).iter().all(|&x| x == 0) {
                b.push(idx);
            }
        }
        assert_eq!(a, b);
    }

    #[test]
    fn odd_kernel_enumeration_is_complete() {
        let f3 = make_field(3, 1).unwrap();
        let rows = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]];
        let mut a: Vec<u64> = Vec::new();
        for_each_kernel_index(3, 4, &rows, |i| a.push(i));
        a.sort();
        let m = Matrix::from_rows(&f3, 4, rows);
        let b: Vec<u64> = (0u64..81)
            .filter(|&idx| {
                let v: Vec<u32> = (0..4).map(|i| (idx / 3u64.pow(i) % 3) as u32).collect();
                m.mul_vec(&v).iter().all(|&x| x == 0)
            })
            .collect();
        assert_eq!(a, b);
    }
}
