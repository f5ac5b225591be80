//! Spaces of sections: `H^0(O(d))`, graded ideal pieces, forms vanishing on
//! a reduced subscheme, and jet maps onto finite subschemes.
//!
//! A section is a coefficient vector over the system's basis. Counters
//! index sections base `q` with basis element 0 least significant.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{make_field, Extension, Field};
use crate::geometry::{closed_points_of_degree, ClosedPoint, PointSpec, ProjPoint, SubschemeSpec};
use crate::linalg::{EchelonBasis, Matrix};
use crate::poly::{monomial_basis, MPoly, Monomial};

#[derive(Clone, Debug)]
pub struct LinearSystem {
    nvars: usize,
    degree: u32,
    basis: Matrix,
    pub label: String,
}

impl LinearSystem {
    /// Rows must be independent coefficient vectors of degree-`degree` forms.
    pub fn from_basis(field: &Field, nvars: usize, degree: u32, rows: Vec<Vec<u32>>, label: impl Into<String>) -> Self {
        let cols = crate::poly::monomial_count(nvars, degree);
        LinearSystem {
            nvars,
            degree,
            basis: Matrix::from_rows(field, cols, rows),
            label: label.into(),
        }
    }

    /// Reduced echelon basis of the span of arbitrary coefficient vectors.
    pub fn spanned_by(field: &Field, nvars: usize, degree: u32, rows: Vec<Vec<u32>>, label: impl Into<String>) -> Self {
        let cols = crate::poly::monomial_count(nvars, degree);
        let mut eb = EchelonBasis::new(field, cols);
        for r in rows {
            eb.insert(r);
            if eb.is_full() {
                break;
            }
        }
        LinearSystem {
            nvars,
            degree,
            basis: eb.into_matrix(),
            label: label.into(),
        }
    }

    pub fn zero(field: &Field, nvars: usize, degree: u32, label: impl Into<String>) -> Self {
        LinearSystem::from_basis(field, nvars, degree, Vec::new(), label)
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_polys(&self) -> Vec<MPoly> {
        self.basis
            .rows()
            .map(|r| MPoly::from_coeffs(self.field(), self.nvars, self.degree, r))
            .collect()
    }

    /// `q^dim`, or `None` on overflow.
    pub fn cardinality(&self) -> Option<u64> {
        crate::budget::checked_pow(self.field().size() as u64, self.dim())
    }

    /// Basis coordinates of the section with the given counter.
    pub fn counter_coords(&self, mut idx: u64) -> Vec<u32> {
        let q = self.field().size() as u64;
        (0..self.dim())
            .map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            })
            .collect()
    }

    pub fn combine(&self, coords: &[u32]) -> MPoly {
        let f = self.field();
        let mut v = vec![0u32; self.basis.ncols()];
        for (row, &c) in self.basis.rows().zip(coords) {
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
        }
        MPoly::from_coeffs(f, self.nvars, self.degree, &v)
    }

    pub fn section(&self, idx: u64) -> MPoly {
        self.combine(&self.counter_coords(idx))
    }

    pub fn contains(&self, f: &MPoly) -> bool {
        if f.degree() != self.degree || f.nvars() != self.nvars {
            return false;
        }
        let mut m = self.basis.clone();
        m.push_row(&f.coeffs());
        m.rank() == self.dim()
    }

    /// Same row space (both bases are kept in reduced echelon form).
    pub fn same_span(&self, other: &LinearSystem) -> bool {
        if self.dim() != other.dim() || self.degree != other.degree {
            return false;
        }
        self.basis.row_space().rows().eq(other.basis.row_space().rows())
    }
}

/// `H^0(P^n, O(d))`: every monomial.
pub fn full_system(field: &Field, n: usize, d: u32) -> LinearSystem {
    let nvars = n + 1;
    let m = crate::poly::monomial_count(nvars, d);
    let rows = (0..m)
        .map(|i| {
            let mut r = vec![0u32; m];
            r[i] = 1;
            r
        })
        .collect();
    LinearSystem::from_basis(field, nvars, d, rows, format!("H0(O({d}))"))
}

/// `H^0(P^n, O(m) ⊗ O(d))`, zero when `m + d < 0`.
pub fn twisted_system(field: &Field, n: usize, m: i64, d: u32) -> LinearSystem {
    let total = m + d as i64;
    if total < 0 {
        LinearSystem::zero(field, n + 1, 0, format!("H0(O({total}))"))
    } else {
        full_system(field, n, total as u32)
    }
}

/// The constant `c` for `P^n` with twist `O(m)`: for `d >= c` the twisted
/// system is nonzero, has no higher cohomology, and multiplication by
/// `H^0(O(1))` onto it is surjective.
pub fn twist_constant(_n: usize, m: i64) -> u32 {
    (-m).max(0) as u32
}

/// Span of `{ mono * g : deg mono = d - deg g }`.
pub fn graded_ideal_piece(gens: &[MPoly], d: u32) -> Result<LinearSystem> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Invalid("no generators".into()))?;
    let field = first.field().clone();
    let nvars = first.nvars();
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| g.degree() <= d && !g.is_zero()) {
        for m in monomial_basis(nvars, d - g.degree()) {
            rows.push(MPoly::monomial(&field, m, 1).mul(g)?.coeffs());
        }
    }
    Ok(LinearSystem::spanned_by(&field, nvars, d, rows, format!("I({d})")))
}

/// Per-point data for evaluating forms of one degree and their partials.
struct MonomialTable {
    values: Vec<u32>,
    partials: Vec<Vec<u32>>,
}

fn monomial_table(ext: &Extension, monos: &[Monomial], coords: &[u32], degree: u32, chart: usize, derivs: bool) -> MonomialTable {
    let f = &ext.field;
    let nvars = coords.len();
    let pw: Vec<Vec<u32>> = coords
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(degree as usize + 1);
            let mut acc = 1;
            for _ in 0..=degree {
                row.push(acc);
                acc = f.mul(acc, x);
            }
            row
        })
        .collect();
    let eval = |m: &[u32]| -> u32 {
        let mut t = 1;
        for (v, &a) in m.iter().enumerate() {
            if a > 0 {
                t = f.mul(t, pw[v][a as usize]);
            }
        }
        t
    };
    let values = monos.iter().map(|m| eval(m)).collect();
    let mut partials = Vec::new();
    if derivs {
        for l in (0..nvars).filter(|&l| l != chart) {
            partials.push(
                monos
                    .iter()
                    .map(|m| {
                        if m[l] == 0 {
                            return 0;
                        }
                        let c = ext.base.mul_int(1, m[l] as u64);
                        if c == 0 {
                            return 0;
                        }
                        let mut mm = m.clone();
                        mm[l] -= 1;
                        f.mul(ext.embed(c), eval(&mm))
                    })
                    .collect(),
            );
        }
    }
    MonomialTable { values, partials }
}

/// Conditions at one geometric point, flattened to `F_p`: the rows are the
/// `F_p`-digits of the value (and chart partials) in `F_{q^e}`, the columns
/// run over (basis index, `F_p`-digit of the coefficient).
pub fn point_conditions(system: &LinearSystem, p: &ProjPoint, derivs: bool) -> Result<Vec<Vec<u32>>> {
    let ext = system.field().extension(p.level())?;
    let monos = monomial_basis(system.nvars, system.degree);
    Ok(point_conditions_with(system, &monos, &ext, p, derivs))
}

/// [`point_conditions`] with the monomial list and extension supplied.
pub(crate) fn point_conditions_with(
    system: &LinearSystem,
    monos: &[Monomial],
    ext: &Extension,
    p: &ProjPoint,
    derivs: bool,
) -> Vec<Vec<u32>> {
    let base = system.field();
    let table = monomial_table(ext, monos, p.coords(), system.degree, p.chart(), derivs);
    let fe = &ext.field;
    let k = base.k() as usize;
    let kk = fe.k() as usize;
    let nconds = 1 + table.partials.len();
    let ncols = system.dim() * k;
    let mut rows = vec![vec![0u32; ncols]; nconds * kk];
    let radix: Vec<u32> = (0..k).map(|j| ext.embed(base.radix(j as u32))).collect();
    for (i, brow) in system.basis.rows().enumerate() {
        let mut vals = vec![0u32; nconds];
        for (mi, &c) in brow.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let ce = ext.embed(c);
            vals[0] = fe.add(vals[0], fe.mul(ce, table.values[mi]));
            for (ci, pr) in table.partials.iter().enumerate() {
                vals[ci + 1] = fe.add(vals[ci + 1], fe.mul(ce, pr[mi]));
            }
        }
        for (j, &rj) in radix.iter().enumerate() {
            for (ci, &v) in vals.iter().enumerate() {
                let digits = fe.digits(fe.mul(rj, v));
                for (t, &dg) in digits.iter().enumerate() {
                    rows[ci * kk + t][i * k + j] = dg;
                }
            }
        }
    }
    rows
}

/// Values of the basis sections (and their chart partials) at `p`, as
/// `F_{q^e}` codes: `out[i][0]` is the value of basis element `i`.
pub(crate) fn basis_jets(system: &LinearSystem, ext: &Extension, p: &ProjPoint, derivs: bool) -> Vec<Vec<u32>> {
    let monos = monomial_basis(system.nvars, system.degree);
    let table = monomial_table(ext, &monos, p.coords(), system.degree, p.chart(), derivs);
    let fe = &ext.field;
    system
        .basis
        .rows()
        .map(|brow| {
            let mut vals = vec![0u32; 1 + table.partials.len()];
            for (mi, &c) in brow.iter().enumerate() {
                if c != 0 {
                    let ce = ext.embed(c);
                    vals[0] = fe.add(vals[0], fe.mul(ce, table.values[mi]));
                    for (ci, pr) in table.partials.iter().enumerate() {
                        vals[ci + 1] = fe.add(vals[ci + 1], fe.mul(ce, pr[mi]));
                    }
                }
            }
            vals
        })
        .collect()
}

/// Restriction of a linear system to a finite set of (possibly first-order)
/// closed points, as an `F_p`-matrix.
#[derive(Clone, Debug)]
pub struct JetMap {
    pub points: Vec<PointSpec>,
    pub matrix: Matrix,
    /// Row ranges per point, in `points` order.
    pub row_counts: Vec<usize>,
    pub source_dim: usize,
}

impl JetMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target_dim()
    }
}

pub fn jet_map(system: &LinearSystem, points: &[ClosedPoint], include_derivatives: bool) -> Result<JetMap> {
    let specs: Vec<PointSpec> = points
        .iter()
        .map(|p| PointSpec {
            point: p.clone(),
            first_order: include_derivatives,
        })
        .collect();
    jet_map_specs(system, &specs)
}

pub fn jet_map_specs(system: &LinearSystem, points: &[PointSpec]) -> Result<JetMap> {
    let fp = make_field(system.field().p(), 1)?;
    let ncols = system.dim() * system.field().k() as usize;
    let mut matrix = Matrix::zeros(&fp, 0, ncols);
    let mut row_counts = Vec::new();
    for s in points {
        if s.point.nvars() != system.nvars {
            return Err(Error::Invalid("point and system live in different spaces".into()));
        }
        let rows = point_conditions(system, s.point.representative(), s.first_order)?;
        row_counts.push(rows.len());
        for r in rows {
            matrix.push_row(&r);
        }
    }
    Ok(JetMap {
        points: points.to_vec(),
        matrix,
        row_counts,
        source_dim: ncols,
    })
}

/// Converts an `F_p`-basis of an `F_q`-subspace of `F_q^dim` (flattened
/// digit-wise) into an `F_q`-basis.
pub(crate) fn fp_to_fq_basis(field: &Field, dim: usize, fp_vectors: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let k = field.k() as usize;
    let mut eb = EchelonBasis::new(field, dim);
    let mut out = Vec::new();
    for v in fp_vectors {
        let w: Vec<u32> = (0..dim)
            .map(|i| field.from_digits(&v[i * k..(i + 1) * k]).expect("digits below p"))
            .collect();
        if eb.insert(w.clone()) {
            out.push(w);
        }
        if out.len() * k == fp_vectors.len() {
            break;
        }
    }
    out
}

/// Smallest `d <= d_max` for which `H^0(O(m + d))` surjects onto the
/// sections of `S`.
pub fn surjectivity_onset(field: &Field, n: usize, points: &[PointSpec], m: i64, d_max: u32) -> Result<Option<u32>> {
    for d in 0..=d_max {
        let sys = twisted_system(field, n, m, d);
        if points.is_empty() {
            return Ok(Some(d));
        }
        if sys.dim() == 0 {
            continue;
        }
        if jet_map_specs(&sys, points)?.is_surjective() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// `h^0(S, O_S) = Σ deg x (1 + n [first order])`.
pub fn finite_length(points: &[PointSpec]) -> u64 {
    points.iter().map(|p| p.length()).sum()
}

#[derive(Clone, Debug)]
pub struct VanishingSystem {
    pub system: LinearSystem,
    /// Point degree bound that was requested.
    pub bound: u32,
    /// Highest point degree actually imposed.
    pub scanned: u32,
    /// True when the result is known to be exact: either it met the span of
    /// the generator multiples, or the default bound was reached.
    pub certified: bool,
}

/// `d * Σ deg(gens) + 1`.
pub fn default_point_bound(z: &SubschemeSpec, d: u32) -> u32 {
    d * z.generators.iter().map(|g| g.degree()).sum::<u32>() + 1
}

/// Degree-`d` forms vanishing at every closed point of `Z` of degree
/// `<= bound`.
///
/// Multiples of the generators always vanish on `Z`, so once the kernel has
/// shrunk to their span no further point can cut it down; the scan stops
/// there.
pub fn vanishing_system(field: &Field, z: &SubschemeSpec, d: u32, bound: Option<u32>, budget: &Budget) -> Result<VanishingSystem> {
    let n = z.nvars - 1;
    let default = default_point_bound(z, d);
    let bound_used = bound.unwrap_or(default);
    let mut sys = full_system(field, n, d);
    sys.label = format!("H0(I_{}({d}))", z.label);
    let floor = if z.generators.is_empty() {
        0
    } else {
        graded_ideal_piece(&z.generators, d)?.dim()
    };
    let mut scanned = 0;
    for pt in &z.points {
        sys = impose(&sys, pt.point.representative(), pt.first_order)?;
    }
    if !z.generators.is_empty() {
        for e in 1..=bound_used {
            if sys.dim() <= floor {
                break;
            }
            for pt in closed_points_of_degree(field, z.nvars, &z.generators, e, budget)? {
                sys = impose(&sys, pt.representative(), false)?;
                if sys.dim() <= floor {
                    break;
                }
            }
            scanned = e;
        }
    }
    let met_floor = !z.generators.is_empty() && sys.dim() == floor;
    let certified = met_floor || z.generators.is_empty() || bound_used >= default;
    Ok(VanishingSystem {
        system: sys,
        bound: bound_used,
        scanned,
        certified,
    })
}

/// Subsystem of sections vanishing at `p` (to first order if requested).
pub fn impose(sys: &LinearSystem, p: &ProjPoint, derivs: bool) -> Result<LinearSystem> {
    if sys.dim() == 0 {
        return Ok(sys.clone());
    }
    let field = sys.field().clone();
    let fp = make_field(field.p(), 1)?;
    let rows = point_conditions(sys, p, derivs)?;
    let cond = Matrix::from_rows(&fp, sys.dim() * field.k() as usize, rows);
    let kernel = cond.kernel();
    let combos = fp_to_fq_basis(&field, sys.dim(), &kernel);
    let new_rows: Vec<Vec<u32>> = combos.iter().map(|c| sys.combine(c).coeffs()).collect();
    Ok(LinearSystem::spanned_by(&field, sys.nvars, sys.degree, new_rows, sys.label.clone()))
}
