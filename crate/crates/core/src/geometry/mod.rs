//! Points of `P^n` over extensions of `F_q`, closed points, and the Jacobian
//! criterion.
//!
//! A projective point is stored normalized: its first nonzero coordinate is
//! 1. Coordinates are codes of `F_{q^e}` where `e` is the point's level.

pub(crate) mod solver;
pub mod specfile;

use std::cmp::Ordering;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{Extension, Field, FieldElem};
use crate::linalg::Matrix;
use crate::poly::MPoly;

pub(crate) use solver::Solver;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjPoint {
    level: u32,
    coords: Vec<u32>,
}

impl ProjPoint {
    /// Normalizes raw coordinates from `F_{q^level}`; `None` for the zero
    /// vector.
    pub fn normalize(ext: &Extension, coords: &[u32]) -> Option<ProjPoint> {
        let j = coords.iter().position(|&c| c != 0)?;
        let inv = ext.field.inv(coords[j]);
        Some(ProjPoint {
            level: ext.e,
            coords: coords.iter().map(|&c| ext.field.mul(c, inv)).collect(),
        })
    }

    /// Wraps coordinates already known to be normalized.
    pub(crate) fn from_normalized(level: u32, coords: Vec<u32>) -> ProjPoint {
        debug_assert_eq!(coords.iter().find(|&&c| c != 0), Some(&1));
        ProjPoint { level, coords }
    }

    pub fn from_elems(base: &Field, coords: &[FieldElem]) -> Result<ProjPoint> {
        let size = coords
            .first()
            .ok_or_else(|| Error::Invalid("point without coordinates".into()))?
            .field_size();
        if coords.iter().any(|c| c.field_size() != size) {
            return Err(Error::Invalid("coordinates from different fields".into()));
        }
        let e = crate::poly::level_of(base, size)?;
        let ext = base.extension(e)?;
        let raw: Vec<u32> = coords.iter().map(|c| c.code()).collect();
        ProjPoint::normalize(&ext, &raw).ok_or_else(|| Error::Invalid("all coordinates are zero".into()))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    /// Index of the first nonzero coordinate.
    pub fn chart(&self) -> usize {
        self.coords.iter().position(|&c| c != 0).unwrap()
    }

    /// Coordinate-wise `c -> c^q`.
    pub fn frobenius(&self, ext: &Extension) -> ProjPoint {
        ProjPoint {
            level: self.level,
            coords: self.coords.iter().map(|&c| ext.frob(c)).collect(),
        }
    }

    /// The same point viewed at level `e'`, a multiple of its field of
    /// definition.
    pub fn lift(&self, from: &Extension, to: &Extension) -> Result<ProjPoint> {
        let emb = to.field.embedding_from(&from.field)?;
        Ok(ProjPoint {
            level: to.e,
            coords: self.coords.iter().map(|&c| emb[c as usize]).collect(),
        })
    }

    pub fn format(&self, ext: &Extension) -> String {
        let parts: Vec<String> = self.coords.iter().map(|&c| ext.field.format_code(c)).collect();
        format!("[{}]", parts.join(":"))
    }
}

/// Degree of the smallest field containing all coordinates, i.e. the size of
/// the Frobenius orbit.
pub fn exact_degree(ext: &Extension, coords: &[u32]) -> u32 {
    let mut cur: Vec<u32> = coords.to_vec();
    for i in 1..=ext.e {
        for c in cur.iter_mut() {
            *c = ext.frob(*c);
        }
        if cur == coords {
            return i;
        }
    }
    unreachable!("Frobenius has order dividing the level")
}

/// Orbit of a point of exact degree `e`, starting with the point itself.
fn orbit_of(ext: &Extension, coords: &[u32], e: u32) -> Vec<Vec<u32>> {
    let mut out = vec![coords.to_vec()];
    for _ in 1..e {
        let next = out.last().unwrap().iter().map(|&c| ext.frob(c)).collect();
        out.push(next);
    }
    out
}

/// A Frobenius orbit of geometric points, represented by its
/// lexicographically least member at level equal to its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosedPoint {
    rep: ProjPoint,
}

impl ClosedPoint {
    /// Closed point through a geometric point; the level is reduced to the
    /// exact degree.
    pub fn from_point(base: &Field, p: &ProjPoint) -> Result<ClosedPoint> {
        let ext = base.extension(p.level)?;
        let e = exact_degree(&ext, &p.coords);
        let coords = if e == p.level {
            p.coords.clone()
        } else {
            let small = base.extension(e)?;
            let emb = ext.field.embedding_from(&small.field)?;
            p.coords
                .iter()
                .map(|&c| emb.iter().position(|&x| x == c).unwrap() as u32)
                .collect()
        };
        let small = base.extension(e)?;
        let rep = orbit_of(&small, &coords, e).into_iter().min().unwrap();
        Ok(ClosedPoint {
            rep: ProjPoint { level: e, coords: rep },
        })
    }

    pub(crate) fn from_rep(rep: ProjPoint) -> ClosedPoint {
        ClosedPoint { rep }
    }

    pub fn representative(&self) -> &ProjPoint {
        &self.rep
    }

    pub fn degree(&self) -> u32 {
        self.rep.level
    }

    pub fn nvars(&self) -> usize {
        self.rep.nvars()
    }

    /// All conjugates, in Frobenius order starting at the representative.
    pub fn orbit(&self, base: &Field) -> Result<Vec<ProjPoint>> {
        let ext = base.extension(self.degree())?;
        Ok(orbit_of(&ext, &self.rep.coords, self.degree())
            .into_iter()
            .map(|coords| ProjPoint {
                level: self.rep.level,
                coords,
            })
            .collect())
    }

    /// `#κ(x) = q^deg`.
    pub fn residue_size(&self, base: &Field) -> u64 {
        (base.size() as u64).pow(self.degree())
    }

    pub fn format(&self, base: &Field) -> String {
        let ext = base.extension(self.degree()).expect("level already validated");
        self.rep.format(&ext)
    }
}

impl PartialOrd for ClosedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then chart, then coordinates.
impl Ord for ClosedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.rep.chart(), &self.rep.coords).cmp(&(
            other.degree(),
            other.rep.chart(),
            &other.rep.coords,
        ))
    }
}

/// An explicit closed point, optionally with its first-order neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSpec {
    pub point: ClosedPoint,
    pub first_order: bool,
}

impl PointSpec {
    /// `h^0` of the structure sheaf: `deg x`, or `(1 + n) deg x` for a
    /// first-order point.
    pub fn length(&self) -> u64 {
        let n = self.point.nvars() as u64 - 1;
        self.point.degree() as u64 * if self.first_order { 1 + n } else { 1 }
    }
}

/// A closed subset of `P^n`: the common zeros of `generators` (when there
/// are any) together with finitely many explicit points.
///
/// With no generators and no points the subset is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubschemeSpec {
    pub label: String,
    pub nvars: usize,
    pub generators: Vec<MPoly>,
    pub points: Vec<PointSpec>,
    pub dim: Option<i64>,
}

impl SubschemeSpec {
    pub fn new(label: impl Into<String>, nvars: usize, generators: Vec<MPoly>) -> Result<Self> {
        if generators.iter().any(|g| g.nvars() != nvars) {
            return Err(Error::Invalid("generator with the wrong number of variables".into()));
        }
        Ok(SubschemeSpec {
            label: label.into(),
            nvars,
            generators,
            points: Vec::new(),
            dim: None,
        })
    }

    pub fn empty(label: impl Into<String>, nvars: usize) -> Self {
        SubschemeSpec {
            label: label.into(),
            nvars,
            generators: Vec::new(),
            points: Vec::new(),
            dim: None,
        }
    }

    /// A finite subscheme made of explicit points.
    pub fn from_points(label: impl Into<String>, nvars: usize, points: Vec<PointSpec>) -> Result<Self> {
        if points.iter().any(|p| p.point.nvars() != nvars) {
            return Err(Error::Invalid("point with the wrong number of coordinates".into()));
        }
        Ok(SubschemeSpec {
            label: label.into(),
            nvars,
            generators: Vec::new(),
            points,
            dim: Some(0),
        })
    }

    pub fn with_dim(mut self, dim: i64) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty() && self.points.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.degree()).max().unwrap_or(0)
    }

    pub fn closed_point_list(&self) -> Vec<ClosedPoint> {
        self.points.iter().map(|p| p.point.clone()).collect()
    }

    pub fn contains(&self, base: &Field, p: &ProjPoint) -> Result<bool> {
        let ext = base.extension(p.level())?;
        self.contains_coords(base, &ext, p.coords())
    }

    pub(crate) fn contains_coords(&self, base: &Field, ext: &Extension, coords: &[u32]) -> Result<bool> {
        if !self.generators.is_empty() && self.generators.iter().all(|g| g.eval_codes(ext, coords) == 0) {
            return Ok(true);
        }
        if self.points.is_empty() {
            return Ok(false);
        }
        let cp = ClosedPoint::from_point(base, &ProjPoint::from_normalized(ext.e, coords.to_vec()))?;
        Ok(self.points.iter().any(|s| s.point == cp))
    }
}

fn check_forms(forms: &[MPoly], nvars: usize) -> Result<()> {
    if nvars < 2 {
        return Err(Error::Invalid("projective space needs n >= 1".into()));
    }
    if forms.iter().any(|f| f.nvars() != nvars) {
        return Err(Error::Invalid("form with the wrong number of variables".into()));
    }
    Ok(())
}

/// All points of `P^n(F_{q^e})`, chart by chart, each chart in base-`q^e`
/// counter order with the last coordinate least significant.
pub fn enumerate_points(base: &Field, n: usize, e: u32, budget: &Budget) -> Result<Vec<ProjPoint>> {
    budget.check_level(e)?;
    let q = base.size() as u64;
    let total = crate::budget::checked_pow(q, e as usize * n)
        .filter(|&t| t <= 1 << 28)
        .ok_or_else(|| Error::Budget(format!("P^{n} over F_{q}^{e} is too large to list")))?;
    let ext = base.extension(e)?;
    let s = Solver::new(&[], &ext, n + 1);
    let mut out = Vec::with_capacity(total as usize * 2);
    let _ = s.for_each::<()>(|p| {
        out.push(ProjPoint::from_normalized(e, p.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Points of `V(forms)` over `F_{q^e}` in canonical order.
pub fn points_on(base: &Field, nvars: usize, forms: &[MPoly], e: u32, budget: &Budget) -> Result<Vec<ProjPoint>> {
    check_forms(forms, nvars)?;
    budget.check_level(e)?;
    let ext = base.extension(e)?;
    Ok(Solver::new(forms, &ext, nvars).collect(|p| Some(ProjPoint::from_normalized(e, p.to_vec()))))
}

/// `N_e = #V(forms)(F_{q^e})` for `e = 1..=e_max`.
pub fn point_counts(base: &Field, nvars: usize, forms: &[MPoly], e_max: u32, budget: &Budget) -> Result<Vec<u64>> {
    check_forms(forms, nvars)?;
    budget.check_level(e_max)?;
    (1..=e_max)
        .map(|e| {
            let ext = base.extension(e)?;
            let s = Solver::new(forms, &ext, nvars);
            let mut count = 0u64;
            let _ = s.for_each::<()>(|_| {
                count += 1;
                ControlFlow::Continue(())
            });
            Ok(count)
        })
        .collect()
}

/// Closed points of exact degree `e` on `V(forms)`, in canonical order.
pub fn closed_points_of_degree(
    base: &Field,
    nvars: usize,
    forms: &[MPoly],
    e: u32,
    budget: &Budget,
) -> Result<Vec<ClosedPoint>> {
    check_forms(forms, nvars)?;
    budget.check_level(e)?;
    let ext = base.extension(e)?;
    let s = Solver::new(forms, &ext, nvars);
    Ok(s.collect(|p| {
        let orbit_least = if e == 1 {
            true
        } else {
            let mut cur = p.to_vec();
            let mut least = true;
            for i in 1..=e {
                for c in cur.iter_mut() {
                    *c = ext.frob(*c);
                }
                if cur.as_slice() == p {
                    // Orbit closed early: the point has a smaller field of definition.
                    if i < e {
                        return None;
                    }
                    break;
                }
                if cur.as_slice() < p {
                    least = false;
                }
            }
            least
        };
        orbit_least.then(|| ClosedPoint::from_rep(ProjPoint::from_normalized(e, p.to_vec())))
    }))
}

/// Closed points of degree `<= r` on `V(forms)`, ordered by degree then
/// representative.
pub fn closed_points(base: &Field, nvars: usize, forms: &[MPoly], r: u32, budget: &Budget) -> Result<Vec<ClosedPoint>> {
    let mut out = Vec::new();
    for e in 1..=r {
        out.extend(closed_points_of_degree(base, nvars, forms, e, budget)?);
    }
    Ok(out)
}

/// Rank of the chart Jacobian `(∂f_i/∂x_l (P))_{l != j}` in the chart
/// `x_j = 1` of the first nonzero coordinate.
pub fn jacobian_rank_at(base: &Field, forms: &[MPoly], p: &ProjPoint) -> Result<usize> {
    check_forms(forms, p.nvars())?;
    let ext = base.extension(p.level())?;
    if forms.iter().any(|f| f.eval_codes(&ext, p.coords()) != 0) {
        return Err(Error::Precondition(format!(
            "point {} is not on the locus",
            p.format(&ext)
        )));
    }
    Ok(jacobian_rank_in_chart(&ext, forms, p.coords(), p.chart()))
}

/// Rank of the Jacobian in an arbitrary chart `x_j != 0`; on the locus it
/// does not depend on `j`.
pub fn jacobian_rank_in_chart(ext: &Extension, forms: &[MPoly], coords: &[u32], chart: usize) -> usize {
    let nvars = coords.len();
    let rows: Vec<Vec<u32>> = forms
        .iter()
        .map(|f| {
            (0..nvars)
                .filter(|&l| l != chart)
                .map(|l| f.partial(l).eval_codes(ext, coords))
                .collect()
        })
        .collect();
    Matrix::from_rows(&ext.field, nvars - 1, rows).rank()
}

/// All `c x c` minors of the projective Jacobian of `forms`, nonzero ones
/// only.
pub fn jacobian_minors(forms: &[MPoly], c: usize) -> Vec<MPoly> {
    let Some(first) = forms.first() else {
        return Vec::new();
    };
    let nvars = first.nvars();
    let partials: Vec<Vec<MPoly>> = forms
        .iter()
        .map(|f| (0..nvars).map(|l| f.partial(l)).collect())
        .collect();
    let mut out = Vec::new();
    for rows in subsets(forms.len(), c) {
        for cols in subsets(nvars, c) {
            let m = det(&partials, &rows, &cols);
            if !m.is_zero() {
                out.push(m);
            }
        }
    }
    out
}

fn subsets(n: usize, c: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, c: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, c, cur, out);
            cur.pop();
        }
    }
    rec(0, n, c, &mut cur, &mut out);
    out
}

/// Laplace expansion along the first row.
fn det(m: &[Vec<MPoly>], rows: &[usize], cols: &[usize]) -> MPoly {
    if rows.len() == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    let mut acc: Option<MPoly> = None;
    for (i, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let mut term = m[rows[0]][c].mul(&det(m, &rows[1..], &rest)).expect("same ring");
        if i % 2 == 1 {
            term = term.neg();
        }
        acc = Some(match acc {
            None => term,
            Some(a) if a.degree() == term.degree() => a.add(&term).expect("same degree"),
            // Degree tags only disagree when a constant form was differentiated.
            Some(a) if a.is_zero() => term,
            Some(a) => a,
        });
    }
    acc.unwrap()
}

/// Closed points of degree `<= r` where `V(forms)` fails to be smooth of
/// codimension `c` (Jacobian rank `< c`).
///
/// Candidates come from `V(forms, c x c minors)`; each one is confirmed with
/// [`jacobian_rank_at`].
pub fn singular_closed_points(
    base: &Field,
    forms: &[MPoly],
    c: usize,
    r: u32,
    budget: &Budget,
) -> Result<Vec<ClosedPoint>> {
    let nvars = forms
        .first()
        .map(|f| f.nvars())
        .ok_or_else(|| Error::Invalid("no forms given".into()))?;
    check_forms(forms, nvars)?;
    let mut system = forms.to_vec();
    if c > 0 {
        system.extend(jacobian_minors(forms, c));
    }
    let mut out = Vec::new();
    for pt in closed_points(base, nvars, &system, r, budget)? {
        if jacobian_rank_at(base, forms, pt.representative())? < c {
            out.push(pt);
        }
    }
    Ok(out)
}

/// First geometric point (by level, then canonical order) of `V(forms)` at
/// level `<= r` where the Jacobian rank is `< c` and `keep` accepts it.
pub(crate) fn first_singular_point(
    base: &Field,
    forms: &[MPoly],
    c: usize,
    r: u32,
    budget: &Budget,
    keep: impl Fn(&Extension, &[u32]) -> bool + Sync,
) -> Result<Option<ProjPoint>> {
    let mut system = forms.to_vec();
    system.extend(jacobian_minors(forms, c));
    first_point(base, &system, r, budget, |ext, p| {
        jacobian_rank_in_chart(ext, forms, p, p.iter().position(|&x| x != 0).unwrap()) < c && keep(ext, p)
    })
}

/// First point of `V(forms)` of exact degree `<= r` accepted by `keep`,
/// scanning levels in increasing order.
pub(crate) fn first_point(
    base: &Field,
    forms: &[MPoly],
    r: u32,
    budget: &Budget,
    keep: impl Fn(&Extension, &[u32]) -> bool + Sync,
) -> Result<Option<ProjPoint>> {
    let nvars = forms
        .first()
        .map(|f| f.nvars())
        .ok_or_else(|| Error::Invalid("no forms given".into()))?;
    for e in 1..=r {
        budget.check_level(e)?;
        let ext = base.extension(e)?;
        let s = Solver::new(forms, &ext, nvars);
        // Points from proper subfields were seen at a lower level.
        let hit = s.find_first(|p| (e == 1 || exact_degree(&ext, p) == e) && keep(&ext, p));
        if let Some(p) = hit {
            return Ok(Some(ProjPoint::from_normalized(e, p)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn enumeration_counts() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(enumerate_points(&f2, 2, 1, &b()).unwrap().len(), 7);
        assert_eq!(enumerate_points(&f2, 1, 2, &b()).unwrap().len(), 5);
        assert_eq!(enumerate_points(&f2, 3, 1, &b()).unwrap().len(), 15);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(enumerate_points(&f4, 1, 1, &b()).unwrap().len(), 5);
    }

    #[test]
    fn closed_points_of_p1() {
        let f2 = make_field(2, 1).unwrap();
        let pts = closed_points(&f2, 2, &[], 2, &b()).unwrap();
        let degs: Vec<u32> = pts.iter().map(|p| p.degree()).collect();
        assert_eq!(degs, vec![1, 1, 1, 2]);
        let x = MPoly::parse(&f2, 2, "x0").unwrap();
        assert_eq!(closed_points(&f2, 2, &[x], 4, &b()).unwrap().len(), 1);
    }

    #[test]
    fn jacobian_examples() {
        let f2 = make_field(2, 1).unwrap();
        let nodal = MPoly::parse(&f2, 3, "x1^2*x2 - x0^3 - x0^2*x2").unwrap();
        let origin = ProjPoint::from_normalized(1, vec![0, 0, 1]);
        assert_eq!(jacobian_rank_at(&f2, std::slice::from_ref(&nodal), &origin).unwrap(), 0);
        let sing = singular_closed_points(&f2, &[nodal], 1, 3, &b()).unwrap();
        assert_eq!(sing.len(), 1);
        assert_eq!(sing[0].representative().coords(), &[0, 0, 1]);

        let f3 = make_field(3, 1).unwrap();
        let conic = MPoly::parse(&f3, 3, "x0*x2 - x1^2").unwrap();
        assert_eq!(jacobian_rank_at(&f3, std::slice::from_ref(&conic), &origin).unwrap(), 1);
        assert!(singular_closed_points(&f3, &[conic], 1, 2, &b()).unwrap().is_empty());

        let dbl = MPoly::parse(&f2, 3, "x0 + x1 + x2").unwrap().pow(2);
        let p = ProjPoint::from_normalized(1, vec![1, 1, 0]);
        assert_eq!(jacobian_rank_at(&f2, &[dbl], &p).unwrap(), 0);
    }

    #[test]
    fn two_lines_in_p3() {
        let f2 = make_field(2, 1).unwrap();
        let gens = vec![
            MPoly::parse(&f2, 4, "x0").unwrap(),
            MPoly::parse(&f2, 4, "x1*x2").unwrap(),
        ];
        let sing = singular_closed_points(&f2, &gens, 2, 2, &b()).unwrap();
        assert_eq!(sing.len(), 1);
        assert_eq!(sing[0].representative().coords(), &[0, 0, 0, 1]);
    }

    #[test]
    fn closed_point_from_any_orbit_member() {
        let f2 = make_field(2, 1).unwrap();
        let ext = f2.extension(2).unwrap();
        let all = closed_points(&f2, 3, &[], 2, &b()).unwrap();
        for cp in all.iter().filter(|c| c.degree() == 2) {
            for q in cp.orbit(&f2).unwrap() {
                assert_eq!(&ClosedPoint::from_point(&f2, &q).unwrap(), cp);
            }
            // viewed at level 4 it is still the same closed point
            let big = f2.extension(4).unwrap();
            let lifted = cp.representative().lift(&ext, &big).unwrap();
            assert_eq!(&ClosedPoint::from_point(&f2, &lifted).unwrap(), cp);
        }
    }
}
