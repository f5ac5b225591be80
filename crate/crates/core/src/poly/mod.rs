//! Homogeneous polynomials over the base field `F_q`: the sections of
//! `O(d)` on projective space.
//!
//! Monomials are exponent vectors of length `nvars`. The global coefficient
//! order is graded lexicographic with `x0` largest, so for degree 2 in three
//! variables the order is `x0^2, x0*x1, x0*x2, x1^2, x1*x2, x2^2`.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Extension, Field, FieldElem};

pub type Monomial = Vec<u32>;

/// All exponent vectors of `nvars` variables and total degree `d`, in the
/// global (descending lexicographic) order.
pub fn monomial_basis(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, d);
    out
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Monomial, i: usize, rest: u32) {
    if i + 1 == cur.len() {
        cur[i] = rest;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        return;
    }
    for a in (0..=rest).rev() {
        cur[i] = a;
        fill(out, cur, i + 1, rest - a);
    }
    cur[i] = 0;
}

/// `C(nvars - 1 + d, d)`.
pub fn monomial_count(nvars: usize, d: u32) -> usize {
    let n = nvars as u64 - 1;
    let mut num = 1u64;
    for i in 1..=n {
        num = num * (d as u64 + i) / i;
    }
    num as usize
}

/// Descending lexicographic comparison, the order used for printing and for
/// coefficient vectors.
fn lex_desc(a: &Monomial, b: &Monomial) -> Ordering {
    b.cmp(a)
}

#[derive(Clone)]
pub struct MPoly {
    field: Field,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, u32>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field.size() == other.field.size()
            && self.nvars == other.nvars
            && self.degree == other.degree
            && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero(field: &Field, nvars: usize, degree: u32) -> Self {
        MPoly {
            field: field.clone(),
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: u32) -> Self {
        MPoly::monomial(field, vec![0; nvars], c)
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(field, e, 1)
    }

    pub fn monomial(field: &Field, exps: Monomial, c: u32) -> Self {
        let degree = exps.iter().sum();
        let mut p = MPoly::zero(field, exps.len(), degree);
        if c != 0 {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient code)` pairs; all
    /// exponent vectors must have total degree `degree`.
    pub fn from_terms(
        field: &Field,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, u32)>,
    ) -> Result<Self> {
        let mut p = MPoly::zero(field, nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars || e.iter().sum::<u32>() != degree {
                return Err(Error::Invalid(format!(
                    "monomial {e:?} is not of degree {degree} in {nvars} variables"
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field.clone();
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Coefficients listed in the global monomial order.
    pub fn from_coeffs(field: &Field, nvars: usize, degree: u32, coeffs: &[u32]) -> Self {
        let basis = monomial_basis(nvars, degree);
        assert_eq!(basis.len(), coeffs.len(), "coefficient vector length");
        let mut p = MPoly::zero(field, nvars, degree);
        for (m, &c) in basis.into_iter().zip(coeffs) {
            if c != 0 {
                p.terms.insert(m, c);
            }
        }
        p
    }

    pub fn coeffs(&self) -> Vec<u32> {
        monomial_basis(self.nvars, self.degree)
            .iter()
            .map(|m| self.terms.get(m).copied().unwrap_or(0))
            .collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FieldElem)> + '_ {
        self.terms
            .iter()
            .rev()
            .map(move |(m, &c)| (m, self.field.elem(c)))
    }

    pub(crate) fn raw_terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &[u32]) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    fn check_compatible(&self, other: &MPoly) -> Result<()> {
        if self.field.size() != other.field.size() {
            return Err(Error::FieldMismatch {
                expected: self.field.size() as u64,
                found: other.field.size() as u64,
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::Invalid(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "cannot add forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> MPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> Result<MPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> MPoly {
        if c == 0 {
            return MPoly::zero(&self.field, self.nvars, self.degree);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.field.mul(*v, c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_compatible(other)?;
        let mut out = MPoly::zero(&self.field, self.nvars, self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(&self.field, self.nvars, 1);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i`; exponents multiply
    /// into the coefficient modulo `p`.
    pub fn partial(&self, i: usize) -> MPoly {
        assert!(i < self.nvars, "variable index out of range");
        let degree = self.degree.saturating_sub(1);
        let mut out = MPoly::zero(&self.field, self.nvars, degree);
        for (m, &c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let coef = self.field.mul_int(c, m[i] as u64);
            if coef != 0 {
                let mut e = m.clone();
                e[i] -= 1;
                out.terms.insert(e, coef);
            }
        }
        out
    }

    /// Value at a point with coordinates in `ext.field`, given as codes.
    pub fn eval_codes(&self, ext: &Extension, coords: &[u32]) -> u32 {
        debug_assert_eq!(coords.len(), self.nvars);
        let f = &ext.field;
        let mut powers: Vec<Vec<u32>> = Vec::with_capacity(self.nvars);
        for &x in coords {
            let mut pw = Vec::with_capacity(self.degree as usize + 1);
            let mut acc = 1;
            for _ in 0..=self.degree {
                pw.push(acc);
                acc = f.mul(acc, x);
            }
            powers.push(pw);
        }
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = ext.embed(c);
            for (v, &a) in m.iter().enumerate() {
                if a > 0 {
                    t = f.mul(t, powers[v][a as usize]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Evaluates at tagged coordinates from `F_{q^e}`, embedding the
    /// coefficients on the fly.
    pub fn eval(&self, coords: &[FieldElem]) -> Result<FieldElem> {
        if coords.len() != self.nvars {
            return Err(Error::Invalid(format!(
                "expected {} coordinates, got {}",
                self.nvars,
                coords.len()
            )));
        }
        let size = coords.first().map(|c| c.field_size()).unwrap_or(self.field.size());
        if coords.iter().any(|c| c.field_size() != size) {
            return Err(Error::Invalid("coordinates from different fields".into()));
        }
        let e = level_of(&self.field, size)?;
        let ext = self.field.extension(e)?;
        let codes: Vec<u32> = coords.iter().map(|c| c.code()).collect();
        Ok(ext.field.elem(self.eval_codes(&ext, &codes)))
    }

    /// Sets `x_chart = 1`, leaving a polynomial in the other variables (kept
    /// in their original order).
    pub fn dehomogenize(&self, chart: usize) -> AffinePoly {
        assert!(chart < self.nvars);
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            let mut e = m.clone();
            e.remove(chart);
            let slot = terms.entry(e).or_insert(0);
            *slot = self.field.add(*slot, c);
        }
        terms.retain(|_, c| *c != 0);
        AffinePoly {
            field: self.field.clone(),
            nvars: self.nvars - 1,
            terms,
        }
    }

    /// Canonical text form, e.g. `2*x0^3*x2 + x1^2*x2`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(field: &Field, nvars: usize, text: &str) -> Result<MPoly> {
        parse::parse_poly(field, nvars, text)
    }
}

/// The `e` with `q^e = size`.
pub(crate) fn level_of(base: &Field, size: u32) -> Result<u32> {
    let q = base.size() as u64;
    let mut s = size as u64;
    let mut e = 0;
    while s > 1 && s.is_multiple_of(q) {
        s /= q;
        e += 1;
    }
    if s != 1 || e == 0 {
        return Err(Error::Invalid(format!(
            "a field with {size} elements is not an extension of F_{q}"
        )));
    }
    Ok(e)
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &u32)> = self.terms.iter().collect();
        terms.sort_by(|a, b| lex_desc(a.0, b.0));
        let mut first = true;
        for (m, &c) in terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            let is_const = m.iter().all(|&a| a == 0);
            if c != 1 || is_const {
                parts.push(self.field.format_code(c));
            }
            for (i, &a) in m.iter().enumerate() {
                match a {
                    0 => {}
                    1 => parts.push(format!("x{i}")),
                    _ => parts.push(format!("x{i}^{a}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[deg {}]({})", self.degree, self)
    }
}

/// A polynomial of unrestricted degree, the dehomogenization of a form.
#[derive(Clone)]
pub struct AffinePoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl PartialEq for AffinePoly {
    fn eq(&self, other: &Self) -> bool {
        self.field.size() == other.field.size()
            && self.nvars == other.nvars
            && self.terms == other.terms
    }
}

impl AffinePoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval_codes(&self, ext: &Extension, coords: &[u32]) -> u32 {
        let f = &ext.field;
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = ext.embed(c);
            for (v, &a) in m.iter().enumerate() {
                t = f.mul(t, f.pow(coords[v], a as u64));
            }
            acc = f.add(acc, t);
        }
        acc
    }
}

impl fmt::Debug for AffinePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| format!("{}*{:?}", self.field.format_code(c), m))
            .collect();
        write!(f, "AffinePoly({})", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn f(p: u32) -> Field {
        make_field(p, 1).unwrap()
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(monomial_basis(3, 2).len(), 6);
        assert_eq!(monomial_basis(2, 7).len(), 8);
        assert_eq!(monomial_basis(4, 3).len(), 20);
        assert_eq!(monomial_count(4, 3), 20);
        assert_eq!(monomial_count(3, 5), 21);
        let b = monomial_basis(3, 2);
        assert_eq!(
            b,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = f(2);
        let s = MPoly::parse(&f2, 2, "x0 + x1").unwrap();
        assert_eq!(s.mul(&s).unwrap().to_string(), "x0^2 + x1^2");
        assert!(s.add(&s).unwrap().is_zero());
        let xy = MPoly::var(&f2, 2, 0).mul(&MPoly::var(&f2, 2, 1)).unwrap();
        assert_eq!(xy.degree(), 2);
        assert_eq!(xy.to_string(), "x0*x1");
        let x2 = MPoly::parse(&f2, 2, "x0^2").unwrap();
        assert!(s.add(&x2).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let f2 = f(2);
        let g = MPoly::parse(&f2, 3, "x0^2 + x1*x2").unwrap();
        let one = f2.one();
        assert!(g.eval(&[one, one, one]).unwrap().is_zero());
        let cubic = MPoly::parse(&f2, 3, "x1^2*x2 - x0^3 - x0^2*x2").unwrap();
        assert!(cubic
            .eval(&[f2.zero(), f2.zero(), f2.one()])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn partial_examples() {
        let f2 = f(2);
        let x3 = MPoly::parse(&f2, 3, "x0^3").unwrap();
        assert_eq!(x3.partial(0).to_string(), "x0^2");
        let y2z = MPoly::parse(&f2, 3, "x1^2*x2").unwrap();
        assert!(y2z.partial(1).is_zero());
        let f3 = f(3);
        let x2y = MPoly::parse(&f3, 3, "x0^2*x1").unwrap();
        assert_eq!(x2y.partial(0).to_string(), "2*x0*x1");
    }

    #[test]
    fn dehomogenize_examples() {
        let f2 = f(2);
        let g = MPoly::parse(&f2, 3, "x0^2 + x1*x2").unwrap();
        let a = g.dehomogenize(2);
        let terms: Vec<_> = a.terms().map(|(m, c)| (m.clone(), c)).collect();
        assert_eq!(terms, vec![(vec![2, 0], 1), (vec![0, 1], 1)]);
        let z3 = MPoly::parse(&f2, 3, "x2^3").unwrap().dehomogenize(2);
        let terms: Vec<_> = z3.terms().map(|(m, c)| (m.clone(), c)).collect();
        assert_eq!(terms, vec![(vec![0, 0], 1)]);
    }

    #[test]
    fn extension_coefficients_print_as_tuples() {
        let f4 = make_field(2, 2).unwrap();
        let g = MPoly::parse(&f4, 2, "[0,1]*x0 + x1").unwrap();
        assert_eq!(g.to_string(), "[0,1]*x0 + x1");
        assert_eq!(MPoly::parse(&f4, 2, &g.to_string()).unwrap(), g);
    }
}
