//! Dense univariate polynomials over a [`FieldCtx`], coefficient codes
//! stored lowest degree first. Only what irreducibility testing and
//! root-finding need.

use super::FieldCtx;

pub type UPoly = Vec<u32>;

pub fn trim(f: &mut UPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Degree of `f`, `None` for the zero polynomial.
pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn add(ctx: &FieldCtx, f: &[u32], g: &[u32]) -> UPoly {
    let mut out = vec![0; f.len().max(g.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *slot = ctx.add(a, b);
    }
    trim(&mut out);
    out
}

pub fn sub(ctx: &FieldCtx, f: &[u32], g: &[u32]) -> UPoly {
    let mut out = vec![0; f.len().max(g.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *slot = ctx.sub(a, b);
    }
    trim(&mut out);
    out
}

pub fn mul(ctx: &FieldCtx, f: &[u32], g: &[u32]) -> UPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            if b != 0 {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `f` by nonzero `g`.
pub fn div_rem(ctx: &FieldCtx, f: &[u32], g: &[u32]) -> (UPoly, UPoly) {
    let dg = degree(g).expect("division by the zero polynomial");
    let mut r: UPoly = f.to_vec();
    trim(&mut r);
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let lead_inv = ctx.inv(g[dg]);
    let mut q = vec![0; r.len() - dg];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = ctx.mul(r[dr], lead_inv);
        let shift = dr - dg;
        q[shift] = c;
        for (j, &b) in g[..=dg].iter().enumerate() {
            if b != 0 {
                r[shift + j] = ctx.sub(r[shift + j], ctx.mul(c, b));
            }
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(ctx: &FieldCtx, f: &[u32], g: &[u32]) -> UPoly {
    div_rem(ctx, f, g).1
}

pub fn monic(ctx: &FieldCtx, f: &[u32]) -> UPoly {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = ctx.inv(f[d]);
            f[..=d].iter().map(|&c| ctx.mul(c, inv)).collect()
        }
    }
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd(ctx: &FieldCtx, f: &[u32], g: &[u32]) -> UPoly {
    let mut a: UPoly = f.to_vec();
    let mut b: UPoly = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(ctx, &a, &b);
        a = b;
        b = r;
    }
    monic(ctx, &a)
}

pub fn mul_mod(ctx: &FieldCtx, f: &[u32], g: &[u32], m: &[u32]) -> UPoly {
    rem(ctx, &mul(ctx, f, g), m)
}

/// `f^e mod m` by square and multiply.
pub fn pow_mod(ctx: &FieldCtx, f: &[u32], mut e: u128, m: &[u32]) -> UPoly {
    let mut base = rem(ctx, f, m);
    let mut acc: UPoly = rem(ctx, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(ctx, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(ctx, &base, &base, m);
        }
    }
    acc
}

/// `x^(|F|^times) mod m`, computed by repeated Frobenius steps.
pub fn x_pow_field_size(ctx: &FieldCtx, times: u32, m: &[u32]) -> UPoly {
    let size = ctx.size() as u128;
    let mut h = rem(ctx, &[0, 1], m);
    for _ in 0..times {
        h = pow_mod(ctx, &h, size, m);
    }
    h
}

pub fn eval(ctx: &FieldCtx, f: &[u32], x: u32) -> u32 {
    f.iter().rev().fold(0, |acc, &c| ctx.add(ctx.mul(acc, x), c))
}

/// Rabin's test: `f` of degree `k` is irreducible over the coefficient field
/// iff `x^(Q^k) = x mod f` and `gcd(x^(Q^(k/l)) - x, f) = 1` for every prime
/// `l | k`, where `Q` is the coefficient field size.
pub fn is_irreducible(ctx: &FieldCtx, f: &[u32]) -> bool {
    let k = match degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(k) => k as u32,
    };
    let x = vec![0, 1];
    let full = x_pow_field_size(ctx, k, f);
    if sub(ctx, &full, &x).iter().any(|&c| c != 0) {
        return false;
    }
    for l in prime_factors(k as u64) {
        let h = x_pow_field_size(ctx, k / l as u32, f);
        let g = gcd(ctx, &sub(ctx, &h, &x), f);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct roots of a nonzero `f` in the coefficient field, ascending by
/// code. Returns `None` when `f` is the zero polynomial (every element is a
/// root).
pub fn roots(ctx: &FieldCtx, f: &[u32]) -> Option<Vec<u32>> {
    let d = degree(f)?;
    if d == 0 {
        return Some(Vec::new());
    }
    let f = monic(ctx, f);
    let mut out = Vec::new();
    if ctx.size() as usize <= 64 * d.max(4) {
        for a in 0..ctx.size() {
            if eval(ctx, &f, a) == 0 {
                out.push(a);
            }
        }
        return Some(out);
    }
    // Split part: gcd(f, x^Q - x).
    let xq = x_pow_field_size(ctx, 1, &f);
    let g = gcd(ctx, &sub(ctx, &xq, &[0, 1]), &f);
    split_linear(ctx, g, &mut out);
    out.sort_unstable();
    Some(out)
}

/// Splits a monic product of distinct linear factors into its roots.
fn split_linear(ctx: &FieldCtx, g: UPoly, out: &mut Vec<u32>) {
    match degree(&g) {
        None | Some(0) => {}
        Some(1) => out.push(ctx.neg(g[0])),
        Some(d) => {
            if (ctx.size() as usize) <= 64 * d {
                for a in 0..ctx.size() {
                    if eval(ctx, &g, a) == 0 {
                        out.push(a);
                    }
                }
                return;
            }
            let h = find_splitter(ctx, &g);
            let (q, _) = div_rem(ctx, &g, &h);
            split_linear(ctx, h, out);
            split_linear(ctx, monic(ctx, &q), out);
        }
    }
}

/// A proper monic factor of `g` (degree ≥ 2, distinct roots all in the field).
fn find_splitter(ctx: &FieldCtx, g: &[u32]) -> UPoly {
    let dg = degree(g).unwrap();
    let total_digits = ctx.k();
    if ctx.p() == 2 {
        // Absolute trace of a·x: roots r1 != r2 are separated by some a in
        // the polynomial basis, since Tr(a(r1 - r2)) cannot vanish for all a.
        for i in 0..total_digits {
            let a = ctx.radix(i);
            let ax = rem(ctx, &[0, a], g);
            let mut term = ax.clone();
            let mut tr = ax;
            for _ in 1..total_digits {
                term = mul_mod(ctx, &term, &term, g);
                tr = add(ctx, &tr, &term);
            }
            let h = gcd(ctx, &tr, g);
            if let Some(dh) = degree(&h) {
                if dh > 0 && dh < dg {
                    return h;
                }
            }
        }
    } else {
        let half = (ctx.size() as u128 - 1) / 2;
        for a in 0..ctx.size() {
            let base = [a, 1];
            let pw = pow_mod(ctx, &base, half, g);
            let h = gcd(ctx, &sub(ctx, &pw, &[1]), g);
            if let Some(dh) = degree(&h) {
                if dh > 0 && dh < dg {
                    return h;
                }
            }
        }
    }
    unreachable!("distinct-root polynomial of degree {dg} did not split")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn gcd_and_division() {
        let f3 = make_field(3, 1).unwrap();
        // (x+1)(x+2) = x^2 + 2 over F_3; gcd with x+1 is x+1.
        let f = vec![2, 0, 1];
        let g = gcd(&f3, &f, &[1, 1]);
        assert_eq!(g, vec![1, 1]);
        let (q, r) = div_rem(&f3, &f, &[1, 1]);
        assert_eq!(q, vec![2, 1]);
        assert!(r.is_empty());
    }

    #[test]
    fn irreducibility_small_cases() {
        let f2 = make_field(2, 1).unwrap();
        assert!(is_irreducible(&f2, &[1, 1, 1]));
        assert!(!is_irreducible(&f2, &[1, 0, 1]));
        assert!(is_irreducible(&f2, &[1, 1, 0, 1]));
        assert!(!is_irreducible(&f2, &[1, 1, 1, 1]));
        let f3 = make_field(3, 1).unwrap();
        assert!(is_irreducible(&f3, &[1, 0, 1]));
        assert!(!is_irreducible(&f3, &[2, 0, 1]));
    }

    #[test]
    fn roots_match_brute_force() {
        let f = make_field(2, 8).unwrap();
        // product of (x - a) for a in {3, 17, 200}, times an irreducible quadratic
        let mut poly = vec![1u32];
        for a in [3u32, 17, 200] {
            poly = mul(&f, &poly, &[f.neg(a), 1]);
        }
        let quad = {
            // x^2 + x + c irreducible for some c; find one by search
            let c = (1..f.size())
                .find(|&c| roots(&f, &[c, 1, 1]).unwrap().is_empty())
                .unwrap();
            vec![c, 1, 1]
        };
        poly = mul(&f, &poly, &quad);
        assert_eq!(roots(&f, &poly).unwrap(), vec![3, 17, 200]);

        let f9 = make_field(3, 6).unwrap();
        let mut poly = vec![1u32];
        for a in [0u32, 5, 600, 728] {
            poly = mul(&f9, &poly, &[f9.neg(a), 1]);
        }
        assert_eq!(roots(&f9, &poly).unwrap(), vec![0, 5, 600, 728]);
    }
}
