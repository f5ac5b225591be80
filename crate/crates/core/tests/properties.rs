use proptest::prelude::*;

use cycle_sieve::field::{make_field, Field};
use cycle_sieve::geometry::specfile::{parse_spec, to_text};
use cycle_sieve::geometry::{ClosedPoint, PointSpec, ProjPoint, SubschemeSpec};
use cycle_sieve::linalg::Matrix;
use cycle_sieve::poly::{monomial_count, MPoly};
use cycle_sieve::zeta::{mobius_invert, point_counts_from_closed};

const FIELDS: [(u32, u32); 6] = [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (7, 2)];

fn field(i: usize) -> Field {
    let (p, k) = FIELDS[i % FIELDS.len()];
    make_field(p, k).unwrap()
}

fn poly(f: &Field, nvars: usize, d: u32, seed: &[u32]) -> MPoly {
    let q = f.size();
    let coeffs: Vec<u32> = (0..monomial_count(nvars, d))
        .map(|i| seed[i % seed.len()].wrapping_mul(i as u32 + 7) % q)
        .collect();
    MPoly::from_coeffs(f, nvars, d, &coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(i in 0usize..6, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(i);
        let q = f.size();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.pow(a, q as u64), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        // Frobenius is additive and multiplicative.
        prop_assert_eq!(f.frob_pow(f.add(a, b), 1), f.add(f.frob_pow(a, 1), f.frob_pow(b, 1)));
        prop_assert_eq!(f.frob_pow(f.mul(a, b), 1), f.mul(f.frob_pow(a, 1), f.frob_pow(b, 1)));
    }

    #[test]
    fn extension_embed_and_trace(i in 0usize..6, e in 1u32..4, a in any::<u32>(), b in any::<u32>()) {
        let f = field(i);
        let ext = f.extension(e).unwrap();
        let big = ext.field.size();
        let (x, y) = (a % big, b % big);
        let (u, v) = (a % f.size(), b % f.size());
        prop_assert_eq!(ext.embed(f.mul(u, v)), ext.field.mul(ext.embed(u), ext.embed(v)));
        prop_assert_eq!(ext.restrict(ext.embed(u)), Some(u));
        prop_assert!(ext.trace(x) < f.size());
        prop_assert_eq!(ext.trace(ext.field.add(x, y)), f.add(ext.trace(x), ext.trace(y)));
        prop_assert_eq!(ext.trace(ext.embed(u)), f.mul_int(u, e as u64));
    }

    #[test]
    fn poly_text_roundtrip(i in 0usize..6, nvars in 1usize..4, d in 0u32..5, seed in prop::collection::vec(any::<u32>(), 1..8)) {
        let f = field(i);
        let g = poly(&f, nvars, d, &seed);
        prop_assume!(!g.is_zero());
        let back = MPoly::parse(&f, nvars, &g.to_text()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn leibniz_and_evaluation(i in 0usize..6, a in prop::collection::vec(any::<u32>(), 1..6), b in prop::collection::vec(any::<u32>(), 1..6), pt in prop::collection::vec(any::<u32>(), 3)) {
        let f = field(i);
        let g = poly(&f, 3, 2, &a);
        let h = poly(&f, 3, 3, &b);
        let gh = g.mul(&h).unwrap();
        for v in 0..3 {
            let rhs = g.partial(v).mul(&h).unwrap().add(&g.mul(&h.partial(v)).unwrap()).unwrap();
            prop_assert_eq!(gh.partial(v), rhs);
        }
        let ext = f.extension(1).unwrap();
        let x: Vec<u32> = pt.iter().map(|c| c % f.size()).collect();
        prop_assert_eq!(gh.eval_codes(&ext, &x), f.mul(g.eval_codes(&ext, &x), h.eval_codes(&ext, &x)));
    }

    #[test]
    fn mobius_roundtrip(a in prop::collection::vec(0u64..1000, 1..10)) {
        prop_assert_eq!(mobius_invert(&point_counts_from_closed(&a)).unwrap(), a);
    }

    #[test]
    fn rank_nullity(i in 0usize..6, rows in 1usize..6, cols in 1usize..7, seed in prop::collection::vec(any::<u32>(), 1..40)) {
        let f = field(i);
        let data: Vec<Vec<u32>> = (0..rows)
            .map(|r| (0..cols).map(|c| seed[(r * cols + c) % seed.len()].rotate_left(r as u32) % f.size()).collect())
            .collect();
        let m = Matrix::from_rows(&f, cols, data);
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn spec_roundtrip(i in 0usize..6, n in 1usize..4, pts in prop::collection::vec((1u32..3, prop::collection::vec(any::<u32>(), 4), any::<bool>()), 1..4), seed in prop::collection::vec(any::<u32>(), 1..6)) {
        let f = field(i);
        let mut points = Vec::new();
        for (e, coords, first_order) in pts {
            let ext = f.extension(e).unwrap();
            let c: Vec<u32> = coords[..=n].iter().map(|x| x % ext.field.size()).collect();
            let Some(p) = ProjPoint::normalize(&ext, &c) else { continue };
            let point = ClosedPoint::from_point(&f, &p).unwrap();
            if points.iter().any(|s: &PointSpec| s.point == point) {
                continue;
            }
            points.push(PointSpec { point, first_order });
        }
        prop_assume!(!points.is_empty());
        let s = SubschemeSpec::from_points("S", n + 1, points).unwrap();
        let g = poly(&f, n + 1, 2, &seed);
        prop_assume!(!g.is_zero());
        let z = SubschemeSpec::new("curve", n + 1, vec![g]).unwrap().with_dim(n as i64 - 1);
        let text = format!("{} {} {}\n[Z]\n", f.p(), f.k(), n);
        let mut spec = parse_spec(&format!("{text}gen: x0\n")).unwrap();
        spec.z = Some(z);
        spec.s = Some(s);
        let printed = to_text(&spec);
        let back = parse_spec(&printed).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(to_text(&back), printed);
    }
}
