use cycle_sieve::density::{density_experiment, DensityConfig, Engine};
use cycle_sieve::field::make_field;
use cycle_sieve::geometry::point_counts;
use cycle_sieve::poly::MPoly;
use cycle_sieve::Budget;

/// Smooth plane cubics, one per characteristic.
const CUBICS: [(u32, &str); 4] = [
    (2, "x1^2*x2 + x1*x2^2 + x0^3 + x2^3"),
    (3, "x1^2*x2 - x0^3 + x0*x2^2 - x2^3"),
    (5, "x1^2*x2 - x0^3 - 2*x0*x2^2 - x2^3"),
    (7, "x1^2*x2 - x0^3 - 3*x2^3"),
];

/// Rational points by direct evaluation over `Z/p`.
fn naive_count(p: u32, f: impl Fn(i64, i64, i64) -> i64) -> u64 {
    let p = p as i64;
    let mut zeros = 0;
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                if (x, y, z) != (0, 0, 0) && f(x, y, z).rem_euclid(p) == 0 {
                    zeros += 1;
                }
            }
        }
    }
    zeros / (p as u64 - 1)
}

fn cubic_value(p: u32, x: i64, y: i64, z: i64) -> i64 {
    match p {
        2 => y * y * z + y * z * z + x * x * x + z * z * z,
        3 => y * y * z - x * x * x + x * z * z - z * z * z,
        5 => y * y * z - x * x * x - 2 * x * z * z - z * z * z,
        _ => y * y * z - x * x * x - 3 * z * z * z,
    }
}

#[test]
fn cubic_counts_follow_the_genus_one_zeta_function() {
    let budget = Budget::default();
    for (p, text) in CUBICS {
        let f = make_field(p, 1).unwrap();
        let g = MPoly::parse(&f, 3, text).unwrap();
        let counts = point_counts(&f, 3, &[g], 3, &budget).unwrap();
        let q = p as i64;
        let n1 = naive_count(p, |x, y, z| cubic_value(p, x, y, z));
        assert_eq!(counts[0], n1, "p = {p}");
        let a = q + 1 - n1 as i64;
        assert!(a * a <= 4 * q, "Hasse bound fails for p = {p}");
        // N_e = q^e + 1 - (α^e + ᾱ^e) with α + ᾱ = a, αᾱ = q.
        let s2 = a * a - 2 * q;
        let s3 = a * a * a - 3 * q * a;
        assert_eq!(counts[1] as i64, q * q + 1 - s2, "p = {p}");
        assert_eq!(counts[2] as i64, q * q * q + 1 - s3, "p = {p}");
    }
}

#[test]
fn smooth_conics_count_like_the_line() {
    let budget = Budget::default();
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let f = make_field(p, k).unwrap();
        let g = MPoly::parse(&f, 3, "x0*x2 - x1^2").unwrap();
        let q = f.size() as u64;
        let counts = point_counts(&f, 3, &[g], 3, &budget).unwrap();
        for (e, n) in counts.iter().enumerate() {
            assert_eq!(*n, q.pow(e as u32 + 1) + 1);
        }
    }
}

#[test]
fn kernel_and_direct_engines_agree() {
    for (p, n, d) in [(2, 2, 3), (2, 2, 4), (3, 1, 5), (2, 3, 2)] {
        let f = make_field(p, 1).unwrap();
        let mut counts = Vec::new();
        for engine in [Engine::Kernel, Engine::Direct] {
            let mut cfg = DensityConfig::new(&f, n, d);
            cfg.engine = engine;
            let rep = density_experiment(&cfg).unwrap();
            counts.push((rep.least_singular_degree.clone(), rep.counts.smooth_avoiding, rep.counts.zero));
        }
        assert_eq!(counts[0], counts[1], "p = {p}, n = {n}, d = {d}");
    }
}
