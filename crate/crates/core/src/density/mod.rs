//! Densities of sections with smooth divisors.
//!
//! A section is classified by the least degree of a closed point of `X0`
//! at which its divisor is singular, scanning up to a bound `r`, and by
//! whether it vanishes somewhere on the avoided set `S`. Here
//! `X0 = P^n - (removed ∪ S)`.
//!
//! Exhaustive runs use the kernel-union engine: for each closed point the
//! sections singular there form an `F_p`-subspace, and walking those
//! subspaces marks every section with its least singular degree. Sampled
//! runs classify each drawn section directly by solving `f = ∂f = 0`.

mod engine;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{checked_pow, Budget};
use crate::error::{Error, Result};
use crate::field::{Extension, Field};
use crate::geometry::{closed_points, first_singular_point, ClosedPoint, PointSpec, ProjPoint, SubschemeSpec};
use crate::poly::MPoly;
use crate::report::{Exact, Float};
use crate::sections::{
    basis_jets, jet_map_specs, twist_constant, twisted_system, vanishing_system, LinearSystem,
};
use crate::zeta::{avoidance_factor, local_factor, mobius_invert, pn_point_counts, zeta_inv_pn};

use engine::{kernel_union, Context, NONE};

/// Size cap for exact truncated products in reports.
pub const EXACT_BITS: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sample { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Kernel union when exhaustive, direct classification when sampling.
    #[default]
    Auto,
    Kernel,
    Direct,
}

#[derive(Clone, Debug)]
pub struct DensityConfig {
    pub field: Field,
    pub n: usize,
    pub m: i64,
    pub d: u32,
    pub mode: Mode,
    /// Closed points the divisor must miss.
    pub avoid: Vec<ClosedPoint>,
    /// Sections are restricted to those vanishing on this subscheme.
    pub contain: Option<SubschemeSpec>,
    /// Removed from `P^n` to form `X0`.
    pub removed: Option<SubschemeSpec>,
    /// Scan bound; defaults to `n (m + d)`.
    pub r: Option<u32>,
    pub budget: Budget,
    pub engine: Engine,
}

impl DensityConfig {
    pub fn new(field: &Field, n: usize, d: u32) -> Self {
        DensityConfig {
            field: field.clone(),
            n,
            m: 0,
            d,
            mode: Mode::Exhaustive,
            avoid: Vec::new(),
            contain: None,
            removed: None,
            r: None,
            budget: Budget::default(),
            engine: Engine::Auto,
        }
    }

    pub fn q(&self) -> u64 {
        self.field.size() as u64
    }

    pub fn total_degree(&self) -> Result<u32> {
        u32::try_from(self.m + self.d as i64)
            .map_err(|_| Error::Invalid(format!("O({}) has no sections", self.m + self.d as i64)))
    }

    pub fn scan_bound(&self) -> u32 {
        self.r
            .unwrap_or_else(|| self.n as u32 * (self.m + self.d as i64).max(1) as u32)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("n must be at least 1".into()));
        }
        let nvars = self.n + 1;
        let bad = self.avoid.iter().any(|p| p.nvars() != nvars)
            || self.contain.as_ref().is_some_and(|z| z.nvars != nvars)
            || self.removed.as_ref().is_some_and(|z| z.nvars != nvars);
        if bad {
            return Err(Error::Invalid(format!("every point and subscheme must live in P^{}", self.n)));
        }
        if let Mode::Sample { samples: 0, .. } = self.mode {
            return Err(Error::Invalid("sample size must be positive".into()));
        }
        Ok(())
    }
}

/// The resolved experiment: section space, scan bound and the point sets
/// the predictions need.
pub(crate) struct Setup {
    pub n: usize,
    pub q: u64,
    pub r: u32,
    pub system: LinearSystem,
    pub system_certified: bool,
    pub avoid: Vec<ClosedPoint>,
    pub removed: Option<SubschemeSpec>,
    /// Removed points and `S`, degree `<= r`.
    excluded: BTreeSet<ClosedPoint>,
    /// Points of `Z ∩ X0` of degree `<= r`.
    z_points: BTreeSet<ClosedPoint>,
    z_dim: Option<i64>,
    contain: Option<SubschemeSpec>,
    budget: Budget,
}

fn locus_points(field: &Field, spec: &SubschemeSpec, r: u32, budget: &Budget) -> Result<BTreeSet<ClosedPoint>> {
    let mut out: BTreeSet<ClosedPoint> = spec
        .points
        .iter()
        .map(|p| p.point.clone())
        .filter(|p| p.degree() <= r)
        .collect();
    if !spec.generators.is_empty() {
        out.extend(closed_points(field, spec.nvars, &spec.generators, r, budget)?);
    }
    Ok(out)
}

/// `dim Z`: declared, else 0 for explicit points, else `n - #generators`.
fn subscheme_dim(z: &SubschemeSpec) -> i64 {
    if z.is_empty() {
        return -1;
    }
    z.dim.unwrap_or(if z.generators.is_empty() {
        0
    } else {
        (z.nvars as i64 - 1) - z.generators.len() as i64
    })
}

impl Setup {
    pub fn new(cfg: &DensityConfig) -> Result<Setup> {
        cfg.validate()?;
        let r = cfg.scan_bound();
        cfg.budget.check_level(r)?;
        let total = cfg.total_degree()?;
        let contain = cfg.contain.clone().filter(|z| !z.is_empty());
        let (system, system_certified) = match &contain {
            None => (twisted_system(&cfg.field, cfg.n, cfg.m, cfg.d), true),
            Some(z) => {
                let v = vanishing_system(&cfg.field, z, total, None, &cfg.budget)?;
                (v.system, v.certified)
            }
        };
        if system.dim() == 0 {
            return Err(Error::Invalid(format!("the linear system {} is zero", system.label)));
        }
        let mut avoid = cfg.avoid.clone();
        avoid.sort();
        avoid.dedup();
        let removed = cfg.removed.clone().filter(|z| !z.is_empty());
        let mut excluded: BTreeSet<ClosedPoint> = avoid.iter().filter(|p| p.degree() <= r).cloned().collect();
        if let Some(y) = &removed {
            excluded.extend(locus_points(&cfg.field, y, r, &cfg.budget)?);
        }
        let z_points = match &contain {
            Some(z) => locus_points(&cfg.field, z, r, &cfg.budget)?
                .into_iter()
                .filter(|p| !excluded.contains(p))
                .collect(),
            None => BTreeSet::new(),
        };
        Ok(Setup {
            n: cfg.n,
            q: cfg.q(),
            r,
            z_dim: contain.as_ref().map(subscheme_dim),
            system,
            system_certified,
            avoid,
            removed,
            excluded,
            z_points,
            contain,
            budget: cfg.budget,
        })
    }

    fn field(&self) -> &Field {
        self.system.field()
    }

    fn nvars(&self) -> usize {
        self.n + 1
    }

    /// Closed points of `X0` of degree `<= r`, in canonical order.
    pub fn x0_points(&self, r: u32, budget: &Budget) -> Result<Vec<ClosedPoint>> {
        Ok(closed_points(self.field(), self.nvars(), &[], r, budget)?
            .into_iter()
            .filter(|p| !self.excluded.contains(p))
            .collect())
    }

    fn in_x0(&self, ext: &Extension, coords: &[u32]) -> bool {
        if let Some(y) = &self.removed {
            if y.contains_coords(self.field(), ext, coords).unwrap_or(true) {
                return false;
            }
        }
        if self.avoid.iter().any(|s| s.degree() == ext.e) {
            let cp = ClosedPoint::from_point(self.field(), &ProjPoint::from_normalized(ext.e, coords.to_vec()));
            if cp.is_ok_and(|cp| self.avoid.contains(&cp)) {
                return false;
            }
        }
        true
    }

    /// Closed-point counts of `P^n` by degree `1..=r`.
    fn pn_closed_counts(&self, r: u32) -> Result<Vec<u64>> {
        if checked_pow(self.q, self.n * r as usize + 1).is_none() {
            return Err(Error::Budget(format!("point counts of P^{} at level {r} overflow", self.n)));
        }
        mobius_invert(&pn_point_counts(self.n as u32, self.q, r))
    }

    /// Per degree `e <= r`: `(points of X0 off Z, points of X0 on Z)`.
    fn degree_counts(&self, r: u32) -> Result<Vec<(u64, u64)>> {
        let a = self.pn_closed_counts(r)?;
        Ok((1..=r)
            .map(|e| {
                let excl = self.excluded.iter().filter(|p| p.degree() == e).count() as u64;
                let on_z = self.z_points.iter().filter(|p| p.degree() == e).count() as u64;
                (a[e as usize - 1] - excl - on_z, on_z)
            })
            .collect())
    }

    fn z_codim(&self) -> u64 {
        (self.n as i64 - self.z_dim.unwrap_or(0)).max(0) as u64
    }

    /// `Π_{x in X0, deg x <= r} (1 - q^{-(n+1) deg x})`, with the factor
    /// `1 - q^{-(n-l) deg x}` at points of `Z`, times the avoidance factor.
    pub fn truncated_prediction(&self, r: u32) -> Result<BigRational> {
        let n = self.n as u64;
        let mut acc = avoidance_factor(&self.avoid, self.q);
        for (i, &(free, on_z)) in self.degree_counts(r)?.iter().enumerate() {
            let e = i as u64 + 1;
            acc *= num_traits::pow(local_factor(self.q, (n + 1) * e), free as usize);
            acc *= num_traits::pow(local_factor(self.q, self.z_codim() * e), on_z as usize);
        }
        Ok(acc)
    }

    /// [`Setup::truncated_prediction`] in floating point.
    pub fn truncated_prediction_f64(&self, r: u32) -> Result<f64> {
        let n = self.n as f64;
        let q = self.q as f64;
        let mut log = to_f64(&avoidance_factor(&self.avoid, self.q)).ln();
        for (i, &(free, on_z)) in self.degree_counts(r)?.iter().enumerate() {
            let e = i as f64 + 1.0;
            log += free as f64 * (-q.powf(-(n + 1.0) * e)).ln_1p();
            if on_z > 0 {
                log += on_z as f64 * (-q.powf(-(self.z_codim() as f64) * e)).ln_1p();
            }
        }
        Ok(log.exp())
    }

    /// Largest `r' <= r` whose exact truncated product has a denominator
    /// of at most [`EXACT_BITS`] bits.
    pub fn exact_truncation_degree(&self, r: u32) -> Result<u32> {
        let bits_q = (self.q as f64).log2();
        let mut bits = 0.0;
        let mut best = 0;
        for (i, &(free, on_z)) in self.degree_counts(r)?.iter().enumerate() {
            let e = i as f64 + 1.0;
            bits += bits_q * e * (free as f64 * (self.n as f64 + 1.0) + on_z as f64 * self.z_codim() as f64);
            if bits > EXACT_BITS as f64 {
                break;
            }
            best = i as u32 + 1;
        }
        Ok(best)
    }

    /// The limiting density as `d -> ∞`, when it has a closed form.
    pub fn limit_prediction(&self) -> Result<Option<BigRational>> {
        let n = self.n as u32;
        let s = n + 1;
        let mut explicit: BTreeSet<ClosedPoint> = self.avoid.iter().cloned().collect();
        if let Some(y) = &self.removed {
            if !y.generators.is_empty() {
                return Ok(None);
            }
            explicit.extend(y.points.iter().map(|p| p.point.clone()));
        }
        let mut z_pts = Vec::new();
        if let Some(z) = &self.contain {
            let l = self.z_dim.unwrap_or(0);
            if self.n as i64 <= 2 * l {
                return Ok(Some(BigRational::zero()));
            }
            if l > 0 || !z.generators.is_empty() {
                return Ok(None);
            }
            z_pts = z.points.iter().map(|p| p.point.clone()).filter(|p| !explicit.contains(p)).collect();
        }
        let mut v = zeta_inv_pn(n, self.q, s)?;
        for x in explicit.iter().chain(&z_pts) {
            v /= local_factor(self.q, s as u64 * x.degree() as u64);
        }
        for x in &z_pts {
            v *= local_factor(self.q, n as u64 * x.degree() as u64);
        }
        Ok(Some(v * avoidance_factor(&self.avoid, self.q)))
    }

    fn classify_coords(&self, coords: &[u32]) -> Result<SectionClassification> {
        let f = self.system.combine(coords);
        classify_with(self, &f)
    }

    /// Least degree of a closed point of `X0`, the bucket of the zero section.
    fn x0_min_degree(&self) -> Result<Option<u32>> {
        for e in 1..=self.r {
            let ext = self.field().extension(e)?;
            let s = crate::geometry::solver::Solver::new(&[], &ext, self.nvars());
            if s
                .find_first(|p| crate::geometry::exact_degree(&ext, p) == e && self.in_x0(&ext, p))
                .is_some()
            {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Zero,
    SmoothOnX0,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionClassification {
    pub status: Status,
    /// Smallest degree of a closed point of `X0` where the divisor is
    /// singular, scanning up to the bound.
    pub least_singular_degree: Option<u32>,
    /// The section is nonzero at every point of `S`.
    pub avoided_s: bool,
}

/// Classifies `f` by the singular points of `div f` on
/// `X0 = P^n - (removed ∪ S)` of degree `<= r`.
pub fn classify_section(
    f: &MPoly,
    removed: Option<&SubschemeSpec>,
    avoid: &[ClosedPoint],
    r: u32,
    budget: &Budget,
) -> Result<SectionClassification> {
    let mut cfg = DensityConfig::new(f.field(), f.nvars() - 1, f.degree());
    cfg.avoid = avoid.to_vec();
    cfg.removed = removed.cloned();
    cfg.r = Some(r);
    cfg.budget = *budget;
    let setup = Setup::new(&cfg)?;
    classify_with(&setup, f)
}

fn classify_with(setup: &Setup, f: &MPoly) -> Result<SectionClassification> {
    if f.is_zero() {
        return Ok(SectionClassification {
            status: Status::Zero,
            least_singular_degree: None,
            avoided_s: setup.avoid.is_empty(),
        });
    }
    let field = setup.field();
    let mut avoided_s = true;
    for s in &setup.avoid {
        let ext = field.extension(s.degree())?;
        if f.eval_codes(&ext, s.representative().coords()) == 0 {
            avoided_s = false;
            break;
        }
    }
    let hit = first_singular_point(field, std::slice::from_ref(f), 1, setup.r, &setup.budget, |ext, p| {
        setup.in_x0(ext, p)
    })?;
    Ok(SectionClassification {
        status: if hit.is_some() { Status::Singular } else { Status::SmoothOnX0 },
        least_singular_degree: hit.map(|p| p.level()),
        avoided_s,
    })
}

/// Section counts by least singular degree and by `S`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Tally {
    /// `by_degree[e][hit]` for `e = 0` (none up to `r`) and `1..=r`.
    by_degree: Vec<[u64; 2]>,
    zero_bucket: Option<u32>,
    zero_hit: bool,
    has_zero: bool,
    total: u64,
}

impl Tally {
    fn new(r: u32) -> Self {
        Tally {
            by_degree: vec![[0; 2]; r as usize + 1],
            ..Default::default()
        }
    }

    fn add(&mut self, c: &SectionClassification) {
        self.total += 1;
        if c.status == Status::Zero {
            self.has_zero = true;
            return;
        }
        let e = c.least_singular_degree.unwrap_or(0) as usize;
        self.by_degree[e][usize::from(!c.avoided_s)] += 1;
    }

    fn r(&self) -> u32 {
        self.by_degree.len() as u32 - 1
    }

    fn smooth_avoiding(&self) -> u64 {
        self.by_degree[0][0]
    }

    fn smooth_meeting_s(&self) -> u64 {
        self.by_degree[0][1]
    }

    fn singular(&self) -> u64 {
        self.by_degree[1..].iter().map(|b| b[0] + b[1]).sum()
    }

    /// Sections, the zero section included, with no singular point of
    /// degree `<= r0` and nonzero on `S`.
    fn small_degree_count(&self, r0: u32) -> u64 {
        let nonzero: u64 = self
            .by_degree
            .iter()
            .enumerate()
            .filter(|&(e, _)| e == 0 || e as u32 > r0)
            .map(|(_, b)| b[0])
            .sum();
        let zero_counts = self.has_zero && !self.zero_hit && self.zero_bucket.is_none_or(|b| b > r0);
        nonzero + u64::from(zero_counts)
    }

    /// Nonzero sections whose least singular degree lies in `(r0, r]`.
    fn tail_count(&self, r0: u32) -> u64 {
        self.by_degree
            .iter()
            .enumerate()
            .skip(r0 as usize + 1)
            .map(|(_, b)| b[0] + b[1])
            .sum()
    }

    fn histogram(&self) -> Vec<u64> {
        self.by_degree[1..].iter().map(|b| b[0] + b[1]).collect()
    }
}

fn draw_samples(setup: &Setup, samples: u64, seed: u64) -> Vec<Vec<u32>> {
    let q = setup.q as u32;
    let dim = setup.system.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..q)).collect())
        .collect()
}

fn run_tally(cfg: &DensityConfig, setup: &Setup) -> Result<Tally> {
    let engine = match (cfg.engine, cfg.mode) {
        (Engine::Auto, Mode::Exhaustive) => Engine::Kernel,
        (Engine::Auto, Mode::Sample { .. }) => Engine::Direct,
        (Engine::Kernel, Mode::Sample { .. }) => {
            return Err(Error::Invalid("the kernel engine needs exhaustive mode".into()))
        }
        (e, _) => e,
    };
    let mut tally = Tally::new(setup.r);
    let zero_bucket = setup.x0_min_degree()?;
    tally.zero_bucket = zero_bucket;
    tally.zero_hit = !setup.avoid.is_empty();
    match cfg.mode {
        Mode::Exhaustive => {
            let total = cfg.budget.check_space(setup.q, setup.system.dim())?;
            if engine == Engine::Kernel {
                let ctx = Context::new(&setup.system, setup.r)?;
                let points = setup.x0_points(setup.r, &cfg.budget)?;
                let marks = kernel_union(&ctx, &points, &setup.avoid, total);
                for idx in 1..total {
                    let e = marks.least[idx as usize];
                    let e = if e == NONE { 0 } else { e as usize };
                    tally.by_degree[e][usize::from(marks.hit(idx))] += 1;
                }
                tally.total = total;
                tally.has_zero = true;
            } else {
                let classes: Vec<SectionClassification> = (0..total)
                    .into_par_iter()
                    .map(|idx| setup.classify_coords(&setup.system.counter_coords(idx)))
                    .collect::<Result<_>>()?;
                classes.iter().for_each(|c| tally.add(c));
            }
        }
        Mode::Sample { samples, seed } => {
            let draws = draw_samples(setup, samples, seed);
            let classes: Vec<SectionClassification> = draws
                .par_iter()
                .map(|c| setup.classify_coords(c))
                .collect::<Result<_>>()?;
            classes.iter().for_each(|c| tally.add(c));
        }
    }
    Ok(tally)
}

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn to_f64(r: &BigRational) -> f64 {
    crate::zeta::to_f64(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct Counts {
    pub zero: u64,
    pub smooth_avoiding: u64,
    pub smooth_meeting_s: u64,
    pub singular: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemInfo {
    pub label: String,
    pub degree: u32,
    pub dim: usize,
    /// The vanishing system is known to be exact.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub n: usize,
    pub p: u32,
    pub k: u32,
    pub q: u64,
    pub m: i64,
    pub d: u32,
    pub mode: Mode,
    pub scan_bound: u32,
    /// `floor((d - c) / (n + 1))`, the top of the medium-degree range.
    pub medium_max: u32,
    pub system: SystemInfo,
    pub classified: u64,
    pub counts: Counts,
    /// Entry `e - 1` counts nonzero sections with least singular degree `e`.
    pub least_singular_degree: Vec<u64>,
    pub empirical: Float,
    /// Present for exhaustive runs.
    pub empirical_exact: Option<Exact>,
    /// `sqrt(p(1-p)/N)` for sampled runs.
    pub std_error: Option<Float>,
    /// Exact truncated product over points of degree
    /// `<= predicted_truncated_degree`.
    pub predicted_truncated: Exact,
    pub predicted_truncated_degree: u32,
    /// Truncated product over points of degree `<= scan_bound`.
    pub predicted_truncated_float: Float,
    /// `None` when the limit has no closed form here.
    pub predicted_limit: Option<Exact>,
    pub predicted_limit_float: Option<Float>,
    pub avoid: Vec<String>,
    pub contain: Option<String>,
    pub contain_dim: Option<i64>,
    pub removed: Option<String>,
}

impl DensityReport {
    pub fn empirical_value(&self) -> f64 {
        self.empirical.0
    }

    pub fn limit(&self) -> Option<&BigRational> {
        self.predicted_limit.as_ref().map(|e| &e.0)
    }
}

/// Classifies every section (or a seeded sample) of the configured system.
pub fn density_experiment(cfg: &DensityConfig) -> Result<DensityReport> {
    let setup = Setup::new(cfg)?;
    let tally = run_tally(cfg, &setup)?;
    build_report(cfg, &setup, &tally)
}

fn build_report(cfg: &DensityConfig, setup: &Setup, tally: &Tally) -> Result<DensityReport> {
    let good = tally.smooth_avoiding();
    let exact = ratio(good, tally.total);
    let emp = to_f64(&exact);
    let exact_r = setup.exact_truncation_degree(tally.r())?;
    let truncated = setup.truncated_prediction(exact_r)?;
    let truncated_f = setup.truncated_prediction_f64(tally.r())?;
    let limit = setup.limit_prediction()?;
    let c = twist_constant(cfg.n, cfg.m);
    Ok(DensityReport {
        n: cfg.n,
        p: cfg.field.p(),
        k: cfg.field.k(),
        q: cfg.q(),
        m: cfg.m,
        d: cfg.d,
        mode: cfg.mode,
        scan_bound: tally.r(),
        medium_max: cfg.d.saturating_sub(c) / (cfg.n as u32 + 1),
        system: SystemInfo {
            label: setup.system.label.clone(),
            degree: setup.system.degree(),
            dim: setup.system.dim(),
            certified: setup.system_certified,
        },
        classified: tally.total,
        counts: Counts {
            zero: u64::from(tally.has_zero),
            smooth_avoiding: good,
            smooth_meeting_s: tally.smooth_meeting_s(),
            singular: tally.singular(),
        },
        least_singular_degree: tally.histogram(),
        empirical: Float(emp),
        empirical_exact: matches!(cfg.mode, Mode::Exhaustive).then(|| Exact(exact.clone())),
        std_error: match cfg.mode {
            Mode::Sample { samples, .. } => Some(Float((emp * (1.0 - emp) / samples as f64).sqrt())),
            Mode::Exhaustive => None,
        },
        predicted_truncated_float: Float(truncated_f),
        predicted_truncated: Exact(truncated),
        predicted_truncated_degree: exact_r,
        predicted_limit_float: limit.as_ref().map(|l| Float(to_f64(l))),
        predicted_limit: limit.map(Exact),
        avoid: setup.avoid.iter().map(|p| p.format(&cfg.field)).collect(),
        contain: setup.contain.as_ref().map(|z| z.label.clone()),
        contain_dim: setup.z_dim,
        removed: setup.removed.as_ref().map(|z| z.label.clone()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallDegreeReport {
    pub n: usize,
    pub q: u64,
    pub m: i64,
    pub d: u32,
    pub r: u32,
    pub points: usize,
    pub avoid: Vec<String>,
    /// `F_p`-rank of the jet map onto `X0'_{<=r} ∪ S`.
    pub jet_rank: usize,
    pub expected_rank: usize,
    /// Least degree at which the jet map reaches the expected rank.
    pub onset: Option<u32>,
    pub at_or_above_onset: bool,
    pub counted: u64,
    pub total: u64,
    pub lhs: Exact,
    pub rhs: Exact,
    pub equal: bool,
}

/// Jet specs for the closed points of `X0` up to `r` plus `S`, and the
/// `F_p`-rank the jet map has when the local conditions are independent.
fn small_degree_specs(setup: &Setup, points: &[ClosedPoint]) -> (Vec<PointSpec>, usize) {
    let k = setup.field().k() as usize;
    let l = setup.z_dim.unwrap_or(-1);
    let mut specs = Vec::new();
    let mut expected = 0usize;
    for x in points {
        specs.push(PointSpec {
            point: x.clone(),
            first_order: true,
        });
        let per = if setup.z_points.contains(x) {
            (setup.n as i64 - l).max(0) as usize
        } else {
            setup.n + 1
        };
        expected += per * x.degree() as usize * k;
    }
    for s in &setup.avoid {
        specs.push(PointSpec {
            point: s.clone(),
            first_order: false,
        });
        expected += s.degree() as usize * k;
    }
    (specs, expected)
}

/// Exact count of sections with no singular point of degree `<= r` on
/// `X0` (and nonzero on `S`), against the truncated product.
pub fn exact_small_degree_check(cfg: &DensityConfig, r: u32) -> Result<SmallDegreeReport> {
    if cfg.mode != Mode::Exhaustive {
        return Err(Error::Invalid("the small-degree check is exhaustive".into()));
    }
    let mut cfg = cfg.clone();
    cfg.r = Some(r);
    let setup = Setup::new(&cfg)?;
    let points = setup.x0_points(r, &cfg.budget)?;
    let (specs, expected) = small_degree_specs(&setup, &points);
    let jet_rank = jet_map_specs(&setup.system, &specs)?.rank();

    let mut onset = None;
    for d0 in 0..=cfg.d {
        let mut c0 = cfg.clone();
        c0.d = d0;
        if c0.total_degree().is_err() {
            continue;
        }
        let Ok(s0) = Setup::new(&c0) else { continue };
        if jet_map_specs(&s0.system, &specs)?.rank() == expected {
            onset = Some(d0);
            break;
        }
    }

    let tally = if r == 0 {
        let total = cfg.budget.check_space(setup.q, setup.system.dim())?;
        let mut t = Tally::new(0);
        t.total = total;
        t.has_zero = true;
        t.zero_hit = !setup.avoid.is_empty();
        // Without S every section qualifies; with S, count the ones nonzero there.
        if setup.avoid.is_empty() {
            t.by_degree[0][0] = total - 1;
        } else {
            let ctx = Context::new(&setup.system, 1)?;
            let marks = kernel_union(&ctx, &[], &setup.avoid, total);
            for idx in 1..total {
                t.by_degree[0][usize::from(marks.hit(idx))] += 1;
            }
        }
        t
    } else {
        let mut c = cfg.clone();
        c.engine = Engine::Kernel;
        run_tally(&c, &setup)?
    };
    let counted = tally.small_degree_count(r);
    let lhs = ratio(counted, tally.total);
    let rhs = setup.truncated_prediction(r)?;
    Ok(SmallDegreeReport {
        n: cfg.n,
        q: cfg.q(),
        m: cfg.m,
        d: cfg.d,
        r,
        points: points.len(),
        avoid: setup.avoid.iter().map(|p| p.format(&cfg.field)).collect(),
        jet_rank,
        expected_rank: expected,
        at_or_above_onset: jet_rank == expected,
        onset,
        counted,
        total: tally.total,
        equal: lhs == rhs,
        lhs: Exact(lhs),
        rhs: Exact(rhs),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PointProportionReport {
    pub point: String,
    pub degree: u32,
    pub n: usize,
    pub q: u64,
    pub m: i64,
    pub d: u32,
    /// `d >= (n + 1) deg x + c`.
    pub in_range: bool,
    pub jet_rank: usize,
    pub jet_target: usize,
    pub surjective: bool,
    pub predicted: Exact,
    pub rank_based: Exact,
    /// Fraction singular at `x` over the whole section space, when it fits
    /// the exhaustive budget.
    pub empirical: Option<Exact>,
}

/// Proportion of sections whose divisor is singular at `x`.
pub fn singular_at_point_proportion(x: &ClosedPoint, cfg: &DensityConfig) -> Result<PointProportionReport> {
    let mut c = cfg.clone();
    c.avoid.clear();
    c.r = Some(x.degree());
    let setup = Setup::new(&c)?;
    let field = &cfg.field;
    let sys = &setup.system;
    let e = x.degree();
    let spec = PointSpec {
        point: x.clone(),
        first_order: true,
    };
    let jm = jet_map_specs(sys, &[spec])?;
    let rank = jm.rank();
    let p = field.p() as u64;
    let rank_based = BigRational::new(BigInt::one(), BigInt::from(p).pow(rank as u32));
    let predicted = BigRational::new(
        BigInt::one(),
        BigInt::from(cfg.q()).pow((cfg.n as u32 + 1) * e),
    );

    let empirical = match cfg.budget.check_space(cfg.q(), sys.dim()) {
        Ok(total) => {
            let ext = field.extension(e)?;
            let jets = basis_jets(sys, &ext, x.representative(), true);
            let fe = &ext.field;
            let hits = (0..total)
                .into_par_iter()
                .filter(|&idx| {
                    let coords = sys.counter_coords(idx);
                    let mut acc = vec![0u32; jets[0].len()];
                    for (c, jet) in coords.iter().zip(&jets) {
                        if *c != 0 {
                            let ce = ext.embed(*c);
                            for (a, &v) in acc.iter_mut().zip(jet) {
                                *a = fe.add(*a, fe.mul(ce, v));
                            }
                        }
                    }
                    acc.iter().all(|&a| a == 0)
                })
                .count() as u64;
            Some(Exact(ratio(hits, total)))
        }
        Err(_) => None,
    };
    let c0 = twist_constant(cfg.n, cfg.m);
    Ok(PointProportionReport {
        point: x.format(field),
        degree: e,
        n: cfg.n,
        q: cfg.q(),
        m: cfg.m,
        d: cfg.d,
        in_range: cfg.d >= (cfg.n as u32 + 1) * e + c0,
        jet_rank: rank,
        jet_target: jm.target_dim(),
        surjective: jm.is_surjective(),
        predicted: Exact(predicted),
        rank_based: Exact(rank_based),
        empirical,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TailRow {
    pub r: u32,
    pub count: u64,
    pub fraction: Exact,
    pub fraction_float: Float,
}

#[derive(Clone, Debug, Serialize)]
pub struct TailReport {
    pub n: usize,
    pub q: u64,
    pub d: u32,
    pub mode: Mode,
    pub scan_bound: u32,
    pub total: u64,
    pub rows: Vec<TailRow>,
    pub nonincreasing: bool,
    /// `max_{r >= 1} fraction(r) q^r`.
    pub fitted_c: Float,
    /// Least-squares slope of `log_q fraction` against `r` over the
    /// positive rows with `r >= 1`.
    pub slope: Option<Float>,
}

impl TailReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,r,count,total,fraction\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{:.16e}\n",
                self.d, row.r, row.count, self.total, row.fraction_float.0
            ));
        }
        out
    }
}

/// Fraction of sections singular only at points of degree `> r`, for each
/// requested `r`. The scan bound must exceed every requested `r`.
pub fn tail_measurement(cfg: &DensityConfig, r_values: &[u32]) -> Result<TailReport> {
    let setup = Setup::new(cfg)?;
    if let Some(&bad) = r_values.iter().find(|&&r| r >= setup.r) {
        return Err(Error::Invalid(format!(
            "r = {bad} is not below the scan bound {}",
            setup.r
        )));
    }
    let tally = run_tally(cfg, &setup)?;
    let q = cfg.q() as f64;
    let rows: Vec<TailRow> = r_values
        .iter()
        .map(|&r| {
            let count = tally.tail_count(r);
            let fr = ratio(count, tally.total);
            TailRow {
                r,
                count,
                fraction_float: Float(to_f64(&fr)),
                fraction: Exact(fr),
            }
        })
        .collect();
    let mut sorted: Vec<&TailRow> = rows.iter().collect();
    sorted.sort_by_key(|row| row.r);
    let nonincreasing = sorted.windows(2).all(|w| w[1].count <= w[0].count);
    let fitted_c = rows
        .iter()
        .filter(|row| row.r >= 1)
        .map(|row| row.fraction_float.0 * q.powi(row.r as i32))
        .fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|row| row.r >= 1 && row.count > 0)
        .map(|row| (row.r as f64, row.fraction_float.0.ln() / q.ln()))
        .collect();
    let slope = (pts.len() >= 2).then(|| {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Float(sxy / sxx)
    });
    Ok(TailReport {
        n: cfg.n,
        q: cfg.q(),
        d: cfg.d,
        mode: cfg.mode,
        scan_bound: setup.r,
        total: tally.total,
        rows,
        nonincreasing,
        fitted_c: Float(fitted_c),
        slope,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentReport {
    pub label: String,
    pub n: usize,
    /// `dim Z`, `-1` when empty.
    pub l: i64,
    /// `n > 2l`: the limit is positive.
    pub positive_case: bool,
    pub predicted_limit: Option<Exact>,
    pub runs: Vec<DensityReport>,
}

/// Density experiments on `H^0(I_Z(d))` for each `d`.
pub fn containment_density(z: &SubschemeSpec, cfg: &DensityConfig, degrees: &[u32]) -> Result<ContainmentReport> {
    if degrees.is_empty() {
        return Err(Error::Invalid("no degrees given".into()));
    }
    let l = subscheme_dim(z);
    let mut runs = Vec::new();
    for &d in degrees {
        let mut c = cfg.clone();
        c.d = d;
        c.contain = Some(z.clone()).filter(|z| !z.is_empty());
        runs.push(density_experiment(&c)?);
    }
    let predicted_limit = runs[0].predicted_limit.clone();
    Ok(ContainmentReport {
        label: z.label.clone(),
        n: cfg.n,
        l,
        positive_case: (cfg.n as i64) > 2 * l,
        predicted_limit,
        runs,
    })
}
