//! Replacing a singular curve by a difference of smooth curves.
//!
//! In `P^2` a singular curve `Z = div σ_Z` of degree `m` satisfies
//! `Z + div β ~ div σ'` for any `β` of degree `d - m` and `σ'` of degree
//! `d`; choosing both divisors smooth (and `div β` away from `Sing Z`)
//! gives `Z ~ Z1 - Z2` with `Z1 = div σ'`, `Z2 = div β` smooth.
//!
//! In `P^3` a singular curve `Z` is linked by a complete intersection
//! `V(σ1, σ2) = Z ∪ Z'` with `σ_i ∈ H^0(I_Z(d_i))`, and `V(σ'1, σ'2)` of the
//! same degrees is a smooth complete intersection, so `Z ~ Z1 - Z'`. The
//! residual `Z'` is smooth when it misses `Sing Z`, the complete
//! intersection has Jacobian rank 2 off `Z`, and `Z ∪ Z'` has ordinary
//! nodes where `Z'` meets `Z`.
//!
//! Smoothness is certified up to a scan bound on point degrees.

mod local;

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{make_field, Extension, Field};
use crate::geometry::{
    closed_points, first_point, first_singular_point, jacobian_rank_at, singular_closed_points, ClosedPoint,
    ProjPoint, SubschemeSpec,
};
use crate::linalg::EchelonBasis;
use crate::poly::MPoly;
use crate::sections::{full_system, graded_ideal_piece, LinearSystem};

pub use local::{local_node_test, LOCAL_ORDER};

/// Spaces up to this size are searched exhaustively in `Auto` mode.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;

/// Residual points are listed in certificates up to this degree.
pub const LIST_DEGREE: u32 = 2;

const BATCH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Auto,
    Exhaustive,
    Sample,
}

#[derive(Clone, Debug)]
pub struct SmoothingOptions {
    pub mode: SearchMode,
    pub seed: u64,
    /// Scan bound for every smoothness check; per-stage defaults otherwise.
    pub r: Option<u32>,
    pub budget: Budget,
}

impl Default for SmoothingOptions {
    fn default() -> Self {
        SmoothingOptions {
            mode: SearchMode::Auto,
            seed: 0,
            r: None,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub level: u32,
    pub coords: Vec<u32>,
    pub text: String,
}

impl PointRecord {
    fn new(base: &Field, x: &ClosedPoint) -> Self {
        PointRecord {
            level: x.degree(),
            coords: x.representative().coords().to_vec(),
            text: x.format(base),
        }
    }

    fn to_point(&self, base: &Field, nvars: usize) -> Result<ClosedPoint> {
        if self.coords.len() != nvars || self.level == 0 {
            return Err(Error::Invalid(format!("malformed point record {:?}", self.text)));
        }
        let ext = base.extension(self.level)?;
        if self.coords.iter().any(|&c| c >= ext.field.size()) {
            return Err(Error::Invalid(format!("coordinate out of range in {:?}", self.text)));
        }
        let p = ProjPoint::normalize(&ext, &self.coords)
            .ok_or_else(|| Error::Invalid(format!("zero point record {:?}", self.text)))?;
        ClosedPoint::from_point(base, &p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `div(σ_Z β)` and `div σ'` are both divisors of degree `d`.
    Plane {
        sigma_z: String,
        beta: String,
        sigma_prime: String,
    },
    /// `V(σ1, σ2) = Z ∪ Z2` and `V(σ'1, σ'2) = Z1`.
    Space { sigma: Vec<String>, sigma_prime: Vec<String> },
}

/// `Z2`: for `n = 2` the curve `div β`; for `n = 3` the closure of
/// `V(σ1, σ2) - Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub description: String,
    pub listed_up_to: u32,
    /// Points of `Z2` off `Z`.
    pub points: Vec<PointRecord>,
    /// Points where `Z2` meets `Z`.
    pub meets_z: Vec<PointRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageLog {
    pub stage: String,
    pub degree: u32,
    pub mode: SearchMode,
    pub space: Option<u64>,
    pub tried: u64,
    pub found: bool,
    pub rejections: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLog {
    pub mode: SearchMode,
    pub seed: u64,
    pub scan_bound: u32,
    pub stages: Vec<StageLog>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub clause: String,
    pub name: String,
    pub passed: bool,
    pub detail: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationLog {
    pub r: u32,
    pub certified_up_to: u32,
    pub search_bound: u32,
    pub note: Option<String>,
    pub clauses: Vec<Clause>,
    pub passed: bool,
}

impl VerificationLog {
    pub fn failed_clauses(&self) -> Vec<&Clause> {
        self.clauses.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothingCertificate {
    pub ambient: usize,
    pub p: u32,
    pub k: u32,
    pub z: CurveRecord,
    pub sing_z: Vec<PointRecord>,
    /// `[d]` for `n = 2`, `[d1, d2]` for `n = 3`.
    pub degrees: Vec<u32>,
    pub witness: Witness,
    pub z1: Vec<String>,
    pub z2: ResidualRecord,
    pub search: SearchLog,
    pub log: Option<VerificationLog>,
}

impl SmoothingCertificate {
    pub fn field(&self) -> Result<Field> {
        make_field(self.p, self.k)
    }
}

/// Closed points of `V(f1, f2)` up to degree `r`, split by membership in
/// `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualPartition {
    pub on_z: Vec<ClosedPoint>,
    pub off_z: Vec<ClosedPoint>,
}

pub fn residual_points(f1: &MPoly, f2: &MPoly, z: &SubschemeSpec, r: u32, budget: &Budget) -> Result<ResidualPartition> {
    let base = f1.field();
    let mut out = ResidualPartition {
        on_z: Vec::new(),
        off_z: Vec::new(),
    };
    for x in closed_points(base, f1.nvars(), &[f1.clone(), f2.clone()], r, budget)? {
        if z.contains(base, x.representative())? {
            out.on_z.push(x);
        } else {
            out.off_z.push(x);
        }
    }
    Ok(out)
}

type Verdict = std::result::Result<(), &'static str>;

struct Search<'a> {
    opts: &'a SmoothingOptions,
    stages: Vec<StageLog>,
}

impl Search<'_> {
    /// First candidate of `system` accepted by `eval`: in counter order
    /// when exhaustive, in draw order when sampling.
    fn run(
        &mut self,
        stage: &str,
        system: &LinearSystem,
        salt: u64,
        eval: impl Fn(&MPoly) -> Result<Verdict> + Sync,
    ) -> Result<Option<MPoly>> {
        let q = system.field().size() as u64;
        let space = system.cardinality();
        let mode = match self.opts.mode {
            SearchMode::Auto if space.is_some_and(|s| s <= EXHAUSTIVE_LIMIT) => SearchMode::Exhaustive,
            SearchMode::Auto => SearchMode::Sample,
            m => m,
        };
        let mut log = StageLog {
            stage: stage.to_string(),
            degree: system.degree(),
            mode,
            space,
            tried: 0,
            found: false,
            rejections: BTreeMap::new(),
        };
        let mut found = None;
        if system.dim() > 0 {
            let (cap, mut next): (u64, Box<dyn FnMut() -> Vec<u32>>) = match mode {
                SearchMode::Exhaustive => {
                    let total = self.opts.budget.check_space(q, system.dim())?;
                    let mut idx = 0u64;
                    let sys = system.clone();
                    (
                        total - 1,
                        Box::new(move || {
                            idx += 1;
                            sys.counter_coords(idx)
                        }),
                    )
                }
                _ => {
                    let seed = self.opts.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let dim = system.dim();
                    (
                        self.opts.budget.candidates,
                        Box::new(move || (0..dim).map(|_| rng.gen_range(0..q as u32)).collect()),
                    )
                }
            };
            // Sampling stops early once every nonzero section was drawn.
            let small = mode == SearchMode::Sample && space.is_some_and(|s| s <= cap);
            let mut seen: HashSet<Vec<u32>> = HashSet::new();
            let mut done = 0u64;
            'outer: while done < cap {
                if small && seen.len() as u64 + 1 >= space.unwrap_or(0) {
                    break;
                }
                let n = (cap - done).min(BATCH as u64) as usize;
                let batch: Vec<Vec<u32>> = (0..n).map(|_| next()).collect();
                if small {
                    seen.extend(batch.iter().filter(|c| c.iter().any(|&x| x != 0)).cloned());
                }
                done += n as u64;
                let verdicts: Vec<Result<Verdict>> = batch
                    .par_iter()
                    .map(|c| {
                        if c.iter().all(|&x| x == 0) {
                            Ok(Err("zero section"))
                        } else {
                            eval(&system.combine(c))
                        }
                    })
                    .collect();
                for (c, v) in batch.iter().zip(verdicts) {
                    log.tried += 1;
                    match v? {
                        Ok(()) => {
                            found = Some(system.combine(c));
                            break 'outer;
                        }
                        Err(reason) => *log.rejections.entry(reason.to_string()).or_insert(0) += 1,
                    }
                }
            }
        }
        log.found = found.is_some();
        self.stages.push(log);
        Ok(found)
    }

    fn exhausted(&self, what: &str) -> Error {
        let mut reasons: BTreeMap<&str, u64> = BTreeMap::new();
        for s in &self.stages {
            for (k, v) in &s.rejections {
                *reasons.entry(k).or_insert(0) += v;
            }
        }
        let worst = reasons
            .iter()
            .max_by_key(|(_, &v)| v)
            .map(|(k, v)| format!("; most frequent rejection: {k} ({v} candidates)"))
            .unwrap_or_default();
        Error::SearchExhausted(format!("{what}{worst}"))
    }
}

fn on_set(base: &Field, ext: &Extension, coords: &[u32], set: &[ClosedPoint]) -> bool {
    if set.is_empty() {
        return false;
    }
    let p = ProjPoint::from_normalized(ext.e, coords.to_vec());
    ClosedPoint::from_point(base, &p).is_ok_and(|x| set.contains(&x))
}

fn vanishes_at(f: &MPoly, x: &ClosedPoint) -> Result<bool> {
    let ext = f.field().extension(x.degree())?;
    Ok(f.eval_codes(&ext, x.representative().coords()) == 0)
}

fn is_smooth_hypersurface(f: &MPoly, r: u32, budget: &Budget, skip: &[ClosedPoint]) -> Result<bool> {
    let base = f.field();
    Ok(first_singular_point(base, std::slice::from_ref(f), 1, r, budget, |ext, p| !on_set(base, ext, p, skip))?.is_none())
}

fn texts(fs: &[&MPoly]) -> Vec<String> {
    fs.iter().map(|f| f.to_text()).collect()
}

fn records(base: &Field, pts: &[ClosedPoint]) -> Vec<PointRecord> {
    pts.iter().map(|x| PointRecord::new(base, x)).collect()
}

/// A complement of `sub` inside `system`.
fn complement(system: &LinearSystem, sub: &LinearSystem) -> LinearSystem {
    let field = system.field();
    let mut eb = EchelonBasis::new(field, system.basis().ncols());
    for r in sub.basis().rows() {
        eb.insert(r.to_vec());
    }
    let rows: Vec<Vec<u32>> = system.basis().rows().filter(|r| eb.insert(r.to_vec())).map(|r| r.to_vec()).collect();
    LinearSystem::from_basis(field, system.nvars(), system.degree(), rows, format!("{} mod σ", system.label))
}

/// Candidates for the second form of a complete intersection, modulo
/// multiples of the first.
fn modulo(system: &LinearSystem, first: &MPoly) -> Result<LinearSystem> {
    if first.degree() > system.degree() {
        return Ok(system.clone());
    }
    let multiples = graded_ideal_piece(std::slice::from_ref(first), system.degree())?;
    Ok(complement(system, &multiples))
}

/// Finds `Z ~ div σ' - div β` for a singular plane curve `Z = div σ_Z`,
/// trying `d = m + 1, ..., d_max` in turn.
pub fn smooth_p2(sigma_z: &MPoly, d_max: u32, opts: &SmoothingOptions) -> Result<SmoothingCertificate> {
    if sigma_z.nvars() != 3 {
        return Err(Error::Invalid("smooth_p2 needs a form in 3 variables".into()));
    }
    if sigma_z.is_zero() || sigma_z.degree() == 0 {
        return Err(Error::Invalid("σ_Z must be a nonconstant form".into()));
    }
    let base = sigma_z.field().clone();
    let m = sigma_z.degree();
    if d_max < m + 1 {
        return Err(Error::Invalid(format!("d_max must be at least {}", m + 1)));
    }
    let budget = &opts.budget;
    let sing = singular_closed_points(&base, std::slice::from_ref(sigma_z), 1, opts.r.unwrap_or(2 * m), budget)?;
    if sing.is_empty() {
        return Err(Error::Precondition("input not singular".into()));
    }
    let mut search = Search { opts, stages: Vec::new() };
    for d in m + 1..=d_max {
        let r = opts.r.unwrap_or(2 * d);
        let beta_sys = full_system(&base, 2, d - m);
        let beta = search.run("beta", &beta_sys, d as u64, |b| {
            for x in &sing {
                if vanishes_at(b, x)? {
                    return Ok(Err("meets Sing Z"));
                }
            }
            Ok(if is_smooth_hypersurface(b, r, budget, &[])? { Ok(()) } else { Err("singular divisor") })
        })?;
        let Some(beta) = beta else { continue };
        let sigma_sys = full_system(&base, 2, d);
        let sigma = search.run("sigma_prime", &sigma_sys, 1000 + d as u64, |s| {
            Ok(if is_smooth_hypersurface(s, r, budget, &[])? { Ok(()) } else { Err("singular divisor") })
        })?;
        let Some(sigma) = sigma else { continue };
        let z = SubschemeSpec::new("Z", 3, vec![sigma_z.clone()])?;
        let list = r.min(LIST_DEGREE);
        let split = residual_points(&beta, &beta, &z, list, budget)?;
        let mut cert = SmoothingCertificate {
            ambient: 2,
            p: base.p(),
            k: base.k(),
            z: CurveRecord {
                label: "Z".into(),
                generators: texts(&[sigma_z]),
            },
            sing_z: records(&base, &sing),
            degrees: vec![d],
            witness: Witness::Plane {
                sigma_z: sigma_z.to_text(),
                beta: beta.to_text(),
                sigma_prime: sigma.to_text(),
            },
            z1: texts(&[&sigma]),
            z2: ResidualRecord {
                description: format!("div({beta})"),
                listed_up_to: list,
                points: records(&base, &split.off_z),
                meets_z: records(&base, &split.on_z),
            },
            search: SearchLog {
                mode: opts.mode,
                seed: opts.seed,
                scan_bound: r,
                stages: search.stages,
            },
            log: None,
        };
        cert.log = Some(verify_certificate_with(&cert, r, budget)?);
        return Ok(cert);
    }
    Err(search.exhausted(&format!("no smoothing witness with d <= {d_max}")))
}

/// Default scan bound for a pair of degrees in `P^3`.
fn p3_bound(opts: &SmoothingOptions, d1: u32, d2: u32) -> u32 {
    opts.r.unwrap_or(d1 + d2)
}

fn sing_bound(opts: &SmoothingOptions, z: &SubschemeSpec) -> u32 {
    opts.r
        .unwrap_or(2 * z.generators.iter().map(|g| g.degree()).sum::<u32>())
}

/// Why `σ2` fails to link `Z` to a smooth residual, if it does.
fn residual_verdict(
    s1: &MPoly,
    s2: &MPoly,
    z: &SubschemeSpec,
    sing: &[ClosedPoint],
    r: u32,
    budget: &Budget,
) -> Result<Verdict> {
    let base = s1.field();
    let forms = [s1.clone(), s2.clone()];
    let off_z = |ext: &Extension, p: &[u32]| !z.contains_coords(base, ext, p).unwrap_or(true);
    if first_singular_point(base, &forms, 2, r, budget, off_z)?.is_some() {
        return Ok(Err("residual singular"));
    }
    if first_point(base, &forms, r, budget, off_z)?.is_none() {
        return Ok(Err("empty residual"));
    }
    for x in sing {
        if local::residual_avoids(s1, s2, z, x)? != Some(true) {
            return Ok(Err("residual meets Sing Z"));
        }
    }
    for x in singular_closed_points(base, &forms, 2, r, budget)? {
        if sing.contains(&x) || !z.contains(base, x.representative())? {
            continue;
        }
        match local_node_test(s1, s2, z, &x) {
            Ok(true) => {}
            Ok(false) | Err(Error::Precondition(_)) => return Ok(Err("node test")),
            Err(e) => return Err(e),
        }
    }
    Ok(Ok(()))
}

/// Finds `Z ~ V(σ'1, σ'2) - Z'` for a singular curve `Z ⊂ P^3`, trying
/// degree pairs by total degree, then by `d1`.
pub fn smooth_p3(z: &SubschemeSpec, d1_max: u32, d2_max: u32, opts: &SmoothingOptions) -> Result<SmoothingCertificate> {
    if z.nvars != 4 {
        return Err(Error::Invalid("smooth_p3 needs a curve in P^3".into()));
    }
    if z.generators.is_empty() {
        return Err(Error::Invalid("Z needs generators".into()));
    }
    let base = z.generators[0].field().clone();
    let budget = &opts.budget;
    let sing = singular_closed_points(&base, &z.generators, 2, sing_bound(opts, z), budget)?;
    if sing.is_empty() {
        return Err(Error::Precondition("input not singular".into()));
    }
    let mut pairs: Vec<(u32, u32)> = (1..=d1_max).flat_map(|a| (1..=d2_max).map(move |b| (a, b))).collect();
    pairs.sort_by_key(|&(a, b)| (a + b, a));
    let mut search = Search { opts, stages: Vec::new() };
    let mut surfaces: BTreeMap<(u32, u32), Option<MPoly>> = BTreeMap::new();
    let mut smooth_surfaces: BTreeMap<(u32, u32), Option<MPoly>> = BTreeMap::new();
    for (d1, d2) in pairs {
        let r = p3_bound(opts, d1, d2);
        let i1 = graded_ideal_piece(&z.generators, d1)?;
        let i2 = graded_ideal_piece(&z.generators, d2)?;
        if i1.dim() == 0 || i2.dim() == 0 {
            continue;
        }
        if let std::collections::btree_map::Entry::Vacant(e) = surfaces.entry((d1, r)) {
            let s1 = search.run("sigma1", &i1, d1 as u64, |s| {
                Ok(if is_smooth_hypersurface(s, r, budget, &sing)? { Ok(()) } else { Err("surface singular off Sing Z") })
            })?;
            e.insert(s1);
        }
        let Some(s1) = surfaces[&(d1, r)].clone() else { continue };
        let cands = modulo(&i2, &s1)?;
        let salt = 100 * d1 as u64 + d2 as u64;
        let s2 = search.run("sigma2", &cands, 1000 + salt, |s2| residual_verdict(&s1, s2, z, &sing, r, budget))?;
        let Some(s2) = s2 else { continue };
        if let std::collections::btree_map::Entry::Vacant(e) = smooth_surfaces.entry((d1, r)) {
            let t1 = search.run("sigma1_prime", &full_system(&base, 3, d1), 2000 + d1 as u64, |s| {
                Ok(if is_smooth_hypersurface(s, r, budget, &[])? { Ok(()) } else { Err("singular surface") })
            })?;
            e.insert(t1);
        }
        let Some(t1) = smooth_surfaces[&(d1, r)].clone() else { continue };
        let cands = modulo(&full_system(&base, 3, d2), &t1)?;
        let t2 = search.run("sigma2_prime", &cands, 3000 + salt, |t2| {
            let forms = [t1.clone(), t2.clone()];
            Ok(if first_singular_point(&base, &forms, 2, r, budget, |_, _| true)?.is_some() {
                Err("singular complete intersection")
            } else {
                Ok(())
            })
        })?;
        let Some(t2) = t2 else { continue };
        let list = r.min(LIST_DEGREE);
        let split = residual_points(&s1, &s2, z, list, budget)?;
        let meets: Vec<ClosedPoint> = singular_closed_points(&base, &[s1.clone(), s2.clone()], 2, list, budget)?
            .into_iter()
            .filter(|x| z.contains(&base, x.representative()).unwrap_or(false) && !sing.contains(x))
            .collect();
        let mut cert = SmoothingCertificate {
            ambient: 3,
            p: base.p(),
            k: base.k(),
            z: CurveRecord {
                label: z.label.clone(),
                generators: z.generators.iter().map(|g| g.to_text()).collect(),
            },
            sing_z: records(&base, &sing),
            degrees: vec![d1, d2],
            witness: Witness::Space {
                sigma: texts(&[&s1, &s2]),
                sigma_prime: texts(&[&t1, &t2]),
            },
            z1: texts(&[&t1, &t2]),
            z2: ResidualRecord {
                description: format!("closure of V({s1}, {s2}) - {}", z.label),
                listed_up_to: list,
                points: records(&base, &split.off_z),
                meets_z: records(&base, &meets),
            },
            search: SearchLog {
                mode: opts.mode,
                seed: opts.seed,
                scan_bound: r,
                stages: search.stages,
            },
            log: None,
        };
        cert.log = Some(verify_certificate_with(&cert, r, budget)?);
        return Ok(cert);
    }
    Err(search.exhausted(&format!("no linkage with d1 <= {d1_max}, d2 <= {d2_max}")))
}

struct Checker {
    clauses: Vec<Clause>,
}

impl Checker {
    fn clause(&mut self, clause: &str, name: &str, detail: Vec<String>) {
        self.clauses.push(Clause {
            clause: clause.into(),
            name: name.into(),
            passed: detail.is_empty(),
            detail,
        });
    }
}

fn parse_all(base: &Field, nvars: usize, texts: &[String]) -> Result<Vec<MPoly>> {
    texts.iter().map(|t| MPoly::parse(base, nvars, t)).collect()
}

/// Re-checks a certificate from its polynomials alone, scanning points up
/// to degree `r`.
pub fn verify_certificate(cert: &SmoothingCertificate, r: u32) -> Result<VerificationLog> {
    verify_certificate_with(cert, r, &Budget::default())
}

pub fn verify_certificate_with(cert: &SmoothingCertificate, r: u32, budget: &Budget) -> Result<VerificationLog> {
    if r == 0 {
        return Err(Error::Invalid("verification needs r >= 1".into()));
    }
    let base = cert.field()?;
    let nvars = cert.ambient + 1;
    let gens = parse_all(&base, nvars, &cert.z.generators)?;
    let z = SubschemeSpec::new(cert.z.label.clone(), nvars, gens)?;
    if z.generators.is_empty() {
        return Err(Error::Invalid("certificate has no generators for Z".into()));
    }
    let codim = cert.ambient - 1;
    let recorded = cert
        .sing_z
        .iter()
        .map(|p| p.to_point(&base, nvars))
        .collect::<Result<Vec<_>>>()?;
    let mut sing = singular_closed_points(&base, &z.generators, codim, r, budget)?;
    let mut ck = Checker { clauses: Vec::new() };
    let mut sing_issues = Vec::new();
    for x in &recorded {
        let on = z.generators.iter().all(|g| vanishes_at(g, x).unwrap_or(false));
        if !on || jacobian_rank_at(&base, &z.generators, x.representative())? >= codim {
            sing_issues.push(format!("recorded point {} is not a singular point of Z", x.format(&base)));
        } else if x.degree() > r {
            sing.push(x.clone());
        } else if !sing.contains(x) {
            sing_issues.push(format!("recorded point {} not found by the scan", x.format(&base)));
        }
    }
    for x in &sing {
        if x.degree() <= r && !recorded.contains(x) {
            sing_issues.push(format!("singular point {} missing from the certificate", x.format(&base)));
        }
    }
    match (&cert.witness, cert.ambient) {
        (Witness::Plane { sigma_z, beta, sigma_prime }, 2) => {
            let sz = MPoly::parse(&base, 3, sigma_z)?;
            let b = MPoly::parse(&base, 3, beta)?;
            let s = MPoly::parse(&base, 3, sigma_prime)?;
            // (a) div(σ_Z β) = Z ∪ div β at every scanned point.
            let mut a = Vec::new();
            if sz != z.generators[0] || z.generators.len() != 1 {
                a.push("σ_Z differs from the generator of Z".to_string());
            }
            let prod = sz.mul(&b)?;
            for x in closed_points(&base, 3, &[prod], r, budget)? {
                if !vanishes_at(&sz, &x)? && !vanishes_at(&b, &x)? {
                    a.push(format!("{} is on div(σ_Z β) only", x.format(&base)));
                }
            }
            for x in closed_points(&base, 3, std::slice::from_ref(&b), r, budget)? {
                if !vanishes_at(&sz.mul(&b)?, &x)? {
                    a.push(format!("{} is on div β but not on div(σ_Z β)", x.format(&base)));
                }
            }
            ck.clause("a", "containment", a);
            // (b) smoothness of both divisors.
            let mut bb = Vec::new();
            for (name, f) in [("div β", &b), ("div σ'", &s)] {
                if f.is_zero() {
                    bb.push(format!("{name}: zero form"));
                    continue;
                }
                for x in singular_closed_points(&base, std::slice::from_ref(f), 1, r, budget)? {
                    bb.push(format!("{name} is singular at {}", x.format(&base)));
                }
            }
            ck.clause("b", "smoothness", bb);
            // (c) div β misses Sing Z.
            let mut c = sing_issues;
            for x in &sing {
                if vanishes_at(&b, x)? {
                    c.push(format!("β vanishes at the singular point {}", x.format(&base)));
                }
            }
            ck.clause("c", "avoidance", c);
            // (d) both sides are sections of O(d).
            let mut dd = Vec::new();
            if sz.degree() + b.degree() != s.degree() {
                dd.push(format!("deg σ_Z + deg β = {} but deg σ' = {}", sz.degree() + b.degree(), s.degree()));
            }
            if cert.degrees != [s.degree()] {
                dd.push(format!("recorded degrees {:?} do not match", cert.degrees));
            }
            ck.clause("d", "degrees", dd);
        }
        (Witness::Space { sigma, sigma_prime }, 3) => {
            let sg = parse_all(&base, 4, sigma)?;
            let sp = parse_all(&base, 4, sigma_prime)?;
            if sg.len() != 2 || sp.len() != 2 {
                return Err(Error::Invalid("a space witness needs two forms on each side".into()));
            }
            // (a) σ1, σ2 lie in the ideal of Z.
            let mut a = Vec::new();
            for (i, f) in sg.iter().enumerate() {
                if f.is_zero() || !graded_ideal_piece(&z.generators, f.degree())?.contains(f) {
                    a.push(format!("σ{} is not in H0(I_Z({}))", i + 1, f.degree()));
                }
                for x in closed_points(&base, 4, &z.generators, r, budget)? {
                    if !vanishes_at(f, &x)? {
                        a.push(format!("σ{} does not vanish at {}", i + 1, x.format(&base)));
                    }
                }
            }
            ck.clause("a", "containment", a);
            // (b) div σ1 smooth off Sing Z; V(σ'1, σ'2) smooth of dimension 1.
            let mut bb = Vec::new();
            for x in singular_closed_points(&base, &sg[..1], 1, r, budget)? {
                if !sing.contains(&x) {
                    bb.push(format!("div σ1 is singular at {}", x.format(&base)));
                }
            }
            if sp.iter().any(|f| f.is_zero()) {
                bb.push("σ' has a zero form".into());
            } else {
                for x in singular_closed_points(&base, &sp, 2, r, budget)? {
                    bb.push(format!("V(σ'1, σ'2) has rank < 2 at {}", x.format(&base)));
                }
            }
            ck.clause("b", "smoothness", bb);
            // (c) Z' misses Sing Z.
            let mut c = sing_issues;
            for x in &sing {
                match local::residual_avoids(&sg[0], &sg[1], &z, x) {
                    Ok(Some(true)) => {}
                    Ok(_) => c.push(format!("residual not shown to miss {}", x.format(&base))),
                    Err(e) => c.push(format!("at {}: {e}", x.format(&base))),
                }
            }
            ck.clause("c", "avoidance", c);
            // (d) deg σi = deg σ'i.
            let mut dd = Vec::new();
            let lhs: Vec<u32> = sg.iter().map(|f| f.degree()).collect();
            let rhs: Vec<u32> = sp.iter().map(|f| f.degree()).collect();
            if lhs != rhs {
                dd.push(format!("degrees {lhs:?} and {rhs:?} differ"));
            }
            if cert.degrees != lhs {
                dd.push(format!("recorded degrees {:?} do not match", cert.degrees));
            }
            ck.clause("d", "degrees", dd);
            // (e) rank 2 off Z, a nonempty residual, nodes on Z.
            let mut e = Vec::new();
            let part = residual_points(&sg[0], &sg[1], &z, r, budget)?;
            if part.off_z.is_empty() {
                e.push("no residual point found".into());
            }
            for x in &part.off_z {
                if jacobian_rank_at(&base, &sg, x.representative())? < 2 {
                    e.push(format!("V(σ1, σ2) has rank < 2 at {} off Z", x.format(&base)));
                }
            }
            for x in &part.on_z {
                if sing.contains(x) || jacobian_rank_at(&base, &sg, x.representative())? == 2 {
                    continue;
                }
                match local_node_test(&sg[0], &sg[1], &z, x) {
                    Ok(true) => {}
                    Ok(false) => e.push(format!("node test fails at {}", x.format(&base))),
                    Err(err) => e.push(format!("node test at {}: {err}", x.format(&base))),
                }
            }
            ck.clause("e", "residual", e);
        }
        _ => return Err(Error::Invalid("witness does not match the ambient dimension".into())),
    }
    let search_bound = cert.search.scan_bound;
    let passed = ck.clauses.iter().all(|c| c.passed);
    Ok(VerificationLog {
        r,
        certified_up_to: r,
        search_bound,
        note: (r < search_bound).then(|| format!("certified up to r = {r}, below the search bound {search_bound}")),
        clauses: ck.clauses,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SmoothingOptions {
        SmoothingOptions::default()
    }

    #[test]
    fn nodal_cubic_over_f3() {
        let f3 = make_field(3, 1).unwrap();
        let z = MPoly::parse(&f3, 3, "x1^2*x2 - x0^3 - x0^2*x2").unwrap();
        let cert = smooth_p2(&z, 4, &opts()).unwrap();
        assert_eq!(cert.degrees, vec![4]);
        let Witness::Plane { beta, .. } = &cert.witness else { panic!() };
        assert_eq!(MPoly::parse(&f3, 3, beta).unwrap().degree(), 1);
        assert!(cert.log.as_ref().unwrap().passed);
        assert!(verify_certificate(&cert, 6).unwrap().passed);
    }

    #[test]
    fn smooth_input_is_rejected() {
        let f3 = make_field(3, 1).unwrap();
        let conic = MPoly::parse(&f3, 3, "x0*x2 - x1^2").unwrap();
        let err = smooth_p2(&conic, 4, &opts()).unwrap_err();
        assert!(err.to_string().contains("input not singular"));
    }

    #[test]
    fn tampered_beta_fails_avoidance() {
        let f3 = make_field(3, 1).unwrap();
        let z = MPoly::parse(&f3, 3, "x1^2*x2 - x0^3 - x0^2*x2").unwrap();
        let mut cert = smooth_p2(&z, 4, &opts()).unwrap();
        if let Witness::Plane { beta, .. } = &mut cert.witness {
            *beta = "x0".into();
        }
        let log = verify_certificate(&cert, 4).unwrap();
        assert!(!log.passed);
        let failed: Vec<&str> = log.failed_clauses().iter().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"avoidance"));
    }

    #[test]
    fn two_lines_in_p3() {
        let f2 = make_field(2, 1).unwrap();
        let g = |s: &str| MPoly::parse(&f2, 4, s).unwrap();
        let z = SubschemeSpec::new("Z", 4, vec![g("x0"), g("x1*x2")]).unwrap();
        let cert = smooth_p3(&z, 4, 4, &opts()).unwrap();
        assert_eq!(cert.sing_z.len(), 1);
        assert!(cert.log.as_ref().unwrap().passed, "{:?}", cert.log);
        assert!(verify_certificate(&cert, 4).unwrap().passed);
    }

    #[test]
    fn residual_partition_of_two_planes() {
        let f2 = make_field(2, 1).unwrap();
        let g = |s: &str| MPoly::parse(&f2, 4, s).unwrap();
        let z = SubschemeSpec::new("Z", 4, vec![g("x0"), g("x1")]).unwrap();
        let part = residual_points(&g("x0"), &g("x1*x2"), &z, 1, &Budget::default()).unwrap();
        let f2e = f2.extension(1).unwrap();
        for x in &part.off_z {
            let c = x.representative().coords();
            assert_eq!((c[0], c[2]), (0, 0), "{}", x.representative().format(&f2e));
        }
        assert_eq!(part.on_z.len() + part.off_z.len(), 5);
    }
}
