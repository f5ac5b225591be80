//! Command-line front end.
//!
//! Every subcommand prints (or writes to `--out`) one JSON report. The
//! report's own fields come first, followed by `tool`, `version` and the
//! `config` that reproduces the run. Exit codes: 0 success, 1 verification
//! failure, 2 budget or search exhausted, 3 invalid input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use crate::budget::Budget;
use crate::density::{
    containment_density, density_experiment, exact_small_degree_check, singular_at_point_proportion,
    tail_measurement, DensityConfig, Mode,
};
use crate::error::{Error, Result};
use crate::field::{make_field, Field};
use crate::geometry::specfile::{parse_spec, parse_spec_file, to_text, SpecFile};
use crate::geometry::{point_counts, PointSpec, SubschemeSpec};
use crate::report::{to_json, Float, TOOL, VERSION};
use crate::sections::{finite_length, surjectivity_onset, twist_constant};
use crate::smoothing::{smooth_p2, smooth_p3, verify_certificate_with, SearchMode, SmoothingCertificate, SmoothingOptions};
use crate::zeta::{mobius_invert, to_f64, zeta_inv_pn, zeta_inv_truncated};

#[derive(Parser, Debug)]
#[command(name = "cycle-sieve", version, about = "Bertini densities over finite fields and smoothing of 1-cycles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    #[arg(long, global = true, default_value_t = 1)]
    pub k: u32,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Twist: sections of O(m + d).
    #[arg(long, global = true, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, global = true)]
    pub d: Option<u32>,
    #[arg(long = "d-max", global = true)]
    pub d_max: Option<u32>,
    /// Point-degree bound.
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// `exhaustive` or `sample`; smoothing also accepts `auto`.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long = "budget-level", global = true)]
    pub budget_level: Option<u32>,
    #[arg(long = "budget-space", global = true)]
    pub budget_space: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Variety spec file.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Point counts N_e and closed point counts a_e for e <= r.
    Count,
    /// ζ_{P^n}(s)^{-1}, or the truncated product of a spec variety.
    Zeta {
        #[arg(long)]
        pn: Option<u32>,
        #[arg(long)]
        s: u32,
    },
    /// Density of smooth divisors in H^0(O(m + d)).
    Density,
    /// Exact count of sections smooth at every point of degree <= r.
    SmallDegreeCheck,
    /// Proportion of sections singular at one closed point.
    PointProportion {
        /// Coordinates in spec-file syntax, e.g. `1, 0, 0` or `[0,1], 1, 0`.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// Fraction of sections whose least singular degree exceeds r.
    Tail {
        /// Comma separated values of r; defaults to 1 up to the scan bound.
        #[arg(long = "r-values", value_delimiter = ',')]
        r_values: Vec<u32>,
        /// CSV table path; defaults to the `--out` path with extension csv.
        #[arg(long)]
        #[serde(skip)]
        csv: Option<PathBuf>,
    },
    /// Densities on H^0(I_Z(d)) for the Z of the spec file.
    Containment {
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
    },
    /// Smoothing certificate for the singular curve Z of the spec file.
    SmoothCycle {
        #[arg(long = "d2-max")]
        d2_max: Option<u32>,
    },
    /// Re-checks a smoothing certificate.
    Verify { certificate: PathBuf },
    /// Least d at which H^0(O(m + d)) surjects onto the sections of S.
    Onset,
}

/// Everything that determines a report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub p: u32,
    pub k: u32,
    pub n: Option<usize>,
    pub m: i64,
    pub d: Option<u32>,
    pub d_max: Option<u32>,
    pub r: Option<u32>,
    pub mode: Option<String>,
    pub samples: u64,
    pub seed: u64,
    pub budget: Budget,
    pub spec: Option<String>,
    pub spec_text: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    #[serde(flatten)]
    report: &'a T,
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub json: String,
    pub csv: Option<String>,
    /// Failure summary for stderr.
    pub message: Option<String>,
}

/// Parses `argv` (program name first), runs the command and writes the
/// outputs. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    let out = cli.out.clone();
    let csv_path = match &cli.command {
        Command::Tail { csv, .. } => csv.clone().or_else(|| out.as_ref().map(|o| o.with_extension("csv"))),
        _ => None,
    };
    match execute(cli) {
        Ok(o) => {
            if let Some(msg) = &o.message {
                eprintln!("{msg}");
            }
            let written = match &out {
                Some(path) => std::fs::write(path, &o.json),
                None => {
                    print!("{}", o.json);
                    Ok(())
                }
            };
            let written = written.and_then(|_| match (&o.csv, &csv_path) {
                (Some(csv), Some(path)) => std::fs::write(path, csv),
                _ => Ok(()),
            });
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 3;
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command on a worker pool of `--jobs` threads.
pub fn execute(cli: Cli) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::Invalid("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start the worker pool: {e}")))?;
    pool.install(|| dispatch(&cli))
}

struct Ctx {
    cfg: RunConfig,
    spec: Option<SpecFile>,
}

impl Ctx {
    fn new(cli: &Cli) -> Result<Ctx> {
        let mut budget = Budget::from_env()?;
        if let Some(l) = cli.budget_level {
            budget.level = l;
        }
        if let Some(s) = cli.budget_space {
            budget.space = s;
        }
        let spec = cli.spec.as_deref().map(parse_spec_file).transpose()?;
        let (mut p, mut k, mut n) = (cli.p, cli.k, cli.n);
        if let Some(s) = &spec {
            p = s.field.p();
            k = s.field.k();
            if n.is_some_and(|n| n != s.n) {
                return Err(Error::Invalid(format!("--n disagrees with the spec file (n = {})", s.n)));
            }
            n = Some(s.n);
        }
        Ok(Ctx {
            cfg: RunConfig {
                command: cli.command.clone(),
                p,
                k,
                n,
                m: cli.m,
                d: cli.d,
                d_max: cli.d_max,
                r: cli.r,
                mode: cli.mode.clone(),
                samples: cli.samples,
                seed: cli.seed,
                budget,
                spec: cli.spec.as_ref().map(|p| p.display().to_string()),
                spec_text: spec.as_ref().map(to_text),
            },
            spec,
        })
    }

    fn field(&self) -> Result<Field> {
        make_field(self.cfg.p, self.cfg.k)
    }

    fn n(&self) -> Result<usize> {
        self.cfg.n.ok_or_else(|| Error::Invalid("--n (or --spec) is required".into()))
    }

    fn d(&self) -> Result<u32> {
        self.cfg.d.ok_or_else(|| Error::Invalid("--d is required".into()))
    }

    fn spec(&self) -> Result<&SpecFile> {
        self.spec.as_ref().ok_or_else(|| Error::Invalid("--spec is required".into()))
    }

    fn z(&self) -> Result<&SubschemeSpec> {
        self.spec()?
            .z
            .as_ref()
            .ok_or_else(|| Error::Invalid("the spec file has no [Z] section".into()))
    }

    fn density_mode(&self) -> Result<Mode> {
        match self.cfg.mode.as_deref() {
            None | Some("exhaustive") => Ok(Mode::Exhaustive),
            Some("sample") => Ok(Mode::Sample {
                samples: self.cfg.samples,
                seed: self.cfg.seed,
            }),
            Some(other) => Err(Error::Invalid(format!("unknown mode {other:?}"))),
        }
    }

    fn density_config(&self) -> Result<DensityConfig> {
        self.density_config_at(self.d()?)
    }

    fn density_config_at(&self, d: u32) -> Result<DensityConfig> {
        let mut cfg = DensityConfig::new(&self.field()?, self.n()?, d);
        cfg.m = self.cfg.m;
        cfg.mode = self.density_mode()?;
        cfg.r = self.cfg.r;
        cfg.budget = self.cfg.budget;
        if let Some(spec) = &self.spec {
            if let Some(s) = &spec.s {
                cfg.avoid = s.closed_point_list();
            }
            cfg.contain = spec.z.clone().filter(|z| !z.is_empty());
            cfg.removed = spec.x0_removed.clone();
        }
        Ok(cfg)
    }

    fn report<T: Serialize>(&self, report: &T) -> Result<String> {
        to_json(&Envelope {
            report,
            tool: TOOL,
            version: VERSION,
            config: &self.cfg,
        })
    }

    fn ok<T: Serialize>(&self, report: &T) -> Result<Outcome> {
        Ok(Outcome {
            code: 0,
            json: self.report(report)?,
            csv: None,
            message: None,
        })
    }
}

#[derive(Serialize)]
struct CountReport {
    n: usize,
    q: u64,
    r: u32,
    locus: Option<String>,
    /// `N_e = #X(F_{q^e})`.
    points: Vec<u64>,
    /// Closed points of degree exactly `e`.
    closed_points: Vec<u64>,
}

#[derive(Serialize)]
struct ZetaReport {
    value_num: serde_json::Number,
    value_den: serde_json::Number,
    value: Float,
    s: u32,
    q: u64,
    /// Truncation degree when the product comes from point counts.
    truncated_at: Option<u32>,
    locus: Option<String>,
}

fn number(i: &BigInt) -> serde_json::Number {
    i.to_string().parse().expect("integer literal")
}

#[derive(Serialize)]
struct OnsetReport {
    n: usize,
    m: i64,
    c: u32,
    h0: u64,
    bound: i64,
    d_max: u32,
    onset: Option<u32>,
    within_bound: bool,
    points: Vec<String>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    certificate: String,
    passed: bool,
    failed: Vec<String>,
    log: &'a crate::smoothing::VerificationLog,
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let ctx = Ctx::new(cli)?;
    let budget = &ctx.cfg.budget;
    match &cli.command {
        Command::Count => {
            let base = ctx.field()?;
            let n = ctx.n()?;
            let r = ctx.cfg.r.unwrap_or(4);
            let (forms, locus) = match ctx.spec.as_ref().and_then(|s| s.z.as_ref()) {
                Some(z) => (z.generators.clone(), Some(z.label.clone())),
                None => (Vec::new(), None),
            };
            let points = point_counts(&base, n + 1, &forms, r, budget)?;
            let closed_points = mobius_invert(&points)?;
            ctx.ok(&CountReport {
                n,
                q: base.size() as u64,
                r,
                locus,
                points,
                closed_points,
            })
        }
        Command::Zeta { pn, s } => {
            let base = ctx.field()?;
            let q = base.size() as u64;
            let (value, truncated_at, locus) = match (pn, ctx.spec.as_ref()) {
                (Some(n), _) => (zeta_inv_pn(*n, q, *s)?, None, None),
                (None, Some(spec)) => {
                    let r = ctx.cfg.r.ok_or_else(|| Error::Invalid("--r is required for a spec variety".into()))?;
                    let forms = spec.z.as_ref().map(|z| z.generators.clone()).unwrap_or_default();
                    let counts = mobius_invert(&point_counts(&base, spec.n + 1, &forms, r, budget)?)?;
                    let label = spec.z.as_ref().map(|z| z.label.clone());
                    (zeta_inv_truncated(&counts, q, *s, r as usize)?, Some(r), label)
                }
                (None, None) => return Err(Error::Invalid("give --pn or --spec".into())),
            };
            ctx.ok(&ZetaReport {
                value_num: number(value.numer()),
                value_den: number(value.denom()),
                value: Float(to_f64(&value)),
                s: *s,
                q,
                truncated_at,
                locus,
            })
        }
        Command::Density => ctx.ok(&density_experiment(&ctx.density_config()?)?),
        Command::SmallDegreeCheck => {
            let r = ctx.cfg.r.ok_or_else(|| Error::Invalid("--r is required".into()))?;
            let mut cfg = ctx.density_config()?;
            cfg.r = None;
            let rep = exact_small_degree_check(&cfg, r)?;
            let code = if rep.at_or_above_onset && !rep.equal { 1 } else { 0 };
            Ok(Outcome {
                code,
                json: ctx.report(&rep)?,
                csv: None,
                message: (code == 1).then(|| "verification failed: count differs from the product".to_string()),
            })
        }
        Command::PointProportion { point, level } => {
            let n = ctx.n()?;
            let text = format!("{} {} {n}\n[S]\npoint@{level}: {point}\n", ctx.cfg.p, ctx.cfg.k);
            let parsed = parse_spec(&text)?;
            let x = parsed.s.expect("one point").points.remove(0).point;
            let mut cfg = ctx.density_config()?;
            cfg.avoid.clear();
            ctx.ok(&singular_at_point_proportion(&x, &cfg)?)
        }
        Command::Tail { r_values, .. } => {
            let cfg = ctx.density_config()?;
            let rs: Vec<u32> = if r_values.is_empty() {
                (1..cfg.scan_bound()).collect()
            } else {
                r_values.clone()
            };
            let rep = tail_measurement(&cfg, &rs)?;
            Ok(Outcome {
                code: 0,
                json: ctx.report(&rep)?,
                csv: Some(rep.to_csv()),
                message: None,
            })
        }
        Command::Containment { degrees } => {
            let z = ctx.z()?.clone();
            let degrees = if degrees.is_empty() { vec![ctx.d()?] } else { degrees.clone() };
            let mut cfg = ctx.density_config_at(degrees[0])?;
            cfg.contain = None;
            ctx.ok(&containment_density(&z, &cfg, &degrees)?)
        }
        Command::SmoothCycle { d2_max } => {
            let z = ctx.z()?;
            let mode = match ctx.cfg.mode.as_deref() {
                None | Some("auto") => SearchMode::Auto,
                Some("exhaustive") => SearchMode::Exhaustive,
                Some("sample") => SearchMode::Sample,
                Some(other) => return Err(Error::Invalid(format!("unknown mode {other:?}"))),
            };
            let opts = SmoothingOptions {
                mode,
                seed: ctx.cfg.seed,
                r: ctx.cfg.r,
                budget: *budget,
            };
            let d_max = ctx.cfg.d_max.ok_or_else(|| Error::Invalid("--d-max is required".into()))?;
            let cert = match ctx.n()? {
                2 => {
                    let [g] = z.generators.as_slice() else {
                        return Err(Error::Invalid("a plane curve needs exactly one generator".into()));
                    };
                    smooth_p2(g, d_max, &opts)?
                }
                3 => smooth_p3(z, d_max, d2_max.unwrap_or(d_max), &opts)?,
                n => return Err(Error::Invalid(format!("smoothing works in P^2 and P^3, not P^{n}"))),
            };
            ctx.ok(&cert)
        }
        Command::Verify { certificate } => {
            let cert = read_certificate(certificate)?;
            let r = ctx.cfg.r.unwrap_or(cert.search.scan_bound);
            let log = verify_certificate_with(&cert, r, budget)?;
            let failed: Vec<String> = log
                .failed_clauses()
                .iter()
                .map(|c| format!("({}) {}", c.clause, c.name))
                .collect();
            let rep = VerifyReport {
                certificate: certificate.display().to_string(),
                passed: log.passed,
                failed: failed.clone(),
                log: &log,
            };
            Ok(Outcome {
                code: if log.passed { 0 } else { 1 },
                json: ctx.report(&rep)?,
                csv: None,
                message: (!log.passed).then(|| format!("verification failed: {}", failed.join(", "))),
            })
        }
        Command::Onset => {
            let base = ctx.field()?;
            let n = ctx.n()?;
            let points: Vec<PointSpec> = ctx
                .spec()?
                .s
                .as_ref()
                .map(|s| s.points.clone())
                .unwrap_or_default();
            let c = twist_constant(n, ctx.cfg.m);
            let h0 = finite_length(&points);
            let bound = c as i64 + h0 as i64;
            let d_max = ctx.cfg.d_max.unwrap_or(bound.max(0) as u32);
            let onset = surjectivity_onset(&base, n, &points, ctx.cfg.m, d_max)?;
            ctx.ok(&OnsetReport {
                n,
                m: ctx.cfg.m,
                c,
                h0,
                bound,
                d_max,
                onset,
                within_bound: onset.is_some_and(|d| d as i64 <= bound),
                points: points
                    .iter()
                    .map(|p| format!("{}{}", if p.first_order { "jet " } else { "" }, p.point.format(&base)))
                    .collect(),
            })
        }
    }
}

/// Reads a certificate, bare or inside a report envelope.
pub fn read_certificate(path: &Path) -> Result<SmoothingCertificate> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("malformed certificate {}: {e}", path.display())))
}

