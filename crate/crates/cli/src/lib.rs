//! Command-line front end: parses and validates a verification request,
//! runs it, and renders the reports as text or JSON.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detrace_core::families::{IdentityId, SignFlip};
use detrace_core::matrix::SizeBounds;
use detrace_core::sl2::Generator;
use detrace_core::verify::{run_suite, EpsMode, MagnusForm, SuiteConfig, VerificationReport, Verifier, VerifyError};

#[derive(Debug, Parser)]
#[command(name = "detrace", version, about = "Exact verification of determinant, Pfaffian and SL(2) trace identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify one identity (or all of them) and print a report per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Thm1,
    Thm3,
    Cor5,
    Cor6,
    Thm7,
    Magnus,
    MagnusOriginal,
    Thm2,
    Trace,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorArg {
    Sl2z,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EpsArg {
    Random,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum MagnusFormArg {
    /// `B = (-tr(m_i M_j))` as stated.
    #[default]
    Stated,
    /// `B = (tr(m_i M_j))`, the reading that follows from the first family.
    FirstFamily,
    Both,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Which identity to check.
    #[arg(value_enum)]
    pub target: Target,
    /// Check a single size.
    #[arg(long, conflicts_with = "max_n")]
    pub n: Option<usize>,
    /// Check every valid size up to this one.
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Random trials per size for the numeric identities.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Master seed; each trial draws from its own stream of it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sampler for SL(2) instances; both are used when omitted.
    #[arg(long, value_enum)]
    pub generator: Option<GeneratorArg>,
    /// How sign vectors are chosen for the vanishing check.
    #[arg(long, value_enum, default_value_t = EpsArg::Random)]
    pub eps: EpsArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Which reading of the generalised Magnus identity to check.
    #[arg(long, value_enum, default_value_t = MagnusFormArg::Stated)]
    pub magnus_form: MagnusFormArg,
    /// Largest matrix the subset-DP determinant accepts.
    #[arg(long)]
    pub dp_bound: Option<usize>,
    /// Largest matrix cross-checked with the permutation oracle.
    #[arg(long)]
    pub oracle_bound: Option<usize>,
    /// Largest matrix the Pfaffian engine accepts.
    #[arg(long)]
    pub pfaffian_bound: Option<usize>,
    /// Fault injection for thm1: replace `B[ROW,COL]` so the check must fail.
    #[arg(long, value_name = "ROW,COL", value_parser = parse_flip)]
    pub inject_flip: Option<SignFlip>,
}

fn parse_flip(s: &str) -> Result<SignFlip, String> {
    let (row, col) = s.split_once(',').ok_or("expected ROW,COL")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok(SignFlip { row: parse(row)?, col: parse(col)? })
}

/// A single unit of work; the plan is a list of these, run in order.
#[derive(Debug, Clone)]
pub enum Job {
    Thm1 { n: usize, flip: Option<SignFlip> },
    Family { which: IdentityId, n: usize },
    Magnus { n: usize, generator: Generator, form: MagnusForm },
    MagnusOriginal { generator: Generator },
    Thm2 { n: usize, generator: Generator },
    Trace { generator: Generator },
    Suite(SuiteConfig),
}

/// A fully validated request.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub verifier: Verifier,
    pub trials: usize,
    pub master_seed: u64,
    pub eps: EpsMode,
    pub jobs: Vec<Job>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn identity_of(target: Target) -> Option<IdentityId> {
    Some(match target {
        Target::Thm1 => IdentityId::Thm1,
        Target::Thm3 => IdentityId::Thm3,
        Target::Cor5 => IdentityId::Cor5,
        Target::Cor6 => IdentityId::Cor6,
        Target::Thm7 => IdentityId::Thm7,
        Target::Magnus => IdentityId::Magnus,
        Target::MagnusOriginal => IdentityId::MagnusOriginal,
        Target::Thm2 => IdentityId::Thm2,
        Target::Trace => IdentityId::Trace,
        Target::All => return None,
    })
}

/// Default sizes when neither `--n` nor `--max-n` is given.
fn default_sizes(target: Target) -> RangeInclusive<usize> {
    match target {
        Target::Thm1 => 0..=6,
        Target::Thm3 | Target::Magnus => 1..=6,
        Target::Cor5 | Target::Cor6 | Target::Thm7 => 2..=6,
        Target::Thm2 => 5..=5,
        Target::MagnusOriginal | Target::Trace | Target::All => 0..=0,
    }
}

/// Smallest size a `--max-n` sweep starts from.
fn sweep_start(target: Target) -> usize {
    match target {
        Target::Thm2 => 5,
        _ => identity_of(target).map_or(0, IdentityId::min_n),
    }
}

impl VerifyArgs {
    /// Checks every flag combination and turns the request into a job
    /// list. Nothing is computed here.
    pub fn into_config(self) -> Result<CliConfig, String> {
        let defaults = SizeBounds::default();
        let bounds = SizeBounds {
            det_dp: self.dp_bound.unwrap_or(defaults.det_dp),
            perm_oracle: self.oracle_bound.unwrap_or(defaults.perm_oracle),
            pfaffian: self.pfaffian_bound.unwrap_or(defaults.pfaffian),
            ..defaults
        };
        let generators = match self.generator {
            Some(GeneratorArg::Sl2z) => vec![Generator::sl2z()],
            Some(GeneratorArg::Gaussian) => vec![Generator::gaussian()],
            None => vec![Generator::sl2z(), Generator::gaussian()],
        };
        let forms = match self.magnus_form {
            MagnusFormArg::Stated => vec![MagnusForm::Stated],
            MagnusFormArg::FirstFamily => vec![MagnusForm::FromThm1],
            MagnusFormArg::Both => vec![MagnusForm::Stated, MagnusForm::FromThm1],
        };
        let eps = match self.eps {
            EpsArg::Random => EpsMode::Random,
            EpsArg::Exhaustive => EpsMode::Exhaustive,
        };
        let name = self.target.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();

        if self.trials == 0 {
            return Err("--trials must be at least 1".into());
        }
        if self.inject_flip.is_some() && self.target != Target::Thm1 {
            return Err("--inject-flip only applies to thm1".into());
        }
        if let Some(SignFlip { row, col }) = self.inject_flip {
            if row == 0 || col == 0 || row == col {
                return Err("--inject-flip needs distinct ROW and COL, both at least 1".into());
            }
        }
        if self.eps == EpsArg::Exhaustive && !matches!(self.target, Target::Thm2 | Target::All) {
            return Err(format!("--eps does not apply to {name}"));
        }
        if self.magnus_form != MagnusFormArg::Stated && !matches!(self.target, Target::Magnus | Target::All) {
            return Err(format!("--magnus-form does not apply to {name}"));
        }
        let symbolic_only = matches!(self.target, Target::Thm1 | Target::Thm3 | Target::Cor5 | Target::Cor6 | Target::Thm7);
        if symbolic_only && self.generator.is_some() {
            return Err(format!("{name} is symbolic; --generator does not apply"));
        }

        let jobs = match self.target {
            Target::All => {
                if self.n.is_some() {
                    return Err("all takes --max-n, not --n".into());
                }
                let max_n = self.max_n.unwrap_or(6);
                if max_n + 1 > bounds.det_dp {
                    return Err(format!("--max-n {max_n} needs a {}x{} determinant; --dp-bound is {}", max_n + 1, max_n + 1, bounds.det_dp));
                }
                if max_n > bounds.pfaffian {
                    return Err(format!("--max-n {max_n} exceeds --pfaffian-bound {}", bounds.pfaffian));
                }
                vec![Job::Suite(SuiteConfig {
                    max_n,
                    trials: self.trials,
                    master_seed: self.seed,
                    generators: generators.clone(),
                    eps_mode: eps,
                    magnus_forms: forms.clone(),
                })]
            }
            Target::MagnusOriginal | Target::Trace => {
                if self.n.is_some() || self.max_n.is_some() {
                    return Err(format!("{name} has no size parameter"));
                }
                generators
                    .iter()
                    .map(|&generator| match self.target {
                        Target::Trace => Job::Trace { generator },
                        _ => Job::MagnusOriginal { generator },
                    })
                    .collect()
            }
            target => {
                let which = identity_of(target).expect("single identity");
                let sizes: Vec<usize> = match (self.n, self.max_n) {
                    (Some(n), _) => {
                        if n < which.min_n() {
                            return Err(format!("{name} needs n >= {}, got {n}", which.min_n()));
                        }
                        if which.needs_even() && n % 2 == 1 {
                            return Err(format!("{name} needs an even n, got {n}"));
                        }
                        vec![n]
                    }
                    (None, Some(max_n)) => {
                        let start = sweep_start(target);
                        if max_n < start {
                            return Err(format!("{name} needs --max-n >= {start}, got {max_n}"));
                        }
                        (start..=max_n).collect()
                    }
                    (None, None) => default_sizes(target).collect(),
                };
                let sizes: Vec<usize> = sizes.into_iter().filter(|n| !which.needs_even() || n % 2 == 0).collect();
                let largest = *sizes.iter().max().expect("nonempty size list");
                let symbolic = match target {
                    Target::Thm1 => Some(largest + 1),
                    Target::Thm3 | Target::Cor5 | Target::Cor6 | Target::Thm7 => Some(largest),
                    _ => None,
                };
                if let Some(dim) = symbolic {
                    if dim > bounds.det_dp {
                        return Err(format!("{name} at n={largest} needs a {dim}x{dim} determinant; --dp-bound is {}", bounds.det_dp));
                    }
                }
                if target == Target::Thm7 && largest > bounds.pfaffian {
                    return Err(format!("thm7 at n={largest} exceeds --pfaffian-bound {}", bounds.pfaffian));
                }
                if let Some(SignFlip { row, col }) = self.inject_flip {
                    if let Some(&n) = sizes.iter().find(|&&n| row > n || col > n) {
                        return Err(format!("--inject-flip {row},{col} is outside B at n={n}"));
                    }
                }
                let mut jobs = Vec::new();
                for n in sizes {
                    match target {
                        Target::Thm1 => jobs.push(Job::Thm1 { n, flip: self.inject_flip }),
                        Target::Magnus => {
                            for &form in &forms {
                                for &generator in &generators {
                                    jobs.push(Job::Magnus { n, generator, form });
                                }
                            }
                        }
                        Target::Thm2 => {
                            for &generator in &generators {
                                jobs.push(Job::Thm2 { n, generator });
                            }
                        }
                        _ => jobs.push(Job::Family { which, n }),
                    }
                }
                jobs
            }
        };

        Ok(CliConfig {
            verifier: Verifier { bounds, cross_check: true },
            trials: self.trials,
            master_seed: self.seed,
            eps,
            jobs,
            format: self.format,
            out: self.out,
        })
    }
}

impl CliConfig {
    /// Runs every job in order.
    pub fn execute(&self) -> Result<Vec<VerificationReport>, VerifyError> {
        let v = &self.verifier;
        let (trials, seed) = (self.trials, self.master_seed);
        let mut reports = Vec::new();
        for job in &self.jobs {
            match job {
                Job::Thm1 { n, flip } => reports.push(v.verify_thm1_mutated(*n, *flip)?),
                Job::Family { which, n } => reports.push(v.verify_thm3_family(*n, *which)?),
                Job::Magnus { n, generator, form } => reports.push(v.verify_magnus_numeric(*n, trials, seed, *generator, *form)?),
                Job::MagnusOriginal { generator } => reports.push(v.verify_magnus_original(trials, seed, *generator)?),
                Job::Thm2 { n, generator } => reports.push(v.verify_thm2(*n, trials, seed, self.eps, *generator)?),
                Job::Trace { generator } => reports.push(v.verify_trace_relation(trials, seed, *generator)?),
                Job::Suite(cfg) => reports.extend(run_suite(v, cfg)?),
            }
        }
        Ok(reports)
    }
}

/// Renders reports deterministically, without a trailing newline. Text is
/// one line per report, with the residual and witness indented underneath a
/// failure; JSON is an array following the report schema.
pub fn render_report(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialise"),
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                let _ = write!(s, "{tag} {} n={}", r.identity, r.n);
                if let Some(g) = r.params.generator {
                    let _ = write!(s, " generator={}", g.name());
                }
                let _ = writeln!(s, " ({} ms)", r.millis);
                if let Some(observed) = &r.params.observed {
                    let _ = writeln!(s, "  observed: {observed}");
                }
                if let Some(residual) = &r.residual {
                    let _ = writeln!(s, "  residual: {residual}");
                }
                if let Some(witness) = &r.witness {
                    let _ = writeln!(s, "  witness: {witness}");
                }
            }
            s.truncate(s.trim_end().len());
            s
        }
    }
}

/// Exit status of a finished run: 0 if every check passed, 1 otherwise.
pub fn exit_status(reports: &[VerificationReport]) -> u8 {
    u8::from(!reports.iter().all(VerificationReport::passed))
}
