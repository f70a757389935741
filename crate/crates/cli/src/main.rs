use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use disc_val::commands::{self, ClassifyArgs, DiscArgs, MakeArgs, SingularArgs, VminArgs};
use disc_val::{CliError, Output, RingSpec, Suite, VerifyConfig};
use discval::constructions::QuadricKind;
use discval::discriminant::DiscOptions;
use discval::specialfiber::LocusOptions;

#[derive(Parser)]
#[command(name = "disc-val", version, about = "Discriminant valuations of projective hypersurfaces")]
struct Cli {
    /// Suppress the summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    /// Only the JSON document; same as --quiet.
    #[arg(long, global = true)]
    json_only: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Limits {
    /// Largest Macaulay matrix dimension.
    #[arg(long, default_value_t = 2000)]
    max_matrix: usize,
    /// Point budget when searching for lines in the singular locus.
    #[arg(long, default_value_t = 200_000)]
    max_enum: u64,
    /// Largest extension degree searched for singular points.
    #[arg(long, default_value_t = 4)]
    mmax: usize,
}

impl Limits {
    fn disc(&self) -> DiscOptions {
        DiscOptions { max_matrix: self.max_matrix, ..DiscOptions::default() }
    }
    fn locus(&self) -> LocusOptions {
        LocusOptions { m_max: self.mmax, max_enum: self.max_enum }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Discriminant of a form, with its valuation over a DVR.
    Disc {
        #[arg(long, value_parser = parse_ring)]
        ring: Option<RingSpec>,
        #[arg(long, value_parser = parse_ring)]
        field: Option<RingSpec>,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        degree: Option<u32>,
        poly: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Singular locus of a form over a prime field.
    Singular {
        #[arg(long, value_parser = parse_ring)]
        field: RingSpec,
        #[arg(long)]
        vars: usize,
        poly: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Check the valuation-one criterion for a form over a DVR, or classify a
    /// singular point (`--field Fq:p --point a,b,c`).
    Classify {
        #[arg(long, value_parser = parse_ring)]
        ring: Option<RingSpec>,
        #[arg(long, value_parser = parse_ring)]
        field: Option<RingSpec>,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        point: Option<String>,
        poly: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Minimal discriminant valuation over lifts of a residue form.
    Vmin {
        #[arg(long, value_parser = parse_ring)]
        field: RingSpec,
        /// DVR to lift to; defaults to Zp:p.
        #[arg(long, value_parser = parse_ring)]
        ring: Option<RingSpec>,
        #[arg(long)]
        vars: usize,
        #[arg(long, conflicts_with = "trials")]
        exact_quadric: bool,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        poly: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Build an example form.
    Make {
        #[command(subcommand)]
        what: MakeCmd,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, value_parser = parse_ring)]
        ring: Option<RingSpec>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random lifts per reduction.
        #[arg(long)]
        lifts: Option<usize>,
        #[command(flatten)]
        limits: Limits,
    },
}

#[derive(Subcommand)]
enum MakeCmd {
    /// Form singular exactly at the given rational points.
    Lemma93 {
        #[arg(long, value_parser = parse_ring)]
        field: RingSpec,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        degree: u32,
        /// Points as `a,b,c;d,e,f`.
        #[arg(long)]
        points: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        budget: usize,
        #[command(flatten)]
        limits: Limits,
    },
    /// `x2 (x1 - c_1 x0) … (x1 - c_{d-1} x0) + g`.
    LineFamily {
        #[arg(long, value_parser = parse_ring)]
        field: RingSpec,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        degree: u32,
        /// The values c_i, comma separated.
        #[arg(long)]
        c: String,
        /// Smooth form in x0.. standing for x3..xn (needed when vars > 3).
        #[arg(long)]
        g: Option<String>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Quadric normal form: split, diagonal or odp.
    Quadric {
        #[arg(long, value_parser = parse_ring)]
        ring: RingSpec,
        #[arg(long)]
        vars: usize,
        #[arg(long, value_parser = parse_kind)]
        kind: QuadricKind,
    },
    /// Weierstrass cubic with its classical discriminant.
    Weierstrass {
        #[arg(long, value_parser = parse_ring)]
        ring: RingSpec,
        /// `a1,a2,a3,a4,a6`.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
}

fn parse_ring(s: &str) -> Result<RingSpec, String> {
    s.parse().map_err(|e: discval::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: discval::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<QuadricKind, String> {
    s.parse().map_err(|e: discval::Error| e.to_string())
}

fn one_of(ring: Option<RingSpec>, field: Option<RingSpec>) -> Result<RingSpec, CliError> {
    match (ring, field) {
        (Some(r), None) | (None, Some(r)) => Ok(r),
        _ => Err(CliError::Usage("give exactly one of --ring and --field".into())),
    }
}

fn run(cmd: Cmd) -> Result<Output, CliError> {
    match cmd {
        Cmd::Disc { ring, field, vars, degree, poly, limits } => commands::disc(&DiscArgs {
            ring: one_of(ring, field)?,
            vars,
            degree,
            poly,
            max_matrix: limits.max_matrix,
        }),
        Cmd::Singular { field, vars, poly, limits } => {
            commands::singular(&SingularArgs { field, vars, poly, locus: limits.locus() })
        }
        Cmd::Classify { ring, field, vars, point, poly, limits } => commands::classify(&ClassifyArgs {
            ring: one_of(ring, field)?,
            vars,
            poly,
            point,
            disc: limits.disc(),
            locus: limits.locus(),
        }),
        Cmd::Vmin { field, ring, vars, exact_quadric, trials, seed, poly, limits } => commands::vmin(&VminArgs {
            field,
            ring,
            vars,
            poly,
            exact_quadric,
            trials,
            seed,
            disc: limits.disc(),
        }),
        Cmd::Make { what } => commands::make(&match what {
            MakeCmd::Lemma93 { field, vars, degree, points, seed, budget, limits } => {
                MakeArgs::Lemma93 { field, vars, degree, points, seed, budget, locus: limits.locus() }
            }
            MakeCmd::LineFamily { field, vars, degree, c, g, limits } => {
                MakeArgs::LineFamily { field, vars, degree, cs: c, g, locus: limits.locus() }
            }
            MakeCmd::Quadric { ring, vars, kind } => MakeArgs::Quadric { ring, vars, kind },
            MakeCmd::Weierstrass { ring, a } => MakeArgs::Weierstrass { ring, a },
        }),
        Cmd::Verify { suite, ring, trials, seed, lifts, limits } => {
            let mut cfg = VerifyConfig::new(suite);
            cfg.ring = ring;
            cfg.seed = seed;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(l) = lifts {
                cfg.lifts = l;
            }
            cfg.disc = limits.disc();
            cfg.locus = limits.locus();
            disc_val::verify(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet || cli.json_only;
    match run(cli.cmd) {
        Ok(out) => {
            // a closed pipe downstream is not our error
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&out.json).expect("json"));
            if !quiet {
                eprintln!("{}", out.summary);
            }
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
