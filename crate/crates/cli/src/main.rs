//! Command line front end: parameter sweeps, scenario checks, contextual
//! fractions of model files, and single propagator evaluations.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctxharvest::ctxscen::{build_pentagram, model_from_json, scenario_report, PentagramSet};
use ctxharvest::fieldprop::{self, oracle, DetectorParams, Sign, SignPair, TimeOrder};
use ctxharvest::lpcf::contextual_fraction;
use ctxharvest::measures::derive_inequality_coeffs;
use ctxharvest::sweep::{self, parse_grid, parse_list, SweepConfig};

const EXIT_CONFIG: i32 = 1;
const EXIT_NUMERICAL: i32 = 2;

#[derive(Parser)]
#[command(name = "ctxharvest", version, about = "Detector-field contextuality pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write a CSV table.
    Sweep(SweepArgs),
    /// Scenario utilities.
    Scenario {
        #[command(subcommand)]
        sub: ScenarioCommand,
    },
    /// Contextual fraction of a serialized empirical model.
    Cf {
        /// Path to a model document (JSON with optional "a/b" rationals).
        model_file: String,
    },
    /// Evaluate a single smeared propagator, closed form and oracle.
    Prop(PropArgs),
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Print the constraint report for one of the built-in angle sets.
    Check {
        /// Angle set id (1, 2 or 3).
        set_id: u8,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<String>,
    /// Named preset (figure1 or figure2).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum)]
    setup: Option<SetupArg>,
    #[arg(long = "angle-set")]
    angle_set: Option<u8>,
    /// Energy-gap grid MIN:MAX:COUNT.
    #[arg(long)]
    omega: Option<String>,
    /// Comma-separated temporal widths.
    #[arg(long = "T")]
    temporal_widths: Option<String>,
    /// Comma-separated spatial widths α^{-1/2}.
    #[arg(long = "alpha-invsqrt")]
    alpha_invsqrt: Option<String>,
    /// Comma-separated separations (qubit-qutrit).
    #[arg(long = "L")]
    separations: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    tbar: Option<f64>,
    /// Genuine-harvesting ratio threshold.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetupArg {
    SingleQutrit,
    QubitQutrit,
}

#[derive(Args)]
struct PropArgs {
    /// Propagator kind.
    #[arg(value_enum)]
    kind: KindArg,
    /// Sign p of the first smearing function (+1 or -1).
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    p: String,
    /// Sign q of the second smearing function.
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    q: String,
    /// Evaluate the same-system bi-distribution.
    #[arg(long)]
    same: bool,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Second detector's gap (defaults to --omega).
    #[arg(long)]
    omega2: Option<f64>,
    #[arg(long = "T", default_value_t = 1.0)]
    t_width: f64,
    #[arg(long = "T2")]
    t_width2: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    alpha2: Option<f64>,
    /// Separation between detector centres.
    #[arg(long = "L", default_value_t = 1.0)]
    separation: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    tbar: f64,
    #[arg(long, allow_hyphen_values = true)]
    tbar2: Option<f64>,
    /// Also evaluate the quadrature oracle and print the deviation.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Wightman,
    WightmanFwd,
    WightmanBwd,
    Hadamard,
    Causal,
    Retarded,
    Advanced,
    Symmetric,
    Feynman,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Scenario { sub } => match sub {
            ScenarioCommand::Check { set_id } => cmd_scenario_check(set_id),
        },
        Command::Cf { model_file } => cmd_cf(&model_file),
        Command::Prop(args) => cmd_prop(args),
    };
    std::process::exit(code);
}

fn cmd_sweep(args: SweepArgs) -> i32 {
    if args.preset.is_some() && args.config.is_some() {
        eprintln!("--preset cannot be combined with --config");
        return EXIT_CONFIG;
    }
    let mut cfg: SweepConfig = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {path}: {e}");
                    return EXIT_CONFIG;
                }
            };
            match SweepConfig::from_json(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_CONFIG;
                }
            }
        }
        (None, Some(name)) => match sweep::preset(name) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                return EXIT_CONFIG;
            }
        },
        (None, None) => {
            eprintln!("sweep needs --config or --preset");
            return EXIT_CONFIG;
        }
    };

    if let Some(setup) = args.setup {
        cfg.setup = match setup {
            SetupArg::SingleQutrit => sweep::Setup::SingleQutrit,
            SetupArg::QubitQutrit => sweep::Setup::QubitQutrit,
        };
    }
    if let Some(set) = args.angle_set {
        cfg.angle_set = set;
    }
    if let Some(ref spec) = args.omega {
        match parse_grid(spec) {
            Ok(g) => cfg.omega_grid = g,
            Err(e) => {
                eprintln!("{e}");
                return EXIT_CONFIG;
            }
        }
    }
    for (target, src) in [
        (&mut cfg.temporal_widths, &args.temporal_widths),
        (&mut cfg.alpha_invsqrt, &args.alpha_invsqrt),
        (&mut cfg.separations, &args.separations),
    ] {
        if let Some(s) = src {
            match parse_list(s) {
                Ok(v) => *target = v,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_CONFIG;
                }
            }
        }
    }
    if let Some(l) = args.lambda {
        cfg.lambda = l;
    }
    if let Some(t) = args.tbar {
        cfg.tbar = t;
    }
    if let Some(t) = args.threshold {
        cfg.threshold = t;
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    if let Some(out) = args.out {
        cfg.output_path = Some(out);
    }
    if let Err(e) = cfg.validate() {
        eprintln!("{e}");
        return EXIT_CONFIG;
    }

    // Physical-validity caveat per (T, α) combination, never fatal.
    for &t in &cfg.temporal_widths {
        for &a in &cfg.alpha_invsqrt {
            let probe = DetectorParams::qutrit(cfg.omega_grid.min, t, a.powi(-2), 1.0);
            if let Some(w) = fieldprop::strong_support_warning(&probe) {
                eprintln!("warning: {w}");
            }
        }
    }

    let rows = match sweep::run_sweep(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    match cfg.output_path {
        Some(ref path) => {
            if let Err(e) = sweep::emit_csv(&rows, path) {
                eprintln!("{e}");
                return EXIT_NUMERICAL;
            }
            eprintln!("wrote {} rows to {path} ({failures} failed)", rows.len());
        }
        None => print!("{}", sweep::rows_to_csv(&rows)),
    }
    if failures > 0 {
        EXIT_NUMERICAL
    } else {
        0
    }
}

fn cmd_scenario_check(set_id: u8) -> i32 {
    let set = match PentagramSet::from_id(set_id) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    let angles = match ctxharvest::ctxscen::builtin_angle_set(&set) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_NUMERICAL;
        }
    };
    let report = scenario_report(&angles);
    println!("angle set {set_id}");
    println!("  theta0                     = {:.17}", angles.theta0);
    println!("  alphas                     = {:?}", angles.alphas);
    println!("  alphas mod 2pi             = {:?}", report.reduced_alphas);
    println!("  thetas                     = {:?}", angles.thetas);
    println!("  max context commutator     = {:.3e}", report.max_context_commutator);
    println!("  min non-context commutator = {:.3e}", report.min_noncontext_commutator);
    println!("  idempotency deviation      = {:.3e}", report.max_idempotency_deviation);
    println!("  ground overlap sum (γ = 2) = {:.12}", report.ground_overlap_sum);
    println!("  cross-term sum (<= 0)      = {:.3e}", report.cross_term_sum);
    match build_pentagram(set) {
        Ok(scen) => match derive_inequality_coeffs(&scen) {
            Ok((coeffs, rep)) => {
                println!("  ell1, ell2                 = {:.6}, {:.6}", coeffs.ell1, coeffs.ell2);
                println!("  route mismatch             = {:.3e}", rep.max_route_mismatch);
                if let Some(flag) = rep.flagged {
                    println!("  FLAG: {flag}");
                }
                0
            }
            Err(e) => {
                println!("  coefficient derivation failed: {e}");
                EXIT_NUMERICAL
            }
        },
        Err(e) => {
            println!("  constraint check FAILED: {e}");
            EXIT_NUMERICAL
        }
    }
}

fn cmd_cf(path: &str) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {path}: {e}");
            return EXIT_CONFIG;
        }
    };
    let model = match model_from_json(&text) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    match contextual_fraction(&model) {
        Ok(cf) => {
            println!("contextual fraction: {cf:.16e}");
            println!("non-contextual fraction: {:.16e}", 1.0 - cf);
            0
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_NUMERICAL
        }
    }
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "+1" | "plus" => Ok(Sign::Plus),
        "-" | "-1" | "minus" => Ok(Sign::Minus),
        other => Err(format!("bad sign {other:?} (use +1 or -1)")),
    }
}

fn cmd_prop(args: PropArgs) -> i32 {
    let (p, q) = match (parse_sign(&args.p), parse_sign(&args.q)) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    let s = SignPair { p, q };
    let d = DetectorParams::qutrit(args.omega, args.t_width, args.alpha, 1e-4).at_time(args.tbar);
    let d2 = DetectorParams::qutrit(
        args.omega2.unwrap_or(args.omega),
        args.t_width2.unwrap_or(args.t_width),
        args.alpha2.unwrap_or(args.alpha),
        1e-4,
    )
    .at_position([args.separation, 0.0, 0.0])
    .at_time(args.tbar2.unwrap_or(args.tbar));
    if let Err(e) = d.validate().and_then(|_| d2.validate()) {
        eprintln!("{e}");
        return EXIT_CONFIG;
    }

    let kind = match args.kind {
        KindArg::Wightman => fieldprop::PropagatorKind::Wightman,
        KindArg::WightmanFwd => fieldprop::PropagatorKind::WightmanFwd,
        KindArg::WightmanBwd => fieldprop::PropagatorKind::WightmanBwd,
        KindArg::Hadamard => fieldprop::PropagatorKind::Hadamard,
        KindArg::Causal => fieldprop::PropagatorKind::Causal,
        KindArg::Retarded => fieldprop::PropagatorKind::Retarded,
        KindArg::Advanced => fieldprop::PropagatorKind::Advanced,
        KindArg::Symmetric => fieldprop::PropagatorKind::Symmetric,
        KindArg::Feynman => fieldprop::PropagatorKind::Feynman,
    };

    let value = match fieldprop::evaluate(kind, &d, &d2, s, args.same) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_NUMERICAL;
        }
    };
    println!("closed form: {:+.16e} {:+.16e}i", value.value.re, value.value.im);

    if args.oracle {
        let oracle_value = match kind {
            fieldprop::PropagatorKind::Wightman => oracle::wightman(&d, &d2, s, args.same),
            fieldprop::PropagatorKind::WightmanFwd => {
                oracle::wightman_ordered_2d(TimeOrder::Fwd, &d, &d2, s, args.same, 600)
            }
            fieldprop::PropagatorKind::WightmanBwd => {
                oracle::wightman_ordered_2d(TimeOrder::Bwd, &d, &d2, s, args.same, 600)
            }
            fieldprop::PropagatorKind::Hadamard => oracle::hadamard(&d, &d2, s, args.same),
            fieldprop::PropagatorKind::Causal => oracle::causal(&d, &d2, s, args.same),
            fieldprop::PropagatorKind::Retarded => oracle::retarded_2d(&d, &d2, s, args.same, 700),
            fieldprop::PropagatorKind::Advanced => oracle::advanced_2d(&d, &d2, s, args.same, 700),
            fieldprop::PropagatorKind::Symmetric => oracle::retarded_2d(&d, &d2, s, args.same, 700)
                .and_then(|r| oracle::advanced_2d(&d, &d2, s, args.same, 700).map(|a| r + a)),
            fieldprop::PropagatorKind::Feynman => oracle::feynman_2d(&d, &d2, s, args.same, 600),
        };
        match oracle_value {
            Ok(o) => {
                println!("oracle:      {:+.16e} {:+.16e}i", o.re, o.im);
                let rel = (value.value - o).norm() / o.norm().max(1e-300);
                println!("relative deviation: {rel:.3e}");
            }
            Err(e) => {
                eprintln!("oracle failed: {e}");
                return EXIT_NUMERICAL;
            }
        }
    }
    0
}
