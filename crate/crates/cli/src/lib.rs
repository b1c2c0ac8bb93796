//! The `beltrami` command line: exact exponent classification, the interval
//! table, and the numerical experiments, all with CSV on standard output.

use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::PathBuf;

use beltrami_core::bootstrap::{beltrami_trace, BootstrapTrace, System, DEFAULT_MAX_ITER};
use beltrami_core::criteria::{euler_gradient_verdict, nse_gradient_verdict, Verdict};
use beltrami_core::exponents::BochnerSpec;
use beltrami_core::regularity::{
    alpha_at_l_left, beta0_verdict, ln_rn, nse_regularity_verdict, side_level, Side,
};
use beltrami_core::{ExponentError, ExtRational};
use beltrami_flow::error::FlowError;
use beltrami_flow::fields::{Domain, SampledField};
use beltrami_flow::io::format_real;
use beltrami_flow::mollify::{
    convergence_rows, divergence_residual, gradient_rows, mollify_family, piola_defect,
    support_margin, MollifierConfig, TransversalMap, DEFAULT_QUAD_ORDER, DEFAULT_XI,
};
use beltrami_flow::trkal::{random_beltrami, run_beltrami};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "beltrami",
    version,
    about = "Energy-equality and regularity classifiers for Beltrami flows"
)]
pub struct Cli {
    /// Suppress the version banner on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Write the CSV to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify an exponent hypothesis.
    Classify(ClassifyArgs),
    /// Band location and threshold for a hypothesis with 2/alpha + 3/beta < 1.
    Beta0(PairArgs),
    /// Exact interval tables.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
    },
    /// Mollifier experiment on the unit ball, one row per delta.
    MollifyExperiment(MollifyArgs),
    /// Pseudo-spectral run from Beltrami data with the energy ledger.
    SimulateTrkal(TrkalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassifyKind {
    /// Euler energy equality from grad u in L^p(L^q).
    EulerGrad,
    /// Navier-Stokes energy equality or regularity from grad u in L^p(L^q).
    NseGrad,
    /// Euler-Beltrami bootstrap from lambda in L^alpha(L^beta).
    EulerBeltrami,
    /// Navier-Stokes-Beltrami bootstrap from lambda in L^alpha(L^beta).
    NseBeltrami,
    /// Navier-Stokes-Beltrami regularity from the exact exponent.
    NseRegularity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    LnRn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestField {
    /// `e_z x x`, tangential on the sphere.
    Rotation,
    /// Compactly supported swirl `curl(f(|x|^2) e_z)`.
    Swirl,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(value_enum)]
    pub kind: ClassifyKind,
    #[arg(long)]
    pub p: Option<ExtRational>,
    #[arg(long)]
    pub q: Option<ExtRational>,
    #[arg(long)]
    pub alpha: Option<ExtRational>,
    #[arg(long)]
    pub beta: Option<ExtRational>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub alpha: ExtRational,
    #[arg(long)]
    pub beta: ExtRational,
}

#[derive(Debug, Args)]
pub struct MollifyArgs {
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    /// Repeatable; strictly decreasing.
    #[arg(long = "delta", default_values_t = [0.2, 0.1, 0.05, 0.025])]
    pub deltas: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_XI)]
    pub xi: f64,
    #[arg(long, default_value_t = DEFAULT_QUAD_ORDER)]
    pub quad_order: usize,
    /// Sum the kernel over grid nodes instead of Gauss nodes.
    #[arg(long)]
    pub lattice: bool,
    #[arg(long, value_enum, default_value_t = TestField::Rotation)]
    pub field: TestField,
    /// Norm exponent for the error and gradient columns.
    #[arg(long, default_value = "2")]
    pub q: ExtRational,
}

#[derive(Debug, Args)]
pub struct TrkalArgs {
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    /// Curl eigenvalue; lambda^2 must be a sum of three squares.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// 0 gives the Euler equations.
    #[arg(long, default_value_t = 1.0)]
    pub viscosity: f64,
    /// Seed for the mode amplitudes and phases.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Exponent(ExponentError),
    Flow(FlowError),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Exponent(_) => 2,
            CliError::Flow(FlowError::InvalidConfig(_) | FlowError::DomainMismatch { .. }) => 2,
            CliError::Flow(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Exponent(e) => write!(f, "{}: {e}", error_kind(e)),
            CliError::Flow(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn error_kind(e: &ExponentError) -> &'static str {
    match e {
        ExponentError::CriticalExponent { .. } => "CriticalExponent",
        ExponentError::ExponentOutOfRange { .. } => "ExponentOutOfRange",
        ExponentError::TopologyObstruction => "TopologyObstruction",
        ExponentError::IterationExhausted { .. } => "IterationExhausted",
        ExponentError::HypothesisTooWeak { .. } => "HypothesisTooWeak",
    }
}

impl From<ExponentError> for CliError {
    fn from(e: ExponentError) -> Self {
        CliError::Exponent(e)
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        CliError::Flow(e)
    }
}

fn require(v: &Option<ExtRational>, flag: &str, kind: &str) -> Result<ExtRational, CliError> {
    v.clone()
        .ok_or_else(|| CliError::Usage(format!("classify {kind} requires --{flag}")))
}

pub const VERDICT_HEADER: &str = "level,citation,provenance,witness_p,witness_q,audit";
pub const TRACE_HEADER: &str = "n,p,q,scaling,route,energy,regularity,stagnant";
pub const TABLE_HEADER: &str = "n,L_lo,L_hi,R_lo,R_hi,crossover,alpha_at_L_left,level_L,level_R";
pub const MOLLIFY_HEADER: &str =
    "delta,error_q,grad_q,support_margin,margin_bound,piola_defect,div_residual";

fn audit_string(v: &Verdict, extra: &[(&str, String)]) -> String {
    let mut parts: Vec<String> = v
        .justification
        .audit
        .iter()
        .map(|(k, x)| format!("{k}={x}"))
        .collect();
    parts.extend(extra.iter().map(|(k, x)| format!("{k}={x}")));
    parts.join(";")
}

/// One verdict row (no header).
pub fn verdict_row(v: &Verdict, extra: &[(&str, String)]) -> String {
    let j = &v.justification;
    format!(
        "{},{},{},{},{},{}",
        v.level,
        j.citation,
        j.provenance.as_str(),
        j.witness.time_exp,
        j.witness.space_exp,
        audit_string(v, extra)
    )
}

/// Verdict row, a blank line, then the per-step table.
pub fn trace_csv(t: &BootstrapTrace) -> String {
    let mut s = format!("{VERDICT_HEADER}\n");
    let extra = [
        ("stop", t.stop.to_string()),
        ("on_curve", t.on_theorem_curve.to_string()),
    ];
    s.push_str(&verdict_row(&t.final_verdict, &extra));
    s.push_str("\n\n");
    s.push_str(TRACE_HEADER);
    s.push('\n');
    for st in &t.steps {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            st.index,
            st.grad_space.time_exp,
            st.grad_space.space_exp,
            st.scaling,
            st.route.as_str(),
            st.energy_certified,
            st.regularity_certified,
            st.stagnant
        );
    }
    s
}

pub fn ln_rn_csv(n_max: u64) -> Result<String, CliError> {
    let mut s = format!("{TABLE_HEADER}\n");
    for n in 1..=n_max {
        let r = ln_rn(n)?;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.l_lo,
            r.l_hi,
            r.r_lo,
            r.r_hi,
            r.crossover,
            alpha_at_l_left(n)?,
            side_level(n, Side::L),
            side_level(n, Side::R)
        );
    }
    Ok(s)
}

fn classify(a: &ClassifyArgs) -> Result<String, CliError> {
    let name = a.kind.to_possible_value().expect("no skipped variants");
    let kind = name.get_name();
    let single = |v: Verdict| format!("{VERDICT_HEADER}\n{}\n", verdict_row(&v, &[]));
    Ok(match a.kind {
        ClassifyKind::EulerGrad | ClassifyKind::NseGrad => {
            let s = BochnerSpec::new(require(&a.p, "p", kind)?, require(&a.q, "q", kind)?);
            let v = if a.kind == ClassifyKind::EulerGrad {
                euler_gradient_verdict(&s)?
            } else {
                nse_gradient_verdict(&s)?
            };
            single(v)
        }
        ClassifyKind::EulerBeltrami | ClassifyKind::NseBeltrami => {
            let system = if a.kind == ClassifyKind::EulerBeltrami {
                System::Euler
            } else {
                System::Nse
            };
            let t = beltrami_trace(
                system,
                &require(&a.alpha, "alpha", kind)?,
                &require(&a.beta, "beta", kind)?,
                a.max_iter,
            )?;
            trace_csv(&t)
        }
        ClassifyKind::NseRegularity => single(nse_regularity_verdict(
            &require(&a.alpha, "alpha", kind)?,
            &require(&a.beta, "beta", kind)?,
        )?),
    })
}

fn test_field(kind: TestField, n: usize) -> Result<SampledField, CliError> {
    let f = match kind {
        TestField::Rotation => SampledField::from_fn(Domain::Ball, n, |x| [-x[1], x[0], 0.0])?,
        TestField::Swirl => SampledField::from_fn(Domain::Ball, n, |x| {
            let r2 = 0.64;
            let s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            if s >= r2 {
                return [0.0; 3];
            }
            let fp = -4.0 / r2 * (1.0 - s / r2).powi(3);
            [2.0 * x[1] * fp, -2.0 * x[0] * fp, 0.0]
        })?,
    };
    Ok(f)
}

fn mollify_experiment(a: &MollifyArgs) -> Result<String, CliError> {
    let first = *a
        .deltas
        .first()
        .ok_or_else(|| CliError::Usage("at least one --delta is required".into()))?;
    let template = if a.lattice {
        MollifierConfig::lattice(first, a.xi)?
    } else {
        MollifierConfig::new(first, a.xi, a.quad_order)?
    };
    let v = test_field(a.field, a.grid)?;
    let family = mollify_family(&v, &a.deltas, &template)?;
    let errors = convergence_rows(&v, &a.deltas, &family, &a.q)?;
    let grads = gradient_rows(&a.deltas, &family, &a.q);
    let mut s = format!("{MOLLIFY_HEADER}\n");
    for (i, &d) in a.deltas.iter().enumerate() {
        let cfg = template.with_delta(d)?;
        let w = &family[i];
        let div = match divergence_residual(w) {
            Ok(r) => format_real(r),
            Err(FlowError::UndefinedRatio(_)) => String::new(),
            Err(e) => return Err(e.into()),
        };
        let cols = [
            d,
            errors[i].1,
            grads[i].1,
            support_margin(w)?,
            cfg.support_margin_bound(),
            piola_defect(&TransversalMap { delta: d }, a.grid)?,
        ];
        let cols: Vec<String> = cols.into_iter().map(format_real).collect();
        let _ = writeln!(s, "{},{div}", cols.join(","));
    }
    Ok(s)
}

fn simulate(a: &TrkalArgs) -> Result<String, CliError> {
    let l2 = a.lambda * a.lambda;
    let k2 = l2.round();
    if !(a.lambda != 0.0 && (l2 - k2).abs() <= 1e-9 * l2.max(1.0)) {
        return Err(CliError::Usage(format!(
            "--lambda {} must have an integer square",
            a.lambda
        )));
    }
    let spec = random_beltrami(k2 as i32, a.lambda.signum(), a.seed)?;
    let ledger = run_beltrami(&spec, a.t_end, a.dt, a.grid, a.viscosity)?;
    Ok(ledger.to_csv())
}

/// Execute parsed arguments and return the CSV text.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Classify(a) => classify(a),
        Command::Beta0(a) => {
            let v = beta0_verdict(&a.alpha, &a.beta)?;
            Ok(format!("{VERDICT_HEADER}\n{}\n", verdict_row(&v, &[])))
        }
        Command::Table {
            kind: TableKind::LnRn,
            n_max,
        } => ln_rn_csv(*n_max),
        Command::MollifyExperiment(a) => mollify_experiment(a),
        Command::SimulateTrkal(a) => simulate(a),
    }
}

/// Parse `argv` (program name first), run, and write to the given streams.
/// Returns the process exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if !cli.quiet {
        let _ = writeln!(stderr, "beltrami {}", env!("CARGO_PKG_VERSION"));
    }
    let result = execute(&cli).and_then(|csv| match &cli.out {
        Some(path) => std::fs::write(path, csv).map_err(CliError::Io),
        None => stdout.write_all(csv.as_bytes()).map_err(CliError::Io),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
