//! The `symdyn` command line: entropy and pressure enclosures, witnesses,
//! beta expansions and Sofic approximations.

pub mod spec;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use symdyn_core::families::{BetaExpansion, BetaNumber};
use symdyn_core::pressure::{sft_pressure_with_budget, sofic_pressure_with_budget, PERRON_BUDGET};
use symdyn_core::rational::{fmt_ratio, parse_rational, to_decimal};
use symdyn_core::{
    build_witness, coded_pressure, sofic_approximation, DriverBudget, Error, LocallyConstantPotential,
    PotentialOracle, PressureEnclosure, RationalInterval, Result, Status, VertexShift, WitnessConfig,
};

pub use spec::{parse_shift_spec, Shift, ShiftKind, ShiftSpec};

#[derive(Debug, Parser)]
#[command(name = "symdyn", version, about = "Certified entropy and pressure of symbolic systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Topological entropy enclosure.
    Entropy(EngineArgs),
    /// Topological pressure enclosure for a locally constant potential.
    Pressure(EngineArgs),
    /// Zero-entropy witness with the same length-n language.
    Witness(WitnessArgs),
    /// Digits of the greedy expansion of 1 in base beta.
    BetaExpand(BetaArgs),
    /// Sofic approximation X_m of a coded shift, as a shift file.
    Approx(ApproxArgs),
}

#[derive(Debug, Args)]
struct EngineArgs {
    #[arg(long)]
    shift: PathBuf,
    #[arg(long)]
    potential: Option<PathBuf>,
    /// Target width 2^-p.
    #[arg(long, default_value_t = 16)]
    precision: u32,
    #[arg(long, default_value_t = 20)]
    max_upper: usize,
    #[arg(long, default_value_t = 64)]
    max_gen: usize,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long)]
    shift: PathBuf,
    #[arg(long)]
    potential: Option<PathBuf>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "1/16")]
    epsilon: String,
    #[arg(long, default_value_t = 20)]
    precision: u32,
    /// Component indices to use; all when omitted.
    #[arg(long, value_delimiter = ',')]
    marks: Option<Vec<usize>>,
    #[arg(long, default_value_t = 20)]
    max_upper: usize,
    #[arg(long, default_value_t = 64)]
    max_gen: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BetaArgs {
    /// `p/q`, or `algebraic x^2-x-1 [1.6,1.7]`.
    #[arg(long)]
    beta: String,
    #[arg(long)]
    digits: usize,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    #[arg(long)]
    shift: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

pub fn load_shift(path: &Path) -> Result<Shift> {
    parse_shift_spec(&read(path)?)?.build()
}

fn load_potential(path: Option<&Path>) -> Result<LocallyConstantPotential> {
    match path {
        Some(p) => LocallyConstantPotential::parse(&read(p)?),
        None => Ok(LocallyConstantPotential::zero()),
    }
}

/// Pressure enclosure for any shift kind. SFT and Sofic shifts get a
/// single Perron-Frobenius enclosure; coded shifts run the two-sided
/// driver.
pub fn enclose(shift: &Shift, phi: &LocallyConstantPotential, p: u32, budget: DriverBudget) -> Result<PressureEnclosure> {
    let single = |(interval, ok): (RationalInterval, bool)| PressureEnclosure {
        interval,
        upper_trace: Vec::new(),
        lower_trace: Vec::new(),
        status: if ok { Status::Converged } else { Status::BudgetExhausted },
    };
    phi.check_alphabet(shift.alphabet())?;
    match shift {
        Shift::Sft(v) => Ok(single(sft_pressure_with_budget(v, phi, p, PERRON_BUDGET)?)),
        Shift::Sofic(g) => Ok(single(sofic_pressure_with_budget(g, phi, p, PERRON_BUDGET)?)),
        Shift::Coded(c) => coded_pressure(c, &PotentialOracle::exact(phi.clone()), p, budget),
    }
}

fn decimal_digits(p: u32) -> usize {
    (p as usize * 30103).div_ceil(100000) + 2
}

fn render_interval(x: &RationalInterval, digits: usize) -> String {
    format!(
        "interval: [{}, {}]\ndecimal: [{}, {}]\nwidth: {}\n",
        fmt_ratio(x.lo()),
        fmt_ratio(x.hi()),
        to_decimal(x.lo(), digits, false),
        to_decimal(x.hi(), digits, true),
        fmt_ratio(&x.width())
    )
}

fn engine(args: &EngineArgs, entropy: bool, out: &mut dyn Write) -> Result<i32> {
    let shift = load_shift(&args.shift)?;
    let phi = if entropy {
        if args.potential.is_some() {
            return Err(Error::InvalidArgument("entropy takes no potential".into()));
        }
        LocallyConstantPotential::zero()
    } else {
        load_potential(args.potential.as_deref())?
    };
    let budget = DriverBudget::new(args.max_upper, args.max_gen);
    let enc = enclose(&shift, &phi, args.precision, budget)?;
    let mut report = format!("status: {}\n", enc.status);
    report.push_str(&render_interval(&enc.interval, decimal_digits(args.precision)));
    if let Shift::Coded(_) = shift {
        let _ = writeln!(
            report,
            "upper-steps: {}\nlower-steps: {}",
            enc.upper_trace.len(),
            enc.lower_trace.len()
        );
    }
    emit(out, &report, args.out.as_deref())?;
    if let Some(path) = &args.trace {
        let csv = match shift {
            Shift::Coded(_) => enc.trace_csv(),
            _ => format!(
                "kind,index,lo,hi\nperron,0,{},{}\n",
                fmt_ratio(enc.interval.lo()),
                fmt_ratio(enc.interval.hi())
            ),
        };
        write_file(path, &csv)?;
    }
    Ok(match enc.status {
        Status::Converged => 0,
        Status::BudgetExhausted => 2,
    })
}

fn emit(out: &mut dyn Write, text: &str, file: Option<&Path>) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::InvalidArgument(format!("stdout: {e}")))?;
    if let Some(path) = file {
        write_file(path, text)?;
    }
    Ok(())
}

fn witness(args: &WitnessArgs, out: &mut dyn Write) -> Result<i32> {
    let shift = load_shift(&args.shift)?;
    let phi = load_potential(args.potential.as_deref())?;
    let epsilon = parse_rational(&args.epsilon)?;
    let x = enclose(&shift, &phi, args.precision, DriverBudget::new(args.max_upper, args.max_gen))?;
    let lang = shift.language();
    let blocks = VertexShift::from_language(lang.as_ref(), args.n)?;
    let cfg = WitnessConfig {
        n: args.n,
        epsilon,
        marks: args.marks.clone(),
        precision: args.precision,
    };
    let report = build_witness(&blocks, &phi, &x.interval, &cfg)?;
    emit(out, &report.to_text(), args.out.as_deref())?;
    Ok(if report.language_agrees { 0 } else { 1 })
}

fn beta_expand(args: &BetaArgs, out: &mut dyn Write) -> Result<i32> {
    let beta = match parse_rational(&args.beta) {
        Ok(q) => BetaNumber::rational(q)?,
        Err(_) => BetaNumber::parse(&args.beta)?,
    };
    let digits = BetaExpansion::new(beta)?.digits(args.digits)?;
    let sep = if digits.iter().any(|&d| d >= 10) { "," } else { "" };
    let text: Vec<String> = digits.iter().map(u8::to_string).collect();
    emit(out, &format!("{}\n", text.join(sep)), None)?;
    Ok(0)
}

fn approx(args: &ApproxArgs, out: &mut dyn Write) -> Result<i32> {
    let Shift::Coded(c) = load_shift(&args.shift)? else {
        return Err(Error::InvalidArgument("approx needs a coded shift".into()));
    };
    let g = sofic_approximation(&c, args.m)?;
    let text = format!("alphabet {}\n{}", c.alphabet().size(), g.to_stanza());
    emit(out, &text, args.out.as_deref())?;
    Ok(0)
}

/// Runs the command line; returns the exit code: 0 converged, 2 budget
/// exhausted, 1 usage or input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Entropy(a) => engine(a, true, out),
        Command::Pressure(a) => engine(a, false, out),
        Command::Witness(a) => witness(a, out),
        Command::BetaExpand(a) => beta_expand(a, out),
        Command::Approx(a) => approx(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
