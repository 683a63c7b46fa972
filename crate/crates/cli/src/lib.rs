//! Command-line front end: argument parsing, dispatch and CSV/JSON rendering.

pub mod args;
mod output;

use std::ffi::OsString;
use std::io::Write;

use anyhow::{anyhow, bail, Context};
use clap::error::ErrorKind;
use clap::Parser;
use fracstable::dist::{self, IminusLaw, SamplePopulation};
use fracstable::fracops::{self, SmoothTestFunction};
use fracstable::pathsim::{self, PathConfig, Reflect};
use fracstable::specfun::{self, GeneralIndex};
use fracstable::verify::{self, CmTarget, IdentityLawConfig, LaplaceLaw, ResolventPart, VerificationReport};
use fracstable::{QuadratureConfig, StabilityIndex};
use serde_json::Value;

use args::*;
use output::{Cell, Table};

pub const SEED_ENV: &str = "FRACSTABLE_SEED";
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_FAILED: u8 = 2;

struct Rendered {
    text: String,
    passed: bool,
}

/// Parses `argv` (program name first), runs one subcommand and returns the exit code.
pub fn run<I, T>(argv: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_ERROR
                }
            };
        }
    };
    let res = resolve_seed(cli.seed, env_seed).and_then(|seed| execute(&cli, seed));
    match res {
        Ok(r) => {
            let written = match &cli.output {
                Some(p) => std::fs::write(p, &r.text).with_context(|| format!("writing {}", p.display())),
                None => out.write_all(r.text.as_bytes()).context("writing output"),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e:#}");
                return EXIT_ERROR;
            }
            if r.passed {
                EXIT_OK
            } else {
                let _ = writeln!(err, "verification failed");
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

/// `--seed`, else the environment value, else [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> anyhow::Result<u64> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(e)) if !e.trim().is_empty() => parse_seed(e).map_err(|m| anyhow!("{SEED_ENV}: {m}")),
        _ => Ok(DEFAULT_SEED),
    }
}

fn execute(cli: &Cli, seed: u64) -> anyhow::Result<Rendered> {
    let table = |t: Table| Rendered {
        text: t.render(cli.format.unwrap_or(Format::Csv)),
        passed: true,
    };
    match &cli.command {
        Command::Ml(a) => ml(a, seed).map(table),
        Command::Fracop(a) => fracop(a, seed).map(table),
        Command::Density(a) => density(a, seed).map(table),
        Command::Moments(a) => moments(a, seed).map(table),
        Command::Sample(a) => sample(a, seed).map(table),
        Command::Simulate(a) => simulate(a, seed).map(table),
        Command::Verify(a) => {
            let mut r = verify_cmd(a, seed)?;
            r.seed.get_or_insert(seed);
            if cli.no_timing {
                r = r.without_timing();
            }
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => pretty(&r)?,
                Format::Csv => report_table(&r).render(Format::Csv),
            };
            Ok(Rendered { text, passed: r.passed })
        }
        Command::CalibrateBias(a) => {
            let rep = calibrate(a, seed)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => pretty(&rep)?,
                Format::Csv => bias_table(&rep).render(Format::Csv),
            };
            Ok(Rendered { text, passed: true })
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Command-line spelling of an enum value.
fn name<T: clap::ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn points(s: &str) -> anyhow::Result<Vec<f64>> {
    parse_points(s).map_err(|m| anyhow!(m))
}

fn index(alpha: f64) -> anyhow::Result<StabilityIndex> {
    Ok(StabilityIndex::new(alpha)?)
}

fn test_function(name: &str) -> anyhow::Result<SmoothTestFunction> {
    fracops::builtin(name).ok_or_else(|| anyhow!("unknown test function {name:?}; expected one of {:?}", fracops::BUILTIN_NAMES))
}

fn quad_cfg(base: QuadratureConfig, rel_tol: Option<f64>) -> anyhow::Result<QuadratureConfig> {
    let cfg = match rel_tol {
        Some(t) => base.with_rel_tol(t),
        None => base,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn ml(a: &MlArgs, seed: u64) -> anyhow::Result<Table> {
    let mut t = Table::new("ml", &["x", "value", "regime", "terms", "bound"])
        .meta("alpha", a.alpha)
        .meta("deriv", a.deriv)
        .meta("seed", seed);
    for x in points(&a.x)? {
        let e = specfun::mittag_leffler(a.alpha, x, a.deriv)?;
        let regime = serde_json::to_value(e.regime)?.as_str().unwrap_or_default().to_string();
        t.push(vec![x.into(), e.value.into(), Cell::Text(regime), Cell::Int(e.terms_used as u64), e.truncation_bound.into()]);
    }
    Ok(t)
}

fn fracop(a: &FracopArgs, seed: u64) -> anyhow::Result<Table> {
    let f = test_function(&a.func)?;
    let cfg = quad_cfg(QuadratureConfig::default(), a.rel_tol)?;
    let mut t = Table::new("fracop", &["x", "value"])
        .meta("op", name(&a.op))
        .meta("fn", a.func.as_str())
        .meta("alpha", a.alpha)
        .meta("seed", seed);
    let gen_idx = match (a.c_plus, a.c_minus) {
        (None, None) => None,
        (cp, cm) => {
            if a.op != FracOp::Generator {
                bail!("--c-plus and --c-minus only apply to --op generator");
            }
            Some(GeneralIndex::new(a.alpha, cp.unwrap_or(0.0), cm.unwrap_or(0.0))?)
        }
    };
    let idx = if a.op == FracOp::Generator && gen_idx.is_some() {
        None
    } else {
        Some(index(a.alpha)?)
    };
    for x in points(&a.x)? {
        let v = match a.op {
            FracOp::Caputo => fracops::caputo(&f, idx.unwrap(), x, &cfg)?,
            FracOp::DeltaPlus => fracops::delta_plus(&f, idx.unwrap(), x, &cfg)?,
            FracOp::RlLeft => fracops::rl_left_alpha(&f, idx.unwrap(), x, &cfg)?,
            FracOp::RlLeftAm1 => fracops::rl_left_alpha_minus1(&f, idx.unwrap(), x, &cfg)?,
            FracOp::RlRight => fracops::rl_right(&f, idx.unwrap(), x, &cfg)?,
            FracOp::Generator => {
                let g = gen_idx.unwrap_or_else(|| GeneralIndex::spectrally_negative(idx.unwrap()));
                fracops::reflected_generator_general(&f, g, x, &cfg)?
            }
        };
        t.push(vec![x.into(), v.into()]);
    }
    Ok(t)
}

fn density(a: &DensityArgs, seed: u64) -> anyhow::Result<Table> {
    let alpha = index(a.alpha)?;
    let ts = points(&a.t)?;
    let law = name(&a.law);
    if a.law == DensityLaw::Iminus {
        let l = IminusLaw::new(alpha)?;
        let mut t = Table::new("density", &["t", "pdf", "bound", "terms"])
            .meta("law", law)
            .meta("alpha", a.alpha)
            .meta("t_min", l.t_min())
            .meta("seed", seed);
        for x in ts {
            let p = l.pdf(x)?;
            t.push(vec![x.into(), p.value.into(), p.bound.into(), Cell::Int(p.terms as u64)]);
        }
        return Ok(t);
    }
    let pdf = match a.law {
        DensityLaw::Valpha => dist::valpha_pdf,
        DensityLaw::Yalpha => dist::yalpha_pdf,
        _ => dist::zbeta_pdf,
    };
    let mut t = Table::new("density", &["t", "pdf"]).meta("law", law).meta("alpha", a.alpha).meta("seed", seed);
    for x in ts {
        t.push(vec![x.into(), pdf(alpha, x)?.into()]);
    }
    Ok(t)
}

fn moments(a: &MomentsArgs, seed: u64) -> anyhow::Result<Table> {
    let alpha = index(a.alpha)?;
    type Moment = fn(StabilityIndex, f64) -> fracstable::Result<f64>;
    let (name, m): (&str, Moment) = match a.law {
        MomentLaw::V => ("v", dist::mom_v),
        MomentLaw::Y => ("y", dist::mom_y),
        MomentLaw::X => ("x", dist::mom_x),
        MomentLaw::Xhat => ("xhat", dist::mom_xhat),
        MomentLaw::Iminus => ("iminus", dist::iminus_moment),
    };
    let mut t = Table::new("moments", &["s", "moment"]).meta("law", name).meta("alpha", a.alpha).meta("seed", seed);
    for s in points(&a.s)? {
        t.push(vec![s.into(), m(alpha, s)?.into()]);
    }
    Ok(t)
}

fn population_table(command: &str, p: &SamplePopulation) -> anyhow::Result<Table> {
    let mut t = Table::new(command, &["value"])
        .meta("law", serde_json::to_value(p.law.kind)?)
        .meta("alpha", p.law.alpha)
        .meta("method", serde_json::to_value(p.method)?)
        .meta("n", p.n as u64)
        .meta("seed", p.seed);
    if let Some(steps) = p.law.steps {
        t = t.meta("steps", steps);
    }
    for &v in &p.values {
        t.push(vec![v.into()]);
    }
    Ok(t)
}

fn sample(a: &SampleArgs, seed: u64) -> anyhow::Result<Table> {
    let alpha = index(a.alpha)?;
    let p = match a.law {
        SampleLaw::Valpha => dist::valpha_sample(alpha, a.n, seed)?,
        SampleLaw::PosStable => dist::positive_stable_sample(alpha, a.n, seed)?,
        SampleLaw::StableIncrement => dist::stable_increment_sample(alpha, a.n, seed)?,
        SampleLaw::Xhat => dist::xhat_sample(alpha, a.n, seed)?,
    };
    population_table("sample", &p)
}

fn simulate(a: &SimulateArgs, seed: u64) -> anyhow::Result<Table> {
    let reflect = match a.reflect {
        ReflectArg::Sup => Reflect::AtSupremum,
        ReflectArg::Inf => Reflect::AtInfimum,
    };
    let cfg = PathConfig {
        horizon: a.horizon,
        ..PathConfig::new(index(a.alpha)?, a.steps, a.paths, seed, reflect)
    }
    .with_terminal_refinement(a.refine);
    let p = pathsim::simulate_reflected(&cfg)?;
    Ok(population_table("simulate", &p)?
        .meta("reflect", if reflect == Reflect::AtSupremum { "sup" } else { "inf" })
        .meta("horizon", a.horizon)
        .meta("refine", a.refine))
}

/// Flags each check accepts beyond `--alpha`.
fn allowed(check: Check) -> &'static [&'static str] {
    match check {
        Check::Intertwining => &["fn", "grid", "tol", "rel-tol"],
        Check::IdentityLaw => &["n-exact", "paths", "steps", "calibration-paths", "refine"],
        Check::Factorization => &["s"],
        Check::Cm => &["target", "n-max", "grid"],
        Check::Resolvent => &["fn", "grid", "part", "rel-tol"],
        Check::Lamperti => &["lambda", "rel-tol"],
        Check::Rep => &["grid", "rel-tol"],
        Check::Laplace => &["law", "lambda", "n"],
    }
}

fn check_flags(a: &VerifyArgs) -> anyhow::Result<()> {
    let given = [
        ("fn", a.func != "gauss"),
        ("grid", a.grid.is_some()),
        ("s", a.s.is_some()),
        ("lambda", a.lambda.is_some()),
        ("tol", a.tol.is_some()),
        ("rel-tol", a.rel_tol.is_some()),
        ("target", a.target.is_some()),
        ("n-max", a.n_max.is_some()),
        ("part", a.part.is_some()),
        ("law", a.law.is_some()),
        ("n", a.n.is_some()),
        ("n-exact", a.n_exact.is_some()),
        ("paths", a.paths.is_some()),
        ("steps", a.steps.is_some()),
        ("calibration-paths", a.calibration_paths.is_some()),
        ("refine", a.refine.is_some()),
    ];
    let ok = allowed(a.check);
    for (name, set) in given {
        if set && !ok.contains(&name) {
            bail!("--{name} does not apply to this check");
        }
    }
    Ok(())
}

fn grid_or(a: &Option<String>, default: &str) -> anyhow::Result<Vec<f64>> {
    points(a.as_deref().unwrap_or(default))
}

fn verify_cmd(a: &VerifyArgs, seed: u64) -> anyhow::Result<VerificationReport> {
    check_flags(a)?;
    let r = match a.check {
        Check::Intertwining => {
            let f = test_function(&a.func)?;
            let cfg = quad_cfg(QuadratureConfig::composite(), a.rel_tol)?;
            let grid = grid_or(&a.grid, "0.1:5:25")?;
            verify::check_intertwining(&f, index(a.alpha)?, &grid, &cfg, a.tol.unwrap_or(1e-3))?
        }
        Check::IdentityLaw => {
            let d = IdentityLawConfig::new(seed);
            let cfg = IdentityLawConfig {
                n_exact: a.n_exact.unwrap_or(d.n_exact),
                n_paths: a.paths.unwrap_or(d.n_paths),
                n_steps: a.steps.unwrap_or(d.n_steps),
                calibration_paths: a.calibration_paths.unwrap_or(d.calibration_paths),
                terminal_refinement: a.refine.unwrap_or(d.terminal_refinement),
                seed,
            };
            verify::check_identity_law(index(a.alpha)?, &cfg)?
        }
        Check::Factorization => {
            let s = a.s.as_deref().ok_or_else(|| anyhow!("factorization needs --s"))?;
            verify::check_factorization(index(a.alpha)?, &points(s)?)?
        }
        Check::Cm => {
            let target = match a.target.ok_or_else(|| anyhow!("cm needs --target"))? {
                CmTargetArg::RecipMl => CmTarget::RecipMl,
                CmTargetArg::FMinusFprime => CmTarget::FMinusFprime,
                CmTargetArg::ExpRatio => CmTarget::ExpRatio,
            };
            let n_max = a.n_max.unwrap_or(if target == CmTarget::ExpRatio { 6 } else { 8 });
            verify::check_cm(target, a.alpha, n_max, &grid_or(&a.grid, "0.25:20:80")?)?
        }
        Check::Resolvent => {
            let f = test_function(&a.func)?;
            let (part, base, default) = match a.part.ok_or_else(|| anyhow!("resolvent needs --part"))? {
                PartArg::Mass => (ResolventPart::Mass, QuadratureConfig::default().with_rel_tol(1e-10), "0:3:7"),
                PartArg::Generator => (ResolventPart::Generator, QuadratureConfig::composite(), "0.2:3:8"),
                PartArg::Boundary => (ResolventPart::Boundary, QuadratureConfig::composite(), "0"),
            };
            let cfg = quad_cfg(base, a.rel_tol)?;
            let grid = if part == ResolventPart::Boundary { Vec::new() } else { grid_or(&a.grid, default)? };
            verify::check_resolvent(&f, index(a.alpha)?, &grid, &cfg, part)?
        }
        Check::Lamperti => {
            let cfg = quad_cfg(QuadratureConfig::default().with_rel_tol(1e-10), a.rel_tol)?;
            verify::check_lamperti(index(a.alpha)?, &grid_or(&a.lambda, "0.5,1,2,5")?, &cfg)?
        }
        Check::Rep => {
            let cfg = quad_cfg(QuadratureConfig::default().with_rel_tol(1e-10), a.rel_tol)?;
            verify::check_rep(index(a.alpha)?, &grid_or(&a.grid, "0.5:2:7")?, &cfg)?
        }
        Check::Laplace => {
            let law = match a.law.unwrap_or(LaplaceLawArg::StableIncrement) {
                LaplaceLawArg::StableIncrement => LaplaceLaw::StableIncrement,
                LaplaceLawArg::PosStable => LaplaceLaw::PosStable,
            };
            let n = a.n.unwrap_or(1_000_000);
            verify::check_laplace_normalization(index(a.alpha)?, law, &grid_or(&a.lambda, "0.25,0.5,1")?, n, seed)?
        }
    };
    Ok(r)
}

fn report_table(r: &VerificationReport) -> Table {
    let mut t = Table::new("verify", &["at", "series", "residual"])
        .meta("check", r.check.as_str())
        .meta("alpha", r.alpha)
        .meta("tolerance", r.tolerance)
        .meta("max_abs_residual", r.max_abs_residual)
        .meta("passed", r.passed)
        .meta("seed", r.seed.map_or(Value::Null, Value::from))
        .meta("runtime_ms", r.runtime_ms);
    for v in &r.residuals {
        t.push(vec![v.at.into(), Cell::Text(v.series.clone().unwrap_or_default()), v.value.into()]);
    }
    t
}

fn calibrate(a: &CalibrateArgs, seed: u64) -> anyhow::Result<pathsim::BiasReport> {
    let ladder = points(&a.ladder)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u32)
            } else {
                Err(anyhow!("ladder entry {v} is not a step count"))
            }
        })
        .collect::<anyhow::Result<Vec<u32>>>()?;
    Ok(pathsim::bias_calibration(index(a.alpha)?, &ladder, a.paths, seed, a.refine)?)
}

fn bias_table(r: &pathsim::BiasReport) -> Table {
    let mut t = Table::new("calibrate-bias", &["n_steps", "ks", "s", "moment_gap", "gap_se"])
        .meta("alpha", r.alpha)
        .meta("n_paths", r.n_paths as u64)
        .meta("refine", r.terminal_refinement)
        .meta("seed", r.seed);
    for rung in &r.rungs {
        for &(s, gap, se) in &rung.moment_gaps {
            t.push(vec![Cell::Int(rung.n_steps as u64), rung.ks.into(), s.into(), gap.into(), se.into()]);
        }
    }
    t
}
