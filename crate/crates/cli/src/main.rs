use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use theta_rigidity::genus::witten_genus;
use theta_rigidity::instance::Instance;
use theta_rigidity::lefschetz::{lefschetz_parts, lefschetz_series_with, EquivariantData};
use theta_rigidity::qseries::{QExponent, QSeries};
use theta_rigidity::rigidity::{
    anomaly_check, default_grid, periodicity_check, pole_scan, rigidity_scan, st_relation_check, t_sample,
    AnomalyCondition, Relation, SearchBox, Shift,
};
use theta_rigidity::theta::{jacobi_identity_residual, theta_eval, Tau, ThetaKind};
use theta_rigidity::{Error, PrecisionComplex, PrecisionConfig};

mod output;

use output::{check_output, pole_output, scan_output, Format, Output};

const DEFAULT_DIGITS: u32 = 60;
const SERIES_DIGITS: usize = 20;

#[derive(Parser)]
#[command(name = "theta-rigidity", version, about = "Modular checks of equivariant Witten-type indices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Working precision in decimal digits; overrides the instance file.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// q-series truncation in eighths of a power of q; overrides the instance file.
    #[arg(long = "q-order", global = true)]
    q_order: Option<u32>,
    /// Grid side for scan-rigidity.
    #[arg(long, global = true, default_value_t = 5)]
    grid: usize,
    /// Also write the result to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one theta function and report the Jacobi identity residual.
    Theta {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        tau: String,
    },
    /// Lefschetz number at (t, tau), or its q-series at t when tau is omitted.
    Lefschetz {
        instance: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long)]
        tau: Option<String>,
    },
    /// The genus of the manifold section as a q-series.
    Genus { instance: PathBuf },
    CheckPeriodicity {
        instance: PathBuf,
        #[arg(long, default_value = "0.3+0.8i")]
        tau: String,
        #[arg(long, default_value = "0.2+0.1i")]
        t: String,
        /// 2 or 2tau.
        #[arg(long, default_value = "2tau")]
        shift: String,
        /// Anomaly coefficients as "alpha,beta"; defaults by case.
        #[arg(long)]
        condition: Option<String>,
    },
    CheckSt {
        instance: PathBuf,
        /// S or T.
        #[arg(long)]
        relation: String,
        #[arg(long, default_value = "0.3+0.8i")]
        tau: String,
        #[arg(long, default_value = "0.2+0.1i")]
        t: String,
    },
    CheckAnomaly {
        instance: PathBuf,
        #[arg(long)]
        condition: Option<String>,
    },
    ScanRigidity {
        instance: PathBuf,
        #[arg(long, default_value = "0.3+0.8i")]
        tau: String,
    },
    ScanPoles {
        instance: PathBuf,
        #[arg(long, default_value = "0.3+0.8i")]
        tau: String,
        /// Real range of the search box as "lo,hi".
        #[arg(long, default_value = "0,1")]
        re: String,
        /// Imaginary range of the search box as "lo,hi".
        #[arg(long, default_value = "0,1")]
        im: String,
    },
}

struct Loaded {
    instance: Instance,
    cfg: PrecisionConfig,
    truncation: QExponent,
}

fn load(path: &Path, global: &Global) -> Result<Loaded, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let instance = Instance::from_json(&text).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        other => other,
    })?;
    let cfg = match global.precision {
        Some(d) => PrecisionConfig::new(d)?,
        None => instance.precision_config()?,
    };
    let truncation = global.q_order.map(QExponent).unwrap_or_else(|| instance.truncation());
    Ok(Loaded {
        instance,
        cfg,
        truncation,
    })
}

fn data(l: &Loaded) -> Result<EquivariantData, Error> {
    l.instance.equivariant_data(&l.cfg)
}

fn condition(text: Option<&str>, data: &EquivariantData) -> Result<AnomalyCondition, Error> {
    match text {
        Some(s) => AnomalyCondition::parse(s),
        None => Ok(AnomalyCondition::default_for(data.case.dimension_class, data.case.lambda)),
    }
}

fn range(text: &str) -> Result<(f64, f64), Error> {
    let bad = || Error::Input(format!("range must look like 'lo,hi', got '{text}'"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn series_output(label: &str, series: &QSeries<PrecisionComplex>, digits: usize) -> Output {
    let terms: Vec<_> = series
        .terms()
        .map(|(e, c)| json!({"exponent": e.to_string(), "value": c.to_decimal(digits)}))
        .collect();
    Output::plain(
        format!("{label} = {}\n", series.render(SERIES_DIGITS)),
        json!({"series": label, "truncation": series.truncation().to_string(), "terms": terms}),
        true,
    )
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let g = &cli.global;
    match &cli.command {
        Command::Theta { kind, v, tau } => {
            let cfg = PrecisionConfig::new(g.precision.unwrap_or(DEFAULT_DIGITS))?;
            let kind = ThetaKind::parse(kind)?;
            let v_value = PrecisionComplex::parse(v, cfg.bits())?;
            let tau_value = Tau::parse(tau, cfg.bits())?;
            let value = theta_eval(kind, &v_value, &tau_value, &cfg)?;
            let residual = jacobi_identity_residual(&tau_value, &cfg)?;
            let tolerance = cfg.tolerance(20);
            let pass = residual < tolerance;
            let digits = cfg.digits as usize;
            Ok(Output::plain(
                format!(
                    "{}({v}, {tau}) = {}\njacobi identity residual at tau = {tau}: {residual:.3e} (tolerance {tolerance:.1e}, {})\n",
                    kind.name(),
                    value.to_decimal(digits),
                    if pass { "pass" } else { "fail" }
                ),
                json!({
                    "kind": kind.name(), "v": v, "tau": tau, "value": value.to_decimal(digits),
                    "jacobi_residual": residual, "tolerance": tolerance, "pass": pass,
                }),
                pass,
            ))
        }
        Command::Lefschetz { instance, t, tau } => {
            let l = load(instance, g)?;
            let d = data(&l)?;
            let prec = l.cfg.bits();
            let t_value = PrecisionComplex::parse(t, prec)?;
            let digits = l.cfg.digits as usize;
            match tau {
                Some(tau) => {
                    let tau_value = Tau::parse(tau, prec)?;
                    let parts = lefschetz_parts(&d, &t_value, &tau_value, &l.cfg)?;
                    let total = parts.iter().fold(PrecisionComplex::zero(prec), |acc, v| &acc + v);
                    let mut text = String::new();
                    for (i, p) in parts.iter().enumerate() {
                        text.push_str(&format!("component {i}: {}\n", p.to_decimal(digits)));
                    }
                    text.push_str(&format!("total: {}\n", total.to_decimal(digits)));
                    let json = json!({
                        "t": t, "tau": tau,
                        "components": parts.iter().map(|p| p.to_decimal(digits)).collect::<Vec<_>>(),
                        "total": total.to_decimal(digits),
                    });
                    Ok(Output::plain(text, json, true))
                }
                None => {
                    let mut total = QSeries::zero(&PrecisionComplex::zero(prec), l.truncation);
                    for c in &d.components {
                        let s = lefschetz_series_with(d.convention, &d.case, c, d.e.as_ref(), &t_value, l.truncation, &l.cfg)?;
                        for (e, v) in s.terms() {
                            total.add_term(e, v.clone());
                        }
                    }
                    Ok(series_output(&format!("L(t = {t})"), &total, digits))
                }
            }
        }
        Command::Genus { instance } => {
            let l = load(instance, g)?;
            let case = l.instance.case()?;
            let m = l.instance.manifold_data(&l.cfg)?;
            let series = witten_genus(case.dimension_class, case.lambda, &m, l.truncation, &l.cfg)?;
            Ok(series_output("genus", &series, l.cfg.digits as usize))
        }
        Command::CheckPeriodicity {
            instance,
            tau,
            t,
            shift,
            condition: cond,
        } => {
            let l = load(instance, g)?;
            let d = data(&l)?;
            let prec = l.cfg.bits();
            let cond = condition(cond.as_deref(), &d)?;
            let r = periodicity_check(
                &d,
                cond,
                &Tau::parse(tau, prec)?,
                &PrecisionComplex::parse(t, prec)?,
                Shift::parse(shift)?,
                &l.cfg,
            )?;
            Ok(check_output(&r))
        }
        Command::CheckSt {
            instance,
            relation,
            tau,
            t,
        } => {
            let l = load(instance, g)?;
            let d = data(&l)?;
            let prec = l.cfg.bits();
            let ts = t_sample(&PrecisionComplex::parse(t, prec)?);
            let r = st_relation_check(&d, Relation::parse(relation)?, &ts, &Tau::parse(tau, prec)?, &l.cfg)?;
            Ok(check_output(&r))
        }
        Command::CheckAnomaly {
            instance,
            condition: cond,
        } => {
            let l = load(instance, g)?;
            let d = data(&l)?;
            let cond = condition(cond.as_deref(), &d)?;
            Ok(check_output(&anomaly_check(&d, cond)))
        }
        Command::ScanRigidity { instance, tau } => {
            let l = load(instance, g)?;
            let d = data(&l)?;
            if g.grid == 0 {
                return Err(Error::Input("--grid must be at least 1".into()));
            }
            let prec = l.cfg.bits();
            let grid = default_grid(g.grid, prec);
            let r = rigidity_scan(&d, &Tau::parse(tau, prec)?, &grid, &l.cfg)?;
            Ok(scan_output(&r, l.cfg.tolerance(20), l.cfg.digits as usize))
        }
        Command::ScanPoles { instance, tau, re, im } => {
            let l = load(instance, g)?;
            let d = data(&l)?;
            let bx = SearchBox {
                re: range(re)?,
                im: range(im)?,
            };
            let r = pole_scan(&d, &Tau::parse(tau, l.cfg.bits())?, &bx, &l.cfg)?;
            Ok(pole_output(&r))
        }
    }
}

fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Case(_) | Error::Domain(_) | Error::Precision(_) => 2,
        Error::Pole { .. }
        | Error::Divergence(_)
        | Error::Quadrature(_)
        | Error::Inversion
        | Error::Arity { .. }
        | Error::Grading(_) => 3,
    }
}

fn emit(cli: &Cli, out: &Output) -> Result<(), Error> {
    let stdout = out
        .render(cli.global.format)
        .ok_or_else(|| Error::Input("this command has no csv output".into()))?;
    print!("{stdout}");
    if let Some(path) = &cli.global.out {
        let format = match cli.global.format {
            Format::Text => out.file_default,
            f => f,
        };
        let body = out.render(format).expect("file formats are always available");
        std::fs::write(path, body).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| emit(&cli, &out).map(|_| out.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}
