use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use mmwpl_core::io::{self as csvio, PathLossRow};
use mmwpl_core::link::monte_carlo_outage;
use mmwpl_core::pathloss::PRESETS;
use mmwpl_core::{
    coverage_curve, fit_close_in, fit_floating, fit_p_los, los_probability_curve, mean_curve, BuildingDbF64,
    CircleSampling, CloseInModel, Condition, Denominator, DistanceGridF64, FloatingInterceptModel, HybridModelF64,
    LosCurveF64, LosParamsF64, OutageSpecF64, ParameterPreset, PathLossModel, PathLossSampleF64, Point3F64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::*;

/// Failure carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input: exit code 2.
    Input(String),
    /// Well-formed input with no numerical answer: exit code 1.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<mmwpl_core::Error> for CliError {
    fn from(e: mmwpl_core::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Writes to a temporary file next to `path` and renames it into place.
fn emit(out: &OutArg, render: impl FnOnce(&mut dyn Write) -> CliResult) -> CliResult {
    match &out.out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            render(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            render(tmp.as_file_mut())?;
            tmp.as_file_mut().flush()?;
            tmp.persist(path).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &OutArg, value: &T) -> CliResult {
    emit(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(|e| input(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    })
}

fn grid(g: &GridArgs) -> CliResult<DistanceGridF64> {
    Ok(DistanceGridF64::new(g.rmin, g.rmax, g.step)?)
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn resolve_tx(db: &BuildingDbF64, tx: Option<&str>) -> CliResult<Point3F64> {
    match tx {
        None => match db.sites() {
            [only] => Ok(only.position),
            _ => Err(input("--tx is required unless the database defines exactly one site")),
        },
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
            if parts.len() == 3 {
                let v: Vec<f64> = parts
                    .iter()
                    .map(|p| p.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| input(format!("bad --tx coordinates {spec:?}")))?;
                let p = Point3F64::new(v[0], v[1], v[2]);
                if !p.is_finite() {
                    return Err(input("--tx coordinates must be finite"));
                }
                return Ok(p);
            }
            db.site(spec).map(|s| s.position).ok_or_else(|| input(format!("no site {spec:?} in the database")))
        }
    }
}

pub fn los_prob(a: &LosProbArgs) -> CliResult {
    let db = BuildingDbF64::from_path(&a.db).map_err(|e| input(format!("{}: {e}", a.db.display())))?;
    let tx = resolve_tx(&db, a.tx.as_deref())?;
    let sampling = CircleSampling {
        n_points: a.points,
        rx_height: a.rx_height,
        denominator: if a.all_points { Denominator::AllPoints } else { Denominator::ExteriorOnly },
    };
    let curve = los_probability_curve(&db, &tx, &grid(&a.grid)?, &sampling)?;
    emit(&a.out, |mut w| Ok(csvio::write_los_curve(&mut w, &curve)?))
}

#[derive(Serialize)]
struct LosFitDoc {
    d_bp_m: f64,
    alpha_m: f64,
    squared: bool,
    mse: f64,
}

pub fn fit_plos(a: &FitPlosArgs) -> CliResult {
    if a.curves.len() > 1 && !a.mean {
        return Err(input("several curves given: pass --mean to fit their average"));
    }
    let curves = a
        .curves
        .iter()
        .map(|p| csvio::read_los_curve(open(p)?).map_err(|e| input(format!("{}: {e}", p.display()))))
        .collect::<CliResult<Vec<LosCurveF64>>>()?;
    let curve = if a.mean { mean_curve(&curves)? } else { curves.into_iter().next().unwrap() };
    let fit = fit_p_los(&curve)?;
    emit_json(
        &a.out,
        &LosFitDoc { d_bp_m: fit.params.d_bp(), alpha_m: fit.params.alpha(), squared: fit.params.is_squared(), mse: fit.mse },
    )
}

fn hybrid(a: &HybridArgs) -> CliResult<HybridModelF64> {
    let preset: Option<&ParameterPreset> = match &a.preset {
        Some(label) => Some(ParameterPreset::by_label(label).ok_or_else(|| {
            let known: Vec<_> = PRESETS.iter().map(|p| p.label).collect();
            input(format!("unknown preset {label:?}; known presets: {}", known.join(", ")))
        })?),
        None => None,
    };
    let pick = |flag: Option<f64>, fallback: Option<f64>, name: &str| {
        flag.or(fallback).ok_or_else(|| input(format!("--{name} is required without --preset")))
    };
    let frequency = pick(a.frequency, preset.map(|p| p.frequency_hz), "frequency")?;
    let los = CloseInModel::new(
        frequency,
        pick(a.n_los, preset.map(|p| p.los.0), "n-los")?,
        pick(a.sigma_los, preset.map(|p| p.los.1), "sigma-los")?,
    )?;
    let nlos = match a.nlos {
        NlosArg::CloseIn => PathLossModel::CloseIn(CloseInModel::new(
            frequency,
            pick(a.n_nlos, preset.map(|p| p.nlos_close_in.0), "n-nlos")?,
            pick(a.sigma_nlos, preset.map(|p| p.nlos_close_in.1), "sigma-nlos")?,
        )?),
        NlosArg::Floating => PathLossModel::FloatingIntercept(FloatingInterceptModel::new(
            pick(a.fi_intercept, preset.map(|p| p.nlos_floating.0), "fi-intercept")?,
            pick(a.fi_slope, preset.map(|p| p.nlos_floating.1), "fi-slope")?,
            pick(a.fi_sigma, preset.map(|p| p.nlos_floating.2), "fi-sigma")?,
            preset.map(|p| p.floating_range).unwrap_or((30.0, 200.0)),
        )?),
    };
    let p_los = LosParamsF64::new(a.dbp, a.alpha, !a.winner)?;
    Ok(HybridModelF64::new(los, nlos, p_los))
}

pub fn pathloss(a: &PathlossArgs) -> CliResult {
    let model = hybrid(&a.model)?;
    let rows = grid(&a.grid)?
        .values()
        .into_iter()
        .map(|d| {
            Ok(PathLossRow { distance: d, p_los: model.p_los_at(d), mean_pl_db: model.mean_pl(d)?, sigma_db: model.shadow_sigma(d)? })
        })
        .collect::<CliResult<Vec<_>>>()?;
    emit(&a.out, |mut w| Ok(csvio::write_pathloss_rows(&mut w, &rows)?))
}

#[derive(Serialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
enum FitDoc {
    CloseIn {
        condition: &'static str,
        frequency_hz: f64,
        exponent: f64,
        shadow_std_db: f64,
        n_samples: usize,
        skipped_rows: usize,
    },
    Floating {
        condition: &'static str,
        intercept_db: f64,
        slope: f64,
        shadow_std_db: f64,
        valid_range_m: [f64; 2],
        n_samples: usize,
        skipped_rows: usize,
    },
}

fn condition(c: ConditionArg) -> Condition {
    match c {
        ConditionArg::Los => Condition::Los,
        ConditionArg::Nlos => Condition::Nlos,
    }
}

pub fn fit(a: &FitArgs) -> CliResult {
    let (samples, skipped) = csvio::read_samples::<f64, _>(open(&a.samples)?)
        .map_err(|e| input(format!("{}: {e}", a.samples.display())))?;
    let cond = condition(a.condition);
    let subset = mmwpl_core::fitting::select(&samples, cond);
    let doc = match a.model {
        ModelArg::CloseIn => {
            let frequency = a.frequency.ok_or_else(|| input("--frequency is required for the close-in model"))?;
            let fit = fit_close_in(&subset, frequency)?;
            FitDoc::CloseIn {
                condition: cond.as_str(),
                frequency_hz: frequency,
                exponent: fit.exponent,
                shadow_std_db: fit.shadow_std_db,
                n_samples: subset.len(),
                skipped_rows: skipped,
            }
        }
        ModelArg::Floating => {
            let fit = fit_floating(&subset)?;
            let (lo, hi) = fit.valid_range();
            FitDoc::Floating {
                condition: cond.as_str(),
                intercept_db: fit.intercept_db(),
                slope: fit.slope(),
                shadow_std_db: fit.shadow_std_db(),
                valid_range_m: [lo, hi],
                n_samples: subset.len(),
                skipped_rows: skipped,
            }
        }
    };
    emit_json(&a.out, &doc)
}

pub fn outage(a: &OutageArgs) -> CliResult {
    let model = hybrid(&a.model)?;
    let spec = OutageSpecF64::new(a.threshold)?;
    let grid = grid(&a.grid)?;
    let points = coverage_curve(&model, &spec, &grid)?;
    let mc = match (a.monte_carlo, a.seed) {
        (Some(draws), Some(seed)) => {
            // one independent stream per distance keeps the result order-free
            let est = grid
                .values()
                .par_iter()
                .enumerate()
                .map(|(i, &d)| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    monte_carlo_outage(&model, d, &spec, draws, &mut rng)
                })
                .collect::<Result<Vec<f64>, _>>()?;
            Some(est)
        }
        (Some(_), None) => return Err(input("--monte-carlo requires --seed")),
        _ => None,
    };
    emit(&a.out, |mut w| Ok(csvio::write_coverage(&mut w, &points, mc.as_deref())?))
}

pub fn synth(a: &SynthArgs) -> CliResult {
    let preset = ParameterPreset::by_label(&a.preset).ok_or_else(|| input(format!("unknown preset {:?}", a.preset)))?;
    if !(a.dmin >= 1.0 && a.dmax > a.dmin && a.dmax.is_finite()) {
        return Err(input("need 1 <= dmin < dmax"));
    }
    let cond = condition(a.condition);
    let model: PathLossModel<f64> = match (cond, a.nlos) {
        (Condition::Los, _) => PathLossModel::CloseIn(preset.los_model()),
        (Condition::Nlos, NlosArg::CloseIn) => PathLossModel::CloseIn(preset.nlos_close_in_model()),
        (Condition::Nlos, NlosArg::Floating) => PathLossModel::FloatingIntercept(preset.nlos_floating_model()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let samples = (0..a.count)
        .map(|_| {
            let d = rng.random_range(a.dmin..=a.dmax);
            let z: f64 = StandardNormal.sample(&mut rng);
            let pl = model.mean_pl(d)? + model.shadow_std_db() * z;
            Ok(PathLossSampleF64::new(d, pl, cond)?)
        })
        .collect::<CliResult<Vec<_>>>()?;
    emit(&a.out, |mut w| Ok(csvio::write_samples(&mut w, &samples)?))
}
