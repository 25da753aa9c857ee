//! The four subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fgc_core::analysis::{self, AnalysisError, DARK_FLOOR};
use fgc_core::dynamics::{self, DynamicsError, DynamicsOptions};
use fgc_core::math;
use fgc_core::preset::{self, PRESET_NAMES};
use fgc_core::spectrum::{self, SpectrumError, SpectrumOptions, SpectrumResult};
use fgc_core::trapping::{self, TrappingError, TrappingReport};
use fgc_core::validation;
use fgc_core::{Complex64, D2System};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{Format, MethodArg, Metric, Param, SourceArgs, SpectrumArgs, SweepArgs, TrappingArgs, ValidateArgs};
use crate::output::{self, num, RunManifest};
use crate::scenario::{self, Scenario, ScenarioError, Source, System};
use crate::svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Input(String),
    #[error("{operation} failed: {message}")]
    Numerical { operation: &'static str, message: String },
    #[error("cannot solve: {0}")]
    Unsolvable(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Scenario(_) | CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Numerical { .. } => 3,
            CliError::Unsolvable(_) => 4,
        }
    }

    fn spectrum(operation: &'static str, e: SpectrumError) -> Self {
        match e {
            SpectrumError::NotAnalyticAdmissible => CliError::Input(
                "the analytic path needs resonant drives, no alignment terms and omega12 = omega23; \
                 use --method timedomain"
                    .into(),
            ),
            other => CliError::Numerical {
                operation,
                message: other.to_string(),
            },
        }
    }

    fn dynamics(operation: &'static str, e: DynamicsError) -> Self {
        CliError::Numerical {
            operation,
            message: e.to_string(),
        }
    }

    fn analysis(operation: &'static str, e: AnalysisError) -> Self {
        match e {
            AnalysisError::Spectrum(s) => Self::spectrum(operation, s),
            AnalysisError::Dynamics(d) => Self::dynamics(operation, d),
            other => CliError::Numerical {
                operation,
                message: other.to_string(),
            },
        }
    }
}

/// Terminal streams and styling for one invocation.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub color: bool,
}

impl Io<'_> {
    fn say(&mut self, line: &str) {
        let _ = writeln!(self.out, "{line}");
    }

    fn warn(&mut self, line: &str) {
        let _ = writeln!(self.err, "warning: {line}");
    }

    fn note(&mut self, line: &str) {
        let _ = writeln!(self.err, "note: {line}");
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn finish_manifest(mut manifest: RunManifest, outputs: &[PathBuf], started: Instant) -> Result<(), CliError> {
    let Some(first) = outputs.first() else {
        return Ok(());
    };
    manifest.outputs = outputs.iter().map(|p| p.display().to_string()).collect();
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    let path = RunManifest::path_for(first);
    manifest.write(&path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(source: &SourceArgs) -> Result<(System, Source), CliError> {
    Ok(scenario::load(source.config.as_deref(), source.preset.as_deref())?)
}

fn parameters(system: &System) -> Value {
    serde_json::to_value(Scenario::from_system(system)).expect("scenario serializes")
}

/// Trapping verdict of the scenario's own condition.
fn trapping_report(system: &System, tol: f64) -> Result<TrappingReport, CliError> {
    match system {
        System::D2(s) => Ok(trapping::fgc_check(s, tol)),
        System::D1(s) => trapping::d1_trapping_check(s, tol).map_err(|e| CliError::Numerical {
            operation: "trapping check",
            message: e.to_string(),
        }),
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}{ext}"))
}

pub fn cmd_spectrum(args: &SpectrumArgs, io: &mut Io<'_>) -> Result<(), CliError> {
    let started = Instant::now();
    let (system, source) = load(&args.source)?;
    let chain = system.chain();
    let grid = args.grid.points();
    let sopts = SpectrumOptions {
        cross_terms: args.cross_terms,
    };
    let dopts = DynamicsOptions::new(args.t_final, args.tol);

    let analytic = match args.method {
        MethodArg::Timedomain => None,
        _ => Some(spectrum::spectrum_analytic(&chain, &grid, sopts).map_err(|e| CliError::spectrum("analytic spectrum", e))?),
    };
    let timedomain = match args.method {
        MethodArg::Analytic => None,
        _ => Some(
            dynamics::spectrum_time_domain(&chain, &grid, dopts, sopts)
                .map_err(|e| CliError::dynamics("time-domain spectrum", e))?,
        ),
    };
    let comparison = match (&analytic, &timedomain) {
        (Some(a), Some(t)) => Some(analysis::compare_spectra(a, t).map_err(|e| CliError::analysis("spectrum comparison", e))?),
        _ => None,
    };
    let primary: &SpectrumResult = analytic.as_ref().or(timedomain.as_ref()).expect("one method ran");

    let peaks = analysis::find_peaks(primary, args.prominence);
    for w in &peaks.warnings {
        io.warn(&w.to_string());
    }
    let satisfied = trapping_report(&system, trapping::DEFAULT_TOLERANCE)?.satisfied;
    // With both loop products zero the condition holds vacuously.
    let m = chain.drives.map(|d| d.magnitude());
    let vacuous = m[0] * m[1] == 0.0 && m[2] * m[3] == 0.0;
    let dark = primary.max_total() <= DARK_FLOOR;
    if dark && (vacuous || !satisfied) {
        io.warn("no emission: atom never excited");
    } else if satisfied {
        io.note("trapping condition satisfied");
    }

    let params = parameters(&system);
    let echo = vec![
        ("scenario".to_string(), source.describe()),
        ("parameters".to_string(), serde_json::to_string(&params).expect("json")),
        ("grid".to_string(), args.grid.to_string()),
        ("cross_terms".to_string(), args.cross_terms.to_string()),
        ("tool_version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ];
    let format = args.format.unwrap_or_else(|| match &args.out {
        Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => Format::Json,
        _ => Format::Csv,
    });
    let render = |spec: &SpectrumResult| -> String {
        match format {
            Format::Csv => {
                let mut e = echo.clone();
                e.push(("method".into(), spec.method.name().into()));
                output::spectrum_csv(spec, &e)
            }
            Format::Json => {
                let pa = analysis::find_peaks(spec, args.prominence);
                output::to_pretty(&output::spectrum_json(spec, &pa, params.clone()))
            }
        }
    };

    let mut outputs = Vec::new();
    match &args.out {
        Some(path) => {
            write_file(path, &render(primary))?;
            outputs.push(path.clone());
            if let (Some(_), Some(t)) = (&analytic, &timedomain) {
                let tpath = with_suffix(path, "timedomain");
                write_file(&tpath, &render(t))?;
                outputs.push(tpath);
            }
        }
        None => {
            let _ = write!(io.out, "{}", render(primary));
        }
    }
    if let Some(c) = &comparison {
        let line = format!(
            "comparison: max_rel_err={} rms_err={} points={}",
            output::fmt_f64(c.max_rel_err),
            output::fmt_f64(c.rms_err),
            c.points
        );
        match &args.out {
            Some(path) => {
                io.say(&line);
                let cpath = with_suffix(&path.with_extension("json"), "comparison");
                write_file(&cpath, &output::to_pretty(&output::comparison_json(c)))?;
                outputs.push(cpath);
            }
            None => {
                let _ = writeln!(io.err, "{line}");
            }
        }
    }
    if let Some(path) = &args.svg {
        let series = [
            svg::Series { label: "branch 1", values: &primary.branch_intensity[0] },
            svg::Series { label: "branch 2", values: &primary.branch_intensity[1] },
            svg::Series { label: "branch 3", values: &primary.branch_intensity[2] },
            svg::Series { label: "total", values: &primary.total },
        ];
        write_file(path, &svg::line_plot(&primary.grid, &series, "detuning (Γ)", "S (1/Γ)"))?;
        outputs.push(path.clone());
    }

    let mut manifest = RunManifest::new("spectrum", source.describe(), params);
    manifest.options.insert("grid".into(), json!(args.grid.to_string()));
    manifest.options.insert("method".into(), json!(format!("{:?}", args.method).to_lowercase()));
    manifest.options.insert("tol".into(), num(args.tol));
    manifest.options.insert("t_final".into(), num(args.t_final));
    manifest.options.insert("cross_terms".into(), json!(args.cross_terms));
    manifest.options.insert("prominence".into(), num(args.prominence));
    finish_manifest(manifest, &outputs, started)
}

fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn report_json(system: &System, rep: &TrappingReport) -> Value {
    let mut v = json!({
        "system": match system { System::D2(_) => "d2", System::D1(_) => "d1" },
        "satisfied": rep.satisfied,
        "magnitude_condition": num(rep.magnitude_condition),
        "phase_condition": num(rep.phase_condition),
        "gamma_condition": num(rep.gamma_condition),
        "delta_coefficient_residual": complex(rep.delta_coefficient_residual),
        "constant_residual": complex(rep.constant_residual),
    });
    if let System::D2(s) = system {
        let sgc = trapping::sgc_feasible(s);
        v["sgc"] = json!({
            "feasible": sgc.feasible,
            "trivial": sgc.trivial,
            "constant_term": complex(sgc.constant_term),
            "witness": num(sgc.witness),
        });
    }
    v
}

fn solve(system: &System, override_gamma: bool) -> Result<System, CliError> {
    let unsolvable = |e: TrappingError| match e {
        TrappingError::DivisionByZeroDrive => CliError::Unsolvable("the divisor drive is zero".into()),
        other => CliError::Unsolvable(other.to_string()),
    };
    match system {
        System::D2(s) => {
            let mut s = s.clone();
            if s.drives[2].magnitude() == 0.0 {
                return Err(CliError::Unsolvable("|Ω3| = 0".into()));
            }
            if s.gamma[0] != s.gamma[2] {
                if !override_gamma {
                    return Err(CliError::Unsolvable(format!(
                        "Γ1 = {} differs from Γ3 = {}; pass --override-gamma to set Γ3 = Γ1",
                        s.gamma[0], s.gamma[2]
                    )));
                }
                s.gamma[2] = s.gamma[0];
            }
            let [d1, d2, d3, d4] = s.drives;
            let solved = trapping::fgc_solve(d1.magnitude(), d2.magnitude(), d3.magnitude(), d2.phase())
                .map_err(unsolvable)?;
            // Keep the scenario's own φ1 and φ4 and absorb them into φ3.
            s.drives = [
                d1,
                d2,
                solved[2].with_phase(math::normalize_phase(
                    std::f64::consts::PI - d2.phase() + d1.phase() - d4.phase(),
                )),
                solved[3].with_phase(d4.phase()),
            ];
            Ok(System::D2(s))
        }
        System::D1(s) => {
            let mut s = s.clone();
            s.microwave[1] = trapping::d1_solve(s.optical[0], s.optical[1], s.microwave[0]).map_err(unsolvable)?;
            Ok(System::D1(s))
        }
    }
}

pub fn cmd_trapping(args: &TrappingArgs, io: &mut Io<'_>) -> Result<(), CliError> {
    let started = Instant::now();
    let (system, source) = load(&args.source)?;
    if !args.solve {
        let rep = trapping_report(&system, args.tol)?;
        let _ = write!(io.out, "{}", output::to_pretty(&report_json(&system, &rep)));
        return Ok(());
    }
    let solved = solve(&system, args.override_gamma)?;
    let mut rep = trapping_report(&solved, args.tol)?;
    if let System::D2(s) = &solved {
        rep.solved_fields = Some(s.drives);
    }
    let _ = write!(io.out, "{}", output::to_pretty(&report_json(&solved, &rep)));
    let path = args.out.clone().unwrap_or_else(|| match &source {
        Source::File(p) => with_suffix(Path::new(p), "solved"),
        Source::Preset(n) => PathBuf::from(format!("{n}.solved.json")),
    });
    let mut text = Scenario::from_system(&solved).to_json();
    text.push('\n');
    write_file(&path, &text)?;
    io.note(&format!("amended scenario written to {}", path.display()));
    let mut manifest = RunManifest::new("trapping", source.describe(), parameters(&system));
    manifest.options.insert("solve".into(), json!(true));
    manifest.options.insert("override_gamma".into(), json!(args.override_gamma));
    manifest.options.insert("tol".into(), num(args.tol));
    finish_manifest(manifest, &[path], started)
}

/// Applies one sweep value to the chain system.
pub fn apply(sys: &D2System, param: Param, value: f64) -> Result<D2System, CliError> {
    let mut s = sys.clone();
    let mag = |s: &mut D2System, i: usize| -> Result<(), CliError> {
        s.drives[i] = s.drives[i]
            .with_magnitude(value)
            .map_err(|e| CliError::Input(format!("sweep value {value}: {e}")))?;
        Ok(())
    };
    match param {
        Param::Phase2 => s.drives[1] = s.drives[1].with_phase(value),
        Param::Phase3 => s.drives[2] = s.drives[2].with_phase(value),
        Param::Mag1 => mag(&mut s, 0)?,
        Param::Mag2 => mag(&mut s, 1)?,
        Param::Mag3 => mag(&mut s, 2)?,
        Param::Mag4 => mag(&mut s, 3)?,
        Param::Gamma1 | Param::Gamma2 | Param::Gamma3 => {
            if !value.is_finite() || value < 0.0 {
                return Err(CliError::Input(format!("decay rate {value} must be non-negative")));
            }
            let i = match param {
                Param::Gamma1 => 0,
                Param::Gamma2 => 1,
                _ => 2,
            };
            s.gamma[i] = value;
        }
    }
    Ok(s)
}

/// One sweep metric value.
pub fn metric(sys: &D2System, metric: Metric, args: &SweepArgs, grid: &[f64]) -> Result<f64, CliError> {
    match metric {
        Metric::TrappedFraction => dynamics::trapped_fraction(sys, args.t_final, args.tol)
            .map_err(|e| CliError::dynamics("trapped fraction", e)),
        Metric::TotalArea | Metric::Branch2Area => {
            let a = analysis::spectral_areas(sys, SpectrumOptions::default())
                .map_err(|e| CliError::analysis("spectral area", e))?;
            Ok(if metric == Metric::TotalArea { a.total } else { a.branches[1] })
        }
        Metric::PeakCount => {
            let s = spectrum::spectrum_analytic(sys, grid, SpectrumOptions::default())
                .map_err(|e| CliError::spectrum("analytic spectrum", e))?;
            Ok(analysis::find_peaks(&s, args.prominence).peaks.len() as f64)
        }
    }
}

pub fn cmd_sweep(args: &SweepArgs, io: &mut Io<'_>) -> Result<(), CliError> {
    let started = Instant::now();
    let (system, source) = load(&args.source)?;
    let base = system.chain();
    let values = args.range.points();
    let grid = args.grid.points();
    // Validate every point before spending time on any of them.
    let systems: Vec<D2System> = values
        .iter()
        .map(|&v| apply(&base, args.vary, v))
        .collect::<Result<_, _>>()?;
    let results: Vec<Result<f64, CliError>> = systems
        .par_iter()
        .map(|s| metric(s, args.metric, args, &grid))
        .collect();
    let mut rows = Vec::with_capacity(values.len());
    let mut first_failure = None;
    for (k, (&v, r)) in values.iter().zip(results).enumerate() {
        match r {
            Ok(m) => rows.push((v, m)),
            Err(e) => {
                io.warn(&format!("point {k} ({v}): {e}"));
                rows.push((v, f64::NAN));
                first_failure.get_or_insert(e);
            }
        }
    }
    let params = parameters(&system);
    let echo = vec![
        ("scenario".to_string(), source.describe()),
        ("parameters".to_string(), serde_json::to_string(&params).expect("json")),
        ("vary".to_string(), format!("{:?}", args.vary).to_lowercase()),
        ("range".to_string(), args.range.to_string()),
        ("tool_version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ];
    let header = format!("value,{}", args.metric.name());
    let csv = output::table_csv(&echo, &header, &rows);
    let mut outputs = Vec::new();
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            outputs.push(path.clone());
        }
        None => {
            let _ = write!(io.out, "{csv}");
        }
    }
    let mut manifest = RunManifest::new("sweep", source.describe(), params);
    manifest.options.insert("vary".into(), json!(format!("{:?}", args.vary).to_lowercase()));
    manifest.options.insert("range".into(), json!(args.range.to_string()));
    manifest.options.insert("metric".into(), json!(args.metric.name()));
    manifest.options.insert("grid".into(), json!(args.grid.to_string()));
    manifest.options.insert("tol".into(), num(args.tol));
    manifest.options.insert("t_final".into(), num(args.t_final));
    finish_manifest(manifest, &outputs, started)?;
    match first_failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn cmd_validate(args: &ValidateArgs, io: &mut Io<'_>) -> Result<(), CliError> {
    let names: Vec<&str> = if args.target == "all" {
        PRESET_NAMES.to_vec()
    } else {
        vec![args.target.as_str()]
    };
    let (pass, fail) = if io.color {
        ("\x1b[32mPASS\x1b[0m", "\x1b[31mFAIL\x1b[0m")
    } else {
        ("PASS", "FAIL")
    };
    let mut failed = Vec::new();
    io.say(&format!("{:<24} {:<14} {:<6} detail", "preset", "check", "result"));
    for name in names {
        let p = preset::preset(name).map_err(|e| CliError::Scenario(ScenarioError::Preset(e)))?;
        let report = validation::check_preset(&p).map_err(|e| CliError::spectrum("preset validation", e))?;
        for c in &report.checks {
            io.say(&format!(
                "{:<24} {:<14} {} {}",
                name,
                c.name,
                if c.passed { pass } else { fail },
                c.detail
            ));
            if !c.passed {
                failed.push(format!("{name}/{}", c.name));
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed.join(", ")))
    }
}
