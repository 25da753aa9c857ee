//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use fgc_cli::output::{self, num, RunManifest};
use fgc_core::analysis::{self, conservation_check, find_peaks, linspace, ConservationOptions, DARK_FLOOR};
use fgc_core::dynamics::{self, DynamicsError, DynamicsOptions};
use fgc_core::preset::{self, PresetSystem, PRESET_NAMES};
use fgc_core::spectrum::{self, SpectrumOptions};
use fgc_core::trapping;
use fgc_core::validation;
use fgc_core::{Complex64, D1System, D2System, DriveField, InitialState, Level};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

const ORACLE_TOL: f64 = 1e-10;
const ORACLE_SYSTEMS: usize = 100;
const ORACLE_POINTS: usize = 101;
const ORACLE_BUDGET: Duration = Duration::from_secs(10);

const DYNAMICS_TOL: f64 = 1e-4;
const DYNAMICS_POINTS: usize = 101;
const DYNAMICS_T_FINAL: f64 = 60.0;
const DYNAMICS_BUDGET: Duration = Duration::from_secs(60);

const NUMERATOR_TOL: f64 = 1e-12;
const DARK_BRANCH_TOL: f64 = 1e-20;
const OPEN_PEAKS: usize = 12;
const TRAPPED_PEAKS: usize = 8;

const SGC_DRAWS: usize = 1000;

const D1_TRAPPED_TOL: f64 = 1e-6;
const D1_BREAK: f64 = 1.01;

const CONSERVATION_CONFIGS: usize = 10;
const CONSERVATION_OMEGAS: [f64; 3] = [13.0, 25.0, 50.0];
const CONSERVATION_TOL_13: f64 = 0.05;
const CONSERVATION_TOL_50: f64 = 0.02;

const WIDTH_TOL: f64 = 0.02;
const SPLIT_TOL: f64 = 0.02;
const ROOT_TOL: f64 = 1e-9;

const GAUGE_PAIRS: usize = 20;
const GAUGE_TOL: f64 = 1e-10;

const REPORT_TRAPPED: [f64; 2] = [0.41, 0.47];
const REPORT_AREA_REDUCTION: f64 = 0.34;
const REPORT_BAND: f64 = 0.10;

const VALIDATE_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn d2(name: &str) -> D2System {
    match preset::preset(name).expect("preset exists").system {
        PresetSystem::D2(s) => s,
        PresetSystem::D1(_) => panic!("{name} is a D1 preset"),
    }
}

fn d1(name: &str) -> D1System {
    match preset::preset(name).expect("preset exists").system {
        PresetSystem::D1(s) => s,
        PresetSystem::D2(_) => panic!("{name} is a D2 preset"),
    }
}

fn chain(name: &str) -> D2System {
    match preset::preset(name).expect("preset exists").system {
        PresetSystem::D2(s) => s,
        PresetSystem::D1(s) => fgc_core::model::d1_to_chain(&s).expect("valid D1 preset"),
    }
}

fn random_drive(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> DriveField {
    DriveField::new(rng.gen_range(lo..hi), rng.gen_range(0.0..TAU)).unwrap()
}

fn random_initial(rng: &mut ChaCha8Rng) -> InitialState {
    loop {
        let v: [Complex64; 4] = std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return InitialState::Amplitudes(v.map(|z| z / n));
        }
    }
}

fn random_system(rng: &mut ChaCha8Rng) -> D2System {
    let gamma = std::array::from_fn(|_| rng.gen_range(0.2..2.0));
    let omega = rng.gen_range(5.0..30.0);
    let drives = std::array::from_fn(|_| random_drive(rng, 0.0, 3.0));
    D2System::resonant(gamma, omega, drives).with_initial(random_initial(rng))
}

/// Determinism across calls: every criterion draws from its own stream.
fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

fn oracle_algebra() -> Outcome {
    let mut rng = rng(1);
    let systems: Vec<D2System> = (0..ORACLE_SYSTEMS).map(|_| random_system(&mut rng)).collect();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for sys in &systems {
        match validation::oracle_max_relative_error(sys, -40.0, 40.0, ORACLE_POINTS) {
            Ok(e) => worst = worst.max(e),
            Err(e) => return Outcome::new(false, format!("oracle evaluation failed: {e}")),
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst <= ORACLE_TOL && elapsed < ORACLE_BUDGET,
        format!(
            "max rel err {worst:.3e} (tol {ORACLE_TOL:e}) over {ORACLE_SYSTEMS} systems x {ORACLE_POINTS} points in {:.2} s (budget {} s)",
            elapsed.as_secs_f64(),
            ORACLE_BUDGET.as_secs()
        ),
    )
}

fn dynamics_equivalence() -> Outcome {
    let sys = d2("fig2-notrapping");
    let grid = linspace(-30.0, 30.0, DYNAMICS_POINTS);
    let start = Instant::now();
    let td = match dynamics::spectrum_time_domain(
        &sys,
        &grid,
        DynamicsOptions::new(DYNAMICS_T_FINAL, dynamics::DEFAULT_TOL),
        SpectrumOptions::default(),
    ) {
        Ok(s) => s,
        Err(e) => return Outcome::new(false, format!("time-domain path failed: {e}")),
    };
    let elapsed = start.elapsed();
    let an = spectrum::spectrum_analytic(&sys, &grid, SpectrumOptions::default()).expect("analytic path");
    let mut worst = 0.0f64;
    for n in 0..3 {
        let peak = an.amplitudes[n].iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (a, t) in an.amplitudes[n].iter().zip(&td.amplitudes[n]) {
            worst = worst.max((a - t).norm() / a.norm().max(1e-8 * peak));
        }
    }
    Outcome::new(
        worst <= DYNAMICS_TOL && elapsed < DYNAMICS_BUDGET,
        format!(
            "max amplitude rel err {worst:.3e} (tol {DYNAMICS_TOL:e}) on {DYNAMICS_POINTS} points, t_final {DYNAMICS_T_FINAL}, time-domain {:.2} s (budget {} s)",
            elapsed.as_secs_f64(),
            DYNAMICS_BUDGET.as_secs()
        ),
    )
}

fn fgc_cancellation() -> Outcome {
    let trap = d2("fig2-trapping");
    let open = d2("fig2-notrapping");
    let grid = analysis::default_grid();
    let numerator = grid
        .iter()
        .map(|&d| trapping::fgc_central_numerator(&trap, d).norm())
        .fold(0.0, f64::max);
    let st = spectrum::spectrum_analytic(&trap, &grid, SpectrumOptions::default()).expect("analytic path");
    let so = spectrum::spectrum_analytic(&open, &grid, SpectrumOptions::default()).expect("analytic path");
    let branch2 = st.branch_intensity[1].iter().copied().fold(0.0, f64::max) / st.max_total();
    let n_open = find_peaks(&so, analysis::DEFAULT_PROMINENCE).peaks.len();
    let n_trap = find_peaks(&st, analysis::DEFAULT_PROMINENCE).peaks.len();
    let numerator_ok = numerator < NUMERATOR_TOL;
    let dark_ok = branch2 <= DARK_BRANCH_TOL;
    let peaks_ok = n_open == OPEN_PEAKS && n_trap == TRAPPED_PEAKS;
    Outcome::new(
        numerator_ok && dark_ok && peaks_ok,
        format!(
            "numerator max {numerator:.3e} (< {NUMERATOR_TOL:e}: {}), branch-2 max/total max {branch2:.3e} (<= {DARK_BRANCH_TOL:e}: {}), peaks {n_open} -> {n_trap} (expected {OPEN_PEAKS} -> {TRAPPED_PEAKS}: {})",
            verdict(numerator_ok),
            verdict(dark_ok),
            verdict(peaks_ok)
        ),
    )
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISSED"
    }
}

/// `det K(0)` by cofactor expansion, independent of the quartic coefficients.
fn det_at_zero(sys: &D2System) -> Complex64 {
    let [o1, o2, o3, o4] = sys.rabi();
    let i = Complex64::i();
    let z = Complex64::new(0.0, 0.0);
    let mut h = [[z; 4]; 4];
    h[0][1] = o2;
    h[1][2] = o3;
    h[0][3] = o1;
    h[2][3] = o4;
    let mut k = [[z; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let hrc = if r <= c { h[r][c] } else { h[c][r].conj() };
            k[r][c] = i * hrc;
        }
        if r < 3 {
            k[r][r] += 0.5 * sys.gamma[r];
        }
    }
    det(&k.iter().map(|row| row.to_vec()).collect::<Vec<_>>())
}

fn det(m: &[Vec<Complex64>]) -> Complex64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<Complex64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| *v).collect())
                .collect();
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][c] * det(&minor)
        })
        .sum()
}

fn sgc_infeasibility() -> Outcome {
    let mut rng = rng(4);
    let mut counterexamples = 0;
    let mut route_gap = 0.0f64;
    let mut min_re = f64::INFINITY;
    for _ in 0..SGC_DRAWS {
        let gamma = std::array::from_fn(|_| rng.gen_range(0.01..3.0));
        let drives = std::array::from_fn(|_| random_drive(&mut rng, 0.0, 5.0));
        let sys = D2System::resonant(gamma, rng.gen_range(1.0..60.0), drives);
        let m: [f64; 4] = std::array::from_fn(|k| sys.drives[k].magnitude());
        let c0 = trapping::sgc_constant_term(&sys);
        let d = det_at_zero(&sys);
        route_gap = route_gap.max((c0 - d).norm() / d.norm().max(1e-300));
        if m[1] * m[3] != 0.0 || m[0] * m[2] != 0.0 {
            min_re = min_re.min(c0.re);
            if c0.re.is_nan() || c0.re <= 0.0 || trapping::sgc_feasible(&sys).feasible {
                counterexamples += 1;
            }
        }
    }
    Outcome::new(
        counterexamples == 0 && route_gap <= 1e-12,
        format!(
            "{counterexamples} counterexamples in {SGC_DRAWS} draws, min Re c0 {min_re:.3e}, quartic vs det K(0) rel gap {route_gap:.1e}"
        ),
    )
}

fn d1_darkening() -> Outcome {
    let sys = d1("d1-trapping");
    let grid = analysis::default_grid();
    let dark = spectrum::d1_spectrum(&sys, &grid).expect("D1 spectrum").max_total();
    let chain = fgc_core::model::d1_to_chain(&sys).expect("valid D1 system");
    let trapped = dynamics::trapped_fraction(&chain, dynamics::DEFAULT_T_FINAL, dynamics::DEFAULT_TOL);

    let mut broken = sys.clone();
    broken.microwave[1] = broken.microwave[1]
        .with_magnitude(broken.microwave[1].magnitude() * D1_BREAK)
        .unwrap();
    let lit = spectrum::d1_spectrum(&broken, &grid).expect("D1 spectrum").max_total();
    let broken_chain = fgc_core::model::d1_to_chain(&broken).expect("valid D1 system");
    // The norm only decreases, so the last window average bounds the plateau from above.
    let broken_fraction = match dynamics::trapped_fraction(&broken_chain, dynamics::DEFAULT_T_FINAL, dynamics::DEFAULT_TOL) {
        Ok(v) => Ok((v, "plateau")),
        Err(DynamicsError::NotConverged { last, .. }) => Ok((last, "upper bound, no plateau")),
        Err(e) => Err(e),
    };
    let (trapped, broken_fraction) = match (trapped, broken_fraction) {
        (Ok(t), Ok(b)) => (t, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::new(false, format!("trapped fraction failed: {e}")),
    };
    let passed = dark <= DARK_FLOOR
        && (trapped - 1.0).abs() <= D1_TRAPPED_TOL
        && broken_fraction.0 < 1.0
        && lit > DARK_FLOOR;
    Outcome::new(
        passed,
        format!(
            "trapped max S {dark:.2e}, trapped fraction {trapped:.9} (tol {D1_TRAPPED_TOL:e}); broken by 1%: fraction {:.4} ({}), max S {lit:.3e}",
            broken_fraction.0, broken_fraction.1
        ),
    )
}

fn conservation() -> Outcome {
    let mut rng = rng(6);
    let configs: Vec<D2System> = (0..CONSERVATION_CONFIGS)
        .map(|_| {
            let gamma = std::array::from_fn(|_| rng.gen_range(0.5..1.5));
            let drives = std::array::from_fn(|_| random_drive(&mut rng, 0.5, 2.5));
            let level = Level::ALL[rng.gen_range(0..4)];
            D2System::resonant(gamma, CONSERVATION_OMEGAS[0], drives).with_initial(InitialState::Level(level))
        })
        .collect();
    let options = ConservationOptions {
        spectrum: SpectrumOptions { cross_terms: true },
        ..Default::default()
    };
    let defects: Vec<Result<[f64; 3], String>> = configs
        .par_iter()
        .map(|base| {
            let mut out = [0.0; 3];
            for (k, &w) in CONSERVATION_OMEGAS.iter().enumerate() {
                let sys = D2System { omega12: w, omega23: w, ..base.clone() };
                out[k] = conservation_check(&sys, options).map_err(|e| e.to_string())?.defect;
            }
            Ok(out)
        })
        .collect();
    let mut worst = [0.0f64; 3];
    let mut mean = [0.0f64; 3];
    let mut non_monotone = 0;
    for d in &defects {
        match d {
            Ok(d) => {
                for k in 0..3 {
                    worst[k] = worst[k].max(d[k]);
                    mean[k] += d[k] / CONSERVATION_CONFIGS as f64;
                }
                if !(d[0] > d[1] && d[1] > d[2]) {
                    non_monotone += 1;
                }
            }
            Err(e) => return Outcome::new(false, format!("conservation check failed: {e}")),
        }
    }
    // The suite-level defect must fall; single configs carry interference
    // terms that oscillate with omega12 and are only reported.
    let decreasing = |d: [f64; 3]| d[0] > d[1] && d[1] > d[2];
    Outcome::new(
        worst[0] <= CONSERVATION_TOL_13 && worst[2] <= CONSERVATION_TOL_50 && decreasing(worst) && decreasing(mean),
        format!(
            "worst defect {:.3e} / {:.3e} / {:.3e}, mean {:.3e} / {:.3e} / {:.3e} at omega12 = 13 / 25 / 50 (tol {CONSERVATION_TOL_13} at 13, {CONSERVATION_TOL_50} at 50); {non_monotone} of {CONSERVATION_CONFIGS} single configs not strictly decreasing",
            worst[0], worst[1], worst[2], mean[0], mean[1], mean[2]
        ),
    )
}

fn limiting_cases() -> Outcome {
    let grid = analysis::default_grid();
    let two = spectrum::spectrum_analytic(&d2("two-level"), &grid, SpectrumOptions::default()).expect("analytic path");
    let tp = find_peaks(&two, analysis::DEFAULT_PROMINENCE);
    let at_sys = d2("autler-townes-doublet");
    let at = spectrum::spectrum_analytic(&at_sys, &grid, SpectrumOptions::default()).expect("analytic path");
    let ap = find_peaks(&at, analysis::DEFAULT_PROMINENCE);
    let rabi = at_sys.drives.iter().map(|d| d.magnitude()).fold(0.0, f64::max);

    let fwhm = tp.peaks.first().map_or(f64::NAN, |p| p.fwhm);
    let width_ok = tp.peaks.len() == 1 && (fwhm - 1.0).abs() <= WIDTH_TOL;
    let split = match ap.peaks.as_slice() {
        [a, b] => b.location - a.location,
        _ => f64::NAN,
    };
    let split_ok = (split / (2.0 * rabi) - 1.0).abs() <= SPLIT_TOL;
    let mut root = 0.0f64;
    for name in PRESET_NAMES {
        match validation::root_residual(&chain(name)) {
            Ok(r) => root = root.max(r),
            Err(e) => return Outcome::new(false, format!("{name}: {e}")),
        }
    }
    Outcome::new(
        width_ok && split_ok && root < ROOT_TOL,
        format!(
            "two-level {} peak(s), FWHM {fwhm:.5}; Autler-Townes {} peaks split {split:.5} vs {} (tol {}%); max root residual {root:.2e} (tol {ROOT_TOL:e})",
            tp.peaks.len(),
            ap.peaks.len(),
            2.0 * rabi,
            SPLIT_TOL * 100.0
        ),
    )
}

fn gauge_invariance() -> Outcome {
    let mut rng = rng(8);
    let grid = linspace(-30.0, 30.0, 301);
    let mut worst = 0.0f64;
    for _ in 0..GAUGE_PAIRS {
        let level = Level::ALL[rng.gen_range(0..4)];
        let sys = random_system(&mut rng).with_initial(InitialState::Level(level));
        let alpha = rng.gen_range(0.0..TAU);
        let mut shifted = sys.clone();
        shifted.drives[1] = sys.drives[1].with_phase(sys.drives[1].phase() + alpha);
        shifted.drives[2] = sys.drives[2].with_phase(sys.drives[2].phase() - alpha);
        let a = spectrum::spectrum_analytic(&sys, &grid, SpectrumOptions::default()).expect("analytic path");
        let b = spectrum::spectrum_analytic(&shifted, &grid, SpectrumOptions::default()).expect("analytic path");
        let peak = a.max_total();
        for (x, y) in a.total.iter().zip(&b.total) {
            worst = worst.max((x - y).abs() / x.max(*y).max(1e-8 * peak));
        }
    }
    Outcome::new(
        worst <= GAUGE_TOL,
        format!("max rel spectrum change {worst:.3e} (tol {GAUGE_TOL:e}) over {GAUGE_PAIRS} (config, alpha) pairs, bare-level initial states"),
    )
}

fn archive_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance")
}

fn flag(value: f64, target: f64) -> &'static str {
    if (value - target).abs() <= REPORT_BAND {
        "within band"
    } else {
        "FLAGGED"
    }
}

fn reproduction_reports() -> Outcome {
    let started = Instant::now();
    let trap = d2("fig2-trapping");
    let fraction = match dynamics::trapped_fraction(&trap, dynamics::DEFAULT_T_FINAL, dynamics::DEFAULT_TOL) {
        Ok(v) => v,
        Err(e) => return Outcome::new(false, format!("trapped fraction failed: {e}")),
    };
    let mut reductions = Vec::new();
    for (t, o) in [("fig2-trapping", "fig2-notrapping"), ("fig2-alt-trapping", "fig2-alt-notrapping")] {
        let at = analysis::spectral_areas(&d2(t), SpectrumOptions::default()).expect("areas");
        let ao = analysis::spectral_areas(&d2(o), SpectrumOptions::default()).expect("areas");
        reductions.push((t, o, 1.0 - at.total / ao.total, 1.0 - at.branches[1] / ao.branches[1]));
    }
    let report = json!({
        "trapped_fraction_fig2_trapping": num(fraction),
        "trapped_fraction_targets": REPORT_TRAPPED.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "area_reduction_target": num(REPORT_AREA_REDUCTION),
        "band": num(REPORT_BAND),
        "area_reductions": reductions.iter().map(|(t, o, total, central)| json!({
            "trapping": t,
            "open": o,
            "total_area_reduction": num(*total),
            "central_branch_area_reduction": num(*central),
        })).collect::<Vec<_>>(),
    });
    let dir = archive_dir();
    let path = dir.join("reproduction.json");
    let written = std::fs::create_dir_all(&dir)
        .and_then(|_| std::fs::write(&path, output::to_pretty(&report)))
        .and_then(|_| {
            let mut m = RunManifest::new("acceptance-reproduction", "preset:fig2-trapping".into(), report.clone());
            m.outputs = vec![path.display().to_string()];
            m.wall_time_seconds = started.elapsed().as_secs_f64();
            m.write(&RunManifest::path_for(&path))
        });
    if let Err(e) = written {
        return Outcome::new(false, format!("cannot archive report: {e}"));
    }
    let mut detail = format!(
        "trapped fraction {fraction:.3e} vs 41% ({}) and 47% ({})",
        flag(fraction, REPORT_TRAPPED[0]),
        flag(fraction, REPORT_TRAPPED[1])
    );
    for (t, o, total, _) in &reductions {
        detail.push_str(&format!(
            "; area reduction {t} vs {o} {:.1}% vs 34% ({})",
            100.0 * total,
            flag(*total, REPORT_AREA_REDUCTION)
        ));
    }
    detail.push_str(&format!("; archived at {}", path.display()));
    Outcome::new(true, detail)
}

/// The `fgc` binary next to this test's build directory, built on demand.
fn fgc_binary() -> PathBuf {
    static BIN: OnceLock<PathBuf> = OnceLock::new();
    BIN.get_or_init(|| {
        let exe = std::env::current_exe().expect("test executable path");
        let profile_dir = exe.parent().and_then(Path::parent).expect("target profile directory");
        let bin = profile_dir.join(format!("fgc{}", std::env::consts::EXE_SUFFIX));
        if !bin.exists() {
            let mut build = Command::new(env!("CARGO"));
            build.args(["build", "-p", "fgc-cli", "--bin", "fgc"]);
            if profile_dir.ends_with("release") {
                build.arg("--release");
            }
            let status = build.current_dir(env!("CARGO_MANIFEST_DIR")).status().expect("cargo runs");
            assert!(status.success(), "building fgc failed");
        }
        bin
    })
    .clone()
}

fn fgc(args: &[&str]) -> std::process::Output {
    Command::new(fgc_binary()).args(args).output().expect("fgc runs")
}

fn run_twice(dir: &Path, tag: &str, args: &[&str]) -> Result<bool, String> {
    let mut bytes = Vec::new();
    for k in 0..2 {
        let out = dir.join(format!("{tag}-{k}.out"));
        let mut full: Vec<&str> = args.to_vec();
        let out_s = out.display().to_string();
        full.extend(["--out", &out_s]);
        let o = fgc(&full);
        if !o.status.success() {
            return Err(format!("{tag}: {}", String::from_utf8_lossy(&o.stderr).trim()));
        }
        bytes.push((std::fs::read(&out).map_err(|e| e.to_string())?, o.stdout));
    }
    Ok(bytes[0] == bytes[1])
}

fn determinism() -> Outcome {
    let dir = archive_dir().join("determinism");
    if let Err(e) = std::fs::create_dir_all(&dir) {
        return Outcome::new(false, format!("cannot create {}: {e}", dir.display()));
    }
    let runs: [(&str, &[&str]); 4] = [
        ("spectrum-csv", &["spectrum", "--preset", "fig2-notrapping"]),
        ("spectrum-json", &["spectrum", "--preset", "at-quartet", "--format", "json"]),
        ("spectrum-td", &["spectrum", "--preset", "fig2-trapping", "--method", "timedomain", "--grid", "-20:20:81"]),
        (
            "sweep",
            &["sweep", "--preset", "fig2-trapping", "--vary", "phase2", "--range", "0:6.283185307179586:9", "--metric", "branch2_area"],
        ),
    ];
    let mut identical = 0;
    for (tag, args) in runs {
        match run_twice(&dir, tag, args) {
            Ok(true) => identical += 1,
            Ok(false) => {}
            Err(e) => return Outcome::new(false, e),
        }
    }
    let start = Instant::now();
    let v = fgc(&["validate", "all"]);
    let elapsed = start.elapsed();
    Outcome::new(
        identical == runs.len() && v.status.success() && elapsed < VALIDATE_BUDGET,
        format!(
            "{identical}/{} repeated runs byte-identical; validate all exit {} in {:.2} s (budget {} s)",
            runs.len(),
            v.status.code().unwrap_or(-1),
            elapsed.as_secs_f64(),
            VALIDATE_BUDGET.as_secs()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle algebra", oracle_algebra),
        ("dynamics/laplace equivalence", dynamics_equivalence),
        ("central-branch cancellation", fgc_cancellation),
        ("sgc infeasibility", sgc_infeasibility),
        ("d1 darkening", d1_darkening),
        ("conservation", conservation),
        ("limiting cases", limiting_cases),
        ("gauge invariance", gauge_invariance),
        ("reproduction reports", reproduction_reports),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        println!(
            "{} criterion {:>2} {name}: {} [{:.2} s]",
            if o.passed { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
