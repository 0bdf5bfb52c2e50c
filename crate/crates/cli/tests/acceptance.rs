//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::Instant;

use wernerlike::deformed::{
    concurrence_quasi_bell, displacement_validity, select_nmax, Deformation, DeformationSpec, Kind,
    QuasiBellSpec, Sign,
};
use wernerlike::discord::{
    luders_update, mixing_after_measurement, qd_gwl_analytic, qd_numeric, qd_werner, MeasurementDirection,
    OracleConfig,
};
use wernerlike::entanglement::{
    concurrence_gwl_margin, concurrence_mixed, concurrence_pure, eof_from_concurrence, eof_gwl, eof_werner,
};
use wernerlike::linalg::partial_trace;
use wernerlike::states::{
    examples, gwl, local_unitary, pure_density, random_pure_state, random_unitary, reduced_from_wmatrix, werner,
    GWL_P_MAX, GWL_P_MIN, WERNER_P_MAX, WERNER_P_MIN,
};
use wernerlike::{Mat2, Subsystem, WMatrix};
use wernerlike_cli::crossover::{self, DeformedFamily};
use wernerlike_cli::state::{PRange, StateSpec};
use wernerlike_cli::verify::{verify, VerifyConfig};

type Outcome = Result<String, String>;

/// Deterministic pseudo-random value in `[lo, hi)` from a seed.
fn uniform(seed: u64, lo: f64, hi: f64) -> f64 {
    let x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17) ^ 0xD1B5_4A32_D192_ED03;
    let u = (x >> 11) as f64 / (1u64 << 53) as f64;
    lo + (hi - lo) * u
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_agreement() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut specs: Vec<(&str, StateSpec)> =
        examples::all().into_iter().map(|(n, psi, _)| (n, StateSpec::gwl(psi))).collect();
    specs.push(("werner", StateSpec::Werner));
    for (_, spec) in specs {
        let (lo, hi) = spec.p_range();
        let cfg = VerifyConfig::new(spec, PRange::new(lo, hi, 0.05).unwrap(), OracleConfig::default())
            .map_err(|e| e.to_string())?;
        let report = verify(&cfg);
        worst = worst.max(report.max_residual());
        failures += report.failures();
    }
    check(
        failures == 0 && worst < TOL,
        format!("max relative residual {worst:.3e} (< {TOL:.0e}), {failures} oracle failures"),
    )
}

fn werner_closed_forms() -> Outcome {
    const TOL: f64 = 1e-9;
    const ENDPOINT_TOL: f64 = 1e-12;
    let cfg = OracleConfig::default();
    let (mut eof_err, mut qd_err) = (0.0f64, 0.0f64);
    for p in PRange::new(WERNER_P_MIN, WERNER_P_MAX, 0.01).unwrap().points() {
        let rho = werner(p).map_err(|e| e.to_string())?;
        let c = concurrence_mixed(&rho).map_err(|e| e.to_string())?.value;
        let eof_pipeline = eof_from_concurrence(c).map_err(|e| e.to_string())?;
        eof_err = eof_err.max((eof_werner(p).unwrap() - eof_pipeline).abs());
        let numeric = qd_numeric(&rho, Subsystem::A, &cfg).map_err(|e| e.to_string())?.discord;
        qd_err = qd_err.max((qd_werner(p).unwrap() - numeric).abs());
    }
    let endpoints = [(-1.0, 1.0), (0.0, 0.0), (1.0 / 3.0, 1.0 / 3.0)];
    let end_err = endpoints.iter().map(|&(p, v)| (qd_werner(p).unwrap() - v).abs()).fold(0.0, f64::max);
    check(
        eof_err < TOL && qd_err < TOL && end_err < ENDPOINT_TOL,
        format!("EoF vs Wootters {eof_err:.2e}, QD vs oracle {qd_err:.2e} (< {TOL:.0e}); endpoints {end_err:.2e} (< {ENDPOINT_TOL:.0e})"),
    )
}

fn separability_thresholds() -> Outcome {
    const TOL: f64 = 1e-10;
    let mut worst = 0.0f64;
    let mut found = Vec::new();
    for (c, expected) in [(0.25, 2.0 / 3.0), (0.5, 0.5), (0.75, 0.4), (1.0, 1.0 / 3.0)] {
        let root = crossover::bisect(|p| Ok(concurrence_gwl_margin(c, p)), 0.0, 1.0, 1e-14)
            .map_err(|e| e.to_string())?;
        worst = worst.max((root - expected).abs());
        found.push(format!("C={c}: {root:.12}"));
    }
    check(worst < TOL, format!("{} ; max error {worst:.2e} (< {TOL:.0e})", found.join(", ")))
}

fn werner_crossing() -> Outcome {
    let p = crossover::werner_crossing(-0.99, -0.5, 1e-12).map_err(|e| e.to_string())?;
    check((p + 0.88).abs() <= 0.01, format!("crossing at p = {p:.7} (reference -0.88 ± 0.01)"))
}

fn symmetry_and_classes() -> Outcome {
    const TOL: f64 = 1e-10;
    let cfg = OracleConfig::default();
    let (mut sym, mut orbit) = (0.0f64, 0.0f64);
    for seed in 0..100u64 {
        let psi = random_pure_state(seed);
        let p = uniform(seed, GWL_P_MIN, GWL_P_MAX);
        let d = qd_gwl_analytic(&psi, p).map_err(|e| e.to_string())?;
        let rho = gwl(&psi, p).map_err(|e| e.to_string())?;
        let num_a = qd_numeric(&rho, Subsystem::A, &cfg).map_err(|e| e.to_string())?.discord;
        let num_b = qd_numeric(&rho, Subsystem::B, &cfg).map_err(|e| e.to_string())?.discord;
        sym = sym.max(d.balance().abs()).max((num_a - num_b).abs());

        let moved = local_unitary(&psi, &random_unitary(1000 + seed), &random_unitary(2000 + seed))
            .map_err(|e| e.to_string())?;
        let rho2 = gwl(&moved, p).map_err(|e| e.to_string())?;
        let eof1 = eof_gwl(concurrence_pure(&psi), p).unwrap();
        let eof2 = eof_from_concurrence(concurrence_mixed(&rho2).map_err(|e| e.to_string())?.value).unwrap();
        let qd2 = qd_numeric(&rho2, Subsystem::A, &cfg).map_err(|e| e.to_string())?.discord;
        orbit = orbit.max((eof1 - eof2).abs()).max((d.discord - qd2).abs());
    }
    check(
        sym < TOL && orbit < TOL,
        format!("100 random states: A/B discord gap {sym:.2e}, local-unitary drift {orbit:.2e} (< {TOL:.0e})"),
    )
}

fn classical_states() -> Outcome {
    let cfg = OracleConfig::default();
    let mut states = vec![WMatrix::product_00()];
    for seed in 0..4u64 {
        let (ua, ub) = (random_unitary(seed), random_unitary(50 + seed));
        let m = Mat2::new([
            [ua.0[0][0] * ub.0[0][0], ua.0[0][0] * ub.0[1][0]],
            [ua.0[1][0] * ub.0[0][0], ua.0[1][0] * ub.0[1][0]],
        ]);
        states.push(WMatrix::new(m).map_err(|e| e.to_string())?);
    }
    let (mut analytic, mut numeric) = (0.0f64, 0.0f64);
    for psi in &states {
        for p in PRange::new(GWL_P_MIN, GWL_P_MAX, 0.05).unwrap().points() {
            analytic = analytic.max(qd_gwl_analytic(psi, p).map_err(|e| e.to_string())?.discord.abs());
            let rho = gwl(psi, p).map_err(|e| e.to_string())?;
            numeric = numeric.max(qd_numeric(&rho, Subsystem::A, &cfg).map_err(|e| e.to_string())?.discord.abs());
        }
    }
    check(
        analytic < 1e-12 && numeric < 1e-9,
        format!("{} product states: analytic |QD| {analytic:.2e} (< 1e-12), oracle |QD| {numeric:.2e} (< 1e-9)", states.len()),
    )
}

fn wmatrix_and_luders_identities() -> Outcome {
    const TOL: f64 = 1e-12;
    let (mut reduced, mut luders, mut constraint) = (0.0f64, 0.0f64, 0.0f64);
    for seed in 0..50u64 {
        let psi = random_pure_state(300 + seed);
        let pure = pure_density(&psi);
        for kept in [Subsystem::A, Subsystem::B] {
            let r = reduced_from_wmatrix(&psi, kept).max_abs_diff(&partial_trace(pure.matrix(), kept.other()));
            reduced = reduced.max(r);
        }

        let p = uniform(seed, GWL_P_MIN, 0.99);
        let rho = gwl(&psi, p).map_err(|e| e.to_string())?;
        let dir = MeasurementDirection::new(uniform(seed + 7, 0.0, FRAC_PI_2), uniform(seed + 11, 0.0, 6.28));
        let w = *psi.matrix();
        let mut xs = [0.0; 2];
        for (m, slot) in xs.iter_mut().enumerate() {
            let post = luders_update(&rho, &dir, m, Subsystem::A);
            let wp = dir.projector(m) * w;
            let block = wp.transpose() * wp.conj();
            let prob_pi = block.trace().re;
            let x = mixing_after_measurement(p, prob_pi).map_err(|e| e.to_string())?;
            let expected = Mat2::identity().scale((1.0 - x) / 2.0) + block.scale(x / prob_pi);
            let state = post.conditional_state.ok_or("empty measurement branch")?;
            luders = luders.max(state.max_abs_diff(&expected)).max((post.mixing_x.unwrap() - x.abs()).abs());
            *slot = x;
        }
        let lhs = xs[0] / (1.0 - xs[0]) + xs[1] / (1.0 - xs[1]);
        constraint = constraint.max((lhs - 2.0 * p / (1.0 - p)).abs());
    }
    check(
        reduced < TOL && luders < TOL && constraint < TOL,
        format!("reduced vs partial trace {reduced:.2e}, Lüders GWL form {luders:.2e}, mixing constraint {constraint:.2e} (< {TOL:.0e})"),
    )
}

fn displacement_values() -> Outcome {
    let cases = [
        ("poschl-teller N=10 n_max=9", Deformation::PoschlTeller { depth: 10 }, 9, 0.4),
        ("exciton kappa=0.3 n_max=5", Deformation::Exciton { kappa: 0.3 }, 5, 0.4),
        ("morse N=18 n_max=6", Deformation::Morse { bound_states: 18, relaxed: false }, 6, 0.07),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, def, n_max, reference) in cases {
        let v = displacement_validity(&def, 0.65, n_max);
        ok &= (v - reference).abs() <= 0.05;
        parts.push(format!("{name}: {v:.4} (ref {reference})"));
    }
    check(ok, parts.join(", "))
}

fn crossover_values() -> Outcome {
    let grid = crossover::default_p_grid();
    let cases = [
        ("poschl-teller A", Deformation::PoschlTeller { depth: 10 }, 9, Kind::A, 0.8785),
        ("poschl-teller D", Deformation::PoschlTeller { depth: 10 }, 9, Kind::D, 0.8807),
        ("exciton A", Deformation::Exciton { kappa: 0.3 }, 5, Kind::A, 0.8786),
        ("exciton D", Deformation::Exciton { kappa: 0.3 }, 5, Kind::D, 0.8804),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, def, n_max, kind, reference) in cases {
        let fam = DeformedFamily::new(def, n_max, kind).map_err(|e| e.to_string())?;
        let max_over_p = match crossover::eof_qd_crossover_max_over_p(&fam, 0.3, 1.5, &grid, 1e-6) {
            Ok(a) => format!("{a:.4}"),
            Err(e) => {
                let g_lo = crossover::eof_qd_gap(&fam, 0.3, &grid).map_err(|e| e.to_string())?;
                let g_hi = crossover::eof_qd_gap(&fam, 1.5, &grid).map_err(|e| e.to_string())?;
                format!("{e} (g(0.3)={g_lo:.4}, g(1.5)={g_hi:.4})")
            }
        };
        let p_cross = crossover::eof_qd_crossover_p(&fam, 0.65, 0.5, 0.99, 1e-12).map_err(|e| e.to_string())?;
        ok &= (p_cross - reference).abs() <= 0.01;
        parts.push(format!(
            "{name}: ref {reference}, p-crossing at |alpha|=0.65 -> {p_cross:.4}, max-over-p in |alpha| -> {max_over_p}"
        ));
    }
    let fam = DeformedFamily::new(Deformation::PoschlTeller { depth: 10 }, 9, Kind::A).map_err(|e| e.to_string())?;
    let switch = crossover::ordering_switch(&fam, 1.0, 1.6, &grid, 1e-6).map_err(|e| e.to_string())?;
    ok &= (switch - 1.3).abs() <= 0.01;
    parts.push(format!("ordering switch max_p(QD_C - QD_A): ref 1.3, |alpha| -> {switch:.4}"));
    check(ok, parts.join("\n    "))
}

fn exciton_inequality() -> Outcome {
    let def = Deformation::Exciton { kappa: 0.3 };
    let mut min_gap = f64::INFINITY;
    for alpha in [0.3, 0.65, 1.0, 2.0] {
        let fam = |kind| DeformedFamily::new(def, 5, kind).map_err(|e| e.to_string());
        let (a, c, d) = (fam(Kind::A)?, fam(Kind::Coherent)?, fam(Kind::D)?);
        for p in PRange::new(0.05, 0.95, 0.01).unwrap().points() {
            let qa = a.discord(alpha, p).map_err(|e| e.to_string())?;
            let qc = c.discord(alpha, p).map_err(|e| e.to_string())?;
            let qd = d.discord(alpha, p).map_err(|e| e.to_string())?;
            min_gap = min_gap.min(qa - qc).min(qc - qd);
        }
    }
    check(min_gap > 0.0, format!("smallest of QD_A - QD_C, QD_C - QD_D over the grid: {min_gap:.3e} (> 0)"))
}

fn harmonic_limit() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut worst = 0.0f64;
    let mut nmax_used = Vec::new();
    for alpha in [0.1, 0.3, 0.65, 1.0, 1.5, 2.0, 3.0] {
        let n_max = select_nmax(&Deformation::Harmonic, alpha, Kind::Coherent, 1e-10).map_err(|e| e.to_string())?;
        let qb = QuasiBellSpec::new(DeformationSpec::harmonic(n_max), alpha, Kind::Coherent, Sign::Plus);
        let c = concurrence_quasi_bell(&qb).map_err(|e| e.to_string())?;
        let e = (-4.0 * alpha * alpha).exp();
        worst = worst.max((c - (1.0 - e) / (1.0 + e)).abs());
        nmax_used.push(format!("{alpha}:{n_max}"));
    }
    check(worst < TOL, format!("max error {worst:.2e} (< {TOL:.0e}); n_max per |alpha| {}", nmax_used.join(" ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("analytic vs oracle discord", oracle_agreement),
        ("Werner closed forms", werner_closed_forms),
        ("separability thresholds", separability_thresholds),
        ("Werner EoF/QD crossing", werner_crossing),
        ("GWL symmetry and local-unitary classes", symmetry_and_classes),
        ("classical (product) states", classical_states),
        ("W-matrix and Lüders identities", wmatrix_and_luders_identities),
        ("deformed displacement validity", displacement_values),
        ("crossover reproduction", crossover_values),
        ("exciton discord ordering A > C > D", exciton_inequality),
        ("harmonic-limit concurrence", harmonic_limit),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
