//! Acceptance criteria, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is always
//! printed. Exits non-zero when a hard criterion fails; criterion 4 is
//! reported but never fails the run.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::time::Instant;

use jcbell::bell_optimizer::{bell_max_fock_noisy, bell_max_pure, bell_max_scan, identity_lower_bound, RotationScanConfig};
use jcbell::entanglement_tools::{coherent_witness, entropy_bell_curve, partial_transpose, ppt_min_eigenvalue, schmidt_angle};
use jcbell::fock_space::{make_coherent, make_fock, make_smsv, FieldSpec, FockVector, TruncationPolicy};
use jcbell::jc_dynamics::{asymptotic_density_matrix, evolve_pure, noisy_density_matrix, HybridDensityMatrix, HybridPureState, NoiseModel};
use jcbell::linalg;
use jcbell::quadrature::GaussHermite;
use jcbell::sweep_cli::{run_sweep, ExperimentConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{c, random_pure, random_unitary};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn excited(field: &FockVector) -> HybridPureState {
    HybridPureState::separable(c(0.0, 0.0), c(1.0, 0.0), field).unwrap()
}

fn scan(rho: &HybridDensityMatrix) -> f64 {
    bell_max_scan(rho, &RotationScanConfig::default()).unwrap().value
}

/// Closed-form noisy Fock CHSH value against the full numerical chain with
/// Gauss–Hermite averaging.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut at = (0, 0.0, 0.0);
    for k in [0u32, 1, 3, 9] {
        let state = excited(&make_fock(k as usize, &TruncationPolicy::default()).unwrap());
        for sigma in [0.0, 0.1, 0.2] {
            let noise = NoiseModel::new(1.0, sigma).with_quadrature(NoiseModel::DEFAULT_QUAD_ORDER);
            for i in 0..101 {
                let t = 10.0 * i as f64 / 100.0;
                let rho = noisy_density_matrix(&state, &noise, t).unwrap();
                let diff = (scan(&rho) - bell_max_fock_noisy(k, 1.0, sigma, t)).abs();
                if diff > worst {
                    worst = diff;
                    at = (k, sigma, t);
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-4 && secs <= 120.0,
        format!(
            "noisy Fock closed form vs pipeline: max |Δ| = {worst:.2e} (k={}, σ={}, t={}; tol 1e-4), {secs:.1} s (limit 120 s)",
            at.0, at.1, at.2
        ),
    )
}

/// Pure-state closed form against the rotation scan.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let dim = rng.random_range(1..=12);
        let s = random_pure(&mut rng, dim);
        let diff = (scan(&s.projector()) - bell_max_pure(&s).unwrap()).abs();
        worst = worst.max(diff);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-6 && secs <= 60.0,
        format!("pure closed form vs scan on 50 random states (d ≤ 12): max |Δ| = {worst:.2e} (tol 1e-6), {secs:.1} s (limit 60 s)"),
    )
}

/// Noiseless Fock sweeps reach Tsirelson's bound at `π/(4√(k+1))`.
fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for k in [0usize, 2, 5] {
        let t_peak = PI / (4.0 * ((k + 1) as f64).sqrt());
        let cfg = ExperimentConfig::from_json(&format!(
            r#"{{"initial_state": {{"atom": "e", "field": "fock:{k}"}},
                "time_grid": {{"start": 0, "stop": {}, "steps": 201}},
                "outputs": ["bell", "entropy"]}}"#,
            2.0 * t_peak
        ))
        .unwrap();
        let table = run_sweep(&cfg).unwrap();
        let bell: Vec<f64> = table.records.iter().map(|r| r.values[0]).collect();
        let peak = bell[100];
        let argmax = (0..bell.len()).fold(0, |b, i| if bell[i] > bell[b] { i } else { b });
        let start_ok = (bell[0] - 2.0).abs() <= 1e-10 && table.records[0].values[1].abs() <= 1e-10;
        let this = peak >= 2.0 * SQRT_2 - 1e-4 && (table.records[100].t - t_peak).abs() < 1e-15 && argmax.abs_diff(100) <= 1 && start_ok;
        ok &= this;
        notes.push(format!("k={k}: peak {peak:.9} at grid {argmax}, t=0 value {:.12}", bell[0]));
    }
    outcome(ok, format!("Fock peaks ≥ 2√2 - 1e-4 at π/(4√(k+1)), t=0 value 2 ± 1e-10: {}", notes.join("; ")))
}

/// Identity-rotation bound within 5% of the scanned maximum on most states
/// of the noisy-evolution sweeps (Fock k ∈ {0,1,3}, SMSV r = 1, coherent
/// α = 0.5; σ ∈ {0, 0.1, 0.2}; t = 0.25, 0.5, …, 10).
fn criterion_4() -> Outcome {
    let policy = TruncationPolicy::new(256, 1e-12).unwrap();
    let fields = ["fock:0", "fock:1", "fock:3", "smsv:1,0", "coherent:0.5,0"];
    let mut total = 0;
    let mut close = 0;
    let mut per_field = Vec::new();
    for spec in fields {
        let state = excited(&spec.parse::<FieldSpec>().unwrap().build(&policy).unwrap());
        let mut hits = 0;
        let mut n = 0;
        for sigma in [0.0, 0.1, 0.2] {
            for i in 1..=40 {
                let t = 0.25 * i as f64;
                let rho = noisy_density_matrix(&state, &NoiseModel::new(1.0, sigma), t).unwrap();
                let max = scan(&rho);
                let lower = identity_lower_bound(&rho).unwrap();
                n += 1;
                if lower >= 0.95 * max {
                    hits += 1;
                }
            }
        }
        total += n;
        close += hits;
        per_field.push(format!("{spec} {hits}/{n}"));
    }
    let frac = close as f64 / total as f64;
    outcome(
        frac >= 0.9,
        format!(
            "identity bound ≥ 0.95 × maximum on {:.1}% of {total} states (needs ≥ 90%; soft): {}",
            100.0 * frac,
            per_field.join(", ")
        ),
    )
}

/// Noisy Fock state relaxes to its long-time form.
fn criterion_5() -> Outcome {
    let state = excited(&make_fock(0, &TruncationPolicy::default()).unwrap());
    let target = asymptotic_density_matrix(&state);
    let exact = noisy_density_matrix(&state, &NoiseModel::new(1.0, 0.2), 15.0).unwrap();
    let quad = noisy_density_matrix(&state, &NoiseModel::new(1.0, 0.2).with_quadrature(41), 15.0).unwrap();
    let (de, dq) = (exact.frobenius_distance(&target), quad.frobenius_distance(&target));
    outcome(
        de <= 1e-3 && dq <= 1e-3,
        format!("‖ρ(15) - ρ(∞)‖_F for Fock k=0, σ=0.2: {de:.2e} exact average, {dq:.2e} quadrature (tol 1e-3)"),
    )
}

/// Coherent-state PPT certificate on a 20×20 grid.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let policy = TruncationPolicy::new(400, 1e-200).unwrap();
    let mut worst_gap = 0.0f64;
    let mut max_bell = 0.0f64;
    let mut failures = Vec::new();
    for i in 1..=20 {
        let cg = i as f64 / 21.0;
        let ce = (1.0 - cg * cg).sqrt();
        for j in 1..=20 {
            let alpha = 0.2 * j as f64;
            let field = make_coherent(c(alpha, 0.0), &policy).unwrap();
            let state = HybridPureState::separable(c(cg, 0.0), c(ce, 0.0), &field).unwrap();
            let rho = asymptotic_density_matrix(&state);
            let w = coherent_witness(cg, ce, alpha).unwrap();
            let ppt = ppt_min_eigenvalue(&rho);
            let bell = scan(&rho);
            let gap = (ppt - w.deepest_mu_minus).abs();
            worst_gap = worst_gap.max(gap);
            max_bell = max_bell.max(bell);
            let good = ppt < 0.0 && w.mu_minus < 0.0 && w.p_of_n < 0.0 && gap <= 1e-10 && ppt <= w.mu_minus + 1e-10 && bell < 2.0 + 1e-6;
            if !good {
                failures.push(format!("(c_g={cg:.3}, α={alpha:.1})"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs <= 180.0,
        format!(
            "coherent PPT certificate on 400 points: PT min vs deepest μ⁻ max gap {worst_gap:.1e} (tol 1e-10), max CHSH {max_bell:.6} (< 2 + 1e-6), {} failures, {secs:.1} s (limit 180 s){}",
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(": {}", failures.join(" ")) }
        ),
    )
}

/// Separable long-time states for SMSV and Fock inputs; entangled ladder
/// states.
fn criterion_7() -> Outcome {
    let policy = TruncationPolicy::new(2048, 1e-12).unwrap();
    let atoms = [(c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0)), (c(0.6, 0.0), c(0.8, 0.0)), (c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2))];
    let mut fields: Vec<(String, FockVector)> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&r| (format!("smsv r={r}"), make_smsv(r, 0.0, &policy).unwrap()))
        .collect();
    fields.extend((0..=5).map(|k| (format!("fock k={k}"), make_fock(k, &policy).unwrap())));
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for (_, field) in &fields {
        for &(cg, ce) in &atoms {
            let rho = asymptotic_density_matrix(&HybridPureState::separable(cg, ce, field).unwrap());
            ok &= rho.eg().iter().all(|z| z.re == 0.0 && z.im == 0.0);
            let m = ppt_min_eigenvalue(&rho);
            worst = worst.min(m);
            ok &= m >= -1e-10;
        }
    }
    let mut ladder_max = f64::NEG_INFINITY;
    for k in 0..=5usize {
        for &(cg, ce) in &[(0.6, 0.8), (FRAC_1_SQRT_2, FRAC_1_SQRT_2), (0.1, 0.99f64.sqrt()), (-0.8, 0.6)] {
            let g = FockVector::basis(k + 1, k + 2).scaled(c(cg, 0.0));
            let e = FockVector::basis(k, k + 2).scaled(c(ce, 0.0));
            let rho = asymptotic_density_matrix(&HybridPureState::new(g, e).unwrap());
            let m = ppt_min_eigenvalue(&rho);
            ladder_max = ladder_max.max(m);
            ok &= m < 0.0;
        }
    }
    outcome(
        ok,
        format!(
            "separable SMSV/Fock long-time states: ρ_eg = 0 exactly, min PT eigenvalue {worst:.1e} (≥ -1e-10); ladder states: largest min PT eigenvalue {ladder_max:.3e} (< 0)"
        ),
    )
}

/// Entropy/CHSH relation through the Schmidt angle.
fn criterion_8() -> Outcome {
    let ends = entropy_bell_curve(&[0.0, PI / 4.0]).unwrap();
    let end_err = [ends[0].0 - 0.0, ends[0].1 - 2.0, ends[1].0 - 1.0, ends[1].1 - 2.0 * SQRT_2]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = rng.random_range(1..=10);
        let s = random_pure(&mut rng, dim);
        let rho_a = s.reduced_atom();
        let det = rho_a[(0, 0)].re * rho_a[(1, 1)].re - rho_a[(0, 1)].norm_sqr();
        let lhs = 2.0 * (1.0 + 4.0 * det).sqrt();
        worst = worst.max((lhs - schmidt_angle(&s).bell_max()).abs());
    }
    outcome(
        end_err <= 1e-12 && worst <= 1e-10,
        format!("curve endpoints error {end_err:.1e} (tol 1e-12); 2√(1+4 det ρ_A) vs 2√(1+sin²2θ) on 100 states: {worst:.1e} (tol 1e-10)"),
    )
}

/// Seeded randomized property checks.
fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut notes = Vec::new();
    let mut ok = true;

    let mut unitarity = 0.0f64;
    let mut composition = 0.0f64;
    for _ in 0..50 {
        let dim = rng.random_range(1..=10);
        let s = random_pure(&mut rng, dim);
        let lambda = rng.random_range(0.5..1.5);
        let (t1, t2) = (rng.random_range(0.0..5.0), rng.random_range(0.0..5.0));
        let once = evolve_pure(&s, lambda, t1 + t2);
        let twice = evolve_pure(&evolve_pure(&s, lambda, t1), lambda, t2);
        unitarity = unitarity.max((once.norm_sqr() - 1.0).abs());
        let d = twice.dim();
        let diff: f64 = [(once.phi_g(), twice.phi_g()), (once.phi_e(), twice.phi_e())]
            .iter()
            .map(|(a, b)| a.padded(d).amps().iter().zip(b.amps()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt();
        composition = composition.max(diff);
    }
    ok &= unitarity <= 1e-12 && composition <= 1e-12;
    notes.push(format!("unitarity {unitarity:.1e}, composition {composition:.1e}"));

    // The pipeline raises the order to what the frequencies need, so it
    // matches the exact average at any requested order.
    let field = make_smsv(0.6, 0.0, &TruncationPolicy::default()).unwrap();
    let state = HybridPureState::separable(c(0.6, 0.0), c(0.0, 0.8), &field).unwrap();
    let noise = NoiseModel::new(1.0, 0.2);
    let exact = noisy_density_matrix(&state, &noise, 6.0).unwrap();
    let pipeline = [5, 20, 41]
        .iter()
        .map(|&n| noisy_density_matrix(&state, &noise.with_quadrature(n), 6.0).unwrap().frobenius_distance(&exact))
        .fold(0.0f64, f64::max);
    // The bare rule on E[cos ωλ] = cos(ω λ̄) exp(-ω²σ²/2) converges with order.
    let (omega, mean, sigma) = (12.0f64, 1.0f64, 0.2f64);
    let target = (omega * mean).cos() * (-0.5 * (omega * sigma).powi(2)).exp();
    let errs: Vec<f64> = [4, 8, 16, 32, 64]
        .iter()
        .map(|&n| {
            let rule = GaussHermite::new(n).unwrap();
            let v: f64 = rule.normal_points(mean, sigma).into_iter().map(|(x, w)| w * (omega * x).cos()).sum();
            (v - target).abs()
        })
        .collect();
    let converged = pipeline <= 1e-12 && errs.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-14) && errs[errs.len() - 1] <= 1e-13;
    ok &= converged;
    notes.push(format!(
        "quadrature vs exact average {pipeline:.0e}, bare rule error by order {:?}",
        errs.iter().map(|e| format!("{e:.0e}")).collect::<Vec<_>>()
    ));

    let mut involution = true;
    for _ in 0..20 {
        let dim = rng.random_range(1..=8);
        let s = random_pure(&mut rng, dim);
        let rho = noisy_density_matrix(&s, &NoiseModel::new(1.0, 0.1), rng.random_range(0.0..5.0)).unwrap();
        involution &= partial_transpose(&partial_transpose(&rho)) == rho;
    }
    ok &= involution;
    notes.push(format!("PT involution exact: {involution}"));

    let mut lu = 0.0f64;
    for _ in 0..10 {
        let dim = rng.random_range(2..=5);
        let s = random_pure(&mut rng, dim);
        let rho = noisy_density_matrix(&s, &NoiseModel::new(1.0, 0.15), rng.random_range(0.0..4.0)).unwrap();
        let d = rho.dim();
        let u = linalg::kron(&random_unitary(&mut rng, 2), &random_unitary(&mut rng, d));
        let rotated = HybridDensityMatrix::from_full(&hermitize(&(&u * rho.to_full() * u.adjoint()))).unwrap();
        lu = lu.max((scan(&rho) - scan(&rotated)).abs());
    }
    ok &= lu <= 1e-6;
    notes.push(format!("local-unitary invariance of CHSH maximum {lu:.1e} (tol 1e-6)"));

    outcome(ok, format!("property suite: {}", notes.join("; ")))
}

fn hermitize(m: &linalg::CMatrix) -> linalg::CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

fn main() {
    type Criterion = (u32, bool, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, false, criterion_1),
        (2, false, criterion_2),
        (3, false, criterion_3),
        (4, true, criterion_4),
        (5, false, criterion_5),
        (6, false, criterion_6),
        (7, false, criterion_7),
        (8, false, criterion_8),
        (9, false, criterion_9),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut hard_failures = 0;
    for (id, soft, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let r = run();
        let tag = match (r.pass, soft) {
            (true, _) => "PASS",
            (false, true) => "FAIL (soft)",
            (false, false) => "FAIL",
        };
        println!("criterion {id}: {tag}: {}", r.detail);
        if !r.pass && !soft {
            hard_failures += 1;
        }
    }
    if hard_failures > 0 {
        eprintln!("{hard_failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
