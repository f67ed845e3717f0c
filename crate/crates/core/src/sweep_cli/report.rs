//! Single-state reports for the `bell`, `asymptotic` and `curve` verbs.

use crate::bell_optimizer::{bell_max_pure, bell_max_scan, identity_lower_bound};
use crate::entanglement_tools::{atom_entropy, coherent_witness, entropy_bell_curve, ppt_min_eigenvalue, EntropyBase};
use crate::error::{Error, Result};
use crate::fock_space::FieldSpec;
use crate::jc_dynamics::{asymptotic_density_matrix, evolve_pure, noisy_density_matrix};

use super::config::ExperimentConfig;
use super::emit::format_g12;

fn num(x: f64) -> String {
    if x.is_finite() {
        format_g12(x)
    } else {
        "null".into()
    }
}

fn object(fields: &[(&str, String)], indent: usize) -> String {
    let pad = " ".repeat(indent + 2);
    let body: Vec<String> = fields.iter().map(|(k, v)| format!("{pad}\"{k}\": {v}")).collect();
    format!("{{\n{}\n{}}}", body.join(",\n"), " ".repeat(indent))
}

/// Scanned and closed-form CHSH values at one time.
pub fn bell_report(cfg: &ExperimentConfig, t: f64) -> Result<String> {
    cfg.validate()?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::config("time", "must be finite and non-negative"));
    }
    let state = cfg.initial_pure_state()?;
    let rho = noisy_density_matrix(&state, &cfg.noise, t)?;
    rho.check_physical()?;
    let r = bell_max_scan(&rho, &cfg.scan)?;
    let mut fields = vec![
        ("t", num(t)),
        ("bell", num(r.value)),
        ("euler", format!("[{}, {}, {}]", num(r.euler[0]), num(r.euler[1]), num(r.euler[2]))),
        ("sum1", num(r.sum1)),
        ("sum2", num(r.sum2)),
        ("bell_lower", num(identity_lower_bound(&rho)?)),
        ("entropy", num(atom_entropy(&rho, EntropyBase::Bits))),
    ];
    if cfg.noise.sigma == 0.0 {
        let pure = evolve_pure(&state, cfg.noise.lambda_bar, t);
        fields.push(("bell_pure", num(bell_max_pure(&pure)?)));
    }
    Ok(object(&fields, 0) + "\n")
}

/// Long-time state: CHSH values, partial-transpose minimum and, for a
/// coherent field with both atom levels populated, the PPT certificate.
pub fn asymptotic_report(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let state = cfg.initial_pure_state()?;
    let rho = asymptotic_density_matrix(&state);
    let r = bell_max_scan(&rho, &cfg.scan)?;
    let eg_vanishes = rho.eg().iter().all(|z| z.re == 0.0 && z.im == 0.0);
    let mut fields = vec![
        ("dim", rho.dim().to_string()),
        ("bell", num(r.value)),
        ("bell_lower", num(identity_lower_bound(&rho)?)),
        ("entropy", num(atom_entropy(&rho, EntropyBase::Bits))),
        ("ppt_min", num(ppt_min_eigenvalue(&rho))),
        ("rho_eg_vanishes", eg_vanishes.to_string()),
    ];
    let atom = cfg.initial_state.atom;
    if let FieldSpec::Coherent(alpha) = cfg.initial_state.field {
        // Phases of c_g, c_e and α can be absorbed into the basis states.
        let norm = atom.norm_sqr().sqrt();
        if let Ok(w) = coherent_witness(atom.c_g.norm() / norm, atom.c_e.norm() / norm, alpha.norm()) {
            let witness = object(
                &[
                    ("n_star", w.n_star.to_string()),
                    ("mu_minus", num(w.mu_minus)),
                    ("a11", num(w.a11)),
                    ("a12", num(w.a12)),
                    ("a22", num(w.a22)),
                    ("p_of_n", num(w.p_of_n)),
                    ("n_min", num(w.n_min)),
                    ("deepest_mode", w.deepest_mode.to_string()),
                    ("deepest_mu_minus", num(w.deepest_mu_minus)),
                ],
                2,
            );
            fields.push(("witness", witness));
        }
    }
    Ok(object(&fields, 0) + "\n")
}

/// `theta,entropy,bell` table over `points` evenly spaced angles in
/// `[0, π/4]`.
pub fn curve_csv(points: usize) -> Result<String> {
    if points < 2 {
        return Err(Error::config("points", "need at least 2 points"));
    }
    let step = std::f64::consts::FRAC_PI_4 / (points - 1) as f64;
    let thetas: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { std::f64::consts::FRAC_PI_4 } else { i as f64 * step })
        .collect();
    let mut out = String::from("theta,entropy,bell\n");
    for (theta, (s, b)) in thetas.iter().zip(entropy_bell_curve(&thetas)?) {
        out.push_str(&format!("{},{},{}\n", format_g12(*theta), format_g12(s), format_g12(b)));
    }
    Ok(out)
}
