#![allow(dead_code)]

use jcbell::fock_space::FockVector;
use jcbell::jc_dynamics::HybridPureState;
use jcbell::linalg::CMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure hybrid state with `dim` Fock modes.
pub fn random_pure(rng: &mut impl Rng, dim: usize) -> HybridPureState {
    let mut draw = || FockVector::from_amps((0..dim).map(|_| gaussian(rng)).collect()).unwrap();
    let (g, e) = (draw(), draw());
    HybridPureState::normalized(g, e).unwrap()
}

/// Haar unitary from the QR decomposition of a complex Gaussian matrix,
/// with the phases of R's diagonal divided out.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let z = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}
