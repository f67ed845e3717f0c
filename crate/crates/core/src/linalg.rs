//! Dense complex linear algebra helpers.
//!
//! Everything here works on Hermitian matrices stored as full
//! `DMatrix<Complex64>`. The general path is nalgebra's symmetric
//! eigensolver; small and tridiagonal inputs take closed-form or QL paths,
//! and block-diagonal inputs (after permutation) are split into their
//! connected components before solving.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Eigenvalues of the 2x2 Hermitian matrix `[[a, b], [b*, d]]`, ascending.
///
/// The smaller-magnitude root is recovered from the determinant so that it
/// keeps full relative precision when `|det| << tr^2`.
pub fn hermitian_2x2_eigenvalues(a: f64, b: Complex64, d: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    let det = a * d - b.norm_sqr();
    if mean > 0.0 {
        let hi = mean + radius;
        [det / hi, hi]
    } else if mean < 0.0 {
        let lo = mean - radius;
        [lo, det / lo]
    } else {
        [-radius, radius]
    }
}

/// All eigenvalues of a Hermitian matrix (unsorted for n > 2).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => hermitian_2x2_eigenvalues(m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re).to_vec(),
        _ => m.clone().symmetric_eigenvalues().iter().copied().collect(),
    }
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    match m.nrows() {
        0 => 0.0,
        1 => m[(0, 0)].re.abs(),
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let radius = (0.5 * (a - d)).hypot(m[(0, 1)].norm());
            (a + d).abs().max(2.0 * radius)
        }
        _ => hermitian_eigenvalues(m).iter().map(|x| x.abs()).sum(),
    }
}

/// `√(a² + b²)` without overflow; much cheaper than `f64::hypot`, which
/// dominated the QL sweeps.
#[inline]
fn pythag(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    if a > b {
        let r = b / a;
        a * (1.0 + r * r).sqrt()
    } else if b > 0.0 {
        let r = a / b;
        b * (1.0 + r * r).sqrt()
    } else {
        0.0
    }
}

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-style shifts. `diag` is overwritten by the eigenvalues;
/// `off[i]` couples rows `i` and `i + 1`; it needs one spare slot
/// (`off.len() >= diag.len()`) and is destroyed.
pub fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) {
    let n = diag.len();
    if n < 2 {
        return;
    }
    debug_assert!(off.len() >= n);
    let e = off;
    e[n - 1] = 0.0;
    let d = diag;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 80 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = pythag(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Eigenvalues of a real symmetric tridiagonal matrix from its diagonal
/// and squared couplings, by root-free rational QL. No square roots in the
/// sweeps, which roughly halves the cost of `tridiagonal_eigenvalues`; the
/// deflation test is absolute (relative to the largest row norm seen), which
/// is what a trace norm needs. `e2[i]` couples rows `i` and `i + 1`; it
/// needs one spare slot and is destroyed.
pub fn tridiagonal_eigenvalues_rational(d: &mut [f64], e2: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    debug_assert!(e2.len() >= n);
    e2[n - 1] = 0.0;
    let (mut f, mut t) = (0.0f64, 0.0f64);
    let (mut b, mut c) = (0.0f64, 0.0f64);
    for l in 0..n {
        let h = d[l].abs() + e2[l].sqrt();
        if t < h {
            t = h;
            b = f64::EPSILON * t;
            c = b * b;
        }
        let mut iter = 0;
        loop {
            let mut m = l;
            while e2[m] > c {
                m += 1;
            }
            if m == l || iter == 60 {
                break;
            }
            iter += 1;
            let s = e2[l].sqrt();
            let g = d[l];
            let p = (d[l + 1] - g) / (2.0 * s);
            let r = pythag(p, 1.0);
            d[l] = s / (p + r.copysign(p));
            let h = g - d[l];
            for x in &mut d[l + 1..] {
                *x -= h;
            }
            f += h;

            let mut g = d[m];
            if g == 0.0 {
                g = b;
            }
            let mut h = g;
            let mut s = 0.0;
            for i in (l..m).rev() {
                let p = g * h;
                let r = p + e2[i];
                e2[i + 1] = s * r;
                s = e2[i] / r;
                d[i + 1] = h + s * (h + d[i]);
                g = d[i] - e2[i] / g;
                if g == 0.0 {
                    g = b;
                }
                h = g * p / r;
            }
            e2[l] = s * g;
            d[l] = h;
            if h == 0.0 || e2[l].abs() <= (c / h).abs() {
                break;
            }
            e2[l] *= h;
            if e2[l] == 0.0 {
                break;
            }
        }
        d[l] += f;
    }
}

/// Trace norm of a Hermitian tridiagonal matrix given its real diagonal
/// and complex off-diagonal. The off-diagonal phases are removed by a
/// diagonal unitary gauge, which leaves the spectrum unchanged.
pub fn tridiagonal_trace_norm(diag: &[f64], off: &[Complex64], scratch: &mut Vec<f64>) -> f64 {
    let n = diag.len();
    match n {
        0 => 0.0,
        1 => diag[0].abs(),
        2 => {
            let radius = (0.5 * (diag[0] - diag[1])).hypot(off[0].norm());
            (diag[0] + diag[1]).abs().max(2.0 * radius)
        }
        _ => {
            scratch.clear();
            scratch.extend_from_slice(diag);
            scratch.extend(off.iter().map(|z| z.norm_sqr()));
            scratch.push(0.0);
            let (d, e2) = scratch.split_at_mut(n);
            tridiagonal_eigenvalues_rational(d, e2);
            d.iter().map(|x| x.abs()).sum()
        }
    }
}

/// Largest |i - j| over entries with modulus above `tol`.
pub fn bandwidth(m: &CMatrix, tol: f64) -> usize {
    let n = m.nrows();
    let mut bw = 0;
    for j in 0..n {
        for i in 0..n {
            if m[(i, j)].norm() > tol {
                bw = bw.max(i.abs_diff(j));
            }
        }
    }
    bw
}

/// Connected components of the sparsity graph of a square matrix (entries
/// exactly zero are treated as absent). Each component is returned as a
/// sorted index list; components are ordered by smallest index.
pub fn block_components(m: &CMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..j {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 || m[(j, i)].re != 0.0 || m[(j, i)].im != 0.0 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Full spectrum of a Hermitian matrix, solving each block-diagonal
/// component on its own. Sorted ascending.
pub fn hermitian_spectrum_blocked(m: &CMatrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.nrows());
    for comp in block_components(m) {
        out.extend(hermitian_eigenvalues(&submatrix(m, &comp)));
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// Smallest eigenvalue of a Hermitian matrix via its block components.
pub fn hermitian_min_eigenvalue(m: &CMatrix) -> f64 {
    block_components(m)
        .iter()
        .map(|comp| {
            hermitian_eigenvalues(&submatrix(m, comp))
                .into_iter()
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}
