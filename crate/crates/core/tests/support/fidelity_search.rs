//! Fidelity by brute maximization over purifications.
//!
//! Both states are purified through Cholesky factors, `|ψ_i>` with amplitude
//! matrix `L_i` (system x ancilla), and `|<ψ0|(I ⊗ U)|ψ1>|` is climbed over
//! ancilla unitaries `U` by finite-difference gradient ascent in a Cayley
//! chart around the current point. No SVD, no matrix square roots.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

fn cayley(h: &DMatrix<C64>) -> DMatrix<C64> {
    let d = h.nrows();
    let i = C64::new(0.0, 1.0);
    let eye = DMatrix::<C64>::identity(d, d);
    let num = &eye - h * i;
    let den = (&eye + h * i).try_inverse().expect("I + iH is invertible for Hermitian H");
    num * den
}

/// Hermitian basis: real-symmetric and imaginary-antisymmetric units.
fn hermitian_basis(d: usize) -> Vec<DMatrix<C64>> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in a..d {
            let mut m = DMatrix::<C64>::zeros(d, d);
            m[(a, b)] = C64::new(1.0, 0.0);
            m[(b, a)] = C64::new(1.0, 0.0);
            out.push(m);
            if a != b {
                let mut m = DMatrix::<C64>::zeros(d, d);
                m[(a, b)] = C64::new(0.0, 1.0);
                m[(b, a)] = C64::new(0.0, -1.0);
                out.push(m);
            }
        }
    }
    out
}

fn cholesky_purification(rho: &DMatrix<C64>) -> DMatrix<C64> {
    // tiny shift keeps rank-deficient inputs factorable
    let d = rho.nrows();
    let shifted = rho + DMatrix::<C64>::identity(d, d) * C64::new(1e-14, 0.0);
    shifted.cholesky().expect("positive definite").l()
}

/// `max_U |<ψ0|(I ⊗ U)|ψ1>|` over ancilla unitaries.
pub fn fidelity_by_search(rho0: &DMatrix<C64>, rho1: &DMatrix<C64>) -> f64 {
    let l0 = cholesky_purification(rho0);
    let l1 = cholesky_purification(rho1);
    let d = l0.ncols();
    // (I ⊗ U)|ψ1> has amplitude matrix L1 U^T; overlap = tr(L0^† L1 U^T)
    let x = l0.adjoint() * &l1;
    let objective = |u: &DMatrix<C64>| (&x * u.transpose()).trace().norm();
    let basis = hermitian_basis(d);

    let mut best = f64::MIN;
    for start in 0..4 {
        // deterministic spread of starting points
        let mut h0 = DMatrix::<C64>::zeros(d, d);
        for (j, e) in basis.iter().enumerate() {
            h0 += e * C64::new(((start * 7 + j * 3) % 5) as f64 * 0.4 - 0.8, 0.0);
        }
        let mut u = cayley(&h0);
        let mut f = objective(&u);
        let mut step = 0.5;
        for _ in 0..4000 {
            let eps = 1e-6;
            let grad: Vec<f64> = basis
                .iter()
                .map(|e| {
                    let plus = objective(&(&u * cayley(&(e * C64::new(eps, 0.0)))));
                    let minus = objective(&(&u * cayley(&(e * C64::new(-eps, 0.0)))));
                    (plus - minus) / (2.0 * eps)
                })
                .collect();
            let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gnorm < 1e-10 {
                break;
            }
            let mut h = DMatrix::<C64>::zeros(d, d);
            for (e, g) in basis.iter().zip(&grad) {
                h += e * C64::new(*g, 0.0);
            }
            // backtracking line search
            let mut moved = false;
            while step > 1e-12 {
                let cand = &u * cayley(&(&h * C64::new(step, 0.0)));
                let fc = objective(&cand);
                if fc > f {
                    u = cand;
                    f = fc;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        best = best.max(f);
    }
    best.min(1.0)
}
