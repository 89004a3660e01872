use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerances::{HERMITIAN_INPUT_TOL, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL, PD_FLOOR};

/// Spectral decomposition `A = V·diag(λ)·V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V·diag(f(λ))·V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, &w) in weights.iter().enumerate() {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Applies `A ← J†AJ` and `V ← VJ` for the complex Jacobi rotation
/// that annihilates `A[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]] on the (p, q) plane.
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * jqp;
        a[(k, q)] = akp * jpq + akq * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * jqp.conj();
        a[(q, k)] = apk * jpq.conj() + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Fails with [`Error::NotHermitian`] when `‖A − A†‖_F > 1e-10·‖A‖_F`.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    let residual = a.hermitian_residual();
    if residual > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let n = a.dim();
    let mut work = a.hermitian_part();
    let mut vecs = ComplexMatrix::identity(n);
    let scale = work.fro_norm();
    let target = JACOBI_OFF_TOL * scale;
    let skip = f64::MIN_POSITIVE.max(1e-300 * scale);

    let mut converged = off_diagonal_mass(&work) <= target;
    let mut sweeps = 0;
    // One extra sweep after the tolerance is met pushes the residual mass
    // to roundoff level; ω is differentiated numerically downstream.
    let mut polish = true;
    while !converged || polish {
        if converged {
            polish = false;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            if converged {
                break;
            }
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if work[(p, q)].norm() > skip {
                    rotate(&mut work, &mut vecs, p, q);
                }
            }
        }
        sweeps += 1;
        if !converged {
            converged = off_diagonal_mass(&work) <= target;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(i, i)].re.total_cmp(&work[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| work[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = vecs[(row, src)];
        }
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Unique Hermitian positive-definite square root.
pub fn sqrt_pd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let min = eig.eigenvalues[0];
    let max = *eig.eigenvalues.last().expect("dim >= 1");
    if !(max > 0.0) || min <= PD_FLOOR * max {
        return Err(Error::NotPositiveDefinite { min, max });
    }
    Ok(eig.map_spectrum(f64::sqrt).hermitian_part())
}
