use super::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tolerances::{CONDITION_CEILING, PIVOT_FLOOR};

/// Inverse by LU factorization with partial pivoting.
///
/// Reports [`Error::Singular`] when a pivot falls below `1e-14·‖A‖_F` or the
/// ratio of largest to smallest pivot magnitude exceeds `1e12`.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    let norm = a.fro_norm();
    let floor = PIVOT_FLOOR * norm;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let (mut pmin, mut pmax) = (f64::INFINITY, 0.0f64);

    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, lu[(r, col)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty range");
        if !(pivot_mag > floor) || pivot_mag == 0.0 {
            return Err(Error::Singular { pivot: pivot_mag });
        }
        pmin = pmin.min(pivot_mag);
        pmax = pmax.max(pivot_mag);
        if pivot_row != col {
            perm.swap(pivot_row, col);
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = tmp;
            }
        }
        let pivot = lu[(col, col)];
        for r in (col + 1)..n {
            let factor = lu[(r, col)] / pivot;
            lu[(r, col)] = factor;
            if factor == ZERO {
                continue;
            }
            for j in (col + 1)..n {
                let u = lu[(col, j)];
                lu[(r, j)] -= factor * u;
            }
        }
    }
    if pmax / pmin > CONDITION_CEILING {
        return Err(Error::Singular { pivot: pmin });
    }

    // Solve L·U·X = P·I column by column.
    let mut inv = ComplexMatrix::zeros(n);
    let mut y = vec![ZERO; n];
    for col in 0..n {
        for i in 0..n {
            let mut acc = if perm[i] == col { ONE } else { ZERO };
            for k in 0..i {
                acc -= lu[(i, k)] * y[k];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc: C64 = y[i];
            for k in (i + 1)..n {
                acc -= lu[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = acc / lu[(i, i)];
        }
    }
    Ok(inv)
}
