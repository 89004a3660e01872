use super::{ComplexMatrix, C64};
use crate::tolerances::{EXPM_SCALED_NORM, EXPM_TAYLOR_ORDER};

/// Matrix exponential by scaling and squaring.
///
/// `A` is halved until `‖A/2^s‖_F ≤ 0.5`, the Taylor polynomial of order 16 is
/// evaluated by Horner's rule, and the result squared `s` times.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let norm = a.fro_norm();
    let mut squarings = 0u32;
    if norm > EXPM_SCALED_NORM {
        squarings = (norm / EXPM_SCALED_NORM).log2().ceil() as u32;
    }
    let scaled = a.scale_real(0.5f64.powi(squarings as i32));

    let id = ComplexMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=EXPM_TAYLOR_ORDER).rev() {
        // acc ← I + (A/k)·acc
        acc = &id + &(&scaled * &acc).scale(C64::new(1.0 / k as f64, 0.0));
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}
