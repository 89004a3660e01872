use super::TimeGrid;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};

trait LinearState: Clone {
    fn apply(a: &ComplexMatrix, x: &Self) -> Self;
    fn add_scaled(&self, other: &Self, c: C64) -> Self;
    fn is_finite(&self) -> bool;
}

impl LinearState for ComplexMatrix {
    fn apply(a: &ComplexMatrix, x: &Self) -> Self {
        a * x
    }
    fn add_scaled(&self, other: &Self, c: C64) -> Self {
        ComplexMatrix::add_scaled(self, other, c)
    }
    fn is_finite(&self) -> bool {
        ComplexMatrix::is_finite(self)
    }
}

impl LinearState for ComplexVector {
    fn apply(a: &ComplexMatrix, x: &Self) -> Self {
        a.mul_vec(x)
    }
    fn add_scaled(&self, other: &Self, c: C64) -> Self {
        ComplexVector::add_scaled(self, other, c)
    }
    fn is_finite(&self) -> bool {
        ComplexVector::is_finite(self)
    }
}

/// Classical RK4 for `∂tX = A(t)X`, sampling `A` at `t_k`, `t_k + Δt/2`, `t_{k+1}`.
fn rk4_linear<S, F>(mut rate_at: F, x0: S, grid: &TimeGrid) -> Result<Vec<S>>
where
    S: LinearState,
    F: FnMut(f64) -> Result<ComplexMatrix>,
{
    let dt = grid.dt();
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let mut out = Vec::with_capacity(grid.steps() + 1);
    out.push(x0);
    let mut a_start = rate_at(grid.time(0))?;
    for k in 0..grid.steps() {
        let t = grid.time(k);
        let a_mid = rate_at(t + 0.5 * dt)?;
        let a_end = rate_at(grid.time(k + 1))?;
        let x = &out[k];
        let k1 = S::apply(&a_start, x);
        let k2 = S::apply(&a_mid, &x.add_scaled(&k1, half));
        let k3 = S::apply(&a_mid, &x.add_scaled(&k2, half));
        let k4 = S::apply(&a_end, &x.add_scaled(&k3, full));
        let sixth = C64::new(dt / 6.0, 0.0);
        let next = x
            .add_scaled(&k1, sixth)
            .add_scaled(&k2, sixth * 2.0)
            .add_scaled(&k3, sixth * 2.0)
            .add_scaled(&k4, sixth);
        if !next.is_finite() {
            return Err(Error::NonFinite("RK4 step"));
        }
        out.push(next);
        a_start = a_end;
    }
    Ok(out)
}

/// Solves `i∂tX = G(t)X`, `X(t0) = I`, returning `X(t_k)` for every grid point.
pub fn rk4_matrix_ode<F>(mut generator_at: F, grid: &TimeGrid) -> Result<Vec<ComplexMatrix>>
where
    F: FnMut(f64) -> Result<ComplexMatrix>,
{
    let minus_i = C64::new(0.0, -1.0);
    let first = generator_at(grid.time(0))?;
    let n = first.dim();
    let mut cached = Some(first);
    rk4_linear(
        move |t| {
            let g = match cached.take() {
                Some(g) => g,
                None => generator_at(t)?,
            };
            Ok(g.scale(minus_i))
        },
        ComplexMatrix::identity(n),
        grid,
    )
}

/// Solves `∂tΦ = A(t)Φ` from `x0`.
pub fn rk4_state_ode<F>(
    rate_at: F,
    x0: ComplexVector,
    grid: &TimeGrid,
) -> Result<Vec<ComplexVector>>
where
    F: FnMut(f64) -> Result<ComplexMatrix>,
{
    rk4_linear(rate_at, x0, grid)
}
