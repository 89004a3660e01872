//! Seeded random operators and scenarios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::model::{FrameSpec, GridSpec, MetricSpec, ScenarioSpec};

fn entry(rng: &mut impl Rng, scale: f64) -> C64 {
    C64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

fn matrix_from(rng: &mut impl Rng, n: usize, scale: f64) -> ComplexMatrix {
    let data = (0..n * n).map(|_| entry(rng, scale)).collect();
    ComplexMatrix::from_vec(n, data).expect("finite entries")
}

/// Matrix with entries whose real and imaginary parts are uniform on `[-scale, scale]`.
pub fn random_matrix(seed: u64, n: usize, scale: f64) -> ComplexMatrix {
    matrix_from(&mut ChaCha8Rng::seed_from_u64(seed), n, scale)
}

pub fn random_hermitian(seed: u64, n: usize, scale: f64) -> ComplexMatrix {
    random_matrix(seed, n, scale).hermitian_part()
}

pub fn random_vector(seed: u64, n: usize) -> ComplexVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexVector::new((0..n).map(|_| entry(&mut rng, 1.0)).collect()).expect("finite entries")
}

/// The `index`-th scenario of the randomized family drawn from `seed`.
///
/// Dimension is uniform on 2..=4, the frame Hamiltonian is a constant random
/// Hermitian matrix, and the metric is `B(t)†B(t) + I` with `B` a quadratic
/// matrix polynomial.
pub fn random_scenario_spec(seed: u64, index: usize) -> ScenarioSpec {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let n = rng.gen_range(2..=4);
    let frame = matrix_from(&mut rng, n, 1.0).hermitian_part();
    let coefficients = (0..3).map(|_| matrix_from(&mut rng, n, 0.5)).collect();
    let state =
        ComplexVector::new((0..n).map(|_| entry(&mut rng, 1.0)).collect()).expect("finite entries");
    ScenarioSpec {
        name: format!("RANDOM_{seed}_{index}"),
        hbar: 1.0,
        frame: FrameSpec::Constant { matrix: frame },
        metric: MetricSpec::PolynomialGram { coefficients },
        initial_state: Some(state),
        grid: GridSpec::default(),
        naive_demo: false,
    }
}

pub fn random_scenario_specs(seed: u64, count: usize) -> Vec<ScenarioSpec> {
    (0..count).map(|i| random_scenario_spec(seed, i)).collect()
}
