//! Shared instances for the criterion benches.

use struxform::random::InstanceRng;
use struxform::{CauchySpec, ComplexVector};

/// Sizes swept by every bench group.
pub const SIZES: [usize; 4] = [256, 512, 1024, 2048];

/// A CV matrix with rows near the unit circle and a matching input vector.
pub fn cv_instance(n: usize, seed: u64) -> (CauchySpec, ComplexVector) {
    let mut rng = InstanceRng::new(seed ^ n as u64);
    let s = rng.perturbed_circle(n, 0.05, 0.3);
    let spec = CauchySpec::cv(s, rng.unit()).expect("random knots avoid the grid");
    (spec, rng.vector(n))
}

/// Knots near the unit circle and polynomial coefficients.
pub fn poly_instance(n: usize, seed: u64) -> (ComplexVector, ComplexVector) {
    let mut rng = InstanceRng::new(seed ^ n as u64);
    (rng.perturbed_circle(n, 0.05, 0.3), rng.vector(n))
}
