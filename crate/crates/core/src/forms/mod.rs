//! Cusp forms as truncated q-expansions, eta quotients, multipliers and slash actions.

mod bundled;
mod check;
mod eta;
mod expansion;
mod io;
mod multiplier;

pub use bundled::{bundled_forms, half_integral_eta, integral_eta, theta_lift_basis, DEFAULT_TRUNCATION};
pub use check::{check_fricke, check_modularity, modularity_generators, sample_points, validate_form};
pub use eta::{dedekind_eta, eta_search, EtaQuotient};
pub use expansion::{Evaluation, FormStatus, FourierExpansion, SeriesOnly};
pub use io::{read_form_file, write_form_file, FormFile};
pub use multiplier::{epsilon_d, kronecker_symbol, slash_function, Character, Slashed};

use num_complex::Complex64;

/// Anything that can be evaluated on the upper half-plane with a known weight.
pub trait Evaluate {
    /// Twice the weight, so half-integral weights stay exact.
    fn weight_times_two(&self) -> i64;
    fn value(&self, z: Complex64) -> Complex64;

    fn weight(&self) -> f64 {
        self.weight_times_two() as f64 / 2.0
    }
}

impl<T: Evaluate + ?Sized> Evaluate for &T {
    fn weight_times_two(&self) -> i64 {
        (**self).weight_times_two()
    }
    fn value(&self, z: Complex64) -> Complex64 {
        (**self).value(z)
    }
}

/// A closure with a declared weight.
pub struct FnForm<F: Fn(Complex64) -> Complex64> {
    pub weight_times_two: i64,
    pub f: F,
}

impl<F: Fn(Complex64) -> Complex64> Evaluate for FnForm<F> {
    fn weight_times_two(&self) -> i64 {
        self.weight_times_two
    }
    fn value(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }
}
