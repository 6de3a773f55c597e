//! Complete exponential sums `Sigma(lambda, c) = sum_{a mod c} e(lambda(a)/c)`
//! of rational functions: direct summation, the CRT factorisation, stationary
//! phase on prime powers, and the Weil-type upper bounds.

mod checks;
mod ratfun;
mod sigma;

pub use checks::{random_rational_function, random_rational_function_mod, composite_bound_check, weil_check};
pub use ratfun::{constant, RationalFunctionZ};
pub use sigma::{sigma, sigma_crt, sigma_direct, sigma_prime_power, Method, StationaryValue, SumValue};
