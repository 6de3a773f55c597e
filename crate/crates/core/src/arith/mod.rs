//! Shared number-theoretic kernels: modular arithmetic, factorization,
//! squarefree/squarefull splitting, smooth windows and numeric forms of the
//! auxiliary inequalities (gcd averages, squarefull averages, Poisson summation,
//! Donoho-Stark).

pub mod checks;
pub mod factor;
pub mod modular;
pub mod poly;
pub mod window;

pub use checks::{
    avg_sharp_check, avg_xi_check, gcd_average_check, poisson_check, uncertainty_check,
    CheckOutcome, RatioCurve,
};
pub use factor::{
    d_infinity, divisors, factorize, omega, split_flat_sharp, tau, tau_k, xi, Factorization,
    SpfSieve,
};
pub use modular::{
    e_frac, gcd, inv_mod, is_prime, mul_mod, pow_mod, primitive_root, sqrt_minus_one,
    PhaseTable,
};
pub use window::Window;
