//! Trace functions modulo primes and squarefree composites: evaluation,
//! incomplete sums, the normalised Fourier transform and numeric checks of
//! the inequalities used by the differencing and completion steps.

mod checks;
mod eval;
pub mod fourier;
mod spec;
mod sums;

pub use checks::{quasi_orthogonality_check, weyl_differencing_check, QuasiOrthogonality, WeylOutcome};
pub use eval::{
    eval_composite, eval_trace, index_table, kloosterman_point, kloosterman_table, trace_table,
    CompositeTables,
};
pub use fourier::{fourier_transform_p, normalized_dft};
pub use spec::{CompositeTraceSpec, TraceKind, TraceSpec};
pub use sums::{
    empirical_pair_check, env_threads, incomplete_sum, incomplete_sum_threads, BoundReport, BoundRow,
    SHIFTS,
};
