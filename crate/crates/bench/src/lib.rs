//! Fixed inputs shared by the benchmarks.

use qvdc_core::complete::RationalFunctionZ;
use qvdc_core::trace::CompositeTraceSpec;

/// `(x^3 + 2x + 1) / (x^2 + 1)`.
pub fn sample_lambda() -> RationalFunctionZ {
    RationalFunctionZ::new(vec![1, 2, 0, 1], vec![1, 0, 1]).expect("coprime")
}

/// Five primes near 100, two of them carrying Kloosterman sums.
pub fn mixed_spec() -> CompositeTraceSpec {
    CompositeTraceSpec::parse("q=101*103*107*109*113;101=kloo:k=2;103=kloo:k=3;*=addrat:f1=1,0,0,1;f2=0,1")
        .expect("valid spec")
}

/// `e(3 inv(n) / 15015)`.
pub fn inverse_phase_spec() -> CompositeTraceSpec {
    CompositeTraceSpec::inverse_phase(3 * 5 * 7 * 11 * 13, 3).expect("squarefree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(sample_lambda().degree(), 5);
        assert_eq!(mixed_spec().modulus(), 101 * 103 * 107 * 109 * 113);
        assert_eq!(inverse_phase_spec().modulus(), 15015);
    }
}
