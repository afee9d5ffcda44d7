//! Preference-comparison statistics: Pearson's χ² against a uniform null and
//! Cohen's κ for inter-annotator agreement.

use serde::{Deserialize, Serialize};

use super::erf::erfc;
use super::{Choice, EvalError};

/// χ² statistic with its degrees of freedom and survival-function p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub chi2: f64,
    pub df: u32,
    pub p: f64,
}

/// Survival function of the χ² distribution: `P(X >= x)` at `df` degrees of
/// freedom. Only `df = 1` is needed here, where `p = erfc(sqrt(x/2))`.
pub fn chi2_survival(x: f64, df: u32) -> Result<f64, EvalError> {
    if !x.is_finite() || x < 0.0 {
        return Err(EvalError::DomainError(x));
    }
    if df != 1 {
        return Err(EvalError::UnsupportedDf(df));
    }
    Ok(erfc((x / 2.0).sqrt()))
}

/// Pearson's χ² over two raw preference counts under the uniform null
/// (expected count `(x+y)/2` per cell), d.f. = 1.
pub fn chi_square_preference(count_x: u64, count_y: u64) -> Result<ChiSquareResult, EvalError> {
    let total = count_x + count_y;
    if total == 0 {
        return Err(EvalError::EmptyComparison);
    }
    let expected = total as f64 / 2.0;
    let dx = count_x as f64 - expected;
    let dy = count_y as f64 - expected;
    let chi2 = dx * dx / expected + dy * dy / expected;
    let p = chi2_survival(chi2, 1)?;
    Ok(ChiSquareResult { chi2, df: 1, p })
}

/// Cohen's κ over two aligned label sequences on the {A, B, Neither}
/// alphabet: `(p_o − p_e) / (1 − p_e)`. Returns 1 in the degenerate case
/// where chance agreement is total (both raters constant on the same label,
/// which forces perfect observed agreement too).
pub fn cohens_kappa(labels_1: &[Choice], labels_2: &[Choice]) -> Result<f64, EvalError> {
    if labels_1.len() != labels_2.len() {
        return Err(EvalError::LengthMismatch {
            left: labels_1.len(),
            right: labels_2.len(),
        });
    }
    if labels_1.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let n = labels_1.len() as f64;
    let mut agree = 0u64;
    let mut marginals_1 = [0u64; 3];
    let mut marginals_2 = [0u64; 3];
    for (a, b) in labels_1.iter().zip(labels_2) {
        if a == b {
            agree += 1;
        }
        marginals_1[a.as_index()] += 1;
        marginals_2[b.as_index()] += 1;
    }
    // p_e = 1 exactly iff both raters are constant on the same label.
    let degenerate = (0..3).any(|l| {
        marginals_1[l] == labels_1.len() as u64 && marginals_2[l] == labels_2.len() as u64
    });
    if degenerate {
        return Ok(1.0);
    }
    let p_o = agree as f64 / n;
    let p_e: f64 = (0..3)
        .map(|l| (marginals_1[l] as f64 / n) * (marginals_2[l] as f64 / n))
        .sum();
    Ok((p_o - p_e) / (1.0 - p_e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Choice::*;

    #[test]
    #[allow(clippy::excessive_precision)] // references kept at source precision
    fn survival_function_reference_points() {
        // mpmath references for p = erfc(sqrt(x/2)).
        let references = [
            (0.001, 0.97477287936996039),
            (0.5, 0.47950012218695346),
            (1.0, 0.31731050786291410),
            (2.0, 0.15729920705028513),
            (3.841458820694124, 0.05),
            (6.634896601021215, 0.01),
            (10.827566170662733, 0.001),
            (20.0, 7.7442164310440836e-6),
            (50.0, 1.5374597944280349e-12),
            (100.0, 1.5239706048321052e-23),
        ];
        for (x, reference) in references {
            let p = chi2_survival(x, 1).unwrap();
            assert!(
                ((p - reference) / reference).abs() < 1e-10,
                "sf({x}) = {p:e}, want {reference:e}"
            );
        }
        assert_eq!(chi2_survival(0.0, 1).unwrap(), 1.0);
    }

    #[test]
    fn survival_function_domain() {
        assert!(matches!(
            chi2_survival(-1.0, 1),
            Err(EvalError::DomainError(_))
        ));
        assert!(matches!(
            chi2_survival(1.0, 2),
            Err(EvalError::UnsupportedDf(2))
        ));
    }

    #[test]
    fn survival_function_is_strictly_decreasing() {
        let mut last = 1.0;
        for i in 1..200 {
            let x = i as f64 * 0.35;
            let p = chi2_survival(x, 1).unwrap();
            assert!(p < last, "sf not decreasing at {x}");
            last = p;
        }
    }

    #[test]
    fn equal_counts_give_chi2_zero() {
        let result = chi_square_preference(50, 50).unwrap();
        assert_eq!(result.chi2, 0.0);
        assert_eq!(result.p, 1.0);
    }

    #[test]
    fn hand_computed_counts() {
        // E = 50; (75-50)²/50 + (25-50)²/50 = 25.
        let result = chi_square_preference(75, 25).unwrap();
        assert_eq!(result.chi2, 25.0);
        assert_eq!(result.df, 1);
    }

    #[test]
    fn reference_row_mapping() {
        let result = chi_square_preference(75, 25).unwrap();
        assert!(result.p < 1e-6);
        // 8.530 → p ≈ 0.003 (rounded in print).
        let p = chi2_survival(8.530, 1).unwrap();
        assert!((p - 0.003).abs() < 5e-4, "p = {p}");
    }

    #[test]
    fn chi_square_is_symmetric() {
        let ab = chi_square_preference(123, 77).unwrap();
        let ba = chi_square_preference(77, 123).unwrap();
        assert_eq!(ab.chi2, ba.chi2);
        assert_eq!(ab.p, ba.p);
        assert!(matches!(
            chi_square_preference(0, 0),
            Err(EvalError::EmptyComparison)
        ));
    }

    #[test]
    fn kappa_perfect_agreement() {
        assert_eq!(
            cohens_kappa(&[A, B, Neither, A], &[A, B, Neither, A]).unwrap(),
            1.0
        );
    }

    #[test]
    fn kappa_chance_level() {
        assert_eq!(cohens_kappa(&[A, A, B, B], &[A, B, A, B]).unwrap(), 0.0);
    }

    #[test]
    fn kappa_half() {
        // p_o = 0.75, p_e = 0.5 → κ = 0.5.
        assert_eq!(cohens_kappa(&[A, A, A, B], &[A, A, B, B]).unwrap(), 0.5);
    }

    #[test]
    fn kappa_degenerate_single_label() {
        assert_eq!(cohens_kappa(&[A, A], &[A, A]).unwrap(), 1.0);
    }

    #[test]
    fn kappa_error_paths() {
        assert!(matches!(
            cohens_kappa(&[A], &[A, B]),
            Err(EvalError::LengthMismatch { .. })
        ));
        assert!(matches!(cohens_kappa(&[], &[]), Err(EvalError::EmptyInput)));
    }

    #[test]
    fn kappa_never_exceeds_one() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.gen_range(1..40);
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| match rng.gen_range(0..3) {
                0 => A,
                1 => B,
                _ => Neither,
            };
            let a: Vec<Choice> = (0..n).map(|_| draw(&mut rng)).collect();
            let b: Vec<Choice> = (0..n).map(|_| draw(&mut rng)).collect();
            let kappa = cohens_kappa(&a, &b).unwrap();
            assert!(kappa <= 1.0 + 1e-12, "kappa {kappa}");
        }
    }
}
