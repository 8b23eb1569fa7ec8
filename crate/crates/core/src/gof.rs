//! Goodness of fit between observed digit frequencies and a reference law.

use alloc::vec::Vec;

use crate::digits::{digit_histogram, DigitDistribution, DigitHistogram, DigitTuple};
use crate::error::{Error, Result};
use crate::special::chi_square_sf;

const NORMALIZATION_TOL: f64 = 1e-9;

/// One digit category of a [`FitReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub digits: DigitTuple,
    pub count: u64,
    pub observed: f64,
    pub expected: f64,
}

/// Observed vs expected digit fractions with their fit statistics.
///
/// Statistics are reported, not judged; see [`FitReport::passes`] for a
/// threshold check.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub base: u32,
    pub n_digits: usize,
    pub rows: Vec<FitRow>,
    pub counts_total: u64,
    pub excluded: u64,
    pub chi_square: f64,
    pub chi_square_dof: u32,
    pub p_value: f64,
    pub mad: f64,
    pub total_variation: f64,
}

impl FitReport {
    /// `mad <= max_mad && p_value >= min_p`.
    pub fn passes(&self, max_mad: f64, min_p: f64) -> bool {
        self.mad <= max_mad && self.p_value >= min_p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
}

fn check_pair(hist: &DigitHistogram, expected: &DigitDistribution) -> Result<()> {
    if !hist.same_layout(expected) {
        return Err(Error::ReferenceMismatch);
    }
    if hist.total_included() == 0 {
        return Err(Error::EmptyHistogram);
    }
    let sum: f64 = expected.probabilities().iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::ReferenceNotNormalized(sum));
    }
    Ok(())
}

/// Pearson chi-square of the counts against `N · p`, its degrees of freedom
/// (categories − 1) and upper-tail p-value.
pub fn chi_square_stat(hist: &DigitHistogram, expected: &DigitDistribution) -> Result<ChiSquare> {
    check_pair(hist, expected)?;
    let total = hist.total_included() as f64;
    let mut statistic = 0.0;
    for (index, (&count, &p)) in hist
        .counts()
        .iter()
        .zip(expected.probabilities())
        .enumerate()
    {
        if p == 0.0 {
            if count > 0 {
                return Err(Error::ZeroExpected { index });
            }
            continue;
        }
        let e = total * p;
        let d = count as f64 - e;
        statistic += d * d / e;
    }
    let dof = u32::try_from(hist.categories() - 1).map_err(|_| Error::ReferenceMismatch)?;
    let p_value = if dof == 0 {
        1.0
    } else {
        chi_square_sf(statistic, dof)?
    };
    Ok(ChiSquare {
        statistic,
        dof,
        p_value,
    })
}

/// Mean over categories of `|observed − expected|`.
pub fn mean_absolute_deviation(observed: &[f64], expected: &[f64]) -> f64 {
    l1_distance(observed, expected) / observed.len() as f64
}

/// `½ Σ |observed − expected|`.
pub fn total_variation(observed: &[f64], expected: &[f64]) -> f64 {
    0.5 * l1_distance(observed, expected)
}

fn l1_distance(observed: &[f64], expected: &[f64]) -> f64 {
    assert_eq!(
        observed.len(),
        expected.len(),
        "distributions differ in length"
    );
    observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e).abs())
        .sum()
}

pub fn mad_stat(hist: &DigitHistogram, expected: &DigitDistribution) -> Result<f64> {
    check_pair(hist, expected)?;
    Ok(mean_absolute_deviation(
        &hist.fractions(),
        expected.probabilities(),
    ))
}

pub fn total_variation_stat(hist: &DigitHistogram, expected: &DigitDistribution) -> Result<f64> {
    check_pair(hist, expected)?;
    Ok(total_variation(&hist.fractions(), expected.probabilities()))
}

/// Every statistic of `hist` against `reference`, with both tables.
pub fn fit_report(hist: &DigitHistogram, reference: &DigitDistribution) -> Result<FitReport> {
    let chi = chi_square_stat(hist, reference)?;
    let observed = hist.fractions();
    let expected = reference.probabilities();
    let rows = hist
        .counts()
        .iter()
        .zip(&observed)
        .zip(expected)
        .enumerate()
        .map(|(i, ((&count, &observed), &expected))| FitRow {
            digits: hist.tuple(i),
            count,
            observed,
            expected,
        })
        .collect();
    Ok(FitReport {
        base: hist.base(),
        n_digits: hist.n_digits(),
        rows,
        counts_total: hist.total_included(),
        excluded: hist.total_excluded(),
        chi_square: chi.statistic,
        chi_square_dof: chi.dof,
        p_value: chi.p_value,
        mad: mean_absolute_deviation(&observed, expected),
        total_variation: total_variation(&observed, expected),
    })
}

/// Digit histogram of `values` compared with the Benford law.
pub fn conformance_report(
    values: &[f64],
    n: usize,
    base: u32,
    threshold: f64,
) -> Result<FitReport> {
    let hist = digit_histogram(values, n, base, threshold)?;
    fit_report(&hist, &DigitDistribution::benford(base, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::benford_prob_first;
    use crate::RandomStream;
    use alloc::vec;
    use proptest::prelude::*;

    fn hist_from_counts(counts: &[u64]) -> DigitHistogram {
        // base = counts.len() + 1 so every first digit is a category
        let base = counts.len() as u32 + 1;
        let mut h = DigitHistogram::new(base, 1, 0.0).unwrap();
        for (k, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                h.push((k + 1) as f64);
            }
        }
        h
    }

    #[test]
    fn two_category_chi_square() {
        let h = hist_from_counts(&[60, 40]);
        let uniform = DigitDistribution::from_probabilities(3, 1, vec![0.5, 0.5]).unwrap();
        let chi = chi_square_stat(&h, &uniform).unwrap();
        assert!((chi.statistic - 4.0).abs() < 1e-12);
        assert_eq!(chi.dof, 1);
        assert!((chi.p_value - 0.0455).abs() < 5e-4);
    }

    #[test]
    fn exact_fit_is_zero() {
        let h = hist_from_counts(&[50, 30, 20]);
        let r = DigitDistribution::from_probabilities(4, 1, vec![0.5, 0.3, 0.2]).unwrap();
        let report = fit_report(&h, &r).unwrap();
        assert!(report.chi_square.abs() < 1e-12);
        assert!((report.p_value - 1.0).abs() < 1e-12);
        assert!(report.mad < 1e-15 && report.total_variation < 1e-15);
        assert_eq!(report.chi_square_dof, 2);
    }

    #[test]
    fn disjoint_supports_have_unit_total_variation() {
        assert_eq!(total_variation(&[1.0, 0.0, 0.0], &[0.0, 0.4, 0.6]), 1.0);
    }

    #[test]
    fn degenerate_single_digit() {
        let report = conformance_report(&[3.0; 500], 1, 10, 0.0).unwrap();
        let three = &report.rows[2];
        assert_eq!(three.observed, 1.0);
        assert!(report.p_value < 1e-10);
        assert!(report.chi_square > 1000.0);
        let ones = conformance_report(&[1.0; 10], 1, 10, 0.0).unwrap();
        let p1 = benford_prob_first(1, 10).unwrap();
        assert!((ones.mad - (1.0 - p1 + (1.0 - p1)) / 9.0).abs() < 1e-12);
    }

    #[test]
    fn error_paths() {
        assert_eq!(
            conformance_report(&[], 1, 10, 0.0),
            Err(Error::EmptyHistogram)
        );
        assert_eq!(
            conformance_report(&[0.0, -1.0], 1, 10, 0.0),
            Err(Error::EmptyHistogram)
        );
        let h = hist_from_counts(&[3, 1]);
        let zero = DigitDistribution::from_probabilities(3, 1, vec![1.0, 0.0]).unwrap();
        assert_eq!(
            chi_square_stat(&h, &zero),
            Err(Error::ZeroExpected { index: 1 })
        );
        let unnormalized = DigitDistribution::from_probabilities(3, 1, vec![0.5, 0.4]).unwrap();
        assert!(matches!(
            mad_stat(&h, &unnormalized),
            Err(Error::ReferenceNotNormalized(_))
        ));
        let other = DigitDistribution::benford(10, 1).unwrap();
        assert_eq!(
            total_variation_stat(&h, &other),
            Err(Error::ReferenceMismatch)
        );
        // zero-probability categories are fine while unobserved
        let h = hist_from_counts(&[3, 0]);
        assert_eq!(chi_square_stat(&h, &zero).unwrap().statistic, 0.0);
    }

    #[test]
    fn log_uniform_data_passes_in_most_runs() {
        let mut passes = 0;
        for seed in 0..40 {
            let mut s = RandomStream::new(seed);
            let values: Vec<f64> = (0..50_000)
                .map(|_| libm::exp10(4.0 * s.uniform()))
                .collect();
            if conformance_report(&values, 1, 10, 0.0).unwrap().p_value > 0.001 {
                passes += 1;
            }
        }
        assert!(passes >= 39, "{passes}/40");
    }

    #[test]
    fn rescaling_keeps_conformance() {
        let mut passes = 0;
        let runs = 40;
        for seed in 0..runs {
            let mut s = RandomStream::new(1000 + seed);
            let c = libm::exp(10.0 * s.uniform() - 5.0);
            let values: Vec<f64> = (0..50_000)
                .map(|_| c * libm::exp10(5.0 * s.uniform()))
                .collect();
            if conformance_report(&values, 1, 10, 0.0)
                .unwrap()
                .passes(0.015, 0.001)
            {
                passes += 1;
            }
        }
        assert!(passes >= 39, "{passes}/{runs}");
    }

    proptest! {
        #[test]
        fn tv_is_four_and_a_half_mad(counts in prop::collection::vec(0u64..200, 9)) {
            prop_assume!(counts.iter().sum::<u64>() > 0);
            let h = hist_from_counts(&counts);
            let b = DigitDistribution::benford(10, 1).unwrap();
            let mad = mad_stat(&h, &b).unwrap();
            let tv = total_variation_stat(&h, &b).unwrap();
            prop_assert!((tv - 4.5 * mad).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&tv));
        }

        #[test]
        fn chi_square_permutation_invariant(
            counts in prop::collection::vec(0u64..200, 5),
            weights in prop::collection::vec(1u32..100, 5),
            rot in 0usize..5,
        ) {
            prop_assume!(counts.iter().sum::<u64>() > 0);
            let total: u32 = weights.iter().sum();
            let probs: Vec<f64> = weights.iter().map(|&w| f64::from(w) / f64::from(total)).collect();
            let mut pc = counts.clone();
            pc.rotate_left(rot);
            let mut pp = probs.clone();
            pp.rotate_left(rot);
            let a = chi_square_stat(
                &hist_from_counts(&counts),
                &DigitDistribution::from_probabilities(6, 1, probs).unwrap(),
            ).unwrap();
            let b = chi_square_stat(
                &hist_from_counts(&pc),
                &DigitDistribution::from_probabilities(6, 1, pp).unwrap(),
            ).unwrap();
            prop_assert!((a.statistic - b.statistic).abs() <= 1e-9 * a.statistic.max(1.0));
        }
    }
}
