//! Significant digits, Benford probabilities and digit histograms.
//!
//! Digit extraction is exact: the returned digits are those of the real
//! number held by the `f64` (times `base^exponent` for the scaled variant),
//! never of a rounded intermediate. A logarithm gives the decade estimate and
//! a fast floating-point path is accepted only when its error band cannot
//! straddle an integer boundary. Everything else is settled with exact
//! rational arithmetic, so values one ulp either side of a power of the base
//! land in the right decade.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

pub const MIN_BASE: u32 = 2;
pub const MAX_BASE: u32 = 36;

/// Largest number of digit categories a [`DigitHistogram`] or
/// [`DigitDistribution`] will allocate.
pub const MAX_CATEGORIES: u64 = 1 << 24;

const GLYPHS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

// Relative error budget of the log/exp fast path. The measured error is
// below 1e-12 for every finite f64 and base in range.
const FAST_PATH_BAND: f64 = 1e-11;
const F64_EXACT_INT: f64 = 9_007_199_254_740_992.0;

fn check_base(base: u32) -> Result<()> {
    if (MIN_BASE..=MAX_BASE).contains(&base) {
        Ok(())
    } else {
        Err(Error::InvalidBase(base))
    }
}

fn check_value(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveValue(x))
    }
}

/// Glyph used to print digit `d` (0-9 then a-z).
pub fn digit_glyph(d: u8) -> char {
    GLYPHS[d as usize] as char
}

/// The first `n` significant digits of a number in a given base.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitTuple {
    base: u32,
    digits: Vec<u8>,
}

impl DigitTuple {
    pub fn new(base: u32, digits: Vec<u8>) -> Result<Self> {
        check_base(base)?;
        if digits.is_empty() {
            return Err(Error::ZeroDigitCount);
        }
        if let Some(&d) = digits.iter().find(|&&d| u32::from(d) >= base) {
            return Err(Error::DigitOutOfRange {
                digit: d.into(),
                base,
            });
        }
        if digits[0] == 0 {
            return Err(Error::LeadingZero);
        }
        Ok(DigitTuple { base, digits })
    }

    /// Tuple whose digits spell the integer `index` (the `M` of the
    /// multi-digit Benford law), which must have exactly `n_digits` digits.
    pub fn from_index(base: u32, n_digits: usize, index: u64) -> Result<Self> {
        check_base(base)?;
        if n_digits == 0 {
            return Err(Error::ZeroDigitCount);
        }
        let mut digits = vec![0u8; n_digits];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % u64::from(base)) as u8;
            rest /= u64::from(base);
        }
        if rest != 0 {
            return Err(Error::param("index", "has more digits than requested"));
        }
        DigitTuple::new(base, digits)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Σ d_i · base^(N−i)`, or `None` if it does not fit in a `u64`.
    pub fn index(&self) -> Option<u64> {
        self.digits.iter().try_fold(0u64, |acc, &d| {
            acc.checked_mul(u64::from(self.base))?
                .checked_add(u64::from(d))
        })
    }

    /// The digits read as a mantissa in `[1, base)` (rounded to `f64`).
    pub fn mantissa(&self) -> f64 {
        self.scaled_integer(0.0)
    }

    /// Midpoint of the interval of mantissas that share these digits. Unlike
    /// [`mantissa`](Self::mantissa) it never rounds out of that interval, so
    /// `significant_digits(t.representative(), t.len(), t.base()) == t`.
    pub fn representative(&self) -> f64 {
        self.scaled_integer(0.5)
    }

    fn scaled_integer(&self, offset: f64) -> f64 {
        let b = f64::from(self.base);
        let m = self
            .digits
            .iter()
            .fold(0.0, |acc, &d| acc * b + f64::from(d));
        (m + offset) / libm::pow(b, (self.digits.len() - 1) as f64)
    }
}

impl fmt::Display for DigitTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            fmt::Write::write_char(f, digit_glyph(d))?;
        }
        Ok(())
    }
}

enum Leading {
    Small(u64),
    Big(BigUint),
}

/// `x = mantissa · 2^exp2` exactly.
fn decompose(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    }
}

/// `floor(x · base^exponent · base^(n−1−E))` where `E` is the exact decade
/// of `x · base^exponent`: the leading `n` digits as one integer.
fn leading_integer(x: f64, exponent: i32, n: usize, base: u32) -> Leading {
    let ln_b = libm::log(f64::from(base));
    let decade = libm::log(x) / ln_b + f64::from(exponent);
    let e = libm::floor(decade);
    let z = libm::exp((decade - e + (n - 1) as f64) * ln_b);
    let lower = libm::pow(f64::from(base), (n - 1) as f64);
    let upper = lower * f64::from(base);
    if upper <= F64_EXACT_INT {
        let lo = libm::floor(z * (1.0 - FAST_PATH_BAND));
        let hi = libm::floor(z * (1.0 + FAST_PATH_BAND));
        if lo == hi && lo >= lower && hi < upper {
            return Leading::Small(lo as u64);
        }
    }
    let exact = exact_leading(x, exponent, n, base, e as i64);
    match u64::try_from(&exact) {
        Ok(v) => Leading::Small(v),
        Err(_) => Leading::Big(exact),
    }
}

fn exact_leading(x: f64, exponent: i32, n: usize, base: u32, mut decade: i64) -> BigUint {
    let (mant, exp2) = decompose(x);
    let b = BigUint::from(base);
    let lower = b.pow((n - 1) as u32);
    let upper = &lower * &b;
    loop {
        let shift = i64::from(exponent) + (n as i64 - 1) - decade;
        let mut num = BigUint::from(mant);
        let mut den = BigUint::from(1u32);
        if exp2 >= 0 {
            num <<= exp2 as usize;
        } else {
            den <<= (-exp2) as usize;
        }
        if shift >= 0 {
            num *= b.pow(shift as u32);
        } else {
            den *= b.pow((-shift) as u32);
        }
        let lead = num / den;
        if lead >= upper {
            decade += 1;
        } else if lead < lower {
            decade -= 1;
        } else {
            return lead;
        }
    }
}

fn leading_digits(x: f64, exponent: i32, n: usize, base: u32) -> Vec<u8> {
    match leading_integer(x, exponent, n, base) {
        Leading::Small(mut v) => {
            let mut digits = vec![0u8; n];
            for slot in digits.iter_mut().rev() {
                *slot = (v % u64::from(base)) as u8;
                v /= u64::from(base);
            }
            digits
        }
        Leading::Big(v) => v.to_radix_be(base),
    }
}

/// The first `n` significant digits of `x` in `base`.
///
/// ```
/// # use digitlaw_core::significant_digits;
/// let t = significant_digits(458.2, 3, 10).unwrap();
/// assert_eq!(t.digits(), &[4, 5, 8]);
/// ```
pub fn significant_digits(x: f64, n: usize, base: u32) -> Result<DigitTuple> {
    significant_digits_scaled(x, 0, n, base)
}

/// The first `n` significant digits of the exact real number
/// `x · base^exponent`.
///
/// The product is never formed in floating point, so the result equals
/// `significant_digits(x, n, base)` for every `exponent`.
pub fn significant_digits_scaled(x: f64, exponent: i32, n: usize, base: u32) -> Result<DigitTuple> {
    check_base(base)?;
    check_value(x)?;
    if n == 0 {
        return Err(Error::ZeroDigitCount);
    }
    Ok(DigitTuple {
        base,
        digits: leading_digits(x, exponent, n, base),
    })
}

pub fn first_digit(x: f64, base: u32) -> Result<u32> {
    Ok(significant_digits(x, 1, base)?.digits[0].into())
}

fn benford_prob_of_index(index: f64, base: u32) -> f64 {
    libm::log1p(1.0 / index) / libm::log(f64::from(base))
}

/// `log_base(1 + 1/k)`.
pub fn benford_prob_first(k: u32, base: u32) -> Result<f64> {
    check_base(base)?;
    if k == 0 || k >= base {
        return Err(Error::DigitOutOfRange { digit: k, base });
    }
    Ok(benford_prob_of_index(f64::from(k), base))
}

/// `log_base(1 + 1/M)` with `M = Σ d_i · base^(N−i)`.
pub fn benford_prob_ndigits(digits: &DigitTuple) -> f64 {
    let b = f64::from(digits.base);
    let m = digits
        .digits
        .iter()
        .fold(0.0, |acc, &d| acc * b + f64::from(d));
    benford_prob_of_index(m, digits.base)
}

/// `(base^(n−1), number of n-digit tuples)`.
fn layout(base: u32, n_digits: usize) -> Result<(u64, usize)> {
    check_base(base)?;
    if n_digits == 0 {
        return Err(Error::ZeroDigitCount);
    }
    let too_many = Error::TooManyCategories { base, n_digits };
    let exp = u32::try_from(n_digits - 1).map_err(|_| too_many.clone())?;
    let lower = u64::from(base).checked_pow(exp).ok_or(too_many.clone())?;
    let count = lower
        .checked_mul(u64::from(base) - 1)
        .filter(|&c| c <= MAX_CATEGORIES)
        .ok_or(too_many)?;
    Ok((lower, count as usize))
}

/// Probability table over every `n_digits`-long digit tuple in `base`,
/// stored densely by `M − base^(n−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitDistribution {
    base: u32,
    n_digits: usize,
    offset: u64,
    probs: Vec<f64>,
}

impl DigitDistribution {
    /// The Benford law for leading `n_digits`-tuples.
    pub fn benford(base: u32, n_digits: usize) -> Result<Self> {
        let (offset, count) = layout(base, n_digits)?;
        let probs = (0..count as u64)
            .map(|i| benford_prob_of_index((offset + i) as f64, base))
            .collect();
        Ok(DigitDistribution {
            base,
            n_digits,
            offset,
            probs,
        })
    }

    /// Arbitrary reference over the same category layout. Probabilities must
    /// be finite and nonnegative; normalization is checked where they are used.
    pub fn from_probabilities(base: u32, n_digits: usize, probs: Vec<f64>) -> Result<Self> {
        let (offset, count) = layout(base, n_digits)?;
        if probs.len() != count {
            return Err(Error::ReferenceMismatch);
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::param("probs", "must be finite and nonnegative"));
        }
        Ok(DigitDistribution {
            base,
            n_digits,
            offset,
            probs,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn n_digits(&self) -> usize {
        self.n_digits
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Digit tuple of category `i`.
    pub fn tuple(&self, i: usize) -> DigitTuple {
        DigitTuple::from_index(self.base, self.n_digits, self.offset + i as u64)
            .expect("category index within layout")
    }

    pub fn prob(&self, digits: &DigitTuple) -> Option<f64> {
        if digits.base != self.base || digits.len() != self.n_digits {
            return None;
        }
        let i = digits.index()?.checked_sub(self.offset)?;
        self.probs.get(i as usize).copied()
    }
}

/// Counts of leading-digit tuples, plus how many inputs were excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitHistogram {
    base: u32,
    n_digits: usize,
    threshold: f64,
    offset: u64,
    counts: Vec<u64>,
    total_included: u64,
    total_excluded: u64,
}

impl DigitHistogram {
    /// Empty histogram. Values `<= threshold` (and non-finite ones) are
    /// excluded; `threshold` must be finite and nonnegative.
    pub fn new(base: u32, n_digits: usize, threshold: f64) -> Result<Self> {
        let (offset, count) = layout(base, n_digits)?;
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::param("threshold", "must be finite and nonnegative"));
        }
        Ok(DigitHistogram {
            base,
            n_digits,
            threshold,
            offset,
            counts: vec![0; count],
            total_included: 0,
            total_excluded: 0,
        })
    }

    pub fn push(&mut self, x: f64) {
        if !x.is_finite() || x <= self.threshold {
            self.total_excluded += 1;
            return;
        }
        let lead = match leading_integer(x, 0, self.n_digits, self.base) {
            Leading::Small(v) => v,
            Leading::Big(_) => unreachable!("layout bounds base^n below u64::MAX"),
        };
        self.counts[(lead - self.offset) as usize] += 1;
        self.total_included += 1;
    }

    pub fn extend<I: IntoIterator<Item = f64>>(&mut self, values: I) {
        for x in values {
            self.push(x);
        }
    }

    /// Entrywise sum of two histograms with the same layout.
    pub fn merge(&mut self, other: &DigitHistogram) -> Result<()> {
        if self.base != other.base
            || self.n_digits != other.n_digits
            || self.threshold.to_bits() != other.threshold.to_bits()
        {
            return Err(Error::ReferenceMismatch);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total_included += other.total_included;
        self.total_excluded += other.total_excluded;
        Ok(())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn n_digits(&self) -> usize {
        self.n_digits
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn total_included(&self) -> u64 {
        self.total_included
    }

    pub fn total_excluded(&self) -> u64 {
        self.total_excluded
    }

    /// Number of digit categories (all tuples, observed or not).
    pub fn categories(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn tuple(&self, i: usize) -> DigitTuple {
        DigitTuple::from_index(self.base, self.n_digits, self.offset + i as u64)
            .expect("category index within layout")
    }

    pub fn count(&self, digits: &DigitTuple) -> u64 {
        if digits.base != self.base || digits.len() != self.n_digits {
            return 0;
        }
        digits
            .index()
            .and_then(|m| m.checked_sub(self.offset))
            .and_then(|i| self.counts.get(i as usize).copied())
            .unwrap_or(0)
    }

    pub fn fraction(&self, digits: &DigitTuple) -> Option<f64> {
        (self.total_included > 0).then(|| self.count(digits) as f64 / self.total_included as f64)
    }

    /// Per-category fractions; empty when nothing was included.
    pub fn fractions(&self) -> Vec<f64> {
        if self.total_included == 0 {
            return Vec::new();
        }
        let total = self.total_included as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// `(tuple, count)` for every category with a nonzero count.
    pub fn nonzero(&self) -> impl Iterator<Item = (DigitTuple, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.tuple(i), c))
    }

    pub(crate) fn same_layout(&self, reference: &DigitDistribution) -> bool {
        self.base == reference.base && self.n_digits == reference.n_digits
    }
}

pub fn digit_histogram(
    values: &[f64],
    n: usize,
    base: u32,
    threshold: f64,
) -> Result<DigitHistogram> {
    let mut hist = DigitHistogram::new(base, n, threshold)?;
    hist.extend(values.iter().copied());
    Ok(hist)
}
