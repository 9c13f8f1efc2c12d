//! Exact counting: Catalan numbers, instance totals and dihedral class counts.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::triangulation::{enumerate_triangulations, DihedralElement};

/// An exact non-negative integer count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactCount(BigUint);

impl ExactCount {
    pub fn zero() -> Self {
        ExactCount(BigUint::zero())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    /// Lossy conversion, for plotting and fitting.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.0.to_u128()
    }

    /// Natural logarithm, accurate even when the value exceeds the f64 range.
    pub fn ln(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.0.bits();
        if bits <= 1000 {
            return self.to_f64().ln();
        }
        let shift = bits - 64;
        let top = (&self.0 >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<u64> for ExactCount {
    fn from(v: u64) -> Self {
        ExactCount(BigUint::from(v))
    }
}

impl From<u128> for ExactCount {
    fn from(v: u128) -> Self {
        ExactCount(BigUint::from(v))
    }
}

impl From<BigUint> for ExactCount {
    fn from(v: BigUint) -> Self {
        ExactCount(v)
    }
}

impl std::str::FromStr for ExactCount {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<BigUint>().map(ExactCount)
    }
}

impl fmt::Display for ExactCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add for &ExactCount {
    type Output = ExactCount;
    fn add(self, rhs: &ExactCount) -> ExactCount {
        ExactCount(&self.0 + &rhs.0)
    }
}

impl Mul for &ExactCount {
    type Output = ExactCount;
    fn mul(self, rhs: &ExactCount) -> ExactCount {
        ExactCount(&self.0 * &rhs.0)
    }
}

// Counts travel through CSV and JSON as decimal strings of digits.
impl Serialize for ExactCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ExactCount {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CombinatoricsError {
    #[error("asymptotic Catalan estimate overflows f64 at n = {0}")]
    Overflow(u32),
    #[error("size must be at least 1")]
    ZeroSize,
}

/// `C_n = (2n)! / (n! (n+1)!)`, computed exactly.
pub fn catalan(n: u32) -> ExactCount {
    let mut c = BigUint::from(1u32);
    for k in 0..n as u64 {
        // C_{k+1} = C_k (4k + 2) / (k + 2); the division is exact.
        c = c * BigUint::from(4 * k + 2) / BigUint::from(k + 2);
    }
    ExactCount(c)
}

/// Number of ordered tree pairs of size `n`, i.e. `C_n^2`.
pub fn count_instances(n: u32) -> ExactCount {
    let c = catalan(n);
    &c * &c
}

/// `4^n / (n^{3/2} sqrt(pi))`.
pub fn catalan_asymptotic(n: u32) -> Result<f64, CombinatoricsError> {
    if n == 0 {
        return Err(CombinatoricsError::ZeroSize);
    }
    let nf = f64::from(n);
    let log = nf * 4f64.ln() - 1.5 * nf.ln() - 0.5 * std::f64::consts::PI.ln();
    let value = log.exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CombinatoricsError::Overflow(n))
    }
}

/// Number of triangulations of the (n+2)-gon up to rotation and reflection.
///
/// Computed by Burnside's lemma: the number of orbits is the mean, over all
/// `2n + 4` group elements, of the number of triangulations each one fixes.
pub fn dihedral_class_count(n: u32) -> ExactCount {
    if n == 0 {
        return ExactCount::from(1u64);
    }
    let m = n + 2;
    let group: Vec<DihedralElement> = DihedralElement::all(m).collect();
    let mut fixed_total: u128 = 0;
    for tri in enumerate_triangulations(n) {
        fixed_total += group.iter().filter(|&&g| tri.apply_dihedral(g) == tri).count() as u128;
    }
    let order = group.len() as u128;
    debug_assert_eq!(fixed_total % order, 0);
    ExactCount::from(fixed_total / order)
}
