//! Exact arithmetic kernel: profiles, exact counts and the combinatorial
//! primitives every counting method is built from.

use std::fmt;
use std::str::FromStr;
use std::sync::{LazyLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number with a positive, reduced denominator.
pub type Rational = BigRational;

/// An ordered list of block sizes `(n_1, ..., n_S)` or option counts
/// `(m_1, ..., m_S)`. Which one is meant is decided by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(Vec<u32>);

impl Profile {
    pub fn new(parts: Vec<u32>) -> Self {
        Profile(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    /// Number of players `S`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the parts.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&n| u64::from(n)).sum()
    }

    pub fn max_part(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Parts sorted in non-increasing order.
    pub fn canonical(&self) -> Profile {
        let mut parts = self.0.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Profile(parts)
    }

    /// `(m_1 - 1, ..., m_S - 1)`, the block sizes belonging to option counts.
    pub fn to_blocks(&self) -> Result<Profile> {
        if let Some(pos) = self.0.iter().position(|&m| m == 0) {
            return Err(Error::InvalidProfile(format!(
                "option count at position {} is zero; every player needs at least one option",
                pos + 1
            )));
        }
        Ok(Profile(self.0.iter().map(|&m| m - 1).collect()))
    }

    /// `(n_1 + 1, ..., n_S + 1)`.
    pub fn to_options(&self) -> Profile {
        Profile(self.0.iter().map(|&n| n + 1).collect())
    }

    /// Some part exceeds the sum of all the others.
    pub fn violates_balance(&self) -> bool {
        let total = self.total();
        self.0.iter().any(|&n| 2 * u64::from(n) > total)
    }
}

impl From<Vec<u32>> for Profile {
    fn from(parts: Vec<u32>) -> Self {
        Profile(parts)
    }
}

impl From<&[u32]> for Profile {
    fn from(parts: &[u32]) -> Self {
        Profile(parts.to_vec())
    }
}

impl<const K: usize> From<[u32; K]> for Profile {
    fn from(parts: [u32; K]) -> Self {
        Profile(parts.to_vec())
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl FromStr for Profile {
    type Err = Error;

    /// Parses `"2,2,2"`. The empty string is the empty profile.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Profile::default());
        }
        s.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad profile entry `{}`: {e}", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()
            .map(Profile)
    }
}

/// An exact non-negative count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactCount(BigUint);

impl ExactCount {
    pub fn new(value: BigUint) -> Self {
        ExactCount(value)
    }

    pub fn zero() -> Self {
        ExactCount(BigUint::zero())
    }

    pub fn one() -> Self {
        ExactCount(BigUint::one())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }

    /// Lossy conversion; `f64::INFINITY` once the value leaves `f64` range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Natural logarithm, accurate even when the value overflows `f64`.
    pub fn ln(&self) -> f64 {
        let bits = self.0.bits();
        if bits < 1000 {
            return self.to_f64().ln();
        }
        let shift = bits - 64;
        let top = (&self.0 >> shift).to_f64().unwrap_or(f64::NAN);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }

    /// Converts a signed exact value, rejecting negatives.
    pub fn try_from_bigint(value: BigInt) -> Option<Self> {
        value.to_biguint().map(ExactCount)
    }
}

impl fmt::Display for ExactCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<BigUint> for ExactCount {
    fn from(value: BigUint) -> Self {
        ExactCount(value)
    }
}

impl From<u64> for ExactCount {
    fn from(value: u64) -> Self {
        ExactCount(BigUint::from(value))
    }
}

impl PartialEq<u64> for ExactCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

static FACTORIALS: LazyLock<RwLock<Vec<BigUint>>> =
    LazyLock::new(|| RwLock::new(vec![BigUint::one()]));

/// `n!`, memoized in a table that grows on demand.
pub fn factorial(n: u32) -> BigUint {
    let n = n as usize;
    {
        let table = FACTORIALS.read().expect("factorial table poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().expect("factorial table poisoned");
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigUint::from(k);
        table.push(next);
    }
    table[n].clone()
}

/// `C(n, k)`, zero outside `0 <= k <= n`. Negative `n` yields zero.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    factorial(n as u32) / (factorial(k as u32) * factorial((n - k) as u32))
}

/// `(sum parts)! / prod(parts!)`.
pub fn multinomial(parts: &[u32]) -> BigUint {
    let total: u32 = parts.iter().sum();
    let denom = parts
        .iter()
        .fold(BigUint::one(), |acc, &p| acc * factorial(p));
    factorial(total) / denom
}

/// Rising factorial `x (x+1) ... (x+n-1)`.
pub fn pochhammer(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..n {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Generalized binomial `x (x-1) ... (x-k+1) / k!` for a rational top.
pub fn binomial_rational(x: &Rational, k: u32) -> Rational {
    let start = x - Rational::from_integer(BigInt::from(k)) + Rational::one();
    pochhammer(&start, k) / Rational::from_integer(BigInt::from(factorial(k)))
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_rational(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}
