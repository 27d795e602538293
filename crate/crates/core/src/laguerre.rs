//! Block-derangement counts as Laguerre linearization coefficients.
//!
//! `E(n_1, ..., n_S) = (-1)^N * integral_0^inf L_{n_1}(z) ... L_{n_S}(z) e^{-z} dz`,
//! evaluated exactly using `integral z^k e^{-z} dz = k!`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{binomial, factorial, ExactCount, Profile, Rational};

/// Univariate polynomial in `z` with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn one() -> Self {
        UniPoly::new(vec![Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return UniPoly::new(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

/// `L_n(z) = sum_k C(n,k) (-1)^k z^k / k!`.
pub fn laguerre_poly(n: u32) -> UniPoly {
    let coeffs = (0..=n)
        .map(|k| {
            let num = BigInt::from(binomial(i64::from(n), i64::from(k)));
            let num = if k % 2 == 1 { -num } else { num };
            Rational::new(num, BigInt::from(factorial(k)))
        })
        .collect();
    UniPoly::new(coeffs)
}

/// `integral_0^inf p(z) e^{-z} dz`.
pub fn exp_weight_integral(p: &UniPoly) -> Rational {
    p.coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * Rational::from_integer(BigInt::from(factorial(k as u32))))
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// Product of the given polynomials, always multiplying the two of smallest
/// degree next.
fn product_smallest_first(polys: Vec<UniPoly>) -> UniPoly {
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    let mut slots: Vec<Option<UniPoly>> = Vec::with_capacity(polys.len());
    for p in polys {
        heap.push(Reverse((p.degree().unwrap_or(0), slots.len())));
        slots.push(Some(p));
    }
    while heap.len() > 1 {
        let Reverse((_, a)) = heap.pop().unwrap();
        let Reverse((_, b)) = heap.pop().unwrap();
        let pa = slots[a].take().unwrap();
        let pb = slots[b].take().unwrap();
        let prod = &pa * &pb;
        heap.push(Reverse((prod.degree().unwrap_or(0), slots.len())));
        slots.push(Some(prod));
    }
    match heap.pop() {
        Some(Reverse((_, idx))) => slots[idx].take().unwrap(),
        None => UniPoly::one(),
    }
}

/// `C^{(k)}_{n_1..n_T} = integral L_k L_{n_1} ... L_{n_T} e^{-z} dz`.
pub fn linearization_coefficient(k: u32, ns: &[u32]) -> Rational {
    let polys = std::iter::once(k)
        .chain(ns.iter().copied())
        .map(laguerre_poly)
        .collect();
    exp_weight_integral(&product_smallest_first(polys))
}

pub fn e_by_laguerre(profile: &Profile) -> Result<ExactCount> {
    let polys = profile.parts().iter().map(|&n| laguerre_poly(n)).collect();
    let integral = exp_weight_integral(&product_smallest_first(polys));
    let signed = if profile.total() % 2 == 1 {
        -integral
    } else {
        integral
    };
    if !signed.is_integer() || signed.is_negative() {
        return Err(Error::InternalInconsistency(format!(
            "signed Laguerre integral for ({profile}) is {signed}, expected a non-negative integer"
        )));
    }
    Ok(ExactCount::try_from_bigint(signed.to_integer()).expect("checked non-negative"))
}
