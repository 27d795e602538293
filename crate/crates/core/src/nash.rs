//! Maximal TMNE counts and the all-equilibria bound `B`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{
    binomial, factorial, int_rational, multinomial, rational, ExactCount, Profile, Rational,
};
use crate::method::{e, Method};
use crate::poly::SparsePoly;
use crate::recurrences::RecurrenceTable;

/// Calls `f` on every point of the box `0 <= k_j <= bound_j`, last coordinate fastest.
fn for_each_in_box(bound: &[u32], mut f: impl FnMut(&[u32])) {
    let mut k = vec![0u32; bound.len()];
    loop {
        f(&k);
        let mut i = k.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if k[i] < bound[i] {
                k[i] += 1;
                break;
            }
            k[i] = 0;
        }
    }
}

/// Largest possible number of totally mixed equilibria for the option counts.
pub fn tmne_max(options: &Profile) -> Result<ExactCount> {
    tmne_max_with(options, Method::Auto)
}

pub fn tmne_max_with(options: &Profile, method: Method) -> Result<ExactCount> {
    e(&options.to_blocks()?, method)
}

/// `B` extended by zero: any zero part gives 0.
pub fn b_extended(parts: &[u32]) -> BigUint {
    if parts.contains(&0) {
        return BigUint::zero();
    }
    let below: Vec<u32> = parts.iter().map(|m| m - 1).collect();
    let mut sum = BigUint::zero();
    for_each_in_box(&below, |l| sum += multinomial(l));
    sum
}

/// `B(m) = sum over l_j < m_j of multinomial(l)`.
pub fn b_bound(options: &Profile) -> Result<ExactCount> {
    options.to_blocks()?;
    Ok(ExactCount::new(b_extended(options.parts())))
}

/// Sum over subgame supports of binomial weights times maximal TMNE counts.
pub fn b_bound_by_subgames(options: &Profile) -> Result<ExactCount> {
    subgame_sum(options, false)
}

/// The subgame sum with one factor `C(m_j, 1)` per support replaced by 1.
pub fn b_bound_refined(options: &Profile) -> Result<ExactCount> {
    subgame_sum(options, true)
}

fn subgame_sum(options: &Profile, refined: bool) -> Result<ExactCount> {
    let blocks = options.to_blocks()?;
    let table = RecurrenceTable::shared();
    let m = options.parts();
    let mut sum = BigUint::zero();
    // k_j - 1 ranges over the blocks box
    for_each_in_box(blocks.parts(), |km1| {
        let sub = Profile::from(km1);
        let value = table.get(&sub);
        if value.value().is_zero() {
            return;
        }
        let mut weight = BigUint::one();
        let mut replaced = false;
        for (&kj, &mj) in km1.iter().zip(m) {
            if refined && !replaced && kj == 0 {
                replaced = true;
                continue;
            }
            weight *= binomial(i64::from(mj), i64::from(kj) + 1);
        }
        sum += weight * value.value();
    });
    Ok(ExactCount::new(sum))
}

/// Coefficient of `x^m` in `x_1...x_S / ((1-x_1)...(1-x_S)(1 - x_1 - ... - x_S))`.
pub fn b_bound_by_series(options: &Profile) -> Result<ExactCount> {
    options.to_blocks()?;
    let bound = options.parts();
    let s = bound.len();
    let ones = vec![1i64; s];
    let sigma1 = SparsePoly::linear_form(&ones);
    let depth: u32 = bound.iter().sum();
    let mut series = SparsePoly::zero(s);
    let mut power = SparsePoly::monomial(vec![1; s], BigInt::one()).truncate(bound);
    for _ in 0..=depth {
        if power.is_zero() {
            break;
        }
        series = &series + &power;
        power = power.mul_truncated(&sigma1, bound);
    }
    for (j, &mj) in bound.iter().enumerate() {
        let mut geometric = SparsePoly::zero(s);
        for i in 0..=mj {
            let mut exps = vec![0; s];
            exps[j] = i;
            geometric = &geometric + &SparsePoly::monomial(exps, BigInt::one());
        }
        series = series.mul_truncated(&geometric, bound);
    }
    let c = series.coeff(bound);
    ExactCount::try_from_bigint(c)
        .ok_or_else(|| Error::InternalInconsistency("negative series coefficient".into()))
}

/// `sum_{k <= n} prod C(n_j, k_j) E(k) - multinomial(n)`; zero for every profile.
pub fn check_sms_identity(profile: &Profile) -> BigInt {
    let table = RecurrenceTable::shared();
    let n = profile.parts();
    let mut sum = BigUint::zero();
    for_each_in_box(n, |k| {
        let value = table.get(&Profile::from(k));
        if value.value().is_zero() {
            return;
        }
        let weight: BigUint = k
            .iter()
            .zip(n)
            .map(|(&kj, &nj)| binomial(i64::from(nj), i64::from(kj)))
            .product();
        sum += weight * value.value();
    });
    BigInt::from(sum) - BigInt::from(multinomial(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BRecurrence {
    SumRec,
    McRec,
    Brec1,
    Brec2,
    Brec3,
    DiagPair,
    /// `B(a+1,b+1,c+1) + B(a,b,c)` in closed form; generalizes `DiagPair`.
    Brec4,
}

impl BRecurrence {
    pub const ALL: [BRecurrence; 7] = [
        BRecurrence::SumRec,
        BRecurrence::McRec,
        BRecurrence::Brec1,
        BRecurrence::Brec2,
        BRecurrence::Brec3,
        BRecurrence::DiagPair,
        BRecurrence::Brec4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BRecurrence::SumRec => "sum_rec",
            BRecurrence::McRec => "mcrec",
            BRecurrence::Brec1 => "brec1",
            BRecurrence::Brec2 => "brec2",
            BRecurrence::Brec3 => "brec3",
            BRecurrence::DiagPair => "diag_pair",
            BRecurrence::Brec4 => "brec4",
        }
    }
}

impl fmt::Display for BRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BRecurrence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BRecurrence::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown B recurrence `{s}`")))
    }
}

fn br(parts: &[u32]) -> Rational {
    Rational::from_integer(BigInt::from(b_extended(parts)))
}

fn fr(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(factorial(n)))
}

/// `(7k+2)/(2k+1) * (3k)!/(k!)^3`.
fn diag_term(k: u32) -> Rational {
    let f = fr(k);
    rational(7 * i64::from(k) + 2, 2 * i64::from(k) + 1) * fr(3 * k) / (&f * &f * &f)
}

fn triple(options: &Profile, which: BRecurrence) -> Result<(u32, u32, u32)> {
    match options.parts() {
        &[a, b, c] => Ok((a, b, c)),
        p => Err(Error::OutOfRange(format!(
            "{which} needs 3 parts, got {}",
            p.len()
        ))),
    }
}

fn diagonal(options: &Profile, which: BRecurrence) -> Result<u32> {
    let (a, b, c) = triple(options, which)?;
    if a != b || b != c {
        return Err(Error::OutOfRange(format!(
            "{which} needs equal parts, got ({options})"
        )));
    }
    Ok(a)
}

/// Signed residual of one of the B identities at the given arguments.
pub fn check_b_recurrence(options: &Profile, which: BRecurrence) -> Result<Rational> {
    let m = options.parts();
    Ok(match which {
        BRecurrence::SumRec => {
            if m.is_empty() || m.contains(&0) {
                return Err(Error::OutOfRange(format!(
                    "sum_rec needs positive parts, got ({options})"
                )));
            }
            let mut rhs = Rational::one();
            for j in 0..m.len() {
                let mut lower = m.to_vec();
                lower[j] -= 1;
                rhs += br(&lower);
            }
            br(m) - rhs
        }
        BRecurrence::McRec => {
            let mut sum = BigInt::zero();
            for_each_in_box(m, |k| {
                let short = k.iter().zip(m).filter(|(kj, mj)| kj < mj).count() as i64;
                sum += BigInt::from(1 - short) * BigInt::from(multinomial(k));
            });
            Rational::from_integer(sum - 1)
        }
        BRecurrence::Brec1 => {
            let (a, b, c) = triple(options, which)?;
            if c == 0 {
                return Err(Error::OutOfRange("brec1 needs c > 0".into()));
            }
            let (ia, ib, ic) = (i64::from(a), i64::from(b), i64::from(c));
            let rhs = int_rational(ia * ib * (ia + ib + 2 * ic)) * fr(a + b + c - 1)
                / (int_rational((ia + ic) * (ib + ic)) * fr(a) * fr(b) * fr(c));
            br(&[a, b, c + 1]) - br(&[a, b, c - 1]) - rhs
        }
        BRecurrence::Brec2 => {
            let (a, b, c) = triple(options, which)?;
            if c == 0 {
                return Err(Error::OutOfRange("brec2 needs c > 0".into()));
            }
            let rhs = fr(a + b + c)
                / (int_rational(i64::from(a + b + 1)) * fr(a) * fr(b) * fr(c - 1))
                - Rational::one();
            br(&[a + 1, b + 1, c - 1]) + br(&[a, b, c]) - rhs
        }
        BRecurrence::Brec3 => {
            let a = diagonal(options, which)?;
            let odd = Rational::from_integer(BigInt::from(a % 2));
            let rhs = (0..a)
                .map(|k| {
                    let t = diag_term(k);
                    if (a - k - 1) % 2 == 1 {
                        -t
                    } else {
                        t
                    }
                })
                .fold(Rational::zero(), |acc, t| acc + t);
            br(&[a, a, a]) + odd - rhs
        }
        BRecurrence::DiagPair => {
            let a = diagonal(options, which)?;
            br(&[a + 1, a + 1, a + 1]) + br(&[a, a, a]) - (diag_term(a) - Rational::one())
        }
        BRecurrence::Brec4 => {
            let (a, b, c) = triple(options, which)?;
            let s = i64::from(a + b + c);
            let (ia, ib, ic) = (i64::from(a), i64::from(b), i64::from(c));
            let rhs = int_rational((s + 1) * (s + 1) * (s + 2) + ia * ib * ic)
                / int_rational((ia + ib + 1) * (ia + ic + 1) * (ib + ic + 1))
                * fr(a + b + c)
                / (fr(a) * fr(b) * fr(c))
                - Rational::one();
            br(&[a + 1, b + 1, c + 1]) + br(&[a, b, c]) - rhs
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Profile {
        Profile::from(v)
    }

    #[test]
    fn tmne_examples() {
        assert_eq!(tmne_max(&p(&[2, 2, 2, 2, 2])).unwrap(), 44u64);
        assert_eq!(tmne_max(&p(&[2, 2])).unwrap(), 1u64);
        assert_eq!(tmne_max(&p(&[4, 4, 4])).unwrap(), 56u64);
        assert!(matches!(
            tmne_max(&p(&[2, 0])),
            Err(Error::InvalidProfile(_))
        ));
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_bound(&p(&[2, 2, 2])).unwrap(), 16u64);
        assert_eq!(b_bound(&p(&[1, 1, 1, 1])).unwrap(), 1u64);
        assert_eq!(b_bound(&p(&[3, 3])).unwrap(), 19u64);
        assert_eq!(b_bound_by_subgames(&p(&[2, 2])).unwrap(), 5u64);
        assert_eq!(b_bound_by_subgames(&p(&[2, 2, 2])).unwrap(), 16u64);
        assert_eq!(b_bound_by_series(&p(&[1, 1])).unwrap(), 1u64);
        assert_eq!(b_bound_by_series(&p(&[2, 2])).unwrap(), 5u64);
        assert_eq!(b_bound_by_series(&p(&[2, 2, 2])).unwrap(), 16u64);
        assert_eq!(b_bound_refined(&p(&[2, 2, 2])).unwrap(), 9u64);
        assert_eq!(
            b_bound_by_subgames(&p(&[1, 2, 3])).unwrap(),
            b_bound(&p(&[1, 2, 3])).unwrap()
        );
        assert!(b_bound(&p(&[0, 2])).is_err());
    }

    #[test]
    fn sms_examples() {
        for v in [&[1, 1, 1][..], &[0, 0, 0], &[2, 2, 2], &[]] {
            assert!(check_sms_identity(&p(v)).is_zero(), "{v:?}");
        }
    }

    #[test]
    fn b_recurrence_examples() {
        let zero =
            |v: &[u32], r| assert!(check_b_recurrence(&p(v), r).unwrap().is_zero(), "{r} {v:?}");
        zero(&[2, 2, 2], BRecurrence::SumRec);
        zero(&[1, 1, 1], BRecurrence::DiagPair);
        zero(&[2, 2, 2], BRecurrence::Brec3);
        zero(&[0, 0, 0], BRecurrence::Brec3);
        zero(&[3, 1, 2], BRecurrence::Brec1);
        zero(&[3, 1, 2], BRecurrence::Brec2);
        zero(&[3, 1, 2], BRecurrence::Brec4);
        zero(&[2, 3], BRecurrence::McRec);
        assert!(matches!(
            check_b_recurrence(&p(&[1, 1, 0]), BRecurrence::Brec1),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            check_b_recurrence(&p(&[1, 2, 1]), BRecurrence::Brec3),
            Err(Error::OutOfRange(_))
        ));
    }
}
