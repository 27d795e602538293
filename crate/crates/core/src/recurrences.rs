//! `E` by dynamic programming over linear recurrences, and residual
//! checkers for the known three-, five-, six- and `(S+1)`-term relations.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{ExactCount, Profile};

/// Memo of `E` keyed by canonical profile (sorted descending, zeros dropped).
///
/// The value for each key is computed with the relation
/// `(n_1+1) E(n_1+1) = sum_{j>=2} n_j E(n_j-1) + (n_2+...+n_S - n_1) E`
/// applied to the largest coordinate.
#[derive(Debug, Default)]
pub struct RecurrenceTable {
    memo: Mutex<HashMap<Vec<u32>, BigUint>>,
}

static SHARED: LazyLock<RecurrenceTable> = LazyLock::new(RecurrenceTable::default);

impl RecurrenceTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide table shared by every caller of [`e_by_recurrence`].
    pub fn shared() -> &'static RecurrenceTable {
        &SHARED
    }

    pub fn len(&self) -> usize {
        self.memo.lock().expect("memo poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, profile: &Profile) -> ExactCount {
        ExactCount::new(self.value(canonical_key(profile.parts())))
    }

    fn value(&self, key: Vec<u32>) -> BigUint {
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(&key) {
            return v.clone();
        }
        let v = self.compute(&key);
        self.memo
            .lock()
            .expect("memo poisoned")
            .entry(key)
            .or_insert(v)
            .clone()
    }

    fn compute(&self, key: &[u32]) -> BigUint {
        let Some((&top, rest)) = key.split_first() else {
            return BigUint::one();
        };
        let rest_sum: u64 = rest.iter().map(|&n| u64::from(n)).sum();
        if u64::from(top) > rest_sum {
            return BigUint::zero();
        }
        if rest.len() == 1 {
            // top == rest[0] here
            return BigUint::one();
        }

        // lower the largest coordinate by one
        let lowered = top - 1;
        let mut acc = BigUint::zero();
        let mut below = key.to_vec();
        below[0] = lowered;
        for j in 1..key.len() {
            if key[j] == 0 {
                continue;
            }
            let mut shifted = below.clone();
            shifted[j] -= 1;
            acc += self.value(canonical_key(&shifted)) * key[j];
        }
        let same = rest_sum - u64::from(lowered);
        acc += self.value(canonical_key(&below)) * same;
        let (q, r) = acc.div_rem(&BigUint::from(top));
        assert!(
            r.is_zero(),
            "recurrence division left a remainder at {key:?}"
        );
        q
    }
}

fn canonical_key(parts: &[u32]) -> Vec<u32> {
    let mut k: Vec<u32> = parts.iter().copied().filter(|&n| n > 0).collect();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

pub fn e_by_recurrence(profile: &Profile) -> ExactCount {
    RecurrenceTable::shared().get(profile)
}

/// A signed linear combination `sum c_i E(args_i)` whose value should be zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Combination {
    terms: Vec<(BigInt, Vec<i64>)>,
}

impl Combination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, coeff: impl Into<BigInt>, args: Vec<i64>) -> Self {
        self.terms.push((coeff.into(), args));
        self
    }

    pub fn terms(&self) -> &[(BigInt, Vec<i64>)] {
        &self.terms
    }

    /// Terms whose coefficient vanishes are skipped, so `0 * E(-1, ...)` is
    /// accepted; a negative argument under a nonzero coefficient is refused.
    pub fn evaluate_with<F>(&self, mut e: F) -> Result<BigInt>
    where
        F: FnMut(&Profile) -> ExactCount,
    {
        let mut total = BigInt::zero();
        for (coeff, args) in &self.terms {
            if coeff.is_zero() {
                continue;
            }
            if let Some(bad) = args.iter().find(|&&a| a < 0) {
                return Err(Error::Precondition(format!(
                    "E evaluated at negative argument {bad} in {args:?} with coefficient {coeff}"
                )));
            }
            let p = Profile::new(args.iter().map(|&a| a as u32).collect());
            total += coeff * e(&p).to_bigint();
        }
        Ok(total)
    }

    pub fn evaluate(&self) -> Result<BigInt> {
        self.evaluate_with(e_by_recurrence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rec3 {
    A,
    B,
    C,
    D,
}

impl Rec3 {
    pub const ALL: [Rec3; 4] = [Rec3::A, Rec3::B, Rec3::C, Rec3::D];

    pub fn name(self) -> &'static str {
        match self {
            Rec3::A => "rec3a",
            Rec3::B => "rec3b",
            Rec3::C => "rec3c",
            Rec3::D => "rec3d",
        }
    }
}

/// The three-term relations among `E(a, b, c)` values.
pub fn rec3_combination(a: u32, b: u32, c: u32, which: Rec3) -> Combination {
    let (a, b, c) = (i64::from(a), i64::from(b), i64::from(c));
    match which {
        Rec3::A => Combination::new()
            .term(2 * (a - b), vec![a, b, c])
            .term(a - b + c + 1, vec![a + 1, b, c])
            .term(a - b - c - 1, vec![a, b + 1, c]),
        Rec3::B => Combination::new()
            .term(2 * a, vec![a - 1, b, c])
            .term(a - b + c, vec![a, b, c])
            .term(c - a - b - 1, vec![a, b + 1, c]),
        Rec3::C => Combination::new()
            .term((a - b) * (a + b - c), vec![a, b, c])
            .term(a * (a - b - c - 1), vec![a - 1, b, c])
            .term(b * (a - b + c + 1), vec![a, b - 1, c]),
        Rec3::D => Combination::new()
            .term((a - b + c + 1) * (a + b - c + 1), vec![a + 1, b, c])
            .term(
                3 * a * a + a - (2 * a + 1) * (b + c) - (b - c) * (b - c),
                vec![a, b, c],
            )
            .term(2 * a * (a - b - c - 1), vec![a - 1, b, c]),
    }
}

pub fn check_rec3(a: u32, b: u32, c: u32, which: Rec3) -> Result<BigInt> {
    rec3_combination(a, b, c, which).evaluate()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gillis {
    /// `E(1,a,b,...) = (a+1)E(a+1,b,...) + 2a E(a,b,...) + a E(a-1,b,...)`
    FourArg,
    /// `2(b-a)E(a,b,...) = (a+1)E(a+1,...) + aE(a-1,...) - (b+1)E(a,b+1,...) - bE(a,b-1,...)`
    FiveTerm,
}

impl Gillis {
    pub fn name(self) -> &'static str {
        match self {
            Gillis::FourArg => "gillis-4arg",
            Gillis::FiveTerm => "gillis-5term",
        }
    }
}

/// The trailing arguments `rest` may be any sequence.
pub fn gillis_combination(a: u32, b: u32, rest: &[u32], which: Gillis) -> Combination {
    let (a, b) = (i64::from(a), i64::from(b));
    let with = |head: &[i64]| -> Vec<i64> {
        head.iter()
            .copied()
            .chain(rest.iter().map(|&r| i64::from(r)))
            .collect()
    };
    match which {
        Gillis::FourArg => Combination::new()
            .term(1, with(&[1, a, b]))
            .term(-(a + 1), with(&[a + 1, b]))
            .term(-2 * a, with(&[a, b]))
            .term(-a, with(&[a - 1, b])),
        Gillis::FiveTerm => Combination::new()
            .term(2 * (b - a), with(&[a, b]))
            .term(-(a + 1), with(&[a + 1, b]))
            .term(-a, with(&[a - 1, b]))
            .term(b + 1, with(&[a, b + 1]))
            .term(b, with(&[a, b - 1])),
    }
}

pub fn check_gillis(a: u32, b: u32, c: u32, which: Gillis) -> Result<BigInt> {
    gillis_combination(a, b, &[c], which).evaluate()
}

fn shifted(profile: &[i64], idx: usize, delta: i64) -> Vec<i64> {
    let mut v = profile.to_vec();
    v[idx] += delta;
    v
}

fn check_indices(profile: &Profile, idx: &[usize]) -> Result<()> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= profile.len()) {
        return Err(Error::OutOfRange(format!(
            "coordinate {bad} outside a profile of length {}",
            profile.len()
        )));
    }
    Ok(())
}

/// Five-term relation between coordinates `i` and `j`:
/// `2(n_j - n_i)E = (n_i+1)E(n_i+1) + n_i E(n_i-1) - (n_j+1)E(n_j+1) - n_j E(n_j-1)`.
pub fn rec5_combination(profile: &Profile, i: usize, j: usize) -> Result<Combination> {
    check_indices(profile, &[i, j])?;
    if i == j {
        return Err(Error::Precondition("coordinates must differ".into()));
    }
    let p: Vec<i64> = profile.parts().iter().map(|&n| i64::from(n)).collect();
    let (ni, nj) = (p[i], p[j]);
    Ok(Combination::new()
        .term(2 * (nj - ni), p.clone())
        .term(-(ni + 1), shifted(&p, i, 1))
        .term(-ni, shifted(&p, i, -1))
        .term(nj + 1, shifted(&p, j, 1))
        .term(nj, shifted(&p, j, -1)))
}

pub fn check_rec5(profile: &Profile, i: usize, j: usize) -> Result<BigInt> {
    rec5_combination(profile, i, j)?.evaluate()
}

/// `(S+1)`-term relation at coordinate `i`:
/// `(n_i+1)E(n_i+1) = sum_{k != i} n_k E(n_k-1) + (sum_{k != i} n_k - n_i) E`.
pub fn rec5_sum_combination(profile: &Profile, i: usize) -> Result<Combination> {
    check_indices(profile, &[i])?;
    let p: Vec<i64> = profile.parts().iter().map(|&n| i64::from(n)).collect();
    let others: i64 = p.iter().sum::<i64>() - p[i];
    let mut comb = Combination::new().term(p[i] + 1, shifted(&p, i, 1));
    for k in (0..p.len()).filter(|&k| k != i) {
        comb = comb.term(-p[k], shifted(&p, k, -1));
    }
    Ok(comb.term(-(others - p[i]), p))
}

pub fn check_rec5_sum(profile: &Profile, i: usize) -> Result<BigInt> {
    rec5_sum_combination(profile, i)?.evaluate()
}

/// Six-term relation among four-player values with shifts in `a` and `b` only.
pub fn sixterm_s4_combination(a: u32, b: u32, c: u32, d: u32) -> Combination {
    let (a, b, c, d) = (i64::from(a), i64::from(b), i64::from(c), i64::from(d));
    let cd = c + d + 2;
    let diff2 = (c - d) * (c - d);
    Combination::new()
        .term(
            (a - b) * (a * a + 2 * a * b - b * b + 4 * a + 2 - diff2) - 2 * (b + 1) * (b + 1) * cd,
            vec![a + 1, b + 1, c, d],
        )
        .term(
            (a + 1) * ((a - b) * (3 * a + 5 * b + 7) - (2 * a + 2 * b + 3) * cd - diff2),
            vec![a, b + 1, c, d],
        )
        .term(
            2 * a * (a + 1) * (a - b - c - d - 2),
            vec![a - 1, b + 1, c, d],
        )
        .term(
            2 * (b + 1) * (a + 2) * (a - b + c + d + 2),
            vec![a + 2, b, c, d],
        )
        .term(
            (b + 1) * ((a - b) * (9 * a - b + 11) + (6 * a - 2 * b + 7) * cd + diff2),
            vec![a + 1, b, c, d],
        )
        .term(
            2 * (a + 1) * (b + 1) * (5 * a - 5 * b + c + d + 2),
            vec![a, b, c, d],
        )
}

pub fn check_sixterm_s4(a: u32, b: u32, c: u32, d: u32) -> Result<BigInt> {
    sixterm_s4_combination(a, b, c, d).evaluate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::count_deals_meet_in_middle;

    fn oracle(p: &Profile) -> ExactCount {
        count_deals_meet_in_middle(p).unwrap()
    }

    #[test]
    fn dp_examples() {
        let e = |v: &[u32]| e_by_recurrence(&Profile::from(v));
        assert_eq!(e(&[1, 1, 1]), 2);
        assert_eq!(e(&[2, 1, 1]), 2);
        assert_eq!(e(&[2, 2, 1]), 4);
        assert_eq!(e(&[0, 0, 0]), 1);
        assert_eq!(e(&[]), 1);
        assert_eq!(e(&[4]), 0);
        assert_eq!(e(&[3, 3]), 1);
        assert_eq!(e(&[3, 4]), 0);
        assert_eq!(e(&[1, 1, 1, 1, 1]), 44);
    }

    #[test]
    fn private_table_matches_oracle() {
        let table = RecurrenceTable::new();
        for a in 0..=4u32 {
            for b in 0..=a {
                for c in 0..=b {
                    for d in 0..=c {
                        let p = Profile::from([a, b, c, d]);
                        assert_eq!(table.get(&p), oracle(&p), "{p}");
                    }
                }
            }
        }
        assert!(!table.is_empty());
    }

    #[test]
    fn rec3_examples() {
        for c in 0..5 {
            assert_eq!(check_rec3(2, 2, c, Rec3::A).unwrap(), BigInt::zero());
        }
        let comb = rec3_combination(1, 1, 2, Rec3::B);
        assert_eq!(comb.evaluate_with(oracle).unwrap(), BigInt::zero());
        assert_eq!(check_rec3(1, 1, 1, Rec3::D).unwrap(), BigInt::zero());
    }

    #[test]
    fn zero_coefficient_allows_negative_argument() {
        // a = 0 multiplies E(-1, b, c) by zero
        assert_eq!(check_rec3(0, 2, 2, Rec3::B).unwrap(), BigInt::zero());
        let bad = Combination::new().term(1, vec![-1, 0]);
        assert!(matches!(bad.evaluate(), Err(Error::Precondition(_))));
    }

    #[test]
    fn gillis_examples() {
        let four = gillis_combination(1, 1, &[1], Gillis::FourArg);
        assert_eq!(four.evaluate_with(oracle).unwrap(), BigInt::zero());
        assert_eq!(
            check_gillis(1, 2, 2, Gillis::FiveTerm).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            check_gillis(3, 3, 1, Gillis::FiveTerm).unwrap(),
            BigInt::zero()
        );
        // longer tails
        let long = gillis_combination(2, 1, &[1, 2], Gillis::FourArg);
        assert_eq!(long.evaluate_with(oracle).unwrap(), BigInt::zero());
    }

    #[test]
    fn rec5_examples() {
        let p = Profile::from([2, 2, 1]);
        assert_eq!(check_rec5(&p, 0, 1).unwrap(), BigInt::zero());
        let p = Profile::from([1, 2, 2]);
        assert_eq!(
            rec5_combination(&p, 0, 1)
                .unwrap()
                .evaluate_with(oracle)
                .unwrap(),
            BigInt::zero()
        );
        let p = Profile::from([1, 1, 2, 2]);
        assert_eq!(check_rec5(&p, 0, 2).unwrap(), BigInt::zero());
        assert_eq!(check_rec5_sum(&p, 3).unwrap(), BigInt::zero());
        assert!(check_rec5(&p, 0, 0).is_err());
        assert!(check_rec5(&p, 0, 7).is_err());
    }

    #[test]
    fn sixterm_examples() {
        for (a, b, c, d) in [(1, 1, 1, 1), (2, 1, 1, 1), (1, 1, 2, 2), (0, 0, 0, 0)] {
            let comb = sixterm_s4_combination(a, b, c, d);
            assert_eq!(comb.evaluate_with(oracle).unwrap(), BigInt::zero());
        }
    }
}
