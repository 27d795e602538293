//! Ground-truth block-derangement counts by direct enumeration of deals.
//!
//! Card `c` belongs to player `owner(c)`; a deal sends every card to some
//! other player so that player `j` ends up with exactly `n_j` cards. Cards
//! are distinct, so the number of deals is `E(n_1, ..., n_S)` itself.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{ExactCount, Profile};

pub const DEFAULT_BRUTEFORCE_LIMIT: u64 = 14;
pub const DEFAULT_DP_LIMIT: u64 = 40;

fn owners(profile: &Profile) -> Vec<usize> {
    profile
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(j, &n)| std::iter::repeat_n(j, n as usize))
        .collect()
}

fn check_limit(profile: &Profile, limit: u64) -> Result<()> {
    let total = profile.total();
    if total > limit {
        return Err(Error::LimitExceeded { total, limit });
    }
    Ok(())
}

pub fn count_deals_bruteforce(profile: &Profile) -> Result<ExactCount> {
    count_deals_bruteforce_with_limit(profile, DEFAULT_BRUTEFORCE_LIMIT)
}

/// Walks every card-by-card assignment to a non-owner and counts the leaves.
/// A branch is cut only when a recipient has no room left.
pub fn count_deals_bruteforce_with_limit(profile: &Profile, limit: u64) -> Result<ExactCount> {
    check_limit(profile, limit)?;
    let owners = owners(profile);
    let quotas: Vec<u32> = profile.parts().to_vec();
    let Some(&first_owner) = owners.first() else {
        return Ok(ExactCount::one());
    };

    let count: u64 = (0..quotas.len())
        .into_par_iter()
        .filter(|&r| r != first_owner && quotas[r] > 0)
        .map(|r| {
            let mut q = quotas.clone();
            q[r] -= 1;
            enumerate(&owners, 1, &mut q)
        })
        .sum();
    Ok(ExactCount::from(count))
}

fn enumerate(owners: &[usize], card: usize, quotas: &mut [u32]) -> u64 {
    if card == owners.len() {
        return 1;
    }
    let owner = owners[card];
    let mut total = 0;
    for r in 0..quotas.len() {
        if r == owner || quotas[r] == 0 {
            continue;
        }
        quotas[r] -= 1;
        total += enumerate(owners, card + 1, quotas);
        quotas[r] += 1;
    }
    total
}

pub fn count_deals_meet_in_middle(profile: &Profile) -> Result<ExactCount> {
    count_deals_meet_in_middle_with_limit(profile, DEFAULT_DP_LIMIT)
}

/// Dynamic program over the cards; the state is the vector of remaining
/// receive quotas, which is all the future depends on.
pub fn count_deals_meet_in_middle_with_limit(profile: &Profile, limit: u64) -> Result<ExactCount> {
    check_limit(profile, limit)?;
    let mut states: HashMap<Vec<u32>, BigUint> = HashMap::new();
    states.insert(profile.parts().to_vec(), BigUint::one());
    for owner in owners(profile) {
        let mut next: HashMap<Vec<u32>, BigUint> = HashMap::with_capacity(states.len());
        for (quotas, ways) in states {
            for r in 0..quotas.len() {
                if r == owner || quotas[r] == 0 {
                    continue;
                }
                let mut q = quotas.clone();
                q[r] -= 1;
                *next.entry(q).or_insert_with(BigUint::zero) += &ways;
            }
        }
        states = next;
    }
    let done = vec![0; profile.len()];
    Ok(ExactCount::new(states.remove(&done).unwrap_or_default()))
}
