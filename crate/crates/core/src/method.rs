//! Choosing how `E` is computed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hypergeo::{e3_closed_form, Formula};
use crate::kernel::{ExactCount, Profile};
use crate::laguerre::e_by_laguerre;
use crate::master::{e_by_product, e_by_series};
use crate::oracle::{count_deals_bruteforce, count_deals_meet_in_middle, DEFAULT_BRUTEFORCE_LIMIT};
use crate::recurrences::e_by_recurrence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Recurrence DP.
    #[default]
    Auto,
    Oracle,
    Product,
    Series,
    Laguerre,
    Recurrence,
    /// Binomial closed form, three players only.
    Hypergeo,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Auto,
        Method::Oracle,
        Method::Product,
        Method::Series,
        Method::Laguerre,
        Method::Recurrence,
        Method::Hypergeo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Oracle => "oracle",
            Method::Product => "product",
            Method::Series => "series",
            Method::Laguerre => "laguerre",
            Method::Recurrence => "recurrence",
            Method::Hypergeo => "hypergeo",
        }
    }

    /// The method `Auto` actually runs.
    pub fn resolve(self) -> Method {
        match self {
            Method::Auto => Method::Recurrence,
            m => m,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// `E(n_1, ..., n_S)` by the given method.
pub fn e(profile: &Profile, method: Method) -> Result<ExactCount> {
    match method.resolve() {
        Method::Oracle => {
            if profile.total() <= DEFAULT_BRUTEFORCE_LIMIT {
                count_deals_bruteforce(profile)
            } else {
                count_deals_meet_in_middle(profile)
            }
        }
        Method::Product => Ok(e_by_product(profile)),
        Method::Series => Ok(e_by_series(profile)),
        Method::Laguerre => e_by_laguerre(profile),
        Method::Recurrence | Method::Auto => Ok(e_by_recurrence(profile)),
        Method::Hypergeo => match profile.parts() {
            &[a, b, c] => e3_closed_form(a, b, c, Formula::Bf0),
            parts => Err(Error::InvalidArgs(format!(
                "method hypergeo needs exactly 3 parts, got {}",
                parts.len()
            ))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_method_agrees_on_small_cases() {
        for parts in [vec![1, 1, 1], vec![2, 2, 2], vec![1, 3, 3], vec![3, 1, 1]] {
            let p = Profile::from(parts);
            let want = count_deals_bruteforce(&p).unwrap();
            for m in Method::ALL {
                assert_eq!(e(&p, m).unwrap(), want, "{m} on {p}");
            }
        }
    }

    #[test]
    fn names() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!(matches!(
            "fast".parse::<Method>(),
            Err(Error::UnknownMethod(_))
        ));
        assert!(e(&Profile::from(vec![1, 1]), Method::Hypergeo).is_err());
    }
}
