use std::fmt::Display;

use clap::ValueEnum;
use num_bigint::BigInt;
use rayon::prelude::*;

use derange::asymptotics::{asym_b, asym_diagonal_e, asym_e3, asym_e4, UvwPoint};
use derange::hypergeo::{e3_closed_form, franel, Formula, FranelVariant};
use derange::nash::{
    b_bound, b_bound_by_series, b_bound_by_subgames, check_b_recurrence, check_sms_identity,
    BRecurrence,
};
use derange::oeis::{compute_entry, parse_fixtures};
use derange::recurrences::{
    check_gillis, check_rec3, check_rec5, check_rec5_sum, check_sixterm_s4, e_by_recurrence,
    Gillis, Rec3,
};
use derange::{binomial, e, Error, Method, Profile};

use crate::Failure;

pub const BUNDLED_FIXTURES: &str = include_str!("../../core/tests/fixtures/oeis.tsv");

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    CrossMethod,
    Recurrences,
    Hypergeo,
    BIdentities,
    AsymRatios,
    Oeis,
    All,
}

/// Vectors of `s` non-negative parts, each at most `max_part`, total at most `max_total`.
fn grid(s: usize, max_part: u32, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..s {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=max_part.min(max_total - used)).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Runs `f` on every item in parallel and prints one line; `f` returns
/// `None` to skip an item that is outside the identity's domain.
fn check<T, F>(name: &str, items: &[T], f: F) -> bool
where
    T: Display + Sync,
    F: Fn(&T) -> Option<Result<(), String>> + Sync,
{
    let results: Vec<Option<Result<(), String>>> = items.par_iter().map(&f).collect();
    let points = results.iter().flatten().count();
    let failures: Vec<String> = items
        .iter()
        .zip(&results)
        .filter_map(|(item, r)| match r {
            Some(Err(msg)) => Some(format!("{item}: {msg}")),
            _ => None,
        })
        .collect();
    if failures.is_empty() {
        println!("PASS  {name}  ({points} points)");
        true
    } else {
        println!("FAIL  {name}  ({} of {points} points)", failures.len());
        for f in failures.iter().take(5) {
            println!("      {f}");
        }
        false
    }
}

fn residual(r: derange::Result<BigInt>) -> Option<Result<(), String>> {
    match r {
        Ok(v) if v == BigInt::from(0) => Some(Ok(())),
        Ok(v) => Some(Err(format!("residual {v}"))),
        Err(Error::Precondition(_)) => None,
        Err(e) => Some(Err(e.to_string())),
    }
}

fn profiles(vs: Vec<Vec<u32>>) -> Vec<Profile> {
    vs.into_iter().map(Profile::from).collect()
}

fn cross_method(max_n: u32) -> bool {
    let items = profiles((1..=4).flat_map(|s| grid(s, max_n, max_n)).collect());
    let truth: Vec<_> = items
        .par_iter()
        .map(|p| e(p, Method::Oracle))
        .collect::<Result<_, _>>()
        .unwrap_or_default();
    if truth.len() != items.len() {
        println!("FAIL  cross-method oracle  (profiles beyond the oracle limit)");
        return false;
    }
    let indexed: Vec<Indexed> = (0..items.len()).map(|i| Indexed(i, &items[i])).collect();
    let mut ok = true;
    for m in [
        Method::Product,
        Method::Series,
        Method::Laguerre,
        Method::Recurrence,
        Method::Hypergeo,
    ] {
        ok &= check(&format!("cross-method {m}"), &indexed, |Indexed(i, p)| {
            if m == Method::Hypergeo && p.len() != 3 {
                return None;
            }
            Some(match e(p, m) {
                Ok(v) if v == truth[*i] => Ok(()),
                Ok(v) => Err(format!("{v}, oracle {}", truth[*i])),
                Err(err) => Err(err.to_string()),
            })
        });
    }
    ok
}

struct Indexed<'a>(usize, &'a Profile);

impl Display for Indexed<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.1)
    }
}

fn recurrences(max: u32) -> bool {
    let triples = profiles(grid(3, max, 3 * max));
    let quads = profiles(grid(4, max.min(4), 16));
    let t = |p: &Profile| (p.parts()[0], p.parts()[1], p.parts()[2]);
    let mut ok = true;
    for r in Rec3::ALL {
        ok &= check(r.name(), &triples, |p| {
            let (a, b, c) = t(p);
            residual(check_rec3(a, b, c, r))
        });
    }
    for g in [Gillis::FourArg, Gillis::FiveTerm] {
        ok &= check(g.name(), &triples, |p| {
            let (a, b, c) = t(p);
            residual(check_gillis(a, b, c, g))
        });
    }
    for (label, items) in [("S=3", &triples), ("S=4", &quads)] {
        ok &= check(&format!("rec5 pairs {label}"), items, |p| {
            for i in 0..p.len() {
                for j in (0..p.len()).filter(|&j| j != i) {
                    if let Some(Err(e)) = residual(check_rec5(p, i, j)) {
                        return Some(Err(format!("({i},{j}) {e}")));
                    }
                }
            }
            Some(Ok(()))
        });
        ok &= check(&format!("rec5 sum {label}"), items, |p| {
            for i in 0..p.len() {
                if let Some(Err(e)) = residual(check_rec5_sum(p, i)) {
                    return Some(Err(format!("({i}) {e}")));
                }
            }
            Some(Ok(()))
        });
    }
    ok &= check("sixterm_s4", &quads, |p| {
        let v = p.parts();
        residual(check_sixterm_s4(v[0], v[1], v[2], v[3]))
    });
    ok
}

fn hypergeo(max: u32) -> bool {
    let triples = profiles(grid(3, max, 3 * max));
    let truth: Vec<_> = triples.par_iter().map(e_by_recurrence).collect();
    let indexed: Vec<Indexed> = (0..triples.len())
        .map(|i| Indexed(i, &triples[i]))
        .collect();
    let mut ok = true;
    for f in Formula::ALL {
        ok &= check(f.name(), &indexed, |Indexed(i, p)| {
            let &[a, b, c] = p.parts() else {
                unreachable!()
            };
            if !f.applies(a, b, c) {
                return None;
            }
            Some(match e3_closed_form(a, b, c, f) {
                Ok(v) if v == truth[*i] => Ok(()),
                Ok(v) => Err(format!("{v}, expected {}", truth[*i])),
                Err(err) => Err(err.to_string()),
            })
        });
    }
    let ns: Vec<u32> = (0..=12).collect();
    for v in FranelVariant::ALL {
        ok &= check(&format!("franel {}", v.name()), &ns, |&n| {
            let want = e_by_recurrence(&Profile::from(vec![n; 3]));
            let got = franel(n, v);
            Some(if got == want {
                Ok(())
            } else {
                Err(format!("{got}, expected {want}"))
            })
        });
    }
    ok
}

fn b_identities(max: u32) -> bool {
    let mut ok = true;
    let positive: Vec<Profile> = profiles(
        (1..=3)
            .flat_map(|s| grid(s, max, s as u32 * max))
            .filter(|v| !v.contains(&0))
            .collect(),
    );
    ok &= check("B paths agree", &positive, |p| {
        let a = b_bound(p).ok()?;
        let b = b_bound_by_subgames(p).ok()?;
        let c = b_bound_by_series(p).ok()?;
        Some(if a == b && a == c {
            Ok(())
        } else {
            Err(format!("direct {a}, subgames {b}, series {c}"))
        })
    });
    let pairs: Vec<Profile> = positive.iter().filter(|p| p.len() == 2).cloned().collect();
    ok &= check("B two players", &pairs, |p| {
        let (m1, m2) = (i64::from(p.parts()[0]), i64::from(p.parts()[1]));
        let want = binomial(m1 + m2, m1) - 1u32;
        let got = b_bound(p).ok()?;
        Some(if got.value() == &want {
            Ok(())
        } else {
            Err(format!("{got}, expected {want}"))
        })
    });
    let all: Vec<Profile> = profiles((1..=3).flat_map(|s| grid(s, max, s as u32 * max)).collect());
    for r in BRecurrence::ALL {
        ok &= check(r.name(), &all, |p| match check_b_recurrence(p, r) {
            Ok(v) if v == derange::Rational::from_integer(BigInt::from(0)) => Some(Ok(())),
            Ok(v) => Some(Err(format!("residual {v}"))),
            Err(Error::OutOfRange(_)) => None,
            Err(e) => Some(Err(e.to_string())),
        });
    }
    let small: Vec<Profile> = profiles((1..=4).flat_map(|s| grid(s, 10, 10)).collect());
    ok &= check("binomial-weighted E sum", &small, |p| {
        let r = check_sms_identity(p);
        Some(if r == BigInt::from(0) {
            Ok(())
        } else {
            Err(format!("residual {r}"))
        })
    });
    ok
}

struct RatioCase {
    label: &'static str,
    ratio: f64,
    tolerance: f64,
}

impl Display for RatioCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ratio {:.6}", self.label, self.ratio)
    }
}

fn asym_ratios() -> bool {
    let e_diag = |s: usize, n: u32| e_by_recurrence(&Profile::from(vec![n; s]));
    let r_diag = |s: usize, n: u32| {
        asym_diagonal_e(s as u32, n)
            .expect("valid")
            .ratio_to(&e_diag(s, n))
    };
    let r_b = |m: u32| {
        let p = Profile::from(vec![m; 3]);
        asym_b(&p)
            .expect("valid")
            .ratio_to(&b_bound(&p).expect("valid"))
    };
    let e3 = Profile::from(vec![60, 50, 40]);
    let cases = [
        RatioCase {
            label: "franel n=50",
            ratio: r_diag(3, 50),
            tolerance: 0.02,
        },
        RatioCase {
            label: "E(20,20,20,20)",
            ratio: r_diag(4, 20),
            tolerance: 0.05,
        },
        RatioCase {
            label: "B(40,40,40)",
            ratio: r_b(40),
            tolerance: 0.05,
        },
        RatioCase {
            label: "E(60,50,40)",
            ratio: asym_e3(60, 50, 40)
                .expect("valid")
                .ratio_to(&e_by_recurrence(&e3)),
            tolerance: 0.03,
        },
    ];
    let mut ok = check("asymptotic ratios", &cases, |c| {
        Some(if (c.ratio - 1.0).abs() <= c.tolerance {
            Ok(())
        } else {
            Err(format!("outside {}", c.tolerance))
        })
    });
    let families: [(&str, &(dyn Fn(u32) -> f64 + Sync)); 3] = [
        ("S=3 diagonal", &|n| r_diag(3, n)),
        ("S=4 diagonal", &|n| r_diag(4, n)),
        ("B diagonal S=3", &r_b),
    ];
    ok &= check(
        "monotone approach n=10,20,40",
        &families.map(|(l, _)| l),
        |label| {
            let f = families.iter().find(|(l, _)| l == label).expect("known").1;
            let gaps: Vec<f64> = [10, 20, 40]
                .into_iter()
                .map(|n| (f(n) - 1.0).abs())
                .collect();
            Some(if gaps[1] < gaps[0] && gaps[2] < gaps[1] {
                Ok(())
            } else {
                Err(format!("gaps {gaps:?}"))
            })
        },
    );
    let ns = [1u32, 10, 40];
    ok &= check("symmetric S=4 point vs diagonal", &ns, |&n| {
        let a = asym_e4(&UvwPoint::symmetric(), n).expect("valid");
        let b = asym_diagonal_e(4, n).expect("valid");
        let gap = a.relative_gap(&b);
        Some(if gap < 1e-9 {
            Ok(())
        } else {
            Err(format!("gap {gap:e}"))
        })
    });
    ok
}

struct Row(derange::oeis::FixtureEntry);

impl Display for Row {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[{}]", self.0.id, self.0.index)
    }
}

fn oeis(fixtures: &str) -> Result<bool, Failure> {
    let rows: Vec<Row> = parse_fixtures(fixtures)?.into_iter().map(Row).collect();
    let mut ids: Vec<String> = rows.iter().map(|r| r.0.id.clone()).collect();
    ids.dedup();
    let mut ok = true;
    for id in ids {
        let mine: Vec<&Row> = rows.iter().filter(|r| r.0.id == id).collect();
        ok &= check(&format!("oeis {id}"), &mine, |r| {
            Some(match compute_entry(&r.0.id, r.0.index) {
                Some(v) if v.value() == &r.0.value => Ok(()),
                Some(v) => Err(format!("computed {v}, fixture {}", r.0.value)),
                None => Err("unknown sequence id".into()),
            })
        });
    }
    Ok(ok)
}

pub fn run(suite: Suite, max_n: u32, max: Option<u32>, fixtures: &str) -> Result<bool, Failure> {
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let mut ok = true;
    if wants(Suite::CrossMethod) {
        if max_n > derange::oracle::DEFAULT_DP_LIMIT as u32 {
            return Err(Failure::Invalid(format!(
                "--max-n {max_n} exceeds the oracle limit {}",
                derange::oracle::DEFAULT_DP_LIMIT
            )));
        }
        ok &= cross_method(max_n);
    }
    if wants(Suite::Recurrences) {
        ok &= recurrences(max.unwrap_or(6));
    }
    if wants(Suite::Hypergeo) {
        ok &= hypergeo(max.unwrap_or(8));
    }
    if wants(Suite::BIdentities) {
        ok &= b_identities(max.unwrap_or(5));
    }
    if wants(Suite::AsymRatios) {
        ok &= asym_ratios();
    }
    if wants(Suite::Oeis) {
        ok &= oeis(fixtures)?;
    }
    println!(
        "{}",
        if ok {
            "all checks passed"
        } else {
            "some checks failed"
        }
    );
    Ok(ok)
}
