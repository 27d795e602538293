//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use derange::asymptotics::{asym_b, asym_diagonal_e, asym_e4, UvwPoint};
use derange::hypergeo::{e3_closed_form, franel, Formula, FranelVariant};
use derange::laguerre::e_by_laguerre;
use derange::master::{
    bezout_bound, det_master, det_master_closed_form, e_by_product, e_by_series, DegreeMatrix,
};
use derange::nash::{
    b_bound, b_bound_by_series, b_bound_by_subgames, b_extended, check_b_recurrence,
    check_sms_identity, BRecurrence,
};
use derange::oeis::{compute_entry, parse_fixtures};
use derange::oracle::{count_deals_bruteforce, count_deals_meet_in_middle};
use derange::recurrences::{
    check_gillis, check_rec3, check_rec5, check_rec5_sum, check_sixterm_s4, e_by_recurrence,
    Gillis, Rec3,
};
use derange::{Error, ExactCount, Profile};

type Outcome = Result<String, String>;
type Ratio<'a> = Box<dyn Fn(u32) -> f64 + 'a>;
type Criterion = (&'static str, fn() -> Outcome);

/// Every vector of `s` non-negative parts summing to at most `max_total`.
fn compositions(s: usize, max_total: u32) -> Vec<Vec<u32>> {
    fn go(s: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur.push(x);
            go(s, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(s, max_total, &mut Vec::new(), &mut out);
    out
}

/// Partitions (non-increasing, positive parts) of every total up to `max_total`.
fn partitions(max_total: u32) -> Vec<Vec<u32>> {
    fn go(left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for x in (1..=left.min(cap)).rev() {
            cur.push(x);
            go(left - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max_total, max_total, &mut Vec::new(), &mut out);
    out
}

fn grid(dims: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..dims {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn oracle(p: &Profile) -> ExactCount {
    if p.total() <= 12 {
        count_deals_bruteforce(p).unwrap()
    } else {
        count_deals_meet_in_middle(p).unwrap()
    }
}

fn collect_failures(failures: Vec<String>, checked: usize) -> Outcome {
    if failures.is_empty() {
        Ok(format!("{checked} checks"))
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        Err(format!(
            "{} of {checked} failed: {}",
            failures.len(),
            shown.join("; ")
        ))
    }
}

fn criterion_1() -> Outcome {
    let mut profiles: Vec<Vec<u32>> = (1..=4).flat_map(|s| compositions(s, 12)).collect();
    profiles.extend(grid(5, 2));
    let failures: Vec<String> = profiles
        .par_iter()
        .filter_map(|v| {
            let p = Profile::from(v.clone());
            let want = oracle(&p);
            let got = [
                ("product", e_by_product(&p)),
                ("series", e_by_series(&p)),
                ("laguerre", e_by_laguerre(&p).unwrap()),
                ("recurrence", e_by_recurrence(&p)),
            ];
            got.into_iter()
                .find(|(_, g)| *g != want)
                .map(|(name, g)| format!("{name}({p}) = {g}, oracle {want}"))
        })
        .collect();
    collect_failures(failures, profiles.len())
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    for s in 2u32..=8 {
        // S! * sum_{j<=S} (-1)^j / j!  ==  sum_j (-1)^j S!/j!
        let mut falling = BigInt::one();
        let mut want = BigInt::zero();
        for j in (0..=s).rev() {
            let term = falling.clone();
            want += if j % 2 == 1 { -term } else { term };
            falling *= j.max(1);
        }
        let p = Profile::from(vec![1; s as usize]);
        for (name, got) in [("recurrence", e_by_recurrence(&p)), ("oracle", oracle(&p))] {
            if got.to_bigint() != want {
                failures.push(format!("{name} E(1^{s}) = {got}, expected {want}"));
            }
        }
    }
    collect_failures(failures, 7)
}

fn cube_sum(n: u32) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::one(); row.len() + 1];
        for k in 1..row.len() {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
    }
    row.iter().map(|c| c * c * c).sum()
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    for n in 0..=12u32 {
        let want = e_by_recurrence(&Profile::from(vec![n; 3]));
        for v in FranelVariant::ALL {
            let got = franel(n, v);
            if got != want {
                failures.push(format!("{}({n}) = {got}, recurrence {want}", v.name()));
            }
        }
        if n <= 5 && want.value() != &cube_sum(n) {
            failures.push(format!("E({n},{n},{n}) = {want}, cube sum {}", cube_sum(n)));
        }
    }
    collect_failures(failures, 13 * 5 + 6)
}

fn criterion_4() -> Outcome {
    let points = grid(3, 8);
    let results: Vec<(usize, Vec<String>)> = points
        .par_iter()
        .map(|v| {
            let (a, b, c) = (v[0], v[1], v[2]);
            let want = oracle(&Profile::from(v.clone()));
            let mut fails = Vec::new();
            let mut n = 0;
            for f in Formula::ALL {
                if !f.applies(a, b, c) {
                    continue;
                }
                n += 1;
                match e3_closed_form(a, b, c, f) {
                    Ok(got) if got == want => {}
                    Ok(got) => fails.push(format!("{f}({a},{b},{c}) = {got}, oracle {want}")),
                    Err(e) => fails.push(format!("{f}({a},{b},{c}): {e}")),
                }
            }
            (n, fails)
        })
        .collect();
    let checked = results.iter().map(|r| r.0).sum();
    collect_failures(results.into_iter().flat_map(|r| r.1).collect(), checked)
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut record = |label: String, r: derange::Result<BigInt>| match r {
        Ok(v) => {
            checked += 1;
            if !v.is_zero() {
                failures.push(format!("{label}: residual {v}"));
            }
        }
        Err(Error::Precondition(_)) => {}
        Err(e) => failures.push(format!("{label}: {e}")),
    };
    for v in grid(3, 8) {
        let (a, b, c) = (v[0], v[1], v[2]);
        for r in Rec3::ALL {
            record(format!("{}({a},{b},{c})", r.name()), check_rec3(a, b, c, r));
        }
        for g in [Gillis::FourArg, Gillis::FiveTerm] {
            record(
                format!("{}({a},{b},{c})", g.name()),
                check_gillis(a, b, c, g),
            );
        }
        let p = Profile::from(v.clone());
        for i in 0..3 {
            record(format!("rec5_sum({p}; {i})"), check_rec5_sum(&p, i));
            for j in 0..3 {
                if i != j {
                    record(format!("rec5({p}; {i},{j})"), check_rec5(&p, i, j));
                }
            }
        }
    }
    for v in grid(4, 4) {
        let p = Profile::from(v.clone());
        record(
            format!("sixterm({p})"),
            check_sixterm_s4(v[0], v[1], v[2], v[3]),
        );
        for i in 0..4 {
            record(format!("rec5_sum({p}; {i})"), check_rec5_sum(&p, i));
            for j in 0..4 {
                if i != j {
                    record(format!("rec5({p}; {i},{j})"), check_rec5(&p, i, j));
                }
            }
        }
    }
    collect_failures(failures, checked)
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for m1 in 1..=10u32 {
        for m2 in 1..=10u32 {
            checked += 1;
            let got = b_bound(&Profile::from(vec![m1, m2])).unwrap();
            let want = derange::binomial(i64::from(m1 + m2), i64::from(m1)) - 1u32;
            if got.value() != &want {
                failures.push(format!("B({m1},{m2}) = {got}, expected {want}"));
            }
        }
    }
    checked += 1;
    if b_bound(&Profile::from(vec![2, 2, 2])).unwrap() != 16u64 {
        failures.push("B(2,2,2) != 16".into());
    }
    for s in 1..=4 {
        for v in grid(s, 4).into_iter().filter(|v| !v.contains(&0)) {
            checked += 1;
            let p = Profile::from(v);
            let a = b_bound(&p).unwrap();
            let b = b_bound_by_subgames(&p).unwrap();
            let c = b_bound_by_series(&p).unwrap();
            if a != b || a != c {
                failures.push(format!("B({p}): direct {a}, subgames {b}, series {c}"));
            }
        }
    }
    let mut residual = |label: String, p: &Profile, r: BRecurrence| {
        checked += 1;
        match check_b_recurrence(p, r) {
            Ok(v) if v.is_zero() => {}
            Ok(v) => failures.push(format!("{label}: residual {v}")),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };
    for s in 1..=3 {
        for v in grid(s, 6) {
            let p = Profile::from(v.clone());
            residual(format!("mcrec({p})"), &p, BRecurrence::McRec);
            if !v.contains(&0) {
                residual(format!("sum_rec({p})"), &p, BRecurrence::SumRec);
            }
            if s == 3 {
                residual(format!("brec4({p})"), &p, BRecurrence::Brec4);
                if v[2] > 0 {
                    residual(format!("brec1({p})"), &p, BRecurrence::Brec1);
                    residual(format!("brec2({p})"), &p, BRecurrence::Brec2);
                }
            }
        }
    }
    for a in 0..=6u32 {
        let p = Profile::from(vec![a; 3]);
        residual(format!("brec3({a})"), &p, BRecurrence::Brec3);
        residual(format!("diag_pair({a})"), &p, BRecurrence::DiagPair);
    }
    collect_failures(failures, checked)
}

fn criterion_7() -> Outcome {
    let profiles: Vec<Vec<u32>> = partitions(10).into_iter().chain(grid(3, 3)).collect();
    let failures: Vec<String> = profiles
        .par_iter()
        .filter_map(|v| {
            let r = check_sms_identity(&Profile::from(v.clone()));
            (!r.is_zero()).then(|| format!("{v:?}: residual {r}"))
        })
        .collect();
    collect_failures(failures, profiles.len())
}

fn criterion_8() -> Outcome {
    let profiles = partitions(10);
    let mut failures: Vec<String> = profiles
        .par_iter()
        .filter_map(|v| {
            let p = Profile::from(v.clone());
            let got = bezout_bound(&p, &DegreeMatrix::tmne(&p)).unwrap();
            let want = e_by_recurrence(&p);
            (got != want).then(|| format!("bezout({p}) = {got}, E = {want}"))
        })
        .collect();
    for s in 1..=7 {
        if det_master(s) != det_master_closed_form(s) {
            failures.push(format!("det_master({s}) differs from the closed form"));
        }
    }
    collect_failures(failures, profiles.len() + 7)
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let e_diag = |s: usize, n: u32| e_by_recurrence(&Profile::from(vec![n; s]));
    let ratio_e = |s: usize, n: u32| {
        asym_diagonal_e(s as u32, n)
            .unwrap()
            .ratio_to(&e_diag(s, n))
    };
    let ratio_b = |m: u32| {
        let p = Profile::from(vec![m; 3]);
        asym_b(&p).unwrap().ratio_to(&b_bound(&p).unwrap())
    };
    let mut within = |label: &str, ratio: f64, tol: f64| {
        if (ratio - 1.0).abs() > tol {
            failures.push(format!("{label}: ratio {ratio:.5} outside {tol}"));
        }
    };
    within("franel(50)", ratio_e(3, 50), 0.02);
    within("E(20,20,20,20)", ratio_e(4, 20), 0.05);
    within("B(40,40,40)", ratio_b(40), 0.05);
    let families: [(&str, Ratio); 3] = [
        ("S=3 diagonal", Box::new(|n| ratio_e(3, n))),
        ("S=4 diagonal", Box::new(|n| ratio_e(4, n))),
        ("B diagonal S=3", Box::new(ratio_b)),
    ];
    for (label, f) in families {
        let gaps: Vec<f64> = [10, 20, 40]
            .into_iter()
            .map(|n| (f(n) - 1.0).abs())
            .collect();
        if !(gaps[1] < gaps[0] && gaps[2] < gaps[1]) {
            failures.push(format!("{label}: not monotone, gaps {gaps:?}"));
        }
    }
    for n in [1, 10, 40] {
        let a = asym_e4(&UvwPoint::symmetric(), n).unwrap();
        let b = asym_diagonal_e(4, n).unwrap();
        if a.relative_gap(&b) > 1e-9 {
            failures.push(format!(
                "symmetric S=4 point at n={n}: gap {}",
                a.relative_gap(&b)
            ));
        }
    }
    collect_failures(failures, 9)
}

fn criterion_10() -> Outcome {
    let text = include_str!("fixtures/oeis.tsv");
    let rows = parse_fixtures(text).map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    for r in &rows {
        match compute_entry(&r.id, r.index) {
            Some(v) if v.value() == &r.value => {}
            Some(v) => failures.push(format!(
                "{} at {}: computed {v}, fixture {}",
                r.id, r.index, r.value
            )),
            None => failures.push(format!("unknown sequence {}", r.id)),
        }
    }
    // the B diagonal fixtures must agree with the extended B at zero as well
    if !b_extended(&[0, 0]).is_zero() {
        failures.push("B(0,0) should be 0".into());
    }
    collect_failures(failures, rows.len())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("cross-method oracle equivalence", criterion_1),
        ("derangement row", criterion_2),
        ("Franel row", criterion_3),
        ("hypergeometric closed forms", criterion_4),
        ("recurrence residuals", criterion_5),
        ("B identities", criterion_6),
        ("binomial-weighted E sums to multinomial", criterion_7),
        ("Bezout consistency", criterion_8),
        ("asymptotic ratios", criterion_9),
        ("OEIS fixtures", criterion_10),
    ];
    let mut all_ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}, {secs:.1}s)", i + 1),
            Err(detail) => {
                all_ok = false;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
