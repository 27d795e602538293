//! Terminating `3F2` series in exact rationals and the closed forms of
//! three-player counts `E(a, b, c)`.
//!
//! Every closed form is evaluated on the ascending triple `a <= b <= c`,
//! which meets each formula's ordering requirement (`c` maximal, `c >= b`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::{
    binomial, binomial_rational, factorial, int_rational, pochhammer, rational, ExactCount,
    Rational,
};

/// Parameters `(alpha, beta, gamma; zeta, eta; z)` of a terminating `3F2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyp32Spec {
    pub upper: [Rational; 3],
    pub lower: [Rational; 2],
    pub argument: Rational,
}

fn non_positive_integer(x: &Rational) -> Option<u64> {
    if x.is_integer() && !x.is_positive() {
        (-x.to_integer()).to_u64()
    } else {
        None
    }
}

impl Hyp32Spec {
    pub fn new(upper: [Rational; 3], lower: [Rational; 2], argument: Rational) -> Self {
        Hyp32Spec {
            upper,
            lower,
            argument,
        }
    }

    /// Index of the last possibly nonzero term, `None` if the series does not terminate.
    pub fn termination_index(&self) -> Option<u64> {
        self.upper.iter().filter_map(non_positive_integer).min()
    }

    /// Checks termination and that no lower parameter reaches zero before the
    /// series stops. A lower parameter equal to the terminating upper one is fine.
    pub fn validate(&self) -> Result<u64> {
        let m = self.termination_index().ok_or_else(|| {
            Error::IllDefined("no upper parameter is a non-positive integer".into())
        })?;
        for l in &self.lower {
            if let Some(depth) = non_positive_integer(l) {
                if depth < m {
                    return Err(Error::IllDefined(format!(
                        "lower parameter {l} vanishes before the series terminates at index {m}"
                    )));
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Hyp32Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.upper;
        let [d, e] = &self.lower;
        write!(f, "3F2({a}, {b}, {c}; {d}, {e}; {})", self.argument)
    }
}

pub fn eval_3f2_terminating(spec: &Hyp32Spec) -> Result<Rational> {
    let m = spec.validate()?;
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    for k in 0..=m {
        sum += &term;
        if k == m {
            break;
        }
        let kk = int_rational(k as i64);
        let num: Rational =
            spec.upper.iter().map(|u| u + &kk).product::<Rational>() * &spec.argument;
        if num.is_zero() {
            break;
        }
        let den: Rational =
            spec.lower.iter().map(|l| l + &kk).product::<Rational>() * (&kk + Rational::one());
        term = term * num / den;
    }
    Ok(sum)
}

/// `p = (a+b+c)/2`, `q = (a+b+c-1)/2`, `r = floor((a+b+c)/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqrTriple {
    pub p: Rational,
    pub q: Rational,
    pub r: u64,
}

impl PqrTriple {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        let s = i64::from(a) + i64::from(b) + i64::from(c);
        PqrTriple {
            p: rational(s, 2),
            q: rational(s - 1, 2),
            r: (s / 2) as u64,
        }
    }

    pub fn is_even(&self) -> bool {
        self.p.is_integer()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bf0,
    F0,
    F1,
    F1a,
    F1b,
    Strehl,
    Sun,
    F8,
    F6,
    F7,
    F4a,
    F5b,
    F4b,
    F5a,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parity {
    Any,
    Even,
    Odd,
}

impl Formula {
    pub const ALL: [Formula; 14] = [
        Formula::Bf0,
        Formula::F0,
        Formula::F1,
        Formula::F1a,
        Formula::F1b,
        Formula::Strehl,
        Formula::Sun,
        Formula::F8,
        Formula::F6,
        Formula::F7,
        Formula::F4a,
        Formula::F5b,
        Formula::F4b,
        Formula::F5a,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Formula::Bf0 => "bf0",
            Formula::F0 => "f0",
            Formula::F1 => "f1",
            Formula::F1a => "f1a",
            Formula::F1b => "f1b",
            Formula::Strehl => "strehl",
            Formula::Sun => "sun",
            Formula::F8 => "f8",
            Formula::F6 => "f6",
            Formula::F7 => "f7",
            Formula::F4a => "f4a",
            Formula::F5b => "f5b",
            Formula::F4b => "f4b",
            Formula::F5a => "f5a",
        }
    }

    fn parity(self) -> Parity {
        match self {
            Formula::F1a | Formula::F4a | Formula::F5b => Parity::Even,
            Formula::F1b | Formula::F4b | Formula::F5a => Parity::Odd,
            _ => Parity::Any,
        }
    }

    /// Whether the formula is defined for this triple (triangle and parity filters).
    pub fn applies(self, a: u32, b: u32, c: u32) -> bool {
        let even = (a + b + c).is_multiple_of(2);
        let parity_ok = match self.parity() {
            Parity::Any => true,
            Parity::Even => even,
            Parity::Odd => !even,
        };
        parity_ok && (self == Formula::Bf0 || satisfies_triangle(a, b, c))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown formula `{s}`")))
    }
}

pub fn satisfies_triangle(a: u32, b: u32, c: u32) -> bool {
    let (a, b, c) = (u64::from(a), u64::from(b), u64::from(c));
    a <= b + c && b <= a + c && c <= a + b
}

fn fact(x: &Rational) -> Result<Rational> {
    if !x.is_integer() || x.is_negative() {
        return Err(Error::InternalInconsistency(format!("factorial of {x}")));
    }
    let n = x
        .to_integer()
        .to_u32()
        .expect("factorial argument fits u32");
    Ok(Rational::from_integer(BigInt::from(factorial(n))))
}

fn ri(v: u32) -> Rational {
    int_rational(i64::from(v))
}

fn binom(n: i64, k: i64) -> Rational {
    Rational::from_integer(BigInt::from(binomial(n, k)))
}

fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

fn hyp(upper: [Rational; 3], lower: [Rational; 2], z: i64) -> Result<Rational> {
    eval_3f2_terminating(&Hyp32Spec::new(upper, lower, int_rational(z)))
}

/// Exact `E(a, b, c)` from one of the closed forms.
pub fn e3_closed_form(a: u32, b: u32, c: u32, formula: Formula) -> Result<ExactCount> {
    let mut t = [a, b, c];
    t.sort_unstable();
    let [a, b, c] = t;
    let pqr = PqrTriple::new(a, b, c);
    match formula.parity() {
        Parity::Even if !pqr.is_even() => {
            return Err(Error::ParityMismatch {
                formula: formula.name(),
                required: "even",
            })
        }
        Parity::Odd if pqr.is_even() => {
            return Err(Error::ParityMismatch {
                formula: formula.name(),
                required: "odd",
            })
        }
        _ => {}
    }
    if !satisfies_triangle(a, b, c) {
        if formula == Formula::Bf0 {
            return Ok(ExactCount::zero());
        }
        return Err(Error::NotApplicable {
            formula: formula.name(),
            reason: format!("({a},{b},{c}) violates the triangle inequality"),
        });
    }
    let value = evaluate(a, b, c, &pqr, formula)?;
    if !value.is_integer() || value.is_negative() {
        return Err(Error::InternalInconsistency(format!(
            "{formula} gave {value} for ({a},{b},{c})"
        )));
    }
    Ok(ExactCount::try_from_bigint(value.to_integer()).expect("checked non-negative"))
}

fn evaluate(a: u32, b: u32, c: u32, pqr: &PqrTriple, formula: Formula) -> Result<Rational> {
    let (ra, rb, rc) = (ri(a), ri(b), ri(c));
    let (p, q) = (&pqr.p, &pqr.q);
    let half = rational(1, 2);
    let one = Rational::one();
    let (ia, ib, ic) = (i64::from(a), i64::from(b), i64::from(c));
    let excess = ia + ib - ic; // a + b - c >= 0
    let sign = |x: &Rational| -> Rational {
        if x.to_integer().is_odd_bigint() {
            -Rational::one()
        } else {
            Rational::one()
        }
    };

    Ok(match formula {
        Formula::Bf0 => (0..=excess)
            .map(|k| binom(ia, k) * binom(ib, ic - ia + k) * binom(ic, ib - k))
            .fold(Rational::zero(), |acc, t| acc + t),
        Formula::F0 => {
            let pre = fact(&rc)?
                / (fact(&int_rational(excess))? * fact(&(&rc - &ra))? * fact(&(&rc - &rb))?);
            pre * hyp(
                [int_rational(ic - ia - ib), -ra.clone(), -rb.clone()],
                [&rc - &ra + &one, &rc - &rb + &one],
                -1,
            )?
        }
        Formula::F1 => {
            let pre = pow2(excess as u32) * fact(&rc)?
                / (fact(&int_rational(excess))? * fact(&(&rc - &ra))? * fact(&(&rc - &rb))?);
            pre * hyp(
                [&rc - p, &rc - q, &rc + &one],
                [&rc - &ra + &one, &rc - &rb + &one],
                1,
            )?
        }
        Formula::F1a => {
            let pre = fact(p)? / (fact(&(p - &ra))? * fact(&(p - &rb))? * fact(&(p - &rc))?);
            pre * hyp([&ra - p, &rb - p, &rc - p], [-p.clone(), half.clone()], 1)?
        }
        Formula::F1b => {
            let pre = int_rational(2) * fact(q)?
                / (fact(&(q - &ra))? * fact(&(q - &rb))? * fact(&(q - &rc))?);
            pre * hyp([&ra - q, &rb - q, &rc - q], [-q.clone(), rational(3, 2)], 1)?
        }
        Formula::Strehl => {
            let pre = binom(ic, ib) * binom(2 * ib, excess);
            pre * hyp(
                [&rc - p, &rc - q, -rb.clone()],
                [&rc - &rb + &one, &half - &rb],
                1,
            )?
        }
        Formula::Sun => {
            let pre = pow2(a + b + c) * pochhammer(&half, a) * pochhammer(&half, b) * fact(&rc)?
                / (fact(&int_rational(excess))?
                    * fact(&int_rational(ia - ib + ic))?
                    * fact(&int_rational(ib - ia + ic))?);
            pre * hyp(
                [&rc - p, &rc - q, half.clone()],
                [&half - &ra, &half - &rb],
                1,
            )?
        }
        Formula::F8 => {
            let pre = fact(&int_rational(ia + ib + ic))?
                / (fact(&int_rational(excess))?
                    * fact(&int_rational(ia - ib + ic))?
                    * fact(&int_rational(ib - ia + ic))?);
            pre * hyp(
                [-ra.clone(), -rb.clone(), -rc.clone()],
                [-p.clone(), -q.clone()],
                1,
            )?
        }
        Formula::F6 => {
            let pre = binomial_rational(p, a) * binom(2 * ia, excess);
            pre * hyp(
                [-ra.clone(), &rc - p, &rb - p],
                [-p.clone(), &half - &ra],
                1,
            )?
        }
        Formula::F7 => {
            let pre = binomial_rational(q, a) * binom(2 * ia, excess);
            pre * hyp(
                [-ra.clone(), &rc - q, &rb - q],
                [-q.clone(), &half - &ra],
                1,
            )?
        }
        Formula::F4a => {
            let pa = fact(&(p - &ra))?;
            let pre = binom(2 * ia, excess) * fact(&rb)? * fact(&rc)? / (fact(&ra)? * &pa * &pa);
            pre * hyp(
                [&rc - p, &rb - p, half.clone()],
                [p - &ra + &one, &half - &ra],
                1,
            )?
        }
        Formula::F5b => {
            let pre = sign(&(p - &rc)) * fact(p)?
                / (fact(&(p - &ra))? * fact(&(p - &rb))? * fact(&(p - &rc))?);
            pre * hyp(
                [&rc - p, -ra.clone(), -rb.clone()],
                [-p.clone(), &rc - q],
                1,
            )?
        }
        Formula::F4b => {
            let qa = q - &ra;
            let pre = binom(2 * ia, excess) * fact(&rb)? * fact(&rc)?
                / (fact(&ra)? * fact(&qa)? * fact(&(&qa + &one))?);
            pre * hyp(
                [&rc - q, &rb - q, half.clone()],
                [&qa + int_rational(2), &half - &ra],
                1,
            )?
        }
        Formula::F5a => {
            let pre = sign(&(q - &rc)) * fact(q)?
                / ((p - &rc) * fact(&(q - &ra))? * fact(&(q - &rb))? * fact(&(q - &rc))?);
            pre * hyp(
                [&rc - q, -ra.clone(), -rb.clone()],
                [-q.clone(), &rc - p + &one],
                1,
            )?
        }
    })
}

trait OddBigInt {
    fn is_odd_bigint(&self) -> bool;
}

impl OddBigInt for BigInt {
    fn is_odd_bigint(&self) -> bool {
        use num_integer::Integer;
        self.is_odd()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FranelVariant {
    CubeSum,
    Strehl,
    SunHalf,
    Sun4k,
    F12k,
}

impl FranelVariant {
    pub const ALL: [FranelVariant; 5] = [
        FranelVariant::CubeSum,
        FranelVariant::Strehl,
        FranelVariant::SunHalf,
        FranelVariant::Sun4k,
        FranelVariant::F12k,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FranelVariant::CubeSum => "cube_sum",
            FranelVariant::Strehl => "strehl",
            FranelVariant::SunHalf => "sun_half",
            FranelVariant::Sun4k => "sun_4k",
            FranelVariant::F12k => "f1_2k",
        }
    }
}

/// `E(n, n, n)` by one of five single sums.
pub fn franel(n: u32, variant: FranelVariant) -> ExactCount {
    let n = i64::from(n);
    let b = |x: i64, y: i64| BigInt::from(binomial(x, y));
    let half_up = (n + 1) / 2;
    let value: BigInt = match variant {
        FranelVariant::CubeSum => (0..=n).map(|k| b(n, k).pow(3)).sum(),
        FranelVariant::Strehl => (half_up..=n).map(|k| b(n, k).pow(2) * b(2 * k, n)).sum(),
        FranelVariant::SunHalf => {
            let s: BigInt = (half_up..=n)
                .map(|k| b(2 * k, n) * b(2 * k, k) * b(2 * n - 2 * k, n - k))
                .sum();
            let (quot, rem) = (&s >> n as usize, &s - ((&s >> n as usize) << n as usize));
            assert!(rem.is_zero(), "sum not divisible by 2^n");
            quot
        }
        FranelVariant::Sun4k => (0..=n)
            .map(|k| {
                let sign = if (n - k) % 2 == 1 { -1 } else { 1 };
                b(n + 2 * k, 3 * k)
                    * b(2 * k, k)
                    * b(3 * k, k)
                    * (BigInt::from(sign) << (2 * (n - k)) as usize)
            })
            .sum(),
        FranelVariant::F12k => (0..=n / 2)
            .map(|k| {
                b(n + k, 3 * k)
                    * b(2 * k, k)
                    * b(3 * k, k)
                    * (BigInt::one() << (n - 2 * k) as usize)
            })
            .sum(),
    };
    ExactCount::try_from_bigint(value).expect("Franel sums are non-negative")
}
