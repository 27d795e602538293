//! Coefficient extraction through MacMahon's master theorem.
//!
//! `E(n_1, ..., n_S)` is both the coefficient of `x^n` in
//! `prod_j (X - x_j)^{n_j}` with `X = x_1 + ... + x_S`, and the Taylor
//! coefficient of `1 / (1 - sigma_2 - 2 sigma_3 - ... - (S-1) sigma_S)`.
//! Every multiplication is truncated to the box `[0, n_1] x ... x [0, n_S]`
//! since only the top corner is read.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{ExactCount, Profile};
use crate::poly::SparsePoly;

/// Degree `d_ij` of equation `i` in variable block `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeMatrix {
    cols: usize,
    rows: Vec<Vec<u32>>,
}

impl DegreeMatrix {
    pub fn new(cols: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: format!("{cols} columns"),
                found: format!("{} entries in row {}", r.len(), i + 1),
            });
        }
        Ok(DegreeMatrix { cols, rows })
    }

    /// Degrees of the equilibrium system: `n_j` equations that skip block `j`
    /// and are linear in every other block.
    pub fn tmne(blocks: &Profile) -> Self {
        let s = blocks.len();
        let rows = blocks
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(j, &n)| {
                let row: Vec<u32> = (0..s).map(|i| u32::from(i != j)).collect();
                std::iter::repeat_n(row, n as usize)
            })
            .collect();
        DegreeMatrix { cols: s, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

impl FromStr for DegreeMatrix {
    type Err = Error;

    /// First line `N S`, then `N` lines of `S` integers.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty degree matrix".into()))?;
        let dims = parse_row(header)?;
        let [n, s] = dims[..] else {
            return Err(Error::Parse(format!(
                "header must be `N S`, got `{header}`"
            )));
        };
        let rows = lines.map(parse_row).collect::<Result<Vec<_>>>()?;
        if rows.len() != n as usize {
            return Err(Error::DimensionMismatch {
                expected: format!("{n} rows"),
                found: format!("{} rows", rows.len()),
            });
        }
        DegreeMatrix::new(s as usize, rows)
    }
}

fn parse_row(line: &str) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad entry `{t}`: {e}")))
        })
        .collect()
}

impl fmt::Display for DegreeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `sigma_j` in `s` variables; `sigma_0 = 1`, zero for `j > s`.
pub fn elementary_symmetric(s: usize, j: usize) -> SparsePoly {
    let mut out = SparsePoly::zero(s);
    if j > s {
        return out;
    }
    for mask in 0u64..(1u64 << s) {
        if mask.count_ones() as usize == j {
            let e: Vec<u32> = (0..s).map(|i| ((mask >> i) & 1) as u32).collect();
            out = &out + &SparsePoly::monomial(e, BigInt::one());
        }
    }
    out
}

/// `sigma_2 + 2 sigma_3 + ... + (S-1) sigma_S`.
fn master_numerator(s: usize) -> SparsePoly {
    (2..=s).fold(SparsePoly::zero(s), |acc, j| {
        &acc + &elementary_symmetric(s, j).scale(&BigInt::from(j - 1))
    })
}

/// `1 - sigma_2 - 2 sigma_3 - ... - (S-1) sigma_S`.
pub fn det_master_closed_form(s: usize) -> SparsePoly {
    &SparsePoly::one(s) - &master_numerator(s)
}

fn to_count(c: BigInt, what: &str) -> Result<ExactCount> {
    ExactCount::try_from_bigint(c).ok_or_else(|| {
        Error::InternalInconsistency(format!("{what} produced a negative coefficient"))
    })
}

/// Top-corner coefficient of `prod_j (X - x_j)^{n_j}`.
pub fn e_by_product(profile: &Profile) -> ExactCount {
    let s = profile.len();
    let bound = profile.parts();
    let mut acc = SparsePoly::one(s);
    for (j, &n) in bound.iter().enumerate() {
        let form: Vec<i64> = (0..s).map(|i| i64::from(i != j)).collect();
        let form = SparsePoly::linear_form(&form);
        for _ in 0..n {
            acc = acc.mul_truncated(&form, bound);
        }
    }
    to_count(acc.coeff(bound), "product expansion")
        .expect("linear forms have positive coefficients")
}

/// Taylor coefficients of the master-theorem series inside `bound`.
fn master_series_box(bound: &[u32]) -> SparsePoly {
    let s = bound.len();
    let numerator = master_numerator(s).truncate(bound);
    let total: u32 = bound.iter().sum();
    let mut sum = SparsePoly::one(s);
    let mut power = SparsePoly::one(s);
    // each factor raises the total degree by at least two
    for _ in 0..total / 2 {
        power = power.mul_truncated(&numerator, bound);
        if power.is_zero() {
            break;
        }
        sum = &sum + &power;
    }
    sum
}

/// Coefficient of `x^n` in the geometric series of the master-theorem denominator.
pub fn e_by_series(profile: &Profile) -> ExactCount {
    let series = master_series_box(profile.parts());
    to_count(series.coeff(profile.parts()), "series expansion")
        .expect("series has positive coefficients")
}

/// Coefficient of `x^m` in `sigma_S / (1 - sigma_2 - ... - (S-1) sigma_S)`.
pub fn tmne_max_by_series(options: &Profile) -> Result<ExactCount> {
    options.to_blocks()?;
    let bound = options.parts();
    let s = bound.len();
    let series = master_series_box(bound);
    let numer = elementary_symmetric(s, s).truncate(bound);
    to_count(
        series.mul_truncated(&numer, bound).coeff(bound),
        "tmne series",
    )
}

/// Determinant of a square matrix of polynomials, by cofactor expansion
/// memoized on the set of columns already used.
pub fn poly_determinant(matrix: &[Vec<SparsePoly>], nvars: usize) -> SparsePoly {
    let n = matrix.len();
    assert!(n < 64, "matrix too large");
    assert!(matrix.iter().all(|r| r.len() == n), "matrix must be square");
    let mut memo: HashMap<u64, SparsePoly> = HashMap::new();
    minor(matrix, 0, nvars, &mut memo)
}

fn minor(
    m: &[Vec<SparsePoly>],
    used: u64,
    nvars: usize,
    memo: &mut HashMap<u64, SparsePoly>,
) -> SparsePoly {
    let row = used.count_ones() as usize;
    if row == m.len() {
        return SparsePoly::one(nvars);
    }
    if let Some(v) = memo.get(&used) {
        return v.clone();
    }
    let mut acc = SparsePoly::zero(nvars);
    let mut free_before = 0;
    for col in 0..m.len() {
        if used & (1 << col) != 0 {
            continue;
        }
        let entry = &m[row][col];
        if !entry.is_zero() {
            let sub = minor(m, used | (1 << col), nvars, memo);
            let term = entry * &sub;
            acc = if free_before % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        free_before += 1;
    }
    memo.insert(used, acc.clone());
    acc
}

/// `det(Id - V A)` with `V = diag(x_1, ..., x_S)` and `A` the all-ones matrix
/// with zero diagonal.
pub fn det_master(s: usize) -> SparsePoly {
    let matrix: Vec<Vec<SparsePoly>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| {
                    if i == j {
                        SparsePoly::one(s)
                    } else {
                        -&SparsePoly::variable(s, i)
                    }
                })
                .collect()
        })
        .collect();
    poly_determinant(&matrix, s)
}

/// Determinant of the all-ones matrix plus `diag(x_1, ..., x_T)`.
pub fn edet_check(t: usize) -> SparsePoly {
    let matrix: Vec<Vec<SparsePoly>> = (0..t)
        .map(|i| {
            (0..t)
                .map(|j| {
                    if i == j {
                        &SparsePoly::one(t) + &SparsePoly::variable(t, i)
                    } else {
                        SparsePoly::one(t)
                    }
                })
                .collect()
        })
        .collect();
    poly_determinant(&matrix, t)
}

/// Multihomogeneous Bezout number: coefficient of `x^n` in
/// `prod_i (d_i1 x_1 + ... + d_iS x_S)`.
pub fn bezout_bound(blocks: &Profile, degrees: &DegreeMatrix) -> Result<ExactCount> {
    let n = blocks.total() as usize;
    if degrees.ncols() != blocks.len() || degrees.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n} x {}", blocks.len()),
            found: format!("{} x {}", degrees.nrows(), degrees.ncols()),
        });
    }
    let bound = blocks.parts();
    let mut acc = SparsePoly::one(blocks.len());
    for row in degrees.rows() {
        acc = acc.mul_truncated(&SparsePoly::linear_form(row), bound);
        if acc.is_zero() {
            return Ok(ExactCount::zero());
        }
    }
    to_count(acc.coeff(bound), "bezout product")
}

/// `(1 + t)^{S-1} (1 - (S-1) t)` as coefficients of `t^0, t^1, ...`.
pub fn det_master_diagonal(s: usize) -> Vec<BigInt> {
    if s == 0 {
        return vec![BigInt::one()];
    }
    let mut out: Vec<BigInt> = vec![BigInt::one()];
    for _ in 0..s - 1 {
        let mut next = vec![BigInt::zero(); out.len() + 1];
        for (k, c) in out.iter().enumerate() {
            next[k] += c;
            next[k + 1] += c;
        }
        out = next;
    }
    let factor = BigInt::from(s as i64 - 1);
    let mut res = vec![BigInt::zero(); out.len() + 1];
    for (k, c) in out.iter().enumerate() {
        res[k] += c;
        res[k + 1] -= c * &factor;
    }
    while res.last().is_some_and(|c| c.is_zero()) {
        res.pop();
    }
    res
}
