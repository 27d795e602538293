//! Floating-point leading-order estimates, all computed in log space.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::kernel::{ExactCount, Profile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    /// `exp(log_value)`; infinite when that overflows.
    pub value: f64,
    pub log_value: f64,
}

impl AsymptoticEstimate {
    pub fn from_log(log_value: f64) -> Self {
        AsymptoticEstimate {
            value: log_value.exp(),
            log_value,
        }
    }

    /// `exact / estimate`.
    pub fn ratio_to(&self, exact: &ExactCount) -> f64 {
        (exact.ln() - self.log_value).exp()
    }

    /// Relative difference between two estimates.
    pub fn relative_gap(&self, other: &AsymptoticEstimate) -> f64 {
        (self.log_value - other.log_value).exp_m1().abs()
    }
}

fn ln_factorial(n: f64) -> f64 {
    ln_gamma(n + 1.0)
}

/// `sqrt(S) (S-1)^(Sn+S-1) / (2S(S-2) pi n)^((S-1)/2)`, estimating `E(n, ..., n)`.
pub fn asym_diagonal_e(s: u32, n: u32) -> Result<AsymptoticEstimate> {
    if s < 3 {
        return Err(Error::InvalidArgs(format!(
            "diagonal estimate needs S >= 3, got {s}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgs("diagonal estimate needs n >= 1".into()));
    }
    let (s, n) = (f64::from(s), f64::from(n));
    let log = 0.5 * s.ln() + (s * n + s - 1.0) * (s - 1.0).ln()
        - 0.5 * (s - 1.0) * (2.0 * s * (s - 2.0) * PI * n).ln();
    Ok(AsymptoticEstimate::from_log(log))
}

/// Estimate of `E(a, b, c)` for a direction strictly inside the triangle cone.
pub fn asym_e3(a: u32, b: u32, c: u32) -> Result<AsymptoticEstimate> {
    let (a, b, c) = (f64::from(a), f64::from(b), f64::from(c));
    let (x, y, z) = (a + b - c, a - b + c, b - a + c);
    if x <= 0.0 || y <= 0.0 || z <= 0.0 {
        return Err(Error::DegenerateDirection(format!(
            "({a},{b},{c}) is on or outside the triangle boundary"
        )));
    }
    let disc = 2.0 * (a * b + a * c + b * c) - a * a - b * b - c * c;
    let log = (a + b + c + 1.0) * 2f64.ln() - PI.ln() - 0.5 * disc.ln()
        + ln_factorial(a)
        + ln_factorial(b)
        + ln_factorial(c)
        - ln_factorial(x)
        - ln_factorial(y)
        - ln_factorial(z);
    Ok(AsymptoticEstimate::from_log(log))
}

/// Parameters of the four-player critical points; `u > 1`, `v > 1`, `0 < w < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UvwPoint {
    u: f64,
    v: f64,
    w: f64,
}

impl UvwPoint {
    pub fn new(u: f64, v: f64, w: f64) -> Result<Self> {
        if !(u > 1.0 && v > 1.0 && w > 0.0 && w < 1.0) {
            return Err(Error::InvalidArgs(format!(
                "(u, v, w) = ({u}, {v}, {w}) is outside u > 1, v > 1, 0 < w < 1"
            )));
        }
        Ok(UvwPoint { u, v, w })
    }

    pub fn symmetric() -> Self {
        UvwPoint {
            u: 1.5,
            v: 1.5,
            w: 0.5,
        }
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// Unnormalized direction `(alpha_1, ..., alpha_4)` this point is critical for.
    pub fn raw_direction(&self) -> [f64; 4] {
        let UvwPoint { u, v, w } = *self;
        [
            w * (u + v - w - 1.0),
            (1.0 - w) * (u + v + w - 2.0),
            u * (v - 1.0),
            (u - 1.0) * v,
        ]
    }

    /// Direction scaled so the components sum to 4.
    pub fn direction(&self) -> [f64; 4] {
        let d = self.raw_direction();
        let total: f64 = d.iter().sum();
        d.map(|x| 4.0 * x / total)
    }

    pub fn point(&self) -> [f64; 4] {
        let UvwPoint { u, v, w } = *self;
        [
            w / (u + v - w - 1.0),
            (1.0 - w) / (u + v + w - 2.0),
            (v - 1.0) / u,
            (u - 1.0) / v,
        ]
    }

    pub fn k(&self) -> f64 {
        let UvwPoint { u, v, w } = *self;
        w * (1.0 - w) * ((u - v).powi(2) + u + v - 2.0) + (u - 1.0) * (v - 1.0) * (u + v - 1.0)
    }

    /// `u(v-1) / alpha_3` for the normalized direction.
    pub fn xi(&self) -> f64 {
        self.raw_direction()[2] / self.direction()[2]
    }
}

/// Estimate of `E(alpha_1 n, ..., alpha_4 n)` where `alpha` is the direction
/// of `point` normalized to sum 4.
pub fn asym_e4(point: &UvwPoint, n: u32) -> Result<AsymptoticEstimate> {
    let point = UvwPoint::new(point.u, point.v, point.w)?;
    if n == 0 {
        return Err(Error::InvalidArgs("n must be positive".into()));
    }
    let n = f64::from(n);
    let d = point.direction();
    let x = point.point();
    let exponent: f64 = -n * d.iter().zip(&x).map(|(di, xi)| di * xi.ln()).sum::<f64>();
    let prod_x: f64 = x.iter().product();
    let log = exponent
        - (4.0 * (point.u + point.v - 1.0)).ln()
        - 0.5 * (point.k() * prod_x).ln()
        - 1.5 * (PI * n / point.xi()).ln();
    Ok(AsymptoticEstimate::from_log(log))
}

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 200;
const BOX_MARGIN: f64 = 1e-12;

fn residual(z: [f64; 3], target: &[f64; 4]) -> Option<[f64; 3]> {
    let point = UvwPoint::new(z[0], z[1], z[2]).ok()?;
    let d = point.raw_direction();
    if d.iter().any(|&x| x <= 0.0) {
        return None;
    }
    let r = |i: usize| (d[i] / d[2]).ln() - (target[i] / target[2]).ln();
    Some([r(0), r(1), r(3)])
}

fn norm(r: &[f64; 3]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn project(z: [f64; 3]) -> [f64; 3] {
    [
        z[0].max(1.0 + BOX_MARGIN),
        z[1].max(1.0 + BOX_MARGIN),
        z[2].clamp(BOX_MARGIN, 1.0 - BOX_MARGIN),
    ]
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    if d.abs() < 1e-300 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut m = a;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        *slot = det(&m) / d;
    }
    Some(out)
}

/// Finds `(u, v, w)` whose direction is proportional to `direction`, by damped
/// Newton iteration from the symmetric point.
pub fn invert_uvw(direction: [f64; 4]) -> Result<UvwPoint> {
    if direction.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidArgs(format!(
            "direction {direction:?} must be positive"
        )));
    }
    let mut z = [1.5, 1.5, 0.5];
    let mut r = residual(z, &direction).expect("symmetric start is admissible");
    for _ in 0..NEWTON_MAX_ITER {
        if norm(&r) < NEWTON_TOL {
            return Ok(UvwPoint::new(z[0], z[1], z[2]).expect("iterate stays in the box"));
        }
        let mut jac = [[0.0; 3]; 3];
        for col in 0..3 {
            let h = 1e-7 * z[col].abs().max(1e-3);
            let mut zp = z;
            zp[col] += h;
            let mut zm = z;
            zm[col] -= h;
            let (Some(rp), Some(rm)) = (residual(zp, &direction), residual(zm, &direction)) else {
                return Err(Error::NoAdmissibleSolution(format!(
                    "iterate reached the box boundary at {z:?}"
                )));
            };
            for row in 0..3 {
                jac[row][col] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        let step = solve3(jac, r.map(|x| -x))
            .ok_or_else(|| Error::NoAdmissibleSolution(format!("singular Jacobian at {z:?}")))?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let cand = project([z[0] + t * step[0], z[1] + t * step[1], z[2] + t * step[2]]);
            if let Some(rc) = residual(cand, &direction) {
                if norm(&rc) < norm(&r) {
                    accepted = Some((cand, rc));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, rc)) => {
                z = cand;
                r = rc;
            }
            None => {
                return Err(Error::NoAdmissibleSolution(format!(
                    "no descent step from {z:?} (residual {:.3e})",
                    norm(&r)
                )))
            }
        }
    }
    if norm(&r) < NEWTON_TOL {
        return Ok(UvwPoint::new(z[0], z[1], z[2]).expect("iterate stays in the box"));
    }
    Err(Error::NoAdmissibleSolution(format!(
        "no convergence after {NEWTON_MAX_ITER} iterations (residual {:.3e})",
        norm(&r)
    )))
}

/// `m_1...m_S / ((M-m_1)...(M-m_S)) * M!/(m_1!...m_S!)`, estimating `B(m)`.
pub fn asym_b(options: &Profile) -> Result<AsymptoticEstimate> {
    let m = options.parts();
    if m.len() < 2 || m.contains(&0) {
        return Err(Error::InvalidArgs(format!(
            "estimate of B needs S >= 2 positive parts, got ({options})"
        )));
    }
    let total = options.total() as f64;
    let mut log = ln_factorial(total);
    for &mj in m {
        let mj = f64::from(mj);
        log += mj.ln() - (total - mj).ln() - ln_factorial(mj);
    }
    Ok(AsymptoticEstimate::from_log(log))
}

/// The smooth-point form of the same estimate,
/// `sqrt(M m_1...m_S) / ((2 pi)^((S-1)/2) prod (M-m_j)) * M^M / prod m_j^m_j`.
/// It differs from [`asym_b`] only by Stirling corrections.
pub fn asym_b_smooth_point(options: &Profile) -> Result<AsymptoticEstimate> {
    let m = options.parts();
    if m.len() < 2 || m.contains(&0) {
        return Err(Error::InvalidArgs(format!(
            "estimate of B needs S >= 2 positive parts, got ({options})"
        )));
    }
    let total = options.total() as f64;
    let s = m.len() as f64;
    let mut log = 0.5 * total.ln() - 0.5 * (s - 1.0) * (2.0 * PI).ln() + total * total.ln();
    for &mj in m {
        let mj = f64::from(mj);
        log += 0.5 * mj.ln() - (total - mj).ln() - mj * mj.ln();
    }
    Ok(AsymptoticEstimate::from_log(log))
}

/// `S^(Sm+1/2) / ((2 pi m)^((S-1)/2) (S-1)^S)`, estimating `B(m, ..., m)`.
pub fn asym_b_diagonal(s: u32, m: u32) -> Result<AsymptoticEstimate> {
    if s < 2 || m == 0 {
        return Err(Error::InvalidArgs(format!(
            "need S >= 2 and m >= 1, got S={s} m={m}"
        )));
    }
    let (s, m) = (f64::from(s), f64::from(m));
    let log = (s * m + 0.5) * s.ln() - 0.5 * (s - 1.0) * (2.0 * PI * m).ln() - s * (s - 1.0).ln();
    Ok(AsymptoticEstimate::from_log(log))
}
