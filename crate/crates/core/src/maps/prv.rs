use super::{MapModel, NonDegeneracy};
use crate::domain::Domain;
use crate::error::{Error, Result};

/// Critical points below this magnitude are indistinguishable from the
/// accumulation point 0 and are dropped from the map's critical list.
const MIN_CRITICAL_MAGNITUDE: f64 = 1e-12;

/// `x_hat = exp(-atan(beta/alpha)/beta)`, the `k = 0` term of the critical
/// sequence.
pub fn prv_x_hat(alpha: f64, beta: f64) -> f64 {
    (-(beta / alpha).atan() / beta).exp()
}

/// The symmetric critical sequence `{±x_k : k0 <= k <= k_max}` with
/// `x_k = x_hat exp(-k pi / beta)`, sorted ascending.
pub fn prv_critical_points(alpha: f64, beta: f64, k0: u32, k_max: u32) -> Vec<f64> {
    let x_hat = prv_x_hat(alpha, beta);
    let pos: Vec<f64> = (k0..=k_max)
        .map(|k| x_hat * (-(k as f64) * std::f64::consts::PI / beta).exp())
        .collect();
    let mut out: Vec<f64> = pos.iter().map(|x| -x).collect();
    out.extend(pos.iter().rev());
    out
}

/// Infinite-modal circle map on `[-1, 1)` with endpoints identified.
///
/// On `[-y_hat, y_hat]` it is `a |z|^alpha sin(beta log(1/|z|))` (odd
/// extension); on `±[y_tilde, 1]` it is affine with slope `s >= 2` and lift
/// value `±degree` at `±1`; on `±[y_hat, y_tilde]` a cubic Hermite piece glues
/// the two in C¹ and monotone fashion. The slope `s` is chosen so that the
/// Hermite secant equals `s`, which keeps the glue monotone whenever
/// `Df(y_hat) / s <= 3`.
#[derive(Debug, Clone)]
pub struct Prv {
    a: f64,
    alpha: f64,
    beta: f64,
    k0: u32,
    k_max: u32,
    y_hat: f64,
    y_tilde: f64,
    degree: f64,
    slope: f64,
    glue_p0: f64,
    glue_m0: f64,
    glue_p1: f64,
    critical: Vec<f64>,
    branches: Vec<f64>,
    nondeg: NonDegeneracy,
}

#[derive(Debug, Clone, Copy)]
pub struct PrvParams {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k0: Option<u32>,
    pub k_max: u32,
    pub y_hat: Option<f64>,
    pub y_tilde: Option<f64>,
    pub degree: u32,
}

impl Default for PrvParams {
    fn default() -> Self {
        PrvParams {
            a: 1.0,
            alpha: 0.5,
            beta: std::f64::consts::PI,
            k0: None,
            k_max: 50,
            y_hat: None,
            y_tilde: None,
            degree: 2,
        }
    }
}

impl Prv {
    pub fn new(p: PrvParams) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(p.a > 0.0) || !(p.alpha > 0.0 && p.alpha < 1.0) || !(p.beta > 0.0) {
            return bad(format!(
                "prv map needs a > 0, 0 < alpha < 1, beta > 0 (got a={}, alpha={}, beta={})",
                p.a, p.alpha, p.beta
            ));
        }
        if p.degree < 1 {
            return bad("prv map needs degree >= 1".into());
        }
        // x_k is a local minimum of the positive branch exactly when k is odd
        let k0 = p.k0.unwrap_or(1);
        if k0 < 1 || k0 % 2 == 0 {
            return bad(format!("k0 must be odd and >= 1 so that x_k0 is a local minimum, got {k0}"));
        }
        if p.k_max < k0 {
            return bad(format!("k_max = {} must be >= k0 = {k0}", p.k_max));
        }
        let ratio = (-std::f64::consts::PI / p.beta).exp();
        let x_hat = prv_x_hat(p.alpha, p.beta);
        let x_k0 = x_hat * ratio.powi(k0 as i32);
        let eps1 = 2.0 * x_k0 / (1.0 + ratio);
        let y_hat = p.y_hat.unwrap_or(0.5 * (x_k0 + eps1));
        let y_tilde = p.y_tilde.unwrap_or(0.5 * (y_hat + eps1));
        if !(x_k0 < y_hat && y_hat < y_tilde && y_tilde < 1.0) {
            return bad(format!(
                "need x_k0 < y_hat < y_tilde < 1, got x_k0={x_k0}, y_hat={y_hat}, y_tilde={y_tilde}"
            ));
        }
        if k0 > 0 && y_hat >= x_k0 / ratio {
            return bad(format!("y_hat = {y_hat} must lie below the next critical point {}", x_k0 / ratio));
        }

        let mut m = Prv {
            a: p.a,
            alpha: p.alpha,
            beta: p.beta,
            k0,
            k_max: p.k_max,
            y_hat,
            y_tilde,
            degree: p.degree as f64,
            slope: 0.0,
            glue_p0: 0.0,
            glue_m0: 0.0,
            glue_p1: 0.0,
            critical: Vec::new(),
            branches: Vec::new(),
            nondeg: NonDegeneracy { big_b: 50.0, beta: 1.0 },
        };
        m.glue_p0 = m.inner(y_hat);
        m.glue_m0 = m.inner_deriv(y_hat);
        m.slope = (m.degree - m.glue_p0) / (1.0 - y_hat);
        m.glue_p1 = m.glue_p0 + m.slope * (y_tilde - y_hat);
        if m.slope < 2.0 {
            return bad(format!("outer slope {} < 2; raise the degree", m.slope));
        }
        if !(m.glue_m0 > 0.0 && m.glue_m0 / m.slope <= 3.0) {
            return bad(format!(
                "Hermite glue would not be monotone (Df(y_hat) = {}, slope = {})",
                m.glue_m0, m.slope
            ));
        }

        let mut crit: Vec<f64> = prv_critical_points(p.alpha, p.beta, k0, p.k_max)
            .into_iter()
            .filter(|x| x.abs() >= MIN_CRITICAL_MAGNITUDE)
            .collect();
        let mid = crit.len() / 2;
        crit.insert(mid, 0.0);
        let mut branches = Vec::with_capacity(crit.len() + 2);
        branches.push(-1.0);
        branches.extend_from_slice(&crit);
        branches.push(1.0);
        m.critical = crit;
        m.branches = branches;
        Ok(m)
    }

    pub fn k0(&self) -> u32 {
        self.k0
    }

    pub fn y_hat(&self) -> f64 {
        self.y_hat
    }

    pub fn y_tilde(&self) -> f64 {
        self.y_tilde
    }

    pub fn outer_slope(&self) -> f64 {
        self.slope
    }

    pub fn with_nondegeneracy(mut self, nd: NonDegeneracy) -> Self {
        self.nondeg = nd;
        self
    }

    #[inline]
    fn inner(&self, z: f64) -> f64 {
        if z == 0.0 {
            return 0.0;
        }
        self.a * z.powf(self.alpha) * (self.beta * (1.0 / z).ln()).sin()
    }

    #[inline]
    fn inner_deriv(&self, z: f64) -> f64 {
        let phase = self.beta * (1.0 / z).ln();
        self.a * z.powf(self.alpha - 1.0) * (self.alpha * phase.sin() - self.beta * phase.cos())
    }

    /// Profile on `[0, 1]`; the lift is its odd extension.
    #[inline]
    fn profile(&self, z: f64) -> f64 {
        if z <= self.y_hat {
            self.inner(z)
        } else if z < self.y_tilde {
            let h = self.y_tilde - self.y_hat;
            let t = (z - self.y_hat) / h;
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * self.glue_p0
                + (t3 - 2.0 * t2 + t) * h * self.glue_m0
                + (-2.0 * t3 + 3.0 * t2) * self.glue_p1
                + (t3 - t2) * h * self.slope
        } else {
            self.glue_p1 + self.slope * (z - self.y_tilde)
        }
    }

    #[inline]
    fn profile_deriv(&self, z: f64) -> f64 {
        if z <= self.y_hat {
            self.inner_deriv(z)
        } else if z < self.y_tilde {
            let h = self.y_tilde - self.y_hat;
            let t = (z - self.y_hat) / h;
            let t2 = t * t;
            ((6.0 * t2 - 6.0 * t) * self.glue_p0
                + (3.0 * t2 - 4.0 * t + 1.0) * h * self.glue_m0
                + (-6.0 * t2 + 6.0 * t) * self.glue_p1
                + (3.0 * t2 - 2.0 * t) * h * self.slope)
                / h
        } else {
            self.slope
        }
    }
}

impl MapModel for Prv {
    fn name(&self) -> &str {
        "prv"
    }

    fn domain(&self) -> Domain {
        Domain::circle(-1.0, 1.0)
    }

    fn params(&self) -> Vec<(String, f64)> {
        vec![
            ("a".into(), self.a),
            ("alpha".into(), self.alpha),
            ("beta".into(), self.beta),
            ("k0".into(), self.k0 as f64),
            ("k_max".into(), self.k_max as f64),
            ("y_hat".into(), self.y_hat),
            ("y_tilde".into(), self.y_tilde),
            ("degree".into(), self.degree),
        ]
    }

    #[inline]
    fn lift(&self, x: f64) -> f64 {
        if x < 0.0 {
            -self.profile(-x)
        } else {
            self.profile(x)
        }
    }

    #[inline]
    fn raw_deriv(&self, x: f64) -> f64 {
        self.profile_deriv(x.abs())
    }

    fn critical_points(&self) -> &[f64] {
        &self.critical
    }

    fn branch_endpoints(&self) -> &[f64] {
        &self.branches
    }

    fn nondegeneracy(&self) -> Option<NonDegeneracy> {
        Some(self.nondeg)
    }
}
