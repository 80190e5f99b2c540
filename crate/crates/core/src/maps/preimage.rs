//! Branch-wise preimage enumeration.

use super::MapModel;
use crate::error::{Error, Result};

pub const DEFAULT_PREIMAGE_TOL: f64 = 1e-13;

const MAX_ITER: usize = 200;

/// All `z` with `f(z) = y`, one root per monotone branch and lift translate
/// whose image contains `y`, sorted ascending.
///
/// Each root is bracketed on its branch and solved by Newton steps that fall
/// back to bisection whenever they leave the bracket.
pub fn preimages<M: MapModel + ?Sized>(map: &M, y: f64, tol: f64) -> Result<Vec<f64>> {
    let domain = map.domain();
    let period = domain.length();
    let ends = map.branch_endpoints();
    let mut roots = Vec::with_capacity(2 * ends.len());

    for (b, w) in ends.windows(2).enumerate() {
        let (p, q) = (w[0], w[1]);
        let fp = map.branch_lift(b, p);
        let fq = map.branch_lift(b, q);
        let (lo, hi) = if fp <= fq { (fp, fq) } else { (fq, fp) };
        if domain.is_circle() {
            let m_min = ((lo - y) / period).ceil() as i64;
            let m_max = ((hi - y) / period).floor() as i64;
            for m in m_min..=m_max {
                let target = y + m as f64 * period;
                roots.push(solve_on_branch(map, b, p, q, fp, fq, target, tol)?);
            }
        } else if y >= lo && y <= hi {
            roots.push(solve_on_branch(map, b, p, q, fp, fq, y, tol)?);
        }
    }

    let mut out: Vec<f64> = roots.into_iter().map(|z| domain.reduce(z)).collect();
    out.sort_by(f64::total_cmp);
    let merge = 8.0 * f64::EPSILON * period;
    out.dedup_by(|a, b| domain.dist(*a, *b) <= merge);
    if domain.is_circle() && out.len() > 1 && domain.dist(out[0], out[out.len() - 1]) <= merge {
        out.pop();
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn solve_on_branch<M: MapModel + ?Sized>(
    map: &M,
    branch: usize,
    p: f64,
    q: f64,
    fp: f64,
    fq: f64,
    target: f64,
    tol: f64,
) -> Result<f64> {
    let gp = fp - target;
    let gq = fq - target;
    if gp == 0.0 {
        return Ok(p);
    }
    if gq == 0.0 {
        return Ok(q);
    }
    if gp.signum() == gq.signum() {
        return Err(Error::BranchResolutionFailure { y: target, lo: p, hi: q });
    }
    let increasing = gq > 0.0;
    let (mut a, mut b) = (p, q);
    let mut z = 0.5 * (a + b);
    for _ in 0..MAX_ITER {
        let g = map.branch_lift(branch, z) - target;
        if g == 0.0 {
            return Ok(z);
        }
        if (g > 0.0) == increasing {
            b = z;
        } else {
            a = z;
        }
        if b - a <= 2.0 * f64::EPSILON * z.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let d = map.raw_deriv(z);
        let newton = z - g / d;
        z = if d.is_finite() && d != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if z == a || z == b {
            break;
        }
    }
    // pick the better end of the final bracket
    let ga = (map.branch_lift(branch, a) - target).abs();
    let gb = (map.branch_lift(branch, b) - target).abs();
    let gz = (map.branch_lift(branch, z) - target).abs();
    let (best, resid) = [(z, gz), (a, ga), (b, gb)]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    let collapsed = b - a <= 4.0 * f64::EPSILON * best.abs().max(f64::MIN_POSITIVE);
    if resid > tol && !collapsed {
        return Err(Error::BranchResolutionFailure { y: target, lo: p, hi: q });
    }
    Ok(best)
}
