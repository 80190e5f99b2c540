use serde::Serialize;

use super::{first_hyperbolic_time, HyperbolicParams};
use crate::error::{Error, Result};
use crate::maps::{preimages, MapModel, DEFAULT_PREIMAGE_TOL};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Depth-truncated adapted hyperbolic time
/// `max { h(z) - l : f^l(z) = x, 0 <= l <= L }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptedTime {
    /// The adapted time, or 1 when no ancestor produced a positive value.
    pub value: usize,
    /// `(depth, h)` of the maximising ancestor; `None` when the value 1 comes
    /// from the convention.
    pub witness: Option<(usize, usize)>,
    /// Nodes visited in the preimage tree.
    pub nodes: usize,
    /// Nodes whose first hyperbolic time was censored or hit the critical set.
    pub censored_nodes: usize,
}

impl AdaptedTime {
    /// True when at least one ancestor produced a positive `h(z) - l`.
    pub fn is_resolved(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn adapted_hyperbolic_time<M: MapModel + ?Sized>(
    map: &M,
    x: f64,
    params: &HyperbolicParams,
    depth: usize,
    n_max: usize,
    node_budget: usize,
) -> Result<AdaptedTime> {
    let mut stack = vec![(x, 0usize)];
    let mut nodes = 0usize;
    let mut censored = 0usize;
    let mut best: Option<(i64, usize, usize)> = None;

    while let Some((z, l)) = stack.pop() {
        nodes += 1;
        if nodes > node_budget {
            return Err(Error::PreimageExplosion { budget: node_budget });
        }
        match first_hyperbolic_time(map, z, params, n_max).value() {
            Some(h) => {
                let cand = h as i64 - l as i64;
                if best.map_or(true, |(b, _, _)| cand > b) {
                    best = Some((cand, l, h));
                }
            }
            None => censored += 1,
        }
        if l < depth {
            for w in preimages(map, z, DEFAULT_PREIMAGE_TOL)? {
                stack.push((w, l + 1));
            }
        }
    }

    let (value, witness) = match best {
        Some((v, l, h)) if v > 0 => (v as usize, Some((l, h))),
        _ => (1, None),
    };
    Ok(AdaptedTime { value, witness, nodes, censored_nodes: censored })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::FirstTime;
    use crate::maps::{Doubling, Intermittent};

    #[test]
    fn doubling_adapted_time_is_one() {
        let p = HyperbolicParams::new(0.6, 0.5, 1.0, 2.5).unwrap();
        let d = Doubling::new();
        for depth in [0, 1, 4] {
            let a = adapted_hyperbolic_time(&d, 0.3141, &p, depth, 50, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(a.value, 1);
            assert_eq!(a.nodes, (1 << (depth + 1)) - 1);
        }
    }

    #[test]
    fn depth_zero_is_first_time() {
        let p = HyperbolicParams::new(0.85, 0.5, 1.0, 3.0).unwrap();
        let t = Intermittent::new(0.1).unwrap();
        for x in [0.001, 0.2, 0.77] {
            let a = adapted_hyperbolic_time(&t, x, &p, 0, 1000, DEFAULT_NODE_BUDGET).unwrap();
            match first_hyperbolic_time(&t, x, &p, 1000) {
                FirstTime::Found(h) => assert_eq!(a.value, h),
                _ => assert_eq!(a.value, 1),
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let p = HyperbolicParams::new(0.6, 0.5, 1.0, 2.5).unwrap();
        let r = adapted_hyperbolic_time(&Doubling::new(), 0.3, &p, 12, 10, 100);
        assert_eq!(r, Err(Error::PreimageExplosion { budget: 100 }));
    }
}
