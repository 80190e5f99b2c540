use std::fmt;
use std::sync::Arc;

use super::{MapModel, NonDegeneracy};
use crate::domain::Domain;
use crate::error::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied map: the caller provides the branch formula and its
/// derivative together with the critical set and branch partition.
#[derive(Clone)]
pub struct CustomMap {
    name: String,
    domain: Domain,
    lift: RealFn,
    deriv: RealFn,
    critical: Vec<f64>,
    branches: Vec<f64>,
    nondeg: Option<NonDegeneracy>,
}

impl fmt::Debug for CustomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomMap")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("critical", &self.critical)
            .field("branches", &self.branches)
            .finish()
    }
}

impl CustomMap {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        lift: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        mut critical: Vec<f64>,
        mut branches: Vec<f64>,
    ) -> Result<Self> {
        critical.sort_by(f64::total_cmp);
        branches.sort_by(f64::total_cmp);
        branches.dedup();
        if branches.first() != Some(&domain.lower) || branches.last() != Some(&domain.upper) {
            return Err(Error::InvalidParameter(
                "branch endpoints must start at domain.lower and end at domain.upper".into(),
            ));
        }
        if critical.iter().any(|c| !domain.contains(*c)) {
            return Err(Error::InvalidParameter("critical point outside the domain".into()));
        }
        Ok(CustomMap {
            name: name.into(),
            domain,
            lift: Arc::new(lift),
            deriv: Arc::new(deriv),
            critical,
            branches,
            nondeg: None,
        })
    }

    pub fn with_nondegeneracy(mut self, nd: NonDegeneracy) -> Self {
        self.nondeg = Some(nd);
        self
    }
}

impl MapModel for CustomMap {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn params(&self) -> Vec<(String, f64)> {
        Vec::new()
    }

    fn lift(&self, x: f64) -> f64 {
        (self.lift)(x)
    }

    fn raw_deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }

    fn critical_points(&self) -> &[f64] {
        &self.critical
    }

    fn branch_endpoints(&self) -> &[f64] {
        &self.branches
    }

    fn nondegeneracy(&self) -> Option<NonDegeneracy> {
        self.nondeg
    }
}
