//! Code families behind a common interface, selected by name.

use std::collections::BTreeMap;

use crate::affine::{build_affine_twisted, AffineParams};
use crate::codes::Code;
use crate::error::{Error, Result};
use crate::report::{CheckLevel, VerificationReport};
use crate::symplectic::{build_symplectic_twisted, SymplecticSpace, MAX_GUARDED_DEGREE};

/// Instance parameters as `(name, value)` pairs.
pub type Params = Vec<(&'static str, u32)>;

/// Ranges swept by a table run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_p: u32,
    pub max_n: u32,
    pub max_k: Option<usize>,
}

/// Closed-form values one table row must reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub r: usize,
    pub q: usize,
    pub delta_tw: usize,
    pub gap: usize,
}

pub trait CodeFamily: Send + Sync {
    fn name(&self) -> &'static str;
    /// Group label for a table row.
    fn label(&self, params: &Params) -> String;
    fn instances(&self, bounds: &Bounds) -> Vec<Params>;
    /// Validates parameters and size limits without building anything.
    fn guard(&self, params: &Params) -> Result<()>;
    fn build(&self, params: &Params, level: CheckLevel) -> Result<(Code, VerificationReport)>;
    fn expected(&self, params: &Params) -> Result<Expected>;
}

fn param(params: &Params, key: &str) -> Result<u32> {
    params
        .iter()
        .find(|(k, _)| *k == key)
        .map(|&(_, v)| v)
        .ok_or_else(|| Error::Usage(format!("missing parameter {key}")))
}

fn is_odd_prime(p: u32) -> bool {
    p > 2
        && p % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

pub struct AffineFamily;

impl AffineFamily {
    fn params(params: &Params) -> Result<AffineParams> {
        AffineParams::new(param(params, "p")?, param(params, "k")? as usize)
    }
}

impl CodeFamily for AffineFamily {
    fn name(&self) -> &'static str {
        "affine"
    }

    fn label(&self, params: &Params) -> String {
        format!(
            "Gbar_{} (p={})",
            param(params, "k").unwrap_or(0),
            param(params, "p").unwrap_or(0)
        )
    }

    fn instances(&self, bounds: &Bounds) -> Vec<Params> {
        (3..=bounds.max_p)
            .filter(|&p| is_odd_prime(p))
            .flat_map(|p| {
                let top = bounds
                    .max_k
                    .map_or(p as usize - 1, |k| k.min(p as usize - 1));
                (2..=top).map(move |k| vec![("p", p), ("k", k as u32)])
            })
            .collect()
    }

    fn guard(&self, params: &Params) -> Result<()> {
        Self::params(params)?.check_size()
    }

    fn build(&self, params: &Params, level: CheckLevel) -> Result<(Code, VerificationReport)> {
        build_affine_twisted(Self::params(params)?, level)
    }

    fn expected(&self, params: &Params) -> Result<Expected> {
        let a = Self::params(params)?;
        let p = a.p() as usize;
        Ok(Expected {
            r: p,
            q: a.num_points(),
            delta_tw: a.expected_delta_tw(),
            gap: p * p - p,
        })
    }
}

pub struct SymplecticFamily;

impl CodeFamily for SymplecticFamily {
    fn name(&self) -> &'static str {
        "symplectic"
    }

    fn label(&self, params: &Params) -> String {
        format!("Sp(4,{})", 1u32 << param(params, "n").unwrap_or(0))
    }

    fn instances(&self, bounds: &Bounds) -> Vec<Params> {
        (1..=bounds.max_n).map(|n| vec![("n", n)]).collect()
    }

    fn guard(&self, params: &Params) -> Result<()> {
        let n = param(params, "n")?;
        SymplecticSpace::new(n)?;
        if n > MAX_GUARDED_DEGREE {
            return Err(Error::SizeGuard(format!(
                "Sp(4, 2^{n}) is above the enumeration limit n <= {MAX_GUARDED_DEGREE}"
            )));
        }
        Ok(())
    }

    fn build(&self, params: &Params, level: CheckLevel) -> Result<(Code, VerificationReport)> {
        build_symplectic_twisted(SymplecticSpace::new(param(params, "n")?)?, level)
    }

    fn expected(&self, params: &Params) -> Result<Expected> {
        let n = param(params, "n")?;
        if n == 0 || n > 16 {
            return Err(Error::Usage(format!("n must be in 1..=16, got {n}")));
        }
        let q = 1usize << n;
        Ok(Expected {
            r: 2,
            q: q.pow(3) + q * q + q + 1,
            delta_tw: 2 * q.pow(3) + q * q,
            gap: q * q,
        })
    }
}

/// Families by name, iterated in name order.
pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Box<dyn CodeFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry {
            families: BTreeMap::new(),
        }
    }

    pub fn with_builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(AffineFamily));
        reg.register(Box::new(SymplecticFamily));
        reg
    }

    pub fn register(&mut self, family: Box<dyn CodeFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CodeFamily> {
        self.families.get(name).map(|f| f.as_ref()).ok_or_else(|| {
            Error::Usage(format!(
                "unknown family {name}; known: {}",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn CodeFamily> {
        self.families.values().map(|f| f.as_ref())
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}
