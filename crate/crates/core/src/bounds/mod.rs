//! Golden-ratio exponent certificates for root vectors and the bound checks
//! built on them.
//!
//! An [`ExponentVector`] `e` certifies a degeneracy vector `v` when
//! `phi^e_s <= v_s` for every coordinate. The functionals `psi` and `phi`
//! summarize certificates; [`max_exponent_vector`] returns the coordinatewise
//! largest certificate, which maximizes both.

mod golden;
mod main_lemma;
mod props;
mod remainders;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transfer::DegeneracyVector;

pub use golden::{golden_power_leq, scaled_root_bound, GoldenPower};
pub use main_lemma::{
    verify_main_lemma, Candidate, ChainDecomposition, MainLemmaOutcome, MAX_CHAIN,
};
pub use props::{verify_small_props, SmallPropClass, SmallPropReport, VerificationRecord};
pub use remainders::{find_remainders, strip_remainders, RemainderReport};

/// Exponents `(e0, e1, e2, e3)` of a componentwise lower bound `(phi^e_s)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub [u64; 4]);

impl ExponentVector {
    /// `phi^e_s <= v_s` for all `s`.
    pub fn certifies(&self, v: &DegeneracyVector) -> bool {
        self.0
            .iter()
            .zip(v.coords())
            .all(|(&e, x)| golden_power_leq(e, x))
    }
}

/// `2 (e1 + e2 + e3)`.
pub fn psi(e: &ExponentVector) -> u64 {
    2 * (e.0[1] + e.0[2] + e.0[3])
}

/// `psi(e)` minus the number of `s` with `e_s > e0`.
pub fn phi_functional(e: &ExponentVector) -> i64 {
    let above = e.0[1..].iter().filter(|&&x| x > e.0[0]).count() as i64;
    psi(e) as i64 - above
}

/// Largest `k` with `phi^k <= x`; `None` for `x = 0`.
pub fn max_exponent(x: &BigUint) -> Option<u64> {
    let mut p = GoldenPower::one();
    if !p.leq(x) {
        return None;
    }
    let mut k = 0;
    loop {
        let next = p.times_phi();
        if !next.leq(x) {
            return Some(k);
        }
        p = next;
        k += 1;
    }
}

/// Coordinatewise maximal certificate of `v`.
pub fn max_exponent_vector(v: &DegeneracyVector) -> Result<ExponentVector> {
    let mut out = [0u64; 4];
    for (s, x) in v.coords().iter().enumerate() {
        out[s] = max_exponent(x).ok_or(Error::UndefinedExponent { coordinate: s })?;
    }
    Ok(ExponentVector(out))
}

/// Which exponent the degeneracy bound uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVariant {
    /// `6 phi^((|D|+3)/36)` and `3 phi^(|G|/72)`.
    Printed,
    /// Exponents halved: `6 phi^((|D|+3)/72)` and `3 phi^(|G|/144)`, the
    /// constant an arithmetic-geometric mean step over three terms supports.
    Halved,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 2] = [BoundVariant::Printed, BoundVariant::Halved];

    pub fn theorem_denominator(self) -> u32 {
        match self {
            BoundVariant::Printed => 36,
            BoundVariant::Halved => 72,
        }
    }

    pub fn corollary_denominator(self) -> u32 {
        2 * self.theorem_denominator()
    }
}

/// `d >= 6 phi^((size + 3) / 36)`.
pub fn theorem_bound_check(size: usize, d: &BigUint) -> bool {
    theorem_bound(size, d, BoundVariant::Printed)
}

pub fn theorem_bound(size: usize, d: &BigUint, variant: BoundVariant) -> bool {
    scaled_root_bound(d, 6, size as u64 + 3, variant.theorem_denominator())
}

/// `matchings >= 3 phi^(g_size / 72)`.
pub fn corollary_bound_check(g_size: usize, matchings: &BigUint) -> bool {
    corollary_bound(g_size, matchings, BoundVariant::Printed)
}

pub fn corollary_bound(g_size: usize, matchings: &BigUint, variant: BoundVariant) -> bool {
    scaled_root_bound(matchings, 3, g_size as u64, variant.corollary_denominator())
}
