//! Exact powers of the golden ratio `phi = (1 + sqrt 5) / 2`.
//!
//! `phi^e = (L_e + F_e sqrt 5) / 2` with Lucas and Fibonacci numbers, so every
//! comparison against an integer reduces to integer arithmetic.

use num_bigint::{BigInt, BigUint, Sign};

/// `phi^e` as the pair `(l, f)` with `phi^e = (l + f sqrt 5) / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenPower {
    pub l: BigUint,
    pub f: BigUint,
}

impl GoldenPower {
    pub fn one() -> Self {
        GoldenPower {
            l: BigUint::from(2u32),
            f: BigUint::default(),
        }
    }

    pub fn new(exp: u64) -> Self {
        let mut p = Self::one();
        for _ in 0..exp {
            p = p.times_phi();
        }
        p
    }

    /// `phi^(e+1)` from `phi^e`.
    pub fn times_phi(&self) -> Self {
        GoldenPower {
            l: (&self.l + &self.f * 5u32) >> 1,
            f: (&self.l + &self.f) >> 1,
        }
    }

    /// `phi^e <= x`: `2x - l >= 0` and `(2x - l)^2 >= 5 f^2`.
    pub fn leq(&self, x: &BigUint) -> bool {
        let twice = x << 1;
        if twice < self.l {
            return false;
        }
        let gap = twice - &self.l;
        &gap * &gap >= &self.f * &self.f * 5u32
    }

    /// `l^2 - 5 f^2`, which is `4 (-1)^e`.
    pub fn norm(&self) -> BigInt {
        let l = BigInt::from_biguint(Sign::Plus, self.l.clone());
        let f = BigInt::from_biguint(Sign::Plus, self.f.clone());
        &l * &l - f.pow(2) * 5
    }
}

/// `phi^exp <= x`, decided exactly.
pub fn golden_power_leq(exp: u64, x: &BigUint) -> bool {
    GoldenPower::new(exp).leq(x)
}

/// `d >= c * phi^(exp / root)`, decided by raising both sides to the power
/// `root`: `d^root >= c^root * phi^exp`.
pub fn scaled_root_bound(d: &BigUint, coefficient: u32, exp: u64, root: u32) -> bool {
    assert!(root > 0, "root must be positive");
    let p = GoldenPower::new(exp);
    let scale = BigUint::from(coefficient).pow(root);
    // c^root * (l + f sqrt5) / 2 <= d^root
    let lhs_l = &p.l * &scale;
    let twice = d.pow(root) << 1;
    if twice < lhs_l {
        return false;
    }
    let gap = twice - lhs_l;
    let f = &p.f * &scale;
    &gap * &gap >= &f * &f * 5u32
}
