//! The parameter triple `(alpha, beta, N)` and its genericity conditions.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{int, is_integer, rat, rat_serde, RatScalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    #[serde(with = "rat_serde")]
    pub alpha: RatScalar,
    #[serde(with = "rat_serde")]
    pub beta: RatScalar,
    #[serde(rename = "N")]
    pub n: usize,
    /// Set when genericity was not checked.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub forced: bool,
}

impl Params {
    /// Validated constructor: `N >= 1` and `alpha`, `beta`, `beta - alpha`
    /// all non-integer.
    pub fn new(alpha: RatScalar, beta: RatScalar, n: usize) -> Result<Self> {
        let p = Params {
            alpha,
            beta,
            n,
            forced: false,
        };
        p.validate()?;
        Ok(p)
    }

    /// Skips the genericity checks; only `N >= 1` is enforced. Downstream
    /// operations surface vanishing denominators as errors.
    pub fn forced(alpha: RatScalar, beta: RatScalar, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("N must be a positive integer".into()));
        }
        Ok(Params {
            alpha,
            beta,
            n,
            forced: true,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("N must be a positive integer".into()));
        }
        if is_integer(&self.alpha) {
            return Err(Error::InvalidParams(format!(
                "alpha = {} is an integer",
                self.alpha
            )));
        }
        if is_integer(&self.beta) {
            return Err(Error::InvalidParams(format!(
                "beta = {} is an integer",
                self.beta
            )));
        }
        let d = &self.beta - &self.alpha;
        if is_integer(&d) {
            return Err(Error::InvalidParams(format!(
                "beta - alpha = {d} is an integer"
            )));
        }
        Ok(())
    }

    pub fn is_generic(&self) -> bool {
        let probe = Params {
            forced: false,
            ..self.clone()
        };
        probe.validate().is_ok()
    }

    pub fn n_rat(&self) -> RatScalar {
        int(self.n as i64)
    }

    /// Same `beta` and `N`, different `alpha`.
    pub fn with_alpha(&self, alpha: RatScalar) -> Self {
        Params {
            alpha,
            ..self.clone()
        }
    }

    /// `alpha -> alpha + k`
    pub fn shift_alpha(&self, k: i64) -> Self {
        self.with_alpha(&self.alpha + int(k))
    }

    /// Parameters after the reflection `alpha -> beta + 2 - alpha`.
    pub fn s_image(&self) -> Self {
        self.with_alpha(&self.beta + int(2) - &self.alpha)
    }

    pub fn with_n(&self, n: usize) -> Self {
        Params { n, ..self.clone() }
    }
}

impl fmt::Debug for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(alpha={}, beta={}, N={})",
            self.alpha, self.beta, self.n
        )?;
        if self.forced {
            write!(f, " [forced]")?;
        }
        Ok(())
    }
}

/// Reproducible stream of generic `(alpha, beta)` pairs.
///
/// Numerators and denominators are small integers; draws that violate
/// genericity are rejected and redrawn.
pub struct ParamSampler {
    rng: ChaCha8Rng,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        ParamSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn small_fraction(&mut self) -> RatScalar {
        let num = self.rng.gen_range(-12i64..=12);
        let den = self.rng.gen_range(2i64..=9);
        rat(num, den)
    }

    pub fn draw_pair(&mut self) -> (RatScalar, RatScalar) {
        loop {
            let a = self.small_fraction();
            let b = self.small_fraction();
            let d: RatScalar = &b - &a;
            if !a.is_integer() && !b.is_integer() && !d.is_integer() {
                return (a, b);
            }
        }
    }

    pub fn draw(&mut self, n: usize) -> Params {
        let (a, b) = self.draw_pair();
        Params::new(a, b, n).expect("rejection sampling yields generic parameters")
    }
}

/// `count` generic parameter sets for fixed `N`, deterministic in `seed`.
pub fn seeded_draws(seed: u64, n: usize, count: usize) -> Vec<Params> {
    let mut s = ParamSampler::new(seed);
    (0..count).map(|_| s.draw(n)).collect()
}

/// Convenience for tests and examples: `alpha = a_num/a_den`, `beta = b_num/b_den`.
pub fn params(a: (i64, i64), b: (i64, i64), n: usize) -> Params {
    Params::new(rat(a.0, a.1), rat(b.0, b.1), n).expect("generic parameters")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genericity_conditions() {
        assert!(Params::new(rat(1, 2), rat(1, 3), 2).is_ok());
        assert!(Params::new(int(1), rat(1, 3), 2).is_err());
        assert!(Params::new(rat(1, 2), int(2), 2).is_err());
        assert!(Params::new(rat(1, 2), rat(5, 2), 2).is_err());
        assert!(Params::new(rat(1, 2), rat(1, 3), 0).is_err());
        let forced = Params::forced(int(1), int(1), 3).unwrap();
        assert!(forced.forced && !forced.is_generic());
    }

    #[test]
    fn s_image_is_an_involution() {
        let p = params((2, 7), (-5, 3), 4);
        assert_eq!(p.s_image().s_image(), p);
        assert!(p.s_image().is_generic());
    }

    #[test]
    fn draws_are_reproducible_and_generic() {
        let a = seeded_draws(7, 3, 10);
        let b = seeded_draws(7, 3, 10);
        assert_eq!(a, b);
        assert!(a.iter().all(Params::is_generic));
        assert_ne!(seeded_draws(8, 3, 10), a);
    }
}
