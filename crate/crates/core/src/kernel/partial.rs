use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{rat_serde, Poly, RatFun, RatScalar};
use crate::error::{Error, Result};

/// `constant + Σ residue / (x - pole)` with simple, pairwise distinct poles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialFractions {
    #[serde(with = "rat_serde")]
    pub constant: RatScalar,
    pub residues: Vec<Residue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residue {
    #[serde(with = "rat_serde")]
    pub pole: RatScalar,
    #[serde(with = "rat_serde")]
    pub residue: RatScalar,
}

impl PartialFractions {
    pub fn reconstruct(&self) -> RatFun {
        self.residues
            .iter()
            .fold(RatFun::constant(self.constant.clone()), |acc, r| {
                &acc + &RatFun::pole_monomial(&r.pole).scale(&r.residue)
            })
    }

    /// Residue at `pole`, zero when the pole is absent.
    pub fn residue_at(&self, pole: &RatScalar) -> RatScalar {
        self.residues
            .iter()
            .find(|r| &r.pole == pole)
            .map(|r| r.residue.clone())
            .unwrap_or_else(RatScalar::zero)
    }

    pub fn poles(&self) -> impl Iterator<Item = &RatScalar> {
        self.residues.iter().map(|r| &r.pole)
    }
}

/// Decomposes a proper-or-balanced reduced rational function whose poles are
/// all simple and drawn from `candidates`.
///
/// Roots are located by trial division against the candidate list; the
/// residue at a pole `a` is `num(a) / den'(a)`. Residues come back sorted by
/// pole.
pub fn partial_fractions(f: &RatFun, candidates: &[RatScalar]) -> Result<PartialFractions> {
    let num_deg = f.num().degree().unwrap_or(0);
    let den_deg = f.den().degree().unwrap_or(0);
    if !f.is_zero() && num_deg > den_deg {
        return Err(Error::ImproperFraction {
            num: num_deg,
            den: den_deg,
        });
    }
    let constant = if !f.is_zero() && num_deg == den_deg {
        // den is monic
        f.num().leading().cloned().unwrap_or_else(RatScalar::zero)
    } else {
        RatScalar::zero()
    };

    let den_prime = f.den().derivative();
    let mut remaining = f.den().clone();
    let mut residues = Vec::new();
    let mut seen: Vec<&RatScalar> = Vec::new();
    for a in candidates {
        if seen.contains(&a) {
            continue;
        }
        seen.push(a);
        if !remaining.eval(a).is_zero() {
            continue;
        }
        let (q, _) = remaining.div_rem(&Poly::linear_root(a));
        if q.eval(a).is_zero() {
            return Err(Error::RepeatedPole { pole: a.clone() });
        }
        remaining = q;
        let residue = f.num().eval(a) / den_prime.eval(a);
        residues.push(Residue {
            pole: a.clone(),
            residue,
        });
    }
    if let Some(d) = remaining.degree().filter(|&d| d > 0) {
        return Err(Error::IrrationalPole { residual_degree: d });
    }
    residues.sort_by(|l, r| l.pole.cmp(&r.pole));
    Ok(PartialFractions { constant, residues })
}
