use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Poly, RatScalar};
use crate::error::{Error, Result};

/// Reduced rational function `num / den` in one variable.
///
/// `den` is monic and coprime to `num`; the zero function is `0 / 1`.
/// These two rules make the representation canonical, so `==` decides
/// equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

/// Builds the reduced fraction `num / den`.
pub fn ratfun_reduce(num: Poly, den: Poly) -> Result<RatFun> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RatFun::zero());
    }
    let g = num.gcd(&den);
    let (mut n, _) = num.div_rem(&g);
    let (mut d, _) = den.div_rem(&g);
    let lead = d.leading().cloned().expect("nonzero denominator");
    if !lead.is_one() {
        let inv = lead.recip();
        n = n.scale(&inv);
        d = d.scale(&inv);
    }
    Ok(RatFun { num: n, den: d })
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun::constant(RatScalar::one())
    }

    pub fn constant(c: RatScalar) -> Self {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    /// `(x - a)^{-1}`
    pub fn pole_monomial(a: &RatScalar) -> Self {
        RatFun {
            num: Poly::one(),
            den: Poly::linear_root(a),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact value at `x`, or `None` if `x` is a pole.
    pub fn eval(&self, x: &RatScalar) -> Option<RatScalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Value at an integer grid point, surfacing a pole as `PoleOnGrid`.
    pub fn eval_grid(&self, x: i64) -> Result<RatScalar> {
        self.eval(&RatScalar::from_integer(x.into()))
            .ok_or(Error::PoleOnGrid { x })
    }

    /// Composition `f(s·x + t)`.
    pub fn compose_linear(&self, s: &RatScalar, t: &RatScalar) -> Self {
        ratfun_reduce(self.num.compose_linear(s, t), self.den.compose_linear(s, t))
            .expect("linear substitution keeps the denominator nonzero")
    }

    /// `f(x + t)`
    pub fn shift(&self, t: &RatScalar) -> Self {
        self.compose_linear(&RatScalar::one(), t)
    }

    /// `f(c - x)`
    pub fn reflect(&self, c: &RatScalar) -> Self {
        self.compose_linear(&-RatScalar::one(), c)
    }

    pub fn scale(&self, s: &RatScalar) -> Self {
        if s.is_zero() {
            return RatFun::zero();
        }
        RatFun {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        ratfun_reduce(self.den.clone(), self.num.clone())
    }

    /// Roots of the denominator among the candidates (with no multiplicity
    /// bookkeeping; see `partial_fractions` for the checked version).
    pub fn poles_among<'a>(&self, candidates: &'a [RatScalar]) -> Vec<&'a RatScalar> {
        candidates
            .iter()
            .filter(|a| self.den.eval(a).is_zero())
            .collect()
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return ratfun_reduce(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        ratfun_reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("product of nonzero denominators")
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        ratfun_reduce(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl Div for &RatFun {
    type Output = Result<RatFun>;
    fn div(self, rhs: &RatFun) -> Result<RatFun> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        ratfun_reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn common_factor_cancels() {
        let f = ratfun_reduce(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(f.num(), &p(&[1, 1]));
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn denominator_is_made_monic() {
        let f = ratfun_reduce(p(&[0, 2]), p(&[2])).unwrap();
        assert_eq!(f.num(), &p(&[0, 1]));
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn coprime_input_is_unchanged() {
        let den = Poly::from_roots([rat(1, 2), rat(3, 2)].iter());
        let f = ratfun_reduce(Poly::one(), den.clone()).unwrap();
        assert_eq!(f.num(), &Poly::one());
        assert_eq!(f.den(), &den);
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(
            ratfun_reduce(Poly::one(), Poly::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn arithmetic_is_canonical() {
        // 1/(x-1) - 1/(x+1) = 2/(x^2-1)
        let a = RatFun::pole_monomial(&int(1));
        let b = RatFun::pole_monomial(&int(-1));
        let lhs = &a - &b;
        let rhs = ratfun_reduce(p(&[2]), p(&[-1, 0, 1])).unwrap();
        assert_eq!(lhs, rhs);
        assert!((&lhs - &rhs).is_zero());
        assert_eq!((&lhs / &lhs).unwrap(), RatFun::one());
    }

    #[test]
    fn eval_and_reflect() {
        let f = RatFun::pole_monomial(&rat(1, 2));
        assert_eq!(f.eval(&int(1)), Some(int(2)));
        assert_eq!(f.eval(&rat(1, 2)), None);
        // 1/((3 - x) - 1/2) = -1/(x - 5/2)
        let g = f.reflect(&int(3));
        assert_eq!(g, RatFun::pole_monomial(&rat(5, 2)).scale(&int(-1)));
    }
}
