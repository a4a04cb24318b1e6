//! Bases of `M_N` and the biorthogonal pair.
//!
//! - `φ_n(x; α) = (-x)_n / (α - x)_n`
//! - `U_n(x; α, β, N) = Σ_k C_{n,k} φ_k(x; α)`, normalized so `U_n → 1` as `x → ∞`
//! - `V_n(x; α, β, N) = U_n(N - x; β + 2 - α, β, N)`
//!
//! `U_n` has two independent constructions (closed-form coefficients and the
//! two-term recurrence) plus a pointwise one through the terminating
//! hypergeometric sum; tests hold them against each other.

use num_traits::Zero;
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernel::{
    factorial, fmt_rat, hyp_sum_terminating, int, one, partial_fractions, pochhammer,
    ratfun_reduce, PartialFractions, Poly, RatFun, RatScalar,
};
use crate::matrix::{Basis, ExactMatrix};
use crate::operators::GridFun;
use crate::params::Params;
use crate::report::{ReportBuilder, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiBasisElement {
    pub n: usize,
    pub alpha: RatScalar,
    pub fun: RatFun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalU {
    pub n: usize,
    pub params: Params,
    pub fun: RatFun,
    pub pfrac: PartialFractions,
    /// `C_{n,k}` for `k = 0..=n`.
    pub coeffs: Vec<RatScalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalV {
    pub n: usize,
    pub params: Params,
    pub fun: RatFun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub values: GridFun,
    pub params: Params,
}

fn check_index(n: usize, p: &Params) -> Result<()> {
    if n > p.n {
        return Err(Error::InvalidIndex { n, max: p.n });
    }
    Ok(())
}

fn ensure_valid(p: &Params) -> Result<()> {
    if p.forced {
        Ok(())
    } else {
        p.validate()
    }
}

/// `(c - x)_k` as a polynomial in `x`.
fn rising_in_minus_x(c: &RatScalar, k: usize) -> Poly {
    (0..k).fold(Poly::one(), |acc, i| {
        &acc * &Poly::new(vec![c + int(i as i64), -one()])
    })
}

/// `φ_n(x; α)` as a reduced rational function.
pub fn phi(n: usize, p: &Params) -> Result<PhiBasisElement> {
    check_index(n, p)?;
    let num = rising_in_minus_x(&RatScalar::zero(), n);
    let den = rising_in_minus_x(&p.alpha, n);
    Ok(PhiBasisElement {
        n,
        alpha: p.alpha.clone(),
        fun: ratfun_reduce(num, den)?,
    })
}

/// `C_{n,0} = (-1)^n (-N)_n / (β + 1)_n`
fn leading_coefficient(n: usize, p: &Params) -> Result<RatScalar> {
    let den = pochhammer(&(&p.beta + one()), n);
    if den.is_zero() {
        return Err(Error::DegenerateDenominator {
            what: "(beta+1)_n",
            n,
        });
    }
    let sign = if n.is_multiple_of(2) { one() } else { -one() };
    Ok(sign * pochhammer(&-p.n_rat(), n) / den)
}

/// Closed-form `C_{n,k} = C_{n,0} (-n)_k (β+n-N)_k / (k! (-N)_k)`.
pub fn u_coefficients_closed(n: usize, p: &Params) -> Result<Vec<RatScalar>> {
    check_index(n, p)?;
    let c0 = leading_coefficient(n, p)?;
    let nn = int(n as i64);
    let shifted = &p.beta + &nn - p.n_rat();
    Ok((0..=n)
        .map(|k| {
            &c0 * pochhammer(&-nn.clone(), k) * pochhammer(&shifted, k)
                / (factorial(k) * pochhammer(&-p.n_rat(), k))
        })
        .collect())
}

/// `C_{n,k}` from `(k+1)(k-N) C_{n,k+1} = [λ_n - k(N-β-k)] C_{n,k}`.
pub fn u_coefficients_recurrence(n: usize, p: &Params) -> Result<Vec<RatScalar>> {
    check_index(n, p)?;
    let big_n = p.n_rat();
    let eig = |m: usize| {
        let m = int(m as i64);
        &m * (&big_n - &p.beta - &m)
    };
    let lambda_n = eig(n);
    let mut out = vec![leading_coefficient(n, p)?];
    for k in 0..n {
        let kk = int(k as i64);
        let lhs = (&kk + one()) * (&kk - &big_n);
        let next = (&lambda_n - eig(k)) * &out[k] / lhs;
        out.push(next);
    }
    Ok(out)
}

fn assemble_u(n: usize, p: &Params, coeffs: Vec<RatScalar>) -> Result<RationalU> {
    let mut fun = RatFun::zero();
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            fun = &fun + &phi(k, p)?.fun.scale(c);
        }
    }
    let ladder: Vec<RatScalar> = (0..n).map(|k| &p.alpha + int(k as i64)).collect();
    let pfrac = partial_fractions(&fun, &ladder)?;
    Ok(RationalU {
        n,
        params: p.clone(),
        fun,
        pfrac,
        coeffs,
    })
}

/// `U_n` from the closed-form series coefficients.
pub fn build_u_series(n: usize, p: &Params) -> Result<RationalU> {
    ensure_valid(p)?;
    let c = u_coefficients_closed(n, p)?;
    assemble_u(n, p, c)
}

/// `U_n` from the two-term recurrence for its `φ`-coefficients.
pub fn build_u_recurrence(n: usize, p: &Params) -> Result<RationalU> {
    ensure_valid(p)?;
    let c = u_coefficients_recurrence(n, p)?;
    assemble_u(n, p, c)
}

/// `U_n(x)` at a single point through the terminating `₃F₂` sum, without
/// building the rational function.
pub fn eval_u_hypergeometric(n: usize, p: &Params, x: &RatScalar) -> Result<RatScalar> {
    check_index(n, p)?;
    let c0 = leading_coefficient(n, p)?;
    let top = [
        -x.clone(),
        -int(n as i64),
        &p.beta + int(n as i64) - p.n_rat(),
    ];
    let bottom = [-p.n_rat(), &p.alpha - x];
    Ok(c0 * hyp_sum_terminating(&top, &bottom, n)?)
}

pub fn build_v(n: usize, p: &Params) -> Result<RationalV> {
    ensure_valid(p)?;
    let u = build_u_series(n, &p.s_image())?;
    Ok(RationalV {
        n,
        params: p.clone(),
        fun: u.fun.reflect(&p.n_rat()),
    })
}

pub fn u_family(p: &Params) -> Result<Vec<RationalU>> {
    (0..=p.n).map(|n| build_u_series(n, p)).collect()
}

pub fn v_family(p: &Params) -> Result<Vec<RationalV>> {
    (0..=p.n).map(|n| build_v(n, p)).collect()
}

/// Hypergeometric weight on the grid; sums to one.
pub fn weight(p: &Params) -> Result<Weight> {
    ensure_valid(p)?;
    let big_n = p.n_rat();
    let c = &p.beta - &p.alpha - &big_n + int(2);
    let norm_den = pochhammer(&(&p.beta - &big_n + one()), p.n);
    if norm_den.is_zero() {
        return Err(Error::DegenerateDenominator {
            what: "(beta-N+1)_N",
            n: p.n,
        });
    }
    let norm = pochhammer(&c, p.n) / norm_den;
    let one_minus_alpha = one() - &p.alpha;
    let values = (0..=p.n)
        .map(|x| {
            let den = factorial(x) * pochhammer(&c, x);
            if den.is_zero() {
                return Err(Error::DegenerateDenominator {
                    what: "(beta-alpha-N+2)_x",
                    n: x,
                });
            }
            Ok(&norm * pochhammer(&-big_n.clone(), x) * pochhammer(&one_minus_alpha, x) / den)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Weight {
        values: GridFun::new(values),
        params: p.clone(),
    })
}

/// `Σ_x w_x f(x) g(x)`
pub fn inner_product(f: &GridFun, g: &GridFun, w: &Weight) -> Result<RatScalar> {
    let len = w.values.values.len();
    for other in [f.values.len(), g.values.len()] {
        if other != len {
            return Err(Error::DimensionMismatch {
                left: len,
                right: other,
            });
        }
    }
    Ok(w.values
        .values
        .iter()
        .zip(&f.values)
        .zip(&g.values)
        .fold(RatScalar::zero(), |acc, ((w, a), b)| acc + w * a * b))
}

/// The basis functions sampled on the grid.
pub fn basis_functions(basis: Basis, p: &Params) -> Result<Vec<GridFun>> {
    match basis {
        Basis::Delta => Ok((0..=p.n).map(|k| GridFun::delta(k, p.n)).collect()),
        Basis::Phi => (0..=p.n)
            .map(|k| GridFun::sample(&phi(k, p)?.fun, p.n))
            .collect(),
        Basis::U => u_family(p)?
            .iter()
            .map(|u| GridFun::sample(&u.fun, p.n))
            .collect(),
        Basis::V => v_family(p)?
            .iter()
            .map(|v| GridFun::sample(&v.fun, p.n))
            .collect(),
    }
}

/// Matrix whose column `k` is basis function `k` on the grid.
pub fn basis_matrix(basis: Basis, p: &Params) -> Result<ExactMatrix> {
    let cols: Vec<Vec<RatScalar>> = basis_functions(basis, p)?
        .into_iter()
        .map(|g| g.values)
        .collect();
    ExactMatrix::from_columns(&cols, Basis::Delta)
}

/// Coefficients `c` with `f = Σ c_k b_k` on the grid.
pub fn expand_in_basis(f: &GridFun, basis: Basis, p: &Params) -> Result<Vec<RatScalar>> {
    if f.values.len() != p.n + 1 {
        return Err(Error::DimensionMismatch {
            left: p.n + 1,
            right: f.values.len(),
        });
    }
    if basis == Basis::Delta {
        return Ok(f.values.clone());
    }
    basis_matrix(basis, p)?.solve(&f.values)
}

/// `G[n][m] = (U_n, V_m)`
pub fn gram_matrix(p: &Params) -> Result<ExactMatrix> {
    let w = weight(p)?;
    let us = basis_functions(Basis::U, p)?;
    let vs = basis_functions(Basis::V, p)?;
    let mut g = ExactMatrix::zeros(p.n + 1, Basis::Delta);
    for (n, u) in us.iter().enumerate() {
        for (m, v) in vs.iter().enumerate() {
            g.set(n, m, inner_product(u, v, &w)?);
        }
    }
    Ok(g)
}

/// Off-diagonal entries of the `U`/`V` Gram matrix vanish. Diagonal values
/// are reported; a vanishing one is flagged but does not fail the check.
pub fn verify_biorthogonality(p: &Params) -> VerificationReport {
    ReportBuilder::new("biorthogonality", p).run(|rb| {
        let g = gram_matrix(p)?;
        let diag: Vec<String> = (0..=p.n).map(|n| fmt_rat(g.get(n, n))).collect();
        let vanishing: Vec<usize> = (0..=p.n).filter(|&n| g.get(n, n).is_zero()).collect();
        rb.detail("diagonal", diag);
        rb.detail("vanishing_diagonal", vanishing);
        for n in 0..=p.n {
            for m in 0..=p.n {
                if n != m && !g.get(n, m).is_zero() {
                    return Ok(Some(json!({
                        "n": n, "m": m, "value": fmt_rat(g.get(n, m)),
                    })));
                }
            }
        }
        Ok(None)
    })
}

/// Weight sums to one and is invariant under `x -> N - x`, `α -> β + 2 - α`.
pub fn verify_weight(p: &Params) -> VerificationReport {
    ReportBuilder::new("weight", p).run(|rb| {
        let w = weight(p)?;
        let total = w.values.values.iter().fold(RatScalar::zero(), |a, v| a + v);
        rb.detail(
            "values",
            w.values.values.iter().map(fmt_rat).collect::<Vec<_>>(),
        );
        if total != one() {
            return Ok(Some(json!({ "reason": "sum", "sum": fmt_rat(&total) })));
        }
        let ws = weight(&p.s_image())?;
        for x in 0..=p.n {
            if ws.values.values[p.n - x] != w.values.values[x] {
                return Ok(Some(json!({ "reason": "S-invariance", "x": x })));
            }
        }
        Ok(None)
    })
}

/// Series and recurrence constructions of every `U_n` agree.
pub fn verify_dual_route(p: &Params) -> VerificationReport {
    ReportBuilder::new("dual_route", p).run(|rb| {
        let mut xi = Vec::new();
        for n in 0..=p.n {
            let a = build_u_series(n, p)?;
            let b = build_u_recurrence(n, p)?;
            if a.fun != b.fun || a.coeffs != b.coeffs {
                return Ok(Some(json!({
                    "n": n,
                    "series": a.fun.to_string(),
                    "recurrence": b.fun.to_string(),
                })));
            }
            if a.pfrac.constant != one() {
                return Ok(Some(json!({ "n": n, "reason": "U_n does not tend to 1" })));
            }
            xi.push(
                a.pfrac
                    .residues
                    .iter()
                    .map(|r| fmt_rat(&r.residue))
                    .collect::<Vec<_>>(),
            );
        }
        rb.detail("xi_nk", xi);
        Ok(None)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;
    use crate::params::params;

    #[test]
    fn phi_examples() {
        let p = params((1, 2), (1, 3), 3);
        assert_eq!(phi(0, &p).unwrap().fun, RatFun::one());
        let f1 = phi(1, &p).unwrap().fun;
        assert_eq!(f1.eval_grid(1).unwrap(), int(2));
        for n in 1..=3 {
            assert!(phi(n, &p).unwrap().fun.eval_grid(0).unwrap().is_zero());
        }
        assert_eq!(phi(4, &p), Err(Error::InvalidIndex { n: 4, max: 3 }));
    }

    #[test]
    fn u_low_order() {
        // β = 1 is an integer, so the documented value U_1(0) = N/(β+1)
        // goes through forced parameters.
        let p = Params::forced(rat(1, 2), int(1), 3).unwrap();
        assert_eq!(build_u_series(0, &p).unwrap().fun, RatFun::one());
        let u1 = build_u_series(1, &p).unwrap();
        assert_eq!(u1.fun.eval_grid(0).unwrap(), rat(3, 2));
        assert_eq!(u1.pfrac.constant, one());
        assert_eq!(u1.pfrac.residues.len(), 1);
        assert_eq!(u1.pfrac.residues[0].pole, rat(1, 2));
    }

    #[test]
    fn recurrence_first_step() {
        let p = params((2, 7), (-5, 3), 4);
        let c = u_coefficients_recurrence(1, &p).unwrap();
        let n = p.n_rat();
        assert_eq!(c[1], -(&n - &p.beta - one()) * &c[0] / &n);
        assert_eq!(u_coefficients_recurrence(0, &p).unwrap(), vec![one()]);
    }

    #[test]
    fn hypergeometric_evaluation_matches() {
        let p = params((2, 7), (-5, 3), 4);
        for n in 0..=4 {
            let u = build_u_series(n, &p).unwrap();
            for x in [rat(1, 3), int(2), rat(-9, 4)] {
                assert_eq!(
                    u.fun.eval(&x).unwrap(),
                    eval_u_hypergeometric(n, &p, &x).unwrap()
                );
            }
        }
    }

    #[test]
    fn v_poles_and_value_at_n() {
        let p = params((1, 2), (1, 3), 3);
        assert_eq!(build_v(0, &p).unwrap().fun, RatFun::one());
        for n in 1..=3usize {
            let v = build_v(n, &p).unwrap();
            let ladder: Vec<RatScalar> = (0..n)
                .map(|k| p.n_rat() + &p.alpha - &p.beta - int(2 + k as i64))
                .collect();
            let pf = partial_fractions(&v.fun, &ladder).unwrap();
            assert_eq!(pf.residues.len(), n);
            let s = p.s_image();
            let want = if n.is_multiple_of(2) { one() } else { -one() }
                * pochhammer(&-p.n_rat(), n)
                / pochhammer(&(&s.beta + one()), n);
            assert_eq!(v.fun.eval_grid(3).unwrap(), want);
        }
    }

    #[test]
    fn weight_small_instance() {
        // β = 2 is an integer: the documented instance needs the force path
        let p = Params::forced(rat(1, 2), int(2), 1).unwrap();
        let w = weight(&p).unwrap();
        assert_eq!(w.values.values, vec![rat(5, 4), rat(-1, 4)]);
    }

    #[test]
    fn inner_product_rules() {
        let p = params((1, 2), (1, 3), 2);
        let w = weight(&p).unwrap();
        let one_fn = GridFun::constant(one(), 2);
        assert_eq!(inner_product(&one_fn, &one_fn, &w).unwrap(), one());
        let short = GridFun::constant(one(), 1);
        assert!(matches!(
            inner_product(&short, &one_fn, &w),
            Err(Error::DimensionMismatch { .. })
        ));
        let u1 = GridFun::sample(&build_u_series(1, &p).unwrap().fun, 2).unwrap();
        let v0 = GridFun::sample(&build_v(0, &p).unwrap().fun, 2).unwrap();
        assert!(inner_product(&u1, &v0, &w).unwrap().is_zero());
    }

    #[test]
    fn expansions() {
        let p = params((1, 2), (1, 3), 3);
        let f = GridFun::sample(&phi(1, &p).unwrap().fun, 3).unwrap();
        assert_eq!(
            expand_in_basis(&f, Basis::Phi, &p).unwrap(),
            vec![int(0), int(1), int(0), int(0)]
        );
        let c = GridFun::constant(-p.alpha.clone(), 3);
        assert_eq!(
            expand_in_basis(&c, Basis::U, &p).unwrap(),
            vec![-p.alpha.clone(), int(0), int(0), int(0)]
        );
    }

    #[test]
    fn biorthogonality_small() {
        let p = params((1, 2), (1, 3), 2);
        let r = verify_biorthogonality(&p);
        assert!(r.passed(), "{r:?}");
        assert_eq!(gram_matrix(&p).unwrap().get(0, 0), &one());
    }
}
