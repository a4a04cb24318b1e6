//! Closed-form coefficient families, matrix realizations in the `φ` and `U`
//! bases, and the verifiers for the bispectral identities.
//!
//! In the `U` basis column `n` of each matrix holds the coefficients of
//! `L U_n`: the `U_{n+1}` coefficient sits below the diagonal and the
//! `U_{n-1}` coefficient above it.

use num_traits::Zero;
use serde_json::json;

use crate::bases::{
    basis_functions, basis_matrix, build_u_series, build_v, inner_product, u_coefficients_closed,
    weight,
};
use crate::error::{Error, Result};
use crate::kernel::{fmt_rat, int, one, RatFun, RatScalar};
use crate::matrix::{Basis, ExactMatrix};
use crate::operators::{
    apply_grid, apply_ratfun, make_tilde, matrix_in_e_basis, DiffOp, GridFun, OpKind,
};
use crate::params::Params;
use crate::report::{ReportBuilder, VerificationReport};

/// `λ_n = n(N - n - β)`
pub fn lambda(n: usize, p: &Params) -> RatScalar {
    let nn = int(n as i64);
    &nn * (p.n_rat() - &nn - &p.beta)
}

/// `(ν⁽¹⁾_n, ν⁽²⁾_n, ν⁽³⁾_n)`: `Y φ_n = ν⁽¹⁾φ_{n+1} + ν⁽²⁾φ_n + ν⁽³⁾φ_{n-1}`.
pub fn nu_coeffs(n: usize, p: &Params) -> [RatScalar; 3] {
    let (a, b, big_n) = (&p.alpha, &p.beta, p.n_rat());
    let nn = int(n as i64);
    let n2 = &nn * &nn;
    let nu1 = &n2 * (&nn + b - &big_n);
    let nu2 = int(-2) * &n2 * &nn
        + (int(2) * (one() + &big_n) + a - b) * &n2
        + (-&big_n - one() + a * (b - &big_n)) * &nn;
    let nu3 = &nn * (&big_n - &nn + one()) * (a - &nn + one());
    [nu1, nu2, nu3]
}

fn nonzero(d: RatScalar, n: usize) -> Result<RatScalar> {
    if d.is_zero() {
        Err(Error::DegenerateDenominator {
            what: "N-beta-2n+k",
            n,
        })
    } else {
        Ok(d)
    }
}

/// `(μ⁽¹⁾_n, …, μ⁽⁹⁾_n)` with `μ⁽¹⁾_N = μ⁽⁴⁾_N = μ⁽⁷⁾_N = 0`.
pub fn mu_coeffs(n: usize, p: &Params) -> Result<[RatScalar; 9]> {
    if n > p.n {
        return Err(Error::InvalidIndex { n, max: p.n });
    }
    let (a, b, big_n) = (&p.alpha, &p.beta, p.n_rat());
    let nn = int(n as i64);
    let d0 = &big_n - b - int(2) * &nn;
    let at_top = n == p.n;
    let dm1 = nonzero(&d0 - one(), n)?;
    let dp1 = nonzero(&d0 + one(), n)?;
    let d0 = nonzero(d0, n)?;
    let n_b = &big_n - b - &nn;
    let np1 = &nn + one();

    let mu1 = if at_top {
        RatScalar::zero()
    } else {
        &nn * (b + &np1) * &n_b / (&d0 * &dm1)
    };
    let mu2 = -a - &nn + (b * &nn * (&nn - one()) + &nn * &nn * (&nn - one())) / &dp1
        - (b * &nn * &np1 + &nn * &np1 * &np1) / &dm1;
    let mu3 = &nn * &n_b * (&big_n - &nn + one()) / (&d0 * &dp1);
    let mu7 = if at_top {
        RatScalar::zero()
    } else {
        -((b + &np1) * &n_b) / (&d0 * &dm1)
    };
    let mu8 = (&np1 * b + &np1 * &np1) / &dm1 - (b * &nn + &nn * &nn) / &dp1;
    let mu9 = -(&nn * (&big_n - &nn + one())) / (&d0 * &dp1);
    let lam = lambda(n, p);
    Ok([
        mu1.clone(),
        mu2.clone(),
        mu3.clone(),
        &lam * mu1,
        &lam * mu2,
        &lam * mu3,
        mu7,
        mu8,
        mu9,
    ])
}

/// All closed-form families for one parameter set, indexed by `n = 0..=N`.
#[derive(Clone, Debug)]
pub struct CoeffFamily {
    pub lambda: Vec<RatScalar>,
    pub nu: Vec<[RatScalar; 3]>,
    pub mu: Vec<[RatScalar; 9]>,
}

impl CoeffFamily {
    pub fn new(p: &Params) -> Result<Self> {
        Ok(CoeffFamily {
            lambda: (0..=p.n).map(|n| lambda(n, p)).collect(),
            nu: (0..=p.n).map(|n| nu_coeffs(n, p)).collect(),
            mu: (0..=p.n).map(|n| mu_coeffs(n, p)).collect::<Result<_>>()?,
        })
    }
}

/// Tridiagonal matrix from per-column `(below, diagonal, above)` triples.
fn tridiagonal_from_columns(
    dim: usize,
    basis: Basis,
    col: impl Fn(usize) -> [RatScalar; 3],
) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(dim, basis);
    for n in 0..dim {
        let [below, diag, above] = col(n);
        m.set(n, n, diag);
        if n + 1 < dim {
            m.set(n + 1, n, below);
        }
        if n > 0 {
            m.set(n - 1, n, above);
        }
    }
    m
}

/// `B⁻¹ M B`, with `B` the matrix of sampled basis functions: column `k` is the
/// expansion of `L b_k` in the basis.
pub fn matrix_in_basis(kind: OpKind, basis: Basis, p: &Params) -> Result<ExactMatrix> {
    let op = DiffOp::make(kind, p)?;
    let m_e = matrix_in_e_basis(&op, p.n)?;
    if basis == Basis::Delta {
        return Ok(m_e);
    }
    let b = basis_matrix(basis, p)?;
    let images: Vec<Vec<RatScalar>> = (0..=p.n)
        .map(|k| m_e.mul_vec(&b.column(k)))
        .collect::<Result<_>>()?;
    let cols = b.solve_many(&images)?;
    ExactMatrix::from_columns(&cols, basis)
}

/// `X`, `Y`, `Z` in the `φ` basis from the closed forms.
pub fn closed_form_phi_matrix(kind: OpKind, p: &Params) -> ExactMatrix {
    let dim = p.n + 1;
    tridiagonal_from_columns(dim, Basis::Phi, |n| {
        let nn = int(n as i64);
        match kind {
            OpKind::X => [-nn.clone(), &nn - &p.alpha, RatScalar::zero()],
            OpKind::Z => [one(), -one(), RatScalar::zero()],
            OpKind::Y => {
                let [n1, n2, n3] = nu_coeffs(n, p);
                [n1, n2, n3]
            }
        }
    })
}

/// `X`, `Y`, `Z` in the `U` basis from the `μ` families.
pub fn closed_form_u_matrix(kind: OpKind, p: &Params) -> Result<ExactMatrix> {
    let fam = CoeffFamily::new(p)?;
    let off = match kind {
        OpKind::X => 0,
        OpKind::Y => 3,
        OpKind::Z => 6,
    };
    Ok(tridiagonal_from_columns(p.n + 1, Basis::U, |n| {
        let m = &fam.mu[n];
        [m[off].clone(), m[off + 1].clone(), m[off + 2].clone()]
    }))
}

/// `𝒴 φ_n = λ_n φ_n + n(n - N - 1) φ_{n-1}`.
pub fn cal_y_matrix(p: &Params) -> ExactMatrix {
    tridiagonal_from_columns(p.n + 1, Basis::Phi, |n| {
        let nn = int(n as i64);
        [
            RatScalar::zero(),
            lambda(n, p),
            &nn * (&nn - p.n_rat() - one()),
        ]
    })
}

fn first_mismatch(a: &ExactMatrix, b: &ExactMatrix) -> Option<serde_json::Value> {
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if a.get(i, j) != b.get(i, j) {
                return Some(json!({
                    "row": i, "col": j,
                    "left": fmt_rat(a.get(i, j)),
                    "right": fmt_rat(b.get(i, j)),
                }));
            }
        }
    }
    None
}

/// `M_Y^{(φ)} = M_X^{(φ)} · 𝒴`, `diag 𝒴 = λ`, and each `U_n` coefficient
/// vector solves the φ-basis GEVP.
pub fn verify_factorization(p: &Params) -> VerificationReport {
    ReportBuilder::new("factorization", p).run(|_| {
        let mx = matrix_in_basis(OpKind::X, Basis::Phi, p)?;
        let my = matrix_in_basis(OpKind::Y, Basis::Phi, p)?;
        let cy = cal_y_matrix(p);
        let prod = mx.checked_mul(&cy)?;
        if let Some(cx) = first_mismatch(&my, &prod) {
            return Ok(Some(json!({ "relation": "Y = X·calY", "entry": cx })));
        }
        for n in 0..=p.n {
            if cy.get(n, n) != &lambda(n, p) {
                return Ok(Some(json!({ "relation": "diag calY = lambda", "n": n })));
            }
        }
        for n in 0..=p.n {
            let mut c = u_coefficients_closed(n, p)?;
            c.resize(p.n + 1, RatScalar::zero());
            let lhs = my.mul_vec(&c)?;
            let lam = lambda(n, p);
            let rhs: Vec<RatScalar> = mx.mul_vec(&c)?.iter().map(|v| v * &lam).collect();
            if lhs != rhs {
                return Ok(Some(json!({ "relation": "GEVP in phi basis", "n": n })));
            }
        }
        Ok(None)
    })
}

/// `φ`- and `U`-basis matrices built by expansion agree with the closed
/// forms; `X`, `Z` are lower bidiagonal in `φ`.
pub fn verify_matrix_realizations(p: &Params) -> VerificationReport {
    ReportBuilder::new("matrix_realizations", p).run(|_| {
        for kind in OpKind::ALL {
            let built = matrix_in_basis(kind, Basis::Phi, p)?;
            if let Some(cx) = first_mismatch(&built, &closed_form_phi_matrix(kind, p)) {
                return Ok(Some(
                    json!({ "basis": "phi", "op": kind.name(), "entry": cx }),
                ));
            }
            if kind != OpKind::Y && !built.is_banded(1, 0) {
                return Ok(Some(
                    json!({ "basis": "phi", "op": kind.name(), "reason": "not lower bidiagonal" }),
                ));
            }
            let built = matrix_in_basis(kind, Basis::U, p)?;
            if let Some(cx) = first_mismatch(&built, &closed_form_u_matrix(kind, p)?) {
                return Ok(Some(
                    json!({ "basis": "U", "op": kind.name(), "entry": cx }),
                ));
            }
        }
        Ok(None)
    })
}

/// `X U_n(α) = -α U_n(α+1)`, `Y U_n(α) = α n(n+β-N) U_n(α+1)`,
/// `Z U_n(α) = α/(x-α) · U_n(α+1)` as rational-function identities.
pub fn verify_shift_relations(p: &Params) -> VerificationReport {
    ReportBuilder::new("shift_relations", p).run(|_| {
        let up = p.shift_alpha(1);
        let ops = [
            DiffOp::make(OpKind::X, p)?,
            DiffOp::make(OpKind::Y, p)?,
            DiffOp::make(OpKind::Z, p)?,
        ];
        let a = &p.alpha;
        let z_factor = RatFun::pole_monomial(a).scale(a);
        for n in 0..=p.n {
            let u = build_u_series(n, p)?.fun;
            let u_up = build_u_series(n, &up)?.fun;
            let nn = int(n as i64);
            let expected = [
                u_up.scale(&-a.clone()),
                u_up.scale(&(a * &nn * (&nn + &p.beta - p.n_rat()))),
                &z_factor * &u_up,
            ];
            for (op, (kind, want)) in ops.iter().zip(OpKind::ALL.iter().zip(expected)) {
                let got = apply_ratfun(op, &u);
                if got != want {
                    return Ok(Some(json!({
                        "relation": kind.name(), "n": n,
                        "got": got.to_string(), "expected": want.to_string(),
                    })));
                }
            }
        }
        Ok(None)
    })
}

fn u_grid(p: &Params) -> Result<Vec<GridFun>> {
    basis_functions(Basis::U, p)
}

/// Pointwise `Y U_n = λ_n X U_n` on the grid, and column proportionality
/// `M_Y^{(U)} = M_X^{(U)} · diag(λ)`.
pub fn verify_difference_equation(p: &Params) -> VerificationReport {
    ReportBuilder::new("difference_equation", p).run(|_| {
        let y = DiffOp::make(OpKind::Y, p)?;
        let coeffs = y.grid_coefficients(p.n)?;
        let us = u_grid(p)?;
        for (n, u) in us.iter().enumerate() {
            let lam = lambda(n, p);
            let v = &u.values;
            for x in 0..=p.n {
                let [a1, a2, a0] = &coeffs[x];
                let mut lhs = a0 * &v[x];
                if x < p.n {
                    lhs += a1 * &v[x + 1];
                }
                if x > 0 {
                    lhs += a2 * &v[x - 1];
                }
                let xr = int(x as i64);
                let mut xu = (&xr - &p.alpha) * &v[x];
                if x > 0 {
                    xu -= &xr * &v[x - 1];
                }
                let rhs = &lam * xu;
                if lhs != rhs {
                    return Ok(Some(json!({
                        "form": "pointwise", "n": n, "x": x,
                        "lhs": fmt_rat(&lhs), "rhs": fmt_rat(&rhs),
                    })));
                }
            }
        }
        let mx = matrix_in_basis(OpKind::X, Basis::U, p)?;
        let my = matrix_in_basis(OpKind::Y, Basis::U, p)?;
        let lam = ExactMatrix::diagonal((0..=p.n).map(|n| lambda(n, p)).collect(), Basis::U);
        if let Some(cx) = first_mismatch(&my, &mx.checked_mul(&lam)?) {
            return Ok(Some(json!({ "form": "matrix", "entry": cx })));
        }
        Ok(None)
    })
}

/// Pointwise three-term recurrence from `X U_n = (α - x) Z U_n`, plus the
/// same identity at matrix level in the delta and `U` bases.
pub fn verify_recurrence_relation(p: &Params) -> VerificationReport {
    ReportBuilder::new("recurrence_relation", p).run(|_| {
        let fam = CoeffFamily::new(p)?;
        let us = u_grid(p)?;
        let zero_fn = GridFun::constant(RatScalar::zero(), p.n);
        for n in 0..=p.n {
            let m = &fam.mu[n];
            let below = if n > 0 { &us[n - 1] } else { &zero_fn };
            // μ⁽¹⁾_N = μ⁽⁷⁾_N = 0: U_{N+1} is never read
            let above = if n < p.n { Some(&us[n + 1]) } else { None };
            for x in 0..=p.n {
                let hi = |c: &RatScalar| above.map_or(RatScalar::zero(), |u| c * &u.values[x]);
                let lhs = hi(&m[0]) + &m[1] * &us[n].values[x] + &m[2] * &below.values[x];
                let bracket = hi(&m[6]) + &m[7] * &us[n].values[x] + &m[8] * &below.values[x];
                let rhs = (&p.alpha - int(x as i64)) * bracket;
                if lhs != rhs {
                    return Ok(Some(json!({
                        "form": "pointwise", "n": n, "x": x,
                        "lhs": fmt_rat(&lhs), "rhs": fmt_rat(&rhs),
                    })));
                }
            }
        }
        let d = ExactMatrix::diagonal(
            (0..=p.n).map(|x| &p.alpha - int(x as i64)).collect(),
            Basis::Delta,
        );
        let mx_e = matrix_in_basis(OpKind::X, Basis::Delta, p)?;
        let mz_e = matrix_in_basis(OpKind::Z, Basis::Delta, p)?;
        if let Some(cx) = first_mismatch(&mx_e, &d.checked_mul(&mz_e)?) {
            return Ok(Some(json!({ "form": "delta matrix", "entry": cx })));
        }
        let b = basis_matrix(Basis::U, p)?;
        let d_u = b
            .inverse()?
            .checked_mul(&d)?
            .checked_mul(&b)?
            .with_basis(Basis::U);
        let mx_u = closed_form_u_matrix(OpKind::X, p)?;
        let mz_u = closed_form_u_matrix(OpKind::Z, p)?;
        if let Some(cx) = first_mismatch(&mx_u, &d_u.checked_mul(&mz_u)?) {
            return Ok(Some(json!({ "form": "U matrix", "entry": cx })));
        }
        Ok(None)
    })
}

/// Scale in `(L^{(α-1)} f, g)_α = c · (f, L̃^{(α)} g)_{α-1}`; `Z` is
/// self-adjoint at a single `α`.
pub fn adjoint_scale(kind: OpKind, p: &Params) -> Result<RatScalar> {
    match kind {
        OpKind::X | OpKind::Y => {
            let den = &p.beta + int(2) - &p.alpha;
            if den.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok((&p.alpha - one()) / den)
        }
        OpKind::Z => Ok(one()),
    }
}

/// Adjoint relation between `L` and `L̃` under the weighted scalar product.
///
/// Checked at the operator level (for every pair of grid functions, via
/// `Lᵀ W_left = c · W_right L̃`) and on every pair `(U_n, V_m)`:
/// - `X`, `Y`: `(L^{(α-1)} U_n(α-1), V_m(α))_α = c (U_n(α-1), L̃^{(α)} V_m(α))_{α-1}`
///   with `c = (α-1)/(β+2-α)`;
/// - `Z`: `(Z U_n, V_m)_α = (U_n, Z̃ V_m)_α`.
///
/// Also checks `(λ_n - λ_m)(X^{(α-1)} U_n(α-1), V_m(α))_α = 0`. The variant
/// pairing `U_n(α)` with `L̃^{(α+1)} V_m(α+1)` under one scalar product is
/// evaluated and recorded in the details; it only holds off the diagonal.
pub fn verify_adjoint_identity(p: &Params) -> VerificationReport {
    ReportBuilder::new("adjoint_identity", p).run(|rb| {
        let lo = p.shift_alpha(-1);
        let hi = p.shift_alpha(1);
        let w = weight(p)?;
        let w_lo = weight(&lo)?;
        let u_here = u_grid(p)?;
        let u_lo = u_grid(&lo)?;
        let v_here = basis_functions(Basis::V, p)?;
        let v_hi = basis_functions(Basis::V, &hi)?;
        let w_mat = ExactMatrix::diagonal(w.values.values.clone(), Basis::Delta);
        let w_lo_mat = ExactMatrix::diagonal(w_lo.values.values.clone(), Basis::Delta);

        let mut literal_failures = Vec::new();
        for kind in OpKind::ALL {
            let c = adjoint_scale(kind, p)?;
            let (op_p, w_left, w_right, us) = match kind {
                OpKind::Z => (p, &w_mat, &w_mat, &u_here),
                _ => (&lo, &w_mat, &w_lo_mat, &u_lo),
            };
            let l = DiffOp::make(kind, op_p)?;
            let lt = make_tilde(kind, p)?;
            let (w_l, w_r) = match kind {
                OpKind::Z => (&w, &w),
                _ => (&w, &w_lo),
            };
            // operator level
            let m_l = matrix_in_e_basis(&l, p.n)?;
            let m_lt = matrix_in_e_basis(&lt, p.n)?;
            let lhs = m_l.transpose().checked_mul(w_left)?;
            let rhs = w_right.checked_mul(&m_lt)?.scale(&c);
            if let Some(cx) = first_mismatch(&lhs, &rhs) {
                return Ok(Some(
                    json!({ "op": kind.name(), "form": "operator", "entry": cx }),
                ));
            }
            // on the biorthogonal pair
            for (n, u) in us.iter().enumerate() {
                let lu = apply_grid(&l, u)?;
                for (m, v) in v_here.iter().enumerate() {
                    let left = inner_product(&lu, v, w_l)?;
                    let right = &c * inner_product(u, &apply_grid(&lt, v)?, w_r)?;
                    if left != right {
                        return Ok(Some(json!({
                            "op": kind.name(), "n": n, "m": m,
                            "lhs": fmt_rat(&left), "rhs": fmt_rat(&right),
                        })));
                    }
                }
            }
            // variant with L̃^{(α+1)} acting on V_m(α+1)
            let l_lo = DiffOp::make(kind, &lo)?;
            let lt_hi = make_tilde(kind, &hi)?;
            for (n, u) in u_lo.iter().enumerate() {
                let left_fn = apply_grid(&l_lo, u)?;
                for (m, vh) in v_hi.iter().enumerate() {
                    let left = inner_product(&left_fn, &v_here[m], &w)?;
                    let right = inner_product(&u_here[n], &apply_grid(&lt_hi, vh)?, &w)?;
                    if left != right {
                        literal_failures.push(json!({
                            "op": kind.name(), "n": n, "m": m,
                            "lhs": fmt_rat(&left), "rhs": fmt_rat(&right),
                        }));
                    }
                }
            }
        }
        // GEVP chain
        let x_lo = DiffOp::make(OpKind::X, &lo)?;
        for (n, u) in u_lo.iter().enumerate() {
            let xu = apply_grid(&x_lo, u)?;
            for (m, v) in v_here.iter().enumerate() {
                let val = (lambda(n, p) - lambda(m, p)) * inner_product(&xu, v, &w)?;
                if !val.is_zero() {
                    return Ok(Some(json!({ "form": "gevp_chain", "n": n, "m": m })));
                }
            }
        }
        rb.detail("scale_xy", fmt_rat(&adjoint_scale(OpKind::X, p)?));
        rb.detail("shifted_pairing_failures", literal_failures);
        Ok(None)
    })
}

/// `(U_n, V_n)` normalizations through `V` built as a rational function;
/// used by the CLI `params` listing.
pub fn diagonal_norms(p: &Params) -> Result<Vec<RatScalar>> {
    let w = weight(p)?;
    (0..=p.n)
        .map(|n| {
            let u = GridFun::sample(&build_u_series(n, p)?.fun, p.n)?;
            let v = GridFun::sample(&build_v(n, p)?.fun, p.n)?;
            inner_product(&u, &v, &w)
        })
        .collect()
}
