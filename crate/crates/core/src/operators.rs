//! Second-order difference operators on the uniform grid and their
//! realization on `M_N`, the functions on `x = 0, 1, …, N`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{int, one, rat_serde, Poly, RatFun, RatScalar};
use crate::matrix::{Basis, ExactMatrix};
use crate::params::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpKind {
    X,
    Y,
    Z,
}

impl OpKind {
    pub const ALL: [OpKind; 3] = [OpKind::X, OpKind::Y, OpKind::Z];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::X => "X",
            OpKind::Y => "Y",
            OpKind::Z => "Z",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OpKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(OpKind::X),
            "Y" | "y" => Ok(OpKind::Y),
            "Z" | "z" => Ok(OpKind::Z),
            _ => Err(Error::UnknownSelector(format!("operator {s:?}"))),
        }
    }
}

/// `f ↦ a_plus·f(x+1) + a_minus·f(x-1) + a_zero·f(x)`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp {
    pub a_plus: RatFun,
    pub a_minus: RatFun,
    pub a_zero: RatFun,
}

/// A function on the grid `x = 0, …, N`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridFun {
    #[serde(with = "rat_serde::vec")]
    pub values: Vec<RatScalar>,
}

impl GridFun {
    pub fn new(values: Vec<RatScalar>) -> Self {
        GridFun { values }
    }

    pub fn constant(c: RatScalar, n: usize) -> Self {
        GridFun::new(vec![c; n + 1])
    }

    /// `e_k(x) = δ_{kx}`
    pub fn delta(k: usize, n: usize) -> Self {
        let mut v = vec![RatScalar::zero(); n + 1];
        v[k] = one();
        GridFun::new(v)
    }

    /// Samples a rational function on the grid.
    pub fn sample(f: &RatFun, n: usize) -> Result<Self> {
        (0..=n as i64)
            .map(|x| f.eval_grid(x))
            .collect::<Result<Vec<_>>>()
            .map(GridFun::new)
    }

    /// Grid size minus one.
    pub fn n(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

fn x_poly() -> Poly {
    Poly::x()
}

fn lin(c: &RatScalar) -> Poly {
    // x + c
    Poly::new(vec![c.clone(), one()])
}

fn ensure_valid(p: &Params) -> Result<()> {
    if p.forced {
        Ok(())
    } else {
        p.validate()
    }
}

impl DiffOp {
    pub fn new(a_plus: RatFun, a_minus: RatFun, a_zero: RatFun) -> Self {
        DiffOp {
            a_plus,
            a_minus,
            a_zero,
        }
    }

    /// The instance `kind^{(alpha, beta)}` for these parameters.
    pub fn make(kind: OpKind, p: &Params) -> Result<Self> {
        match kind {
            OpKind::X => make_x(p),
            OpKind::Y => make_y(p),
            OpKind::Z => make_z(p),
        }
    }

    /// Coefficients under `x -> N - x` with the shift directions exchanged.
    pub fn reflect(&self, n: usize) -> Self {
        let c = int(n as i64);
        DiffOp {
            a_plus: self.a_minus.reflect(&c),
            a_minus: self.a_plus.reflect(&c),
            a_zero: self.a_zero.reflect(&c),
        }
    }

    /// `a_minus(0) = 0` and `a_plus(N) = 0`, so the operator maps `M_N` into
    /// itself without looking past the grid ends.
    pub fn check_boundary(&self, n: usize) -> Result<()> {
        let lo = self
            .a_minus
            .eval(&int(0))
            .ok_or(Error::CoefficientPoleOnGrid { x: 0 })?;
        let hi = self
            .a_plus
            .eval(&int(n as i64))
            .ok_or(Error::CoefficientPoleOnGrid { x: n })?;
        if !lo.is_zero() || !hi.is_zero() {
            return Err(Error::InvalidParams(format!(
                "operator is not boundary-preserving on M_{n}: a_minus(0) = {lo}, a_plus(N) = {hi}"
            )));
        }
        Ok(())
    }

    /// `(a_plus(x), a_minus(x), a_zero(x))` for every grid point.
    pub fn grid_coefficients(&self, n: usize) -> Result<Vec<[RatScalar; 3]>> {
        (0..=n)
            .map(|x| {
                let xr = int(x as i64);
                let ev = |f: &RatFun| f.eval(&xr).ok_or(Error::CoefficientPoleOnGrid { x });
                Ok([ev(&self.a_plus)?, ev(&self.a_minus)?, ev(&self.a_zero)?])
            })
            .collect()
    }
}

/// `X = (x - α)·I - x·T⁻`
pub fn make_x(p: &Params) -> Result<DiffOp> {
    ensure_valid(p)?;
    let op = DiffOp::new(
        RatFun::zero(),
        RatFun::from_poly(-&x_poly()),
        RatFun::from_poly(lin(&-p.alpha.clone())),
    );
    op.check_boundary(p.n)?;
    Ok(op)
}

/// `Z = -I + x/(x - α)·T⁻`
pub fn make_z(p: &Params) -> Result<DiffOp> {
    ensure_valid(p)?;
    let a_minus = crate::kernel::ratfun_reduce(x_poly(), lin(&-p.alpha.clone()))?;
    let op = DiffOp::new(RatFun::zero(), a_minus, RatFun::constant(-one()));
    op.check_boundary(p.n)?;
    Ok(op)
}

/// `Y = A₁T⁺ + A₂T⁻ + A₀I` with cubic coefficients sharing the factor `x - α`.
pub fn make_y(p: &Params) -> Result<DiffOp> {
    ensure_valid(p)?;
    let (a, b, n) = (&p.alpha, &p.beta, p.n_rat());
    let x_a = lin(&-a.clone());
    // A1 = (x-α)(x-N)(x+1-α)
    let a1 = &(&x_a * &lin(&-n.clone())) * &lin(&(one() - a));
    // A2 = x(x-α)(x+β-α-N)
    let a2 = &(&x_poly() * &x_a) * &lin(&(b - a - &n));
    // A0 = (x-α)(-2x² + (2α-1+2N-β)x - N(α-1))
    let quad = Poly::new(vec![
        -(&n * (a - one())),
        int(2) * a - one() + int(2) * &n - b,
        int(-2),
    ]);
    let a0 = &x_a * &quad;
    let op = DiffOp::new(
        RatFun::from_poly(a1),
        RatFun::from_poly(a2),
        RatFun::from_poly(a0),
    );
    op.check_boundary(p.n)?;
    Ok(op)
}

/// The transformed operator `L̃`: apply `x -> N - x`, `α -> β + 2 - α` to the
/// coefficients of `L^{(α, β)}` and exchange `T⁺ ↔ T⁻`.
pub fn make_tilde(kind: OpKind, p: &Params) -> Result<DiffOp> {
    let op = DiffOp::make(kind, &p.s_image())?.reflect(p.n);
    op.check_boundary(p.n)?;
    Ok(op)
}

/// Applies a boundary-preserving operator to a grid function.
pub fn apply_grid(op: &DiffOp, f: &GridFun) -> Result<GridFun> {
    let n = f.n();
    let coeffs = op.grid_coefficients(n)?;
    let vals = &f.values;
    let out = (0..=n)
        .map(|x| {
            let [ap, am, a0] = &coeffs[x];
            let mut v = a0 * &vals[x];
            if x > 0 && !am.is_zero() {
                v += am * &vals[x - 1];
            }
            if x < n && !ap.is_zero() {
                v += ap * &vals[x + 1];
            }
            v
        })
        .collect();
    Ok(GridFun::new(out))
}

/// Symbolic action on a rational function of `x`; shifts are done by exact
/// polynomial composition.
pub fn apply_ratfun(op: &DiffOp, f: &RatFun) -> RatFun {
    let up = &op.a_plus * &f.shift(&one());
    let down = &op.a_minus * &f.shift(&-one());
    let here = &op.a_zero * f;
    &(&up + &down) + &here
}

/// Matrix of the operator in the delta basis: column `k` is `op(e_k)`.
pub fn matrix_in_e_basis(op: &DiffOp, n: usize) -> Result<ExactMatrix> {
    let cols = (0..=n)
        .map(|k| apply_grid(op, &GridFun::delta(k, n)).map(|g| g.values))
        .collect::<Result<Vec<_>>>()?;
    ExactMatrix::from_columns(&cols, Basis::Delta)
}

/// Delta-basis matrices of `(X, Y, Z)`.
pub fn triplet_e_basis(p: &Params) -> Result<[ExactMatrix; 3]> {
    Ok([
        matrix_in_e_basis(&make_x(p)?, p.n)?,
        matrix_in_e_basis(&make_y(p)?, p.n)?,
        matrix_in_e_basis(&make_z(p)?, p.n)?,
    ])
}
