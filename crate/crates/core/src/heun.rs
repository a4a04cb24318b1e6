//! Rational Heun raising property.
//!
//! Each of `X`, `Y`, `Z` sends a pole monomial `(x - α - n)^{-1}` into the
//! span of `1, (x - α)^{-1}, …, (x - α - n - 1)^{-1}`: one new pole is added
//! at the top of the ladder. `Y` produces at most three poles,
//! `α + n - 1, α + n, α + n + 1`, whose residues `κ⁽¹⁾, κ⁽²⁾, κ⁽³⁾` are cubic
//! in `n`.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernel::{fmt_rat, int, one, partial_fractions, PartialFractions, RatFun, RatScalar};
use crate::operators::{apply_ratfun, DiffOp, OpKind};
use crate::params::Params;
use crate::report::{ReportBuilder, VerificationReport};

/// Ladder offsets searched when locating poles: two rungs beyond the allowed
/// span on either side, so a stray ladder pole is named rather than lumped
/// into an unknown factor.
fn candidate_poles(alpha: &RatScalar, n: usize) -> Vec<RatScalar> {
    (-2..=n as i64 + 3).map(|k| alpha + int(k)).collect()
}

/// Image of `(x - α - n)^{-1}` under `op`, decomposed over the pole ladder.
/// Fails with `SpanViolation` if a pole falls outside `α, …, α + n + 1`.
pub fn raise_monomial(op: &DiffOp, alpha: &RatScalar, n: usize) -> Result<PartialFractions> {
    let f = RatFun::pole_monomial(&(alpha + int(n as i64)));
    let image = apply_ratfun(op, &f);
    let pf = partial_fractions(&image, &candidate_poles(alpha, n))?;
    let lo = alpha.clone();
    let hi = alpha + int(n as i64 + 1);
    if let Some(stray) = pf.poles().find(|&a| a < &lo || a > &hi) {
        return Err(Error::SpanViolation {
            n,
            pole: stray.clone(),
        });
    }
    Ok(pf)
}

fn pf_json(pf: &PartialFractions, alpha: &RatScalar) -> Value {
    let residues: Vec<Value> = pf
        .residues
        .iter()
        .map(|r| json!({ "offset": fmt_rat(&(&r.pole - alpha)), "residue": fmt_rat(&r.residue) }))
        .collect();
    json!({ "constant": fmt_rat(&pf.constant), "residues": residues })
}

/// Closed-form image of the monomial for `X` and `Z`; `None` for `Y`, whose
/// residues are only known to be cubic in `n`.
fn closed_form_image(kind: OpKind, alpha: &RatScalar, n: usize) -> Option<RatFun> {
    let nr = int(n as i64);
    let at = |k: i64| RatFun::pole_monomial(&(alpha + int(k)));
    let top = alpha + &nr + one();
    match kind {
        // n/(x-α-n) - (1+α+n)/(x-1-α-n)
        OpKind::X => Some(&at(n as i64).scale(&nr) - &at(n as i64 + 1).scale(&top)),
        // -α/((1+n)(x-α)) - 1/(x-α-n) + (1+α+n)/((1+n)(x-1-α-n))
        OpKind::Z => {
            let np1 = &nr + one();
            let t1 = at(0).scale(&-(alpha / &np1));
            let t2 = at(n as i64).scale(&-one());
            let t3 = at(n as i64 + 1).scale(&(top / np1));
            Some(&(&t1 + &t2) + &t3)
        }
        OpKind::Y => None,
    }
}

/// Checks the raising property of one operator for `n = 0..=n_max`, and for
/// `X` and `Z` compares against the closed-form images. For `Y` the constant
/// term must be `β + 1` and the poles confined to `α+n-1, α+n, α+n+1`.
pub fn verify_heun_raising(kind: OpKind, p: &Params, n_max: usize) -> VerificationReport {
    let id = format!("heun_raising.{kind}");
    ReportBuilder::new(&id, p).run(|rb| {
        let op = DiffOp::make(kind, p)?;
        let alpha = &p.alpha;
        let mut expansions = Vec::new();
        for n in 0..=n_max {
            let pf = match raise_monomial(&op, alpha, n) {
                Ok(pf) => pf,
                Err(Error::SpanViolation { n, pole }) => {
                    return Ok(Some(json!({ "n": n, "stray_pole": fmt_rat(&pole) })));
                }
                Err(e) => return Err(e),
            };
            expansions.push(pf_json(&pf, alpha));
            if let Some(expected) = closed_form_image(kind, alpha, n) {
                let got = pf.reconstruct();
                if got != expected {
                    return Ok(Some(json!({
                        "n": n,
                        "reason": "image differs from the closed form",
                        "got": got.to_string(),
                        "expected": expected.to_string(),
                    })));
                }
            } else {
                let want_const = &p.beta + one();
                if pf.constant != want_const {
                    return Ok(Some(json!({
                        "n": n,
                        "reason": "constant term is not beta + 1",
                        "constant": fmt_rat(&pf.constant),
                    })));
                }
                let base = alpha + int(n as i64);
                if let Some(extra) = pf.poles().find(|a| (*a - &base).abs() > one()) {
                    return Ok(Some(json!({
                        "n": n,
                        "reason": "pole outside alpha+n-1 .. alpha+n+1",
                        "pole": fmt_rat(extra),
                    })));
                }
            }
        }
        rb.detail("expansions", expansions);
        Ok(None)
    })
}

/// Residues `(κ⁽¹⁾_n, κ⁽²⁾_n, κ⁽³⁾_n)` of `Y (x - α - n)^{-1}` at
/// `α + n - 1, α + n, α + n + 1`. An absent pole contributes a zero residue.
pub fn kappa_residues(p: &Params, n: usize) -> Result<[RatScalar; 3]> {
    let y = DiffOp::make(OpKind::Y, p)?;
    let alpha = &p.alpha;
    let f = RatFun::pole_monomial(&(alpha + int(n as i64)));
    let image = apply_ratfun(&y, &f);
    let pf = partial_fractions(&image, &candidate_poles(alpha, n))?;
    let base = alpha + int(n as i64);
    if let Some(stray) = pf.poles().find(|a| (*a - &base).abs() > one()) {
        return Err(Error::SpanViolation {
            n,
            pole: stray.clone(),
        });
    }
    Ok([
        pf.residue_at(&(&base - one())),
        pf.residue_at(&base),
        pf.residue_at(&(&base + one())),
    ])
}

/// Fourth forward difference of `v` starting at `start`.
fn fourth_difference(v: &[RatScalar], start: usize) -> RatScalar {
    // Δ⁴f(k) = f(k) - 4f(k+1) + 6f(k+2) - 4f(k+3) + f(k+4)
    let w = [1, -4, 6, -4, 1];
    w.iter()
        .enumerate()
        .fold(RatScalar::zero(), |acc, (i, &c)| {
            acc + &v[start + i] * int(c)
        })
}

/// Degree at most three in `n` for each κ family: with values at
/// `n = 0..=6`, the fourth differences ending at `n = 4, 5, 6` all vanish.
pub fn verify_kappa_cubic(p: &Params) -> Result<bool> {
    let values = kappa_table(p, 6)?;
    Ok((0..3).all(|i| {
        let col: Vec<RatScalar> = values.iter().map(|k| k[i].clone()).collect();
        (0..=2).all(|s| fourth_difference(&col, s).is_zero())
    }))
}

fn kappa_table(p: &Params, n_max: usize) -> Result<Vec<[RatScalar; 3]>> {
    (0..=n_max).map(|n| kappa_residues(p, n)).collect()
}

/// Report form of the κ cubic check, with the residue table and the
/// reconstruction round trip.
pub fn verify_kappa_report(p: &Params) -> VerificationReport {
    ReportBuilder::new("kappa_cubic", p).run(|rb| {
        let table = kappa_table(p, 6)?;
        let y = DiffOp::make(OpKind::Y, p)?;
        for (n, k) in table.iter().enumerate() {
            let base = &p.alpha + int(n as i64);
            let rebuilt = (-1..=1)
                .zip(k.iter())
                .fold(RatFun::constant(&p.beta + one()), |acc, (off, r)| {
                    &acc + &RatFun::pole_monomial(&(&base + int(off))).scale(r)
                });
            let image = apply_ratfun(&y, &RatFun::pole_monomial(&base));
            if rebuilt != image {
                return Ok(Some(
                    json!({ "n": n, "reason": "residues do not reconstruct the image" }),
                ));
            }
        }
        rb.detail(
            "kappa",
            table
                .iter()
                .map(|k| k.iter().map(fmt_rat).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        );
        for i in 0..3 {
            let col: Vec<RatScalar> = table.iter().map(|k| k[i].clone()).collect();
            for s in 0..=2 {
                let d = fourth_difference(&col, s);
                if !d.is_zero() {
                    return Ok(Some(json!({
                        "kappa": i + 1,
                        "window_end": s + 4,
                        "fourth_difference": fmt_rat(&d),
                    })));
                }
            }
        }
        Ok(None)
    })
}
