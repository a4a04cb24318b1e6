use num_traits::{One, Zero};

use super::RatScalar;
use crate::error::{Error, Result};

/// Rising factorial `(a)_n = a(a+1)···(a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &RatScalar, n: usize) -> RatScalar {
    let mut acc = RatScalar::one();
    let mut term = a.clone();
    for _ in 0..n {
        if term.is_zero() {
            return RatScalar::zero();
        }
        acc *= &term;
        term += RatScalar::one();
    }
    acc
}

pub fn factorial(n: usize) -> RatScalar {
    (1..=n).fold(RatScalar::one(), |acc, k| {
        acc * RatScalar::from_integer(k.into())
    })
}

/// `Σ_{k=0}^{upper_index} Π(top_i)_k / (Π(bottom_j)_k · k!)`.
///
/// The truncation index is explicit: a top parameter `-n` ends the series on
/// its own, but a bottom parameter `-N` would blow up past `k = N`, so the
/// caller decides where the sum stops.
pub fn hyp_sum_terminating(
    top: &[RatScalar],
    bottom: &[RatScalar],
    upper_index: usize,
) -> Result<RatScalar> {
    let mut sum = RatScalar::zero();
    // term_k built incrementally: term_{k+1} = term_k · Π(top_i + k) / (Π(bottom_j + k) · (k+1))
    let mut term = RatScalar::one();
    for k in 0..=upper_index {
        if k > 0 {
            let km1 = RatScalar::from_integer((k - 1).into());
            let mut den = RatScalar::from_integer(k.into());
            for b in bottom {
                let f = b + &km1;
                if f.is_zero() {
                    return Err(Error::ZeroBottomPochhammer { index: k });
                }
                den *= f;
            }
            for t in top {
                term *= t + &km1;
            }
            term /= den;
        }
        sum += &term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&rat(7, 3), 0), int(1));
        assert_eq!(pochhammer(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(pochhammer(&int(-3), 4), int(0));
        assert_eq!(pochhammer(&int(1), 5), factorial(5));
    }

    #[test]
    fn series_with_zero_top_is_one() {
        let s = hyp_sum_terminating(&[int(0), rat(5, 7)], &[rat(1, 3)], 6).unwrap();
        assert_eq!(s, int(1));
    }

    #[test]
    fn two_term_sum() {
        // N = 3, beta = 1, alpha = 1/2: 1 + (-1)(-1)(-1)/((-3)(-1/2)) = 1/3
        let (n, beta, alpha) = (int(3), int(1), rat(1, 2));
        let top = [int(-1), int(-1), &beta + int(1) - &n];
        let bottom = [-n.clone(), alpha - int(1)];
        assert_eq!(hyp_sum_terminating(&top, &bottom, 1).unwrap(), rat(1, 3));
    }

    #[test]
    fn chu_vandermonde_instance() {
        // 2F1(-2, b; c; 1) = (c - b)_2 / (c)_2
        let (b, c) = (rat(3, 5), rat(-7, 4));
        let lhs = hyp_sum_terminating(&[int(-2), b.clone()], std::slice::from_ref(&c), 2).unwrap();
        assert_eq!(lhs, pochhammer(&(&c - &b), 2) / pochhammer(&c, 2));
    }

    #[test]
    fn vanishing_bottom_is_an_error() {
        assert_eq!(
            hyp_sum_terminating(&[int(-3)], &[int(-1)], 3),
            Err(Error::ZeroBottomPochhammer { index: 2 })
        );
    }
}
