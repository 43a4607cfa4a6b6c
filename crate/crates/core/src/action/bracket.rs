//! The nested chain sums inside `φ_t`.
//!
//! For `3 ≤ k < t` the bracket multiplying `φ_k` in `φ_t` is
//!
//! ```text
//! bracket(t, k; y, z) = Σ_{j=1}^{k-1} C(k-1, k-1-j) · y^j · S_j(t, k)
//! ```
//!
//! where `S_1 = z_{t+2-k}` and, for `j ≥ 2`, `S_j` sums over nondecreasing
//! chains `i_1 ≤ … ≤ i_{j-1}` in `[k+j, t]` the product
//! `z_{t+3-i_{j-1}} · Π_{m=2}^{j-1} z_{i_m+3-i_{m-1}} · z_{i_1+3-(k+j)}`.
//!
//! Each chain is a walk from `k+j` to `t` in `j` nonnegative steps `d`, each
//! weighted `z_{d+3}`, so `S_j(t, k)` is also the coefficient of
//! `x^{t-k-j}` in `(Σ_d z_{d+3} x^d)^j`. [`ChainSums::Convolution`] uses that
//! identity; [`ChainSums::Naive`] enumerates chains and is the reference.

use crate::algebra::FirstClassParams;
use crate::scalar::{binomial, Scalar};

/// How chain sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BracketMethod {
    #[default]
    Naive,
    Convolution,
}

pub(crate) enum ChainSums<'a> {
    Naive(&'a FirstClassParams),
    /// `powers[j][d]` = coefficient of `x^d` in `Z(x)^j`.
    Convolution { powers: Vec<Vec<Scalar>> },
}

impl<'a> ChainSums<'a> {
    pub(crate) fn new(p: &'a FirstClassParams, method: BracketMethod) -> Self {
        match method {
            BracketMethod::Naive => ChainSums::Naive(p),
            BracketMethod::Convolution => ChainSums::Convolution {
                powers: series_powers(p),
            },
        }
    }

    /// `S_j(t, k)`.
    pub(crate) fn chain_sum(&self, t: usize, k: usize, j: usize) -> Scalar {
        debug_assert!(j >= 1 && k < t);
        match self {
            ChainSums::Naive(p) => naive_chain_sum(p, t, k, j),
            ChainSums::Convolution { powers } => {
                if t < k + j {
                    return Scalar::zero();
                }
                powers
                    .get(j)
                    .and_then(|row| row.get(t - k - j))
                    .cloned()
                    .unwrap_or_else(Scalar::zero)
            }
        }
    }
}

fn naive_chain_sum(p: &FirstClassParams, t: usize, k: usize, j: usize) -> Scalar {
    if j == 1 {
        return p.z(t + 2 - k).clone();
    }
    let lower = k + j;
    if lower > t {
        return Scalar::zero();
    }
    // walk: choose i_1 ≥ lower, then i_2 ≥ i_1, …; `prev` is the last index
    fn walk(p: &FirstClassParams, t: usize, prev: usize, left: usize, acc: &Scalar, out: &mut Scalar) {
        if left == 0 {
            let f = p.z(t + 3 - prev);
            if !f.is_zero() {
                *out += &(acc * f);
            }
            return;
        }
        for i in prev..=t {
            let f = p.z(i + 3 - prev);
            if f.is_zero() {
                continue;
            }
            walk(p, t, i, left - 1, &(acc * f), out);
        }
    }
    let mut out = Scalar::zero();
    walk(p, t, lower, j - 1, &Scalar::one(), &mut out);
    out
}

/// Truncated powers `Z^0 … Z^{n-1}` of `Z(x) = Σ_{d=0}^{n-2} z_{d+3} x^d`.
fn series_powers(p: &FirstClassParams) -> Vec<Vec<Scalar>> {
    let n = p.n();
    let len = n - 2;
    let base: Vec<Scalar> = (0..len).map(|d| p.z(d + 3).clone()).collect();
    let mut one = vec![Scalar::zero(); len];
    one[0] = Scalar::one();
    let mut powers = vec![one];
    for j in 1..n {
        let prev = &powers[j - 1];
        let mut next = vec![Scalar::zero(); len];
        for (a, pa) in prev.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, zb) in base.iter().enumerate().take(len - a) {
                if !zb.is_zero() {
                    next[a + b] += &(pa * zb);
                }
            }
        }
        powers.push(next);
    }
    powers
}

/// The bracket multiplying `φ_k` inside `φ_t`.
pub(crate) fn bracket_with(sums: &ChainSums<'_>, y_powers: &[Scalar], t: usize, k: usize) -> Scalar {
    let mut acc = Scalar::zero();
    for j in 1..k {
        let s = sums.chain_sum(t, k, j);
        if s.is_zero() {
            continue;
        }
        let c = Scalar::from_bigint(binomial(k as i64 - 1, (k - 1 - j) as i64));
        acc += &(&(&c * &y_powers[j]) * &s);
    }
    acc
}

/// `bracket(t, k; y, z)` for `3 ≤ k < t ≤ n`.
pub fn bracket(t: usize, k: usize, y: &Scalar, p: &FirstClassParams, method: BracketMethod) -> Scalar {
    assert!(3 <= k && k < t && t <= p.n(), "bracket({t},{k}) out of range for n = {}", p.n());
    let sums = ChainSums::new(p, method);
    let y_powers: Vec<Scalar> = (0..k as u32).map(|e| y.pow(e)).collect();
    bracket_with(&sums, &y_powers, t, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, z: &[i64]) -> FirstClassParams {
        FirstClassParams::from_positions(n, z.iter().map(|&v| Scalar::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn first_brackets_by_hand() {
        // k = 3, t = 4: 2·y·z_3 (the j = 2 chain range [5, 4] is empty)
        let p = params(4, &[5, 7, 11]);
        let y = Scalar::from_int(3);
        assert_eq!(bracket(4, 3, &y, &p, BracketMethod::Naive), Scalar::from_int(2 * 3 * 5));
        // k = 3, t = 5: 2·y·z_4 + y²·z_3·z_3  (chain i_1 = 5)
        let p = params(5, &[2, 3, 5, 7]);
        assert_eq!(
            bracket(5, 3, &y, &p, BracketMethod::Naive),
            Scalar::from_int(2 * 3 * 3 + 9 * 2 * 2)
        );
    }

    #[test]
    fn convolution_matches_enumeration_small() {
        let p = params(8, &[1, -2, 3, 5, -7, 11, 13]);
        let y = Scalar::ratio(2, 3).unwrap();
        for t in 4..=8 {
            for k in 3..t {
                assert_eq!(
                    bracket(t, k, &y, &p, BracketMethod::Naive),
                    bracket(t, k, &y, &p, BracketMethod::Convolution),
                    "t={t} k={k}"
                );
            }
        }
    }
}
