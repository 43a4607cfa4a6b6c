//! Independent routes to the induced action.
//!
//! [`adapted_change_tensor`] changes basis in the full structure tensor and
//! reads the parameters back; [`nested_sums_direct`] evaluates the nested sums
//! in `A`, `B` with the already-computed `α'_k` substituted in. Neither shares
//! code with [`crate::action::apply_rho`].

use rand::Rng;
use thiserror::Error;

use crate::action::{apply_rho, GroupElement};
use crate::algebra::{params_from_tensor, AlgebraError, FirstClassParams, StructureTensor};
use crate::linalg::{inverse, mat_vec, solve, LinalgError};
use crate::sample::random_group_element;
use crate::scalar::{binomial, SampleConfig, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("expected {expected} higher coefficients c_2..c_n, got {found}")]
    HigherLength { expected: usize, found: usize },
    #[error("tensor of dimension {0} is too small for a first-class algebra")]
    Dimension(usize),
    #[error("cannot complete e1': {0}")]
    Completion(LinalgError),
    #[error("transition matrix is singular")]
    SingularTransition,
    #[error("transformed table is not first-class: {0}")]
    Shape(#[from] AlgebraError),
}

/// Transports `t` along the adapted basis change determined by `g` and the
/// higher coefficients `c_2..c_n` of `e0'` (all zero when `None`).
///
/// ```text
/// e0'     = A e0 + B e1 + Σ c_k e_k
/// e1'     = (A+B) e1 + Σ d_k e_k     with [e1', e0'] = [e0', e0']
/// e'_{i+1} = [e'_i, e0']             1 ≤ i ≤ n-1
/// ```
pub fn adapted_change_tensor(
    t: &StructureTensor,
    g: &GroupElement,
    higher: Option<&[Scalar]>,
) -> Result<(StructureTensor, FirstClassParams), OracleError> {
    let d = t.dim();
    if d < 5 {
        return Err(OracleError::Dimension(d));
    }
    let n = d - 1;
    if let Some(c) = higher {
        if c.len() != n - 1 {
            return Err(OracleError::HigherLength {
                expected: n - 1,
                found: c.len(),
            });
        }
    }
    let unit = |i: usize| -> Vec<Scalar> {
        (0..d).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
    };

    let mut e0 = vec![Scalar::zero(); d];
    e0[0] = g.a().clone();
    e0[1] = g.b().clone();
    if let Some(c) = higher {
        for (k, ck) in c.iter().enumerate() {
            e0[k + 2] = ck.clone();
        }
    }
    let apb = g.a() + g.b();

    // Σ_{k≥2} d_k [e_k, e0'] = [e0', e0'] − (A+B)[e1, e0']
    let square = t.product(&e0, &e0);
    let e1_times = t.product(&unit(1), &e0);
    let columns: Vec<Vec<Scalar>> = (2..d).map(|k| t.product(&unit(k), &e0)).collect();
    let matrix: Vec<Vec<Scalar>> = (0..d)
        .map(|row| columns.iter().map(|col| col[row].clone()).collect())
        .collect();
    let rhs: Vec<Scalar> = square
        .iter()
        .zip(&e1_times)
        .map(|(s, e)| s - &(&apb * e))
        .collect();
    let dk = solve(&matrix, &rhs).map_err(OracleError::Completion)?;
    let mut e1 = vec![Scalar::zero(); d];
    e1[1] = apb;
    for (k, v) in dk.into_iter().enumerate() {
        e1[k + 2] = v;
    }

    let mut basis = vec![e0.clone(), e1];
    for i in 1..n {
        let next = t.product(&basis[i], &e0);
        basis.push(next);
    }

    // columns of P are the new basis vectors
    let p: Vec<Vec<Scalar>> = (0..d)
        .map(|row| basis.iter().map(|v| v[row].clone()).collect())
        .collect();
    let p_inv = inverse(&p).map_err(|_| OracleError::SingularTransition)?;

    let mut out = StructureTensor::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let prod = t.product(&basis[i], &basis[j]);
            if prod.iter().all(Scalar::is_zero) {
                continue;
            }
            for (k, v) in mat_vec(&p_inv, &prod).into_iter().enumerate() {
                if !v.is_zero() {
                    out.set(i, j, k, v);
                }
            }
        }
    }
    let params = params_from_tensor(&out)?;
    Ok((out, params))
}

/// Sum over nondecreasing chains `lower ≤ i_1 ≤ … ≤ i_m ≤ top` of
/// `α_{top+3-i_m} · α_{i_m+3-i_{m-1}} ⋯ α_{i_2+3-i_1} · α_{i_1+3-lower}`,
/// enumerated with an odometer.
fn chain_total(p: &FirstClassParams, top: usize, lower: usize, m: usize) -> Scalar {
    if m > 0 && lower > top {
        return Scalar::zero();
    }
    let mut idx = vec![lower; m];
    let mut total = Scalar::zero();
    loop {
        let mut prev = lower;
        let mut prod = Scalar::one();
        for &i in &idx {
            prod = &prod * p.alpha(i + 3 - prev);
            prev = i;
        }
        prod = &prod * p.alpha(top + 3 - prev);
        total += &prod;

        // advance to the next nondecreasing tuple
        let Some(pos) = (0..m).rev().find(|&q| idx[q] < top) else {
            break;
        };
        let v = idx[pos] + 1;
        for slot in &mut idx[pos..] {
            *slot = v;
        }
    }
    total
}

/// `Σ_{j=1}^{k-1} C(k-1, k-1-j) A^{k-1-j} B^j T_j(t, k)`.
fn coefficient_of(p: &FirstClassParams, a: &Scalar, b: &Scalar, t: usize, k: usize) -> Scalar {
    let mut acc = Scalar::zero();
    for j in 1..k {
        let chains = chain_total(p, t, k + j, j - 1);
        if chains.is_zero() {
            continue;
        }
        let c = Scalar::from_bigint(binomial(k as i64 - 1, (k - 1 - j) as i64));
        acc += &(&(&(&c * &a.pow((k - 1 - j) as u32)) * &b.pow(j as u32)) * &chains);
    }
    acc
}

/// The transformation rule written directly in `A` and `B`:
///
/// ```text
/// α'_t = A^{1-t} ((A+B) α_t − Σ_{k=3}^{t-1} coef(t, k) α'_k)
/// θ'   = A^{1-n} (A θ + B α_n − Σ_{k=3}^{n-1} coef(n, k) α'_k)
/// ```
pub fn nested_sums_direct(g: &GroupElement, p: &FirstClassParams) -> FirstClassParams {
    let n = p.n();
    let a = g.a();
    let b = g.b();
    let apb = a + b;
    let a_inv = a.inv().expect("valid group element has A != 0");

    let mut primed: Vec<Scalar> = Vec::with_capacity(n - 2);
    for t in 3..=n {
        let mut inner = &apb * p.alpha(t);
        for k in 3..t {
            let coef = coefficient_of(p, a, b, t, k);
            inner -= &(&coef * &primed[k - 3]);
        }
        primed.push(&a_inv.pow((t - 1) as u32) * &inner);
    }
    let mut inner = &(a * p.theta()) + &(b * p.alpha(n));
    for k in 3..n {
        let coef = coefficient_of(p, a, b, n, k);
        inner -= &(&coef * &primed[k - 3]);
    }
    let theta = &a_inv.pow((n - 1) as u32) * &inner;
    FirstClassParams::new(n, primed, theta).expect("shape preserved")
}

/// `count` pairs `(g, ρ(g; p))` with `g` drawn from `cfg`.
pub fn orbit_samples<R: Rng + ?Sized>(
    p: &FirstClassParams,
    count: usize,
    rng: &mut R,
    cfg: &SampleConfig,
) -> Vec<(GroupElement, FirstClassParams)> {
    (0..count)
        .map(|_| {
            let g = random_group_element(rng, cfg);
            let image = apply_rho(&g, p);
            (g, image)
        })
        .collect()
}
