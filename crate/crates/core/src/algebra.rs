//! Parameter vectors, structure-constant tensors and the structural checks
//! (Leibniz identity, lower central series, filiform test).
//!
//! Basis vectors are `e_0, …, e_n`; an algebra with parameter dimension `n`
//! has `n + 1` basis vectors.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("tensor is not of first-class shape: entry ({i},{j},{k}) is {found}, expected {expected}")]
    ShapeMismatch {
        i: usize,
        j: usize,
        k: usize,
        expected: Scalar,
        found: Scalar,
    },
    #[error("invalid algebra record: {0}")]
    Record(String),
}

/// Parameters `α = (α_3, …, α_n, θ)` of a first-class algebra `L(α)`.
///
/// Two indexings are in use. Positions `3..=n+1` address `α_3, …, α_n`
/// and then `θ` (position `n + 1`); see [`FirstClassParams::z`]. The
/// action components `ρ_1, …, ρ_{n-1}` address the same storage shifted by
/// two: `ρ_i ↔ α_{i+2}` for `i ≤ n - 2`, and `ρ_{n-1} ↔ θ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FirstClassParams {
    n: usize,
    alpha: Vec<Scalar>,
    theta: Scalar,
}

impl FirstClassParams {
    pub fn new(n: usize, alpha: Vec<Scalar>, theta: Scalar) -> Result<Self, AlgebraError> {
        if n < 4 {
            return Err(AlgebraError::InvalidParams(format!("n = {n}, need n >= 4")));
        }
        if alpha.len() != n - 2 {
            return Err(AlgebraError::InvalidParams(format!(
                "alpha has length {}, expected n - 2 = {}",
                alpha.len(),
                n - 2
            )));
        }
        Ok(FirstClassParams { n, alpha, theta })
    }

    pub fn zero(n: usize) -> Result<Self, AlgebraError> {
        let len = n.saturating_sub(2);
        FirstClassParams::new(n, vec![Scalar::zero(); len], Scalar::zero())
    }

    /// Builds from the position vector `(z_3, …, z_{n+1})`.
    pub fn from_positions(n: usize, mut z: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if z.len() != n.saturating_sub(1) {
            return Err(AlgebraError::InvalidParams(format!(
                "{} positions given, expected n - 1 = {}",
                z.len(),
                n.saturating_sub(1)
            )));
        }
        let theta = z.pop().unwrap_or_default();
        FirstClassParams::new(n, z, theta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn alphas(&self) -> &[Scalar] {
        &self.alpha
    }

    pub fn theta(&self) -> &Scalar {
        &self.theta
    }

    /// `α_t` for `3 ≤ t ≤ n`.
    pub fn alpha(&self, t: usize) -> &Scalar {
        assert!((3..=self.n).contains(&t), "alpha index {t} outside 3..={}", self.n);
        &self.alpha[t - 3]
    }

    /// Position `i ∈ 3..=n+1`: `α_i`, or `θ` when `i = n + 1`.
    pub fn z(&self, i: usize) -> &Scalar {
        if i == self.n + 1 {
            &self.theta
        } else {
            self.alpha(i)
        }
    }

    pub fn set_z(&mut self, i: usize, value: Scalar) {
        if i == self.n + 1 {
            self.theta = value;
        } else {
            assert!((3..=self.n).contains(&i), "position {i} outside 3..={}", self.n + 1);
            self.alpha[i - 3] = value;
        }
    }

    /// Action component `ρ_i`, `1 ≤ i ≤ n - 1`.
    pub fn rho_component(&self, i: usize) -> &Scalar {
        self.z(rho_position(self.n, i))
    }

    /// All positions `z_3, …, z_{n+1}` in order.
    pub fn positions(&self) -> impl Iterator<Item = &Scalar> {
        self.alpha.iter().chain(std::iter::once(&self.theta))
    }
}

/// Storage position of action component `ρ_i`.
pub fn rho_position(n: usize, i: usize) -> usize {
    assert!((1..n).contains(&i), "rho index {i} outside 1..={}", n - 1);
    if i == n - 1 {
        n + 1
    } else {
        i + 2
    }
}

/// Parameters `(β_3, …, β_n, γ)` of a second-class algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SecondClassParams {
    n: usize,
    beta: Vec<Scalar>,
    gamma: Scalar,
}

impl SecondClassParams {
    pub fn new(n: usize, beta: Vec<Scalar>, gamma: Scalar) -> Result<Self, AlgebraError> {
        if n < 4 {
            return Err(AlgebraError::InvalidParams(format!("n = {n}, need n >= 4")));
        }
        if beta.len() != n - 2 {
            return Err(AlgebraError::InvalidParams(format!(
                "beta has length {}, expected n - 2 = {}",
                beta.len(),
                n - 2
            )));
        }
        Ok(SecondClassParams { n, beta, gamma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self, t: usize) -> &Scalar {
        &self.beta[t - 3]
    }

    pub fn betas(&self) -> &[Scalar] {
        &self.beta
    }

    pub fn gamma(&self) -> &Scalar {
        &self.gamma
    }
}

/// Dense structure constants `γ_ij^k`: `[e_i, e_j] = Σ_k γ_ij^k e_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct StructureTensor {
    dim: usize,
    entries: Vec<Scalar>,
}

impl StructureTensor {
    pub fn zeros(dim: usize) -> Self {
        StructureTensor {
            dim,
            entries: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        assert!(i < self.dim && j < self.dim && k < self.dim);
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.entries[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        let at = self.idx(i, j, k);
        self.entries[at] = value;
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Scalar> {
        let start = self.idx(i, j, 0);
        self.entries[start..start + self.dim].to_vec()
    }

    /// `[x, y]` for coordinate vectors `x`, `y`.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi * yj;
                let start = self.idx(i, j, 0);
                for (o, g) in out.iter_mut().zip(&self.entries[start..start + self.dim]) {
                    if !g.is_zero() {
                        *o += &(&c * g);
                    }
                }
            }
        }
        out
    }

    /// `[e_i, v]`.
    fn left_basis(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (l, vl) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (k, o) in out.iter_mut().enumerate() {
                let g = self.get(i, l, k);
                if !g.is_zero() {
                    *o += &(vl * g);
                }
            }
        }
        out
    }

    /// `[v, e_k]`.
    fn right_basis(&self, v: &[Scalar], k: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (l, vl) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (m, o) in out.iter_mut().enumerate() {
                let g = self.get(l, k, m);
                if !g.is_zero() {
                    *o += &(vl * g);
                }
            }
        }
        out
    }

    /// Nonzero entries in lexicographic `(i, j, k)` order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, &Scalar)> {
        let d = self.dim;
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(at, v)| (at / (d * d), (at / d) % d, at % d, v))
            .collect()
    }
}

impl fmt::Debug for StructureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureTensor(dim={}) {{", self.dim)?;
        for (i, j, k, v) in self.nonzero_entries() {
            write!(f, " ({i},{j},{k})={v}")?;
        }
        write!(f, " }}")
    }
}

pub fn build_tensor_first(p: &FirstClassParams) -> StructureTensor {
    let n = p.n();
    let mut t = StructureTensor::zeros(n + 1);
    t.set(0, 0, 2, Scalar::one());
    for i in 1..n {
        t.set(i, 0, i + 1, Scalar::one());
    }
    for s in 3..n {
        t.set(0, 1, s, p.alpha(s).clone());
    }
    t.set(0, 1, n, p.theta().clone());
    for j in 1..=n - 2 {
        for s in 3..=n + 1 - j {
            t.set(j, 1, j + s - 1, p.alpha(s).clone());
        }
    }
    t
}

pub fn build_tensor_second(p: &SecondClassParams) -> StructureTensor {
    let n = p.n();
    let mut t = StructureTensor::zeros(n + 1);
    t.set(0, 0, 2, Scalar::one());
    for i in 2..n {
        t.set(i, 0, i + 1, Scalar::one());
    }
    for s in 3..=n {
        t.set(0, 1, s, p.beta(s).clone());
    }
    t.set(1, 1, n, p.gamma().clone());
    for j in 2..=n - 2 {
        for s in 3..=n + 1 - j {
            t.set(j, 1, j + s - 1, p.beta(s).clone());
        }
    }
    t
}

/// A quadruple `(i, j, k, m)` at which the Leibniz identity fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub m: usize,
    pub value: Scalar,
}

/// Every coordinate of `[x,[y,z]] - [[x,y],z] + [[x,z],y]` on basis
/// triples that is nonzero. Empty exactly when the tensor is a Leibniz
/// algebra. No early exit.
pub fn leibniz_defect(t: &StructureTensor) -> Vec<LeibnizViolation> {
    let d = t.dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let ij = t.basis_product(i, j);
            for k in 0..d {
                let lhs = t.left_basis(i, &t.basis_product(j, k));
                let first = t.right_basis(&ij, k);
                let second = t.right_basis(&t.basis_product(i, k), j);
                for m in 0..d {
                    let v = &(&lhs[m] - &first[m]) + &second[m];
                    if !v.is_zero() {
                        out.push(LeibnizViolation { i, j, k, m, value: v });
                    }
                }
            }
        }
    }
    out
}

/// Dimensions of `L^1 ⊇ L^2 ⊇ …` with `L^{k+1} = [L^k, L]`. Ends with `0`
/// when the series reaches zero; otherwise stops at the first repeated
/// dimension without appending it again.
pub fn lower_central_dims(t: &StructureTensor) -> Vec<usize> {
    let d = t.dim();
    let mut basis: linalg::Matrix = (0..d)
        .map(|i| (0..d).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    let mut dims = vec![d];
    while !basis.is_empty() {
        let spans: linalg::Matrix = basis
            .iter()
            .flat_map(|b| (0..d).map(move |j| t.right_basis(b, j)))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let next = linalg::row_space_basis(&spans);
        if next.len() == basis.len() {
            break;
        }
        dims.push(next.len());
        basis = next;
    }
    dims
}

/// `dim L^i = dim L - i` for `2 ≤ i ≤ dim L`, i.e. the series is
/// `[d, d-2, d-3, …, 1, 0]`.
pub fn is_filiform(t: &StructureTensor) -> bool {
    let d = t.dim();
    if d < 2 {
        return false;
    }
    let expected: Vec<usize> = std::iter::once(d).chain((0..=d - 2).rev()).collect();
    lower_central_dims(t) == expected
}

/// Inverse of [`build_tensor_first`]; fails on the first entry (in
/// lexicographic order) that does not fit the first-class table.
pub fn params_from_tensor(t: &StructureTensor) -> Result<FirstClassParams, AlgebraError> {
    let d = t.dim();
    if d < 5 {
        return Err(AlgebraError::InvalidParams(format!(
            "dimension {d} is below the first-class minimum 5"
        )));
    }
    let n = d - 1;
    let mut alpha: Vec<Scalar> = (3..n).map(|s| t.get(0, 1, s).clone()).collect();
    alpha.push(t.get(1, 1, n).clone());
    let p = FirstClassParams::new(n, alpha, t.get(0, 1, n).clone())?;
    let rebuilt = build_tensor_first(&p);
    for ((at, found), expected) in t.entries.iter().enumerate().zip(&rebuilt.entries) {
        if found != expected {
            return Err(AlgebraError::ShapeMismatch {
                i: at / (d * d),
                j: (at / d) % d,
                k: at % d,
                expected: expected.clone(),
                found: found.clone(),
            });
        }
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// JSON record
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ClassTag {
    First,
    Second,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    n: usize,
    class: ClassTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<Scalar>,
}

/// `{"n": 4, "class": "first", "alpha": ["1","2"], "theta": "3"}` or
/// `{"n": 4, "class": "second", "beta": ["1","1"], "gamma": "2"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRecord", into = "RawRecord")]
pub enum AlgebraRecord {
    First(FirstClassParams),
    Second(SecondClassParams),
}

impl TryFrom<RawRecord> for AlgebraRecord {
    type Error = AlgebraError;

    fn try_from(r: RawRecord) -> Result<Self, Self::Error> {
        let missing = |f: &str| AlgebraError::Record(format!("missing field `{f}`"));
        let extra = |f: &str, c: &str| AlgebraError::Record(format!("field `{f}` not allowed for class {c}"));
        match r.class {
            ClassTag::First => {
                if r.beta.is_some() {
                    return Err(extra("beta", "first"));
                }
                if r.gamma.is_some() {
                    return Err(extra("gamma", "first"));
                }
                let alpha = r.alpha.ok_or_else(|| missing("alpha"))?;
                let theta = r.theta.ok_or_else(|| missing("theta"))?;
                Ok(AlgebraRecord::First(FirstClassParams::new(r.n, alpha, theta)?))
            }
            ClassTag::Second => {
                if r.alpha.is_some() {
                    return Err(extra("alpha", "second"));
                }
                if r.theta.is_some() {
                    return Err(extra("theta", "second"));
                }
                let beta = r.beta.ok_or_else(|| missing("beta"))?;
                let gamma = r.gamma.ok_or_else(|| missing("gamma"))?;
                Ok(AlgebraRecord::Second(SecondClassParams::new(r.n, beta, gamma)?))
            }
        }
    }
}

impl From<AlgebraRecord> for RawRecord {
    fn from(r: AlgebraRecord) -> Self {
        match r {
            AlgebraRecord::First(p) => RawRecord {
                n: p.n,
                class: ClassTag::First,
                alpha: Some(p.alpha),
                theta: Some(p.theta),
                beta: None,
                gamma: None,
            },
            AlgebraRecord::Second(p) => RawRecord {
                n: p.n,
                class: ClassTag::Second,
                alpha: None,
                theta: None,
                beta: Some(p.beta),
                gamma: Some(p.gamma),
            },
        }
    }
}

impl AlgebraRecord {
    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        serde_json::from_str(text).map_err(|e| AlgebraError::Record(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn n(&self) -> usize {
        match self {
            AlgebraRecord::First(p) => p.n(),
            AlgebraRecord::Second(p) => p.n(),
        }
    }

    pub fn tensor(&self) -> StructureTensor {
        match self {
            AlgebraRecord::First(p) => build_tensor_first(p),
            AlgebraRecord::Second(p) => build_tensor_second(p),
        }
    }
}

impl From<FirstClassParams> for AlgebraRecord {
    fn from(p: FirstClassParams) -> Self {
        AlgebraRecord::First(p)
    }
}

impl From<SecondClassParams> for AlgebraRecord {
    fn from(p: SecondClassParams) -> Self {
        AlgebraRecord::Second(p)
    }
}
