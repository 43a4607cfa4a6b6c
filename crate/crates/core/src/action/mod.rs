//! The two-parameter base-change action on first-class parameters.
//!
//! A [`GroupElement`] `(A, B)` with `A(A+B) ≠ 0` acts by
//! `ρ(x, y; ·)` with `x = 1/A`, `y = B/A`:
//!
//! ```text
//! α'_t = x^{t-2} φ_t(y; α)      3 ≤ t ≤ n
//! θ'   = x^{n-2} φ_{n+1}(y; α)
//! φ_t     = (1+y) z_t − Σ_{k=3}^{t-1} bracket(t, k) φ_k
//! φ_{n+1} = z_{n+1} + y z_n − Σ_{k=3}^{n-1} bracket(n, k) φ_k
//! ```
//!
//! `φ_{n+1}` carries no `(1+y)` factor in front of its sum; the variant with
//! that factor is kept as [`ThetaForm::WithSumPrefactor`] only so tests can
//! show it disagrees with the closed forms.

mod bracket;
mod printed;

pub use bracket::{bracket, BracketMethod};
pub use printed::lowdim_closed_form;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::FirstClassParams;
use crate::scalar::{Scalar, ScalarError};
use bracket::{bracket_with, ChainSums};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("invalid group element (A, B) = ({a}, {b}): need A(A+B) != 0")]
    InvalidGroupElement { a: Scalar, b: Scalar },
    #[error("index t = {t} outside 3..={n}")]
    IndexOutOfRange { t: usize, n: usize },
    #[error("no closed form printed for n = {0}")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `(A, B)` with `A ≠ 0` and `A + B ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroupElement", into = "RawGroupElement")]
pub struct GroupElement {
    a: Scalar,
    b: Scalar,
}

#[derive(Serialize, Deserialize)]
struct RawGroupElement {
    a: Scalar,
    b: Scalar,
}

impl TryFrom<RawGroupElement> for GroupElement {
    type Error = ActionError;
    fn try_from(r: RawGroupElement) -> Result<Self, Self::Error> {
        GroupElement::new(r.a, r.b)
    }
}

impl From<GroupElement> for RawGroupElement {
    fn from(g: GroupElement) -> Self {
        RawGroupElement { a: g.a, b: g.b }
    }
}

impl GroupElement {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self, ActionError> {
        if a.is_zero() || (&a + &b).is_zero() {
            return Err(ActionError::InvalidGroupElement { a, b });
        }
        Ok(GroupElement { a, b })
    }

    pub fn identity() -> Self {
        GroupElement {
            a: Scalar::one(),
            b: Scalar::zero(),
        }
    }

    /// The element acting as `ρ(x, y; ·)`: `A = 1/x`, `B = y/x`.
    pub fn from_xy(x: &Scalar, y: &Scalar) -> Result<Self, ActionError> {
        let a = x.inv()?;
        let b = y * &a;
        GroupElement::new(a, b)
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    /// `x = 1/A`.
    pub fn x(&self) -> Scalar {
        self.a.inv().expect("A is nonzero")
    }

    /// `y = B/A`.
    pub fn y(&self) -> Scalar {
        &self.b * &self.x()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// The element acting as "first `self`, then `then`":
    /// `(A₁A₂, A₁B₂ + A₂B₁ + B₁B₂)`.
    pub fn compose(&self, then: &GroupElement) -> GroupElement {
        let a = &self.a * &then.a;
        let b = &(&(&self.a * &then.b) + &(&then.a * &self.b)) + &(&self.b * &then.b);
        GroupElement::new(a, b).expect("valid elements compose to a valid element")
    }

    /// `(1/A, −B/(A(A+B)))`.
    pub fn inverse(&self) -> GroupElement {
        let a = self.x();
        let sum = &self.a + &self.b;
        let b = -(&self.b * &(&self.a * &sum).inv().expect("A(A+B) is nonzero"));
        GroupElement::new(a, b).expect("inverse of a valid element is valid")
    }

    /// `(A, A+B)`: the coordinates in which composition is componentwise
    /// multiplication.
    pub fn torus_coordinates(&self) -> (Scalar, Scalar) {
        (self.a.clone(), &self.a + &self.b)
    }
}

pub fn compose_group(g1: &GroupElement, g2: &GroupElement) -> GroupElement {
    g1.compose(g2)
}

pub fn invert_group(g: &GroupElement) -> GroupElement {
    g.inverse()
}

/// Form of the `θ` kernel `φ_{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaForm {
    /// `z_{n+1} + y z_n − Σ bracket(n,k) φ_k`.
    #[default]
    Adopted,
    /// `z_{n+1} + y z_n − (1+y) Σ bracket(n,k) φ_k`. Negative control only.
    WithSumPrefactor,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RhoOptions {
    pub method: BracketMethod,
    pub theta_form: ThetaForm,
}

/// Memoized `φ_3, …, φ_n` for one `(y, z)`.
struct PhiTable<'a> {
    p: &'a FirstClassParams,
    sums: ChainSums<'a>,
    y_powers: Vec<Scalar>,
    phi: Vec<Scalar>,
}

impl<'a> PhiTable<'a> {
    fn new(y: &Scalar, p: &'a FirstClassParams, method: BracketMethod) -> Self {
        let n = p.n();
        let y_powers = (0..n as u32).map(|e| y.pow(e)).collect();
        let mut table = PhiTable {
            p,
            sums: ChainSums::new(p, method),
            y_powers,
            phi: Vec::with_capacity(n - 2),
        };
        let one_plus_y = &Scalar::one() + y;
        for t in 3..=n {
            let mut v = &one_plus_y * p.z(t);
            v -= &table.bracket_sum(t);
            table.phi.push(v);
        }
        table
    }

    fn phi(&self, t: usize) -> &Scalar {
        &self.phi[t - 3]
    }

    /// `Σ_{k=3}^{t-1} bracket(t, k) φ_k`.
    fn bracket_sum(&self, t: usize) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 3..t {
            let phi_k = &self.phi[k - 3];
            if phi_k.is_zero() {
                continue;
            }
            let b = bracket_with(&self.sums, &self.y_powers, t, k);
            if !b.is_zero() {
                acc += &(&b * phi_k);
            }
        }
        acc
    }

    fn phi_theta(&self, form: ThetaForm) -> Scalar {
        let n = self.p.n();
        let y = &self.y_powers[1];
        let sum = self.bracket_sum(n);
        let sum = match form {
            ThetaForm::Adopted => sum,
            ThetaForm::WithSumPrefactor => &(&Scalar::one() + y) * &sum,
        };
        &(self.p.z(n + 1) + &(y * self.p.z(n))) - &sum
    }
}

/// `φ_t(y; z)` for `3 ≤ t ≤ n`.
pub fn eval_phi(t: usize, y: &Scalar, p: &FirstClassParams) -> Result<Scalar, ActionError> {
    if !(3..=p.n()).contains(&t) {
        return Err(ActionError::IndexOutOfRange { t, n: p.n() });
    }
    Ok(PhiTable::new(y, p, BracketMethod::Naive).phi(t).clone())
}

/// `φ_{n+1}(y; z)`.
pub fn eval_phi_theta(y: &Scalar, p: &FirstClassParams) -> Scalar {
    PhiTable::new(y, p, BracketMethod::Naive).phi_theta(ThetaForm::Adopted)
}

pub fn apply_rho(g: &GroupElement, p: &FirstClassParams) -> FirstClassParams {
    apply_rho_with(g, p, RhoOptions::default())
}

pub fn apply_rho_with(g: &GroupElement, p: &FirstClassParams, opts: RhoOptions) -> FirstClassParams {
    let n = p.n();
    let x = g.x();
    let table = PhiTable::new(&g.y(), p, opts.method);
    let mut x_pow = x.clone();
    let mut alpha = Vec::with_capacity(n - 2);
    for t in 3..=n {
        alpha.push(&x_pow * table.phi(t));
        if t < n {
            x_pow = &x_pow * &x;
        }
    }
    // x_pow = x^{n-2}
    let theta = &x_pow * &table.phi_theta(opts.theta_form);
    FirstClassParams::new(n, alpha, theta).expect("shape preserved")
}
