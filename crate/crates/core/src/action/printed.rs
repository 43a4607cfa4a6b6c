//! Closed-form transformation systems for `n = 4, 5, 6, 7`, written out
//! term by term. These are an independent reference for the general
//! chain-sum evaluator and must agree with it exactly.

use super::{ActionError, GroupElement};
use crate::algebra::FirstClassParams;
use crate::scalar::Scalar;

/// `coef · f_1 · f_2 · …`
fn term(coef: i64, factors: &[&Scalar]) -> Scalar {
    factors
        .iter()
        .fold(Scalar::from_int(coef), |acc, f| &acc * *f)
}

pub fn lowdim_closed_form(
    n: usize,
    g: &GroupElement,
    p: &FirstClassParams,
) -> Result<FirstClassParams, ActionError> {
    if !(4..=7).contains(&n) {
        return Err(ActionError::UnsupportedDimension(n));
    }
    if p.n() != n {
        return Err(ActionError::UnsupportedDimension(p.n()));
    }
    let x = g.x();
    let y = g.y();
    let q = &Scalar::one() + &y;
    let (y2, y3, y4) = (y.pow(2), y.pow(3), y.pow(4));
    let a3 = p.alpha(3);
    let a4 = p.alpha(4);
    let a3_2 = a3.square();
    let a3_3 = a3.pow(3);
    let a3_4 = a3.pow(4);
    let a3_5 = a3.pow(5);
    let a4_2 = a4.square();
    let th = p.theta();

    let mut alpha = Vec::with_capacity(n - 2);
    // α'_3 = (1/A)(1 + B/A) α_3
    alpha.push(term(1, &[&x, &q, a3]));
    // α'_4 = (1/A²)(1 + B/A)(α_4 − 2(B/A)α_3²)
    alpha.push(term(1, &[&x.pow(2), &q, &(a4 - &term(2, &[&y, &a3_2]))]));

    let theta = match n {
        4 => {
            // θ' = (1/A²)[θ + (B/A)α_4 − 2(1 + B/A)(B/A)α_3²]
            let inner = &(th + &term(1, &[&y, a4])) - &term(2, &[&q, &y, &a3_2]);
            &x.pow(2) * &inner
        }
        5 => {
            let a5 = p.alpha(5);
            let t = a4 - &term(1, &[&y, &a3_2]);
            // α'_5 = (1/A³)(1 + B/A)[α_5 − 5(B/A)(α_4 − (B/A)α_3²)α_3]
            alpha.push(term(1, &[&x.pow(3), &q, &(a5 - &term(5, &[&y, &t, a3]))]));
            // θ' = (1/A³)[θ + (B/A)α_5 − 5(1 + B/A)(B/A)(α_4 − (B/A)α_3²)α_3]
            let inner = &(th + &term(1, &[&y, a5])) - &term(5, &[&q, &y, &t, a3]);
            &x.pow(3) * &inner
        }
        6 | 7 => {
            let a5 = p.alpha(5);
            let a6 = p.alpha(6);
            let t = a4 - &term(1, &[&y, &a3_2]);
            alpha.push(term(1, &[&x.pow(3), &q, &(a5 - &term(5, &[&y, &t, a3]))]));
            // α'_6 = (1/A⁴)(1+B/A)[α_6 − 6(B/A)α_3α_5 + 21(B/A)²α_3²α_4
            //                      − 3(B/A)α_4² − 14(B/A)³α_3⁴]
            let br6 = [
                term(-6, &[&y, a3, a5]),
                term(21, &[&y2, &a3_2, a4]),
                term(-3, &[&y, &a4_2]),
                term(-14, &[&y3, &a3_4]),
            ]
            .into_iter()
            .sum::<Scalar>();
            alpha.push(term(1, &[&x.pow(4), &q, &(a6 + &br6)]));
            if n == 6 {
                // θ' = (1/A⁴){θ + (B/A)α_6 − (1+B/A)[6(B/A)α_3α_5 − 21(B/A)²α_3²α_4
                //                                    + 3(B/A)α_4² + 14(B/A)³α_3⁴]}
                let sq = [
                    term(6, &[&y, a3, a5]),
                    term(-21, &[&y2, &a3_2, a4]),
                    term(3, &[&y, &a4_2]),
                    term(14, &[&y3, &a3_4]),
                ]
                .into_iter()
                .sum::<Scalar>();
                let inner = &(th + &term(1, &[&y, a6])) - &(&q * &sq);
                &x.pow(4) * &inner
            } else {
                let a7 = p.alpha(7);
                // α'_7 = (1/A⁵)(1+B/A)[α_7 − 7(B/A)α_3α_6 + 28(B/A)²α_3²α_5
                //   + 28(B/A)²α_3α_4² − 7(B/A)α_4α_5 − 84(B/A)³α_3³α_4 + 42(B/A)⁴α_3⁵]
                let br7 = [
                    term(-7, &[&y, a3, a6]),
                    term(28, &[&y2, &a3_2, a5]),
                    term(28, &[&y2, a3, &a4_2]),
                    term(-7, &[&y, a4, a5]),
                    term(-84, &[&y3, &a3_3, a4]),
                    term(42, &[&y4, &a3_5]),
                ]
                .into_iter()
                .sum::<Scalar>();
                alpha.push(term(1, &[&x.pow(5), &q, &(a7 + &br7)]));
                // θ' = (1/A⁵){θ + (B/A)α_7 − (1+B/A)[7(B/A)α_3α_6 − 28(B/A)²α_3²α_5
                //   − 28(B/A)²α_3α_4² + 7(B/A)α_4α_5 + 84(B/A)³α_3³α_4 − 42(B/A)⁴α_3⁵]}
                let sq = [
                    term(7, &[&y, a3, a6]),
                    term(-28, &[&y2, &a3_2, a5]),
                    term(-28, &[&y2, a3, &a4_2]),
                    term(7, &[&y, a4, a5]),
                    term(84, &[&y3, &a3_3, a4]),
                    term(-42, &[&y4, &a3_5]),
                ]
                .into_iter()
                .sum::<Scalar>();
                let inner = &(th + &term(1, &[&y, a7])) - &(&q * &sq);
                &x.pow(5) * &inner
            }
        }
        _ => unreachable!(),
    };
    Ok(FirstClassParams::new(n, alpha, theta).expect("shape preserved"))
}
