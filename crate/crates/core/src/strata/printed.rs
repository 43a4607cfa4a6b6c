//! Closed-form invariant lists for small `n`, transcribed term by term.
//! These are cross-checks for [`super::invariant_vector`], not the
//! definition of the invariants.

use super::{classify_stratum, InvariantVector, StrataError, Stratum};
use crate::algebra::FirstClassParams;
use crate::scalar::Scalar;

fn c(v: i64) -> Scalar {
    Scalar::from_int(v)
}

/// `Σ coef · Π factors`
fn poly(terms: &[(i64, &[&Scalar])]) -> Scalar {
    terms
        .iter()
        .map(|(coef, factors)| factors.iter().fold(c(*coef), |acc, f| &acc * *f))
        .sum()
}

fn div(a: Scalar, b: &Scalar) -> Result<Scalar, StrataError> {
    Ok(a.checked_div(b)?)
}

pub fn lowdim_invariant_lists(p: &FirstClassParams) -> Result<InvariantVector, StrataError> {
    let n = p.n();
    let stratum = classify_stratum(p)?;
    let components = match stratum {
        Stratum::U if (4..=7).contains(&n) => u_list(p)?,
        Stratum::U1pp if (6..=7).contains(&n) => u1_list(p)?,
        Stratum::U2pp if (5..=7).contains(&n) => u2_list(p)?,
        _ => return Err(StrataError::Uncovered { stratum, n }),
    };
    Ok(InvariantVector {
        n,
        stratum,
        first_index: stratum.first_invariant_index(),
        components,
    })
}

fn u_list(p: &FirstClassParams) -> Result<Vec<Scalar>, StrataError> {
    let n = p.n();
    let a3 = p.alpha(3);
    let a4 = p.alpha(4);
    let th = p.theta();
    let a3_2 = a3.square();
    let a3_3 = a3.pow(3);
    let a3_4 = a3.pow(4);
    let a3_5 = a3.pow(5);
    let a4_2 = a4.square();
    // X = 2α_3/(α_4 + 2α_3²)
    let x = div(&c(2) * a3, &(a4 + &(&c(2) * &a3_2)))?;
    let x2 = x.pow(2);

    if n == 4 {
        return Ok(vec![&x2 * &(th - a4)]);
    }
    let a5 = p.alpha(5);
    // (α_5 + 5α_3α_4 + 5α_3³)/α_3
    let p5 = div(poly(&[(1, &[a5]), (5, &[a3, a4]), (5, &[&a3_3])]), a3)?;
    let rho3 = &(&x2 * &p5) - &c(5);
    if n == 5 {
        let rho4 = &(&x.pow(3) * &(th - a5)) + &rho3;
        return Ok(vec![rho3, rho4]);
    }
    let a6 = p.alpha(6);
    let x3 = x.pow(3);
    // (α_6 + 6α_3α_5 + 21α_3²α_4 + 3α_4² + 14α_3⁴)/α_3
    let q = div(
        poly(&[
            (1, &[a6]),
            (6, &[a3, a5]),
            (21, &[&a3_2, a4]),
            (3, &[&a4_2]),
            (14, &[&a3_4]),
        ]),
        a3,
    )?;
    // (6α_3α_5 + 42α_3²α_4 + 3α_4² + 42α_3⁴)/α_3²
    let r = div(
        poly(&[(6, &[a3, a5]), (42, &[&a3_2, a4]), (3, &[&a4_2]), (42, &[&a3_4])]),
        &a3_2,
    )?;
    let rho4 = &(&(&x3 * &q) - &(&x2 * &r)) + &c(28);
    if n == 6 {
        let rho5 = &(&x.pow(4) * &(th - a6)) + &rho4;
        return Ok(vec![rho3, rho4, rho5]);
    }
    let a7 = p.alpha(7);
    // (α_7 + 7α_3α_6 + 28α_3α_4² + 28α_3²α_5 + 7α_4α_5 + 84α_3³α_4 + 42α_3⁵)/α_3
    let s = div(
        poly(&[
            (1, &[a7]),
            (7, &[a3, a6]),
            (28, &[a3, &a4_2]),
            (28, &[&a3_2, a5]),
            (7, &[a4, a5]),
            (84, &[&a3_3, a4]),
            (42, &[&a3_5]),
        ]),
        a3,
    )?;
    // (7α_3α_6 + 56α_3α_4² + 56α_3²α_5 + 7α_4α_5 + 252α_3³α_4 + 168α_3⁵)/α_3²
    let t = div(
        poly(&[
            (7, &[a3, a6]),
            (56, &[a3, &a4_2]),
            (56, &[&a3_2, a5]),
            (7, &[a4, a5]),
            (252, &[&a3_3, a4]),
            (168, &[&a3_5]),
        ]),
        &a3_2,
    )?;
    // 28(α_4² + α_3α_5 + 9α_3²α_4 + 9α_3⁴)/α_3²
    let w = div(
        poly(&[(28, &[&a4_2]), (28, &[a3, a5]), (252, &[&a3_2, a4]), (252, &[&a3_4])]),
        &a3_2,
    )?;
    let rho5 = [&x.pow(4) * &s, -(&x3 * &t), &x2 * &w, c(-126)]
        .into_iter()
        .sum::<Scalar>();
    let rho6 = &(&x.pow(5) * &(th - a7)) + &rho5;
    Ok(vec![rho3, rho4, rho5, rho6])
}

fn u1_list(p: &FirstClassParams) -> Result<Vec<Scalar>, StrataError> {
    let n = p.n();
    let a3 = p.alpha(3);
    let a5 = p.alpha(5);
    let a6 = p.alpha(6);
    let th = p.theta();
    // N = 5α_3³ − α_5,  D = α_6 + 6α_3α_5 − 16α_3⁴
    let num = &(&c(5) * &a3.pow(3)) - a5;
    let den = poly(&[(1, &[a6]), (6, &[a3, a5]), (-16, &[&a3.pow(4)])]);
    let ratio = div(num.clone(), &den)?;
    // N³/(α_3 D²)
    let core = div(num.pow(3), &(a3 * &den.square()))?;
    let rho4 = &(&c(7) * &core) - &c(14);
    if n == 6 {
        let rho5 = &(&ratio.pow(4) * &(th - a6)) + &rho4;
        return Ok(vec![rho4, rho5]);
    }
    let a7 = p.alpha(7);
    // (α_7 + 7α_3α_6 − 14α_3²α_5 − 14α_3⁵)/α_3
    let s = div(
        poly(&[
            (1, &[a7]),
            (7, &[a3, a6]),
            (-14, &[&a3.square(), a5]),
            (-14, &[&a3.pow(5)]),
        ]),
        a3,
    )?;
    let rho5 = [&ratio.pow(4) * &s, &c(-35) * &core, c(42)]
        .into_iter()
        .sum::<Scalar>();
    let rho6 = &(&ratio.pow(5) * &(th - a7)) + &rho5;
    Ok(vec![rho4, rho5, rho6])
}

fn u2_list(p: &FirstClassParams) -> Result<Vec<Scalar>, StrataError> {
    let n = p.n();
    let a3 = p.alpha(3);
    let a4 = p.alpha(4);
    let a5 = p.alpha(5);
    let th = p.theta();
    let a4_2 = a4.square();
    if n == 5 {
        // α_4(α_4²θ − α_4³α_3 − 3α_5³)/α_5³
        let inner = poly(&[(1, &[&a4_2, th]), (-1, &[&a4.pow(3), a3]), (-3, &[&a5.pow(3)])]);
        return Ok(vec![div(a4 * &inner, &a5.pow(3))?]);
    }
    let a6 = p.alpha(6);
    let ratio = div(a4.clone(), a5)?;
    // α_4(α_6 + 3α_4²)/α_5² − 3
    let rho4 = &div(a4 * &(a6 + &(&c(3) * &a4_2)), &a5.square())? - &c(3);
    if n == 6 {
        let rho5 = &(&ratio.pow(4) * &(th - a6)) + &rho4;
        return Ok(vec![rho4, rho5]);
    }
    let a7 = p.alpha(7);
    // α_4²(α_7 + 7α_4α_5)/α_5³ − 7
    let rho5 = &div(&a4_2 * &(a7 + &(&(&c(7) * a4) * a5)), &a5.pow(3))? - &c(7);
    let rho6 = &(&ratio.pow(5) * &(th - a7)) + &rho5;
    Ok(vec![rho4, rho5, rho6])
}
