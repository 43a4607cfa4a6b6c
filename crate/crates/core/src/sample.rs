//! Random parameters, group elements and stratum members.

use rand::Rng;

use crate::action::GroupElement;
use crate::algebra::{FirstClassParams, SecondClassParams};
use crate::scalar::{random_scalar, SampleConfig, Scalar};
use crate::strata::{classify_stratum, Deferral, StrataError, Stratum};

/// A uniformly drawn valid `(A, B)`; invalid draws are rejected.
pub fn random_group_element<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig) -> GroupElement {
    let nz = cfg.nonzero();
    loop {
        let a = random_scalar(rng, &nz);
        let b = random_scalar(rng, cfg);
        if let Ok(g) = GroupElement::new(a, b) {
            return g;
        }
    }
}

pub fn random_first_params<R: Rng + ?Sized>(n: usize, rng: &mut R, cfg: &SampleConfig) -> FirstClassParams {
    let alpha = (3..=n).map(|_| random_scalar(rng, cfg)).collect();
    FirstClassParams::new(n, alpha, random_scalar(rng, cfg)).expect("n >= 4")
}

pub fn random_second_params<R: Rng + ?Sized>(n: usize, rng: &mut R, cfg: &SampleConfig) -> SecondClassParams {
    let beta = (3..=n).map(|_| random_scalar(rng, cfg)).collect();
    SecondClassParams::new(n, beta, random_scalar(rng, cfg)).expect("n >= 4")
}

fn draw_until<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig, ok: impl Fn(&Scalar) -> bool) -> Scalar {
    loop {
        let v = random_scalar(rng, cfg);
        if ok(&v) {
            return v;
        }
    }
}

/// A random member of `stratum`. The entries that cut out the stratum are
/// drawn or forced accordingly, every other entry is free.
pub fn random_in_stratum<R: Rng + ?Sized>(
    stratum: Stratum,
    n: usize,
    rng: &mut R,
    cfg: &SampleConfig,
) -> Result<FirstClassParams, StrataError> {
    if n < stratum.min_n() {
        return Err(StrataError::Unsupported {
            region: stratum.tag(),
            n,
            deferral: Deferral::BelowDimensionRange,
        });
    }
    let mut p = random_first_params(n, rng, cfg);
    let nz = cfg.nonzero();
    let two = Scalar::from_int(2);
    match stratum {
        Stratum::U => {
            let a3 = random_scalar(rng, &nz);
            let forbidden = -(&two * &a3.square());
            let a4 = draw_until(rng, cfg, |v| v != &forbidden);
            p.set_z(3, a3);
            p.set_z(4, a4);
        }
        Stratum::U1pp | Stratum::F1pp => {
            let a3 = random_scalar(rng, &nz);
            let a4 = -(&two * &a3.square());
            let bad5 = &Scalar::from_int(5) * &a3.pow(3);
            let a5 = if stratum == Stratum::F1pp && rng.gen_bool(0.5) {
                bad5.clone()
            } else {
                draw_until(rng, cfg, |v| v != &bad5)
            };
            // α_6 ≠ 16α_3⁴ − 6α_3α_5 keeps the second factor nonzero
            let bad6 = &(&Scalar::from_int(16) * &a3.pow(4)) - &(&(&Scalar::from_int(6) * &a3) * &a5);
            let a6 = if stratum == Stratum::F1pp && a5 != bad5 {
                bad6
            } else {
                draw_until(rng, cfg, |v| v != &bad6)
            };
            p.set_z(3, a3);
            p.set_z(4, a4);
            p.set_z(5, a5);
            p.set_z(6, a6);
        }
        Stratum::U2pp | Stratum::F2pp => {
            p.set_z(3, Scalar::zero());
            p.set_z(4, random_scalar(rng, &nz));
            let a5 = if stratum == Stratum::U2pp {
                random_scalar(rng, &nz)
            } else {
                Scalar::zero()
            };
            p.set_z(5, a5);
        }
        Stratum::Fprime => {
            p.set_z(3, Scalar::zero());
            p.set_z(4, Scalar::zero());
        }
    }
    debug_assert_eq!(classify_stratum(&p).ok(), Some(stratum));
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::seeded_rng;

    #[test]
    fn members_land_in_their_stratum() {
        let cfg = SampleConfig::default();
        let mut rng = seeded_rng(3);
        for s in Stratum::ALL {
            for n in s.min_n()..=9 {
                for _ in 0..20 {
                    let p = random_in_stratum(s, n, &mut rng, &cfg).unwrap();
                    assert_eq!(classify_stratum(&p).unwrap(), s, "{p:?}");
                }
            }
        }
        assert!(random_in_stratum(Stratum::U1pp, 5, &mut rng, &cfg).is_err());
    }

    #[test]
    fn group_elements_are_valid() {
        let mut rng = seeded_rng(4);
        let cfg = SampleConfig {
            max_abs_numerator: 1,
            max_denominator: 1,
            ..SampleConfig::default()
        };
        for _ in 0..100 {
            let g = random_group_element(&mut rng, &cfg);
            assert!(!g.a().is_zero());
            assert!(!(g.a() + g.b()).is_zero());
        }
    }
}
