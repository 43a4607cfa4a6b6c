//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line, even when an earlier one fails.

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use filiform::action::{
    apply_rho, apply_rho_with, bracket, lowdim_closed_form, BracketMethod, GroupElement, RhoOptions, ThetaForm,
};
use filiform::algebra::{
    build_tensor_first, build_tensor_second, is_filiform, leibniz_defect, lower_central_dims, FirstClassParams,
};
use filiform::oracle::{adapted_change_tensor, nested_sums_direct};
use filiform::sample::{
    random_first_params, random_group_element, random_in_stratum, random_second_params,
};
use filiform::scalar::{random_scalar, seeded_rng, SampleConfig, SampleRng, Scalar};
use filiform::strata::{
    canonicalize, classify_stratum, decide_isomorphic, invariant_vector, lowdim_invariant_lists,
    realize_from_invariants, NoReason, Stratum, Verdict,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cfg() -> SampleConfig {
    SampleConfig::default()
}

/// Counts failures of `check` over `trials` draws and returns the first one.
fn count_failures<T: std::fmt::Debug>(
    trials: usize,
    mut draw: impl FnMut() -> T,
    mut check: impl FnMut(&T) -> bool,
) -> (usize, Option<String>) {
    let mut failed = 0;
    let mut first = None;
    for _ in 0..trials {
        let case = draw();
        if !check(&case) {
            failed += 1;
            first.get_or_insert_with(|| format!("{case:?}"));
        }
    }
    (failed, first)
}

fn summarize(parts: Vec<(String, usize, Option<String>)>) -> Outcome {
    let failed: Vec<_> = parts.iter().filter(|(_, f, _)| *f > 0).collect();
    if failed.is_empty() {
        let labels: Vec<_> = parts.iter().map(|(l, _, _)| l.as_str()).collect();
        return outcome(true, labels.join(", "));
    }
    let msg: Vec<String> = failed
        .iter()
        .map(|(l, f, first)| format!("{l}: {f} failures, first {}", first.as_deref().unwrap_or("?")))
        .collect();
    outcome(false, msg.join("; "))
}

fn printed_systems_agree(n: usize, trials: usize, rng: &mut SampleRng, opts: RhoOptions) -> (usize, Option<String>) {
    count_failures(
        trials,
        || (random_group_element(rng, &cfg()), random_first_params(n, rng, &cfg())),
        |(g, p)| {
            let general = apply_rho_with(g, p, opts);
            general == lowdim_closed_form(n, g, p).unwrap() && general == nested_sums_direct(g, p)
        },
    )
}

fn criterion_1() -> Outcome {
    let mut rng = seeded_rng(101);
    let mut parts = Vec::new();
    let mut slow = Vec::new();
    for n in 4..=7 {
        let start = Instant::now();
        let (f, first) = printed_systems_agree(n, 200, &mut rng, RhoOptions::default());
        let took = start.elapsed();
        if took >= Duration::from_secs(5) {
            slow.push(format!("n={n} took {took:?}"));
        }
        parts.push((format!("n={n} 200/200 in {:.2}s", took.as_secs_f64()), f, first));
    }
    let mut o = summarize(parts);
    if !slow.is_empty() {
        o.pass = false;
        o.detail = format!("{}; over 5 s: {}", o.detail, slow.join(", "));
    }
    o
}

fn criterion_2() -> Outcome {
    let mut rng = seeded_rng(102);
    let mut parts = Vec::new();
    for n in 4..=10 {
        let (f, first) = count_failures(
            200,
            || {
                (
                    random_group_element(&mut rng, &cfg()),
                    random_group_element(&mut rng, &cfg()),
                    random_first_params(n, &mut rng, &cfg()),
                )
            },
            |(g1, g2, p)| {
                let step = apply_rho(g1, p);
                apply_rho(&GroupElement::identity(), p) == *p
                    && apply_rho(g2, &step) == apply_rho(&g1.compose(g2), p)
                    && apply_rho(&g1.inverse(), &step) == *p
            },
        );
        parts.push((format!("n={n}"), f, first));
    }
    summarize(parts)
}

fn criterion_3() -> Outcome {
    let mut rng = seeded_rng(103);
    let mut parts = Vec::new();
    for n in 4..=10 {
        let (f, first) = count_failures(
            200,
            || {
                (
                    random_group_element(&mut rng, &cfg()),
                    random_in_stratum(Stratum::U, n, &mut rng, &cfg()).unwrap(),
                )
            },
            |(g, p)| {
                let q = apply_rho(g, p);
                let same = invariant_vector(p).unwrap() == invariant_vector(&q).unwrap();
                let yes = matches!(
                    decide_isomorphic(p, &q).unwrap(),
                    Verdict::Yes { ref witness } if apply_rho(witness, p) == q
                );
                same && yes
            },
        );
        parts.push((format!("orbit n={n}"), f, first));

        let len = n - 3;
        let (f, first) = count_failures(
            100,
            || loop {
                let t1: Vec<Scalar> = (0..len).map(|_| random_scalar(&mut rng, &cfg())).collect();
                let t2: Vec<Scalar> = (0..len).map(|_| random_scalar(&mut rng, &cfg())).collect();
                if t1 != t2 {
                    let g1 = random_group_element(&mut rng, &cfg());
                    let g2 = random_group_element(&mut rng, &cfg());
                    break (t1, t2, g1, g2);
                }
            },
            |(t1, t2, g1, g2)| {
                let p1 = apply_rho(g1, &realize_from_invariants(n, t1, Stratum::U).unwrap());
                let p2 = apply_rho(g2, &realize_from_invariants(n, t2, Stratum::U).unwrap());
                matches!(
                    decide_isomorphic(&p1, &p2).unwrap(),
                    Verdict::No(NoReason::InvariantMismatch { .. })
                )
            },
        );
        parts.push((format!("non-orbit n={n}"), f, first));
    }
    summarize(parts)
}

fn criterion_4() -> Outcome {
    let mut rng = seeded_rng(104);
    let mut parts = Vec::new();
    for n in 4..=10 {
        let (f, first) = count_failures(
            100,
            || (0..n - 3).map(|_| random_scalar(&mut rng, &cfg())).collect::<Vec<_>>(),
            |targets| {
                realize_from_invariants(n, targets, Stratum::U)
                    .and_then(|p| invariant_vector(&p))
                    .is_ok_and(|v| v.stratum == Stratum::U && &v.components == targets)
            },
        );
        parts.push((format!("n={n}"), f, first));
    }
    summarize(parts)
}

fn criterion_5() -> Outcome {
    let mut rng = seeded_rng(105);
    let mut parts = Vec::new();
    for n in 4..=10 {
        let (f, first) = count_failures(
            200,
            || {
                (
                    random_group_element(&mut rng, &cfg()),
                    random_in_stratum(Stratum::U, n, &mut rng, &cfg()).unwrap(),
                )
            },
            |(g, p)| {
                let c = canonicalize(p).unwrap();
                let inv = invariant_vector(p).unwrap();
                classify_stratum(&c).unwrap() == Stratum::U
                    && c.alpha(3).is_one()
                    && c.alpha(4).is_zero()
                    && (3..n).all(|i| inv.component(i) == Some(c.rho_component(i)))
                    && canonicalize(&c).unwrap() == c
                    && canonicalize(&apply_rho(g, p)).unwrap() == c
            },
        );
        parts.push((format!("n={n}"), f, first));
    }
    summarize(parts)
}

fn stratum_invariance(s: Stratum, n: usize, rng: &mut SampleRng) -> (usize, Option<String>) {
    count_failures(
        200,
        || (random_group_element(rng, &cfg()), random_in_stratum(s, n, rng, &cfg()).unwrap()),
        |(g, p)| {
            let q = apply_rho(g, p);
            let v = invariant_vector(p).unwrap();
            let not_forbidden = s != Stratum::U1pp || v.components[0] != Scalar::from_int(-14);
            classify_stratum(&q).unwrap() == s && invariant_vector(&q).unwrap() == v && not_forbidden
        },
    )
}

fn printed_list_agreement(s: Stratum, n: usize, rng: &mut SampleRng) -> (usize, Option<String>) {
    count_failures(
        200,
        || random_in_stratum(s, n, rng, &cfg()).unwrap(),
        |p| lowdim_invariant_lists(p).ok() == invariant_vector(p).ok(),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = seeded_rng(106);
    let mut parts = Vec::new();
    for n in 6..=10 {
        let (f, first) = stratum_invariance(Stratum::U1pp, n, &mut rng);
        parts.push((format!("U1pp invariance n={n}"), f, first));
    }
    for n in 5..=10 {
        let (f, first) = stratum_invariance(Stratum::U2pp, n, &mut rng);
        parts.push((format!("U2pp invariance n={n}"), f, first));
    }
    for n in 6..=7 {
        let (f, first) = printed_list_agreement(Stratum::U1pp, n, &mut rng);
        parts.push((format!("U1pp printed list n={n}"), f, first));
    }
    for n in 5..=7 {
        let (f, first) = printed_list_agreement(Stratum::U2pp, n, &mut rng);
        parts.push((format!("U2pp printed list n={n}"), f, first));
    }
    for (label, f, _) in &parts {
        println!("    {label}: {}", if *f == 0 { "ok" } else { "FAILED" });
    }
    summarize(parts)
}

fn criterion_7() -> Outcome {
    let mut rng = seeded_rng(107);
    let mut parts = Vec::new();
    for n in 4..=10 {
        let expected: Vec<usize> = std::iter::once(n + 1).chain((0..n).rev()).collect();
        let well_formed = |t: &filiform::algebra::StructureTensor| {
            leibniz_defect(t).is_empty() && is_filiform(t) && lower_central_dims(t) == expected
        };
        let (f, first) = count_failures(
            100,
            || build_tensor_first(&random_first_params(n, &mut rng, &cfg())),
            |t| well_formed(t),
        );
        parts.push((format!("first n={n}"), f, first));
        let (f, first) = count_failures(
            100,
            || build_tensor_second(&random_second_params(n, &mut rng, &cfg())),
            |t| well_formed(t),
        );
        parts.push((format!("second n={n}"), f, first));
    }
    summarize(parts)
}

fn criterion_8() -> Outcome {
    let mut rng = seeded_rng(108);
    let nonzero = cfg().nonzero();
    let mut parts = Vec::new();
    for n in 4..=8 {
        let (f, first) = count_failures(
            50,
            || {
                (
                    random_first_params(n, &mut rng, &cfg()),
                    random_group_element(&mut rng, &cfg()),
                    (2..=n).map(|_| random_scalar(&mut rng, &nonzero)).collect::<Vec<_>>(),
                )
            },
            |(p, g, c)| {
                let expected = apply_rho(g, p);
                let t = build_tensor_first(p);
                let plain = adapted_change_tensor(&t, g, None).map(|(_, q)| q);
                let shifted = adapted_change_tensor(&t, g, Some(c));
                plain.as_ref() == Ok(&expected)
                    && shifted.is_ok_and(|(out, q)| {
                        q == expected && leibniz_defect(&out).is_empty() && is_filiform(&out)
                    })
            },
        );
        parts.push((format!("n={n}"), f, first));
    }
    summarize(parts)
}

fn criterion_9() -> Outcome {
    let variant = RhoOptions {
        theta_form: ThetaForm::WithSumPrefactor,
        ..RhoOptions::default()
    };
    let (adopted_failures, _) = printed_systems_agree(4, 200, &mut seeded_rng(109), RhoOptions::default());
    let (variant_failures, _) = printed_systems_agree(4, 200, &mut seeded_rng(109), variant);
    outcome(
        adopted_failures == 0 && variant_failures > 0,
        format!(
            "n=4: adopted form {adopted_failures}/200 mismatches, (1+y)-prefactor form {variant_failures}/200 mismatches"
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = seeded_rng(110);
    let mut parts = Vec::new();
    for n in 4..=10 {
        let (f, first) = count_failures(
            20,
            || (random_first_params(n, &mut rng, &cfg()), random_scalar(&mut rng, &cfg())),
            |(p, y)| {
                (4..=n).all(|t| {
                    (3..t).all(|k| {
                        bracket(t, k, y, p, BracketMethod::Naive) == bracket(t, k, y, p, BracketMethod::Convolution)
                    })
                })
            },
        );
        parts.push((format!("dp n={n}"), f, first));
    }
    let p = random_first_params(12, &mut rng, &cfg().nonzero());
    let g = random_group_element(&mut rng, &cfg().nonzero());
    let start = Instant::now();
    let image = apply_rho(&g, &p);
    let took = start.elapsed();
    let dp_image = apply_rho_with(
        &g,
        &p,
        RhoOptions {
            method: BracketMethod::Convolution,
            ..RhoOptions::default()
        },
    );
    parts.push((
        format!("n=12 apply_rho {:.3}s", took.as_secs_f64()),
        usize::from(took >= Duration::from_secs(10) || image != dp_image),
        Some(format!("took {took:?}")),
    ));
    summarize(parts)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("printed-system equivalence", criterion_1),
        ("group axioms", criterion_2),
        ("U invariance and decision", criterion_3),
        ("U realization", criterion_4),
        ("canonical form", criterion_5),
        ("U1pp/U2pp invariance and printed lists", criterion_6),
        ("algebra well-formedness", criterion_7),
        ("tensor oracle equivalence", criterion_8),
        ("negative control", criterion_9),
        ("bracket DP and n=12 timing", criterion_10),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} [{name}] ({:.2}s): {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        total.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
