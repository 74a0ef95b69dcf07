//! End-to-end acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the summary is always printed; the
//! process exits non-zero when any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use planemap::analyze::{
    branch_locus, generic_target, geometric_degree, rational_points_on, solve_fiber, CurveSpec,
};
use planemap::automorph::{apply_to_map, random_tame, AutoWord};
use planemap::harness::generate::{generate_instance, normal_form_from_params, FormType, Instance};
use planemap::harness::grammar::parse_poly;
use planemap::normalize::{
    equivalent_normal_forms, fiber_contains_curve, germ_pullback, jcurve_ratio_check, normalize_map, replay,
    Germ, GermClass, JCurveInput, JCurveVerdict, NormalForm, NormalizationTrace,
};
use planemap::poly::elim::normalize_up_to_constant;
use planemap::poly::{gcd, ratio, resultant, squarefree_part, BPoly, Rat, UPoly, Var};
use planemap::rectify::{rectify_coordinate, RectifyResult};

use common::{bpoly, proportional, y_poly};

/// Instances above this total degree are redrawn; see the README.
const DEGREE_BUDGET: u32 = 10;
const PER_TYPE: usize = 20;
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(300);
const RECTIFY_LIMIT: Duration = Duration::from_secs(60);
const GENERIC_TARGETS: usize = 20;
const BRANCH_POINTS: usize = 5;
const AUTOMORPHISM_PAIRS: usize = 10;
const GERMS: usize = 10;
const LAW_CASES: u32 = 100;
/// Failures listed per criterion before truncating.
const SHOWN: usize = 5;

struct Outcome {
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            note: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn report(k: usize, title: &str, out: &Outcome) -> bool {
    let ok = out.failures.is_empty();
    println!(
        "{} criterion {k}: {title} {}",
        if ok { "PASS" } else { "FAIL" },
        out.note
    );
    for f in out.failures.iter().take(SHOWN) {
        println!("    {f}");
    }
    if out.failures.len() > SHOWN {
        println!("    ... {} more", out.failures.len() - SHOWN);
    }
    ok
}

fn draw_normal_form(ty: FormType, rng: &mut ChaCha8Rng) -> NormalForm {
    loop {
        let d = rng.gen_range(2..=5u32);
        let m = rng.gen_range(1..=3u32);
        let n = rng.gen_range(1..=3u32);
        let a: Vec<Rat> = (0..n)
            .map(|i| {
                if (i + m) % d == 0 {
                    Rat::from_integer(0.into())
                } else {
                    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))
                }
            })
            .collect();
        let (m, n) = match ty {
            FormType::I => (None, None),
            FormType::II => (Some(m), None),
            FormType::III => (Some(m), Some(n)),
        };
        // Invalid draws (e.g. a_0 = 0) are rejected by the constructor.
        if let Ok(nf) = normal_form_from_params(ty, d, m, n, &a) {
            return nf;
        }
    }
}

/// Deterministic instance for `(type, index)`, redrawn until within the degree budget.
fn draw_instance(ty: FormType, index: usize) -> Instance {
    let tag = match ty {
        FormType::I => 1u64,
        FormType::II => 2,
        FormType::III => 3,
    };
    (0u64..)
        .map(|attempt| {
            let seed = (tag << 32) | ((index as u64) << 16) | attempt;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nf = draw_normal_form(ty, &mut rng);
            let len = rng.gen_range(1..=3);
            let deg = rng.gen_range(1..=3);
            generate_instance(&nf, seed, len, deg, 3)
        })
        .find(|inst| inst.map.total_degree() <= DEGREE_BUDGET)
        .expect("unbounded search")
}

struct Case {
    instance: Instance,
    trace: Result<NormalizationTrace, String>,
}

impl Case {
    fn label(&self) -> String {
        format!(
            "seed {:#x} ({})",
            self.instance.seed,
            self.instance.ground_truth.label()
        )
    }
}

fn round_trip(cases: &[Case], elapsed: Duration) -> Outcome {
    let mut out = Outcome::new();
    for c in cases {
        match &c.trace {
            Err(e) => out
                .failures
                .push(format!("{}: normalize_map failed: {e}", c.label())),
            Ok(t) => {
                out.check(replay(&c.instance.map, t) == t.final_form.map(), || {
                    format!("{}: replay identity", c.label())
                });
                out.check(
                    equivalent_normal_forms(&t.final_form, &c.instance.ground_truth),
                    || format!("{}: got {:?}", c.label(), t.final_form),
                );
            }
        }
    }
    out.check(elapsed < ROUND_TRIP_LIMIT, || format!("took {elapsed:.1?}"));
    out.note = format!("({} instances, {elapsed:.1?})", cases.len());
    out
}

fn classification(cases: &[Case]) -> Outcome {
    let mut out = Outcome::new();
    for c in cases {
        let Ok(t) = &c.trace else { continue };
        match c.instance.ground_truth {
            NormalForm::TypeI { .. } => out.check(matches!(t.final_form, NormalForm::TypeI { .. }), || {
                format!("{}: classified {}", c.label(), t.final_form.label())
            }),
            _ => out.check(
                fiber_contains_curve(&c.instance.map, &t.distinguished_point()),
                || format!("{}: no curve over the distinguished point", c.label()),
            ),
        }
    }
    out
}

fn rectifier() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0);
    for k in 0..50 {
        let w = random_tame(rng.gen(), rng.gen_range(1..=3), rng.gen_range(1..=3), 3);
        let p = w.components().0.clone();
        match rectify_coordinate(&p) {
            Ok(RectifyResult::Rectified { alpha }) => out
                .check(alpha.apply_to_poly(&p) == BPoly::x(), || {
                    format!("word {k}: p∘α ≠ x for {p}")
                }),
            other => out.failures.push(format!("word {k}: {p} gave {other:?}")),
        }
    }
    for text in ["x^2 - y^3", "y^2 - x^3 - x^2", "x*y"] {
        let p = parse_poly(text).expect("fixture parses");
        out.check(
            matches!(rectify_coordinate(&p), Ok(RectifyResult::NotRectifiable { .. })),
            || format!("{text} was not rejected"),
        );
    }
    let elapsed = start.elapsed();
    out.check(elapsed < RECTIFY_LIMIT, || format!("took {elapsed:.1?}"));
    out.note = format!("({elapsed:.1?})");
    out
}

fn covering(cases: &[Case]) -> Outcome {
    let mut out = Outcome::new();
    for c in cases {
        let Ok(t) = &c.trace else { continue };
        let f = &c.instance.map;
        let deg = t.degree as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(c.instance.seed);
        for k in 0..GENERIC_TARGETS {
            let seed = c.instance.seed.wrapping_add(k as u64);
            let res =
                generic_target(f, &t.branch_locus, &mut rng).and_then(|p| Ok((solve_fiber(f, &p, seed)?, p)));
            match res {
                Ok((sol, p)) => out.check(!sol.infinite && sol.count_distinct == deg, || {
                    format!(
                        "{}: {} points over generic {p:?}, degree {deg}",
                        c.label(),
                        sol.count_distinct
                    )
                }),
                Err(e) => out
                    .failures
                    .push(format!("{}: generic target {k}: {e}", c.label())),
            }
        }
        if t.branch_locus.empty {
            continue;
        }
        let dp = t.distinguished_point();
        let pts: Vec<_> = rational_points_on(&t.branch_locus.defining, BRANCH_POINTS + 1)
            .into_iter()
            .filter(|p| *p != dp)
            .take(BRANCH_POINTS)
            .collect();
        out.check(pts.len() == BRANCH_POINTS, || {
            format!("{}: only {} branch points found", c.label(), pts.len())
        });
        for (k, p) in pts.iter().enumerate() {
            match solve_fiber(f, p, c.instance.seed.wrapping_add(k as u64)) {
                Ok(sol) => out.check(sol.infinite || sol.count_distinct != deg, || {
                    format!("{}: branch point {p:?} has {deg} points", c.label())
                }),
                Err(e) => out
                    .failures
                    .push(format!("{}: branch point {p:?}: {e}", c.label())),
            }
        }
    }
    out
}

fn same_curve(a: &CurveSpec, b: &CurveSpec) -> bool {
    a.empty == b.empty
        && (a.empty || normalize_up_to_constant(&a.defining) == normalize_up_to_constant(&b.defining))
}

/// Random pair whose conjugate stays within the degree budget; affine pairs always do.
fn draw_pair(seed: u64, f: &planemap::automorph::PolyMap) -> (AutoWord, AutoWord) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let pre = random_tame(rng.gen(), rng.gen_range(1..=2), 2, 2);
        let post = random_tame(rng.gen(), rng.gen_range(1..=2), 2, 2);
        if apply_to_map(&pre, f, &post).total_degree() <= DEGREE_BUDGET {
            return (pre, post);
        }
    }
    (random_tame(rng.gen(), 1, 1, 2), random_tame(rng.gen(), 1, 1, 2))
}

fn equivariance(cases: &[Case]) -> Outcome {
    let mut out = Outcome::new();
    let mut triangular = 0;
    for c in cases {
        let Ok(t) = &c.trace else { continue };
        let f = &c.instance.map;
        for k in 0..AUTOMORPHISM_PAIRS {
            let seed = c.instance.seed ^ (0xe9 << 40) ^ k as u64;
            let (pre, post) = draw_pair(seed, f);
            triangular += usize::from(pre.len() + post.len() > 2);
            let g = apply_to_map(&pre, f, &post);
            let expected = if t.branch_locus.empty {
                CurveSpec::empty()
            } else {
                match CurveSpec::from_poly(&post.invert().apply_to_poly(&t.branch_locus.defining)) {
                    Ok(e) => e,
                    Err(e) => {
                        out.failures.push(format!("{}: pair {k}: {e}", c.label()));
                        continue;
                    }
                }
            };
            match (geometric_degree(&g, seed), branch_locus(&g, seed)) {
                (Ok(d), Ok(locus)) => {
                    out.check(d == t.degree as usize, || {
                        format!("{}: pair {k}: degree {d}", c.label())
                    });
                    out.check(same_curve(&locus, &expected), || {
                        format!("{}: pair {k}: locus {}", c.label(), locus.to_uv_string())
                    });
                }
                (Err(e), _) | (_, Err(e)) => out.failures.push(format!("{}: pair {k}: {e}", c.label())),
            }
        }
    }
    out.note = format!("({triangular} pairs with a triangular move)");
    out
}

/// `q − p·m/d > 0`, by rational arithmetic.
fn oracle_branch_at_origin(d: u32, m: u32, g: &Germ) -> bool {
    let e = ratio(g.q as i64, 1) - ratio((g.p * m) as i64, d as i64);
    e > ratio(0, 1)
}

fn germs() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e);
    for k in 0..GERMS {
        let germ = Germ {
            p: rng.gen_range(1..=6),
            q: rng.gen_range(1..=6),
            c: ratio([-2, -1, 1, 2, 3][rng.gen_range(0..5)], rng.gen_range(1..=3)),
        };
        let NormalForm::TypeII { d, m } = draw_normal_form(FormType::II, &mut rng) else {
            unreachable!()
        };
        let ii = NormalForm::TypeII { d, m };
        let got = germ_pullback(&ii, &germ);
        out.check(
            (got == GermClass::BranchAtOrigin) == oracle_branch_at_origin(d, m, &germ),
            || format!("germ {k} {germ:?} on {ii:?}: {got:?}"),
        );
        let iii = draw_normal_form(FormType::III, &mut rng);
        let got = germ_pullback(&iii, &germ);
        out.check(got == GermClass::BranchAtInfinity, || {
            format!("germ {k} {germ:?} on {iii:?}: {got:?}")
        });
    }
    out
}

fn law<S: Strategy>(
    out: &mut Outcome,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases: LAW_CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new(config);
    if let Err(e) = runner.run(&strategy, test) {
        out.failures.push(format!("{name}: {e}"));
    }
}

fn algebra_laws() -> Outcome {
    let mut out = Outcome::new();
    law(
        &mut out,
        "resultant multiplicativity",
        (y_poly(2), y_poly(2), y_poly(2)),
        |(p, q, r)| {
            let lhs = resultant(&(&p * &q), &r, Var::Y).unwrap();
            let rhs = &resultant(&p, &r, Var::Y).unwrap() * &resultant(&q, &r, Var::Y).unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        },
    );
    law(
        &mut out,
        "gcd divisibility",
        (bpoly(2, 4), bpoly(2, 4), bpoly(2, 3)),
        |(a, b, c)| {
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let (ac, bc) = (&a * &c, &b * &c);
            let g = gcd(&ac, &bc);
            prop_assert!(ac.div_exact(&g).is_some() && bc.div_exact(&g).is_some());
            prop_assert!(g.div_exact(&c).is_some());
            Ok(())
        },
    );
    law(&mut out, "square-free idempotence", bpoly(3, 4), |p| {
        prop_assume!(!p.is_constant());
        let s = squarefree_part(&p).unwrap();
        prop_assert!(proportional(&squarefree_part(&s).unwrap(), &s));
        prop_assert!(proportional(&squarefree_part(&(&p * &p)).unwrap(), &s));
        Ok(())
    });
    law(
        &mut out,
        "automorphism round trip",
        (any::<u64>(), 1usize..=3, 1usize..=3, bpoly(3, 4)),
        |(seed, len, deg, p)| {
            let w = random_tame(seed, len, deg, 3);
            prop_assert!(w.compose(&w.invert()).is_identity());
            prop_assert_eq!(w.invert().apply_to_poly(&w.apply_to_poly(&p)), p);
            Ok(())
        },
    );
    out.note = format!("({LAW_CASES} cases each)");
    out
}

fn jcurve_fixtures() -> Outcome {
    let mut out = Outcome::new();
    let up = |cs: &[i64]| UPoly::from_ints(cs);
    let t = |k: usize| {
        let mut cs = vec![0; k + 1];
        cs[k] = 1;
        up(&cs)
    };
    let fixtures = [
        (
            "(t^2, t^3), (t^4, t^6)",
            vec![(t(2), t(3)), (t(4), t(6))],
            JCurveVerdict::CandidateJCurve,
        ),
        (
            "(t^2, t^3), (t^3, t^4)",
            vec![(t(2), t(3)), (t(3), t(4))],
            JCurveVerdict::NotJCurve,
        ),
        ("(t, t^2)", vec![(t(1), t(2))], JCurveVerdict::NotJCurve),
    ];
    for (name, components, want) in fixtures {
        match jcurve_ratio_check(&JCurveInput {
            components,
            probes: Vec::new(),
        }) {
            Ok(r) => out.check(r.verdict == want, || format!("{name}: {:?}", r.verdict)),
            Err(e) => out.failures.push(format!("{name}: {e}")),
        }
    }
    out
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cases: Vec<Case> = [FormType::I, FormType::II, FormType::III]
        .into_iter()
        .flat_map(|ty| (0..PER_TYPE).map(move |i| draw_instance(ty, i)))
        .map(|instance| {
            let trace = normalize_map(&instance.map, instance.seed).map_err(|e| e.to_string());
            Case { instance, trace }
        })
        .collect();
    let elapsed = start.elapsed();

    let results = [
        report(1, "round trip", &round_trip(&cases, elapsed)),
        report(2, "finite fibers only for type i", &classification(&cases)),
        report(3, "rectifier", &rectifier()),
        report(4, "covering certificate", &covering(&cases)),
        report(5, "equivariance", &equivariance(&cases)),
        report(6, "germ dichotomy", &germs()),
        report(7, "algebra laws", &algebra_laws()),
        report(8, "j-curve fixtures", &jcurve_fixtures()),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!(
        "{passed}/{} criteria passed in {:.1?}",
        results.len(),
        start.elapsed()
    );
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
