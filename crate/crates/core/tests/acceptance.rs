//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gwsym::descend::DescendEngine;
use gwsym::jfun::p2_leading_coefficient;
use gwsym::rational::{int, ratio};
use gwsym::target::parse_target;
use gwsym::verify::{coverage_missing, run_all, run_suite, Suite, SuiteParams};
use gwsym::wdvv::{kontsevich_nd, WdvvEngine};
use gwsym::{CurveClass, DescBracket, Rational, Target};
use num_bigint::BigInt;
use num_traits::One;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(what: &str, got: &Rational, want: &Rational) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, want {want}"))
    }
}

fn target(spec: &str) -> Arc<Target> {
    parse_target(spec).expect("valid target")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn plane_counts() -> Outcome {
    let t = target("P2");
    let wdvv = WdvvEngine::new(&t).map_err(err)?;
    let desc = DescendEngine::new(&t);
    let want = [1, 1, 12, 620];
    for (d, &n) in (1..=4u32).zip(&want) {
        let pts = vec![2usize; 3 * d as usize - 1];
        let n = int(n);
        check(&format!("kontsevich_nd({d})"), &kontsevich_nd(d), &n)?;
        check(
            &format!("gw d={d}"),
            &wdvv.gw(d as i64, &pts).map_err(err)?,
            &n,
        )?;
        let b = DescBracket::new(&t, CurveClass::degree(d), &pts, None).map_err(err)?;
        check(
            &format!("bracket d={d}"),
            &desc.bracket(&b).map_err(err)?,
            &n,
        )?;
    }
    Ok("n_1..n_4 = 1, 1, 12, 620 from all three engines".into())
}

fn p3_lines() -> Outcome {
    let t = target("P3");
    let wdvv = WdvvEngine::new(&t).map_err(err)?;
    let desc = DescendEngine::new(&t);
    let beta = CurveClass::degree(1);
    for (codims, want) in [(vec![3, 3], 1), (vec![3, 2, 2], 1), (vec![2, 2, 2, 2], 2)] {
        let want = int(want);
        check(
            &format!("gw {codims:?}"),
            &wdvv.gw(1, &codims).map_err(err)?,
            &want,
        )?;
        check(
            &format!("bracket {codims:?}"),
            &desc.gw(&beta, &codims).map_err(err)?,
            &want,
        )?;
    }
    Ok("<H3,H3>=1, <H3,H2,H2>=1, <H2,H2,H2,H2>=2 in degree 1".into())
}

fn ladder() -> Outcome {
    let e = DescendEngine::new(&target("P2"));
    let tables: [Vec<Rational>; 3] = [
        vec![int(1), int(1)],
        vec![int(1), int(1), int(1), ratio(1, 2), ratio(1, 8)],
        vec![
            int(12),
            int(10),
            int(7),
            int(3),
            int(1),
            ratio(1, 4),
            ratio(1, 24),
            ratio(1, 216),
        ],
    ];
    for (d, want) in (1..=3u32).zip(&tables) {
        let got = e.ladder_nd_a(d).map_err(err)?;
        if &got != want {
            let show = |v: &[Rational]| {
                v.iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            return Err(format!(
                "d={d}: got [{}], want [{}]",
                show(&got),
                show(want)
            ));
        }
    }
    Ok("n_d^(a) tables for d = 1, 2, 3 match, ending 1/4, 1/24, 1/216".into())
}

fn quintic() -> Outcome {
    let t = target("CI:6:5");
    let e = DescendEngine::new(&t);
    let beta = CurveClass::degree(3);
    let top = t.top_index();
    let h5 = e.gw(&beta, &[top, top]).map_err(err)?;
    let count = int(2_088_000);
    let scale = t.top_integral().clone();
    check("<H5,H5>_3", &h5, &(&count * &scale * &scale))?;
    check("<pt,pt>_3", &(&h5 / (&scale * &scale)), &count)?;
    Ok(format!(
        "2088000 twisted cubics through two points; <H5,H5>_3 = {h5} since H5 = {scale} pt"
    ))
}

fn basics() -> Outcome {
    for r in 1..=5u32 {
        let t = target(&format!("P{r}"));
        let top = t.top_index();
        let wdvv = WdvvEngine::new(&t).map_err(err)?;
        let desc = DescendEngine::new(&t);
        check(
            &format!("gw P{r}"),
            &wdvv.gw(1, &[top, top]).map_err(err)?,
            &int(1),
        )?;
        check(
            &format!("bracket P{r}"),
            &desc.gw(&CurveClass::degree(1), &[top, top]).map_err(err)?,
            &int(1),
        )?;
    }
    let p3 = WdvvEngine::new(&target("P3")).map_err(err)?;
    check(
        "lines meeting four lines",
        &p3.gw(1, &[2, 2, 2, 2]).map_err(err)?,
        &int(2),
    )?;
    Ok("one line through two points in P1..P5; two lines meet four general lines".into())
}

fn suites() -> Outcome {
    let reports = run_all(7, None).map_err(err)?;
    let mut parts = Vec::new();
    for r in &reports {
        if !r.passed() {
            let f = &r.failures[0];
            return Err(format!(
                "{}: {} failures, first {} expected {} got {}",
                r.suite,
                r.failures.len(),
                f.key,
                f.expected,
                f.actual
            ));
        }
        parts.push(format!("{} {}", r.suite, r.instances));
    }
    let missing = coverage_missing(&reports);
    if !missing.is_empty() {
        return Err(format!("never exercised: {}", missing.join(", ")));
    }
    Ok(format!("seed 7, zero failures ({})", parts.join(", ")))
}

fn cross_engine() -> Outcome {
    let t = target("P2");
    let wdvv = WdvvEngine::new(&t).map_err(err)?;
    let desc = DescendEngine::new(&t);
    let mut checked = 0;
    for d in 1..=5u32 {
        let beta = CurveClass::degree(d);
        let nd = kontsevich_nd(d);
        for lines in 0..=2usize {
            for units in 0..=1usize {
                let mut codims = vec![2usize; 3 * d as usize - 1];
                codims.extend(std::iter::repeat_n(1, lines));
                codims.extend(std::iter::repeat_n(0, units));
                let want = if units == 0 {
                    &nd * int((d as i64).pow(lines as u32))
                } else {
                    int(0)
                };
                let key = format!("d={d} {codims:?}");
                check(
                    &format!("gw {key}"),
                    &wdvv.gw(d as i64, &codims).map_err(err)?,
                    &want,
                )?;
                check(
                    &format!("bracket {key}"),
                    &desc.gw(&beta, &codims).map_err(err)?,
                    &want,
                )?;
                checked += 1;
            }
        }
    }
    let params = SuiteParams {
        dmax: Some(5),
        ..SuiteParams::default()
    };
    let report = run_suite(Suite::CrossEngine, &params, 7).map_err(err)?;
    if !report.passed() {
        let f = &report.failures[0];
        return Err(format!(
            "{} expected {} got {}",
            f.key, f.expected, f.actual
        ));
    }
    Ok(format!(
        "{checked} direct comparisons and {} suite checks agree for d <= 5 (n_5 = {})",
        report.instances,
        kontsevich_nd(5)
    ))
}

fn leading_term() -> Outcome {
    for d in 0..=6u32 {
        let fact: BigInt = (1..=d).map(BigInt::from).product();
        let want = Rational::new(BigInt::one(), fact.pow(3));
        check(
            &format!("d={d}"),
            &p2_leading_coefficient(d).map_err(err)?,
            &want,
        )?;
    }
    Ok("H^0 coefficient of J^d(P2) at t^(-3d) is 1/(d!)^3 for d <= 6".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("plane curve counts", plane_counts, Duration::from_secs(5)),
        ("P3 lines", p3_lines, Duration::from_secs(1)),
        ("descendant ladder", ladder, Duration::from_secs(5)),
        ("quintic fivefold", quintic, Duration::from_secs(120)),
        ("intro basics", basics, Duration::from_secs(1)),
        ("identity suites", suites, Duration::from_secs(600)),
        (
            "cross-engine oracle",
            cross_engine,
            Duration::from_secs(300),
        ),
        ("J leading term", leading_term, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let line = match outcome {
            Ok(detail) => format!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                format!("FAIL {name}: {why}")
            }
        };
        let note = if elapsed > *budget {
            " (over budget)"
        } else {
            ""
        };
        println!("criterion {}: {line} [{:.2?}{note}]", i + 1, elapsed);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
