//! Randomized identity suites that tie the engines together.
//!
//! Every suite is a pure function of `(name, params, seed)`: instances are
//! drawn from a ChaCha stream up front and then evaluated, optionally on a
//! rayon pool, with results collected in draw order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use parking_lot::Mutex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::{Bracket, DescBracket};
use crate::descend::{DescendEngine, DescendOptions, SlotPolicy};
use crate::error::{GwError, Result};
use crate::jfun::{degree_zero_bracket, j_product_check, one_point_descendant, psi_intersection};
use crate::rational::{format_rational, Rational};
use crate::target::{parse_target, virtual_dimension, CurveClass, Target, TargetKind};
use crate::wdvv::{kontsevich_table, Reduction, TieBreak, WdvvEngine};

/// Operations every full run must exercise.
pub const ALL_OPS: &[&str] = &[
    "wdvv.gw",
    "wdvv.reduce_axioms",
    "wdvv.relation_sides",
    "wdvv.kontsevich_nd",
    "j.j_function",
    "j.one_point_descendant",
    "j.psi_intersection",
    "j.degree_zero_bracket",
    "j.product_check",
    "descend.bracket",
    "descend.theorem3_residual",
    "descend.string_reduce",
    "descend.dilaton_reduce",
    "descend.divisor_reduce",
    "descend.ladder_nd_a",
];

const MAX_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Wdvv,
    String,
    Dilaton,
    Divisor,
    Theorem3,
    CrossEngine,
    ProductSwap,
    DimensionFilter,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Wdvv,
        Suite::String,
        Suite::Dilaton,
        Suite::Divisor,
        Suite::Theorem3,
        Suite::CrossEngine,
        Suite::ProductSwap,
        Suite::DimensionFilter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Wdvv => "wdvv",
            Suite::String => "string",
            Suite::Dilaton => "dilaton",
            Suite::Divisor => "divisor",
            Suite::Theorem3 => "theorem3",
            Suite::CrossEngine => "cross_engine",
            Suite::ProductSwap => "product_swap",
            Suite::DimensionFilter => "dimension_filter",
        }
    }

    fn default_targets(self) -> &'static [&'static str] {
        match self {
            Suite::Wdvv => &["P2", "P3"],
            Suite::CrossEngine => &["P2", "P3"],
            Suite::ProductSwap => &["P1xP1"],
            _ => &["P2", "P3", "P1xP1", "CI:6:5"],
        }
    }

    fn default_dmax(self) -> u32 {
        match self {
            Suite::Wdvv => 3,
            Suite::CrossEngine => 5,
            _ => 2,
        }
    }

    fn max_dmax(self) -> u32 {
        match self {
            Suite::Wdvv => 4,
            Suite::CrossEngine => 6,
            _ => 3,
        }
    }

    fn default_trials(self) -> usize {
        match self {
            Suite::Theorem3 => 25,
            Suite::DimensionFilter => 100,
            Suite::ProductSwap => 40,
            _ => 50,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| GwError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteParams {
    /// Target specs; empty means the suite default.
    pub targets: Vec<String>,
    /// Bound on `|β|`.
    pub dmax: Option<u32>,
    pub trials: Option<usize>,
    /// Rayon threads; `None` or `1` runs inline.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub key: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instances: usize,
    /// Instances whose checked value was nonzero.
    pub nonzero: usize,
    pub failures: Vec<Failure>,
    pub touched: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Outcome {
    checks: usize,
    nonzero: usize,
    failures: Vec<Failure>,
}

impl Outcome {
    fn compare(&mut self, key: impl Into<String>, expected: &Rational, actual: &Rational) {
        self.checks += 1;
        if !expected.is_zero() {
            self.nonzero += 1;
        }
        if expected != actual {
            self.failures.push(Failure {
                key: key.into(),
                expected: format_rational(expected),
                actual: format_rational(actual),
            });
        }
    }

    fn merge(&mut self, other: Outcome) {
        self.checks += other.checks;
        self.nonzero += other.nonzero;
        self.failures.extend(other.failures);
    }
}

#[derive(Default)]
struct Touched(Mutex<BTreeSet<&'static str>>);

impl Touched {
    fn touch(&self, op: &'static str) {
        self.0.lock().insert(op);
    }
}

struct Engines {
    descend: Arc<DescendEngine>,
    bare: Arc<DescendEngine>,
    wdvv: Option<Arc<WdvvEngine>>,
}

fn engines_for(targets: &[Arc<Target>]) -> Result<HashMap<String, Engines>> {
    let mut out = HashMap::new();
    for t in targets {
        let bare = DescendOptions {
            axiom_shortcuts: false,
            slot: SlotPolicy::LargestCodim,
        };
        let wdvv = if t.is_projective_space() {
            Some(Arc::new(WdvvEngine::new(t)?))
        } else {
            None
        };
        out.insert(
            t.to_string(),
            Engines {
                descend: Arc::new(DescendEngine::new(t)),
                bare: Arc::new(DescendEngine::with_options(t, bare)),
                wdvv,
            },
        );
    }
    Ok(out)
}

fn evaluate<I: Sync, F>(workers: Option<usize>, items: &[I], f: F) -> Result<Outcome>
where
    F: Fn(&I) -> Result<Outcome> + Sync + Send,
{
    let results: Vec<Outcome> = match workers {
        Some(w) if w > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| GwError::Precondition(format!("thread pool: {e}")))?;
            pool.install(|| items.par_iter().map(&f).collect::<Result<Vec<_>>>())?
        }
        _ => items.iter().map(&f).collect::<Result<Vec<_>>>()?,
    };
    let mut total = Outcome::default();
    for r in results {
        total.merge(r);
    }
    Ok(total)
}

fn draw_beta(rng: &mut ChaCha8Rng, t: &Target, dmax: u32) -> CurveClass {
    let g = t.generators();
    loop {
        let v: Vec<u32> = (0..g).map(|_| rng.gen_range(0..=dmax)).collect();
        let total: u32 = v.iter().sum();
        if total >= 1 && total <= dmax {
            return CurveClass(v);
        }
    }
}

fn draw_classes(rng: &mut ChaCha8Rng, t: &Target, count: usize) -> Vec<usize> {
    (0..count)
        .map(|_| rng.gen_range(0..t.basis_len()))
        .collect()
}

enum Want {
    Exactly(i64),
    AtLeast(i64),
}

/// Adds, removes or lowers free insertions (those past `protect`) until
/// `gap` meets `want`; gives up quietly, leaving a degenerate instance.
fn repair(
    rng: &mut ChaCha8Rng,
    t: &Target,
    plain: &mut Vec<usize>,
    protect: usize,
    min_len: usize,
    gap: impl Fn(&[usize]) -> i64,
    want: Want,
) -> i64 {
    let of_codim =
        |c: usize| -> Vec<usize> { (0..t.basis_len()).filter(|&i| t.codim(i) == c).collect() };
    for _ in 0..64 {
        let g = gap(plain);
        let (w, ok) = match want {
            Want::Exactly(w) => (w, g == w),
            Want::AtLeast(w) => (w, g >= w),
        };
        if ok {
            return g;
        }
        let free: Vec<usize> = (protect..plain.len())
            .filter(|&k| t.codim(plain[k]) >= 2)
            .collect();
        if g > w {
            let c = ((g - w + 1) as usize).min(t.dim()).max(2);
            match of_codim(c).choose(rng) {
                Some(&i) => plain.push(i),
                None => break,
            }
        } else if plain.len() > min_len && !free.is_empty() {
            let k = *free.choose(rng).expect("nonempty");
            plain.remove(k);
        } else if let Some(&k) = free.choose(rng) {
            let c = t.codim(plain[k]) - 1;
            plain[k] = *of_codim(c).choose(rng).expect("every codimension occurs");
        } else {
            break;
        }
    }
    gap(plain)
}

/// Repaired instances avoid units outside protected slots; they only make
/// values vanish.
fn lift_units(rng: &mut ChaCha8Rng, t: &Target, plain: &mut [usize], protect: usize) {
    for x in plain.iter_mut().skip(protect) {
        if *x == t.unit_index() {
            *x = t.divisor_index(rng.gen_range(0..t.generators()));
        }
    }
}

fn codim_sum(t: &Target, classes: &[usize]) -> i64 {
    classes.iter().map(|&i| t.codim(i) as i64).sum()
}

fn resolve_targets(suite: Suite, params: &SuiteParams) -> Result<Vec<Arc<Target>>> {
    let specs: Vec<String> = if params.targets.is_empty() {
        suite
            .default_targets()
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        params.targets.clone()
    };
    specs.iter().map(|s| parse_target(s)).collect()
}

/// Runs one suite. Identical `(suite, params, seed)` give identical reports
/// apart from `wall_time`.
pub fn run_suite(suite: Suite, params: &SuiteParams, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let dmax = params.dmax.unwrap_or_else(|| suite.default_dmax());
    if dmax == 0 || dmax > suite.max_dmax() {
        return Err(GwError::BoundExceeded(format!(
            "{suite}: dmax {dmax} outside 1..={}",
            suite.max_dmax()
        )));
    }
    let trials = params.trials.unwrap_or_else(|| suite.default_trials());
    if trials > MAX_TRIALS {
        return Err(GwError::BoundExceeded(format!(
            "{suite}: {trials} trials exceeds {MAX_TRIALS}"
        )));
    }
    let targets = resolve_targets(suite, params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let touched = Touched::default();
    let ctx = SuiteCtx {
        targets: &targets,
        dmax,
        trials,
        workers: params.workers,
        touched: &touched,
    };
    let outcome = match suite {
        Suite::Wdvv => wdvv_suite(&ctx, &mut rng)?,
        Suite::String | Suite::Dilaton | Suite::Divisor => axiom_suite(suite, &ctx, &mut rng)?,
        Suite::Theorem3 => theorem3_suite(&ctx, &mut rng)?,
        Suite::CrossEngine => cross_engine_suite(&ctx)?,
        Suite::ProductSwap => product_swap_suite(&ctx, &mut rng)?,
        Suite::DimensionFilter => dimension_filter_suite(&ctx, &mut rng)?,
    };
    let report = SuiteReport {
        suite: suite.name().to_string(),
        seed,
        instances: outcome.checks,
        nonzero: outcome.nonzero,
        failures: outcome.failures,
        touched: touched
            .0
            .into_inner()
            .into_iter()
            .map(String::from)
            .collect(),
        wall_time: start.elapsed(),
    };
    log::info!(
        "{} checks={} failures={} in {:?}",
        report.suite,
        report.instances,
        report.failures.len(),
        report.wall_time
    );
    Ok(report)
}

/// Every suite with default parameters, plus the coverage assertion.
pub fn run_all(seed: u64, workers: Option<usize>) -> Result<Vec<SuiteReport>> {
    let params = SuiteParams {
        workers,
        ..SuiteParams::default()
    };
    let reports = Suite::ALL
        .iter()
        .map(|&s| run_suite(s, &params, seed))
        .collect::<Result<Vec<_>>>()?;
    let missing = coverage_missing(&reports);
    if !missing.is_empty() {
        return Err(GwError::Precondition(format!(
            "suites never exercised: {}",
            missing.join(", ")
        )));
    }
    Ok(reports)
}

pub fn coverage_missing(reports: &[SuiteReport]) -> Vec<&'static str> {
    let seen: BTreeSet<&str> = reports
        .iter()
        .flat_map(|r| r.touched.iter().map(String::as_str))
        .collect();
    ALL_OPS
        .iter()
        .copied()
        .filter(|op| !seen.contains(op))
        .collect()
}

struct SuiteCtx<'a> {
    targets: &'a [Arc<Target>],
    dmax: u32,
    trials: usize,
    workers: Option<usize>,
    touched: &'a Touched,
}

fn wdvv_suite(ctx: &SuiteCtx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    if let Some(t) = ctx.targets.iter().find(|t| !t.is_projective_space()) {
        return Err(GwError::UnsupportedTarget(format!(
            "wdvv suite needs projective spaces, got {t}"
        )));
    }
    let engines = engines_for(ctx.targets)?;
    let alt: HashMap<String, WdvvEngine> = ctx
        .targets
        .iter()
        .map(|t| {
            Ok((
                t.to_string(),
                WdvvEngine::with_tie_break(t, TieBreak::SmallestFirst)?,
            ))
        })
        .collect::<Result<_>>()?;
    struct Inst {
        target: Arc<Target>,
        d: u32,
        gammas: Vec<usize>,
        dl: usize,
        dm: usize,
    }
    let mut items = Vec::new();
    for k in 0..ctx.trials {
        let target = ctx.targets.choose(rng).expect("nonempty").clone();
        let r = target.dim();
        let d = rng.gen_range(1..=ctx.dmax);
        let count = rng.gen_range(0..=2);
        let mut gammas = draw_classes(rng, &target, count + 2);
        let (dl, dm) = (rng.gen_range(1..=r), rng.gen_range(1..=r));
        if k % 2 == 0 {
            let base = (r + (r + 1) * d as usize) as i64 - (dl + dm) as i64;
            let gap = |g: &[usize]| base + g.len() as i64 - 2 - codim_sum(&target, g);
            lift_units(rng, &target, &mut gammas, 0);
            repair(rng, &target, &mut gammas, 0, 2, gap, Want::Exactly(0));
        }
        items.push(Inst {
            target,
            d,
            gammas,
            dl,
            dm,
        });
    }
    evaluate(ctx.workers, &items, |x| {
        let e = &engines[&x.target.to_string()];
        let w = e.wdvv.as_ref().expect("projective space");
        let mut out = Outcome::default();
        let (first, second) = w.wdvv_relation_sides(x.d as i64, &x.gammas, x.dl, x.dm)?;
        ctx.touched.touch("wdvv.relation_sides");
        let key = format!("{}|{}|{:?}|D=({},{})", x.target, x.d, x.gammas, x.dl, x.dm);
        out.compare(key, &first, &second);
        let mut ins = x.gammas.clone();
        ins.extend([x.dl, x.dm]);
        let b = Bracket::ordinary(&x.target, CurveClass::degree(x.d), &ins);
        if let Reduction::Terminal(v) = w.reduce_axioms(&b)? {
            ctx.touched.touch("wdvv.reduce_axioms");
            out.compare(b.key(), &v, &w.gw_bracket(&b)?);
        } else {
            ctx.touched.touch("wdvv.reduce_axioms");
        }
        let v = w.gw(x.d as i64, &ins)?;
        ctx.touched.touch("wdvv.gw");
        out.compare(
            b.key(),
            &v,
            &alt[&x.target.to_string()].gw(x.d as i64, &ins)?,
        );
        Ok(out)
    })
}

fn axiom_suite(suite: Suite, ctx: &SuiteCtx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let engines = engines_for(ctx.targets)?;
    let mut items = Vec::new();
    for k in 0..ctx.trials {
        let t = ctx.targets.choose(rng).expect("nonempty").clone();
        let beta = draw_beta(rng, &t, ctx.dmax);
        let fix = k % 2 == 0;
        let vd = |n: usize| virtual_dimension(&t, &beta, n);
        let b = match suite {
            Suite::String => {
                let gamma = rng.gen_range(0..t.basis_len());
                let free = rng.gen_range(0..=2);
                let mut plain = vec![t.unit_index()];
                plain.extend(draw_classes(rng, &t, free));
                let gap = |p: &[usize]| vd(p.len() + 1) - codim_sum(&t, p) - t.codim(gamma) as i64;
                let a = if fix {
                    lift_units(rng, &t, &mut plain, 1);
                    repair(rng, &t, &mut plain, 1, 1, gap, Want::AtLeast(1))
                } else {
                    rng.gen_range(1..=3)
                };
                DescBracket::new(&t, beta.clone(), &plain, Some((gamma, a.max(1) as u32)))?
            }
            Suite::Dilaton => {
                let free = rng.gen_range(1..=3);
                let mut plain = draw_classes(rng, &t, free);
                if fix {
                    let gap = |p: &[usize]| vd(p.len() + 1) - codim_sum(&t, p);
                    lift_units(rng, &t, &mut plain, 0);
                    repair(rng, &t, &mut plain, 0, 1, gap, Want::Exactly(1));
                }
                if plain.is_empty() {
                    plain.push(t.top_index());
                }
                DescBracket::new(&t, beta.clone(), &plain, Some((t.unit_index(), 1)))?
            }
            _ => {
                let h = t.divisor_index(rng.gen_range(0..t.generators()));
                let free = rng.gen_range(0..=2);
                let mut plain = vec![h];
                plain.extend(draw_classes(rng, &t, free));
                if rng.gen_bool(2.0 / 3.0) {
                    let gamma = rng.gen_range(0..t.basis_len());
                    let gap =
                        |p: &[usize]| vd(p.len() + 1) - codim_sum(&t, p) - t.codim(gamma) as i64;
                    let a = if fix {
                        lift_units(rng, &t, &mut plain, 1);
                        repair(rng, &t, &mut plain, 1, 1, gap, Want::AtLeast(1))
                    } else {
                        rng.gen_range(1..=3)
                    };
                    DescBracket::new(&t, beta.clone(), &plain, Some((gamma, a.max(1) as u32)))?
                } else {
                    if fix {
                        let gap = |p: &[usize]| vd(p.len()) - codim_sum(&t, p);
                        lift_units(rng, &t, &mut plain, 1);
                        repair(rng, &t, &mut plain, 1, 1, gap, Want::Exactly(0));
                    }
                    if plain.len() < 2 {
                        plain.push(t.top_index());
                    }
                    DescBracket::new(&t, beta.clone(), &plain, None)?
                }
            }
        };
        items.push(b);
    }
    evaluate(ctx.workers, &items, |b| {
        let e = &engines[&b.target.to_string()];
        let combo = match suite {
            Suite::String => {
                ctx.touched.touch("descend.string_reduce");
                e.descend.string_reduce(b)?
            }
            Suite::Dilaton => {
                ctx.touched.touch("descend.dilaton_reduce");
                e.descend.dilaton_reduce(b)?
            }
            _ => {
                ctx.touched.touch("descend.divisor_reduce");
                e.descend.divisor_reduce(b)?
            }
        }
        .ok_or_else(|| GwError::Precondition(format!("{suite} does not apply to {b}")))?;
        let lhs = e.bare.bracket(b)?;
        ctx.touched.touch("descend.bracket");
        let mut rhs = Rational::zero();
        for (c, sub) in &combo {
            rhs += c * e.bare.bracket(sub)?;
        }
        let mut out = Outcome::default();
        out.compare(b.key(), &lhs, &rhs);
        out.compare(
            format!("{}#shortcuts", b.key()),
            &lhs,
            &e.descend.bracket(b)?,
        );
        Ok(out)
    })
}

fn theorem3_suite(ctx: &SuiteCtx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let engines = engines_for(ctx.targets)?;
    struct Inst {
        target: Arc<Target>,
        beta: CurveClass,
        p: usize,
        gamma0: usize,
        gammas: Vec<usize>,
        a_max: u32,
    }
    let mut items = Vec::new();
    for k in 0..ctx.trials {
        let t = ctx.targets.choose(rng).expect("nonempty").clone();
        let beta = draw_beta(rng, &t, ctx.dmax);
        let p = rng.gen_range(0..t.basis_len());
        let gamma0 = rng.gen_range(0..t.basis_len());
        let count = rng.gen_range(0..=2);
        let mut gammas = draw_classes(rng, &t, count);
        let a_max = if k % 2 == 0 {
            let fixed = (t.codim(p) + t.codim(gamma0)) as i64;
            let gap =
                |g: &[usize]| virtual_dimension(&t, &beta, g.len() + 2) - fixed - codim_sum(&t, g);
            lift_units(rng, &t, &mut gammas, 0);
            repair(rng, &t, &mut gammas, 0, 0, gap, Want::AtLeast(0)).clamp(0, 8) as u32
        } else {
            3
        };
        items.push(Inst {
            target: t,
            beta,
            p,
            gamma0,
            gammas,
            a_max,
        });
    }
    evaluate(ctx.workers, &items, |x| {
        let e = &engines[&x.target.to_string()];
        let p = x.target.monomial(x.p).clone();
        let res = e
            .descend
            .theorem3_residual(&x.beta, &p, x.gamma0, &x.gammas, x.a_max)?;
        ctx.touched.touch("descend.theorem3_residual");
        let mut out = Outcome::default();
        let mut plain = vec![x.gamma0];
        plain.extend(&x.gammas);
        for (a, r) in res.iter().enumerate() {
            let unknown =
                DescBracket::new(&x.target, x.beta.clone(), &plain, Some((x.p, a as u32)))?;
            let v = e.descend.bracket(&unknown)?;
            out.checks += 1;
            if !v.is_zero() {
                out.nonzero += 1;
            }
            if !r.is_zero() {
                out.failures.push(Failure {
                    key: format!("{}#residual", unknown.key()),
                    expected: "0".into(),
                    actual: format_rational(r),
                });
            }
        }
        Ok(out)
    })
}

fn cross_engine_suite(ctx: &SuiteCtx) -> Result<Outcome> {
    let engines = engines_for(ctx.targets)?;
    let mut out = Outcome::default();
    for t in ctx.targets {
        let e = &engines[&t.to_string()];
        let TargetKind::ProjectiveSpace(r) = *t.kind() else {
            return Err(GwError::UnsupportedTarget(format!(
                "cross_engine needs projective spaces, got {t}"
            )));
        };
        let w = e.wdvv.as_ref().expect("projective space");
        let r = r as usize;
        if r == 2 {
            let table = kontsevich_table(ctx.dmax);
            ctx.touched.touch("wdvv.kontsevich_nd");
            for d in 1..=ctx.dmax {
                let nd = &table[d as usize - 1];
                let base = vec![2; 3 * d as usize - 1];
                let beta = CurveClass::degree(d);
                out.compare(format!("P2|{d}|n_d#gw"), nd, &w.gw(d as i64, &base)?);
                out.compare(
                    format!("P2|{d}|n_d#bracket"),
                    nd,
                    &e.descend.gw(&beta, &base)?,
                );
                if d <= 4 {
                    out.compare(format!("P2|{d}|n_d#bare"), nd, &e.bare.gw(&beta, &base)?);
                }
                ctx.touched.touch("wdvv.gw");
                ctx.touched.touch("descend.bracket");
                for h in 0..=2 {
                    for u in 0..=1 {
                        let mut ins = base.clone();
                        ins.extend(std::iter::repeat_n(1, h));
                        ins.extend(std::iter::repeat_n(0, u));
                        let b = Bracket::ordinary(t, beta.clone(), &ins);
                        out.compare(b.key(), &w.gw(d as i64, &ins)?, &e.descend.gw(&beta, &ins)?);
                    }
                }
                if d <= 4 {
                    let ladder = e.descend.ladder_nd_a(d)?;
                    ctx.touched.touch("descend.ladder_nd_a");
                    for (a, v) in ladder.iter().enumerate() {
                        let b = DescBracket::new(
                            t,
                            beta.clone(),
                            &vec![2; 3 * d as usize - 2 - a],
                            Some((2, a as u32)),
                        )?;
                        out.compare(format!("{}#ladder", b.key()), v, &e.descend.bracket(&b)?);
                    }
                }
            }
        } else {
            let dmax = ctx.dmax.min(3);
            for d in 1..=dmax {
                let beta = CurveClass::degree(d);
                let need = ((r + 1) * d as usize + r - 3) as i64;
                for ins in codim_multisets(r, need) {
                    let b = Bracket::ordinary(t, beta.clone(), &ins);
                    out.compare(b.key(), &w.gw(d as i64, &ins)?, &e.descend.gw(&beta, &ins)?);
                }
            }
        }
        for d in 1..=ctx.dmax.min(4) {
            let beta = CurveClass::degree(d);
            for a in 0..=((r + 1) * d as usize + r) as u32 {
                for g in 0..t.basis_len() {
                    let v = one_point_descendant(t, &beta, a, g)?;
                    let b = DescBracket::new(t, beta.clone(), &[], Some((g, a)))?;
                    out.compare(
                        format!("{}#one_point", b.key()),
                        &v,
                        &e.descend.bracket(&b)?,
                    );
                }
            }
        }
        ctx.touched.touch("j.one_point_descendant");
        ctx.touched.touch("j.j_function");
    }
    Ok(out)
}

/// Multisets of codimensions `2..=r` with `Σ (c − 1) = need`, at most 10 points.
fn codim_multisets(r: usize, need: i64) -> Vec<Vec<usize>> {
    fn go(r: usize, c: usize, need: i64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if need == 0 {
            out.push(cur.clone());
            return;
        }
        if c > r || cur.len() >= 10 {
            return;
        }
        go(r, c + 1, need, cur, out);
        if need >= c as i64 - 1 {
            cur.push(c);
            go(r, c, need - (c as i64 - 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, 2, need, &mut Vec::new(), &mut out);
    out.into_iter().filter(|v| v.len() >= 2).collect()
}

fn product_swap_suite(ctx: &SuiteCtx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    if let Some(t) = ctx
        .targets
        .iter()
        .find(|t| !matches!(t.kind(), TargetKind::Product(f) if f.len() == 2))
    {
        return Err(GwError::UnsupportedTarget(format!(
            "product_swap needs a two-factor product, got {t}"
        )));
    }
    let engines = engines_for(ctx.targets)?;
    let mut items = Vec::new();
    for k in 0..ctx.trials {
        let t = ctx.targets.choose(rng).expect("nonempty").clone();
        let beta = draw_beta(rng, &t, ctx.dmax);
        let free = rng.gen_range(1..=3);
        let mut plain = draw_classes(rng, &t, free);
        let b = if rng.gen_bool(0.5) {
            let gamma = rng.gen_range(0..t.basis_len());
            let gap = |p: &[usize]| {
                virtual_dimension(&t, &beta, p.len() + 1) - codim_sum(&t, p) - t.codim(gamma) as i64
            };
            let a = if k % 2 == 0 {
                lift_units(rng, &t, &mut plain, 0);
                repair(rng, &t, &mut plain, 0, 1, gap, Want::AtLeast(1))
            } else {
                rng.gen_range(1..=3)
            };
            DescBracket::new(&t, beta.clone(), &plain, Some((gamma, a.max(1) as u32)))?
        } else {
            if k % 2 == 0 {
                let gap = |p: &[usize]| virtual_dimension(&t, &beta, p.len()) - codim_sum(&t, p);
                lift_units(rng, &t, &mut plain, 0);
                repair(rng, &t, &mut plain, 0, 1, gap, Want::Exactly(0));
            }
            DescBracket::new(&t, beta.clone(), &plain, None)?
        };
        items.push(b);
    }
    let mut out = evaluate(ctx.workers, &items, |b| {
        let t = &b.target;
        let e = &engines[&t.to_string()];
        let plain: Vec<usize> = b.plain().iter().map(|&i| t.swapped_index(i)).collect();
        let desc = b.descendant().map(|(i, a)| (t.swapped_index(i), a));
        let s = DescBracket::new(t, b.beta.reversed(), &plain, desc)?;
        let mut out = Outcome::default();
        out.compare(
            format!("{}#swap", b.key()),
            &e.descend.bracket(b)?,
            &e.descend.bracket(&s)?,
        );
        ctx.touched.touch("descend.bracket");
        Ok(out)
    })?;
    for t in ctx.targets {
        for beta in CurveClass(vec![ctx.dmax; 2]).sub_classes() {
            if beta.total() > ctx.dmax {
                continue;
            }
            let check = j_product_check(t, &beta)?;
            ctx.touched.touch("j.product_check");
            out.checks += 1;
            if !check.passed() {
                out.failures.push(Failure {
                    key: format!("{t}|{beta}#j_product"),
                    expected: "[]".into(),
                    actual: format!("{:?}", check.mismatched_exponents),
                });
            }
        }
    }
    Ok(out)
}

fn dimension_filter_suite(ctx: &SuiteCtx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let engines = engines_for(ctx.targets)?;
    let mut items = Vec::new();
    for _ in 0..ctx.trials {
        let t = ctx.targets.choose(rng).expect("nonempty").clone();
        let beta = if rng.gen_bool(0.2) {
            CurveClass::zero(t.generators())
        } else {
            draw_beta(rng, &t, ctx.dmax)
        };
        let count = rng.gen_range(if beta.is_zero() { 3 } else { 1 }..=4);
        let mut plain = draw_classes(rng, &t, count);
        let desc = if rng.gen_bool(0.5) {
            Some((rng.gen_range(0..t.basis_len()), rng.gen_range(1..=3)))
        } else {
            None
        };
        let n = plain.len() + desc.is_some() as usize;
        let gap = virtual_dimension(&t, &beta, n)
            - codim_sum(&t, &plain)
            - desc.map_or(0, |(g, a): (usize, u32)| (t.codim(g) + a as usize) as i64);
        if gap == 0 {
            let c2: Vec<usize> = (0..t.basis_len()).filter(|&i| t.codim(i) == 2).collect();
            plain.push(*c2.choose(rng).expect("dim >= 2"));
        }
        items.push(DescBracket::new(&t, beta.clone(), &plain, desc)?);
    }
    let zero = Rational::zero();
    let mut out = evaluate(ctx.workers, &items, |b| {
        let t = &b.target;
        let e = &engines[&t.to_string()];
        let mut out = Outcome::default();
        out.compare(b.key(), &zero, &e.descend.bracket(b)?);
        ctx.touched.touch("descend.bracket");
        if b.beta.is_zero() {
            let ins: Vec<(usize, u32)> = b
                .plain()
                .iter()
                .map(|&i| (i, 0))
                .chain(b.descendant())
                .collect();
            out.compare(
                format!("{}#degree_zero", b.key()),
                &zero,
                &degree_zero_bracket(t, &ins)?,
            );
            ctx.touched.touch("j.degree_zero_bracket");
        }
        if let (Some(w), None) = (&e.wdvv, b.descendant()) {
            out.compare(
                format!("{}#gw", b.key()),
                &zero,
                &w.gw(b.beta.0[0] as i64, b.plain())?,
            );
            ctx.touched.touch("wdvv.gw");
        }
        Ok(out)
    })?;
    for _ in 0..ctx.trials.min(20) {
        let n = rng.gen_range(3..=7);
        let mut exps: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        if exps.iter().sum::<u32>() as usize == n - 3 {
            exps[0] += 1;
        }
        out.compare(format!("psi{exps:?}"), &zero, &psi_intersection(&exps)?);
        ctx.touched.touch("j.psi_intersection");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!(
            "bogus".parse::<Suite>(),
            Err(GwError::UnknownSuite(_))
        ));
    }

    #[test]
    fn bounds_are_enforced() {
        let p = SuiteParams {
            dmax: Some(9),
            ..Default::default()
        };
        assert!(matches!(
            run_suite(Suite::Wdvv, &p, 1),
            Err(GwError::BoundExceeded(_))
        ));
        let p = SuiteParams {
            trials: Some(MAX_TRIALS + 1),
            ..Default::default()
        };
        assert!(matches!(
            run_suite(Suite::String, &p, 1),
            Err(GwError::BoundExceeded(_))
        ));
        let p = SuiteParams {
            targets: vec!["P1xP1".into()],
            ..Default::default()
        };
        assert!(matches!(
            run_suite(Suite::Wdvv, &p, 1),
            Err(GwError::UnsupportedTarget(_))
        ));
    }

    #[test]
    fn small_wdvv_suite_passes() {
        let p = SuiteParams {
            dmax: Some(2),
            trials: Some(10),
            ..Default::default()
        };
        let r = run_suite(Suite::Wdvv, &p, 7).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.nonzero > 0);
    }

    #[test]
    fn codim_multisets_p3_lines() {
        let mut v = codim_multisets(3, 4);
        v.sort();
        assert_eq!(v, vec![vec![2, 2, 2, 2], vec![2, 2, 3], vec![3, 3]]);
    }
}
