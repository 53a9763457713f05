#![allow(dead_code)]

// Randomized property suites. Each suite takes a case count and reports the
// first counterexample as a string, so the same code runs under `cargo test`
// and from the acceptance runner.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropreal::cgb::comprehensive_basis;
use tropreal::groebner::{groebner_basis_polys, normal_form, satisfies_buchberger_criterion};
use tropreal::hilbert::minors_ideal;
use tropreal::ideal_ops::{radical_contains, same_locus, saturate};
use tropreal::poly::exp_divides;
use tropreal::realization::{global_realization, local_set, local_weighted, Fan};
use tropreal::ring::leading_term;
use tropreal::sample::{points_on, random_points};
use tropreal::zzlinalg::{fit_ray, smith_normal_form, IntMatrix};
use tropreal::{Error, Ideal, MonomialOrder, ParamPoint, Poly, Ring};

pub const CASES: u32 = 200;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 32,
        max_global_rejects: 4 * cases,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

// scope errors (caps) discard the case; anything else is a failure
fn ok<T>(r: tropreal::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e: Error| {
        if e.is_scope() {
            TestCaseError::reject(e.to_string())
        } else {
            TestCaseError::fail(e.to_string())
        }
    })
}

fn id(r: &Ring, gens: &[String]) -> Ideal {
    Ideal::parse(r, gens).expect("generated polynomials parse")
}

// ---- random polynomials, rendered as text over a fixed list of names ----

type Term = (i64, Vec<u32>);

fn render(names: &[&str], terms: &[Term]) -> String {
    let mut merged: BTreeMap<&[u32], i64> = BTreeMap::new();
    for (c, e) in terms {
        *merged.entry(e).or_default() += c;
    }
    let mut out = Vec::new();
    for (e, c) in merged {
        if c == 0 {
            continue;
        }
        let mut f = vec![c.to_string()];
        for (n, &k) in names.iter().zip(e) {
            match k {
                0 => {}
                1 => f.push(n.to_string()),
                _ => f.push(format!("{n}^{k}")),
            }
        }
        out.push(format!("({})", f.join("*")));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out.join(" + ")
    }
}

fn cap_degree(mut e: Vec<u32>, max: u32) -> Vec<u32> {
    while e.iter().sum::<u32>() > max {
        let k = (0..e.len()).max_by_key(|&k| e[k]).unwrap();
        e[k] -= 1;
    }
    e
}

/// Terms in `np` parameters and `nx` variables with parameter degree at
/// most `pdeg` and variable degree at most `xdeg`.
fn terms(
    np: usize,
    nx: usize,
    pdeg: u32,
    xdeg: u32,
    max: usize,
) -> impl Strategy<Value = Vec<Term>> {
    let term = (-3i64..=3, vec(0..=pdeg, np), vec(0..=xdeg, nx)).prop_map(move |(c, p, x)| {
        let mut e = cap_degree(p, pdeg);
        e.extend(cap_degree(x, xdeg));
        (c, e)
    });
    vec(term, 1..=max)
}

fn poly(
    names: &'static [&'static str],
    np: usize,
    pdeg: u32,
    xdeg: u32,
    max: usize,
) -> BoxedStrategy<String> {
    terms(np, names.len() - np, pdeg, xdeg, max)
        .prop_map(move |t| render(names, &t))
        .boxed()
}

fn nonzero(s: BoxedStrategy<String>) -> BoxedStrategy<String> {
    s.prop_filter("zero polynomial", |p| p != "0").boxed()
}

/// Fixed support in the variables, coefficients affine in the parameters:
/// `sum (k0 + k1*c1 + ...) * m` over the monomials `m` of `support`.
fn family(
    params: &'static [&'static str],
    support: &'static [&'static str],
) -> BoxedStrategy<String> {
    vec(vec(-2i64..=2, params.len() + 1), support.len())
        .prop_map(move |coeffs| {
            let mut out = Vec::new();
            for (k, m) in coeffs.iter().zip(support) {
                let mut c: Vec<String> = Vec::new();
                if k[0] != 0 {
                    c.push(k[0].to_string());
                }
                for (ki, p) in k[1..].iter().zip(params) {
                    if *ki != 0 {
                        c.push(format!("{ki}*{p}"));
                    }
                }
                if !c.is_empty() {
                    out.push(format!("({})*{m}", c.join(" + ")));
                }
            }
            if out.is_empty() {
                "0".into()
            } else {
                out.join(" + ")
            }
        })
        .prop_filter("zero polynomial", |p| p != "0")
        .boxed()
}

const LINES: &[&str] = &["1", "x", "y"];
const QUADRICS: &[&str] = &["1", "x", "y", "x^2", "x*y", "y^2"];
const CUBIC_CURVES: &[&str] = &["1", "x", "y", "x*y", "x^2", "y^2", "x*y^2", "x^2*y"];

fn int_point(n: usize) -> impl Strategy<Value = ParamPoint> {
    vec(-3i64..=3, n).prop_map(|v| ParamPoint::from_ints(&v))
}

fn specialize_ideal(i: &Ideal, a: &ParamPoint) -> Ideal {
    let r = i.ring();
    let gens = i
        .gens()
        .iter()
        .map(|g| r.specialize(g, a).unwrap())
        .collect();
    Ideal::from_polys(&r.fiber_ring(), gens)
}

// ---- saturation ----

const CXY: &[&str] = &["c", "x", "y"];

/// `(J:f^∞) + K ⊆ (J+K : f^∞)` and `((J:f^∞) + K : f^∞) = (J+K : f^∞)`.
pub fn saturation_sum(cases: u32) -> Result<(), String> {
    let strat = (
        vec(family(&["c"], QUADRICS), 1..=2),
        family(&["c"], QUADRICS),
        nonzero(poly(CXY, 1, 1, 1, 2)),
    );
    check("saturation of sums", cases, strat, |(j, k, f)| {
        let r = Ring::new(&["c"], &["x", "y"]).unwrap();
        let j = id(&r, &j);
        let k = id(&r, &[k]);
        let f = tropreal::parse::parse_poly(&r, &f).unwrap();
        let jf = ok(saturate(&j, &f))?;
        let lhs = ok(jf.sum(&k))?;
        let jk = ok(saturate(&ok(j.sum(&k))?, &f))?;
        prop_assert!(
            jk.contains_ideal(&lhs),
            "(J:f)+K = {lhs} not in (J+K:f) = {jk}"
        );
        let twice = ok(saturate(&lhs, &f))?;
        prop_assert!(twice.same_ideal(&jk), "{twice} != {jk}");
        Ok(())
    })
}

/// For `f` free of parameters: `((J:f^∞)_a : f^∞) = (J_a : f^∞)`.
pub fn saturation_specializes(cases: u32) -> Result<(), String> {
    const XY: &[&str] = &["x", "y"];
    let strat = (
        vec(family(&["c"], QUADRICS), 1..=2),
        nonzero(poly(XY, 0, 0, 2, 2)),
        vec(int_point(1), 2),
    );
    check(
        "saturation after specialization",
        cases,
        strat,
        |(j, f, pts)| {
            let r = Ring::new(&["c"], &["x", "y"]).unwrap();
            let fr = r.fiber_ring();
            let j = id(&r, &j);
            let f_fiber = tropreal::parse::parse_poly(&fr, &f).unwrap();
            let f = tropreal::parse::parse_poly(&r, &f).unwrap();
            let jf = ok(saturate(&j, &f))?;
            for a in &pts {
                let lhs = ok(saturate(&specialize_ideal(&jf, a), &f_fiber))?;
                let rhs = ok(saturate(&specialize_ideal(&j, a), &f_fiber))?;
                prop_assert!(lhs.same_ideal(&rhs), "at {:?}: {lhs} vs {rhs}", a.coords);
            }
            Ok(())
        },
    )
}

// ---- Gröbner bases ----

/// Every S-pair of a computed basis reduces to zero, the input reduces to
/// zero, and the generator order does not matter.
pub fn buchberger_criterion(cases: u32) -> Result<(), String> {
    let strat = (vec(family(&["c"], QUADRICS), 1..=3), 0usize..3);
    check("Buchberger criterion", cases, strat, |(gens, o)| {
        let order = [
            MonomialOrder::Grevlex,
            MonomialOrder::Lex,
            MonomialOrder::EliminateX,
        ][o]
            .clone();
        let r = Ring::new(&["c"], &["x", "y"]).unwrap();
        let i = id(&r, &gens);
        let gb = groebner_basis_polys(&r, i.gens(), &order);
        prop_assert!(satisfies_buchberger_criterion(&r, &gb, &order));
        for g in i.gens() {
            prop_assert!(normal_form(&r, g, &gb, &order).is_zero());
        }
        let rev: Vec<Poly> = i.gens().iter().rev().cloned().collect();
        let gb2 = groebner_basis_polys(&r, &rev, &order);
        for g in &gb2 {
            prop_assert!(normal_form(&r, g, &gb, &order).is_zero());
        }
        for g in &gb {
            prop_assert!(normal_form(&r, g, &gb2, &order).is_zero());
        }
        Ok(())
    })
}

// ---- comprehensive bases ----

/// The specialized basis lies in `I_a` and its leading monomials generate
/// the initial ideal of `I_a`.
fn specializes_well(i: &Ideal, polys: &[Poly], a: &ParamPoint) -> bool {
    let r = i.ring();
    let fr = r.fiber_ring();
    let order = MonomialOrder::Grevlex;
    let ord = fr.compile(&order);
    let fiber = specialize_ideal(i, a);
    let gb = groebner_basis_polys(&fr, fiber.gens(), &order);
    let spec: Vec<Poly> = polys
        .iter()
        .map(|g| r.specialize(g, a).unwrap())
        .filter(|g| !g.is_zero())
        .collect();
    if !spec.iter().all(|g| fiber.contains(g)) {
        return false;
    }
    let leads: Vec<_> = spec
        .iter()
        .map(|g| leading_term(g, &ord).unwrap().0.clone())
        .collect();
    gb.iter().all(|g| {
        let lg = &leading_term(g, &ord).unwrap().0;
        leads.iter().any(|l| exp_divides(l, lg))
    })
}

/// Specialization soundness at 25 or more points per basis, starting with
/// points on every branch locus.
pub fn cgb_soundness(cases: u32) -> Result<(), String> {
    const AB: &[&str] = &["a", "b"];
    const C: &[&str] = &["c"];
    let families = prop_oneof![
        family(AB, QUADRICS).prop_map(|q| (AB, vec![q])),
        (family(C, QUADRICS), family(C, QUADRICS)).prop_map(|(p, q)| (C, vec![p, q])),
        (family(C, QUADRICS), family(C, LINES)).prop_map(|(q, l)| (C, vec![q, l])),
    ];
    check(
        "comprehensive basis soundness",
        cases,
        (families, any::<u64>()),
        |((ps, gens), seed)| {
            let r = Ring::new(ps, &["x", "y"]).unwrap();
            let pr = r.parameter_ring();
            let i = id(&r, &gens);
            let cgb = ok(comprehensive_basis(&i, &MonomialOrder::EliminateX))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pts = Vec::new();
            for eqs in cgb.branch_conditions() {
                if eqs.is_empty() {
                    continue;
                }
                let c =
                    Ideal::from_polys(&pr, eqs.iter().map(|e| r.to_params(e).unwrap()).collect());
                if c.is_unit() {
                    continue;
                }
                // loci without rational points cannot be specialized at
                if let Ok(found) = points_on(&c, 2, &mut rng) {
                    pts.extend(found);
                }
            }
            let rest = 25usize.saturating_sub(pts.len()).max(10);
            pts.extend(random_points(ps.len(), rest, 4, &mut rng));
            prop_assert!(pts.len() >= 25);
            for a in pts {
                let a = ParamPoint::new(a);
                prop_assert!(
                    specializes_well(&i, &cgb.polys, &a),
                    "fails at {:?}",
                    a.coords
                );
            }
            Ok(())
        },
    )
}

// ---- integer linear algebra ----

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| vec(vec(-30i64..=30, c), r))
}

pub fn smith_invariants(cases: u32) -> Result<(), String> {
    check("Smith normal form", cases, int_matrix(), |rows| {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&m);
        prop_assert!(s.p.is_unimodular() && s.q.is_unimodular());
        prop_assert_eq!(&s.p.mul(&m).unwrap().mul(&s.q).unwrap(), &s.d);
        for (i, row) in s.d.to_rows().iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert!(i == j || x.is_zero());
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            };
            prop_assert!(ok, "diagonal {:?}", diag);
        }
        Ok(())
    })
}

pub fn fit_ray_postconditions(cases: u32) -> Result<(), String> {
    let strat = vec(-20i64..=20, 1..=4).prop_filter("zero vector", |v| v.iter().any(|&x| x != 0));
    check("fit_ray", cases, strat, |v| {
        let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x / g)).collect();
        let b = fit_ray(&v).unwrap();
        prop_assert!(b.is_unimodular());
        prop_assert_eq!(b.column(0), v);
        Ok(())
    })
}

// ---- monotonicity ----

// trace entries print ideals as "(g1, g2, ...)"
fn from_trace(r: &Ring, s: &str) -> Ideal {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let gens: Vec<&str> = inner
        .split(',')
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .collect();
    Ideal::parse(r, &gens).unwrap()
}

/// `C^(i) ⊆ C^(i+1)` and `J^(i) ⊆ J^(i+1)` along every local trace.
pub fn local_chains(cases: u32) -> Result<(), String> {
    // two curves in two parameters is past the comprehensive-basis budget
    let strat = prop_oneof![
        family(&["c1", "c2"], CUBIC_CURVES).prop_map(|g| (vec!["c1", "c2"], vec![g])),
        (family(&["c1"], CUBIC_CURVES), family(&["c1"], QUADRICS))
            .prop_map(|(f, g)| (vec!["c1"], vec![f, g])),
    ];
    check("local chains", cases, strat, |(params, gens)| {
        let r = Ring::new(&params, &["x", "y"]).unwrap();
        let pr = r.parameter_ring();
        let ls = ok(local_set(&id(&r, &gens)))?;
        for w in ls.steps.windows(2) {
            let (c0, c1) = (from_trace(&pr, &w[0].c), from_trace(&pr, &w[1].c));
            let (j0, j1) = (from_trace(&r, &w[0].j), from_trace(&r, &w[1].j));
            prop_assert!(c1.contains_ideal(&c0), "C: {c0} then {c1}");
            prop_assert!(j1.contains_ideal(&j0), "J: {j0} then {j1}");
        }
        Ok(())
    })
}

/// `V(local_weighted(I, 2)) ⊆ V(local_weighted(I, 1))`.
pub fn weighted_nesting(cases: u32) -> Result<(), String> {
    let strat = family(&["c"], CUBIC_CURVES);
    check("weighted nesting", cases, strat, |g| {
        let r = Ring::new(&["c"], &["x", "y"]).unwrap();
        let i = id(&r, &[g]);
        let (c1, _) = ok(local_weighted(&i, 1))?;
        let (c2, _) = ok(local_weighted(&i, 2))?;
        prop_assert!(radical_contains(&c2, &c1), "m=1 {c1}, m=2 {c2}");
        Ok(())
    })
}

const LINEAR: &[&str] = &["x0", "x1", "x2"];
const QUADRATIC: &[&str] = &["x0^2", "x0*x1", "x0*x2", "x1^2", "x1*x2", "x2^2"];

/// `V(minors(J, m+1, r)) ⊆ V(minors(J, m, r))`.
pub fn minors_nesting(cases: u32) -> Result<(), String> {
    let strat = (1u32..=2, 1usize..=4).prop_flat_map(|(d, m)| {
        // a pair of conics over two parameters is too slow to sample
        let (support, most) = if d == 1 { (LINEAR, 2) } else { (QUADRATIC, 1) };
        (
            vec(family(&["a", "b"], support), 1..=most),
            Just(d),
            1..=2u32,
            Just(m),
        )
    });
    check(
        "minor-ideal nesting",
        cases,
        strat,
        |(gens, d, extra, m)| {
            let r = Ring::new(&["a", "b"], &["x0", "x1", "x2"]).unwrap();
            let j = id(&r, &gens);
            let deg = d + extra - 1;
            let lo = ok(minors_ideal(&j, m, deg, None))?;
            let hi = ok(minors_ideal(&j, m + 1, deg, None))?;
            prop_assert!(radical_contains(&hi, &lo), "r={deg} m={m}: {lo} vs {hi}");
            Ok(())
        },
    )
}

// ---- global loci ----

struct CorpusFamily {
    params: &'static [&'static str],
    gens: &'static [&'static str],
    rays: &'static [[i64; 2]],
}

const CORPUS: &[CorpusFamily] = &[
    CorpusFamily {
        params: &["c1", "c2"],
        gens: &["c1*x + c2*y + x*y"],
        rays: &[[1, 0], [0, 1], [-1, -1], [1, 1]],
    },
    CorpusFamily {
        params: &["c"],
        gens: &["c + y + x*y + y^2"],
        rays: &[[1, 0], [0, 1], [-1, -1], [-1, 0]],
    },
    CorpusFamily {
        params: &["c1", "c2"],
        gens: &["c1*y + x*y + x*y^2 + c1*c2*x^2 + c2*x^2*y + x^2*y"],
        rays: &[[1, 0], [0, 1], [-1, -1]],
    },
];

type FanKey = (usize, Vec<([i64; 2], usize)>);

/// Permuting the rays of the fan does not change the locus.
pub fn globwei_permutation(cases: u32) -> Result<(), String> {
    let strat = (0..CORPUS.len()).prop_flat_map(|k| {
        let rays = CORPUS[k].rays.to_vec();
        (
            Just(k),
            proptest::sample::subsequence(rays, 1..=3),
            vec(1usize..=2, 3),
        )
            .prop_flat_map(|(k, rays, mults)| {
                let fan: Vec<([i64; 2], usize)> = rays.into_iter().zip(mults).collect();
                (Just(k), Just(fan.clone()), Just(fan).prop_shuffle())
            })
    });
    let cache: RefCell<HashMap<FanKey, Ideal>> = RefCell::new(HashMap::new());
    let locus = |k: usize, fan: &[([i64; 2], usize)]| -> Result<Ideal, TestCaseError> {
        let key = (k, fan.to_vec());
        if let Some(c) = cache.borrow().get(&key) {
            return Ok(c.clone());
        }
        let fam = &CORPUS[k];
        let r = Ring::new(fam.params, &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, fam.gens).unwrap();
        let rays = fan
            .iter()
            .map(|(v, m)| (v.iter().map(|&x| BigInt::from(x)).collect(), *m))
            .collect();
        let (c, _) = ok(global_realization(&i, &Fan::new(rays).unwrap()))?;
        cache.borrow_mut().insert(key, c.clone());
        Ok(c)
    };
    check(
        "ray order invariance",
        cases,
        strat,
        |(k, fan, shuffled)| {
            let a = locus(k, &fan)?;
            let b = locus(k, &shuffled)?;
            prop_assert!(ok(same_locus(&a, &b))?, "{fan:?}: {a} vs {shuffled:?}: {b}");
            Ok(())
        },
    )
}

pub type Suite = fn(u32) -> Result<(), String>;

/// Every suite with its name, in acceptance order.
pub fn all() -> Vec<(&'static str, Suite)> {
    vec![
        ("saturation of sums", saturation_sum),
        ("saturation after specialization", saturation_specializes),
        ("Buchberger criterion", buchberger_criterion),
        ("comprehensive basis soundness", cgb_soundness),
        ("Smith normal form", smith_invariants),
        ("fit_ray", fit_ray_postconditions),
        ("local chains", local_chains),
        ("weighted nesting", weighted_nesting),
        ("minor-ideal nesting", minors_nesting),
        ("ray order invariance", globwei_permutation),
    ]
}
