//! Realization loci: parameters whose fiber tropicalization contains given
//! rays with given multiplicities.
//!
//! Rings are `Q[c_1..c_k, x_1..x_n]`; loci are returned as radical ideals of
//! the parameter ring `Q[c_1..c_k]`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::cgb::comprehensive_basis;
use crate::decompose;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::hilbert;
use crate::ideal_ops::{
    intersect_all, radical, radical_member, same_locus, saturate, saturate_by_product,
    saturate_by_vars,
};
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::ring::Ring;
use crate::zzlinalg::fit_ray;

/// Loop guard for the outer iterations; each of them strictly enlarges an
/// ideal, so this is never reached on terminating inputs.
const MAX_ROUNDS: usize = 64;

#[derive(Clone, Debug, Default, Serialize)]
pub struct LocalStep {
    pub a1: String,
    pub a2: String,
    pub j: String,
    pub c: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DimensionStep {
    /// Prime of the parameter ring under consideration.
    pub prime: String,
    /// Components whose fibers have dimension at least two, removed by
    /// restricting to the locus where they miss the torus.
    pub discarded: Vec<String>,
    /// Where the restriction leads (the prime itself if nothing is discarded).
    pub locus: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WeightedStep {
    /// `C` and `J` as returned by the local computation.
    pub local_c: String,
    pub j: String,
    /// `C` after the fiber-dimension restriction.
    pub dimension_c: String,
    /// Set once the local/dimension loop has stabilized.
    pub regularity: Option<hilbert::Regularity>,
    pub d: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepStep {
    pub ray: Vec<String>,
    pub mult: usize,
    pub c: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RealizationTrace {
    pub local: Vec<Vec<LocalStep>>,
    pub dimension: Vec<DimensionStep>,
    pub weighted: Vec<WeightedStep>,
    pub sweeps: Vec<Vec<SweepStep>>,
}

fn check_ring(r: &Ring) -> Result<()> {
    if r.nvars() == 0 || r.is_homogenized() {
        return Err(Error::InvalidRing(
            "realization loci need at least one affine variable".into(),
        ));
    }
    Ok(())
}

fn affine_vars(r: &Ring) -> Vec<Poly> {
    r.affine_var_indices()
        .into_iter()
        .map(|v| r.gen(v))
        .collect()
}

fn lift(r: &Ring, c: &Ideal) -> Ideal {
    Ideal::lift_from_params(r, c)
}

fn with_params(i: &Ideal, c: &Ideal) -> Ideal {
    i.add_polys(lift(i.ring(), c).gens())
}

/// One naive pass: `A_1 = (I : x_1^∞)`, `A_2 = A_1 + (x_1)`,
/// `J = (A_2 : (x_2⋯x_n)^∞)`, `C = J ∩ Q[c]`.
pub fn naive_local(i: &Ideal) -> Result<(Ideal, Ideal)> {
    check_ring(i.ring())?;
    let step = local_pass(i)?;
    let c = step.2.eliminate_to_params().simplified();
    Ok((c, step.2))
}

fn local_pass(i: &Ideal) -> Result<(Ideal, Ideal, Ideal)> {
    let xs = affine_vars(i.ring());
    let a1 = saturate(i, &xs[0])?;
    let a2 = a1.add_polys(&[xs[0].clone()]);
    let j = saturate_by_product(&a2, &xs[1..])?;
    Ok((a1, a2, j))
}

#[derive(Clone, Debug)]
pub struct LocalSet {
    pub c: Ideal,
    pub j: Ideal,
    pub steps: Vec<LocalStep>,
}

/// Iterates the naive pass on `I + C` with `C` radical until `J` stabilizes.
/// `V(C)` is the closure of the set of parameters whose fiber tropicalization
/// contains the ray of `e_1`.
pub fn local_set(i: &Ideal) -> Result<LocalSet> {
    let r = i.ring();
    check_ring(r)?;
    let pr = r.parameter_ring();
    let mut c = Ideal::zero(&pr);
    let mut j_old: Option<Ideal> = None;
    let mut j = Ideal::zero(r);
    let mut steps = Vec::new();
    while j_old.as_ref().is_none_or(|o| !o.same_ideal(&j)) {
        j_old = Some(j);
        let (a1, a2, jn) = local_pass(&with_params(i, &c))?;
        j = jn.simplified();
        c = radical(&j.eliminate_to_params())?;
        steps.push(LocalStep {
            a1: a1.simplified().to_string(),
            a2: a2.simplified().to_string(),
            j: j.to_string(),
            c: c.to_string(),
        });
    }
    Ok(LocalSet { c, j, steps })
}

fn check_homogeneous(j: &Ideal) -> Result<()> {
    let xs = j.ring().var_indices();
    if j.gens().iter().all(|g| g.is_homogeneous_in(&xs)) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "the ideal must be homogeneous in the variables".into(),
        ))
    }
}

/// Closure of `{a : J_a ≠ (J_a : x_v^∞)}` for `J` homogeneous in the
/// variables and saturated with respect to the generator `v`.
///
/// A comprehensive basis under grevlex with `x_v` last is computed; on each
/// of its strata the fiber initial ideal is constant, and a homogeneous fiber
/// is `x_v`-saturated exactly when no minimal generator of its grevlex
/// initial ideal is divisible by `x_v`.
pub fn fiber_saturation_locus(j: &Ideal, v: usize) -> Result<Ideal> {
    let r = j.ring();
    let k = r.nparams();
    if v < k || v >= r.ngens() {
        return Err(Error::InvalidArgument(format!(
            "generator {v} is not a variable"
        )));
    }
    check_homogeneous(j)?;
    let pr = r.parameter_ring();
    if j.is_unit() {
        return Ok(Ideal::unit(&pr));
    }
    if !saturate(j, &r.gen(v))?.same_ideal(j) {
        return Err(Error::Precondition(format!(
            "{j} is not saturated with respect to {}",
            r.names()[v]
        )));
    }
    // move x_v to the last position
    let n = r.nvars();
    let perm: Vec<usize> = (0..n)
        .map(|p| match p.cmp(&(v - k)) {
            std::cmp::Ordering::Less => p,
            std::cmp::Ordering::Equal => n - 1,
            std::cmp::Ordering::Greater => p - 1,
        })
        .collect();
    let moved = Ideal::from_polys(
        r,
        j.gens().iter().map(|g| r.permute_vars(g, &perm)).collect(),
    );
    let b = comprehensive_basis(&moved, &MonomialOrder::EliminateX)?;
    let mut bad = Vec::new();
    for br in &b.branches {
        if br.unit || !br.initial.iter().any(|l| l[n - 1] > 0) {
            continue;
        }
        let (eqs, nz) = b.stratum(br);
        let e = Ideal::from_polys(
            &pr,
            eqs.iter()
                .map(|p| r.to_params(p).expect("x-free"))
                .collect(),
        );
        let prod = nz
            .iter()
            .fold(pr.one(), |acc, h| &acc * &r.to_params(h).expect("x-free"));
        if radical_member(&prod, &e) {
            continue;
        }
        bad.push(saturate(&e, &prod)?);
    }
    radical(&intersect_all(&pr, &bad)?)
}

/// Closure of `{a : J_a ≠ (J_a : (x_0⋯x_n)^∞)}`: the union over the
/// variables of the single-variable loci.
pub fn torus_saturation_locus(j: &Ideal) -> Result<Ideal> {
    let r = j.ring();
    let pr = r.parameter_ring();
    if j.is_unit() {
        return Ok(Ideal::unit(&pr));
    }
    let xs: Vec<Poly> = r.var_indices().into_iter().map(|v| r.gen(v)).collect();
    if !saturate_by_product(j, &xs)?.same_ideal(j) {
        return Err(Error::Precondition(format!(
            "{j} is not saturated with respect to the product of the variables"
        )));
    }
    let mut loci = Vec::new();
    for v in r.var_indices() {
        loci.push(fiber_saturation_locus(j, v)?);
    }
    radical(&intersect_all(&pr, &loci)?)
}

#[derive(Clone, Debug)]
pub struct DimensionLocus {
    pub locus: Ideal,
    pub steps: Vec<DimensionStep>,
}

/// Closure of the parameters whose very affine fiber is nonempty of
/// dimension at most one. `I` must be saturated by the product of the
/// variables.
pub fn dimension_locus(i: &Ideal) -> Result<DimensionLocus> {
    let r = i.ring();
    check_ring(r)?;
    let pr = r.parameter_ring();
    let mut steps = Vec::new();
    if i.is_unit() {
        return Ok(DimensionLocus {
            locus: Ideal::unit(&pr),
            steps,
        });
    }
    let c = radical(&i.eliminate_to_params())?;
    let hr = r.homogenized()?;
    let gens = i
        .groebner_basis(&MonomialOrder::EliminateX)
        .iter()
        .map(|g| r.homogenize(g))
        .collect::<Result<Vec<_>>>()?;
    let ibar = Ideal::from_polys(&hr, gens);
    let mut parts = Vec::new();
    for p in decompose::components(&c)? {
        parts.push(dimension_component(&ibar, &p, &mut steps, 0)?);
    }
    let locus = radical(&intersect_all(&pr, &parts)?)?;
    Ok(DimensionLocus { locus, steps })
}

fn dimension_component(
    ibar: &Ideal,
    p: &Ideal,
    steps: &mut Vec<DimensionStep>,
    depth: usize,
) -> Result<Ideal> {
    let hr = ibar.ring();
    let pr = hr.parameter_ring();
    if depth > MAX_ROUNDS {
        return Err(Error::DecompositionIncomplete(
            "fiber dimension restriction did not stabilize".into(),
        ));
    }
    let xs: Vec<Poly> = hr.var_indices().into_iter().map(|v| hr.gen(v)).collect();
    let ip = saturate_by_product(&with_params(ibar, p), &xs)?;
    if ip.is_unit() {
        return Ok(Ideal::unit(&pr));
    }
    let split = |q: &Ideal, steps: &mut Vec<DimensionStep>| -> Result<Ideal> {
        let mut parts = Vec::new();
        for pp in decompose::components(q)? {
            parts.push(dimension_component(&ip, &pp, steps, depth + 1)?);
        }
        intersect_all(&pr, &parts)
    };
    let cp = radical(&ip.eliminate_to_params())?;
    if !cp.same_ideal(p) {
        return split(&cp, steps);
    }
    let dim_p = p.dimension();
    let mut discarded = Vec::new();
    let mut l = Ideal::zero(&pr);
    for q in decompose::components(&ip)? {
        let dominant = same_locus(&q.eliminate_to_params(), p)?;
        // projective fiber dimension at least two
        if dominant && q.dimension() - 1 > dim_p + 1 {
            l = l.sum(&torus_saturation_locus(&q.add_polys(lift(hr, p).gens()))?)?;
            discarded.push(q.to_string());
        }
    }
    if discarded.is_empty() {
        steps.push(DimensionStep {
            prime: p.to_string(),
            discarded,
            locus: p.to_string(),
        });
        return Ok(p.clone());
    }
    let l = radical(&l.sum(p)?)?;
    steps.push(DimensionStep {
        prime: p.to_string(),
        discarded,
        locus: l.to_string(),
    });
    if l.same_ideal(p) {
        return Ok(p.clone());
    }
    if l.is_unit() {
        return Ok(l);
    }
    split(&l, steps)
}

/// Closure of the parameters whose fiber tropicalization is a curve
/// containing the ray of `e_1` with multiplicity at least `m`.
pub fn local_weighted(i: &Ideal, m: usize) -> Result<(Ideal, RealizationTrace)> {
    let mut trace = RealizationTrace::default();
    let c = weighted_into(i, m, &mut trace)?;
    Ok((c, trace))
}

fn weighted_into(i: &Ideal, m: usize, trace: &mut RealizationTrace) -> Result<Ideal> {
    let r = i.ring();
    check_ring(r)?;
    if m == 0 {
        return Err(Error::InvalidArgument(
            "multiplicity must be at least 1".into(),
        ));
    }
    let pr = r.parameter_ring();
    let mut c = Ideal::zero(&pr);
    let mut d = Ideal::zero(&pr);
    let mut first = true;
    let mut rounds = 0;
    while first || !c.contains_ideal(&d) {
        first = false;
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(Error::DecompositionIncomplete(
                "weighted locus iteration did not stabilize".into(),
            ));
        }
        let j = loop {
            let ls = local_set(&with_params(i, &c.sum(&d)?))?;
            trace.local.push(ls.steps);
            let sat = saturate_by_vars(&with_params(i, &ls.c))?;
            let dl = dimension_locus(&sat)?;
            trace.dimension.extend(dl.steps);
            trace.weighted.push(WeightedStep {
                local_c: ls.c.to_string(),
                j: ls.j.to_string(),
                dimension_c: dl.locus.to_string(),
                regularity: None,
                d: None,
            });
            let stable = ls.c.same_ideal(&dl.locus);
            c = dl.locus;
            if stable {
                break ls.j;
            }
        };
        if c.is_unit() {
            return Ok(c);
        }
        let jbar = hilbert::homogenized_family(&j)?;
        let reg = hilbert::regularity(&jbar)?;
        // generators above degree r do not reach the degree-r piece
        d = hilbert::minors_ideal(&jbar, m, reg.value, Some(&c))?;
        let last = trace.weighted.last_mut().expect("pushed above");
        last.regularity = Some(reg);
        last.d = Some(d.to_string());
    }
    Ok(c)
}

/// Transforms `I` by a torus automorphism taking the ray of `v` to the ray
/// of `e_1`, then saturates by the product of the variables.
pub fn normalize_ray(i: &Ideal, v: &[BigInt]) -> Result<Ideal> {
    let r = i.ring();
    check_ring(r)?;
    if v.len() != r.nvars() {
        return Err(Error::Arity {
            expected: r.nvars(),
            got: v.len(),
        });
    }
    let a = fit_ray(v)?.transpose();
    let gens = i
        .gens()
        .iter()
        .map(|g| r.monomial_substitute(g, &a))
        .collect::<Result<Vec<_>>>()?;
    saturate_by_vars(&Ideal::from_polys(r, gens))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<(Vec<BigInt>, usize)>,
}

impl Fan {
    pub fn new(rays: Vec<(Vec<BigInt>, usize)>) -> Result<Fan> {
        if rays.is_empty() {
            return Err(Error::InvalidArgument(
                "a fan needs at least one ray".into(),
            ));
        }
        let n = rays[0].0.len();
        for (k, (v, m)) in rays.iter().enumerate() {
            if v.len() != n {
                return Err(Error::Arity {
                    expected: n,
                    got: v.len(),
                });
            }
            if !crate::zzlinalg::is_primitive(v) {
                let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                return Err(Error::NotPrimitive(format!("({})", shown.join(", "))));
            }
            if *m == 0 {
                return Err(Error::InvalidArgument(
                    "ray multiplicities must be positive".into(),
                ));
            }
            if rays[..k].iter().any(|(w, _)| w == v) {
                return Err(Error::InvalidArgument("rays must be distinct".into()));
            }
        }
        Ok(Fan { rays })
    }

    pub fn rays(&self) -> &[(Vec<BigInt>, usize)] {
        &self.rays
    }
}

/// Closure of the parameters whose fiber tropicalization is a curve
/// containing every ray of `fan` with at least its multiplicity. Rays are
/// swept in order, each restricting the family by the current locus, until
/// a whole sweep leaves the locus unchanged.
pub fn global_realization(i: &Ideal, fan: &Fan) -> Result<(Ideal, RealizationTrace)> {
    let r = i.ring();
    check_ring(r)?;
    let pr = r.parameter_ring();
    let mut normalized = Vec::new();
    for (v, _) in fan.rays() {
        normalized.push(normalize_ray(i, v)?);
    }
    let mut trace = RealizationTrace::default();
    let mut c = Ideal::zero(&pr);
    for _ in 0..MAX_ROUNDS {
        let before = c.clone();
        let mut sweep = Vec::new();
        for ((v, m), ni) in fan.rays().iter().zip(&normalized) {
            c = weighted_into(&with_params(ni, &c), *m, &mut trace)?;
            sweep.push(SweepStep {
                ray: v.iter().map(|x| x.to_string()).collect(),
                mult: *m,
                c: c.to_string(),
            });
            if c.is_unit() {
                break;
            }
        }
        trace.sweeps.push(sweep);
        if c.is_unit() || c.same_ideal(&before) {
            return Ok((c, trace));
        }
    }
    Err(Error::DecompositionIncomplete(
        "ray sweeps did not stabilize".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(r: &Ring, g: &[&str]) -> Ideal {
        Ideal::parse(r, g).unwrap()
    }

    fn ring(ps: &[&str], xs: &[&str]) -> Ring {
        Ring::new(ps, xs).unwrap()
    }

    #[test]
    fn naive_and_local() {
        let r = ring(&["c1", "c2"], &["x", "y"]);
        let pr = r.parameter_ring();
        let i = id(&r, &["c2*x^2 + c2*x*y + c1"]);
        assert_eq!(naive_local(&i).unwrap().0, id(&pr, &["c1"]));
        let ls = local_set(&i).unwrap();
        assert_eq!(ls.c, id(&pr, &["c1", "c2"]));

        let i = id(&r, &["c1*x + c2*y + x*y"]);
        assert_eq!(local_set(&i).unwrap().c, id(&pr, &["c2"]));

        assert!(local_set(&id(&r, &["x"])).unwrap().c.is_unit());
        assert!(local_set(&id(&r, &["x - 1"])).unwrap().c.is_unit());
        assert!(local_set(&Ideal::unit(&r)).unwrap().c.is_unit());
        let ls = local_set(&id(&r, &["y - 1"])).unwrap();
        assert!(ls.c.is_zero());
        assert_eq!(ls.j, id(&r, &["x", "y - 1"]));
    }

    #[test]
    fn saturation_loci() {
        let r = ring(&["c1", "c2"], &["x0", "x1", "x2"]);
        let pr = r.parameter_ring();
        let x2 = r.index_of("x2").unwrap();
        let j = id(&r, &["c1*x0 + x2"]);
        assert_eq!(fiber_saturation_locus(&j, x2).unwrap(), id(&pr, &["c1"]));
        assert!(matches!(
            fiber_saturation_locus(&id(&r, &["c1*x2"]), x2),
            Err(Error::Precondition(_))
        ));
        assert!(torus_saturation_locus(&id(&r, &["x0 + x1 + x2"]))
            .unwrap()
            .is_unit());
        assert_eq!(
            torus_saturation_locus(&id(&r, &["c1*x0 + c2*x1"])).unwrap(),
            id(&pr, &["c1*c2"])
        );
        assert!(torus_saturation_locus(&Ideal::unit(&r)).unwrap().is_unit());
    }

    #[test]
    fn dimension_examples() {
        let r0 = ring(&[], &["x", "y"]);
        assert!(dimension_locus(&id(&r0, &["x + y + 1"]))
            .unwrap()
            .locus
            .is_zero());
        let r = ring(&["c"], &["x", "y", "z"]);
        let pr = r.parameter_ring();
        let i1 = id(&r, &["x + c*y + c*z + c"]);
        let i2 = id(&r, &["x + 2*y - z + 3", "y + 2*z + 2"]);
        let i = crate::ideal_ops::intersect(&i1, &i2).unwrap();
        let dl = dimension_locus(&i).unwrap();
        assert_eq!(dl.locus, id(&pr, &["c"]));
        assert!(dl.steps.iter().any(|s| !s.discarded.is_empty()));
        assert!(dimension_locus(&Ideal::unit(&r)).unwrap().locus.is_unit());
    }
}
