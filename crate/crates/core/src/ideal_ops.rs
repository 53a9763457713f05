//! Saturation, quotients, intersections and radicals.

use crate::decompose;
use crate::error::{Error, Result};
use crate::factor;
use crate::groebner::Ideal;
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::ring::Ring;

/// Embeds `i` into the ring with one extra variable `t`, returning the
/// extended ring, the index of `t`, and the embedded generators.
fn extend(i: &Ideal, base: &str) -> (Ring, usize, Vec<Poly>) {
    let r = i.ring();
    let (ext, t) = r.with_extra_var(base);
    let emb = r.extra_var_embedding();
    let gens = i
        .gens()
        .iter()
        .map(|g| g.remap(ext.ngens(), &emb))
        .collect();
    (ext, t, gens)
}

fn embed(r: &Ring, ext: &Ring, f: &Poly) -> Poly {
    f.remap(ext.ngens(), &r.extra_var_embedding())
}

/// Eliminates `t` from `gens` in `ext` and brings the result back to `r`.
fn contract(r: &Ring, ext: &Ring, t: usize, gens: Vec<Poly>) -> Ideal {
    let map: Vec<Option<usize>> = (0..ext.ngens())
        .map(|i| match i.cmp(&t) {
            std::cmp::Ordering::Less => Some(i),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(i - 1),
        })
        .collect();
    let e = Ideal::from_polys(ext, gens);
    let kept = e
        .eliminate(&[t])
        .into_iter()
        .map(|g| g.restrict(r.ngens(), &map).expect("t eliminated"))
        .collect();
    Ideal::from_polys(r, kept).simplified()
}

/// `(I : f^∞)` by the Rabinowitsch extension.
pub fn saturate(i: &Ideal, f: &Poly) -> Result<Ideal> {
    i.ring().check(f)?;
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot saturate by zero".into()));
    }
    if i.is_zero() || f.is_constant() {
        return Ok(i.clone());
    }
    if i.is_unit() || i.contains(f) {
        return Ok(Ideal::unit(i.ring()));
    }
    let (ext, t, mut gens) = extend(i, "t");
    let tf = &ext.var(0) * &embed(i.ring(), &ext, f);
    gens.push(&tf - &ext.one());
    Ok(contract(i.ring(), &ext, t, gens))
}

/// `(I : (f_1 ⋯ f_m)^∞)`, saturating one factor at a time.
pub fn saturate_by_product(i: &Ideal, fs: &[Poly]) -> Result<Ideal> {
    let mut acc = i.clone();
    for f in fs {
        acc = saturate(&acc, f)?;
        if acc.is_unit() {
            break;
        }
    }
    Ok(acc)
}

/// `(I : (x_1 ⋯ x_n)^∞)` over the affine x-variables of the ring.
pub fn saturate_by_vars(i: &Ideal) -> Result<Ideal> {
    let r = i.ring();
    let vars: Vec<Poly> = r
        .affine_var_indices()
        .into_iter()
        .map(|v| r.gen(v))
        .collect();
    saturate_by_product(i, &vars)
}

/// `I ∩ J` via a tag variable.
pub fn intersect(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.check_same_ring(j)?;
    if i.is_zero() || j.is_zero() {
        return Ok(Ideal::zero(i.ring()));
    }
    if i.is_unit() {
        return Ok(j.clone());
    }
    if j.is_unit() {
        return Ok(i.clone());
    }
    if i.contains_ideal(j) {
        return Ok(j.clone());
    }
    if j.contains_ideal(i) {
        return Ok(i.clone());
    }
    let r = i.ring();
    let (ext, t, gi) = extend(i, "t");
    let tv = ext.var(0);
    let one_minus = &ext.one() - &tv;
    let mut gens: Vec<Poly> = gi.iter().map(|g| &tv * g).collect();
    gens.extend(j.gens().iter().map(|g| &one_minus * &embed(r, &ext, g)));
    Ok(contract(r, &ext, t, gens))
}

/// Intersection of a list of ideals of `ring`; the empty intersection is
/// the unit ideal.
pub fn intersect_all(ring: &Ring, ideals: &[Ideal]) -> Result<Ideal> {
    let mut acc = Ideal::unit(ring);
    for i in ideals {
        acc = intersect(&acc, i)?;
    }
    Ok(acc)
}

/// `(I : f)`.
pub fn quotient(i: &Ideal, f: &Poly) -> Result<Ideal> {
    i.ring().check(f)?;
    if f.is_zero() {
        return Err(Error::InvalidArgument(
            "cannot take the quotient by zero".into(),
        ));
    }
    if f.is_constant() || i.is_zero() {
        return Ok(i.clone());
    }
    if i.contains(f) {
        return Ok(Ideal::unit(i.ring()));
    }
    let fi = Ideal::from_polys(i.ring(), vec![f.clone()]);
    let cap = intersect(i, &fi)?;
    let gens = cap
        .gens()
        .iter()
        .map(|g| {
            g.exact_div(f)
                .expect("intersection with (f) is divisible by f")
        })
        .collect();
    Ok(Ideal::from_polys(i.ring(), gens).simplified())
}

/// `(I : J)` as the intersection of the quotients by generators of `J`.
pub fn quotient_ideal(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.check_same_ring(j)?;
    let qs = j
        .gens()
        .iter()
        .map(|g| quotient(i, g))
        .collect::<Result<Vec<_>>>()?;
    intersect_all(i.ring(), &qs)
}

/// `f ∈ √I`, decided by `1 ∈ I + (t·f − 1)`.
pub fn radical_member(f: &Poly, i: &Ideal) -> bool {
    if f.is_zero() || i.contains(f) {
        return true;
    }
    if i.is_zero() {
        return false;
    }
    let (ext, _, mut gens) = extend(i, "t");
    let tf = &ext.var(0) * &embed(i.ring(), &ext, f);
    gens.push(&tf - &ext.one());
    Ideal::from_polys(&ext, gens).is_unit()
}

/// `√I = √J`.
pub fn same_locus(i: &Ideal, j: &Ideal) -> Result<bool> {
    i.check_same_ring(j)?;
    Ok(j.gens().iter().all(|g| radical_member(g, i))
        && i.gens().iter().all(|g| radical_member(g, j)))
}

/// `√I ⊆ √J`, i.e. `V(J) ⊆ V(I)`.
pub fn radical_contains(j: &Ideal, i: &Ideal) -> bool {
    i.gens().iter().all(|g| radical_member(g, j))
}

/// The radical of `I`.
///
/// Principal ideals use squarefree parts, zero-dimensional ideals
/// Seidenberg's lemma, and everything else the intersection of the prime
/// components.
pub fn radical(i: &Ideal) -> Result<Ideal> {
    if i.is_zero() || i.is_unit() {
        return Ok(i.simplified());
    }
    let r = i.ring();
    let gb = i.canonical();
    if gb.len() == 1 {
        return Ok(Ideal::from_polys(r, vec![factor::squarefree_part(&gb[0])]).simplified());
    }
    if let Some(used) = zero_dim_vars(i) {
        return Ok(seidenberg(i, &used));
    }
    let comps = decompose::components(i)?;
    intersect_all(r, &comps)
}

/// Univariate eliminant of a zero-dimensional ideal in variable `v`.
pub(crate) fn eliminant(i: &Ideal, v: usize) -> Poly {
    let others: Vec<usize> = (0..i.ring().ngens()).filter(|&u| u != v).collect();
    i.groebner_basis(&MonomialOrder::Eliminate(others.clone()))
        .into_iter()
        .find(|g| others.iter().all(|&u| !g.uses_var(u)))
        .expect("zero-dimensional ideal has an eliminant in every variable")
}

/// The variables occurring in the reduced basis of `I`, provided `I` is
/// zero-dimensional as an ideal of the polynomial ring in just those.
pub(crate) fn zero_dim_vars(i: &Ideal) -> Option<Vec<usize>> {
    let used: Vec<usize> = i
        .canonical()
        .iter()
        .flat_map(|g| g.used_vars())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    (i.dimension() == (i.ring().ngens() - used.len()) as i64).then_some(used)
}

fn seidenberg(i: &Ideal, used: &[usize]) -> Ideal {
    let mut extra = Vec::new();
    for &v in used {
        let p = eliminant(i, v);
        let s = factor::squarefree_part(&p);
        if s.len() != p.len() || s.degree_in(v) != p.degree_in(v) {
            extra.push(s);
        }
    }
    i.add_polys(&extra).simplified()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ring() -> Ring {
        Ring::new(&["c1", "c2"], &["x", "y"]).unwrap()
    }

    fn id(r: &Ring, g: &[&str]) -> Ideal {
        Ideal::parse(r, g).unwrap()
    }

    fn p(r: &Ring, s: &str) -> Poly {
        parse_poly(r, s).unwrap()
    }

    /// Saturation by iterated quotients until the chain stabilizes.
    fn saturate_by_quotients(i: &Ideal, f: &Poly) -> Ideal {
        let mut cur = i.clone();
        loop {
            let next = quotient(&cur, f).unwrap();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    #[test]
    fn saturation_examples() {
        let r = ring();
        let x = p(&r, "x");
        let i = id(&r, &["c2*x^2 + c2*x*y + c1"]);
        assert_eq!(saturate(&i, &x).unwrap(), i);
        let i = id(&r, &["c2*x^2 + c2*x*y", "c1"]);
        let s = saturate(&i, &x).unwrap();
        assert_eq!(s, id(&r, &["c2*(x+y)", "c1"]));
        assert_eq!(s, saturate_by_quotients(&i, &x));
        let i = id(&r, &["x"]);
        assert_eq!(saturate(&i, &p(&r, "y")).unwrap(), i);
        assert!(saturate(&i, &r.zero()).is_err());
    }

    #[test]
    fn quotient_examples() {
        let r = ring();
        assert_eq!(
            quotient(&id(&r, &["x^2"]), &p(&r, "x")).unwrap(),
            id(&r, &["x"])
        );
        assert_eq!(
            quotient(&id(&r, &["x*y", "y^2"]), &p(&r, "y")).unwrap(),
            id(&r, &["x", "y"])
        );
        assert_eq!(
            quotient(&id(&r, &["x"]), &p(&r, "y")).unwrap(),
            id(&r, &["x"])
        );
    }

    #[test]
    fn intersection_examples() {
        let r = ring();
        assert_eq!(
            intersect(&id(&r, &["x"]), &id(&r, &["y"])).unwrap(),
            id(&r, &["x*y"])
        );
        assert_eq!(
            intersect(&id(&r, &["x"]), &id(&r, &["x"])).unwrap(),
            id(&r, &["x"])
        );
        let k = intersect(&id(&r, &["c1", "x"]), &id(&r, &["c2", "x"])).unwrap();
        assert_eq!(k, id(&r, &["x", "c1*c2"]));
    }

    #[test]
    fn radical_examples() {
        let r = ring();
        assert_eq!(radical(&id(&r, &["c1^2"])).unwrap(), id(&r, &["c1"]));
        assert_eq!(
            radical(&id(&r, &["c1^2", "c2"])).unwrap(),
            id(&r, &["c1", "c2"])
        );
        let f = id(&r, &["c1*c2*(c1-c2-1)"]);
        assert_eq!(radical(&f).unwrap(), f);
        let i = id(&r, &["x^2", "x*y^3", "y^4 - 2*y^2 + 1"]);
        let rad = radical(&i).unwrap();
        assert_eq!(rad, id(&r, &["x", "y^2 - 1"]));
    }

    #[test]
    fn radical_membership() {
        let r = ring();
        assert!(radical_member(&p(&r, "x"), &id(&r, &["x^2"])));
        assert!(!radical_member(&p(&r, "c1"), &id(&r, &["c1*c2"])));
        assert!(radical_member(
            &p(&r, "x+y"),
            &id(&r, &["(x+y)^3", "x*(x+y)"])
        ));
        assert!(same_locus(&id(&r, &["c1^2"]), &id(&r, &["c1"])).unwrap());
        assert!(!same_locus(&id(&r, &["c1"]), &id(&r, &["c2"])).unwrap());
        assert!(same_locus(&id(&r, &["c1", "c2"]), &id(&r, &["c1+c2", "c1-c2"])).unwrap());
    }
}
