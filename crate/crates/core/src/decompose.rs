//! Prime components of the radical of an ideal, by a splitting ladder:
//! factor generators, eliminate a variable occurring linearly, and split
//! zero-dimensional ideals along factored eliminants.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config;
use crate::error::{Error, Result};
use crate::factor;
use crate::groebner::Ideal;
use crate::ideal_ops;
use crate::order::MonomialOrder;
use crate::poly::{exp_add, exp_divides, exp_zero, Exp, Poly};
use crate::ring::leading_term;

const MAX_STANDARD_MONOMIALS: usize = 20_000;

/// Minimal primes of `√I`, canonically sorted; the unit ideal has none.
pub fn components(i: &Ideal) -> Result<Vec<Ideal>> {
    let cap = config::current().decompose_depth;
    let mut raw = Vec::new();
    split(i, 0, cap, &mut raw)?;
    Ok(minimalize(raw))
}

fn cap_error(limit: usize) -> Error {
    Error::CapExceeded {
        cap: "decomposition depth",
        limit,
        flag: "--decompose-depth",
    }
}

fn split(i: &Ideal, depth: usize, cap: usize, out: &mut Vec<Ideal>) -> Result<()> {
    if i.is_unit() {
        return Ok(());
    }
    if i.is_zero() {
        out.push(i.clone());
        return Ok(());
    }
    if depth > cap {
        return Err(cap_error(cap));
    }
    let r = i.ring();
    let gb = i.canonical();

    // (a) a generator that factors
    for g in &gb {
        let fs = factor::factor(g)?;
        if fs.len() > 1 || fs[0].1 > 1 {
            for (p, _) in fs {
                split(&i.add_polys(&[p]), depth + 1, cap, out)?;
            }
            return Ok(());
        }
    }
    if gb.len() == 1 {
        out.push(i.simplified());
        return Ok(());
    }

    // (b) an element linear in some variable
    let mut best: Option<(usize, usize, Poly, Poly)> = None;
    for (k, g) in gb.iter().enumerate() {
        for v in g.used_vars() {
            if g.degree_in(v) != 1 {
                continue;
            }
            let cs = g.univariate_coeffs(v);
            let a = cs[1].clone();
            let better = match &best {
                None => true,
                Some((_, _, a0, _)) => {
                    let key = |a: &Poly| (!a.is_constant(), a.total_degree(), a.len());
                    key(&a) < key(a0)
                }
            };
            if better {
                best = Some((k, v, a, cs[0].clone()));
            }
        }
    }
    if let Some((k, v, a, b)) = best {
        let g = &gb[k];
        if let Some(ac) = a.constant_value() {
            let h = b.scale(&(-ac.recip()));
            let rest: Vec<Poly> = gb
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, f)| f.substitute_poly(v, &h))
                .collect();
            let mut sub = Vec::new();
            split(&Ideal::from_polys(r, rest), depth + 1, cap, &mut sub)?;
            for q in sub {
                out.push(q.add_polys(std::slice::from_ref(g)).simplified());
            }
            return Ok(());
        }
        // √I = √(I + (a)) ∩ √(I : a^∞); components of the saturation are
        // lifted from its v-free elimination ideal.
        split(&i.add_polys(std::slice::from_ref(&a)), depth + 1, cap, out)?;
        let sat = ideal_ops::saturate(i, &a)?;
        if sat.is_unit() {
            return Ok(());
        }
        let elim = Ideal::from_polys(r, sat.eliminate(&[v]));
        let mut sub = Vec::new();
        split(&elim, depth + 1, cap, &mut sub)?;
        for q in sub {
            let lifted = ideal_ops::saturate(&q.add_polys(std::slice::from_ref(g)), &a)?;
            if !lifted.is_unit() {
                out.push(lifted);
            }
        }
        return Ok(());
    }

    // (c) zero-dimensional in the variables that occur
    if let Some(used) = ideal_ops::zero_dim_vars(i) {
        return split_zero_dim(i, &used, depth, cap, out);
    }
    Err(Error::DecompositionIncomplete(format!(
        "no splitting step applies to {i}"
    )))
}

fn split_zero_dim(
    i: &Ideal,
    used: &[usize],
    depth: usize,
    cap: usize,
    out: &mut Vec<Ideal>,
) -> Result<()> {
    let r = i.ring();
    for &v in used {
        let p = ideal_ops::eliminant(i, v);
        let fs = factor::factor(&p)?;
        if fs.len() > 1 {
            for (q, _) in fs {
                split(&i.add_polys(&[q]), depth + 1, cap, out)?;
            }
            return Ok(());
        }
    }
    let rad = ideal_ops::radical(i)?;
    let n = vdim(&rad, used)?;
    // shape lemma: a variable whose eliminant has full degree generates
    for &v in used {
        let p = ideal_ops::eliminant(&rad, v);
        if p.degree_in(v) as usize == n {
            out.push(rad);
            return Ok(());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config::current().seed);
    for _ in 0..5 {
        let mut l = r.zero();
        for &v in used {
            let c: i64 = rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 };
            l = &l + &r.gen(v).scale(&crate::poly::rat(c));
        }
        let (ext, t) = r.with_extra_var("t");
        let emb = r.extra_var_embedding();
        let mut gens: Vec<Poly> = rad
            .gens()
            .iter()
            .map(|g| g.remap(ext.ngens(), &emb))
            .collect();
        gens.push(&ext.var(0) - &l.remap(ext.ngens(), &emb));
        let others: Vec<usize> = (0..ext.ngens()).filter(|&u| u != t).collect();
        let e = Ideal::from_polys(&ext, gens);
        let m = e
            .groebner_basis(&MonomialOrder::Eliminate(others.clone()))
            .into_iter()
            .find(|g| others.iter().all(|&u| !g.uses_var(u)))
            .expect("zero-dimensional");
        let fs = factor::factor(&m)?;
        if fs.len() > 1 {
            for (q, _) in fs {
                let qt = q.substitute_poly(t, &l.remap(ext.ngens(), &emb));
                let back: Vec<Option<usize>> = (0..ext.ngens())
                    .map(|u| match u.cmp(&t) {
                        std::cmp::Ordering::Less => Some(u),
                        std::cmp::Ordering::Equal => None,
                        std::cmp::Ordering::Greater => Some(u - 1),
                    })
                    .collect();
                let qr = qt.restrict(r.ngens(), &back).expect("t substituted");
                split(&rad.add_polys(&[qr]), depth + 1, cap, out)?;
            }
            return Ok(());
        }
        if m.degree_in(t) as usize == n {
            out.push(rad);
            return Ok(());
        }
    }
    Err(Error::DecompositionIncomplete(format!(
        "could not find a primitive element for {i}"
    )))
}

/// Number of standard monomials in the variables `used` of an ideal that is
/// zero-dimensional in them.
pub fn vdim(i: &Ideal, used: &[usize]) -> Result<usize> {
    let r = i.ring();
    let n = r.ngens();
    let ord = r.default_order();
    let leads: Vec<Exp> = i
        .groebner_basis(&MonomialOrder::Grevlex)
        .iter()
        .map(|g| leading_term(g, &ord).expect("nonzero").0.clone())
        .collect();
    let standard = |e: &Exp| !leads.iter().any(|l| exp_divides(l, e));
    let mut seen: BTreeSet<Exp> = BTreeSet::new();
    let mut stack = vec![exp_zero(n)];
    if !standard(&stack[0]) {
        return Ok(0);
    }
    seen.insert(stack[0].clone());
    while let Some(e) = stack.pop() {
        for &v in used {
            let mut unit = exp_zero(n);
            unit[v] = 1;
            let f = exp_add(&e, &unit);
            if standard(&f) && seen.insert(f.clone()) {
                if seen.len() > MAX_STANDARD_MONOMIALS {
                    return Err(Error::DecompositionIncomplete(
                        "quotient too large to analyse".into(),
                    ));
                }
                stack.push(f);
            }
        }
    }
    Ok(seen.len())
}

/// Drops duplicates and components containing another one, then sorts.
fn minimalize(raw: Vec<Ideal>) -> Vec<Ideal> {
    let raw: Vec<Ideal> = raw.into_iter().map(|p| p.simplified()).collect();
    let mut keep: Vec<Ideal> = Vec::new();
    for (k, p) in raw.iter().enumerate() {
        let redundant = raw
            .iter()
            .enumerate()
            .any(|(j, q)| j != k && p.contains_ideal(q) && (!q.contains_ideal(p) || j < k));
        if !redundant {
            keep.push(p.clone());
        }
    }
    keep.sort_by_key(|p| p.to_string());
    keep
}
