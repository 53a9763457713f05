//! Rational points on varieties, for checking "general point" statements.
//!
//! Each component is sampled by fixing random integers on an independent set
//! of variables and solving the remaining zero-dimensional system through
//! rational roots of its eliminants.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::decompose;
use crate::error::{Error, Result};
use crate::factor;
use crate::groebner::Ideal;
use crate::ideal_ops;
use crate::order::MonomialOrder;
use crate::poly::{rat, Exp};
use crate::ring::leading_term;

const TRIES: usize = 40;

/// Uniformly random integer points with coordinates in `[-bound, bound]`.
pub fn random_points<R: Rng>(
    dim: usize,
    count: usize,
    bound: i64,
    rng: &mut R,
) -> Vec<Vec<BigRational>> {
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| rat(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect()
}

/// `count` rational points of `V(I)`, drawn round-robin from its components.
/// Fails if some component has no rational point within the retry budget.
pub fn points_on<R: Rng>(i: &Ideal, count: usize, rng: &mut R) -> Result<Vec<Vec<BigRational>>> {
    let comps = decompose::components(i)?;
    if comps.is_empty() {
        return Err(Error::Sampling(format!("{i} has no points")));
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        out.push(point_on_prime(&comps[k % comps.len()], rng)?);
    }
    Ok(out)
}

/// One rational point of the irreducible variety `V(P)`.
pub fn point_on_prime<R: Rng>(p: &Ideal, rng: &mut R) -> Result<Vec<BigRational>> {
    let r = p.ring();
    let n = r.ngens();
    let sets = independent_sets(p);
    for attempt in 0..TRIES {
        let free = &sets[attempt % sets.len()];
        let bound = 3 + attempt as i64;
        let mut point: Vec<Option<BigRational>> = vec![None; n];
        let mut gens: Vec<_> = p.gens().to_vec();
        for &v in free {
            let a = rat(rng.gen_range(-bound..=bound));
            gens = gens.iter().map(|g| g.substitute_value(v, &a)).collect();
            point[v] = Some(a);
        }
        if let Some(pt) = solve(Ideal::from_polys(r, gens), point, rng) {
            if p.gens().iter().all(|g| g.eval(&pt).is_zero()) {
                return Ok(pt);
            }
        }
    }
    Err(Error::Sampling(format!("no rational point found on V{p}")))
}

fn solve<R: Rng>(
    mut i: Ideal,
    mut point: Vec<Option<BigRational>>,
    rng: &mut R,
) -> Option<Vec<BigRational>> {
    loop {
        if i.is_unit() {
            return None;
        }
        let used = ideal_ops::zero_dim_vars(&i)?;
        let Some(&v) = used.first() else {
            break;
        };
        let e = ideal_ops::eliminant(&i, v);
        let roots: Vec<BigRational> = factor::factor(&e)
            .ok()?
            .into_iter()
            .filter(|(f, _)| f.degree_in(v) == 1)
            .map(|(f, _)| {
                let cs = f.univariate_coeffs(v);
                let a = cs[1].constant_value().expect("univariate");
                let b = cs[0].constant_value().expect("univariate");
                -b / a
            })
            .collect();
        if roots.is_empty() {
            return None;
        }
        let a = roots[rng.gen_range(0..roots.len())].clone();
        let gens = i.gens().iter().map(|g| g.substitute_value(v, &a)).collect();
        i = Ideal::from_polys(i.ring(), gens);
        point[v] = Some(a);
    }
    // variables that never occurred are free
    Some(
        point
            .into_iter()
            .map(|c| c.unwrap_or_else(BigRational::one))
            .collect(),
    )
}

/// All sets of `dim V(P)` variables independent modulo the leading-term
/// ideal; each is a transcendence basis.
fn independent_sets(p: &Ideal) -> Vec<Vec<usize>> {
    let r = p.ring();
    let n = r.ngens();
    let ord = r.default_order();
    let leads: Vec<Exp> = p
        .groebner_basis(&MonomialOrder::Grevlex)
        .iter()
        .map(|g| leading_term(g, &ord).expect("nonzero").0.clone())
        .collect();
    let dim = p.dimension().max(0) as usize;
    let ok = |set: &[usize]| {
        leads
            .iter()
            .all(|l| (0..n).any(|v| l[v] > 0 && !set.contains(&v)))
    };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        v: usize,
        n: usize,
        want: usize,
        cur: &mut Vec<usize>,
        ok: &dyn Fn(&[usize]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == want {
            out.push(cur.clone());
            return;
        }
        for u in v..n {
            cur.push(u);
            if ok(cur) {
                rec(u + 1, n, want, cur, ok, out);
            }
            cur.pop();
        }
    }
    rec(0, n, dim, &mut cur, &ok, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn points_lie_on_components() {
        let r = Ring::new(&["c1", "c2"], &[] as &[&str]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let i = Ideal::parse(&r, &["c2*(c1^2 - c1)", "c2^2"]).unwrap();
        let pts = points_on(&i, 10, &mut rng).unwrap();
        for p in &pts {
            assert!(i.gens().iter().all(|g| g.eval(p).is_zero()));
        }
        let i = Ideal::parse(&r, &["c1^2 - c2^3"]).unwrap();
        for p in points_on(&i, 5, &mut rng).unwrap() {
            assert!(i.gens()[0].eval(&p).is_zero());
        }
        let i = Ideal::parse(&r, &["c1^2 + 1"]).unwrap();
        assert!(points_on(&i, 1, &mut rng).is_err());
        assert!(points_on(&Ideal::unit(&r), 1, &mut rng).is_err());
    }
}
