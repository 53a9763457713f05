//! Comprehensive Gröbner bases.
//!
//! A Gröbner basis of `F + E` is computed under an order ranking every
//! x-monomial above the parameters; its parameter-free part describes the
//! branch, and the leading x-coefficients of a minimal subset are the
//! conditions under which the basis stops specializing well. Each such
//! coefficient spawns a branch with that coefficient added to `E`. Every
//! basis element is replaced by a companion lying in the input ideal that
//! agrees with it on its branch, so the union over all branches is a single
//! faithful comprehensive basis.

use std::collections::HashSet;

use serde::Serialize;

use crate::config;
use crate::error::{Error, Result};
use crate::groebner::{groebner_with_companions, Ideal};
use crate::order::{MonomialOrder, TermOrder};
use crate::poly::{exp_divides, Exp, Poly};
use crate::ring::{leading_term, Ring};

#[derive(Clone, Debug, Serialize)]
pub struct BranchRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    /// Parameter equations defining the branch (reduced basis).
    pub equations: Vec<String>,
    /// Leading coefficients whose non-vanishing makes this branch's basis
    /// specialize to a Gröbner basis.
    pub nonzero: Vec<String>,
    /// The branch has unit fibers everywhere.
    pub unit: bool,
    /// Minimal generators of the fiber initial ideal (exponents of the
    /// x-block) off the vanishing locus of `nonzero`.
    pub initial: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct ComprehensiveBasis {
    pub ring: Ring,
    pub order: MonomialOrder,
    pub polys: Vec<Poly>,
    pub branches: Vec<BranchRecord>,
}

impl ComprehensiveBasis {
    /// Every parameter polynomial whose vanishing starts a branch: the
    /// branch equations together with the recorded leading coefficients.
    pub fn branch_conditions(&self) -> Vec<Vec<Poly>> {
        self.branches.iter().map(|b| self.stratum(b).0).collect()
    }

    /// Equations and non-vanishing conditions of a branch, as polynomials.
    pub fn stratum(&self, b: &BranchRecord) -> (Vec<Poly>, Vec<Poly>) {
        let parse = |v: &[String]| -> Vec<Poly> {
            v.iter()
                .map(|s| crate::parse::parse_poly(&self.ring, s).expect("printed by us"))
                .collect()
        };
        (parse(&b.equations), parse(&b.nonzero))
    }
}

fn check_order(order: &MonomialOrder) -> Result<()> {
    match order {
        MonomialOrder::EliminateX | MonomialOrder::Lex => Ok(()),
        other => Err(Error::InvalidArgument(format!(
            "comprehensive bases need an order ranking variables above parameters, got {other:?}"
        ))),
    }
}

/// Leading monomial restricted to the x-block, and its coefficient in Q[c].
fn x_leading(ring: &Ring, ord: &TermOrder, g: &Poly) -> (Exp, Poly) {
    let k = ring.nparams();
    let lead = &leading_term(g, ord).expect("nonzero").0;
    let lx: Exp = lead[k..].iter().copied().collect();
    let coeff = Poly::from_terms(
        g.nvars(),
        g.terms()
            .iter()
            .filter(|(e, _)| e[k..] == lx[..])
            .map(|(e, c)| {
                let mut e2 = e.clone();
                for v in &mut e2[k..] {
                    *v = 0;
                }
                (e2, c.clone())
            }),
    );
    (lx, coeff)
}

struct Builder<'a> {
    ring: &'a Ring,
    gens: &'a [Poly],
    order: &'a MonomialOrder,
    ord: TermOrder,
    cap: usize,
    seen: HashSet<Vec<String>>,
    polys: Vec<Poly>,
    branches: Vec<BranchRecord>,
}

impl Builder<'_> {
    fn branch(&mut self, side: Vec<Poly>, depth: usize, parent: Option<usize>) -> Result<()> {
        if depth > self.cap {
            return Err(Error::CapExceeded {
                cap: "CGB depth",
                limit: self.cap,
                flag: "--cgb-depth",
            });
        }
        let ring = self.ring;
        let basis = groebner_with_companions(ring, self.gens, &side, self.order);
        let id = self.branches.len();
        if basis.iter().any(|(p, _)| p.is_constant()) {
            for (p, f) in basis {
                if p.is_constant() && !f.is_zero() {
                    self.polys.push(f);
                }
            }
            self.branches.push(BranchRecord {
                id,
                parent,
                depth,
                equations: side.iter().map(|p| ring.fmt_poly(p)).collect(),
                nonzero: Vec::new(),
                unit: true,
                initial: Vec::new(),
            });
            return Ok(());
        }
        let (gc, gr): (Vec<_>, Vec<_>) =
            basis.into_iter().partition(|(p, _)| ring.is_param_only(p));
        for (_, f) in gc.iter().chain(gr.iter()) {
            if !f.is_zero() {
                self.polys.push(f.clone());
            }
        }
        let leads: Vec<(Exp, Poly)> = gr
            .iter()
            .map(|(p, _)| x_leading(ring, &self.ord, p))
            .collect();
        let mut hs: Vec<Poly> = Vec::new();
        let mut initial: Vec<Vec<u32>> = Vec::new();
        for (i, (lx, h)) in leads.iter().enumerate() {
            let dominated = leads
                .iter()
                .enumerate()
                .any(|(j, (ly, _))| j != i && exp_divides(ly, lx) && (ly != lx || j < i));
            if dominated {
                continue;
            }
            initial.push(lx.to_vec());
            if h.is_constant() {
                continue;
            }
            let h = ring.normalize(h);
            if !hs.contains(&h) {
                hs.push(h);
            }
        }
        let equations: Vec<Poly> = gc.iter().map(|(p, _)| p.clone()).collect();
        self.branches.push(BranchRecord {
            id,
            parent,
            depth,
            equations: equations.iter().map(|p| ring.fmt_poly(p)).collect(),
            nonzero: hs.iter().map(|p| ring.fmt_poly(p)).collect(),
            unit: false,
            initial,
        });
        for h in hs {
            let mut next = equations.clone();
            next.push(h);
            let key: Vec<String> = Ideal::from_polys(ring, next.clone())
                .canonical()
                .iter()
                .map(|p| ring.fmt_poly(p))
                .collect();
            if !self.seen.insert(key) {
                continue;
            }
            self.branch(next, depth + 1, Some(id))?;
        }
        Ok(())
    }
}

/// Faithful comprehensive Gröbner basis of `i` under `order` (which must rank
/// the x-variables above the parameters).
pub fn comprehensive_basis(i: &Ideal, order: &MonomialOrder) -> Result<ComprehensiveBasis> {
    check_order(order)?;
    let ring = i.ring();
    let mut b = Builder {
        ring,
        gens: i.gens(),
        order,
        ord: ring.compile(order),
        cap: config::current().cgb_depth,
        seen: HashSet::new(),
        polys: Vec::new(),
        branches: Vec::new(),
    };
    b.branch(Vec::new(), 0, None)?;
    let mut polys: Vec<Poly> = b.polys.iter().map(|p| ring.normalize(p)).collect();
    polys.sort_by_key(|p| ring.fmt_poly(p));
    polys.dedup();
    Ok(ComprehensiveBasis {
        ring: ring.clone(),
        order: order.clone(),
        polys,
        branches: b.branches,
    })
}

/// Splits `f = f0 + x_v·f'` whenever `f0 ∈ J` and `f' ≠ 0`, replacing `f`
/// by `f0` and `f'`, until no element can be split. Requires `J` saturated
/// with respect to `x_v`.
pub fn normalize_for_saturation(
    b: &ComprehensiveBasis,
    j: &Ideal,
    v: usize,
) -> Result<ComprehensiveBasis> {
    let ring = j.ring();
    let xv = ring.gen(v);
    let sat = crate::ideal_ops::saturate(j, &xv)?;
    if !sat.same_ideal(j) {
        return Err(Error::Precondition(format!(
            "ideal is not saturated with respect to {}",
            ring.names()[v]
        )));
    }
    let mut queue: Vec<Poly> = b.polys.iter().rev().cloned().collect();
    let mut out: Vec<Poly> = Vec::new();
    while let Some(f) = queue.pop() {
        let (f0, f1) = split_at_var(&f, v);
        if !f1.is_zero() && j.contains(&f0) {
            if !f0.is_zero() {
                out.push(f0);
            }
            queue.push(f1);
        } else {
            out.push(f);
        }
    }
    let mut polys: Vec<Poly> = out.iter().map(|p| ring.normalize(p)).collect();
    polys.sort_by_key(|p| ring.fmt_poly(p));
    polys.dedup();
    Ok(ComprehensiveBasis {
        ring: ring.clone(),
        order: b.order.clone(),
        polys,
        branches: b.branches.clone(),
    })
}

/// `f = f0 + x_v·f'` with `f0` free of `x_v`.
pub fn split_at_var(f: &Poly, v: usize) -> (Poly, Poly) {
    let n = f.nvars();
    let mut t0 = Vec::new();
    let mut t1 = Vec::new();
    for (e, c) in f.terms() {
        if e[v] == 0 {
            t0.push((e.clone(), c.clone()));
        } else {
            let mut e2 = e.clone();
            e2[v] -= 1;
            t1.push((e2, c.clone()));
        }
    }
    (Poly::from_terms(n, t0), Poly::from_terms(n, t1))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::groebner::groebner_basis_polys;
    use crate::ring::ParamPoint;
    use num_rational::BigRational;

    /// True if the nonzero specializations of `b` at `a` form a Gröbner basis
    /// of the specialized ideal, compared through initial ideals.
    pub(crate) fn specializes_well(i: &Ideal, b: &ComprehensiveBasis, a: &ParamPoint) -> bool {
        let r = i.ring();
        let fr = r.fiber_ring();
        let order = match b.order {
            MonomialOrder::Lex => MonomialOrder::Lex,
            _ => MonomialOrder::Grevlex,
        };
        let ord = fr.compile(&order);
        let fiber: Vec<Poly> = i
            .gens()
            .iter()
            .map(|g| r.specialize(g, a).unwrap())
            .collect();
        let gb = groebner_basis_polys(&fr, &fiber, &order);
        let spec: Vec<Poly> = b
            .polys
            .iter()
            .map(|g| r.specialize(g, a).unwrap())
            .filter(|g| !g.is_zero())
            .collect();
        let fi = Ideal::from_polys(&fr, fiber);
        if !spec.iter().all(|g| fi.contains(g)) {
            return false;
        }
        let leads: Vec<Exp> = spec
            .iter()
            .map(|g| leading_term(g, &ord).unwrap().0.clone())
            .collect();
        gb.iter().all(|g| {
            let lg = &leading_term(g, &ord).unwrap().0;
            leads.iter().any(|l| exp_divides(l, lg))
        })
    }

    fn pt(v: &[i64]) -> ParamPoint {
        ParamPoint::new(
            v.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    #[test]
    fn spec_examples() {
        let r = Ring::new(&["c"], &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["c*x + y"]).unwrap();
        let b = comprehensive_basis(&i, &MonomialOrder::EliminateX).unwrap();
        for a in [0, 1, -2] {
            assert!(specializes_well(&i, &b, &pt(&[a])));
        }

        let r2 = Ring::new(&["c1", "c2"], &["x"]).unwrap();
        let i = Ideal::parse(&r2, &["x + c1", "x + c2"]).unwrap();
        let b = comprehensive_basis(&i, &MonomialOrder::EliminateX).unwrap();
        let d = crate::parse::parse_poly(&r2, "c1 - c2").unwrap();
        assert!(b.polys.iter().any(|p| *p == r2.normalize(&d)));
        for a in [[0, 0], [1, 1], [1, 2], [3, -1]] {
            assert!(specializes_well(&i, &b, &pt(&a)));
        }

        let r3 = Ring::new(&["c"], &["x"]).unwrap();
        let i = Ideal::parse(&r3, &["c*x - 1"]).unwrap();
        let b = comprehensive_basis(&i, &MonomialOrder::EliminateX).unwrap();
        for a in [0, 1] {
            assert!(specializes_well(&i, &b, &pt(&[a])));
        }
        for p in &b.polys {
            assert!(i.contains(p));
        }
    }

    #[test]
    fn branching_example() {
        let r = Ring::new(&["a", "b"], &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["a*x^2 + b*y", "b*x*y - a", "x + y^2"]).unwrap();
        let b = comprehensive_basis(&i, &MonomialOrder::EliminateX).unwrap();
        for p in &b.polys {
            assert!(i.contains(p));
        }
        for a in [[0, 0], [0, 1], [1, 0], [1, 1], [2, -3], [-1, 1]] {
            assert!(specializes_well(&i, &b, &pt(&a)), "{a:?}");
        }
    }

    /// Random points plus points on every branch locus the construction
    /// produced.
    pub(crate) fn sample_points(
        b: &ComprehensiveBasis,
        seed: u64,
        count: usize,
    ) -> Vec<ParamPoint> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let r = &b.ring;
        let pr = r.parameter_ring();
        let mut pts: Vec<ParamPoint> = Vec::new();
        for eqs in b.branch_conditions() {
            let c = Ideal::from_polys(&pr, eqs.iter().map(|e| r.to_params(e).unwrap()).collect());
            if let Ok(found) = crate::sample::points_on(&c, 3, &mut rng) {
                pts.extend(found.into_iter().map(ParamPoint::new));
            }
        }
        let rest = count.saturating_sub(pts.len());
        pts.extend(
            crate::sample::random_points(r.nparams(), rest, 4, &mut rng)
                .into_iter()
                .map(ParamPoint::new),
        );
        pts
    }

    #[test]
    fn soundness_on_branch_loci() {
        let cases: &[(&[&str], &[&str], &[&str])] = &[
            (
                &["a", "b"],
                &["x", "y"],
                &["a*x^2 + b*y", "b*x*y - a", "x + y^2"],
            ),
            (&["c1", "c2"], &["x", "y"], &["c2*x^2 + c2*x*y + c1"]),
            (
                &["c1", "c2"],
                &["x0", "x", "y"],
                &["c1*x^2 + c2*x0*y", "(c1 - c2)*x*y + x0^2"],
            ),
            (
                &["c"],
                &["x", "y", "z"],
                &["x*y - c*z^2", "c*x - y", "x^2 - z"],
            ),
        ];
        for (ps, xs, gs) in cases {
            let r = Ring::new(ps, xs).unwrap();
            let i = Ideal::parse(&r, gs).unwrap();
            let b = comprehensive_basis(&i, &MonomialOrder::EliminateX).unwrap();
            let pts = sample_points(&b, 7, 25);
            assert!(pts.len() >= 25);
            for a in &pts {
                assert!(specializes_well(&i, &b, a), "{gs:?} at {:?}", a.coords);
            }
        }
    }

    #[test]
    fn rejects_mixed_orders() {
        let r = Ring::new(&["c"], &["x"]).unwrap();
        let i = Ideal::parse(&r, &["c*x"]).unwrap();
        assert!(comprehensive_basis(&i, &MonomialOrder::Grevlex).is_err());
    }

    #[test]
    fn saturation_normalization() {
        let r = Ring::new(&["c1", "c2"], &["x", "y", "z"]).unwrap();
        let z = r.index_of("z").unwrap();
        // z*y with J = (y): splits into y
        let j = Ideal::parse(&r, &["y"]).unwrap();
        let b = ComprehensiveBasis {
            ring: r.clone(),
            order: MonomialOrder::EliminateX,
            polys: vec![crate::parse::parse_poly(&r, "z*y").unwrap()],
            branches: Vec::new(),
        };
        let nb = normalize_for_saturation(&b, &j, z).unwrap();
        assert_eq!(nb.polys, vec![crate::parse::parse_poly(&r, "y").unwrap()]);

        let b2 = ComprehensiveBasis {
            polys: vec![
                crate::parse::parse_poly(&r, "y + z*x").unwrap(),
                crate::parse::parse_poly(&r, "x").unwrap(),
            ],
            ..b.clone()
        };
        let j = Ideal::parse(&r, &["x"]).unwrap();
        let mut want = b2.polys.clone();
        want.sort_by_key(|p| r.fmt_poly(p));
        assert_eq!(normalize_for_saturation(&b2, &j, z).unwrap().polys, want);

        // (c1, x) is not saturated with respect to x
        let x = r.index_of("x").unwrap();
        let j = Ideal::parse(&r, &["c1", "x"]).unwrap();
        let b = comprehensive_basis(&j, &MonomialOrder::EliminateX).unwrap();
        assert!(normalize_for_saturation(&b, &j, x).is_err());

        let j = Ideal::parse(&r, &["c1*z"]).unwrap();
        assert!(normalize_for_saturation(&b, &j, z).is_err());
    }
}
