//! Buchberger's algorithm over Q with integer-primitive arithmetic, and the
//! [`Ideal`] type that caches reduced bases per monomial order.
//!
//! Elements can optionally carry a *companion*: a polynomial of the input
//! ideal that agrees with the element modulo a set of side relations. This is
//! what makes the comprehensive bases built in [`crate::cgb`] faithful.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::order::{MonomialOrder, TermOrder};
use crate::parse::parse_poly;
use crate::poly::{exp_divides, exp_lcm, exp_sub, Exp, Poly};
use crate::ring::Ring;

type ITerm = (Exp, BigInt);

/// Polynomial with terms sorted by a fixed term order, largest first.
#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<ITerm>,
    comp: Option<Poly>,
    sugar: u32,
    mask: u64,
}

fn divmask(e: &[u32]) -> u64 {
    let mut m = 0u64;
    for (i, &k) in e.iter().enumerate() {
        if k > 0 {
            m |= 1 << (i % 64);
        }
    }
    m
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl GPoly {
    fn from_poly(f: &Poly, ord: &TermOrder, comp: Option<Poly>) -> GPoly {
        let mut den = BigInt::one();
        for (_, c) in f.terms() {
            den = den.lcm(c.denom());
        }
        let mut terms: Vec<ITerm> = f
            .terms()
            .iter()
            .map(|(e, c)| {
                (
                    e.clone(),
                    (c * BigRational::from_integer(den.clone())).to_integer(),
                )
            })
            .collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let comp = comp.map(|p| p.scale(&BigRational::from_integer(den)));
        let sugar = terms.iter().map(|(e, _)| degree(e)).max().unwrap_or(0);
        let mut g = GPoly {
            mask: terms.first().map_or(0, |t| divmask(&t.0)),
            terms,
            comp,
            sugar,
        };
        g.make_primitive();
        g
    }

    fn to_poly(&self, nvars: usize) -> Poly {
        Poly::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone()))),
        )
    }

    fn lm(&self) -> &Exp {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn refresh_mask(&mut self) {
        self.mask = self.terms.first().map_or(0, |t| divmask(&t.0));
    }

    /// Divides by the integer content (sign-normalized); returns the divisor.
    fn make_primitive(&mut self) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::one();
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if g.is_one() {
            return g;
        }
        for (_, c) in self.terms.iter_mut() {
            *c = &*c / &g;
        }
        if let Some(p) = self.comp.as_mut() {
            *p = p.scale(&BigRational::from_integer(g.clone()).recip());
        }
        g
    }
}

/// `a*f - b*m*g` with `m` a monomial shift, merging sorted term lists.
fn combine(
    ord: &TermOrder,
    f: &[ITerm],
    a: &BigInt,
    g: &[ITerm],
    b: &BigInt,
    shift: &[u32],
) -> Vec<ITerm> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |t: &ITerm| -> Exp { t.0.iter().zip(shift).map(|(x, y)| x + y).collect() };
    let mut gj: Option<Exp> = g.first().map(shifted);
    while i < f.len() || j < g.len() {
        let o = match (i < f.len(), &gj) {
            (true, Some(ge)) => ord.cmp(&f[i].0, ge),
            (true, None) => Ordering::Greater,
            (false, _) => Ordering::Less,
        };
        match o {
            Ordering::Greater => {
                let c = if a.is_one() {
                    f[i].1.clone()
                } else {
                    &f[i].1 * a
                };
                out.push((f[i].0.clone(), c));
                i += 1;
            }
            Ordering::Less => {
                let ge = gj.take().expect("g term");
                out.push((ge, -(&g[j].1 * b)));
                j += 1;
                gj = g.get(j).map(shifted);
            }
            Ordering::Equal => {
                let c = &f[i].1 * a - &g[j].1 * b;
                let ge = gj.take().expect("g term");
                if !c.is_zero() {
                    out.push((ge, c));
                }
                i += 1;
                j += 1;
                gj = g.get(j).map(shifted);
            }
        }
    }
    out
}

fn find_reducer<'a>(basis: &'a [GPoly], e: &[u32], mask: u64) -> Option<&'a GPoly> {
    basis
        .iter()
        .find(|g| g.mask & !mask == 0 && exp_divides(g.lm(), e))
}

/// Reduces `h` modulo `basis`. With `full` the tail is reduced too. Works
/// fraction-free, so the result is a rational multiple of the true remainder;
/// that multiple is returned.
fn reduce_gpoly(h: &mut GPoly, basis: &[GPoly], ord: &TermOrder, full: bool) -> BigRational {
    let mut scale = BigRational::one();
    let mut done: Vec<ITerm> = Vec::new();
    let mut rest = std::mem::take(&mut h.terms);
    let mut steps = 0usize;
    let mut pos = 0usize;
    while let Some((e, a)) = rest.get(pos).cloned() {
        let mask = divmask(&e);
        match find_reducer(basis, &e, mask) {
            Some(g) => {
                let b = g.lc();
                let d = a.gcd(b);
                let mut mul_h = b / &d;
                let mut mul_g = &a / &d;
                if mul_h.is_negative() {
                    mul_h = -mul_h;
                    mul_g = -mul_g;
                }
                let shift = exp_sub(&e, g.lm());
                rest = combine(ord, &rest[pos..], &mul_h, &g.terms, &mul_g, &shift);
                pos = 0;
                if !mul_h.is_one() {
                    scale *= BigRational::from_integer(mul_h.clone());
                    for (_, c) in done.iter_mut() {
                        *c *= &mul_h;
                    }
                }
                if let (Some(hc), Some(gc)) = (h.comp.as_mut(), g.comp.as_ref()) {
                    let mh = BigRational::from_integer(mul_h.clone());
                    let mg = BigRational::from_integer(mul_g.clone());
                    *hc = &hc.scale(&mh) - &gc.mul_monomial(&shift, &mg);
                } else if let Some(hc) = h.comp.as_mut() {
                    *hc = hc.scale(&BigRational::from_integer(mul_h.clone()));
                }
                h.sugar = h.sugar.max(g.sugar + degree(&shift));
                steps += 1;
                if steps.is_multiple_of(16) {
                    let g = shrink_content(&mut done, &mut rest[pos..], &mut h.comp);
                    scale /= BigRational::from_integer(g);
                }
            }
            None => {
                if !full {
                    break;
                }
                done.push(rest[pos].clone());
                pos += 1;
            }
        }
    }
    done.extend(rest.drain(pos..));
    h.terms = done;
    let g = h.make_primitive();
    h.refresh_mask();
    scale / BigRational::from_integer(g)
}

/// Divides both halves of a partially reduced polynomial by their common
/// integer content.
fn shrink_content(done: &mut [ITerm], rest: &mut [ITerm], comp: &mut Option<Poly>) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in done.iter().chain(rest.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            return g;
        }
    }
    if g.is_zero() {
        return BigInt::one();
    }
    for (_, c) in done.iter_mut().chain(rest.iter_mut()) {
        *c = &*c / &g;
    }
    if let Some(p) = comp.as_mut() {
        *p = p.scale(&BigRational::from_integer(g.clone()).recip());
    }
    g
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exp,
    sugar: u32,
}

struct Engine<'a> {
    ord: &'a TermOrder,
    polys: Vec<GPoly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl Engine<'_> {
    fn coprime(a: &[u32], b: &[u32]) -> bool {
        a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
    }

    fn update(&mut self, h: usize) {
        let hl = self.polys[h].lm().clone();
        let mut c: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| {
                let gp = &self.polys[g];
                let lcm = exp_lcm(&hl, gp.lm());
                let sugar = (self.polys[h].sugar + degree(&lcm) - degree(&hl))
                    .max(gp.sugar + degree(&lcm) - degree(gp.lm()));
                Pair {
                    i: g,
                    j: h,
                    lcm,
                    sugar,
                }
            })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let gl = self.polys[p.i].lm();
            let keep = Self::coprime(&hl, gl)
                || (!c.iter().any(|q| exp_divides(&q.lcm, &p.lcm))
                    && !d.iter().any(|q| exp_divides(&q.lcm, &p.lcm)));
            if keep {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|p| !Self::coprime(&hl, self.polys[p.i].lm()))
            .collect();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(exp_divides(&hl, &p.lcm)
                && exp_lcm(polys[p.i].lm(), &hl) != p.lcm
                && exp_lcm(polys[p.j].lm(), &hl) != p.lcm)
        });
        self.pairs.extend(e);
        self.active.retain(|&g| !exp_divides(&hl, polys[g].lm()));
        self.active.push(h);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ord = self.ord;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (p, q) = (&self.pairs[k], &self.pairs[best]);
            // sugar for graded and block orders; lex blows up under it
            let better = if ord.has_lex() {
                match ord.cmp(&p.lcm, &q.lcm) {
                    Ordering::Equal => p.sugar < q.sugar,
                    o => o == Ordering::Less,
                }
            } else {
                match p.sugar.cmp(&q.sugar) {
                    Ordering::Equal => ord.cmp(&p.lcm, &q.lcm) == Ordering::Less,
                    o => o == Ordering::Less,
                }
            };
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> GPoly {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let sf = exp_sub(&p.lcm, f.lm());
        let sg = exp_sub(&p.lcm, g.lm());
        let d = f.lc().gcd(g.lc());
        let a = g.lc() / &d;
        let b = f.lc() / &d;
        let fs: Vec<ITerm> = f
            .terms
            .iter()
            .map(|(e, c)| (crate::poly::exp_add(e, &sf), c.clone()))
            .collect();
        let terms = combine(self.ord, &fs, &a, &g.terms, &b, &sg);
        let comp = match (&f.comp, &g.comp) {
            (Some(fc), Some(gc)) => Some(
                &fc.mul_monomial(&sf, &BigRational::from_integer(a))
                    - &gc.mul_monomial(&sg, &BigRational::from_integer(b)),
            ),
            _ => None,
        };
        let mut s = GPoly {
            terms,
            comp,
            sugar: p.sugar,
            mask: 0,
        };
        s.refresh_mask();
        s
    }

    fn active_basis(&self) -> Vec<GPoly> {
        self.active.iter().map(|&i| self.polys[i].clone()).collect()
    }
}

/// Core routine: reduced Gröbner basis of `gens` (with optional companions).
fn buchberger(gens: Vec<GPoly>, ord: &TermOrder) -> Vec<GPoly> {
    let mut eng = Engine {
        ord,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut input: Vec<GPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    input.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    for mut g in input {
        let basis = eng.active_basis();
        reduce_gpoly(&mut g, &basis, ord, false);
        if g.is_zero() {
            continue;
        }
        if degree(g.lm()) == 0 {
            return finalize(vec![g], ord);
        }
        eng.polys.push(g);
        let h = eng.polys.len() - 1;
        eng.update(h);
    }
    while let Some(p) = eng.select() {
        let mut s = eng.spoly(&p);
        if s.is_zero() {
            continue;
        }
        let basis = eng.active_basis();
        reduce_gpoly(&mut s, &basis, ord, false);
        if s.is_zero() {
            continue;
        }
        if degree(s.lm()) == 0 {
            return finalize(vec![s], ord);
        }
        eng.polys.push(s);
        let h = eng.polys.len() - 1;
        eng.update(h);
    }
    let basis = eng.active_basis();
    finalize(basis, ord)
}

/// Minimalizes, inter-reduces and sorts by leading monomial.
fn finalize(mut basis: Vec<GPoly>, ord: &TermOrder) -> Vec<GPoly> {
    basis.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<GPoly> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|m| exp_divides(m.lm(), g.lm())) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<GPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, g)| g.clone())
            .collect();
        let mut g = minimal[k].clone();
        let lead = g.terms.remove(0);
        let mut tail = GPoly {
            terms: std::mem::take(&mut g.terms),
            comp: None,
            sugar: g.sugar,
            mask: 0,
        };
        // Reduce the tail and keep the lead; companions follow the same moves.
        tail.refresh_mask();
        let (terms, comp) = reduce_tail(lead, tail.terms, g.comp.take(), &others, ord);
        let mut r = GPoly {
            terms,
            comp,
            sugar: g.sugar,
            mask: 0,
        };
        r.make_primitive();
        r.refresh_mask();
        out.push(r);
    }
    out
}

fn reduce_tail(
    lead: ITerm,
    tail: Vec<ITerm>,
    comp: Option<Poly>,
    basis: &[GPoly],
    ord: &TermOrder,
) -> (Vec<ITerm>, Option<Poly>) {
    let mut h = GPoly {
        terms: tail,
        comp,
        sugar: 0,
        mask: 0,
    };
    // Scale factors applied to the tail must also hit the lead coefficient.
    let mut lead_c = lead.1;
    let mut done: Vec<ITerm> = Vec::new();
    let mut rest = std::mem::take(&mut h.terms);
    let mut pos = 0usize;
    while let Some((e, a)) = rest.get(pos).cloned() {
        let mask = divmask(&e);
        match find_reducer(basis, &e, mask) {
            Some(g) => {
                let b = g.lc();
                let d = a.gcd(b);
                let mut mul_h = b / &d;
                let mut mul_g = &a / &d;
                if mul_h.is_negative() {
                    mul_h = -mul_h;
                    mul_g = -mul_g;
                }
                let shift = exp_sub(&e, g.lm());
                rest = combine(ord, &rest[pos..], &mul_h, &g.terms, &mul_g, &shift);
                pos = 0;
                if !mul_h.is_one() {
                    for (_, c) in done.iter_mut() {
                        *c *= &mul_h;
                    }
                    lead_c *= &mul_h;
                }
                if let Some(hc) = h.comp.as_mut() {
                    let mh = BigRational::from_integer(mul_h.clone());
                    *hc = match g.comp.as_ref() {
                        Some(gc) => {
                            &hc.scale(&mh)
                                - &gc
                                    .mul_monomial(&shift, &BigRational::from_integer(mul_g.clone()))
                        }
                        None => hc.scale(&mh),
                    };
                }
            }
            None => {
                done.push(rest[pos].clone());
                pos += 1;
            }
        }
    }
    let mut terms = vec![(lead.0, lead_c)];
    terms.extend(done);
    (terms, h.comp)
}

/// Reduced Gröbner basis, each element primitive over Z with positive leading
/// coefficient, sorted by increasing leading monomial.
pub fn groebner_basis_polys(ring: &Ring, gens: &[Poly], order: &MonomialOrder) -> Vec<Poly> {
    let ord = ring.compile(order);
    let n = ring.ngens();
    let grev = ring.compile(&MonomialOrder::Grevlex);
    let mut input: Vec<Poly> = gens.iter().filter(|f| !f.is_zero()).cloned().collect();
    if ord != grev && !input.is_empty() {
        // grevlex first; a zero-dimensional answer converts by linear algebra
        let g0 = buchberger(
            input
                .iter()
                .map(|f| GPoly::from_poly(f, &grev, None))
                .collect(),
            &grev,
        );
        if let Some(out) = fglm(ring, &g0, &grev, &ord) {
            return out;
        }
        input = g0.iter().map(|g| g.to_poly(n)).collect();
    }
    let g: Vec<GPoly> = input
        .iter()
        .map(|f| GPoly::from_poly(f, &ord, None))
        .collect();
    buchberger(g, &ord).iter().map(|g| g.to_poly(n)).collect()
}

const FGLM_MAX_DIM: usize = 400;

fn standard_monomials(gb: &[GPoly], n: usize) -> Option<Vec<Exp>> {
    let zero: Exp = std::iter::repeat_n(0, n).collect();
    if gb.iter().any(|g| exp_divides(g.lm(), &zero)) {
        return Some(Vec::new());
    }
    let mut seen: HashSet<Exp> = HashSet::new();
    seen.insert(zero.clone());
    let mut out = vec![zero];
    let mut k = 0;
    while k < out.len() {
        for i in 0..n {
            let mut e = out[k].clone();
            e[i] += 1;
            if seen.contains(&e) || gb.iter().any(|g| exp_divides(g.lm(), &e)) {
                continue;
            }
            seen.insert(e.clone());
            out.push(e);
            if out.len() > FGLM_MAX_DIM {
                return None;
            }
        }
        k += 1;
    }
    Some(out)
}

fn is_zero_dimensional(gb: &[GPoly], n: usize) -> bool {
    (0..n).all(|i| {
        gb.iter()
            .any(|g| g.lm()[i] > 0 && g.lm().iter().enumerate().all(|(j, &k)| j == i || k == 0))
    })
}

/// FGLM: converts a zero-dimensional reduced basis `gb` under `from` into the
/// reduced basis under `to`. None if the ideal is not zero-dimensional or the
/// quotient is too large.
fn fglm(ring: &Ring, gb: &[GPoly], from: &TermOrder, to: &TermOrder) -> Option<Vec<Poly>> {
    let n = ring.ngens();
    if gb.iter().any(|g| degree(g.lm()) == 0) {
        return Some(vec![Poly::constant(n, BigRational::one())]);
    }
    if !is_zero_dimensional(gb, n) {
        return None;
    }
    let std_mons = standard_monomials(gb, n)?;
    let dim = std_mons.len();
    let index: HashMap<Exp, usize> = std_mons
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, e)| (e, k))
        .collect();
    let zero = BigRational::zero();

    // NF(x_i * b_j) as dense vectors, filled lazily
    let mut mult: HashMap<(usize, usize), Vec<BigRational>> = HashMap::new();
    let mut times_var = |i: usize, v: &[BigRational]| -> Vec<BigRational> {
        let mut out = vec![zero.clone(); dim];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let col = mult.entry((i, j)).or_insert_with(|| {
                let mut e = std_mons[j].clone();
                e[i] += 1;
                let mut col = vec![BigRational::zero(); dim];
                if let Some(&k) = index.get(&e) {
                    col[k] = BigRational::one();
                } else {
                    let f = Poly::monomial(e, BigRational::one());
                    for (t, a) in normal_form_compiled(ring, &f, gb, from).terms() {
                        col[index[t]] = a.clone();
                    }
                }
                col
            });
            for (o, a) in out.iter_mut().zip(col.iter()) {
                if !a.is_zero() {
                    *o += c * a;
                }
            }
        }
        out
    };

    // new standard monomials with their normal forms
    let mut basis: Vec<(Exp, Vec<BigRational>)> = Vec::new();
    // echelon rows: pivot, reduced vector, combination over `basis`
    let mut rows: Vec<(usize, Vec<BigRational>, Vec<BigRational>)> = Vec::new();
    let mut leads: Vec<Exp> = Vec::new();
    let mut out: Vec<GPoly> = Vec::new();
    // candidates: monomial, and (var, basis index) it was reached from
    let one: Exp = std::iter::repeat_n(0, n).collect();
    let mut cands: Vec<(Exp, Option<(usize, usize)>)> = vec![(one, None)];
    let mut queued: HashSet<Exp> = HashSet::new();
    while !cands.is_empty() {
        let k = (0..cands.len())
            .min_by(|&a, &b| to.cmp(&cands[a].0, &cands[b].0))
            .expect("nonempty");
        let (m, from_parent) = cands.swap_remove(k);
        if leads.iter().any(|l| exp_divides(l, &m)) {
            continue;
        }
        let nf = match from_parent {
            None => {
                let mut v = vec![zero.clone(); dim];
                v[index[&m]] = BigRational::one();
                v
            }
            Some((i, j)) => times_var(i, &basis[j].1),
        };
        let mut v = nf.clone();
        let mut comb = vec![zero.clone(); basis.len() + 1];
        for (p, r, c) in &rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = &v[*p] / &r[*p];
            for (x, y) in v.iter_mut().zip(r.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in comb.iter_mut().zip(c.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => {
                // m + sum comb[j] b_j lies in the ideal
                let mut terms = vec![(m.clone(), BigRational::one())];
                for (j, c) in comb.iter().enumerate().take(basis.len()) {
                    if !c.is_zero() {
                        terms.push((basis[j].0.clone(), c.clone()));
                    }
                }
                out.push(GPoly::from_poly(&Poly::from_terms(n, terms), to, None));
                leads.push(m);
            }
            Some(p) => {
                let j = basis.len();
                comb[j] = BigRational::one();
                rows.push((p, v, comb));
                for i in 0..n {
                    let mut e = m.clone();
                    e[i] += 1;
                    if queued.insert(e.clone()) {
                        cands.push((e, Some((i, j))));
                    }
                }
                basis.push((m, nf));
            }
        }
    }
    debug_assert_eq!(basis.len(), dim);
    out.sort_by(|a, b| to.cmp(a.lm(), b.lm()));
    Some(out.iter().map(|g| g.to_poly(n)).collect())
}

/// Reduced Gröbner basis of `gens + side`, where each element `p` comes with
/// a companion `f` in the ideal generated by `gens` such that `p - f` lies in
/// the ideal generated by `side`.
///
/// Companions come from the tag ideal `t*I + (1-t)*S`: writing `p = f + s`,
/// `t*p` is congruent to `s` modulo it, so the normal form `r` of `t*p` under
/// `order` with `t` split off in front lies in `S` and `p - r` lies in `I`.
/// This also leaves `r` reduced modulo `I ∩ S`, which keeps companions small.
pub fn groebner_with_companions(
    ring: &Ring,
    gens: &[Poly],
    side: &[Poly],
    order: &MonomialOrder,
) -> Vec<(Poly, Poly)> {
    let all: Vec<Poly> = gens.iter().chain(side).cloned().collect();
    let gb = groebner_basis_polys(ring, &all, order);
    let side: Vec<&Poly> = side.iter().filter(|s| !s.is_zero()).collect();
    if side.is_empty() {
        return gb.into_iter().map(|p| (p.clone(), p)).collect();
    }
    let (ext, t) = ring.with_extra_var("t");
    let emb = ring.extra_var_embedding();
    let up = |f: &Poly| f.remap(ext.ngens(), &emb);
    let tv = ext.gen(t);
    let one_minus = &ext.one() - &tv;
    let mut tagged: Vec<Poly> = gens.iter().map(|g| &tv * &up(g)).collect();
    tagged.extend(side.iter().map(|s| &one_minus * &up(s)));
    let eo = ext.compile(order).with_leading_var(t);
    let tgb: Vec<GPoly> = buchberger(
        tagged
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| GPoly::from_poly(f, &eo, None))
            .collect(),
        &eo,
    );
    let back: Vec<Option<usize>> = (0..ext.ngens())
        .map(|i| match i.cmp(&t) {
            Ordering::Less => Some(i),
            Ordering::Equal => None,
            Ordering::Greater => Some(i - 1),
        })
        .collect();
    gb.into_iter()
        .map(|p| {
            let r = normal_form_compiled(&ext, &(&tv * &up(&p)), &tgb, &eo);
            let r = r
                .restrict(ring.ngens(), &back)
                .expect("remainder is free of t");
            let f = &p - &r;
            (p, f)
        })
        .collect()
}

/// Normal form of `f` with respect to a Gröbner basis `gb` under `order`.
pub fn normal_form(ring: &Ring, f: &Poly, gb: &[Poly], order: &MonomialOrder) -> Poly {
    let ord = ring.compile(order);
    let basis: Vec<GPoly> = gb.iter().map(|g| GPoly::from_poly(g, &ord, None)).collect();
    normal_form_compiled(ring, f, &basis, &ord)
}

fn normal_form_compiled(ring: &Ring, f: &Poly, basis: &[GPoly], ord: &TermOrder) -> Poly {
    if f.is_zero() {
        return f.clone();
    }
    // from_poly and the reduction both rescale; undo it so the map is linear
    let mut h = GPoly::from_poly(f, ord, None);
    let first = h.terms[0].1.clone();
    let lead = f
        .terms()
        .iter()
        .find(|(e, _)| *e == h.terms[0].0)
        .expect("same support")
        .1
        .clone();
    let s0 = BigRational::from_integer(first) / lead;
    let s1 = reduce_gpoly(&mut h, basis, ord, true);
    h.to_poly(ring.ngens()).scale(&(s0 * s1).recip())
}

/// True if every S-polynomial of `gb` reduces to zero.
pub fn satisfies_buchberger_criterion(ring: &Ring, gb: &[Poly], order: &MonomialOrder) -> bool {
    let ord = ring.compile(order);
    let basis: Vec<GPoly> = gb.iter().map(|g| GPoly::from_poly(g, &ord, None)).collect();
    let eng = Engine {
        ord: &ord,
        polys: basis.clone(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let lcm = exp_lcm(basis[i].lm(), basis[j].lm());
            let p = Pair {
                i,
                j,
                lcm,
                sugar: 0,
            };
            let mut s = eng.spoly(&p);
            if s.is_zero() {
                continue;
            }
            reduce_gpoly(&mut s, &basis, &ord, true);
            if !s.is_zero() {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// On-disk cache

static DISK_CACHE: OnceLock<Mutex<Option<PathBuf>>> = OnceLock::new();

/// Enables (or disables, with `None`) the on-disk Gröbner basis cache.
pub fn set_disk_cache(dir: Option<PathBuf>) {
    let cell = DISK_CACHE.get_or_init(|| Mutex::new(None));
    *cell.lock().unwrap_or_else(|e| e.into_inner()) = dir;
}

fn disk_cache_dir() -> Option<PathBuf> {
    DISK_CACHE
        .get()
        .and_then(|m| m.lock().unwrap_or_else(|e| e.into_inner()).clone())
}

fn cache_key(ring: &Ring, gens: &[Poly], order: &MonomialOrder) -> String {
    let mut h = Sha256::new();
    h.update(format!(
        "{:?}|{:?}|{:?}|",
        ring.params(),
        ring.vars(),
        order
    ));
    for g in gens {
        h.update(ring.fmt_poly(g).as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn disk_lookup(ring: &Ring, key: &str) -> Option<Vec<Poly>> {
    let dir = disk_cache_dir()?;
    let text = std::fs::read_to_string(dir.join(format!("{key}.gb"))).ok()?;
    text.lines()
        .filter(|l| !l.is_empty())
        .map(|l| parse_poly(ring, l).ok())
        .collect()
}

fn disk_store(ring: &Ring, key: &str, gb: &[Poly]) {
    let Some(dir) = disk_cache_dir() else { return };
    if std::fs::create_dir_all(&dir).is_err() {
        return;
    }
    let body: String = gb.iter().map(|g| ring.fmt_poly(g) + "\n").collect();
    let tmp = dir.join(format!("{key}.tmp{}", std::process::id()));
    if std::fs::write(&tmp, body).is_ok() {
        let _ = std::fs::rename(&tmp, dir.join(format!("{key}.gb")));
    }
}

// ---------------------------------------------------------------------------
// Ideal

struct Basis {
    polys: Vec<Poly>,
    compiled: Vec<GPoly>,
    ord: TermOrder,
}

/// Finitely generated ideal of a [`Ring`], caching reduced bases per order.
#[derive(Clone)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Poly>,
    cache: Arc<Mutex<HashMap<MonomialOrder, Arc<Basis>>>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| self.ring.fmt_poly(g)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<Poly>) -> Result<Ideal> {
        for g in &gens {
            ring.check(g)?;
        }
        Ok(Self::from_checked(ring, gens))
    }

    fn from_checked(ring: &Ring, gens: Vec<Poly>) -> Ideal {
        let mut gens: Vec<Poly> = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| ring.normalize(&g))
            .collect();
        gens.dedup();
        Ideal {
            ring: ring.clone(),
            gens,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// Ideal from generators already known to live in `ring`.
    pub fn from_polys(ring: &Ring, gens: Vec<Poly>) -> Ideal {
        debug_assert!(gens.iter().all(|g| g.nvars() == ring.ngens()));
        Self::from_checked(ring, gens)
    }

    pub fn parse<S: AsRef<str>>(ring: &Ring, gens: &[S]) -> Result<Ideal> {
        let polys = gens
            .iter()
            .map(|s| parse_poly(ring, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_checked(ring, polys))
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Self::from_checked(ring, Vec::new())
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Self::from_checked(ring, vec![ring.one()])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    fn basis(&self, order: &MonomialOrder) -> Arc<Basis> {
        if let Some(b) = self
            .cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(order)
        {
            return b.clone();
        }
        let ord = self.ring.compile(order);
        let key = disk_cache_dir().map(|_| cache_key(&self.ring, &self.gens, order));
        let polys = match key.as_deref().and_then(|k| disk_lookup(&self.ring, k)) {
            Some(p) => p,
            None => {
                let p = groebner_basis_polys(&self.ring, &self.gens, order);
                if let Some(k) = key.as_deref() {
                    disk_store(&self.ring, k, &p);
                }
                p
            }
        };
        let compiled = polys
            .iter()
            .map(|g| GPoly::from_poly(g, &ord, None))
            .collect();
        let b = Arc::new(Basis {
            polys,
            compiled,
            ord,
        });
        self.cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(order.clone(), b.clone());
        b
    }

    /// Reduced Gröbner basis under `order`.
    pub fn groebner_basis(&self, order: &MonomialOrder) -> Vec<Poly> {
        self.basis(order).polys.clone()
    }

    /// Reduced Gröbner basis under the default order; the canonical
    /// generating set used for printing and equality.
    pub fn canonical(&self) -> Vec<Poly> {
        let mut g = self.groebner_basis(&MonomialOrder::Grevlex);
        let ord = self.ring.default_order();
        g.sort_by(|a, b| {
            let la = &crate::ring::leading_term(a, &ord).expect("nonzero").0;
            let lb = &crate::ring::leading_term(b, &ord).expect("nonzero").0;
            ord.cmp(lb, la)
        });
        g.into_iter().map(|p| self.ring.normalize(&p)).collect()
    }

    /// Same ideal with its generators replaced by the canonical basis.
    pub fn simplified(&self) -> Ideal {
        let gens = self.canonical();
        let out = Ideal {
            ring: self.ring.clone(),
            gens,
            cache: Arc::new(Mutex::new(HashMap::new())),
        };
        if let Some(b) = self
            .cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(&MonomialOrder::Grevlex)
        {
            out.cache
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .insert(MonomialOrder::Grevlex, b.clone());
        }
        out
    }

    pub fn normal_form(&self, f: &Poly, order: &MonomialOrder) -> Poly {
        let b = self.basis(order);
        normal_form_compiled(&self.ring, f, &b.compiled, &b.ord)
    }

    pub fn is_unit(&self) -> bool {
        if self.gens.iter().any(|g| g.is_constant()) {
            return true;
        }
        let b = self.basis(&MonomialOrder::Grevlex);
        b.polys.len() == 1 && b.polys[0].is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Ideal membership by reduction to zero.
    pub fn contains(&self, f: &Poly) -> bool {
        if f.is_zero() {
            return true;
        }
        if self.gens.iter().any(|g| g.is_constant()) {
            return true;
        }
        self.normal_form(f, &MonomialOrder::Grevlex).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_ideal(&self, other: &Ideal) -> bool {
        self.ring == other.ring && self.canonical() == other.canonical()
    }

    pub fn check_same_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring.names(),
                other.ring.names()
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same_ring(other)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ok(Self::from_checked(&self.ring, g))
    }

    pub fn add_polys(&self, extra: &[Poly]) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(extra.iter().cloned());
        Self::from_checked(&self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same_ring(other)?;
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a * b);
            }
        }
        Ok(Self::from_checked(&self.ring, g))
    }

    /// Generators of the elimination ideal `I ∩ Q[vars not in elim]`, kept in
    /// this ring.
    pub fn eliminate(&self, elim: &[usize]) -> Vec<Poly> {
        if elim.is_empty() {
            return self.gens.clone();
        }
        let order = MonomialOrder::Eliminate(elim.to_vec());
        self.groebner_basis(&order)
            .into_iter()
            .filter(|g| elim.iter().all(|&v| !g.uses_var(v)))
            .collect()
    }

    /// `I ∩ Q[c]` as an ideal of the parameter ring.
    pub fn eliminate_to_params(&self) -> Ideal {
        let pr = self.ring.parameter_ring();
        let gb = self.groebner_basis(&MonomialOrder::EliminateX);
        let gens = gb
            .iter()
            .filter(|g| self.ring.is_param_only(g))
            .map(|g| self.ring.to_params(g).expect("x-free"))
            .collect();
        Ideal::from_checked(&pr, gens)
    }

    /// Extends an ideal of the parameter ring of `ring` to `ring`.
    pub fn lift_from_params(ring: &Ring, c: &Ideal) -> Ideal {
        let gens = c.gens.iter().map(|g| ring.lift_params(g)).collect();
        Ideal::from_checked(ring, gens)
    }

    /// Krull dimension of the quotient ring (`-1` for the unit ideal).
    pub fn dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let n = self.ring.ngens();
        let ord = self.ring.default_order();
        let leads: Vec<Exp> = self
            .groebner_basis(&MonomialOrder::Grevlex)
            .iter()
            .map(|g| {
                crate::ring::leading_term(g, &ord)
                    .expect("nonzero")
                    .0
                    .clone()
            })
            .collect();
        let supports: Vec<u64> = leads.iter().map(|e| divmask(e)).collect();
        max_independent_set(n, &supports) as i64
    }

    /// Applies `map` to every generator, landing in `target`.
    pub fn map_into<F: Fn(&Poly) -> Poly>(&self, target: &Ring, map: F) -> Ideal {
        Ideal::from_checked(target, self.gens.iter().map(map).collect())
    }
}

/// Largest set of variables containing the support of no leading monomial.
fn max_independent_set(n: usize, supports: &[u64]) -> usize {
    assert!(n < 64, "too many variables for dimension computation");
    fn rec(v: usize, n: usize, chosen: u64, size: usize, supports: &[u64], best: &mut usize) {
        if size + (n - v) <= *best {
            return;
        }
        if v == n {
            *best = size;
            return;
        }
        let with = chosen | (1 << v);
        if supports.iter().all(|s| s & !with != 0) {
            rec(v + 1, n, with, size + 1, supports, best);
        }
        rec(v + 1, n, chosen, size, supports, best);
    }
    let mut best = 0;
    rec(0, n, 0, 0, supports, &mut best);
    best
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.same_ideal(other)
    }
}
