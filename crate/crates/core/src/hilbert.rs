//! Hilbert functions, Castelnuovo–Mumford regularity of homogeneous
//! families, and determinantal conditions on Hilbert function values.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cgb::comprehensive_basis;
use crate::config;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::ideal_ops;
use crate::order::MonomialOrder;
use crate::poly::{exp_divides, exp_zero, rat, Exp, Poly};
use crate::ring::{leading_term, Ring};

const GENERIC_TRIES: usize = 6;
const ENUM_LIMIT: usize = 4000;

fn check_homogeneous(i: &Ideal) -> Result<()> {
    let xs = i.ring().var_indices();
    for g in i.gens() {
        if !g.is_homogeneous_in(&xs) {
            return Err(Error::InvalidArgument(format!(
                "{} is not homogeneous in the variables",
                i.ring().fmt_poly(g)
            )));
        }
    }
    Ok(())
}

/// All exponent vectors of total degree `d` in `n` variables, largest first
/// in lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=d).rev() {
            cur.push(a);
            rec(n, d - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Number of degree-`d` monomials in `n` variables divisible by none of `leads`.
pub fn standard_monomial_count(leads: &[Vec<u32>], n: usize, d: u32) -> u64 {
    monomials_of_degree(n, d)
        .iter()
        .filter(|m| !leads.iter().any(|l| exp_divides(l, m)))
        .count() as u64
}

/// `dim (Q[x]/I)_d` for an ideal of a parameter-free ring, homogeneous in x.
pub fn hilbert_function(i: &Ideal, d: u32) -> Result<u64> {
    let r = i.ring();
    if r.nparams() > 0 {
        return Err(Error::InvalidArgument(
            "Hilbert functions are computed on fibers; specialize the parameters first".into(),
        ));
    }
    check_homogeneous(i)?;
    let ord = r.default_order();
    let leads: Vec<Vec<u32>> = i
        .groebner_basis(&MonomialOrder::Grevlex)
        .iter()
        .map(|g| leading_term(g, &ord).expect("nonzero").0.to_vec())
        .collect();
    Ok(standard_monomial_count(&leads, r.ngens(), d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Regularity {
    pub value: u32,
    /// Two independent generic coordinate changes produced Borel-fixed
    /// initial ideals with the same maximal generator degree.
    pub certified: bool,
}

/// Homogenizations of a comprehensive basis under an x-degree compatible
/// order. At every `a` they specialize into the homogenization of `J_a`,
/// generating it up to saturation by `x0`, and exactly for general `a`.
pub fn homogenized_family(j: &Ideal) -> Result<Ideal> {
    let r = j.ring();
    let target = r.homogenized()?;
    if j.is_unit() {
        return Ok(Ideal::unit(&target));
    }
    let b = comprehensive_basis(j, &MonomialOrder::EliminateX)?;
    let gens = b
        .polys
        .iter()
        .map(|g| r.homogenize(g))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::from_polys(&target, gens))
}

/// The maximum over all parameter values `a` of `reg(I_a)`, for an ideal
/// homogeneous in the x-variables. Fibers equal to the unit ideal are ignored.
pub fn regularity(i: &Ideal) -> Result<Regularity> {
    check_homogeneous(i)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config::current().seed ^ 0x5eed_4e67);
    let mut seen: Vec<u32> = Vec::new();
    let mut last_borel: Option<u32> = None;
    for _ in 0..GENERIC_TRIES {
        let m = random_unimodular(i.ring().nvars(), &mut rng);
        let (value, borel) = generic_initial_degree(i, &m)?;
        seen.push(value);
        if borel {
            if last_borel == Some(value) {
                return Ok(Regularity {
                    value,
                    certified: true,
                });
            }
            last_borel = Some(value);
        }
    }
    Ok(Regularity {
        value: seen.into_iter().max().unwrap_or(0),
        certified: false,
    })
}

/// `L·U` with unit triangular factors and entries in `[-5, 5]`.
fn random_unimodular<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<i64>> {
    let mut l = vec![vec![0i64; n]; n];
    let mut u = vec![vec![0i64; n]; n];
    for i in 0..n {
        l[i][i] = 1;
        u[i][i] = 1;
        for j in 0..i {
            l[i][j] = rng.gen_range(-5..=5);
            u[j][i] = rng.gen_range(-5..=5);
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| l[i][k] * u[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Applies `x_i -> sum_j m[i][j] x_j` to the x-block of `f`.
pub fn linear_change(ring: &Ring, f: &Poly, m: &[Vec<i64>]) -> Poly {
    let xs = ring.var_indices();
    let n = ring.ngens();
    let images: Vec<Poly> = xs
        .iter()
        .enumerate()
        .map(|(i, _)| {
            xs.iter().enumerate().fold(Poly::zero(n), |acc, (j, &x)| {
                &acc + &ring.gen(x).scale(&rat(m[i][j]))
            })
        })
        .collect();
    let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
    let mut out = Poly::zero(n);
    for (e, c) in f.terms() {
        let mut cpart = exp_zero(n);
        cpart[..ring.nparams()].copy_from_slice(&e[..ring.nparams()]);
        let mut t = Poly::monomial(cpart, c.clone());
        for (i, &x) in xs.iter().enumerate() {
            if e[x] > 0 {
                let p = powers
                    .entry((i, e[x]))
                    .or_insert_with(|| images[i].pow(e[x]));
                t = &t * &*p;
            }
        }
        out = &out + &t;
    }
    out
}

/// Largest minimal-generator degree of the initial ideals of the fibers after
/// the coordinate change `m`, and whether all of them are Borel-fixed.
fn generic_initial_degree(i: &Ideal, m: &[Vec<i64>]) -> Result<(u32, bool)> {
    let r = i.ring();
    let gens: Vec<Poly> = i.gens().iter().map(|g| linear_change(r, g, m)).collect();
    let t = Ideal::from_polys(r, gens);
    let b = comprehensive_basis(&t, &MonomialOrder::EliminateX)?;
    let pr = r.parameter_ring();
    let mut value = 0;
    let mut borel = true;
    for br in &b.branches {
        if br.unit {
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
        if ideal_ops::radical_member(&prod, &e) {
            continue;
        }
        let deg = br
            .initial
            .iter()
            .map(|l| l.iter().sum::<u32>())
            .max()
            .unwrap_or(0);
        value = value.max(deg);
        borel &= is_borel_fixed(&br.initial);
    }
    Ok((value, borel))
}

/// Strong stability with respect to `x_0 > x_1 > ...`: for every generator
/// `u` and `x_j | u`, each `u·x_i/x_j` with `i < j` lies in the ideal.
pub fn is_borel_fixed(gens: &[Vec<u32>]) -> bool {
    gens.iter().all(|u| {
        (0..u.len()).filter(|&j| u[j] > 0).all(|j| {
            (0..j).all(|i| {
                let mut w = u.clone();
                w[j] -= 1;
                w[i] += 1;
                gens.iter().any(|g| exp_divides(g, &w))
            })
        })
    })
}

/// Coefficient matrix of the degree-`r` multiples of the generators of a
/// family homogeneous in x. Entries live in the parameter ring.
#[derive(Clone, Debug)]
pub struct CoeffMatrix {
    /// (generator index, multiplier exponent on the x-block)
    pub rows: Vec<(usize, Vec<u32>)>,
    pub cols: Vec<Vec<u32>>,
    pub entries: Vec<Vec<Poly>>,
}

impl CoeffMatrix {
    pub fn new(j: &Ideal, r: u32) -> Result<CoeffMatrix> {
        check_homogeneous(j)?;
        let ring = j.ring();
        let k = ring.nparams();
        let n = ring.nvars();
        let pr = ring.parameter_ring();
        let cols = monomials_of_degree(n, r);
        let col_index: HashMap<&[u32], usize> = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_slice(), i))
            .collect();
        let mut rows = Vec::new();
        let mut entries = Vec::new();
        for (gi, g) in j.gens().iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let d = g.degree_in_set(&ring.var_indices()).unwrap_or(0);
            if d > r {
                continue;
            }
            for u in monomials_of_degree(n, r - d) {
                let mut row: Vec<Vec<(Exp, BigRational)>> = vec![Vec::new(); cols.len()];
                for (e, c) in g.terms() {
                    let x: Vec<u32> = e[k..].iter().zip(&u).map(|(a, b)| a + b).collect();
                    let cexp: Exp = e[..k].iter().copied().collect();
                    row[col_index[x.as_slice()]].push((cexp, c.clone()));
                }
                rows.push((gi, u));
                entries.push(
                    row.into_iter()
                        .map(|ts| Poly::from_terms(pr.ngens(), ts))
                        .collect(),
                );
            }
        }
        Ok(CoeffMatrix {
            rows,
            cols,
            entries,
        })
    }
}

/// Ideal of `Q[c]` whose zero set is `{a : dim (I_a)_r ≤ N - m}` where `N`
/// is the number of degree-`r` monomials, i.e. where the fiber Hilbert
/// function at `r` is at least `m`. With `ambient` given, entries and minors
/// are reduced modulo it and the result contains `ambient`, cutting the locus
/// out of `V(ambient)`.
pub fn minors_ideal(j: &Ideal, m: usize, r: u32, ambient: Option<&Ideal>) -> Result<Ideal> {
    let ring = j.ring();
    let pr = ring.parameter_ring();
    let cm = CoeffMatrix::new(j, r)?;
    let t = cm.cols.len() as i64 - m as i64 + 1;
    if t <= 0 {
        return Ok(Ideal::unit(&pr));
    }
    let reduce = |f: &Poly| match ambient {
        Some(c) => c.normal_form(f, &MonomialOrder::Grevlex),
        None => f.clone(),
    };
    let mut mat: Vec<Vec<Poly>> = cm
        .entries
        .iter()
        .map(|row| row.iter().map(&reduce).collect())
        .collect();
    let mut t = t as usize;
    loop {
        mat = transpose(&q_reduce(&transpose(&q_reduce(&mat))));
        if mat.is_empty() || t > mat.len().min(mat[0].len()) {
            return Ok(ambient.cloned().unwrap_or_else(|| Ideal::zero(&pr)));
        }
        if t == 1 {
            let mut gens: Vec<Poly> = mat
                .iter()
                .flatten()
                .filter(|p| !p.is_zero())
                .cloned()
                .collect();
            gens.extend(ambient.iter().flat_map(|a| a.gens().iter().cloned()));
            return Ok(Ideal::from_polys(&pr, gens).simplified());
        }
        // a nonzero constant entry lowers the minor size by one
        let pivot = mat.iter().enumerate().find_map(|(i, row)| {
            row.iter()
                .position(|p| p.is_constant() && !p.is_zero())
                .map(|j| (i, j))
        });
        let Some((pi, pj)) = pivot else {
            break;
        };
        let p = mat[pi][pj].constant_value().expect("constant");
        let inv = p.recip();
        let prow = mat[pi].clone();
        mat = mat
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pi)
            .map(|(_, row)| {
                let f = row[pj].scale(&inv);
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != pj)
                    .map(|(j, e)| reduce(&(e - &(&f * &prow[j]))))
                    .collect()
            })
            .collect();
        t -= 1;
    }
    let rows = mat.len();
    let cols = mat[0].len();
    if generic_rank(&mat) < t {
        return Ok(ambient.cloned().unwrap_or_else(|| Ideal::zero(&pr)));
    }
    let cap = config::current().minor_cols;
    // the cap bounds the monomial side; rows may be many
    if cols > cap {
        return Err(Error::CapExceeded {
            cap: "minor matrix columns",
            limit: cap,
            flag: "--minor-cols",
        });
    }
    if ambient.is_some() || binomial(rows, t).saturating_mul(binomial(cols, t)) > ENUM_LIMIT {
        // inside a locus, or too many minors: compute the same zero set by
        // splitting on pivots; minors of the Schur steps swell quickly
        let c = match ambient {
            Some(a) => ideal_ops::radical(a)?,
            None => Ideal::zero(&pr),
        };
        return rank_locus(mat, t, &c);
    }
    let mut gens: Vec<Poly> = Vec::new();
    for rs in subsets(rows, t) {
        for cs in subsets(cols, t) {
            let sub: Vec<Vec<Poly>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| mat[i][j].clone()).collect())
                .collect();
            let d = reduce(&bareiss_det(sub));
            if d.is_zero() {
                continue;
            }
            if d.is_constant() {
                return Ok(Ideal::unit(&pr));
            }
            let d = pr.normalize(&d);
            if !gens.contains(&d) {
                gens.push(d);
            }
        }
    }
    gens.extend(ambient.iter().flat_map(|a| a.gens().iter().cloned()));
    Ok(Ideal::from_polys(&pr, gens).simplified())
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Radical ideal of `{a in V(C) : rank M_a < t}` for radical `C`. Splits
/// `V(C)` into the part where a pivot entry `p` vanishes and the part where
/// it does not; on the latter the rank drops by one through the Schur
/// complement `p*M' - col*row`.
fn rank_locus(mat: Vec<Vec<Poly>>, t: usize, c: &Ideal) -> Result<Ideal> {
    if c.is_unit() || t == 0 {
        return Ok(Ideal::unit(c.ring()));
    }
    let mat: Vec<Vec<Poly>> = mat
        .iter()
        .map(|row| {
            row.iter()
                .map(|f| c.normal_form(f, &MonomialOrder::Grevlex))
                .collect()
        })
        .collect();
    let mat = transpose(&q_reduce(&transpose(&q_reduce(&mat))));
    if mat.is_empty() || t > mat.len().min(mat[0].len()) {
        return Ok(c.clone());
    }
    let (pi, pj) = mat
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, p)| (i, j, p)))
        .filter(|(_, _, p)| !p.is_zero())
        .min_by_key(|(_, _, p)| (p.total_degree(), p.terms().len()))
        .map(|(i, j, _)| (i, j))
        .expect("q_reduce leaves nonzero rows");
    let p = mat[pi][pj].clone();
    let schur: Vec<Vec<Poly>> = mat
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pi)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != pj)
                .map(|(j, e)| &(&p * e) - &(&row[pj] * &mat[pi][j]))
                .collect()
        })
        .collect();
    let off = rank_locus(schur, t - 1, c)?;
    if p.is_constant() {
        return Ok(off);
    }
    let off = ideal_ops::radical(&ideal_ops::saturate(&off, &p)?)?;
    let on = rank_locus(mat, t, &ideal_ops::radical(&c.add_polys(&[p]))?)?;
    ideal_ops::radical(&ideal_ops::intersect(&on, &off)?)
}

fn transpose(m: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// A basis of the Q-span of the rows (rows over Q[c] viewed as Q-vectors),
/// which leaves every determinantal ideal unchanged.
fn q_reduce(m: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    if m.is_empty() {
        return Vec::new();
    }
    let ncols = m[0].len();
    let nv = m[0][0].nvars();
    type Key = (usize, Exp);
    let flat = |row: &[Poly]| -> BTreeMap<Key, BigRational> {
        let mut v = BTreeMap::new();
        for (j, p) in row.iter().enumerate() {
            for (e, c) in p.terms() {
                v.insert((j, e.clone()), c.clone());
            }
        }
        v
    };
    let mut basis: Vec<BTreeMap<Key, BigRational>> = Vec::new();
    for row in m {
        let mut v = flat(row);
        for b in &basis {
            let (pk, pc) = b.iter().next().expect("nonzero");
            if let Some(c) = v.get(pk).cloned() {
                let f = c / pc;
                for (k, bc) in b {
                    let e = v.entry(k.clone()).or_insert_with(BigRational::zero);
                    *e -= &f * bc;
                    if e.is_zero() {
                        v.remove(k);
                    }
                }
            }
        }
        if v.is_empty() {
            continue;
        }
        // keep the basis in echelon form on leading keys
        let lead = v.keys().next().expect("nonzero").clone();
        let lc = v[&lead].clone();
        for val in v.values_mut() {
            *val /= &lc;
        }
        for b in basis.iter_mut() {
            if let Some(c) = b.get(&lead).cloned() {
                for (k, vc) in &v {
                    let e = b.entry(k.clone()).or_insert_with(BigRational::zero);
                    *e -= &c * vc;
                    if e.is_zero() {
                        b.remove(k);
                    }
                }
            }
        }
        basis.push(v);
    }
    basis
        .into_iter()
        .map(|v| {
            let mut row: Vec<Vec<(Exp, BigRational)>> = vec![Vec::new(); ncols];
            for ((j, e), c) in v {
                row[j].push((e, c));
            }
            row.into_iter().map(|ts| Poly::from_terms(nv, ts)).collect()
        })
        .collect()
}

/// Rank over the fraction field `Q(c)`.
fn generic_rank(m: &[Vec<Poly>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let nv = m[0][0].nvars();
    // a random evaluation gives a lower bound that is almost always exact
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a4b);
    let pt: Vec<BigRational> = (0..nv).map(|_| rat(rng.gen_range(-1000..=1000))).collect();
    let num: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|p| p.eval(&pt)).collect())
        .collect();
    let lower = rational_rank(num);
    let full = m.len().min(m[0].len());
    if lower == full {
        return lower;
    }
    bareiss_rank(m.to_vec())
}

fn rational_rank(mut a: Vec<Vec<BigRational>>) -> usize {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let piv = &top[rank];
        for row in rest {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &piv[c];
            for (x, y) in row[c..].iter_mut().zip(&piv[c..]) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free elimination; exact rank over `Q(c)`.
fn bareiss_rank(mut a: Vec<Vec<Poly>>) -> usize {
    let rows = a.len();
    let cols = a[0].len();
    let nv = a[0][0].nvars();
    let mut prev = Poly::one(nv);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &(&a[i][j] * &a[rank][c]) - &(&a[i][c] * &a[rank][j]);
                a[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = Poly::zero(nv);
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

fn bareiss_det(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    let nv = a[0][0].nvars();
    let mut prev = Poly::one(nv);
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Poly::zero(nv);
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Hilbert function at `d` of the fiber of `i` over `a`.
pub fn fiber_hilbert_function(i: &Ideal, a: &crate::ring::ParamPoint, d: u32) -> Result<u64> {
    let r = i.ring();
    let fr = r.fiber_ring();
    let gens = i
        .gens()
        .iter()
        .map(|g| r.specialize(g, a))
        .collect::<Result<Vec<_>>>()?;
    hilbert_function(&Ideal::from_polys(&fr, gens), d)
}
