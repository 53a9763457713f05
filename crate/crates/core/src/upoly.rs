//! Dense univariate polynomials over Z and F_p, and factorization over Z by
//! the Zassenhaus method (distinct/equal degree factorization mod p, Hensel
//! lifting, recombination by trial division).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Coefficients low to high, no trailing zeros.
pub type ZPoly = Vec<BigInt>;
type FpPoly = Vec<u64>;

fn trim_z(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn trim(p: &mut FpPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn deg(p: &[u64]) -> usize {
    p.len().saturating_sub(1)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut r: FpPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut r);
    r
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut r);
    r
}

fn fp_scale(a: &[u64], c: u64, p: u64) -> FpPoly {
    let mut r: FpPoly = a.iter().map(|&x| mulmod(x, c, p)).collect();
    trim(&mut r);
    r
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lb, p);
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mulmod(c, y, p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    fp_divrem(a, b, p).1
}

fn fp_monic(a: &[u64], p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => fp_scale(a, inv(l, p), p),
    }
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// Returns (g, s, t) with s*a + t*b = g monic.
fn fp_xgcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let l = inv(*r0.last().expect("nonzero gcd"), p);
    (
        fp_scale(&r0, l, p),
        fp_scale(&s0, l, p),
        fp_scale(&t0, l, p),
    )
}

fn fp_powmod_poly(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> FpPoly {
    let mut result = vec![1u64];
    let mut b = fp_rem(base, m, p);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = fp_rem(&fp_mul(&result, &b, p), m, p);
        }
        if i + 1 < bits {
            b = fp_rem(&fp_mul(&b, &b, p), m, p);
        }
    }
    result
}

fn fp_derivative(a: &[u64], p: u64) -> FpPoly {
    let mut r: FpPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, i as u64 % p, p))
        .collect();
    trim(&mut r);
    r
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &[u64], p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let pb = BigUint::from(p);
    let mut i = 0;
    while deg(&f) >= 2 * (i + 1) {
        i += 1;
        h = fp_powmod_poly(&h, &pb, &f, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &f, p);
        if deg(&g) > 0 {
            out.push((g.clone(), i));
            f = fp_divrem(&f, &g, p).0;
            h = fp_rem(&h, &f, p);
        }
    }
    if deg(&f) > 0 {
        let d = deg(&f);
        out.push((f, d));
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus, odd p).
fn edf(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    if deg(f) == d {
        return vec![fp_monic(f, p)];
    }
    let e: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: FpPoly = {
            let mut a: FpPoly = (0..deg(f)).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut a);
            a
        };
        if deg(&a) == 0 {
            continue;
        }
        let b = fp_sub(&fp_powmod_poly(&a, &e, f, p), &[1], p);
        let g = fp_gcd(&b, f, p);
        if deg(&g) > 0 && deg(&g) < deg(f) {
            let h = fp_divrem(f, &g, p).0;
            let mut out = edf(&g, d, p, rng);
            out.extend(edf(&h, d, p, rng));
            return out;
        }
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn to_fp(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut r: FpPoly = f
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("reduced"))
        .collect();
    trim(&mut r);
    r
}

fn z_mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim_z(&mut r);
    r
}

fn z_mod(a: &[BigInt], m: &BigInt) -> ZPoly {
    let mut r: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    trim_z(&mut r);
    r
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    let mut r: ZPoly = a
        .iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect();
    trim_z(&mut r);
    r
}

pub fn content(f: &[BigInt]) -> BigInt {
    f.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

pub fn primitive(f: &[BigInt]) -> ZPoly {
    let c = content(f);
    if c.is_zero() {
        return Vec::new();
    }
    let sign = if f.last().is_some_and(|l| l.is_negative()) {
        -c
    } else {
        c
    };
    f.iter().map(|x| x / &sign).collect()
}

/// Exact division over Z; `None` if `b` does not divide `a`.
pub fn z_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let mut r = a.to_vec();
    trim_z(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < b.len() {
        return None;
    }
    let lb = b.last().expect("nonzero divisor");
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let (c, rem) = r.last().unwrap().div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        q[shift] = c;
        trim_z(&mut r);
    }
    if r.is_empty() {
        trim_z(&mut q);
        Some(q)
    } else {
        None
    }
}

/// One Hensel step family: lifts `f ≡ g*h (mod p)` with `g` monic to
/// `f ≡ G*H (mod p^k)`, `G` monic.
fn hensel_lift(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (_, _, t) = fp_xgcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz: ZPoly = g.iter().map(|&c| BigInt::from(c)).collect();
    let mut hz: ZPoly = h.iter().map(|&c| BigInt::from(c)).collect();
    let mut pj = pb.clone();
    for _ in 1..k {
        let prod = z_mul(&gz, &hz);
        let n = f.len().max(prod.len());
        let diff: ZPoly = (0..n)
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let e: ZPoly = diff.iter().map(|c| c / &pj).collect();
        let e_p = to_fp(&e, p);
        // dg = t*e mod g ; dh = (e - h*dg)/g
        let dg = fp_rem(&fp_mul(&t, &e_p, p), g, p);
        let dh = fp_divrem(&fp_sub(&e_p, &fp_mul(h, &dg, p), p), g, p).0;
        let lift = |base: &mut ZPoly, delta: &FpPoly| {
            if base.len() < delta.len() {
                base.resize(delta.len(), BigInt::zero());
            }
            for (i, &c) in delta.iter().enumerate() {
                base[i] += &pj * BigInt::from(c);
            }
        };
        lift(&mut gz, &dg);
        lift(&mut hz, &dh);
        pj *= &pb;
        gz = z_mod(&gz, &pj);
        hz = z_mod(&hz, &pj);
    }
    (gz, hz)
}

/// Irreducible factors over Z of a primitive squarefree polynomial of
/// positive degree, each primitive with positive leading coefficient.
pub fn factor_squarefree(f: &[BigInt], seed: u64) -> Result<Vec<ZPoly>> {
    let f = primitive(f);
    let d = f.len() - 1;
    if d <= 1 {
        return Ok(vec![f]);
    }
    let lc = f.last().unwrap().clone();
    // choose a prime with f mod p squarefree of full degree
    let mut chosen = None;
    for p in small_primes().take(200) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = to_fp(&f, p);
        let g = fp_gcd(&fp, &fp_derivative(&fp, p), p);
        if deg(&g) == 0 {
            chosen = Some(p);
            break;
        }
    }
    let p =
        chosen.ok_or_else(|| Error::Unsupported("no suitable prime for factorization".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let fp = fp_monic(&to_fp(&f, p), p);
    let mut modular: Vec<FpPoly> = Vec::new();
    for (g, dd) in ddf(&fp, p) {
        modular.extend(edf(&g, dd, p, &mut rng));
    }
    if modular.len() == 1 {
        return Ok(vec![f]);
    }
    // Mignotte-style bound on coefficients of factors (times lc).
    let norm: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound: BigInt = (BigInt::one() << d) * norm * lc.abs();
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= &bound * 2 {
        pk *= p;
        k += 1;
    }
    // lift all factors: peel one monic factor at a time
    let mut lifted: Vec<ZPoly> = Vec::new();
    let mut rest_z: ZPoly = f.clone();
    let mut rest_mod = modular.clone();
    while rest_mod.len() > 1 {
        let g = rest_mod.remove(0);
        let lc_rest = to_fp(&[rest_z.last().unwrap().clone()], p);
        let mut h = vec![1u64];
        for m in &rest_mod {
            h = fp_mul(&h, m, p);
        }
        h = fp_scale(&h, lc_rest.first().copied().unwrap_or(0), p);
        let (gl, hl) = hensel_lift(&z_mod(&rest_z, &pk), &g, &h, p, k);
        lifted.push(gl);
        rest_z = hl;
    }
    let last_lc = rest_z.last().unwrap().clone();
    let inv_lc = last_lc.modinv(&pk).expect("lc invertible mod p^k");
    lifted.push(z_mod(
        &rest_z.iter().map(|c| c * &inv_lc).collect::<Vec<_>>(),
        &pk,
    ));

    // recombination
    let mut factors = Vec::new();
    let mut remaining = f.clone();
    let mut pool = lifted;
    let mut size = 1;
    while 2 * size <= pool.len() {
        let mut found = false;
        let n = pool.len();
        let mut idx: Vec<usize> = (0..size).collect();
        'subsets: loop {
            let lcr = remaining.last().unwrap().clone();
            let mut cand: ZPoly = vec![lcr.clone()];
            for &i in &idx {
                cand = z_mod(&z_mul(&cand, &pool[i]), &pk);
            }
            let cand = primitive(&symmetric(&cand, &pk));
            if let Some(q) = z_div_exact(&remaining, &cand) {
                factors.push(cand);
                remaining = primitive(&q);
                for &i in idx.iter().rev() {
                    pool.remove(i);
                }
                found = true;
                break 'subsets;
            }
            // next combination
            let mut i = size;
            loop {
                if i == 0 {
                    break 'subsets;
                }
                i -= 1;
                if idx[i] < n - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    continue 'subsets;
                }
            }
        }
        if !found {
            size += 1;
        }
    }
    if remaining.len() > 1 {
        factors.push(remaining);
    }
    Ok(factors)
}

/// Squarefree decomposition (Yun) of a primitive polynomial over Z:
/// pairs (factor, multiplicity).
pub fn squarefree_decomposition(f: &[BigInt]) -> Vec<(ZPoly, u32)> {
    use num_rational::BigRational;
    type QPoly = Vec<BigRational>;
    fn trimq(p: &mut QPoly) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }
    fn remq(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
        let mut r = a.to_vec();
        trimq(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
        let lb = b.last().unwrap();
        while !r.is_empty() && r.len() >= b.len() {
            let s = r.len() - b.len();
            let c = r.last().unwrap() / lb;
            for (j, y) in b.iter().enumerate() {
                r[s + j] = &r[s + j] - &c * y;
            }
            q[s] = c;
            trimq(&mut r);
        }
        (q, r)
    }
    fn gcdq(a: &[BigRational], b: &[BigRational]) -> QPoly {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        trimq(&mut a);
        trimq(&mut b);
        while !b.is_empty() {
            let r = remq(&a, &b).1;
            a = b;
            b = r;
        }
        let l = a.last().cloned().unwrap_or_else(BigRational::one);
        a.iter().map(|c| c / &l).collect()
    }
    fn deriv(a: &[BigRational]) -> QPoly {
        let mut r: QPoly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        trimq(&mut r);
        r
    }
    fn to_z(a: &[BigRational]) -> ZPoly {
        let den = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        primitive(
            &a.iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect::<Vec<_>>(),
        )
    }
    let fq: QPoly = f
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut out = Vec::new();
    let fd = deriv(&fq);
    let a0 = gcdq(&fq, &fd);
    let mut b = remq(&fq, &a0).0;
    let mut c = remq(&fd, &a0).0;
    let mut d: QPoly = {
        let bd = deriv(&b);
        let n = c.len().max(bd.len());
        let mut r: QPoly = (0..n)
            .map(|i| c.get(i).cloned().unwrap_or_default() - bd.get(i).cloned().unwrap_or_default())
            .collect();
        trimq(&mut r);
        r
    };
    let mut i = 1u32;
    while b.len() > 1 {
        let a = gcdq(&b, &d);
        if a.len() > 1 {
            out.push((to_z(&a), i));
        }
        b = remq(&b, &a).0;
        c = remq(&d, &a).0;
        let bd = deriv(&b);
        let n = c.len().max(bd.len());
        d = (0..n)
            .map(|k| c.get(k).cloned().unwrap_or_default() - bd.get(k).cloned().unwrap_or_default())
            .collect();
        trimq(&mut d);
        i += 1;
    }
    out
}

/// Complete factorization over Z of a nonzero polynomial of positive degree
/// (content and sign dropped): irreducible primitive factors with
/// multiplicities.
pub fn factor(f: &[BigInt], seed: u64) -> Result<Vec<(ZPoly, u32)>> {
    let mut f = f.to_vec();
    trim_z(&mut f);
    let mut out = Vec::new();
    // strip powers of t
    let zeros = f.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push((vec![BigInt::zero(), BigInt::one()], zeros as u32));
        f.drain(..zeros);
    }
    if f.len() <= 1 {
        return Ok(out);
    }
    for (g, m) in squarefree_decomposition(&primitive(&f)) {
        for h in factor_squarefree(&g, seed)? {
            out.push((h, m));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn expand(fs: &[(ZPoly, u32)]) -> ZPoly {
        let mut acc = z(&[1]);
        for (f, m) in fs {
            for _ in 0..*m {
                acc = z_mul(&acc, f);
            }
        }
        acc
    }

    #[test]
    fn factors_products_of_known_polys() {
        // (t^2+1)(t-2)(3t+1)(t^4 - 2)
        let parts = [z(&[1, 0, 1]), z(&[-2, 1]), z(&[1, 3]), z(&[-2, 0, 0, 0, 1])];
        let mut f = z(&[1]);
        for p in &parts {
            f = z_mul(&f, p);
        }
        let fs = factor(&f, 0).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(expand(&fs), primitive(&f));
    }

    #[test]
    fn irreducible_stays_whole() {
        // x^4 + 1 splits mod every prime but is irreducible over Z
        let f = z(&[1, 0, 0, 0, 1]);
        let fs = factor(&f, 0).unwrap();
        assert_eq!(fs, vec![(f, 1)]);
    }

    #[test]
    fn repeated_factors() {
        let f = z_mul(&z_mul(&z(&[-1, 1]), &z(&[-1, 1])), &z(&[2, 0, 1]));
        let fs = factor(&f, 0).unwrap();
        assert_eq!(fs, vec![(z(&[-1, 1]), 2), (z(&[2, 0, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_like() {
        // (x^2-2)(x^2-3) and x^4-10x^2+1 (irreducible)
        let f = z(&[1, 0, -10, 0, 1]);
        assert_eq!(factor(&f, 0).unwrap().len(), 1);
        let g = z_mul(&z(&[-2, 0, 1]), &z(&[-3, 0, 1]));
        assert_eq!(factor(&g, 0).unwrap().len(), 2);
    }

    #[test]
    fn large_degree_product() {
        let mut f = z(&[1]);
        for k in 1..=8 {
            f = z_mul(&f, &z(&[-k, 0, 1]));
        }
        let fs = factor(&f, 0).unwrap();
        // x^2 - 1 and x^2 - 4 split, the rest stay irreducible
        assert_eq!(fs.len(), 10);
        assert_eq!(expand(&fs), f);
    }
}
