//! Multivariate gcd, squarefree parts and factorization over Q.
//!
//! Factorization splits contents variable by variable, runs Yun's squarefree
//! decomposition, and then certifies irreducibility of each squarefree piece:
//! degree one in some variable, a discriminant test in degree two, univariate
//! Zassenhaus, and otherwise a Kronecker substitution followed by recombination
//! of the univariate factors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{exp_zero, Exp, Poly};
use crate::upoly;

const MAX_KRONECKER_DEGREE: u64 = 4000;
const MAX_RECOMBINATION_SUBSETS: u64 = 1 << 16;

fn normalized(f: &Poly) -> Poly {
    f.primitive_lex()
}

/// Gcd of the coefficients of `f` viewed as a polynomial in `v`.
pub fn content_in(f: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero(f.nvars());
    for c in f.univariate_coeffs(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one(f.nvars());
        }
    }
    g
}

fn primitive_in(f: &Poly, v: usize) -> Poly {
    let c = content_in(f, v);
    normalized(&f.exact_div(&c).expect("content divides"))
}

/// Greatest common divisor, primitive with positive lex-leading coefficient.
pub fn gcd(f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() {
        return normalized(g);
    }
    if g.is_zero() {
        return normalized(f);
    }
    let n = f.nvars();
    if f.is_constant() || g.is_constant() {
        return Poly::one(n);
    }
    let v = (0..n)
        .rev()
        .find(|&v| f.uses_var(v) || g.uses_var(v))
        .expect("nonconstant");
    if !f.uses_var(v) {
        return gcd(f, &content_in(g, v));
    }
    if !g.uses_var(v) {
        return gcd(&content_in(f, v), g);
    }
    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let c = gcd(&cf, &cg);
    let mut a = normalized(&f.exact_div(&cf).expect("content divides"));
    let mut b = normalized(&g.exact_div(&cg).expect("content divides"));
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let last = loop {
        let r = a.pseudo_rem(&b, v);
        if r.is_zero() {
            break b;
        }
        if r.degree_in(v) == 0 {
            break Poly::one(n);
        }
        a = b;
        b = primitive_in(&r, v);
    };
    normalized(&(&c * &primitive_in(&last, v)))
}

/// Product of the distinct irreducible factors of `f`.
pub fn squarefree_part(f: &Poly) -> Poly {
    if f.is_constant() {
        return normalized(f);
    }
    let mut g = f.clone();
    for v in f.used_vars() {
        g = gcd(&g, &f.derivative(v));
        if g.is_constant() {
            break;
        }
    }
    normalized(&f.exact_div(&g).expect("gcd divides"))
}

/// Yun's algorithm for `f` primitive with respect to `v` (every irreducible
/// factor involves `v`).
fn yun(f: &Poly, v: usize) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    let fd = f.derivative(v);
    let a0 = gcd(f, &fd);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let mut c = fd.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative(v);
        i += 1;
    }
    out
}

/// Irreducible factors over Q with multiplicities, each primitive with
/// positive lex-leading coefficient; constants are dropped.
pub fn factor(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out: Vec<(Poly, u32)> = Vec::new();
    factor_into(&normalized(f), 1, &mut out)?;
    // merge equal factors
    out.sort_by(|a, b| a.0.terms().cmp(b.0.terms()));
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, m) in out {
        match merged.last_mut() {
            Some((q, k)) if *q == p => *k += m,
            _ => merged.push((p, m)),
        }
    }
    Ok(merged)
}

fn factor_into(f: &Poly, mult: u32, out: &mut Vec<(Poly, u32)>) -> Result<()> {
    if f.is_constant() {
        return Ok(());
    }
    let v = *f.used_vars().last().expect("nonconstant");
    let c = content_in(f, v);
    if !c.is_constant() {
        factor_into(&c, mult, out)?;
    }
    let p = primitive_in(f, v);
    for (s, m) in yun(&p, v) {
        for g in irreducible_factors(&normalized(&s))? {
            out.push((g, m * mult));
        }
    }
    Ok(())
}

/// Irreducible factors of a squarefree polynomial.
fn irreducible_factors(f: &Poly) -> Result<Vec<Poly>> {
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let vars = f.used_vars();
    for &u in &vars {
        let c = content_in(f, u);
        if !c.is_constant() {
            let mut out = irreducible_factors(&c)?;
            out.extend(irreducible_factors(&normalized(
                &f.exact_div(&c).expect("content"),
            ))?);
            return Ok(out);
        }
    }
    if vars.len() == 1 {
        return univariate_factors(f, vars[0]);
    }
    if vars.iter().any(|&u| f.degree_in(u) == 1) {
        return Ok(vec![normalized(f)]);
    }
    if let Some(&u) = vars.iter().find(|&&u| f.degree_in(u) == 2) {
        return quadratic_split(f, u);
    }
    kronecker_factors(f)
}

fn univariate_factors(f: &Poly, v: usize) -> Result<Vec<Poly>> {
    let n = f.nvars();
    let z = to_dense(f, v);
    let fs = upoly::factor(&z, 0)?;
    let mut out = Vec::new();
    for (g, m) in fs {
        let p = from_dense(n, v, &g);
        for _ in 0..m {
            out.push(normalized(&p));
        }
    }
    Ok(out)
}

fn to_dense(f: &Poly, v: usize) -> Vec<BigInt> {
    let den = f.terms().iter().fold(BigInt::one(), |l, (_, c)| {
        num_integer::Integer::lcm(&l, c.denom())
    });
    let mut z = vec![BigInt::zero(); f.degree_in(v) as usize + 1];
    for (e, c) in f.terms() {
        z[e[v] as usize] += (c * BigRational::from_integer(den.clone())).to_integer();
    }
    z
}

fn from_dense(n: usize, v: usize, z: &[BigInt]) -> Poly {
    Poly::from_terms(
        n,
        z.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut e = exp_zero(n);
                e[v] = i as u32;
                (e, BigRational::from_integer(c.clone()))
            }),
    )
}

/// Splits `f` of degree two in `u` (primitive in `u`) when its discriminant is
/// a perfect square; otherwise `f` is irreducible.
fn quadratic_split(f: &Poly, u: usize) -> Result<Vec<Poly>> {
    let cs = f.univariate_coeffs(u);
    let (c, b, a) = (&cs[0], &cs[1], &cs[2]);
    let disc = &(b * b) - &(&(a * c) * &Poly::from_int(f.nvars(), 4));
    let Some(s) = poly_sqrt(&disc) else {
        return Ok(vec![normalized(f)]);
    };
    let uvar = Poly::var(f.nvars(), u);
    let two = Poly::from_int(f.nvars(), 2);
    let lin = &(&(&two * a) * &uvar) + &(b - &s);
    let g = primitive_in(&lin, u);
    let h = f
        .exact_div(&g)
        .ok_or_else(|| Error::DecompositionIncomplete("quadratic factor does not divide".into()))?;
    Ok(vec![g, normalized(&h)])
}

fn lex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    a.cmp(b)
}

/// Square root in Q[x] if `f` is a perfect square.
pub fn poly_sqrt(f: &Poly) -> Option<Poly> {
    if f.is_zero() {
        return Some(f.clone());
    }
    let sqrt_term = |e: &[u32], c: &BigRational| -> Option<(Exp, BigRational)> {
        if e.iter().any(|k| k % 2 == 1) || c.is_negative() {
            return None;
        }
        let num = c.numer().sqrt();
        let den = c.denom().sqrt();
        if &(&num * &num) != c.numer() || &(&den * &den) != c.denom() {
            return None;
        }
        Some((
            e.iter().map(|k| k / 2).collect(),
            BigRational::new(num, den),
        ))
    };
    let (le, lc) = f.lex_leading()?;
    let first = sqrt_term(le, lc)?;
    let (te, tc) = f.terms().last()?;
    let floor = sqrt_term(te, tc)?.0;
    let lead = Poly::monomial(first.0.clone(), first.1.clone());
    let mut s = lead.clone();
    let two_lead_c = &first.1 * BigRational::from_integer(2.into());
    loop {
        let r = f - &(&s * &s);
        let Some((re, rc)) = r.lex_leading() else {
            return Some(s);
        };
        // next term of s is lt(r) / (2*lt(s))
        if !crate::poly::exp_divides(&first.0, re) {
            return None;
        }
        let e = crate::poly::exp_sub(re, &first.0);
        if lex_cmp(&e, &floor) == std::cmp::Ordering::Less
            || lex_cmp(&e, &first.0) != std::cmp::Ordering::Less
        {
            return None;
        }
        let t = Poly::monomial(e, rc / &two_lead_c);
        s = &s + &t;
        if s.len() > 4 * f.len() + 4 {
            return None;
        }
    }
}

/// Kronecker substitution `x_j -> t^(D^j)`, univariate factorization, and
/// recombination by trial division.
fn kronecker_factors(f: &Poly) -> Result<Vec<Poly>> {
    let n = f.nvars();
    let vars = f.used_vars();
    let d = vars.iter().map(|&v| f.degree_in(v)).max().unwrap_or(0) as u64 + 1;
    let mut weights = Vec::with_capacity(vars.len());
    let mut w = 1u64;
    for _ in &vars {
        weights.push(w);
        w = w.saturating_mul(d);
    }
    let image_degree: u64 = vars
        .iter()
        .zip(&weights)
        .map(|(&v, &wt)| f.degree_in(v) as u64 * wt)
        .sum();
    if image_degree > MAX_KRONECKER_DEGREE {
        return Err(Error::DecompositionIncomplete(format!(
            "cannot certify factorization of a polynomial of degree {image_degree} after substitution"
        )));
    }
    let den = f.terms().iter().fold(BigInt::one(), |l, (_, c)| {
        num_integer::Integer::lcm(&l, c.denom())
    });
    let mut z = vec![BigInt::zero(); image_degree as usize + 1];
    for (e, c) in f.terms() {
        let k: u64 = vars
            .iter()
            .zip(&weights)
            .map(|(&v, &wt)| e[v] as u64 * wt)
            .sum();
        z[k as usize] += (c * BigRational::from_integer(den.clone())).to_integer();
    }
    let mut pieces: Vec<Vec<BigInt>> = Vec::new();
    for (g, m) in upoly::factor(&z, 0)? {
        for _ in 0..m {
            pieces.push(g.clone());
        }
    }
    let r = pieces.len();
    if r <= 1 {
        return Ok(vec![normalized(f)]);
    }
    let total: u64 = 1u64.checked_shl(r as u32).unwrap_or(u64::MAX);
    if total > MAX_RECOMBINATION_SUBSETS {
        return Err(Error::DecompositionIncomplete(format!(
            "too many univariate factors ({r}) to recombine"
        )));
    }
    let invert = |g: &[BigInt]| -> Option<Poly> {
        let mut terms = Vec::new();
        for (k, c) in g.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = exp_zero(n);
            let mut rem = k as u64;
            for &v in &vars {
                e[v] = (rem % d) as u32;
                rem /= d;
            }
            if rem != 0 {
                return None;
            }
            terms.push((e, BigRational::from_integer(c.clone())));
        }
        Some(Poly::from_terms(n, terms))
    };
    for size in 1..=r / 2 {
        for mask in 0..total {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut prod = vec![BigInt::one()];
            for (i, p) in pieces.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod = mul_dense(&prod, p);
                }
            }
            let Some(g) = invert(&prod) else { continue };
            if g.is_constant() {
                continue;
            }
            if let Some(h) = f.exact_div(&g) {
                let mut out = vec![normalized(&g)];
                out.extend(irreducible_factors(&normalized(&h))?);
                return Ok(out);
            }
        }
    }
    Ok(vec![normalized(f)])
}

fn mul_dense(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::Ring;

    fn r() -> Ring {
        Ring::new(&["c1", "c2"], &["x", "y"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(&r(), s).unwrap()
    }

    fn product(fs: &[(Poly, u32)]) -> Poly {
        let mut acc = Poly::one(4);
        for (f, m) in fs {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x^2 + 2*x*y + y^2")), p("x + y"));
        assert_eq!(gcd(&p("c1*x"), &p("c2*x")), p("x"));
        assert!(gcd(&p("x + 1"), &p("y")).is_constant());
        assert_eq!(gcd(&p("6*c1^2*x"), &p("4*c1*x^2")), p("c1*x"));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p("c1^2")), p("c1"));
        assert_eq!(squarefree_part(&p("(x+y)^3*(x-1)")), p("(x+y)*(x-1)"));
        let f = p("c1*c2*(c1-c2-1)");
        assert_eq!(squarefree_part(&f), normalized(&f));
    }

    #[test]
    fn factor_examples() {
        let f = p("c1*c2*(c1-c2-1)");
        let fs = factor(&f).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), normalized(&f));

        // quadratic with square discriminant: (2x+2y-1)(2x+2y+1)
        let f = p("4*x^2 + 8*x*y + 4*y^2 - 1");
        let fs = factor(&f).unwrap();
        assert_eq!(fs.len(), 2);

        // irreducible quadratic
        assert_eq!(factor(&p("x^2 + y^2 + 1")).unwrap().len(), 1);

        // higher degree needing substitution: (x^3 + y + 1)(x^3 - y^2)
        let f = p("(x^3 + y^3 + 1)*(x^3 - y^3 + x)");
        let fs = factor(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs), normalized(&f));

        let f = p("(x - 1)^2*(c1*x + c2)^3*c1");
        let fs = factor(&f).unwrap();
        assert_eq!(product(&fs), normalized(&f));
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn sqrt_examples() {
        let s = poly_sqrt(&p("x^2 + 2*x*y + y^2")).unwrap();
        assert_eq!(normalized(&s), p("x + y"));
        assert!(poly_sqrt(&p("x^2 + y^2")).is_none());
        assert!(poly_sqrt(&p("4*c1^2")).is_some());
    }
}
