//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] knows only its number of variables; names, blocks and orders
//! live in [`crate::ring::Ring`]. Terms are kept in a canonical form: sorted
//! by exponent vector in descending lexicographic order, no duplicates, no
//! zero coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

pub type Exp = SmallVec<[u32; 8]>;
pub type Term = (Exp, BigRational);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: Vec<Term>,
}

pub fn exp_zero(n: usize) -> Exp {
    SmallVec::from_elem(0, n)
}

pub fn exp_add(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn exp_lcm(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn exp_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `b / a`, assuming `a | b`.
pub fn exp_sub(b: &[u32], a: &[u32]) -> Exp {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

pub fn exp_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Poly {
            nvars,
            terms: vec![(exp_zero(nvars), c)],
        }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = exp_zero(nvars);
        e[i] = 1;
        Poly {
            nvars,
            terms: vec![(e, BigRational::one())],
        }
    }

    pub fn monomial(exp: Exp, c: BigRational) -> Self {
        let nvars = exp.len();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Poly {
            nvars,
            terms: vec![(exp, c)],
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = Term>>(nvars: usize, terms: I) -> Self {
        let mut map: BTreeMap<Exp, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            if c.is_zero() {
                continue;
            }
            match map.entry(e) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
        Poly {
            nvars,
            terms: map.into_iter().rev().collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&x| x == 0))
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Constant term (coefficient of the zero exponent).
    pub fn constant_term(&self) -> BigRational {
        match self.terms.last() {
            Some((e, c)) if e.iter().all(|&x| x == 0) => c.clone(),
            _ => BigRational::zero(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| exp_degree(e)).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    /// Degree counting only the variables in `vars`.
    pub fn degree_in_set(&self, vars: &[usize]) -> Option<u32> {
        self.terms
            .iter()
            .map(|(e, _)| vars.iter().map(|&v| e[v]).sum())
            .max()
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[v] > 0)
    }

    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.uses_var(v)).collect()
    }

    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut degs = self
            .terms
            .iter()
            .map(|(e, _)| vars.iter().map(|&v| e[v]).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &[u32], c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        // Multiplying by a monomial preserves lex order.
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (exp_add(e, m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let terms = self.terms.iter().filter(|(e, _)| e[v] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[v] -= 1;
            (e2, c * rat(e[v] as i64))
        });
        Poly::from_terms(self.nvars, terms)
    }

    /// Evaluates at a full point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= num_traits::pow(point[v].clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces variable `v` by the constant `value`; the variable count is unchanged.
    pub fn substitute_value(&self, v: usize, value: &BigRational) -> Poly {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = e.clone();
            let k = e2[v];
            e2[v] = 0;
            (e2, c * num_traits::pow(value.clone(), k as usize))
        });
        Poly::from_terms(self.nvars, terms)
    }

    /// Replaces variable `v` by the polynomial `h` (same variable count).
    pub fn substitute_poly(&self, v: usize, h: &Poly) -> Poly {
        assert_eq!(h.nvars, self.nvars);
        let maxd = self.degree_in(v);
        let mut powers = vec![Poly::one(self.nvars)];
        for i in 1..=maxd as usize {
            let next = &powers[i - 1] * h;
            powers.push(next);
        }
        let mut acc = Poly::zero(self.nvars);
        // Group terms by their exponent of v to limit multiplications.
        let mut groups: BTreeMap<u32, Vec<Term>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v];
            e2[v] = 0;
            groups.entry(k).or_default().push((e2, c.clone()));
        }
        for (k, ts) in groups {
            let rest = Poly::from_terms(self.nvars, ts);
            acc = &acc + &(&rest * &powers[k as usize]);
        }
        acc
    }

    /// Re-embeds into a ring with `new_nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap(&self, new_nvars: usize, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = exp_zero(new_nvars);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]] += k;
                }
            }
            (e2, c.clone())
        });
        Poly::from_terms(new_nvars, terms)
    }

    /// Restricts to a sub-ring: variable `i` goes to `map[i]`; variables mapped
    /// to `None` must not occur.
    pub fn restrict(&self, new_nvars: usize, map: &[Option<usize>]) -> Option<Poly> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut e2 = exp_zero(new_nvars);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]?] += k;
                }
            }
            out.push((e2, c.clone()));
        }
        Some(Poly::from_terms(new_nvars, out))
    }

    /// Coefficients with respect to the variables in `vars`: maps the exponent
    /// vector restricted to `vars` to the polynomial in the remaining variables.
    pub fn coefficients_in(&self, vars: &[usize]) -> BTreeMap<Vec<u32>, Poly> {
        let mut groups: BTreeMap<Vec<u32>, Vec<Term>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Vec<u32> = vars.iter().map(|&v| e[v]).collect();
            let mut rest = e.clone();
            for &v in vars {
                rest[v] = 0;
            }
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| (k, Poly::from_terms(self.nvars, ts)))
            .collect()
    }

    /// Coefficients as a polynomial in `v`: entry `i` multiplies `v^i`.
    pub fn univariate_coeffs(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut parts: Vec<Vec<Term>> = vec![Vec::new(); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            parts[k].push((e2, c.clone()));
        }
        parts
            .into_iter()
            .map(|ts| Poly::from_terms(self.nvars, ts))
            .collect()
    }

    pub fn from_univariate_coeffs(nvars: usize, v: usize, coeffs: &[Poly]) -> Poly {
        let mut ts = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += k as u32;
                ts.push((e2, a.clone()));
            }
        }
        Poly::from_terms(nvars, ts)
    }

    /// Leading term in the internal lexicographic order.
    pub fn lex_leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Positive rational `q` such that `self / q` has coprime integer
    /// coefficients (sign not adjusted).
    pub fn rational_content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return BigRational::one();
        }
        BigRational::new(num, den)
    }

    /// Primitive integer-coefficient associate with positive lex-leading coefficient.
    pub fn primitive_lex(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.rational_content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Integer coefficients of a polynomial already known to be integral.
    pub fn integer_coeffs(&self) -> Option<Vec<(Exp, BigInt)>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                if c.is_integer() {
                    Some((e.clone(), c.to_integer()))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        let (dl, dc) = &d.terms[0];
        let mut rem = self.clone();
        let mut quot: Vec<Term> = Vec::new();
        while let Some((re, rc)) = rem.terms.first().cloned() {
            if !exp_divides(dl, &re) {
                return None;
            }
            let qe = exp_sub(&re, dl);
            let qc = &rc / dc;
            rem = &rem - &d.mul_monomial(&qe, &qc);
            quot.push((qe, qc));
            if quot.len() > 10_000_000 {
                return None;
            }
        }
        Some(Poly::from_terms(self.nvars, quot))
    }

    /// Pseudo-remainder of `self` by `g` with respect to variable `v`.
    pub fn pseudo_rem(&self, g: &Poly, v: usize) -> Poly {
        let dg = g.degree_in(v);
        let gc = g.univariate_coeffs(v);
        let lc = gc[dg as usize].clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dg {
            let dr = r.degree_in(v);
            let rc = r.univariate_coeffs(v);
            let lr = &rc[dr as usize];
            let mut shift = exp_zero(self.nvars);
            shift[v] = dr - dg;
            let t = &lr.mul_monomial(&shift, &BigRational::one()) * g;
            r = &(&r * &lc) - &t;
        }
        r
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other {
                        -b[j].1.clone()
                    } else {
                        b[j].1.clone()
                    };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate_other {
                -t.1.clone()
            } else {
                t.1.clone()
            };
            out.push((t.0.clone(), c));
        }
        Poly {
            nvars: self.nvars,
            terms: out,
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.nvars);
        }
        let (small, big) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc = Poly::zero(self.nvars);
        for (e, c) in &small.terms {
            acc = &acc + &big.mul_monomial(e, c);
        }
        acc
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn arithmetic_basics() {
        let a = &x(2, 0) + &x(2, 1);
        let b = &x(2, 0) - &x(2, 1);
        let p = &a * &b;
        let expect = &x(2, 0).pow(2) - &x(2, 1).pow(2);
        assert_eq!(p, expect);
        assert!((&p - &expect).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = &x(2, 0) + &x(2, 1);
        let b = &x(2, 0) - &Poly::from_int(2, 3);
        let p = &a * &b;
        assert_eq!(p.exact_div(&a).unwrap(), b);
        assert!(p.exact_div(&x(2, 1)).is_none());
    }

    #[test]
    fn substitution_and_eval() {
        // (x + y)^2 with y := x - 1 -> (2x - 1)^2
        let p = (&x(2, 0) + &x(2, 1)).pow(2);
        let h = &x(2, 0) - &Poly::one(2);
        let q = p.substitute_poly(1, &h);
        let expect = (&x(2, 0).scale(&rat(2)) - &Poly::one(2)).pow(2);
        assert_eq!(q, expect);
        assert_eq!(q.eval(&[rat(2), rat(7)]), rat(9));
    }

    #[test]
    fn derivative_of_power() {
        let p = x(1, 0).pow(5);
        assert_eq!(p.derivative(0), x(1, 0).pow(4).scale(&rat(5)));
    }

    #[test]
    fn pseudo_remainder_vanishes_on_multiples() {
        let g = &x(2, 0).pow(2) + &x(2, 1);
        let f = &g * &(&x(2, 0) + &Poly::from_int(2, 5));
        assert!(f.pseudo_rem(&g, 0).is_zero());
    }
}
