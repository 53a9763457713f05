//! Polynomial rings with a parameter block `c_1..c_k` and a variable block,
//! plus the maps between them: specialization, homogenization and monomial
//! changes of coordinates.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{MonomialOrder, TermOrder};
use crate::poly::{exp_zero, Poly};
use crate::zzlinalg::IntMatrix;

/// Exponent layout: `[c_1..c_k, x_0?, x_1..x_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    params: Vec<String>,
    vars: Vec<String>,
    homogenized: bool,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(params: &[S], vars: &[S]) -> Result<Ring> {
        let params: Vec<String> = params.iter().map(|s| s.as_ref().to_string()).collect();
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = std::collections::HashSet::new();
        for name in params.iter().chain(vars.iter()) {
            if !is_identifier(name) {
                return Err(Error::InvalidRing(format!("`{name}` is not an identifier")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate name `{name}`")));
            }
        }
        Ok(Ring {
            params,
            vars,
            homogenized: false,
        })
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Names of the x-block, including the homogenizing variable if present.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Total number of ring generators.
    pub fn ngens(&self) -> usize {
        self.params.len() + self.vars.len()
    }

    pub fn is_homogenized(&self) -> bool {
        self.homogenized
    }

    pub fn names(&self) -> Vec<&str> {
        self.params
            .iter()
            .chain(self.vars.iter())
            .map(|s| s.as_str())
            .collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names().iter().position(|n| *n == name)
    }

    pub fn param_index(&self, i: usize) -> usize {
        i
    }

    /// Layout position of the `j`-th x-variable (counting `x_0` if present).
    pub fn var_index(&self, j: usize) -> usize {
        self.params.len() + j
    }

    pub fn param_indices(&self) -> Vec<usize> {
        (0..self.nparams()).collect()
    }

    pub fn var_indices(&self) -> Vec<usize> {
        (self.nparams()..self.ngens()).collect()
    }

    /// Indices of the affine x-variables, i.e. without the homogenizing one.
    pub fn affine_var_indices(&self) -> Vec<usize> {
        let start = self.nparams() + usize::from(self.homogenized);
        (start..self.ngens()).collect()
    }

    pub fn compile(&self, order: &MonomialOrder) -> TermOrder {
        order.compile(self.nparams(), self.nvars())
    }

    pub fn default_order(&self) -> TermOrder {
        self.compile(&MonomialOrder::Grevlex)
    }

    /// The ring `Q[c_1..c_k]` with no x-variables.
    pub fn parameter_ring(&self) -> Ring {
        Ring {
            params: self.params.clone(),
            vars: Vec::new(),
            homogenized: false,
        }
    }

    /// The ring `Q[x]` of fibers.
    pub fn fiber_ring(&self) -> Ring {
        Ring {
            params: Vec::new(),
            vars: self.vars.clone(),
            homogenized: self.homogenized,
        }
    }

    /// Same ring with the x-block permuted by `perm` (new position `j` holds old variable `perm[j]`).
    pub fn with_vars(&self, vars: Vec<String>) -> Ring {
        Ring {
            params: self.params.clone(),
            vars,
            homogenized: self.homogenized,
        }
    }

    /// Ring with a fresh homogenizing variable prepended to the x-block.
    pub fn homogenized(&self) -> Result<Ring> {
        if self.homogenized {
            return Err(Error::InvalidRing("ring is already homogenized".into()));
        }
        let taken: Vec<&str> = self.names();
        let mut name = "x0".to_string();
        while taken.contains(&name.as_str()) {
            name.push('_');
        }
        let mut vars = vec![name];
        vars.extend(self.vars.iter().cloned());
        Ok(Ring {
            params: self.params.clone(),
            vars,
            homogenized: true,
        })
    }

    /// Ring extended by one extra variable placed first in the x-block;
    /// used internally for tag and Rabinowitsch variables.
    pub fn with_extra_var(&self, base: &str) -> (Ring, usize) {
        let taken: Vec<&str> = self.names();
        let mut name = base.to_string();
        while taken.contains(&name.as_str()) {
            name.push('_');
        }
        let mut vars = vec![name];
        vars.extend(self.vars.iter().cloned());
        (
            Ring {
                params: self.params.clone(),
                vars,
                homogenized: false,
            },
            self.nparams(),
        )
    }

    /// Map of layout positions from `self` into `self.with_extra_var(..)`.
    pub fn extra_var_embedding(&self) -> Vec<usize> {
        let k = self.nparams();
        (0..self.ngens())
            .map(|i| if i < k { i } else { i + 1 })
            .collect()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.ngens())
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.ngens())
    }

    pub fn constant(&self, c: BigRational) -> Poly {
        Poly::constant(self.ngens(), c)
    }

    pub fn gen(&self, i: usize) -> Poly {
        Poly::var(self.ngens(), i)
    }

    pub fn param(&self, i: usize) -> Poly {
        self.gen(self.param_index(i))
    }

    pub fn var(&self, j: usize) -> Poly {
        self.gen(self.var_index(j))
    }

    /// Product of the listed generators.
    pub fn monomial_product(&self, idx: &[usize]) -> Poly {
        let mut e = exp_zero(self.ngens());
        for &i in idx {
            e[i] += 1;
        }
        Poly::monomial(e, BigRational::one())
    }

    pub fn check(&self, f: &Poly) -> Result<()> {
        if f.nvars() != self.ngens() {
            return Err(Error::RingMismatch(format!(
                "polynomial has {} variables, ring has {}",
                f.nvars(),
                self.ngens()
            )));
        }
        Ok(())
    }

    /// Canonical associate: primitive integer coefficients, positive leading
    /// coefficient under the default order.
    pub fn normalize(&self, f: &Poly) -> Poly {
        if f.is_zero() {
            return f.clone();
        }
        let ord = self.default_order();
        let lead = leading_term(f, &ord).expect("nonzero");
        let mut c = f.rational_content();
        if lead.1.is_negative() {
            c = -c;
        }
        f.scale(&c.recip())
    }

    /// Embeds a polynomial of the parameter ring.
    pub fn lift_params(&self, f: &Poly) -> Poly {
        let map: Vec<usize> = (0..self.nparams()).collect();
        f.remap(self.ngens(), &map)
    }

    /// Restriction to the parameter ring, if `f` is free of x-variables.
    pub fn to_params(&self, f: &Poly) -> Option<Poly> {
        let k = self.nparams();
        let map: Vec<Option<usize>> = (0..self.ngens()).map(|i| (i < k).then_some(i)).collect();
        f.restrict(k, &map)
    }

    pub fn is_param_only(&self, f: &Poly) -> bool {
        self.var_indices().iter().all(|&v| !f.uses_var(v))
    }

    /// `i_a(f)`: substitutes `a` for the parameters; the result lives in
    /// [`Ring::fiber_ring`].
    pub fn specialize(&self, f: &Poly, a: &ParamPoint) -> Result<Poly> {
        if a.coords.len() != self.nparams() {
            return Err(Error::Arity {
                expected: self.nparams(),
                got: a.coords.len(),
            });
        }
        self.check(f)?;
        let k = self.nparams();
        let n = self.nvars();
        let mut terms = Vec::with_capacity(f.len());
        for (e, c) in f.terms() {
            let mut coeff = c.clone();
            for i in 0..k {
                if e[i] > 0 {
                    coeff *= pow_rat(&a.coords[i], e[i]);
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let mut e2 = exp_zero(n);
            e2.copy_from_slice(&e[k..]);
            terms.push((e2, coeff));
        }
        Ok(Poly::from_terms(n, terms))
    }

    /// Substitutes `a` for the parameters but keeps the polynomial in this
    /// ring (parameters simply stop occurring).
    pub fn specialize_in_place(&self, f: &Poly, a: &ParamPoint) -> Result<Poly> {
        let g = self.specialize(f, a)?;
        let map: Vec<usize> = (self.nparams()..self.ngens()).collect();
        Ok(g.remap(self.ngens(), &map))
    }

    /// Homogenizes `f` with respect to the x-degree. `f` lives in `self`;
    /// the result lives in `self.homogenized()`.
    pub fn homogenize(&self, f: &Poly) -> Result<Poly> {
        let target = self.homogenized()?;
        self.check(f)?;
        let xs = self.var_indices();
        let k = self.nparams();
        let d = f.degree_in_set(&xs).unwrap_or(0);
        let mut terms = Vec::with_capacity(f.len());
        for (e, c) in f.terms() {
            let mut e2 = exp_zero(target.ngens());
            e2[..k].copy_from_slice(&e[..k]);
            let mut deg = 0;
            for &x in &xs {
                e2[x + 1] = e[x];
                deg += e[x];
            }
            e2[k] = d - deg;
            terms.push((e2, c.clone()));
        }
        Ok(Poly::from_terms(target.ngens(), terms))
    }

    /// Sets the homogenizing variable to 1; inverse of [`Ring::homogenize`] on
    /// the image. Returns the polynomial in the affine ring.
    pub fn dehomogenize(&self, f: &Poly) -> Result<Poly> {
        if !self.homogenized {
            return Err(Error::InvalidRing(
                "ring has no homogenizing variable".into(),
            ));
        }
        let k = self.nparams();
        let g = f.substitute_value(k, &BigRational::one());
        let map: Vec<Option<usize>> = (0..self.ngens())
            .map(|i| match i.cmp(&k) {
                Ordering::Less => Some(i),
                Ordering::Equal => None,
                Ordering::Greater => Some(i - 1),
            })
            .collect();
        Ok(g.restrict(self.ngens() - 1, &map).expect("x0 removed"))
    }

    /// Applies `x_i -> prod_j x_j^{A[j][i]}` to the affine x-variables and
    /// clears denominators by the smallest monomial that makes the result a
    /// polynomial.
    pub fn monomial_substitute(&self, f: &Poly, a: &IntMatrix) -> Result<Poly> {
        let xs = self.affine_var_indices();
        let n = xs.len();
        if a.rows() != n || a.cols() != n {
            return Err(Error::InvalidArgument(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_unimodular() {
            return Err(Error::NotUnimodular(a.determinant()?.to_string()));
        }
        self.check(f)?;
        let mut images: Vec<(Vec<BigInt>, &BigRational, &[u32])> = Vec::with_capacity(f.len());
        for (e, c) in f.terms() {
            let mut w = vec![BigInt::zero(); n];
            for (i, &xi) in xs.iter().enumerate() {
                if e[xi] == 0 {
                    continue;
                }
                for (j, wj) in w.iter_mut().enumerate() {
                    *wj += &a[(j, i)] * BigInt::from(e[xi]);
                }
            }
            images.push((w, c, &e[..]));
        }
        let mut shift = vec![BigInt::zero(); n];
        for (w, _, _) in &images {
            for j in 0..n {
                if w[j] < shift[j] {
                    shift[j] = w[j].clone();
                }
            }
        }
        let mut terms = Vec::with_capacity(images.len());
        for (w, c, e) in images {
            let mut e2 = exp_zero(self.ngens());
            for i in 0..self.ngens() {
                if !xs.contains(&i) {
                    e2[i] = e[i];
                }
            }
            for j in 0..n {
                let v: BigInt = &w[j] - &shift[j];
                e2[xs[j]] = u32::try_from(v).map_err(|_| {
                    Error::InvalidArgument("exponent overflow in monomial substitution".into())
                })?;
            }
            terms.push((e2, c.clone()));
        }
        Ok(Poly::from_terms(self.ngens(), terms))
    }

    /// Polynomial in this ring with the x-variables permuted:
    /// old x-variable `j` moves to position `perm[j]`.
    pub fn permute_vars(&self, f: &Poly, perm: &[usize]) -> Poly {
        let k = self.nparams();
        let map: Vec<usize> = (0..self.ngens())
            .map(|i| if i < k { i } else { k + perm[i - k] })
            .collect();
        f.remap(self.ngens(), &map)
    }

    /// Human-readable form, terms in decreasing default order.
    pub fn fmt_poly(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let ord = self.default_order();
        let mut terms: Vec<_> = f.terms().iter().collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let names = self.names();
        let mut out = String::new();
        for (i, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    _ => factors.push(format!("{}^{}", names[v], k)),
                }
            }
            if factors.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                let _ = write!(out, "{}*{}", abs, factors.join("*"));
            }
        }
        out
    }
}

fn pow_rat(x: &BigRational, k: u32) -> BigRational {
    num_traits::pow(x.clone(), k as usize)
}

/// Leading term of `f` under `ord`.
pub fn leading_term<'a>(f: &'a Poly, ord: &TermOrder) -> Option<&'a crate::poly::Term> {
    f.terms().iter().max_by(|a, b| ord.cmp(&a.0, &b.0))
}

/// A point `a` of the parameter space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamPoint {
    pub coords: Vec<BigRational>,
}

impl ParamPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        ParamPoint { coords }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        ParamPoint {
            coords: v
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ring(params: &[&str], vars: &[&str]) -> Ring {
        Ring::new(params, vars).unwrap()
    }

    #[test]
    fn rejects_bad_names() {
        assert!(Ring::new(&["c"], &["c"]).is_err());
        assert!(Ring::new(&["1c"], &["x"]).is_err());
        assert!(Ring::new::<&str>(&[], &[]).is_ok());
    }

    #[test]
    fn specialize_examples() {
        let r = ring(&["c1", "c2"], &["x", "y"]);
        let f = parse_poly(&r, "c1*x + c2*y + x*y").unwrap();
        let g = r.specialize(&f, &ParamPoint::from_ints(&[0, 0])).unwrap();
        assert_eq!(r.fiber_ring().fmt_poly(&g), "x*y");

        let f = parse_poly(&r, "c2*x^2 + c2*x*y + c1").unwrap();
        let g = r.specialize(&f, &ParamPoint::from_ints(&[3, 0])).unwrap();
        assert_eq!(
            g.constant_value(),
            Some(BigRational::from_integer(3.into()))
        );

        let r1 = ring(&["c1"], &["x"]);
        let f = parse_poly(&r1, "c1*x").unwrap();
        let g = r1.specialize(&f, &ParamPoint::from_ints(&[1])).unwrap();
        assert_eq!(r1.fiber_ring().fmt_poly(&g), "x");

        assert!(r1.specialize(&f, &ParamPoint::from_ints(&[1, 2])).is_err());
    }

    #[test]
    fn homogenize_examples() {
        let r = ring(&["c1", "c2"], &["x", "y"]);
        let h = r.homogenized().unwrap();
        let cases = [
            ("x + y^2", "y^2 + x*x0"),
            ("c1*x + c2", "c1*x + c2*x0"),
            ("x*y", "x*y"),
        ];
        for (src, want) in cases {
            let f = parse_poly(&r, src).unwrap();
            let g = r.homogenize(&f).unwrap();
            assert_eq!(g, parse_poly(&h, want).unwrap(), "{src}");
            assert_eq!(h.dehomogenize(&g).unwrap(), f);
        }
    }

    #[test]
    fn monomial_substitute_examples() {
        let r = ring(&[], &["x1", "x2"]);
        let x1 = parse_poly(&r, "x1").unwrap();
        let id = IntMatrix::identity(2);
        assert_eq!(r.monomial_substitute(&x1, &id).unwrap(), x1);

        let a = IntMatrix::from_rows(&[vec![2, 1], vec![3, 2]]).unwrap();
        let g = r.monomial_substitute(&x1, &a).unwrap();
        assert_eq!(g, parse_poly(&r, "x1^2*x2^3").unwrap());

        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let f = parse_poly(&r, "x1 + x2").unwrap();
        assert_eq!(r.monomial_substitute(&f, &swap).unwrap(), f);

        let bad = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(r.monomial_substitute(&f, &bad).is_err());
    }

    #[test]
    fn laurent_terms_are_cleared() {
        let r = ring(&[], &["x", "y"]);
        // x -> x*y^-1 (inverse of the shear x -> x*y)
        let a = IntMatrix::from_rows(&[vec![1, 0], vec![-1, 1]]).unwrap();
        let f = parse_poly(&r, "x + 1").unwrap();
        let g = r.monomial_substitute(&f, &a).unwrap();
        assert_eq!(g, parse_poly(&r, "x + y").unwrap());
    }

    #[test]
    fn printing_is_canonical() {
        let r = ring(&["c"], &["x", "y"]);
        let f = parse_poly(&r, "-1/2*c + 3*x^2*y - y").unwrap();
        assert_eq!(r.fmt_poly(&f), "3*x^2*y - y - 1/2*c");
        assert_eq!(r.fmt_poly(&r.normalize(&f)), "6*x^2*y - 2*y - c");
    }
}
