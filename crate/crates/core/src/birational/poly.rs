//! Sparse multivariate polynomials over ℚ.
//!
//! Terms are kept in graded lexicographic order: higher total degree is
//! larger, ties broken lexicographically with variable 0 the most
//! significant. The leading term is the largest one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::term(nvars, vec![0; nvars], c)
    }

    pub fn from_i64(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(nvars, e, BigRational::one())
    }

    pub fn term(nvars: usize, exps: Vec<u32>, c: BigRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(exps), c);
        }
        Poly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Common degree of every term in the variables `vars`, if there is one.
    pub fn degree_in_set(&self, vars: &[usize]) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| vars.iter().map(|&v| m.0[v]).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        let all: Vec<usize> = (0..self.nvars).collect();
        self.is_zero() || self.degree_in_set(&all).is_some()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn mul_term(&self, m: &Monomial, c: &BigRational) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, x)| (Monomial(k.0.iter().zip(&m.0).map(|(a, b)| a + b).collect()), x * c))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// `self(args₀, args₁, …)`; all arguments share one variable set.
    pub fn substitute(&self, args: &[Poly]) -> Poly {
        assert_eq!(args.len(), self.nvars);
        let target = args.first().map(|a| a.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<Poly>> = args.iter().map(|a| vec![Poly::one(a.nvars)]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty") * &args[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut q = Poly::zero(self.nvars);
        let mut r = self.clone();
        while let Some((m, c)) = r.leading() {
            if !lm.divides(m) {
                return None;
            }
            let tm = Monomial(m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect());
            let tc = c / &lc;
            r = &r - &d.mul_term(&tm, &tc);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Coefficients as a polynomial in `v`, indexed by degree.
    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.nvars); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let d = std::mem::replace(&mut e[v], 0);
            out[d as usize].add_term(Monomial(e), c.clone());
        }
        out
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        for c in self.coeffs_in(v) {
            g = gcd(&g, &c);
            if g.is_constant() && !g.is_zero() {
                return Poly::one(self.nvars);
            }
        }
        g
    }

    fn highest_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.degree_in(v) > 0)
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`.
    fn prem(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        let lb = b.coeffs_in(v).pop().expect("nonzero");
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coeffs_in(v).pop().expect("nonzero");
            let mut shift = vec![0; self.nvars];
            shift[v] = dr - db;
            let t = (&lr * b).mul_term(&Monomial(shift), &BigRational::one());
            r = &(&lb * &r) - &t;
        }
        r
    }

    /// Rational content: makes coefficients coprime integers with positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        for c in self.terms.values() {
            num = num.gcd(&(c * BigRational::from_integer(den.clone())).to_integer());
        }
        let mut f = BigRational::new(den, num);
        if self.leading_coefficient().is_negative() {
            f = -f;
        }
        self.scale(&f)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                        if e == 1 {
                            name
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// Monic greatest common divisor (zero only if both inputs are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    let v = a.highest_var().max(b.highest_var()).expect("nonconstant");
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 {
        return gcd(a, &b.content_in(v));
    }
    if db == 0 {
        return gcd(&a.content_in(v), b);
    }
    let (ca, cb) = (a.content_in(v), b.content_in(v));
    let g0 = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.prem(&q, v).primitive_integer();
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = Poly::one(a.nvars);
            break;
        }
        p = q;
        let c = r.content_in(v);
        q = r.div_exact(&c).expect("content divides");
    }
    let c = q.content_in(v);
    let q = q.div_exact(&c).expect("content divides");
    (&q * &g0).monic()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    // exponents add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &rhs.terms {
            for (k, x) in &self.terms {
                out.add_term(Monomial(k.0.iter().zip(&m.0).map(|(a, b)| a + b).collect()), x * c);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}
