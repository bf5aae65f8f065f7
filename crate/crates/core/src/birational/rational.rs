//! Reduced rational functions and affine rational maps.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{gcd, Poly};
use crate::linalg::IntegerMatrix;
use crate::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic under grlex, so
/// structural equality is equality of functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Indeterminate);
        }
        let nvars = num.nvars();
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: Poly::one(nvars),
            });
        }
        let g = gcd(&num, &den);
        let (num, den) = (
            num.div_exact(&g).expect("gcd divides"),
            den.div_exact(&g).expect("gcd divides"),
        );
        let lc = den.leading_coefficient().recip();
        Ok(RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let nvars = p.nvars();
        RationalFunction {
            num: p,
            den: Poly::one(nvars),
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// `None` when the denominator vanishes at `point`.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// `self(args)`; errors when the result has an identically zero
    /// denominator.
    pub fn substitute(&self, args: &[RationalFunction]) -> Result<Self> {
        assert_eq!(args.len(), self.nvars());
        // clear every argument denominator to the same power in num and den
        let target = args.first().map(|a| a.nvars()).unwrap_or(0);
        let nums: Vec<Poly> = args.iter().map(|a| a.num.clone()).collect();
        let dens: Vec<&Poly> = args.iter().map(|a| &a.den).collect();
        let degs: Vec<u32> = (0..self.nvars())
            .map(|v| self.num.degree_in(v).max(self.den.degree_in(v)))
            .collect();
        let homogenized = |p: &Poly| -> Poly {
            let mut out = Poly::zero(target);
            for (m, c) in p.terms() {
                let mut t = Poly::constant(target, c.clone());
                for (v, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t = &t * &nums[v].pow(e);
                    }
                    if degs[v] > e {
                        t = &t * &dens[v].pow(degs[v] - e);
                    }
                }
                out = &out + &t;
            }
            out
        };
        Self::new(homogenized(&self.num), homogenized(&self.den))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let paren = |p: &Poly, strict: bool| {
            let s = p.fmt_with(names);
            if p.num_terms() > 1 || (strict && s.contains('*')) {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den == Poly::one(self.nvars()) {
            self.num.fmt_with(names)
        } else {
            format!("{}/{}", paren(&self.num, false), paren(&self.den, true))
        }
    }

    /// Exponent vector when the function is a monomial with coefficient 1.
    pub fn monomial_exponents(&self) -> Option<Vec<i64>> {
        if !self.num.is_monomial() || !self.den.is_monomial() {
            return None;
        }
        let (mn, cn) = self.num.leading()?;
        let (md, _) = self.den.leading()?;
        if !cn.is_one() {
            return None;
        }
        Some(mn.0.iter().zip(&md.0).map(|(a, b)| *a as i64 - *b as i64).collect())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}

/// A rational map between affine spaces, one function per target
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    source_names: Vec<String>,
    target_names: Vec<String>,
    components: Vec<RationalFunction>,
}

impl RationalMap {
    pub fn new(
        source_names: Vec<String>,
        target_names: Vec<String>,
        components: Vec<RationalFunction>,
    ) -> Result<Self> {
        if components.len() != target_names.len() {
            return Err(Error::DimensionMismatch {
                expected: target_names.len(),
                got: components.len(),
            });
        }
        if let Some(bad) = components.iter().find(|c| c.nvars() != source_names.len()) {
            return Err(Error::DimensionMismatch {
                expected: source_names.len(),
                got: bad.nvars(),
            });
        }
        Ok(RationalMap {
            source_names,
            target_names,
            components,
        })
    }

    pub fn identity(names: Vec<String>) -> Self {
        let n = names.len();
        RationalMap {
            source_names: names.clone(),
            target_names: names,
            components: (0..n).map(|i| RationalFunction::var(n, i)).collect(),
        }
    }

    pub fn source_names(&self) -> &[String] {
        &self.source_names
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.components
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        if inner.components.len() != self.source_names.len() {
            return Err(Error::SignatureMismatch(format!(
                "inner map has {} outputs, outer map takes {}",
                inner.components.len(),
                self.source_names.len()
            )));
        }
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(&inner.components))
            .collect::<Result<_>>()?;
        Ok(RationalMap {
            source_names: inner.source_names.clone(),
            target_names: self.target_names.clone(),
            components,
        })
    }

    /// `None` if some denominator vanishes.
    pub fn eval(&self, point: &[BigRational]) -> Option<Vec<BigRational>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// Rows are exponent vectors, when every component is a monomial.
    pub fn exponent_matrix(&self) -> Option<IntegerMatrix> {
        let rows: Option<Vec<Vec<i64>>> = self.components.iter().map(|c| c.monomial_exponents()).collect();
        let rows = rows?;
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        Some(IntegerMatrix::from_i64(&refs))
    }

    pub fn describe(&self) -> Vec<String> {
        self.target_names
            .iter()
            .zip(&self.components)
            .map(|(n, c)| format!("{n} = {}", c.fmt_with(&self.source_names)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn v(i: usize) -> RationalFunction {
        RationalFunction::var(2, i)
    }

    #[test]
    fn reduction_and_sign() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let f = RationalFunction::new(&(&x * &x) - &(&y * &y), (&y - &x).scale(&rat(2, 1))).unwrap();
        // (x²−y²)/(2(y−x)) = −(x+y)/2
        assert_eq!(f, RationalFunction::from_poly((&x + &y).scale(&rat(-1, 2))));
        assert!(RationalFunction::new(x.clone(), Poly::zero(2)).is_err());
    }

    #[test]
    fn arithmetic_and_substitution() {
        let f = v(0).div(&v(1)).unwrap();
        let g = f.inv().unwrap();
        assert_eq!(f.mul(&g), RationalFunction::constant(2, rat(1, 1)));
        // y/(y−1) applied twice is the identity
        let one = RationalFunction::constant(1, rat(1, 1));
        let y = RationalFunction::var(1, 0);
        let m = y.div(&y.sub(&one)).unwrap();
        assert_eq!(m.substitute(std::slice::from_ref(&m)).unwrap(), y);
        assert_eq!(f.fmt_with(&["a".into(), "b".into()]), "a/b");
    }

    #[test]
    fn maps_and_exponents() {
        let names = vec!["a".to_string(), "b".to_string()];
        let swap = RationalMap::new(names.clone(), names.clone(), vec![v(1), v(0)]).unwrap();
        assert_eq!(swap.compose(&swap).unwrap(), RationalMap::identity(names.clone()));
        let ratio = RationalMap::new(names, vec!["y".into()], vec![v(0).div(&v(1)).unwrap()]).unwrap();
        assert_eq!(ratio.exponent_matrix().unwrap(), IntegerMatrix::from_i64(&[&[1, -1]]));
        assert!(ratio.compose(&ratio).is_err());
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        let poly = prop::collection::vec(((0u32..3, 0u32..3), -3i64..4), 1..4).prop_map(|ts| {
            let mut p = Poly::zero(2);
            for ((a, b), k) in ts {
                p = &p + &Poly::term(2, vec![a, b], rat(k, 1));
            }
            p
        });
        (poly.clone(), poly).prop_filter_map("zero denominator", |(n, d)| RationalFunction::new(n, d).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        // symbolic and evaluation equality agree
        #[test]
        fn normal_form_matches_evaluation(f in small_rf(), g in small_rf(), h in small_rf()) {
            let lhs = f.mul(&g.add(&h));
            let rhs = f.mul(&g).add(&f.mul(&h));
            prop_assert_eq!(&lhs, &rhs);
            let diff = f.sub(&g);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
            let mut vanishes = true;
            let mut samples = 0;
            while samples < 20 {
                let pt = [rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000)),
                          rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000))];
                let (Some(a), Some(b)) = (f.eval(&pt), g.eval(&pt)) else { continue };
                samples += 1;
                vanishes &= (a - b).is_zero();
            }
            prop_assert_eq!(diff.is_zero(), vanishes);
        }
    }
}
