//! Laurent polynomials in `q` with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::map::CombinatorialMap;
use crate::reduce::{self, evaluate, ReduceError, RelationWeights};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("quantum integer [n] needs n >= 1, got {0}")]
    NonPositiveQuantumInteger(i64),
    #[error("cannot evaluate at q = 0")]
    ZeroArgument,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Canonical form: no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, coeff.into());
        p
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Substitutes `q -> q^-1`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Exact value at a nonzero rational `q0`.
    pub fn evaluate(&self, q0: &BigRational) -> Result<BigRational, LaurentError> {
        if q0.is_zero() {
            return Err(LaurentError::ZeroArgument);
        }
        let mut total = BigRational::zero();
        for (&e, c) in &self.terms {
            let base = if e < 0 { q0.recip() } else { q0.clone() };
            let power = num_traits::pow(base, e.unsigned_abs() as usize);
            total += BigRational::from_integer(c.clone()) * power;
        }
        Ok(total)
    }
}

/// `[n] = q^(n-1) + q^(n-3) + ... + q^(1-n)`.
pub fn quantum_integer(n: i64) -> Result<LaurentPoly, LaurentError> {
    if n < 1 {
        return Err(LaurentError::NonPositiveQuantumInteger(n));
    }
    let mut p = LaurentPoly::zero();
    let mut e = n - 1;
    while e >= 1 - n {
        p.add_term(e, BigInt::one());
        e -= 2;
    }
    Ok(p)
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::constant(1)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |a, b| a + b)
    }
}

impl Product for LaurentPoly {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(LaurentPoly::one(), |a, b| a * b)
    }
}

/// Descending exponents, e.g. `q^3 + 2*q + 2*q^-1 + q^-3`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match e {
                0 => None,
                1 => Some("q".to_string()),
                _ => Some(format!("q^{e}")),
            };
            match var {
                None => write!(f, "{mag}")?,
                Some(v) if mag.is_one() => write!(f, "{v}")?,
                Some(v) => write!(f, "{mag}*{v}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Parses the grammar produced by `Display`. Whitespace is optional and
    /// terms may appear in any order; repeated exponents are summed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| LaurentError::Parse(format!("{m} in `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        // Split into signed terms. A '-' directly after '^' belongs to the exponent.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                } else if prev.is_some() {
                    return Err(bad("dangling sign"));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
            prev = Some(ch);
        }
        if current.is_empty() {
            return Err(bad("trailing sign"));
        }
        terms.push((negative, current));

        let mut out = LaurentPoly::zero();
        for (negative, term) in terms {
            let (coeff, var) = match term.split_once('*') {
                Some((c, v)) => (Some(c), Some(v)),
                None if term.starts_with('q') => (None, Some(term.as_str())),
                None => (Some(term.as_str()), None),
            };
            let mut c: BigInt = match coeff {
                Some(c) => c.parse().map_err(|_| bad("bad coefficient"))?,
                None => BigInt::one(),
            };
            let e: i64 = match var {
                None => 0,
                Some("q") => 1,
                Some(v) => v
                    .strip_prefix("q^")
                    .ok_or_else(|| bad("expected q or q^<n>"))?
                    .parse()
                    .map_err(|_| bad("bad exponent"))?,
            };
            if negative {
                c = -c;
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

/// The sl3 web polynomial of a planar bipartite graph, computed by reduction
/// with factors `([3], [2], 1)`.
pub fn p3(map: &CombinatorialMap) -> Result<LaurentPoly, ReduceError> {
    map.require_planar()?;
    if !map.is_bipartite() {
        return Err(ReduceError::NotBipartite);
    }
    let result = evaluate(map, &RelationWeights::p3(), reduce::Strategy::Priority);
    debug_assert!(
        !matches!(result, Err(ReduceError::Irreducible(_))),
        "bipartite graph got stuck"
    );
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qi(n: i64) -> LaurentPoly {
        quantum_integer(n).unwrap()
    }

    fn at_one(p: &LaurentPoly) -> BigRational {
        p.evaluate(&BigRational::one()).unwrap()
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(qi(1), LaurentPoly::one());
        assert_eq!(
            qi(2),
            LaurentPoly::monomial(1, 1) + LaurentPoly::monomial(1, -1)
        );
        assert_eq!(qi(3).to_string(), "q^2 + 1 + q^-2");
        assert!(matches!(
            quantum_integer(0),
            Err(LaurentError::NonPositiveQuantumInteger(0))
        ));
        assert!(quantum_integer(-2).is_err());
    }

    #[test]
    fn product_of_two_and_three() {
        let p = qi(2) * qi(3);
        assert_eq!(p.to_string(), "q^3 + 2*q + 2*q^-1 + q^-3");
        assert_eq!(at_one(&p), BigRational::from_integer(6.into()));
        assert_eq!(at_one(&qi(3)), BigRational::from_integer(3.into()));
        assert_eq!(at_one(&qi(2)), BigRational::from_integer(2.into()));
    }

    /// `[2][n] = [n+1] + [n-1]`, both sides expanded term by term: the left
    /// side by direct convolution of coefficient lists, the right by listing
    /// exponents.
    #[test]
    fn chebyshev_recurrence() {
        for n in 2..=10i64 {
            let mut lhs: BTreeMap<i64, i64> = BTreeMap::new();
            for a in [1i64, -1] {
                for k in 0..n {
                    *lhs.entry(a + (n - 1 - 2 * k)).or_default() += 1;
                }
            }
            let mut rhs: BTreeMap<i64, i64> = BTreeMap::new();
            for m in [n + 1, n - 1] {
                for k in 0..m {
                    *rhs.entry(m - 1 - 2 * k).or_default() += 1;
                }
            }
            lhs.retain(|_, c| *c != 0);
            assert_eq!(lhs, rhs, "n = {n}");
            let product = qi(2) * qi(n);
            assert_eq!(product, qi(n + 1) + qi(n - 1));
            let expected: LaurentPoly =
                lhs.iter().map(|(&e, &c)| LaurentPoly::monomial(c, e)).sum();
            assert_eq!(product, expected);
        }
    }

    #[test]
    fn evaluation_at_rationals() {
        let p = qi(2);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            p.evaluate(&half).unwrap(),
            BigRational::new(5.into(), 2.into())
        );
        assert_eq!(
            p.evaluate(&BigRational::zero()),
            Err(LaurentError::ZeroArgument)
        );
    }

    #[test]
    fn zero_and_identity() {
        let p = qi(3);
        assert_eq!(p.clone() + LaurentPoly::zero(), p);
        assert_eq!(p.clone() * LaurentPoly::one(), p);
        assert!((p.clone() - p).is_zero());
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn display_and_parse() {
        let p =
            LaurentPoly::monomial(-3, 4) + LaurentPoly::constant(-1) + LaurentPoly::monomial(1, -1);
        assert_eq!(p.to_string(), "-3*q^4 - 1 + q^-1");
        assert_eq!("-3*q^4 - 1 + q^-1".parse::<LaurentPoly>().unwrap(), p);
        assert_eq!(
            "q^3+2*q+2*q^-1+q^-3".parse::<LaurentPoly>().unwrap(),
            qi(2) * qi(3)
        );
        assert_eq!("0".parse::<LaurentPoly>().unwrap(), LaurentPoly::zero());
        assert!("q^".parse::<LaurentPoly>().is_err());
        assert!("2*x".parse::<LaurentPoly>().is_err());
        assert!("1 +".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn p3_of_small_webs() {
        use crate::catalog;
        assert_eq!(p3(&catalog::circle()).unwrap(), qi(3));
        let theta = p3(&catalog::theta()).unwrap();
        assert_eq!(theta.to_string(), "q^3 + 2*q + 2*q^-1 + q^-3");
        assert_eq!(p3(&CombinatorialMap::empty()).unwrap(), LaurentPoly::one());
        assert_eq!(p3(&catalog::k4()), Err(ReduceError::NotBipartite));
        assert!(matches!(
            p3(&catalog::petersen()),
            Err(ReduceError::NotPlanar(_))
        ));
    }

    #[test]
    fn p3_at_one_is_the_tait_count() {
        for (name, g) in crate::catalog::bipartite_fixtures() {
            let p = p3(&g).unwrap();
            let n = BigInt::from(crate::tait::count_tait(&g));
            assert_eq!(at_one(&p), BigRational::from_integer(n), "{name}");
            assert!(p.is_bar_invariant(), "{name}");
        }
    }

    fn poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..=6, -20i64..=20), 0..6).prop_map(|ts| {
            ts.into_iter()
                .map(|(e, c)| LaurentPoly::monomial(c, e))
                .sum()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly(), b in poly(), c in poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn display_parse_roundtrip(a in poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
        }

        #[test]
        fn evaluation_is_a_ring_map(a in poly(), b in poly(), num in 1i64..6, den in 1i64..6) {
            let q0 = BigRational::new(num.into(), den.into());
            let ev = |p: &LaurentPoly| p.evaluate(&q0).unwrap();
            prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
            prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
        }
    }
}
