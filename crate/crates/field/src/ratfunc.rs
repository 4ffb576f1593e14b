//! Rational functions `p(t)/q(t)` over the rationals, ordered with `t` a
//! positive infinitesimal.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;

/// A reduced ratio of polynomials. The denominator is monic and coprime to the
/// numerator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn t() -> Self {
        RatFunc { num: Poly::t(), den: Poly::one() }
    }

    pub fn from_rational(q: BigRational) -> Self {
        RatFunc { num: Poly::constant(q), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Builds `num/den` in lowest terms. Returns `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lc = d.leading().expect("nonzero denominator").clone();
        let inv = lc.recip();
        Some(RatFunc { num: n.scale(&inv), den: d.scale(&inv) })
    }

    /// `num/den` for coprime inputs: only rescales to a monic denominator.
    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let inv = den.leading().expect("nonzero denominator").recip();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The rational value if this function is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// Whether the element mentions `t` at all.
    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn recip(&self) -> Option<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        // Powers of a reduced fraction stay reduced; only the sign of the
        // leading denominator coefficient can need fixing, and it is monic.
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Sign in the order where `t` is positive and smaller than every positive rational.
    pub fn signum(&self) -> Ordering {
        let Some(ln) = self.num.lowest() else {
            return Ordering::Equal;
        };
        let ld = self.den.lowest().expect("nonzero denominator");
        let positive = ln.is_positive() == ld.is_positive();
        if positive {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// `t`-adic valuation: `ord_t(num) - ord_t(den)`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let n = self.num.order_at_zero()? as i64;
        let d = self.den.order_at_zero().expect("nonzero denominator") as i64;
        Some(n - d)
    }

    /// Square root inside `Q(t)` if one exists, chosen nonnegative.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.signum() == Ordering::Less {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Reduced forms are unique given a monic denominator, and squaring a
        // reduced form with monic denominator gives the reduced form of the
        // square; so both parts must be squares.
        let n = self.num.sqrt_exact()?;
        let d = self.den.sqrt_exact()?;
        let root = RatFunc::new(n, d)?;
        Some(if root.signum() == Ordering::Less { -&root } else { root })
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        if g.is_one() {
            // Coprime denominators: the sum is already in lowest terms.
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::normalized(num, &self.den * &rhs.den);
        }
        let d1 = self.den.div_rem(&g).0;
        let d2 = rhs.den.div_rem(&g).0;
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        RatFunc::new(num, &(&d1 * &d2) * &g).expect("nonzero denominator")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { num: &self.num * &rhs.num, den: Poly::one() };
        }
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_rem(&g1).0;
        let d2 = rhs.den.div_rem(&g1).0;
        let n2 = rhs.num.div_rem(&g2).0;
        let d1 = self.den.div_rem(&g2).0;
        RatFunc::normalized(&n1 * &n2, &d1 * &d2)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            let single_term = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
            return if single_term { write!(f, "{}", self.num) } else { write!(f, "({})", self.num) };
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> RatFunc {
        RatFunc::from_int(n)
    }

    #[test]
    fn t_times_reciprocal_is_one() {
        let t = RatFunc::t();
        assert!((&t * &t.recip().unwrap()).is_one());
    }

    #[test]
    fn lowest_coefficient_sign_rule() {
        let t = RatFunc::t();
        assert_eq!(t.signum(), Ordering::Greater);
        // -t + t^2 is negative for small positive t.
        let x = &(-&t) + &(&t * &t);
        assert_eq!(x.signum(), Ordering::Less);
        // 1/(t - t^2): denominator lowest coefficient is positive.
        let d = RatFunc::new(Poly::one(), (&t - &(&t * &t)).numer().clone()).unwrap();
        assert_eq!(d.signum(), Ordering::Greater);
        assert_eq!(RatFunc::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn reduced_form_is_canonical() {
        let t = RatFunc::t();
        let one_plus_t = &c(1) + &t;
        let a = &(&one_plus_t * &one_plus_t) * &one_plus_t.recip().unwrap();
        assert_eq!(a, one_plus_t);
        assert!(a.denom().is_one());
    }

    #[test]
    fn valuations() {
        let t = RatFunc::t();
        assert_eq!(t.valuation(), Some(1));
        assert_eq!(t.recip().unwrap().valuation(), Some(-1));
        assert_eq!((&c(1) + &t).valuation(), Some(0));
        assert_eq!(RatFunc::zero().valuation(), None);
    }

    #[test]
    fn exact_sqrt_in_base() {
        let t = RatFunc::t();
        let one_plus_t = &c(1) + &t;
        let sq = &one_plus_t * &one_plus_t;
        assert_eq!(sq.sqrt_exact(), Some(one_plus_t));
        assert_eq!((&c(1) + &(&t * &t)).sqrt_exact(), None);
        assert_eq!(t.sqrt_exact(), None);
        assert_eq!((-&t).sqrt_exact(), None);
    }
}
