//! Dense univariate polynomials over the rationals, in the indeterminate `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial `c0 + c1 t + ... + cn t^n`, coefficients stored lowest degree first.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// The constant polynomial's value, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Order of vanishing at `t = 0`; `None` for zero.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Coefficient of the lowest-degree nonzero term.
    pub fn lowest(&self) -> Option<&BigRational> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Polynomial long division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.degree() == Some(0) || b.degree() == Some(0) {
            return Poly::one();
        }
        let x = primitive_integer(a);
        let y = primitive_integer(b);
        if coprime_mod_p(&x, &y) {
            return Poly::one();
        }
        let g = int_gcd(x, y);
        Poly::from_coeffs(g.into_iter().map(BigRational::from_integer).collect()).monic()
    }

    /// Square root over `Q[t]` if this polynomial is the square of one, with the
    /// root's leading coefficient positive.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        let Some(deg) = self.degree() else {
            return Some(Poly::zero());
        };
        if deg % 2 == 1 {
            return None;
        }
        let lead_root = rational_sqrt(&self.coeffs[deg])?;
        let half = deg / 2;
        // Match coefficients from the top: the root r has degree `half`.
        let mut root = vec![BigRational::zero(); half + 1];
        root[half] = lead_root;
        let two_lead = &root[half] * BigRational::from_integer(BigInt::from(2));
        for k in (0..half).rev() {
            // Coefficient of t^(half + k) in r^2 must equal self's.
            let mut acc = BigRational::zero();
            for i in (k + 1)..=half {
                let j = half + k - i;
                if j > k && j <= half {
                    acc += &root[i] * &root[j];
                }
            }
            root[k] = (&self.coeffs[half + k] - acc) / &two_lead;
        }
        let candidate = Poly::from_coeffs(root);
        (&candidate * &candidate == *self).then_some(candidate)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

/// Primitive integer polynomial with the same roots: clears denominators and
/// divides out the content. Input must be nonzero.
fn primitive_integer(p: &Poly) -> Vec<BigInt> {
    let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    primitive_part(ints)
}

fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() || content.is_one() {
        return v;
    }
    v.iter().map(|c| c / &content).collect()
}

/// Pseudo-remainder of `a` by `b` over the integers.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Primitive remainder sequence gcd of two nonzero primitive polynomials.
fn int_gcd(mut x: Vec<BigInt>, mut y: Vec<BigInt>) -> Vec<BigInt> {
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = primitive_part(pseudo_rem(&x, &y));
        x = y;
        y = r;
    }
    x
}

const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

fn to_mod(v: &[BigInt]) -> Vec<u64> {
    let p = BigInt::from(PRIME);
    v.iter()
        .map(|c| {
            let r = c.mod_floor(&p);
            u64::try_from(r).expect("reduced below the modulus")
        })
        .collect()
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

/// Sufficient test for coprimality over `Q`: if neither leading coefficient
/// vanishes mod p and the gcd mod p is constant, the gcd over `Q` is constant.
fn coprime_mod_p(a: &[BigInt], b: &[BigInt]) -> bool {
    let mut x = to_mod(a);
    let mut y = to_mod(b);
    if x.last() == Some(&0) || y.last() == Some(&0) {
        return false;
    }
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    while !y.is_empty() {
        if y.len() == 1 {
            return true;
        }
        let inv = powmod(*y.last().expect("nonempty"), PRIME - 2);
        while x.len() >= y.len() {
            let c = mulmod(*x.last().expect("nonempty"), inv);
            let shift = x.len() - y.len();
            for (j, &yc) in y.iter().enumerate() {
                x[shift + j] = (x[shift + j] + PRIME - mulmod(c, yc)) % PRIME;
            }
            trim(&mut x);
            if x.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() <= 1
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut c = long.coeffs.clone();
        for (i, x) in short.coeffs.iter().enumerate() {
            c[i] += x;
        }
        Poly::from_coeffs(c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::from_coeffs(c)
    }
}

/// Prints in the element grammar, e.g. `1 - 3/2*t + t^2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match k {
                0 => None,
                1 => Some("t".to_string()),
                _ => Some(format!("t^{k}")),
            };
            match (mono, mag.is_one()) {
                (None, _) => write!(f, "{mag}")?,
                (Some(m), true) => write!(f, "{m}")?,
                (Some(m), false) => write!(f, "{mag}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| q(x, 1)).collect())
    }

    #[test]
    fn division_recovers_dividend() {
        let a = p(&[1, 0, -3, 2, 5]);
        let b = p(&[2, 1, 1]);
        let (qu, r) = a.div_rem(&b);
        assert_eq!(&(&qu * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = p(&[1, 1]); // 1 + t
        let a = &f * &p(&[2, 0, 1]);
        let b = &f * &p(&[-3, 4]);
        assert_eq!(Poly::gcd(&a, &b), f);
        assert_eq!(Poly::gcd(&p(&[3]), &p(&[0, 1])), Poly::one());
    }

    #[test]
    fn exact_square_roots() {
        let r = p(&[1, -2, 3]);
        let sq = &r * &r;
        let root = sq.sqrt_exact().unwrap();
        assert_eq!(&root * &root, sq);
        assert!(p(&[1, 0, 1]).sqrt_exact().is_none());
        assert!(p(&[0, 1]).sqrt_exact().is_none());
        assert_eq!(rational_sqrt(&q(4, 9)), Some(q(2, 3)));
        assert_eq!(rational_sqrt(&q(2, 1)), None);
        assert_eq!(rational_sqrt(&q(-4, 1)), None);
    }

    #[test]
    fn display_uses_grammar_forms() {
        assert_eq!(p(&[1, -2, 1]).to_string(), "1 - 2*t + t^2");
        assert_eq!(Poly::from_coeffs(vec![q(0, 1), q(-3, 2)]).to_string(), "-3/2*t");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
