//! The quadratic tower `K_0 ⊂ K_1 ⊂ ... ⊂ K_m`, where `K_0` is `Q` or `Q(t)` and
//! `K_{k} = K_{k-1}(√d_k)` for a positive non-square `d_k ∈ K_{k-1}`.
//!
//! Elements are stored in their minimal level: an element of level `k` is a
//! pair `a + b√d_k` with `a, b ∈ K_{k-1}` and `b ≠ 0`. Since `1, √d_k` is a basis
//! of `K_k` over `K_{k-1}`, this representation is unique and structural
//! equality is field equality. The tower only ever grows, so an element's
//! representation stays valid as further levels are appended.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_rational::{BigRational, Ratio};

use crate::ratfunc::RatFunc;
use crate::FieldError;

/// Base field of a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    /// `Q`, an Archimedean field.
    Rationals,
    /// `Q(t)` ordered so that `t` is a positive infinitesimal.
    RationalFunctions,
}

/// Sign of a field element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Valuation value: multiples of powers of one half, stored as a reduced ratio.
pub type Valuation = Ratio<i64>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    Base(RatFunc),
    /// `a + b·√d_level` with `a, b` of smaller level and `b ≠ 0`.
    Quad { level: usize, a: Box<Repr>, b: Box<Repr> },
}

impl Repr {
    pub(crate) fn zero() -> Repr {
        Repr::Base(RatFunc::zero())
    }

    fn one() -> Repr {
        Repr::Base(RatFunc::one())
    }

    pub(crate) fn level(&self) -> usize {
        match self {
            Repr::Base(_) => 0,
            Repr::Quad { level, .. } => *level,
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Repr::Base(r) if r.is_zero())
    }

    fn is_one(&self) -> bool {
        matches!(self, Repr::Base(r) if r.is_one())
    }

    fn quad(level: usize, a: Repr, b: Repr) -> Repr {
        if b.is_zero() {
            a
        } else {
            Repr::Quad { level, a: Box::new(a), b: Box::new(b) }
        }
    }

    /// Coordinates over `K_{k-1}` when viewed in `K_k` (`k ≥ self.level()`).
    fn split(&self, k: usize) -> (Repr, Repr) {
        match self {
            Repr::Quad { level, a, b } if *level == k => ((**a).clone(), (**b).clone()),
            _ => (self.clone(), Repr::zero()),
        }
    }

    fn add(&self, other: &Repr) -> Repr {
        if let (Repr::Base(x), Repr::Base(y)) = (self, other) {
            return Repr::Base(x + y);
        }
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let k = self.level().max(other.level());
        let (a1, b1) = self.split(k);
        let (a2, b2) = other.split(k);
        Repr::quad(k, a1.add(&a2), b1.add(&b2))
    }

    fn neg(&self) -> Repr {
        match self {
            Repr::Base(x) => Repr::Base(-x),
            Repr::Quad { level, a, b } => {
                Repr::Quad { level: *level, a: Box::new(a.neg()), b: Box::new(b.neg()) }
            }
        }
    }

    fn sub(&self, other: &Repr) -> Repr {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Repr, rads: &[Repr]) -> Repr {
        if let (Repr::Base(x), Repr::Base(y)) = (self, other) {
            return Repr::Base(x * y);
        }
        if self.is_zero() || other.is_zero() {
            return Repr::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let k = self.level().max(other.level());
        let (a1, b1) = self.split(k);
        let (a2, b2) = other.split(k);
        if b2.is_zero() {
            return Repr::quad(k, a1.mul(&a2, rads), b1.mul(&a2, rads));
        }
        if b1.is_zero() {
            return Repr::quad(k, a1.mul(&a2, rads), a1.mul(&b2, rads));
        }
        let d = &rads[k - 1];
        let a = a1.mul(&a2, rads).add(&b1.mul(&b2, rads).mul(d, rads));
        let b = a1.mul(&b2, rads).add(&b1.mul(&a2, rads));
        Repr::quad(k, a, b)
    }

    /// `a² - b²d` for an element of level `k = self.level() ≥ 1`; nonzero for nonzero input.
    fn norm_down(a: &Repr, b: &Repr, k: usize, rads: &[Repr]) -> Repr {
        a.mul(a, rads).sub(&b.mul(b, rads).mul(&rads[k - 1], rads))
    }

    fn inv(&self, rads: &[Repr]) -> Option<Repr> {
        match self {
            Repr::Base(x) => x.recip().map(Repr::Base),
            Repr::Quad { level, a, b } => {
                let n = Repr::norm_down(a, b, *level, rads);
                let ninv = n.inv(rads)?;
                Some(Repr::quad(*level, a.mul(&ninv, rads), b.neg().mul(&ninv, rads)))
            }
        }
    }

    pub(crate) fn sign(&self, rads: &[Repr]) -> Sign {
        match self {
            Repr::Base(x) => Sign::from_ordering(x.signum()),
            Repr::Quad { level, a, b } => {
                let sa = a.sign(rads);
                let sb = b.sign(rads);
                if sa == Sign::Zero || sa == sb {
                    return sb;
                }
                // Opposite signs: the larger of |a| and |b|√d wins, compared via squares.
                let diff = Repr::norm_down(a, b, *level, rads);
                match diff.sign(rads) {
                    Sign::Positive => sa,
                    Sign::Negative => sb,
                    Sign::Zero => unreachable!("radicand d_{level} is a square one level down"),
                }
            }
        }
    }

    /// Nonnegative square root inside `K_top`, if one exists there.
    pub(crate) fn sqrt_in(&self, top: usize, rads: &[Repr]) -> Option<Repr> {
        debug_assert!(self.level() <= top);
        if top == 0 {
            return match self {
                Repr::Base(x) => x.sqrt_exact().map(Repr::Base),
                Repr::Quad { .. } => None,
            };
        }
        if self.sign(rads) == Sign::Negative {
            return None;
        }
        let (a, b) = self.split(top);
        let d = &rads[top - 1];
        if b.is_zero() {
            // (c + e√d)² = a forces c = 0 or e = 0.
            if let Some(c) = a.sqrt_in(top - 1, rads) {
                return Some(c);
            }
            let a_over_d = a.mul(&d.inv(rads).expect("radicands are nonzero"), rads);
            return a_over_d.sqrt_in(top - 1, rads).map(|e| Repr::quad(top, Repr::zero(), e));
        }
        // (c + e√d)² = a + b√d with b ≠ 0: c² + e²d = a and 2ce = b, so
        // 4c⁴ - 4ac² + b²d = 0 and c² = (a ± √(a² - b²d)) / 2.
        let norm = Repr::norm_down(&a, &b, top, rads);
        let n = norm.sqrt_in(top - 1, rads)?;
        let half = Repr::Base(RatFunc::from_rational(BigRational::new(1.into(), 2.into())));
        for cand in [a.add(&n), a.sub(&n)] {
            let c2 = cand.mul(&half, rads);
            let Some(c) = c2.sqrt_in(top - 1, rads) else { continue };
            if c.is_zero() {
                continue;
            }
            let two_c = c.add(&c);
            let e = b.mul(&two_c.inv(rads).expect("c is nonzero"), rads);
            let root = Repr::quad(top, c, e);
            return Some(if root.sign(rads) == Sign::Negative { root.neg() } else { root });
        }
        None
    }

    /// Natural valuation of the order, extending the `t`-adic one. `None` for zero.
    pub(crate) fn valuation(&self, rads: &[Repr]) -> Option<Valuation> {
        match self {
            Repr::Base(x) => x.valuation().map(Valuation::from_integer),
            Repr::Quad { level, a, b } => {
                let d = &rads[level - 1];
                let vd = d.valuation(rads).expect("radicands are nonzero");
                let vb = b.valuation(rads).expect("b is nonzero") + vd / 2;
                let Some(va) = a.valuation(rads) else {
                    return Some(vb);
                };
                if va != vb {
                    return Some(va.min(vb));
                }
                // Equal valuations: terms of equal sign cannot cancel. Otherwise the
                // conjugate a - b√d has equal-sign terms, valuation va, and
                // v(x) + v(conjugate) = v(a² - b²d).
                if a.sign(rads) == b.sign(rads) {
                    return Some(va);
                }
                let n = Repr::norm_down(a, b, *level, rads);
                Some(n.valuation(rads).expect("norm is nonzero") - va)
            }
        }
    }

    fn write(&self, out: &mut String, rads: &[Repr]) {
        match self {
            Repr::Base(x) => out.push_str(&x.to_string()),
            Repr::Quad { level, a, b } => {
                let radical = {
                    let mut s = String::from("sqrt(");
                    rads[level - 1].write(&mut s, rads);
                    s.push(')');
                    s
                };
                let mut first = true;
                if !a.is_zero() {
                    a.write(out, rads);
                    first = false;
                }
                let (negative, mag) = match b.sign(rads) {
                    Sign::Negative => (true, b.neg()),
                    _ => (false, (**b).clone()),
                };
                match (first, negative) {
                    (true, true) => out.push('-'),
                    (true, false) => {}
                    (false, true) => out.push_str(" - "),
                    (false, false) => out.push_str(" + "),
                }
                if mag.is_one() {
                    out.push_str(&radical);
                } else {
                    out.push('(');
                    mag.write(out, rads);
                    out.push_str(")*");
                    out.push_str(&radical);
                }
            }
        }
    }
}

struct TowerInner {
    base: Base,
    radicands: RwLock<Vec<Repr>>,
}

/// Field descriptor: a base field plus the ordered list of adjoined radicands.
///
/// Cloning shares the same tower. Adjunctions are serialized through a lock;
/// concurrent reads are safe.
#[derive(Clone)]
pub struct Tower(Arc<TowerInner>);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower").field("base", &self.0.base).field("height", &self.height()).finish()
    }
}

impl Tower {
    pub fn new(base: Base) -> Self {
        Tower(Arc::new(TowerInner { base, radicands: RwLock::new(Vec::new()) }))
    }

    pub fn rationals() -> Self {
        Self::new(Base::Rationals)
    }

    pub fn rational_functions() -> Self {
        Self::new(Base::RationalFunctions)
    }

    pub fn base(&self) -> Base {
        self.0.base
    }

    /// Number of adjoined square roots.
    pub fn height(&self) -> usize {
        self.read().len()
    }

    pub fn same(&self, other: &Tower) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// The adjoined radicands, in order.
    pub fn radicands(&self) -> Vec<FieldElement> {
        self.read().iter().map(|r| self.wrap(r.clone())).collect()
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, Vec<Repr>> {
        self.0.radicands.read().unwrap_or_else(|e| e.into_inner())
    }

    pub(crate) fn wrap(&self, repr: Repr) -> FieldElement {
        FieldElement { tower: self.clone(), repr }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(Repr::zero())
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(Repr::one())
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.wrap(Repr::Base(RatFunc::from_int(n)))
    }

    /// The rational `n/d`. Panics if `d` is zero.
    pub fn from_ratio(&self, n: i64, d: i64) -> FieldElement {
        assert!(d != 0, "zero denominator");
        self.from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(&self, q: BigRational) -> FieldElement {
        self.wrap(Repr::Base(RatFunc::from_rational(q)))
    }

    /// Lifts a rational function; fails over `Q` unless it is constant.
    pub fn from_ratfunc(&self, r: RatFunc) -> Result<FieldElement, FieldError> {
        if self.base() == Base::Rationals && !r.is_constant() {
            return Err(FieldError::WrongBase);
        }
        Ok(self.wrap(Repr::Base(r)))
    }

    /// The infinitesimal `t`; only available over `Q(t)`.
    pub fn t(&self) -> Result<FieldElement, FieldError> {
        self.from_ratfunc(RatFunc::t())
    }

    /// Appends `√radicand` as a new level and returns it.
    ///
    /// Fails if the radicand is not positive or is already a square in the
    /// current top field.
    pub fn adjoin_sqrt(&self, radicand: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(radicand);
        let mut rads = self.0.radicands.write().unwrap_or_else(|e| e.into_inner());
        if radicand.repr.sign(&rads) != Sign::Positive {
            return Err(FieldError::NegativeRadicand);
        }
        let top = rads.len();
        if radicand.repr.sqrt_in(top, &rads).is_some() {
            return Err(FieldError::AlreadySquare);
        }
        rads.push(radicand.repr.clone());
        Ok(self.wrap(Repr::quad(top + 1, Repr::zero(), Repr::one())))
    }

    fn check_same(&self, x: &FieldElement) {
        assert!(self.same(&x.tower), "field elements belong to different towers");
    }

    /// Parses an element in the text grammar, adjoining square roots as needed.
    pub fn parse(&self, src: &str) -> Result<FieldElement, crate::ParseError> {
        crate::parse::parse_element(src, self)
    }
}

/// An element of a quadratic tower.
#[derive(Clone)]
pub struct FieldElement {
    tower: Tower,
    repr: Repr,
}

impl FieldElement {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// Smallest tower level containing this element.
    pub fn level(&self) -> usize {
        self.repr.level()
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.repr.is_one()
    }

    /// The base-field value if the element lies in level 0.
    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match &self.repr {
            Repr::Base(r) => Some(r),
            Repr::Quad { .. } => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_ratfunc().and_then(RatFunc::as_rational)
    }

    fn with<T>(&self, f: impl FnOnce(&[Repr]) -> T) -> T {
        let rads = self.tower.read();
        f(&rads)
    }

    fn binop(&self, other: &FieldElement, f: impl FnOnce(&Repr, &Repr, &[Repr]) -> Repr) -> FieldElement {
        self.tower.check_same(other);
        let r = self.with(|rads| f(&self.repr, &other.repr, rads));
        self.tower.wrap(r)
    }

    pub fn sign(&self) -> Sign {
        self.with(|rads| self.repr.sign(rads))
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    /// Total order of the field.
    pub fn cmp_value(&self, other: &FieldElement) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> FieldElement {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        let r = self.with(|rads| self.repr.inv(rads)).ok_or(FieldError::DivisionByZero)?;
        Ok(self.tower.wrap(r))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn square(&self) -> FieldElement {
        self * self
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.tower.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Square root inside the current tower, without adjoining anything.
    pub fn sqrt_existing(&self) -> Option<FieldElement> {
        let r = self.with(|rads| self.repr.sqrt_in(rads.len(), rads))?;
        Some(self.tower.wrap(r))
    }

    /// Nonnegative square root, adjoining `√self` to the tower if it is not
    /// already a square there.
    pub fn sqrt(&self) -> Result<FieldElement, FieldError> {
        match self.sign() {
            Sign::Negative => return Err(FieldError::NegativeRadicand),
            Sign::Zero => return Ok(self.tower.zero()),
            Sign::Positive => {}
        }
        loop {
            if let Some(root) = self.sqrt_existing() {
                return Ok(root);
            }
            match self.tower.adjoin_sqrt(self) {
                Ok(root) => return Ok(root),
                // Another thread extended the tower in between; test again.
                Err(FieldError::AlreadySquare) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    /// Natural valuation; `None` for zero. Positive means infinitesimal.
    pub fn valuation(&self) -> Option<Valuation> {
        self.with(|rads| self.repr.valuation(rads))
    }

    /// `|x| < 1/n` for every positive integer `n`.
    pub fn is_infinitesimal(&self) -> bool {
        self.valuation().map_or(true, |v| v > Valuation::from_integer(0))
    }

    /// `|x| < n` for some positive integer `n`.
    pub fn is_finite_elem(&self) -> bool {
        self.valuation().map_or(true, |v| v >= Valuation::from_integer(0))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        if self.repr != other.repr {
            return false;
        }
        if self.tower.same(&other.tower) {
            return true;
        }
        // Distinct towers: equal iff the radicands the element uses agree.
        let k = self.repr.level();
        let a = self.tower.read();
        let b = other.tower.read();
        self.tower.base() == other.tower.base() && a.get(..k) == b.get(..k)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.with(|rads| self.repr.write(&mut s, rads));
        f.write_str(&s)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.binop(rhs, $body)
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b, _| a.add(b));
forward_binop!(Sub, sub, |a, b, _| a.sub(b));
forward_binop!(Mul, mul, |a, b, rads| a.mul(b, rads));

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.tower.wrap(self.repr.neg())
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let q = Tower::rationals();
        let sum = q.from_ratio(1, 2) + q.from_ratio(1, 3);
        assert_eq!(sum, q.from_ratio(5, 6));
        assert_eq!(q.from_int(1).try_div(&q.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn difference_of_squares_over_sqrt2() {
        let q = Tower::rationals();
        let r2 = q.from_int(2).sqrt().unwrap();
        assert_eq!(q.height(), 1);
        let one = q.one();
        let prod = (&one + &r2) * (&r2 - &one);
        assert!(prod.is_one());
        assert_eq!(r2.square(), q.from_int(2));
    }

    #[test]
    fn t_times_inverse() {
        let k = Tower::rational_functions();
        let t = k.t().unwrap();
        assert!((&t * &t.inv().unwrap()).is_one());
        assert_eq!(Tower::rationals().t().unwrap_err(), FieldError::WrongBase);
    }

    #[test]
    fn signs() {
        let k = Tower::rational_functions();
        let t = k.t().unwrap();
        assert_eq!(t.sign(), Sign::Positive);
        assert_eq!((&t.square() - &t).sign(), Sign::Negative);

        let q = Tower::rationals();
        let r2 = q.from_int(2).sqrt().unwrap();
        let x = q.one() - &r2 + &r2;
        assert_eq!(x.sign(), Sign::Positive);
        // 3 - 2√2 > 0 since 9 > 8.
        let y = q.from_int(3) - q.from_int(2) * &r2;
        assert_eq!(y.sign(), Sign::Positive);
        assert_eq!((-y).sign(), Sign::Negative);
        // 1 - √2 < 0
        assert_eq!((q.one() - &r2).sign(), Sign::Negative);
    }

    #[test]
    fn sqrt_reuses_existing_levels() {
        let q = Tower::rationals();
        assert_eq!(q.from_ratio(4, 9).sqrt().unwrap(), q.from_ratio(2, 3));
        assert_eq!(q.height(), 0);
        let r2 = q.from_int(2).sqrt().unwrap();
        let r8 = q.from_int(8).sqrt().unwrap();
        assert_eq!(q.height(), 1);
        assert_eq!(r8, q.from_int(2) * &r2);
        // (1 + √2)² = 3 + 2√2 has a root at level 1.
        let s = (q.from_int(3) + q.from_int(2) * &r2).sqrt().unwrap();
        assert_eq!(s, q.one() + &r2);
        assert_eq!(q.height(), 1);
        assert_eq!(q.from_int(-1).sqrt().unwrap_err(), FieldError::NegativeRadicand);
    }

    #[test]
    fn sqrt_grows_over_rational_functions() {
        let k = Tower::rational_functions();
        let t = k.t().unwrap();
        let x = k.one() + t.square();
        let root = x.sqrt().unwrap();
        assert_eq!(k.height(), 1);
        assert_eq!(root.square(), x);
        assert!(root.is_positive());
    }

    #[test]
    fn adjoin_rejects_squares_and_negatives() {
        let q = Tower::rationals();
        assert_eq!(q.adjoin_sqrt(&q.from_int(4)).unwrap_err(), FieldError::AlreadySquare);
        assert_eq!(q.adjoin_sqrt(&q.from_int(-2)).unwrap_err(), FieldError::NegativeRadicand);
        q.adjoin_sqrt(&q.from_int(2)).unwrap();
        assert_eq!(q.adjoin_sqrt(&q.from_int(8)).unwrap_err(), FieldError::AlreadySquare);
    }

    #[test]
    fn valuation_through_tower() {
        let k = Tower::rational_functions();
        let t = k.t().unwrap();
        let s = (k.one() + t.square()).sqrt().unwrap();
        let x = &t * &s;
        assert_eq!(x.valuation(), Some(Valuation::from_integer(1)));
        assert!(x.is_infinitesimal());
        // 1 - √(1+t²) ≈ -t²/2 cancels at valuation 0.
        let c = k.one() - &s;
        assert_eq!(c.valuation(), Some(Valuation::from_integer(2)));
        // √t has valuation 1/2.
        let rt = t.sqrt().unwrap();
        assert_eq!(rt.valuation(), Some(Valuation::new(1, 2)));
        assert!(rt.is_infinitesimal());
        assert!(!t.inv().unwrap().is_finite_elem());
        assert!(!(k.one() + &t).is_infinitesimal());
    }

    #[test]
    fn display_forms() {
        let q = Tower::rationals();
        let r2 = q.from_int(2).sqrt().unwrap();
        assert_eq!((q.one() + &r2).to_string(), "1 + sqrt(2)");
        assert_eq!((q.one() - q.from_ratio(3, 2) * &r2).to_string(), "1 - (3/2)*sqrt(2)");
        assert_eq!((-&r2).to_string(), "-sqrt(2)");
    }
}
