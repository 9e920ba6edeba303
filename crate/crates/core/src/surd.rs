//! Exact arithmetic in `Q(sqrt(d))` for a fixed positive integer `d`.
//!
//! The extreme boundary points of a lattice circle of radius `sqrt(N)` are
//! `center +- (sqrt(N), 0)`, which are irrational unless `N` is a square. All
//! lens-containment decisions therefore run in `Q(sqrt(N))`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, Zero};

use crate::geometry::PlanePoint;
use crate::rational::{self, Rational};

/// `a + b * sqrt(root)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub root: u64,
}

impl Surd {
    pub fn rational(a: Rational, root: u64) -> Self {
        Surd { a, b: Rational::zero(), root }
    }

    pub fn new(a: Rational, b: Rational, root: u64) -> Self {
        Surd { a, b, root }.normalized()
    }

    fn normalized(mut self) -> Self {
        if let Some(s) = rational::exact_nth_root(&rational::int(self.root as i64), 2) {
            self.a = &self.a + &self.b * s;
            self.b = Rational::zero();
        }
        self
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    fn check_root(&self, other: &Surd) -> u64 {
        if self.b.is_zero() {
            other.root
        } else if other.b.is_zero() {
            self.root
        } else {
            assert_eq!(self.root, other.root, "mixing surds over different roots");
            self.root
        }
    }

    /// Exact sign of `a + b sqrt(root)`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 * root.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(BigInt::from(self.root));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.a) + rational::to_f64(&self.b) * (self.root as f64).sqrt()
    }

    /// A rational within `2^-bits` (times |b|) of this value.
    pub fn approximate(&self, bits: u32) -> Rational {
        if self.b.is_zero() {
            return self.a.clone();
        }
        let s = rational::sqrt(&rational::int(self.root as i64), bits);
        &self.a + &self.b * s.lo()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum())
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        let root = self.check_root(&o);
        Surd { a: self.a + o.a, b: self.b + o.b, root }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        let root = self.check_root(&o);
        Surd { a: self.a - o.a, b: self.b - o.b, root }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        let root = self.check_root(&o);
        let d = Rational::from_integer(BigInt::from(root));
        Surd {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
            root,
        }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -self.a, b: -self.b, root: self.root }
    }
}

/// A plane point with coordinates in `Q(sqrt(root))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdPoint {
    pub u: Surd,
    pub v: Surd,
}

impl SurdPoint {
    pub fn from_point(p: &PlanePoint, root: u64) -> Self {
        SurdPoint {
            u: Surd::rational(p.u.clone(), root),
            v: Surd::rational(p.v.clone(), root),
        }
    }

    pub fn add(&self, o: &SurdPoint) -> SurdPoint {
        SurdPoint { u: self.u.clone() + o.u.clone(), v: self.v.clone() + o.v.clone() }
    }

    pub fn sub(&self, o: &SurdPoint) -> SurdPoint {
        SurdPoint { u: self.u.clone() - o.u.clone(), v: self.v.clone() - o.v.clone() }
    }

    pub fn scale(&self, s: &Rational) -> SurdPoint {
        let root = self.u.root;
        let f = Surd::rational(s.clone(), root);
        SurdPoint { u: self.u.clone() * f.clone(), v: self.v.clone() * f }
    }

    pub fn norm_sq(&self) -> Surd {
        self.u.clone() * self.u.clone() + self.v.clone() * self.v.clone()
    }

    pub fn dist_sq(&self, o: &SurdPoint) -> Surd {
        self.sub(o).norm_sq()
    }

    pub fn to_plane_point(&self) -> Option<PlanePoint> {
        Some(PlanePoint::new(self.u.as_rational()?.clone(), self.v.as_rational()?.clone()))
    }

    /// Rational point near this one, within about `2^-bits` per coordinate.
    pub fn approximate(&self, bits: u32) -> PlanePoint {
        PlanePoint::new(self.u.approximate(bits), self.v.approximate(bits))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.u.to_f64(), self.v.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn s(a: i64, b: i64, d: u64) -> Surd {
        Surd::new(int(a), int(b), d)
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 3 - sqrt(5) > 0, 2 - sqrt(5) < 0, -3 + sqrt(5) < 0
        assert_eq!(s(3, -1, 5).signum(), Ordering::Greater);
        assert_eq!(s(2, -1, 5).signum(), Ordering::Less);
        assert_eq!(s(-3, 1, 5).signum(), Ordering::Less);
        assert_eq!(s(0, 0, 5).signum(), Ordering::Equal);
    }

    #[test]
    fn perfect_square_roots_collapse() {
        let x = s(1, 2, 25);
        assert!(x.is_rational());
        assert_eq!(x.a, int(11));
    }

    #[test]
    fn product_matches_floating_point() {
        let x = Surd::new(ratio(1, 2), int(3), 7);
        let y = Surd::new(int(-2), ratio(1, 3), 7);
        let p = x.clone() * y.clone();
        assert!((p.to_f64() - x.to_f64() * y.to_f64()).abs() < 1e-12);
        // (sqrt 7)^2 = 7
        assert_eq!((s(0, 1, 7) * s(0, 1, 7)).as_rational(), Some(&int(7)));
    }
}
