//! Exact arithmetic: arbitrary-precision rationals and quadratic surds.
//!
//! Irrational interval bounds are restricted to quadratic surds a + b·√d
//! (a, b rational, d square-free). Sign tests against rationals reduce to
//! squaring; comparisons between surds over different radicands use interval
//! refinement, which terminates because 1, √d₁, √d₂ are linearly independent
//! over ℚ for distinct square-free d₁, d₂ ≥ 2.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// a + b·√d with b ≠ 0 and d ≥ 2 square-free, hence always irrational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub a: Rat,
    pub b: Rat,
    pub d: u64,
}

/// Outcome of normalising a + b·√d: the radical part may collapse.
pub enum SurdOrRat {
    Rational(Rat),
    Irrational(Surd),
}

fn squarefree_split(d: u64) -> (u64, u64) {
    // d = sq^2 * rest with rest square-free
    let mut rest = d;
    let mut sq = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        while rest.is_multiple_of(p * p) {
            rest /= p * p;
            sq *= p;
        }
        p += 1;
    }
    (sq, rest)
}

impl Surd {
    /// Build a + b·√d, collapsing to a rational when the radical vanishes.
    pub fn make(a: Rat, b: Rat, d: u64) -> SurdOrRat {
        if b.is_zero() || d == 0 {
            return SurdOrRat::Rational(a);
        }
        let (sq, rest) = squarefree_split(d);
        let b = b * Rat::from(BigInt::from(sq));
        if rest <= 1 {
            SurdOrRat::Rational(a + b * Rat::from(BigInt::from(rest)))
        } else {
            SurdOrRat::Irrational(Surd { a, b, d: rest })
        }
    }

    /// Exact comparison with a rational. Never `Equal`.
    pub fn cmp_rat(&self, q: &Rat) -> Ordering {
        // a + b√d vs q  <=>  b√d vs q - a
        let t = q - &self.a;
        let b = &self.b;
        if b.is_positive() {
            if !t.is_positive() {
                return Ordering::Greater;
            }
            // both sides positive: square
            cmp_sq(b, self.d, &t)
        } else {
            if !t.is_negative() {
                return Ordering::Less;
            }
            cmp_sq(&-b.clone(), self.d, &-t).reverse()
        }
    }

    /// Rational bounds lo ≤ a + b√d ≤ hi with width shrinking in `bits`.
    fn bounds(&self, bits: u32) -> (Rat, Rat) {
        let scaled = BigInt::from(self.d) << (2 * bits);
        let root = scaled.sqrt();
        let denom = BigInt::one() << bits;
        let lo = Rat::new(root.clone(), denom.clone());
        let hi = Rat::new(root + BigInt::one(), denom);
        let (slo, shi) = if self.b.is_positive() {
            (&self.b * &lo, &self.b * &hi)
        } else {
            (&self.b * &hi, &self.b * &lo)
        };
        (&self.a + slo, &self.a + shi)
    }

    /// Exact comparison between surds. `Equal` only for identical normal forms.
    pub fn cmp_surd(&self, other: &Surd) -> Ordering {
        if self.d == other.d {
            // (a1 - a2) + (b1 - b2)√d
            let db = &self.b - &other.b;
            return match Surd::make(&self.a - &other.a, db, self.d) {
                SurdOrRat::Rational(r) => r.cmp(&Rat::zero()),
                SurdOrRat::Irrational(s) => s.cmp_rat(&Rat::zero()),
            };
        }
        if self == other {
            return Ordering::Equal;
        }
        // Distinct square-free radicands: the difference is irrational, so
        // refinement separates the two values after finitely many rounds.
        let mut bits = 8u32;
        loop {
            let (lo1, hi1) = self.bounds(bits);
            let (lo2, hi2) = other.bounds(bits);
            if hi1 < lo2 {
                return Ordering::Less;
            }
            if lo1 > hi2 {
                return Ordering::Greater;
            }
            bits *= 2;
            assert!(bits < 1 << 16, "surd comparison failed to separate");
        }
    }

    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.bounds(32);
        let mid = (lo + hi) / rat_int(2);
        rat_to_f64(&mid)
    }
}

/// sign-aware: b√d vs t, all of b, t > 0
fn cmp_sq(b: &Rat, d: u64, t: &Rat) -> Ordering {
    let lhs = b * b * Rat::from(BigInt::from(d));
    let rhs = t * t;
    let c = lhs.cmp(&rhs);
    assert_ne!(c, Ordering::Equal, "surd radicand not square-free");
    c
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // good enough for display / heuristics only
    let nf: f64 = n.to_string().parse().unwrap_or(f64::NAN);
    let df: f64 = d.to_string().parse().unwrap_or(f64::NAN);
    nf / df
}

/// A real number usable as an interval bound: rational or quadratic surd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cut {
    Rat(Rat),
    Surd(Surd),
}

impl Cut {
    pub fn cmp_cut(&self, other: &Cut) -> Ordering {
        match (self, other) {
            (Cut::Rat(a), Cut::Rat(b)) => a.cmp(b),
            (Cut::Rat(a), Cut::Surd(s)) => s.cmp_rat(a).reverse(),
            (Cut::Surd(s), Cut::Rat(b)) => s.cmp_rat(b),
            (Cut::Surd(s), Cut::Surd(t)) => s.cmp_surd(t),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Cut::Rat(_))
    }
}

/// A rational strictly between two distinct real bounds.
pub fn rational_between(lo: &Cut, hi: &Cut) -> Rat {
    debug_assert_eq!(lo.cmp_cut(hi), Ordering::Less);
    match (lo, hi) {
        (Cut::Rat(a), Cut::Rat(b)) => (a + b) / rat_int(2),
        _ => {
            let mut bits = 8u32;
            loop {
                let l = match lo {
                    Cut::Rat(a) => a.clone(),
                    Cut::Surd(s) => s.bounds(bits).1,
                };
                let h = match hi {
                    Cut::Rat(b) => b.clone(),
                    Cut::Surd(s) => s.bounds(bits).0,
                };
                if l < h {
                    return (l + h) / rat_int(2);
                }
                bits *= 2;
                assert!(bits < 1 << 16, "failed to refine bounds");
            }
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b.is_one() {
            write!(f, "sqrt({})", self.d)
        } else if self.b == -Rat::one() {
            write!(f, "-sqrt({})", self.d)
        } else {
            write!(f, "{}*sqrt({})", self.b, self.d)
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Rat(r) => write!(f, "{r}"),
            Cut::Surd(s) => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(a: Rat, b: Rat, d: u64) -> Surd {
        match Surd::make(a, b, d) {
            SurdOrRat::Irrational(s) => s,
            SurdOrRat::Rational(_) => panic!("expected irrational"),
        }
    }

    #[test]
    fn surd_vs_rational() {
        let half_sqrt2 = surd(rat_int(0), rat(1, 2), 2); // ≈ 0.7071
        assert_eq!(half_sqrt2.cmp_rat(&rat(7, 10)), Ordering::Greater);
        assert_eq!(half_sqrt2.cmp_rat(&rat(71, 100)), Ordering::Less);
        assert_eq!(half_sqrt2.cmp_rat(&rat(1, 2)), Ordering::Greater);
    }

    #[test]
    fn surd_vs_surd_mixed_radicands() {
        let s2 = surd(rat_int(0), rat(1, 2), 2); // ≈ 0.707
        let s3 = surd(rat_int(0), rat(1, 3), 3); // ≈ 0.577
        assert_eq!(s2.cmp_surd(&s3), Ordering::Greater);
        assert_eq!(s3.cmp_surd(&s2), Ordering::Less);
        assert_eq!(s2.cmp_surd(&s2), Ordering::Equal);
    }

    #[test]
    fn square_factor_collapses() {
        match Surd::make(rat_int(1), rat_int(1), 4) {
            SurdOrRat::Rational(r) => assert_eq!(r, rat_int(3)),
            _ => panic!("sqrt(4) must collapse"),
        }
        match Surd::make(rat_int(0), rat_int(1), 8) {
            SurdOrRat::Irrational(s) => {
                assert_eq!(s.d, 2);
                assert_eq!(s.b, rat_int(2));
            }
            _ => panic!("sqrt(8) = 2 sqrt(2)"),
        }
    }

    #[test]
    fn between_picks_rational() {
        let s2 = surd(rat_int(0), rat(1, 2), 2);
        let q = rational_between(&Cut::Surd(s2.clone()), &Cut::Rat(rat_int(1)));
        assert_eq!(s2.cmp_rat(&q), Ordering::Less);
        assert!(q < rat_int(1));
    }
}
