//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Elements are stored over the full basis `{ζ_n^k : 0 ≤ k < n}` and kept in a
//! canonical form: the coefficient vector is reduced modulo the cyclotomic
//! polynomial `Φ_n`, so only the first `φ(n)` entries can be nonzero. Two values
//! of the same conductor are equal iff their coefficient vectors are equal.
//! Values of different conductors are compared after lifting both to the least
//! common multiple.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::integer::{lcm, Integer};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Integer coefficients of `Φ_n`, lowest degree first.
fn cyclotomic_polynomial(n: usize) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = divide_monic(&num, &div);
        }
    }
    let poly = Arc::new(num);
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient.
pub fn totient(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// An element of `Q(ζ_n)` in canonical reduced form.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: usize,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(conductor: usize) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        Self { conductor, coeffs: vec![BigRational::zero(); conductor] }
    }

    pub fn one(conductor: usize) -> Self {
        Self::from_rational(conductor, BigRational::one())
    }

    pub fn from_rational(conductor: usize, q: BigRational) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = q;
        z
    }

    pub fn from_integer(conductor: usize, k: i64) -> Self {
        Self::from_rational(conductor, BigRational::from_integer(k.into()))
    }

    /// `ζ_n^k`, reduced.
    pub fn root_of_unity(conductor: usize, k: i64) -> Self {
        let mut coeffs = vec![BigRational::zero(); conductor];
        coeffs[k.rem_euclid(conductor as i64) as usize] = BigRational::one();
        Self::from_full_basis(conductor, coeffs)
    }

    /// Builds an element from an arbitrary (unreduced) vector over `{ζ_n^k}`.
    /// Vectors longer than `n` are folded using `ζ_n^n = 1`.
    pub fn from_full_basis(conductor: usize, coeffs: Vec<BigRational>) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        let mut folded = vec![BigRational::zero(); conductor];
        for (k, c) in coeffs.into_iter().enumerate() {
            folded[k % conductor] += c;
        }
        let mut z = Self { conductor, coeffs: folded };
        z.reduce();
        z
    }

    fn reduce(&mut self) {
        let phi = cyclotomic_polynomial(self.conductor);
        let deg = phi.len() - 1;
        for i in (deg..self.conductor).rev() {
            let c = std::mem::take(&mut self.coeffs[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    let t = &c * BigRational::from_integer(pj.into());
                    self.coeffs[i - deg + j] -= t;
                }
            }
        }
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    /// Canonical coefficients over `{ζ_n^k : 0 ≤ k < n}`; entries at `k ≥ φ(n)` are zero.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The value as a machine integer, if it is a rational integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        let q = self.to_rational()?;
        if q.is_integer() {
            q.to_integer().to_i64()
        } else {
            None
        }
    }

    /// All canonical coefficients are integers, i.e. the element lies in `Z[ζ_n]`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Complex conjugation, `ζ_n ↦ ζ_n^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.conductor;
        let mut out = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[(n - k) % n] += c;
            }
        }
        Self::from_full_basis(n, out)
    }

    /// Re-expresses the element in `Q(ζ_m)`; `m` must be a multiple of the conductor.
    pub fn lift(&self, m: usize) -> Self {
        if m == self.conductor {
            return self.clone();
        }
        assert!(m % self.conductor == 0, "cannot lift conductor {} to {}", self.conductor, m);
        let step = m / self.conductor;
        let mut out = vec![BigRational::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[k * step] = c.clone();
            }
        }
        Self::from_full_basis(m, out)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            (self.clone(), other.clone())
        } else {
            let m = lcm(self.conductor, other.conductor);
            (self.lift(m), other.lift(m))
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Ord for Cyclotomic {
    /// Lexicographic on canonical coefficients after lifting to a common conductor.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.common(other);
        a.coeffs.cmp(&b.coeffs)
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        let n = a.conductor;
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out[(i + j) % n] += x * y;
                }
            }
        }
        Cyclotomic::from_full_basis(n, out)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
        iter.fold(Cyclotomic::zero(1), |acc, x| &acc + &x)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let term = match k {
                0 => String::new(),
                1 => format!("z{}", self.conductor),
                _ => format!("z{}^{}", self.conductor, k),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{term}")?;
            } else {
                write!(f, "{mag}*{term}")?;
            }
        }
        Ok(())
    }
}

/// Rational from a `[num, den]` pair.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        rational(n, d)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, totient(n));
        }
    }

    #[test]
    fn roots_of_unity_have_order_n() {
        for n in 1..25usize {
            let z = Cyclotomic::root_of_unity(n, 1);
            assert_eq!(z.pow(n as u32), Cyclotomic::one(n));
            // Sum of all n-th roots of unity vanishes for n > 1.
            let s: Cyclotomic = (0..n as i64).map(|k| Cyclotomic::root_of_unity(n, k)).sum();
            if n > 1 {
                assert!(s.is_zero(), "n = {n}");
            }
        }
    }

    #[test]
    fn canonical_form_is_unique() {
        // ζ_3^2 = -1 - ζ_3
        let a = Cyclotomic::root_of_unity(3, 2);
        let b = &Cyclotomic::from_integer(3, -1) - &Cyclotomic::root_of_unity(3, 1);
        assert_eq!(a, b);
        assert_eq!(a.coefficients(), b.coefficients());
        // i^2 = -1
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!((&i * &i).to_i64(), Some(-1));
    }

    #[test]
    fn conjugation_and_lifting() {
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(i.conj(), Cyclotomic::root_of_unity(4, 3));
        assert_eq!((&i * &i.conj()).to_i64(), Some(1));
        // ζ_2 = -1 equals ζ_4^2 across conductors.
        assert_eq!(Cyclotomic::root_of_unity(2, 1), Cyclotomic::root_of_unity(4, 2));
        let w = Cyclotomic::root_of_unity(3, 1);
        let lifted = w.lift(12);
        assert_eq!(lifted, Cyclotomic::root_of_unity(12, 4));
        assert_eq!(lifted.conductor(), 12);
    }

    #[test]
    fn rational_detection() {
        // ζ_3 + ζ_3^2 = -1
        let s = &Cyclotomic::root_of_unity(3, 1) + &Cyclotomic::root_of_unity(3, 2);
        assert_eq!(s.to_rational(), Some(q(-1, 1)));
        let half = Cyclotomic::from_rational(5, q(1, 2));
        assert!(!half.is_algebraic_integer());
        assert_eq!(half.to_i64(), None);
        assert!(Cyclotomic::root_of_unity(7, 3).is_algebraic_integer());
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::from_integer(4, -2).to_string(), "-2");
        assert_eq!(Cyclotomic::root_of_unity(4, 3).to_string(), "-z4");
        let v = &Cyclotomic::from_integer(3, 1) + &Cyclotomic::root_of_unity(3, 1).scale(&q(2, 1));
        assert_eq!(v.to_string(), "1 + 2*z3");
    }
}
