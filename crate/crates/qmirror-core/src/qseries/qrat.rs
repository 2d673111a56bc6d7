//! Univariate integer polynomials in `q` and their field of fractions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::QSeriesError;

/// Integer-coefficient polynomial in `q`, coefficients ascending. The zero
/// polynomial is the empty vector; otherwise the leading coefficient is
/// nonzero.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `q^k` for `k ≥ 0`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero")
    }

    /// gcd of the coefficients, nonnegative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn scale_down_exact(&self, d: &BigInt) -> QPoly {
        QPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    debug_assert!(r.is_zero());
                    q
                })
                .collect(),
        }
    }

    fn scale(&self, d: &BigInt) -> QPoly {
        if d.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c * d).collect(),
        }
    }

    pub fn mul_poly(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn add_poly(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        QPoly::new(out)
    }

    pub fn neg_poly(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Exact division; panics if `other` does not divide `self`.
    pub fn div_exact(&self, other: &QPoly) -> QPoly {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut rem = self.coeffs.clone();
        let db = other.degree();
        let lb = other.leading();
        assert!(self.degree() >= db, "non-exact polynomial division");
        let mut quot = vec![BigInt::zero(); self.degree() - db + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + db].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lb);
            assert!(r.is_zero(), "non-exact polynomial division");
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        assert!(rem.iter().all(Zero::is_zero), "non-exact polynomial division");
        QPoly::new(quot)
    }

    /// Pseudo-remainder of `self` by `other` (fraction-free).
    fn pseudo_rem(&self, other: &QPoly) -> QPoly {
        let db = other.degree();
        let lb = other.leading().clone();
        let mut rem = self.clone();
        while !rem.is_zero() && rem.degree() >= db {
            let dr = rem.degree();
            let lr = rem.leading().clone();
            // lb * rem − lr * q^{dr−db} * other
            let mut shifted = vec![BigInt::zero(); dr - db];
            shifted.extend(other.coeffs.iter().map(|c| c * &lr));
            let scaled = rem.scale(&lb);
            let mut out = scaled.coeffs;
            for (i, c) in shifted.into_iter().enumerate() {
                out[i] -= c;
            }
            rem = QPoly::new(out);
        }
        rem
    }

    fn primitive_part(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let c = self.content();
        self.scale_down_exact(&c)
    }

    /// gcd in Z[q] via the primitive pseudo-remainder sequence; result has
    /// positive leading coefficient.
    pub fn gcd_poly(&self, other: &QPoly) -> QPoly {
        if self.is_zero() {
            return other.abs_normalized();
        }
        if other.is_zero() {
            return self.abs_normalized();
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        let mut g = a.scale(&cont);
        if g.leading().is_negative() {
            g = g.neg_poly();
        }
        g
    }

    fn abs_normalized(&self) -> QPoly {
        if !self.is_zero() && self.leading().is_negative() {
            self.neg_poly()
        } else {
            self.clone()
        }
    }

    /// `q^{deg} · self(1/q)`: the coefficient-reversed polynomial.
    fn reversed(&self) -> QPoly {
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if i == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// Rational function in `q`: a canonical `num/den` with integer polynomial
/// parts, `gcd(num, den) = 1` and the denominator's leading coefficient
/// positive. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        QRat { num, den }.canonicalized()
    }

    fn canonicalized(self) -> Self {
        if self.num.is_zero() {
            return QRat {
                num: QPoly::zero(),
                den: QPoly::one(),
            };
        }
        let g = self.num.gcd_poly(&self.den);
        let mut num = self.num.div_exact(&g);
        let mut den = self.den.div_exact(&g);
        if den.leading().is_negative() {
            num = num.neg_poly();
            den = den.neg_poly();
        }
        QRat { num, den }
    }

    pub fn zero() -> Self {
        QRat {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        QRat {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        QRat {
            num: QPoly::constant(BigInt::from(v)),
            den: QPoly::one(),
        }
    }

    pub fn from_poly(p: QPoly) -> Self {
        QRat {
            num: p,
            den: QPoly::one(),
        }
    }

    /// `q^e` for any integer `e`.
    pub fn q_power(e: i64) -> Self {
        if e >= 0 {
            QRat {
                num: QPoly::monomial(e as usize),
                den: QPoly::one(),
            }
        } else {
            QRat {
                num: QPoly::one(),
                den: QPoly::monomial((-e) as usize),
            }
        }
    }

    /// `1 − q^e` for any integer `e`.
    pub fn one_minus_q_power(e: i64) -> Self {
        &QRat::one() - &QRat::q_power(e)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == QPoly::one() && self.den == QPoly::one()
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn inv(&self) -> Result<QRat, QSeriesError> {
        if self.is_zero() {
            return Err(QSeriesError::DivisionByZero);
        }
        Ok(QRat {
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .canonicalized())
    }

    pub fn div(&self, other: &QRat) -> Result<QRat, QSeriesError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<QRat, QSeriesError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = QRat::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Substitute `q ↦ q^{−1}` and renormalize to polynomial/polynomial form.
    pub fn invert_q(&self) -> QRat {
        if self.is_zero() {
            return QRat::zero();
        }
        // f(1/q) = rev(f)(q) · q^{−deg f}; the valuation cancels into rev().
        let dn = self.num.degree() as i64;
        let dd = self.den.degree() as i64;
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        let shift = dd - dn;
        if shift >= 0 {
            num = num.mul_poly(&QPoly::monomial(shift as usize));
        } else {
            den = den.mul_poly(&QPoly::monomial((-shift) as usize));
        }
        QRat { num, den }.canonicalized()
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == QPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        let num = self
            .num
            .mul_poly(&rhs.den)
            .add_poly(&rhs.num.mul_poly(&self.den));
        let den = self.den.mul_poly(&rhs.den);
        QRat { num, den }.canonicalized()
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        // Cross-reduce before multiplying to keep intermediates small.
        let g1 = self.num.gcd_poly(&rhs.den);
        let g2 = rhs.num.gcd_poly(&self.den);
        let num = self
            .num
            .div_exact(&g1)
            .mul_poly(&rhs.num.div_exact(&g2));
        let den = self
            .den
            .div_exact(&g2)
            .mul_poly(&rhs.den.div_exact(&g1));
        QRat { num, den }.canonicalized()
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat {
            num: self.num.neg_poly(),
            den: self.den.clone(),
        }
    }
}

impl AddAssign<&QRat> for QRat {
    fn add_assign(&mut self, rhs: &QRat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QRat> for QRat {
    fn sub_assign(&mut self, rhs: &QRat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&QRat> for QRat {
    fn mul_assign(&mut self, rhs: &QRat) {
        *self = &*self * rhs;
    }
}
