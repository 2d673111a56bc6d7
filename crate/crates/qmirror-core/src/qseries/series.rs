//! Multivariate truncated Laurent series in the redundant Kähler variables
//! `z_1..z_n` and equivariant variables `a_1..a_n`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{QRat, QSeriesError};

/// Laurent monomial exponents in all `2n` variables. Ordering is
/// lexicographic on `(z, a)`, which fixes the iteration order of every
/// series.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExponentMonomial {
    pub z: Vec<i64>,
    pub a: Vec<i64>,
}

impl ExponentMonomial {
    pub fn unit(n: usize) -> Self {
        ExponentMonomial {
            z: vec![0; n],
            a: vec![0; n],
        }
    }

    pub fn from_z(z: Vec<i64>) -> Self {
        let n = z.len();
        ExponentMonomial { z, a: vec![0; n] }
    }

    pub fn from_a(a: Vec<i64>) -> Self {
        let n = a.len();
        ExponentMonomial { z: vec![0; n], a }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn is_unit(&self) -> bool {
        self.z.iter().all(|&e| e == 0) && self.a.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &ExponentMonomial) -> ExponentMonomial {
        ExponentMonomial {
            z: self.z.iter().zip(&other.z).map(|(x, y)| x + y).collect(),
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> ExponentMonomial {
        ExponentMonomial {
            z: self.z.iter().map(|x| x * e).collect(),
            a: self.a.iter().map(|x| x * e).collect(),
        }
    }

    pub fn inverse(&self) -> ExponentMonomial {
        self.pow(-1)
    }

    /// Swap the `z` and `a` exponent blocks (the variable half of the mirror
    /// map).
    pub fn swapped(&self) -> ExponentMonomial {
        ExponentMonomial {
            z: self.a.clone(),
            a: self.z.clone(),
        }
    }

    /// First nonzero exponent, scanning `z` then `a`.
    pub fn leading_sign(&self) -> i64 {
        for &e in self.z.iter().chain(&self.a) {
            if e != 0 {
                return e.signum();
            }
        }
        0
    }
}

impl fmt::Debug for ExponentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExponentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (i, &e) in self.z.iter().enumerate() {
            if e != 0 {
                if any {
                    write!(f, "*")?;
                }
                any = true;
                if e == 1 {
                    write!(f, "z{}", i + 1)?;
                } else {
                    write!(f, "z{}^{}", i + 1, e)?;
                }
            }
        }
        for (i, &e) in self.a.iter().enumerate() {
            if e != 0 {
                if any {
                    write!(f, "*")?;
                }
                any = true;
                if e == 1 {
                    write!(f, "a{}", i + 1)?;
                } else {
                    write!(f, "a{}^{}", i + 1, e)?;
                }
            }
        }
        if !any {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Two integer grading functionals with upper bounds. A monomial is kept iff
/// `lz·zExp ≤ nz` and `la·aExp ≤ na`; there is no lower cutoff.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncationSpec {
    pub lz: Vec<i64>,
    pub la: Vec<i64>,
    pub nz: i64,
    pub na: i64,
}

impl TruncationSpec {
    pub fn new(lz: Vec<i64>, la: Vec<i64>, nz: i64, na: i64) -> Self {
        assert_eq!(lz.len(), la.len());
        TruncationSpec { lz, la, nz, na }
    }

    pub fn n(&self) -> usize {
        self.lz.len()
    }

    pub fn grade_z(&self, z: &[i64]) -> i64 {
        self.lz.iter().zip(z).map(|(c, e)| c * e).sum()
    }

    pub fn grade_a(&self, a: &[i64]) -> i64 {
        self.la.iter().zip(a).map(|(c, e)| c * e).sum()
    }

    pub fn contains(&self, m: &ExponentMonomial) -> bool {
        self.grade_z(&m.z) <= self.nz && self.grade_a(&m.a) <= self.na
    }

    /// Same functionals, bounds raised by `(dz, da)`.
    pub fn enlarged(&self, dz: i64, da: i64) -> TruncationSpec {
        TruncationSpec {
            lz: self.lz.clone(),
            la: self.la.clone(),
            nz: self.nz + dz,
            na: self.na + da,
        }
    }

    /// Functionals and bounds exchanged (the truncation half of the mirror
    /// map).
    pub fn swapped(&self) -> TruncationSpec {
        TruncationSpec {
            lz: self.la.clone(),
            la: self.lz.clone(),
            nz: self.na,
            na: self.nz,
        }
    }
}

/// Finite map from monomials to coefficients, closed under the truncation
/// spec: every stored monomial is in-window and no stored coefficient is
/// zero.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    spec: TruncationSpec,
    terms: BTreeMap<ExponentMonomial, QRat>,
}

impl TruncatedSeries {
    pub fn zero(spec: TruncationSpec) -> Self {
        TruncatedSeries {
            spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: TruncationSpec) -> Self {
        let n = spec.n();
        Self::from_term(spec, ExponentMonomial::unit(n), QRat::one())
    }

    pub fn from_term(spec: TruncationSpec, mono: ExponentMonomial, coeff: QRat) -> Self {
        let mut s = Self::zero(spec);
        s.add_term(mono, coeff);
        s
    }

    pub fn spec(&self) -> &TruncationSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExponentMonomial, &QRat)> {
        self.terms.iter()
    }

    /// Add `coeff · mono`, dropping out-of-window monomials and zeros.
    pub fn add_term(&mut self, mono: ExponentMonomial, coeff: QRat) {
        if coeff.is_zero() || !self.spec.contains(&mono) {
            return;
        }
        match self.terms.entry(mono) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Exact coefficient of an in-window monomial (0 if absent); erring for
    /// monomials beyond the truncation bounds, whose coefficient is unknown.
    pub fn coefficient(&self, mono: &ExponentMonomial) -> Result<QRat, QSeriesError> {
        if !self.spec.contains(mono) {
            return Err(QSeriesError::OutOfTruncationRange);
        }
        Ok(self.terms.get(mono).cloned().unwrap_or_else(QRat::zero))
    }

    pub fn constant_term(&self) -> QRat {
        let unit = ExponentMonomial::unit(self.spec.n());
        self.terms.get(&unit).cloned().unwrap_or_else(QRat::zero)
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, QSeriesError> {
        if self.spec != other.spec {
            return Err(QSeriesError::SpecMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, QSeriesError> {
        if self.spec != other.spec {
            return Err(QSeriesError::SpecMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, QSeriesError> {
        if self.spec != other.spec {
            return Err(QSeriesError::SpecMismatch);
        }
        let mut out = TruncatedSeries::zero(self.spec.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if out.spec.contains(&m) {
                    out.add_term(m, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QRat) -> TruncatedSeries {
        if c.is_zero() {
            return TruncatedSeries::zero(self.spec.clone());
        }
        TruncatedSeries {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), -x)).collect(),
        }
    }

    /// Multiply by `coeff · mono` (exact: support shifts, out-of-window
    /// results are dropped).
    pub fn mul_monomial(&self, mono: &ExponentMonomial, coeff: &QRat) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.spec.clone());
        if coeff.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.add_term(m.mul(mono), c * coeff);
        }
        out
    }

    /// Replace the spec, dropping terms that fall outside the new window.
    pub fn retruncated(&self, spec: TruncationSpec) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(spec);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Apply the variable swap and coefficient-wise `q ↦ q^{−1}`.
    pub fn tau(&self) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.spec.swapped());
        for (m, c) in &self.terms {
            out.add_term(m.swapped(), c.invert_q());
        }
        out
    }

    /// Map coefficients in place (used by per-monomial q-twists).
    pub fn map_terms<F>(&self, mut f: F) -> TruncatedSeries
    where
        F: FnMut(&ExponentMonomial, &QRat) -> QRat,
    {
        let mut out = TruncatedSeries::zero(self.spec.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}]·{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec2(nz: i64, na: i64) -> TruncationSpec {
        TruncationSpec::new(vec![1, 1], vec![1, 1], nz, na)
    }

    fn z1(spec: &TruncationSpec) -> TruncatedSeries {
        TruncatedSeries::from_term(
            spec.clone(),
            ExponentMonomial::from_z(vec![1, 0]),
            QRat::one(),
        )
    }

    #[test]
    fn one_plus_x_times_one_minus_x() {
        let spec = spec2(2, 2);
        let one = TruncatedSeries::one(spec.clone());
        let x = z1(&spec);
        let lhs = one.add(&x).unwrap();
        let rhs = one.sub(&x).unwrap();
        let p = lhs.mul(&rhs).unwrap();
        // 1 − x²
        let mut expect = TruncatedSeries::one(spec.clone());
        expect.add_term(ExponentMonomial::from_z(vec![2, 0]), QRat::from_int(-1));
        assert_eq!(p, expect);
    }

    #[test]
    fn absent_in_range_coefficient_is_zero() {
        let spec = spec2(2, 2);
        let s = TruncatedSeries::one(spec);
        let m = ExponentMonomial::from_z(vec![1, 1]);
        assert!(s.coefficient(&m).unwrap().is_zero());
        let far = ExponentMonomial::from_z(vec![2, 1]);
        assert_eq!(
            s.coefficient(&far),
            Err(QSeriesError::OutOfTruncationRange)
        );
    }

    #[test]
    fn spec_mismatch_is_rejected() {
        let a = TruncatedSeries::one(spec2(2, 2));
        let b = TruncatedSeries::one(spec2(3, 2));
        assert_eq!(a.add(&b), Err(QSeriesError::SpecMismatch));
    }

    #[test]
    fn truncation_drops_high_order_products() {
        let spec = spec2(1, 0);
        let x = z1(&spec);
        let sq = x.mul(&x).unwrap();
        assert!(sq.is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        // Exact for supports of nonnegative grade: both association orders
        // drop the same out-of-window products.
        #[test]
        fn multiplication_is_associative(
            seed_a in 0u64..1000, seed_b in 0u64..1000, seed_c in 0u64..1000,
        ) {
            use rand::{rngs::StdRng, Rng, SeedableRng};
            let spec = spec2(3, 3);
            let build = |seed: u64| {
                let mut rng = StdRng::seed_from_u64(seed);
                let mut s = TruncatedSeries::zero(spec.clone());
                for _ in 0..4 {
                    let m = ExponentMonomial {
                        z: vec![rng.gen_range(0i64..=2), rng.gen_range(0i64..=2)],
                        a: vec![rng.gen_range(0i64..=2), rng.gen_range(0i64..=2)],
                    };
                    s.add_term(m, QRat::from_int(rng.gen_range(-3i64..=3)));
                }
                s
            };
            let (a, b, c) = (build(seed_a), build(seed_b), build(seed_c));
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }
    }
}
