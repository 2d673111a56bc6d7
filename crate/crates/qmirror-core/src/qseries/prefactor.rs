//! Exponential-of-bilinear-log prefactors and the contributions they dress.
//!
//! A [`LogPrefactor`] with symmetric form `B` over the log variables
//! `(ln z_1..ln z_n, ln a_1..ln a_n)` stands for the function
//! `exp(B(w, w)/ln q)`. Shifting a variable `v ↦ q^s v` leaves the form
//! unchanged and multiplies the series by the monomial
//! `exp(2s·B(e_v, w)) · q^{s²·B(e_v, e_v)}`, read off from the `v`-row.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qrat::QRat;
use super::series::{ExponentMonomial, TruncatedSeries};

/// One of the `2n` series variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    Z(usize),
    A(usize),
}

impl Var {
    pub fn index(self, n: usize) -> usize {
        match self {
            Var::Z(i) => {
                assert!(i < n);
                i
            }
            Var::A(i) => {
                assert!(i < n);
                n + i
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(i) => write!(f, "z{}", i + 1),
            Var::A(i) => write!(f, "a{}", i + 1),
        }
    }
}

/// Symmetric rational bilinear form over the `2n` log variables.
#[derive(Clone, PartialEq, Eq)]
pub struct LogPrefactor {
    n: usize,
    entries: Vec<BigRational>, // (2n)², row-major
}

impl LogPrefactor {
    pub fn zero(n: usize) -> Self {
        LogPrefactor {
            n,
            entries: vec![BigRational::zero(); (2 * n) * (2 * n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * 2 * self.n + j]
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.entries[i * 2 * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Add `c · ln(u) ln(v)` to the represented form (split symmetrically).
    pub fn add_coupling(&mut self, u: Var, v: Var, c: &BigRational) {
        let i = u.index(self.n);
        let j = v.index(self.n);
        let half = c / BigRational::from(BigInt::from(2));
        if i == j {
            *self.entry_mut(i, i) += c;
        } else {
            *self.entry_mut(i, j) += &half;
            *self.entry_mut(j, i) += &half;
        }
    }

    pub fn add(&self, other: &LogPrefactor) -> LogPrefactor {
        assert_eq!(self.n, other.n);
        LogPrefactor {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &LogPrefactor) -> LogPrefactor {
        assert_eq!(self.n, other.n);
        LogPrefactor {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// The form `Σ_i ln z_i ln a_i` (the mirror-comparison coupling).
    pub fn kahler_equivariant_coupling(n: usize) -> LogPrefactor {
        let mut b = LogPrefactor::zero(n);
        let one = BigRational::one();
        for i in 0..n {
            b.add_coupling(Var::Z(i), Var::A(i), &one);
        }
        b
    }

    /// The mirror map on prefactors: the `z`/`a` blocks swap and the overall
    /// sign flips (`ln q ↦ −ln q`).
    pub fn tau(&self) -> LogPrefactor {
        let n = self.n;
        let swap = |i: usize| if i < n { i + n } else { i - n };
        let mut out = LogPrefactor::zero(n);
        for i in 0..2 * n {
            for j in 0..2 * n {
                *out.entry_mut(i, j) = -self.entry(swap(i), swap(j));
            }
        }
        out
    }

    /// Row of the form at a variable, doubled and scaled by `s`: the exponent
    /// vector of the monomial picked up when shifting that variable by `q^s`,
    /// together with the accompanying `q`-power `s²·B(e_v, e_v)`. Panics if
    /// the result is non-integral, which would mean the prefactor does not
    /// represent a monomial-valued shift (never the case for the forms built
    /// by this crate).
    pub fn multiplier_monomial(&self, var: Var, s: i64) -> (ExponentMonomial, i64) {
        let n = self.n;
        let vi = var.index(n);
        let two_s = BigRational::from(BigInt::from(2 * s));
        let mut exps = Vec::with_capacity(2 * n);
        for j in 0..2 * n {
            let e = self.entry(vi, j) * &two_s;
            assert!(e.is_integer(), "non-integral shift multiplier exponent");
            exps.push(rational_to_i64(&e));
        }
        let mono = ExponentMonomial {
            z: exps[..n].to_vec(),
            a: exps[n..].to_vec(),
        };
        let diag = self.entry(vi, vi) * BigRational::from(BigInt::from(s * s));
        assert!(diag.is_integer(), "non-integral shift multiplier q-power");
        (mono, rational_to_i64(&diag))
    }
}

fn rational_to_i64(r: &BigRational) -> i64 {
    debug_assert!(r.is_integer());
    i64::try_from(r.numer()).expect("shift exponent exceeds i64")
}

impl fmt::Debug for LogPrefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogPrefactor[")?;
        let mut any = false;
        for i in 0..2 * self.n {
            for j in i..2 * self.n {
                let e = self.entry(i, j);
                if !e.is_zero() {
                    if any {
                        write!(f, ", ")?;
                    }
                    let c = if i == j { e.clone() } else { e + e };
                    let vi = if i < self.n {
                        alloc::format!("ln z{}", i + 1)
                    } else {
                        alloc::format!("ln a{}", i + 1 - self.n)
                    };
                    let vj = if j < self.n {
                        alloc::format!("ln z{}", j + 1)
                    } else {
                        alloc::format!("ln a{}", j + 1 - self.n)
                    };
                    write!(f, "{c}·{vi}·{vj}")?;
                    any = true;
                }
            }
        }
        write!(f, "]")
    }
}

/// A truncated series dressed with an exponential log-bilinear prefactor:
/// the computational form of a modified I-function contribution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrefactoredSeries {
    pub prefactor: LogPrefactor,
    pub series: TruncatedSeries,
}

impl PrefactoredSeries {
    pub fn new(prefactor: LogPrefactor, series: TruncatedSeries) -> Self {
        assert_eq!(prefactor.n(), series.spec().n());
        PrefactoredSeries { prefactor, series }
    }

    pub fn bare(series: TruncatedSeries) -> Self {
        let n = series.spec().n();
        PrefactoredSeries {
            prefactor: LogPrefactor::zero(n),
            series,
        }
    }

    /// Apply `v ↦ q^s v`. The series coefficients pick up `q^{s·e_v}` per
    /// monomial; the prefactor contributes the monomial-with-q-power
    /// multiplier read off its `v`-row and is itself unchanged.
    pub fn shift(&self, var: Var, s: i64) -> PrefactoredSeries {
        if s == 0 {
            return self.clone();
        }
        let twisted = self.series.map_terms(|m, c| {
            let e = match var {
                Var::Z(i) => m.z[i],
                Var::A(i) => m.a[i],
            };
            c * &QRat::q_power(s * e)
        });
        let (mult_mono, qpow) = self.prefactor.multiplier_monomial(var, s);
        let series = if mult_mono.is_unit() && qpow == 0 {
            twisted
        } else {
            twisted.mul_monomial(&mult_mono, &QRat::q_power(qpow))
        };
        PrefactoredSeries {
            prefactor: self.prefactor.clone(),
            series,
        }
    }

    /// Multiply by `exp(extra(w,w)/ln q)`: pure prefactor bookkeeping.
    pub fn with_added_form(&self, extra: &LogPrefactor) -> PrefactoredSeries {
        PrefactoredSeries {
            prefactor: self.prefactor.add(extra),
            series: self.series.clone(),
        }
    }

    /// The mirror map: swap variable blocks, invert `q` coefficient-wise,
    /// and transform the prefactor form.
    pub fn tau(&self) -> PrefactoredSeries {
        PrefactoredSeries {
            prefactor: self.prefactor.tau(),
            series: self.series.tau(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::series::TruncationSpec;

    fn spec(n: usize, nz: i64, na: i64) -> TruncationSpec {
        TruncationSpec::new(vec![1; n], vec![1; n], nz, na)
    }

    #[test]
    fn bare_shift_twists_coefficients() {
        // series = z1 with zero prefactor, shift z1 by −1.
        let s = TruncatedSeries::from_term(
            spec(2, 3, 3),
            ExponentMonomial::from_z(vec![1, 0]),
            QRat::one(),
        );
        let c = PrefactoredSeries::bare(s);
        let shifted = c.shift(Var::Z(0), -1);
        assert_eq!(
            shifted
                .series
                .coefficient(&ExponentMonomial::from_z(vec![1, 0]))
                .unwrap(),
            QRat::q_power(-1)
        );
    }

    #[test]
    fn prefactor_shift_emits_the_coupled_monomial() {
        // prefactor −ln z2 · ln(a2/a1), shift z2 by −1 → multiplier a2/a1.
        let n = 2;
        let mut b = LogPrefactor::zero(n);
        let minus_one = BigRational::from_integer((-1).into());
        let one = BigRational::one();
        b.add_coupling(Var::Z(1), Var::A(1), &minus_one);
        b.add_coupling(Var::Z(1), Var::A(0), &one);
        let c = PrefactoredSeries::new(b, TruncatedSeries::one(spec(n, 3, 3)));
        let shifted = c.shift(Var::Z(1), -1);
        let expect = ExponentMonomial::from_a(vec![-1, 1]);
        assert_eq!(shifted.series.coefficient(&expect).unwrap(), QRat::one());
        assert_eq!(shifted.prefactor, c.prefactor);
    }

    #[test]
    fn coupling_form_shift_emits_partner_variable() {
        // prefactor Σ ln z_i ln a_i, shift a1 by +1 → multiplier z1.
        let n = 2;
        let b = LogPrefactor::kahler_equivariant_coupling(n);
        let c = PrefactoredSeries::new(b, TruncatedSeries::one(spec(n, 3, 3)));
        let shifted = c.shift(Var::A(0), 1);
        let expect = ExponentMonomial::from_z(vec![1, 0]);
        assert_eq!(shifted.series.coefficient(&expect).unwrap(), QRat::one());
    }

    #[test]
    fn shift_and_unshift_is_identity() {
        let n = 2;
        let mut b = LogPrefactor::kahler_equivariant_coupling(n);
        b.add_coupling(Var::Z(0), Var::A(1), &BigRational::from_integer((-1).into()));
        let mut series = TruncatedSeries::one(spec(n, 4, 4));
        series.add_term(
            ExponentMonomial::from_z(vec![1, 1]),
            QRat::one_minus_q_power(2),
        );
        series.add_term(ExponentMonomial::from_a(vec![1, 0]), QRat::q_power(-1));
        let c = PrefactoredSeries::new(b, series);
        for var in [Var::Z(0), Var::Z(1), Var::A(0), Var::A(1)] {
            for s in [1i64, 2, -1] {
                let back = c.shift(var, s).shift(var, -s);
                assert_eq!(back, c, "round trip failed for {var:?} by {s}");
            }
        }
    }

    #[test]
    fn tau_is_an_involution_on_contributions() {
        let n = 2;
        let mut b = LogPrefactor::zero(n);
        b.add_coupling(Var::Z(1), Var::A(0), &BigRational::one());
        let mut series = TruncatedSeries::zero(TruncationSpec::new(
            vec![1, 0],
            vec![0, 1],
            3,
            4,
        ));
        series.add_term(
            ExponentMonomial {
                z: vec![1, 0],
                a: vec![0, 2],
            },
            QRat::new(
                crate::qseries::QPoly::one(),
                crate::qseries::QPoly::new(vec![1i64.into(), (-1i64).into()]),
            ),
        );
        let c = PrefactoredSeries::new(b, series);
        assert_eq!(c.tau().tau(), c);
    }
}
