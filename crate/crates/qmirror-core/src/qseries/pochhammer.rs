//! q-Pochhammer symbols as symbolic factor products, plus the q-binomial
//! expansions of the infinite symbols.
//!
//! `pochhammer_finite(x, d, base)` builds
//! `∏_{l=1}^{d} (1 − x·base^l)` for `d ≥ 0` and the reciprocal run
//! `∏_{l=0}^{−d−1} (1 − x·base^{−l})^{−1}` for `d < 0`. With the base written
//! out this is the standard symbol `(x·base; base)_d`, and the normalization
//! makes `(x)_d · (q^{−1}x; q^{−1})_{−d} = 1` hold on the nose.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::qrat::{QPoly, QRat};
use super::series::{ExponentMonomial, TruncatedSeries, TruncationSpec};
use super::QSeriesError;

/// Shift base of a Pochhammer run: `q` or `q⁻¹`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PochBase {
    Q,
    QInv,
}

impl PochBase {
    fn power(self, l: i64) -> QRat {
        match self {
            PochBase::Q => QRat::q_power(l),
            PochBase::QInv => QRat::q_power(-l),
        }
    }
}

/// One factor `(1 − coeff·mono)^{±1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearFactor {
    pub coeff: QRat,
    pub mono: ExponentMonomial,
    pub inverted: bool,
}

/// A product `scalar · v^{mono_scale} · ∏ (1 − c_i·v^{m_i})^{±1}` kept in
/// symbolic form until expansion. Multiplication and inversion are exact;
/// expansion truncates against a [`TruncationSpec`].
#[derive(Clone, Debug)]
pub struct FactorProduct {
    pub scalar: QRat,
    pub mono_scale: ExponentMonomial,
    pub factors: Vec<LinearFactor>,
}

impl FactorProduct {
    pub fn one(n: usize) -> Self {
        FactorProduct {
            scalar: QRat::one(),
            mono_scale: ExponentMonomial::unit(n),
            factors: Vec::new(),
        }
    }

    pub fn from_scalar(n: usize, scalar: QRat) -> Self {
        FactorProduct {
            scalar,
            mono_scale: ExponentMonomial::unit(n),
            factors: Vec::new(),
        }
    }

    pub fn mul(&self, other: &FactorProduct) -> FactorProduct {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FactorProduct {
            scalar: &self.scalar * &other.scalar,
            mono_scale: self.mono_scale.mul(&other.mono_scale),
            factors,
        }
    }

    pub fn scaled(&self, c: &QRat) -> FactorProduct {
        FactorProduct {
            scalar: &self.scalar * c,
            mono_scale: self.mono_scale.clone(),
            factors: self.factors.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &ExponentMonomial) -> FactorProduct {
        FactorProduct {
            scalar: self.scalar.clone(),
            mono_scale: self.mono_scale.mul(m),
            factors: self.factors.clone(),
        }
    }

    /// Formal reciprocal; errors if the scalar is zero.
    pub fn invert(&self) -> Result<FactorProduct, QSeriesError> {
        Ok(FactorProduct {
            scalar: self.scalar.inv()?,
            mono_scale: self.mono_scale.inverse(),
            factors: self
                .factors
                .iter()
                .map(|f| LinearFactor {
                    coeff: f.coeff.clone(),
                    mono: f.mono.clone(),
                    inverted: !f.inverted,
                })
                .collect(),
        })
    }

    /// If every linear factor is a pure q-object (trivial monomial), collapse
    /// the whole product to a rational function of q times the monomial
    /// scale. Errors only if an inverted factor is exactly zero.
    pub fn collapse_scalar(&self) -> Result<Option<(QRat, ExponentMonomial)>, QSeriesError> {
        let mut out = self.scalar.clone();
        for f in &self.factors {
            if !f.mono.is_unit() {
                return Ok(None);
            }
            let v = &QRat::one() - &f.coeff;
            if f.inverted {
                if v.is_zero() {
                    return Err(QSeriesError::PoleAtTruncation);
                }
                out = &out * &v.inv().expect("checked nonzero");
            } else {
                out = &out * &v;
            }
        }
        Ok(Some((out, self.mono_scale.clone())))
    }

    /// As a plain QRat, when even the monomial scale is trivial.
    pub fn as_qrat(&self) -> Result<Option<QRat>, QSeriesError> {
        match self.collapse_scalar()? {
            Some((r, m)) if m.is_unit() => Ok(Some(r)),
            _ => Ok(None),
        }
    }

    /// Canonical form for symbolic comparison: pure-q factors fold into the
    /// scalar, and every remaining factor is oriented so its monomial is
    /// lexicographically positive (reorienting extracts `−c·v^m` into the
    /// scalar and monomial scale). Factors are then collected with signed
    /// multiplicity.
    fn canonical(&self) -> Result<CanonicalProduct, QSeriesError> {
        let mut scalar = self.scalar.clone();
        let mut mono_scale = self.mono_scale.clone();
        let mut factors: BTreeMap<(Vec<i64>, Vec<i64>, Vec<BigIntPair>), i64> = BTreeMap::new();
        for f in &self.factors {
            if f.coeff.is_zero() {
                continue; // factor is exactly 1
            }
            if f.mono.is_unit() {
                let v = &QRat::one() - &f.coeff;
                if f.inverted {
                    if v.is_zero() {
                        return Err(QSeriesError::PoleAtTruncation);
                    }
                    scalar = &scalar * &v.inv().expect("checked nonzero");
                } else {
                    scalar = &scalar * &v;
                }
                continue;
            }
            let exp: i64 = if f.inverted { -1 } else { 1 };
            let (coeff, mono) = if f.mono.leading_sign() > 0 {
                (f.coeff.clone(), f.mono.clone())
            } else {
                // (1 − c·v^m) = (−c·v^m)·(1 − c⁻¹·v^{−m})
                let extracted = -&f.coeff;
                if f.inverted {
                    scalar = &scalar * &extracted.inv().expect("coeff nonzero");
                    mono_scale = mono_scale.mul(&f.mono.inverse());
                } else {
                    scalar = &scalar * &extracted;
                    mono_scale = mono_scale.mul(&f.mono);
                }
                (f.coeff.inv().expect("coeff nonzero"), f.mono.inverse())
            };
            let key = (mono.z.clone(), mono.a.clone(), encode_qrat(&coeff));
            *factors.entry(key).or_insert(0) += exp;
        }
        factors.retain(|_, v| *v != 0);
        Ok(CanonicalProduct {
            scalar,
            mono_scale,
            factors,
        })
    }

    /// Exact symbolic equality after canonical orientation and cancellation.
    pub fn equivalent(&self, other: &FactorProduct) -> Result<bool, QSeriesError> {
        Ok(self.canonical()? == other.canonical()?)
    }

    /// Expand into a truncated series. Linear factors of positive grade
    /// expand directly (geometric series when inverted); factors of negative
    /// grade are reoriented first; zero-grade nontrivial factors do not
    /// truncate and are rejected.
    pub fn expand(&self, spec: &TruncationSpec) -> Result<TruncatedSeries, QSeriesError> {
        let n = spec.n();
        // Reorient all factors to nonnegative grade, collecting the extracted
        // scalars and monomials.
        let mut scalar = self.scalar.clone();
        let mut net_mono = self.mono_scale.clone();
        let mut oriented: Vec<LinearFactor> = Vec::new();
        for f in &self.factors {
            if f.coeff.is_zero() {
                continue;
            }
            let gz = spec.grade_z(&f.mono.z);
            let ga = spec.grade_a(&f.mono.a);
            if f.mono.is_unit() {
                let v = &QRat::one() - &f.coeff;
                if f.inverted {
                    if v.is_zero() {
                        return Err(QSeriesError::PoleAtTruncation);
                    }
                    scalar = &scalar * &v.inv().expect("checked nonzero");
                } else {
                    scalar = &scalar * &v;
                }
                continue;
            }
            if gz > 0 || ga > 0 {
                if gz < 0 || ga < 0 {
                    return Err(QSeriesError::NonPositiveGrading);
                }
                oriented.push(f.clone());
            } else if gz < 0 || ga < 0 {
                // (1 − c·v^m) = (−c·v^m)·(1 − c⁻¹·v^{−m})
                let c_inv = f.coeff.inv().expect("nonzero checked above");
                let extracted = -&f.coeff;
                if f.inverted {
                    scalar = &scalar * &extracted.inv().expect("nonzero");
                    net_mono = net_mono.mul(&f.mono.inverse());
                } else {
                    scalar = &scalar * &extracted;
                    net_mono = net_mono.mul(&f.mono);
                }
                oriented.push(LinearFactor {
                    coeff: c_inv,
                    mono: f.mono.inverse(),
                    inverted: f.inverted,
                });
            } else {
                // grade exactly 0 with a nontrivial monomial: no truncation.
                return Err(QSeriesError::NonPositiveGrading);
            }
        }
        if scalar.is_zero() {
            return Ok(TruncatedSeries::zero(spec.clone()));
        }
        // The net monomial may lower grades; expand on a window enlarged by
        // the deficit so the final truncation is exact.
        let dz = (-spec.grade_z(&net_mono.z)).max(0);
        let da = (-spec.grade_a(&net_mono.a)).max(0);
        let work = spec.enlarged(dz, da);
        let mut acc = TruncatedSeries::one(work.clone());
        for f in &oriented {
            let factor = expand_oriented(&f.coeff, &f.mono, f.inverted, &work, n)?;
            acc = acc.mul(&factor)?;
        }
        let shifted = acc.mul_monomial(&net_mono, &scalar);
        Ok(shifted.retruncated(spec.clone()))
    }
}

/// Geometric / binomial expansion of `(1 − c·v^m)^{±1}` for a monomial of
/// positive grade.
fn expand_oriented(
    coeff: &QRat,
    mono: &ExponentMonomial,
    inverted: bool,
    spec: &TruncationSpec,
    n: usize,
) -> Result<TruncatedSeries, QSeriesError> {
    let mut s = TruncatedSeries::one(spec.clone());
    if !inverted {
        s.add_term(mono.clone(), -coeff);
        return Ok(s);
    }
    let mut power = ExponentMonomial::unit(n);
    let mut c = QRat::one();
    loop {
        power = power.mul(mono);
        c = &c * coeff;
        if !spec.contains(&power) || c.is_zero() {
            break;
        }
        s.add_term(power.clone(), c.clone());
    }
    Ok(s)
}

/// `∏_{l=1}^{d}(1 − x·base^l)` for `d ≥ 0`, reciprocal run for `d < 0`, with
/// `x = coeff·v^mono`.
pub fn pochhammer_finite(
    coeff: &QRat,
    mono: &ExponentMonomial,
    d: i64,
    base: PochBase,
) -> FactorProduct {
    let n = mono.n();
    let mut out = FactorProduct::one(n);
    if d >= 0 {
        for l in 1..=d {
            out.factors.push(LinearFactor {
                coeff: coeff * &base.power(l),
                mono: mono.clone(),
                inverted: false,
            });
        }
    } else {
        for l in 0..-d {
            out.factors.push(LinearFactor {
                coeff: coeff * &base.power(-l),
                mono: mono.clone(),
                inverted: true,
            });
        }
    }
    out
}

/// `(q; q)_m = ∏_{l=1}^m (1 − q^l)` as a rational function.
pub fn q_factorial(m: i64) -> QRat {
    let mut out = QRat::one();
    for l in 1..=m {
        out = &out * &QRat::one_minus_q_power(l);
    }
    out
}

/// `(q⁻¹; q⁻¹)_m = ∏_{l=1}^m (1 − q^{−l})`.
pub fn q_inv_factorial(m: i64) -> QRat {
    let mut out = QRat::one();
    for l in 1..=m {
        out = &out * &QRat::one_minus_q_power(-l);
    }
    out
}

/// q-binomial expansion `1/(x)_∞ = Σ_m x^m / (q; q)_m`, truncated.
pub fn inv_inf_pochhammer(
    coeff: &QRat,
    mono: &ExponentMonomial,
    spec: &TruncationSpec,
) -> Result<TruncatedSeries, QSeriesError> {
    positive_grade(mono, spec)?;
    let n = mono.n();
    let mut out = TruncatedSeries::zero(spec.clone());
    let mut power = ExponentMonomial::unit(n);
    let mut num = QRat::one();
    let mut den = QRat::one();
    let mut m = 0i64;
    loop {
        if spec.contains(&power) {
            out.add_term(power.clone(), num.div(&den).expect("den nonzero"));
        } else {
            break;
        }
        m += 1;
        power = power.mul(mono);
        num = &num * coeff;
        den = &den * &QRat::one_minus_q_power(m);
        if num.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// q-binomial expansion `(b)_∞ = Σ_m (q^{−1}b)^m / (q^{−1}; q^{−1})_m`,
/// truncated.
pub fn inf_pochhammer(
    coeff: &QRat,
    mono: &ExponentMonomial,
    spec: &TruncationSpec,
) -> Result<TruncatedSeries, QSeriesError> {
    positive_grade(mono, spec)?;
    let n = mono.n();
    let mut out = TruncatedSeries::zero(spec.clone());
    let mut power = ExponentMonomial::unit(n);
    let scaled = coeff * &QRat::q_power(-1);
    let mut num = QRat::one();
    let mut den = QRat::one();
    let mut m = 0i64;
    loop {
        if spec.contains(&power) {
            out.add_term(power.clone(), num.div(&den).expect("den nonzero"));
        } else {
            break;
        }
        m += 1;
        power = power.mul(mono);
        num = &num * &scaled;
        den = &den * &QRat::one_minus_q_power(-m);
        if num.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// Geometric expansion `1/(1 − c·x) = Σ_m c^m x^m`, truncated.
pub fn expand_inverse_linear(
    coeff: &QRat,
    mono: &ExponentMonomial,
    spec: &TruncationSpec,
) -> Result<TruncatedSeries, QSeriesError> {
    positive_grade(mono, spec)?;
    expand_oriented(coeff, mono, true, spec, mono.n())
}

fn positive_grade(mono: &ExponentMonomial, spec: &TruncationSpec) -> Result<(), QSeriesError> {
    let gz = spec.grade_z(&mono.z);
    let ga = spec.grade_a(&mono.a);
    if gz < 0 || ga < 0 || (gz == 0 && ga <= 0) {
        return Err(QSeriesError::NonPositiveGrading);
    }
    Ok(())
}

// Encoded coefficient vectors for use as map keys (QRat itself is not Ord).
type BigIntPair = (Vec<u8>, Vec<u8>);

fn encode_qrat(r: &QRat) -> Vec<BigIntPair> {
    let enc = |p: &QPoly| {
        p.coeffs()
            .iter()
            .map(|c| c.to_signed_bytes_le())
            .collect::<Vec<_>>()
    };
    let num = enc(r.num());
    let den = enc(r.den());
    let mut out = Vec::with_capacity(num.len().max(den.len()));
    for i in 0..num.len().max(den.len()) {
        out.push((
            num.get(i).cloned().unwrap_or_default(),
            den.get(i).cloned().unwrap_or_default(),
        ));
    }
    out
}

#[derive(PartialEq, Eq, Debug)]
struct CanonicalProduct {
    scalar: QRat,
    mono_scale: ExponentMonomial,
    factors: BTreeMap<(Vec<i64>, Vec<i64>, Vec<BigIntPair>), i64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec1(nz: i64, na: i64) -> TruncationSpec {
        TruncationSpec::new(vec![1], vec![1], nz, na)
    }

    fn x() -> ExponentMonomial {
        ExponentMonomial::from_a(vec![1])
    }

    #[test]
    fn index_zero_is_one() {
        let p = pochhammer_finite(&QRat::one(), &x(), 0, PochBase::Q);
        assert!(p.as_qrat().unwrap().unwrap().is_one());
    }

    #[test]
    fn finite_symbol_at_pure_q_collapses() {
        // (q⁻¹; q⁻¹)₂ = (1 − q⁻¹)(1 − q⁻²)
        let unit = ExponentMonomial::unit(1);
        let p = pochhammer_finite(&QRat::one(), &unit, 2, PochBase::QInv);
        let got = p.as_qrat().unwrap().unwrap();
        let expect = &QRat::one_minus_q_power(-1) * &QRat::one_minus_q_power(-2);
        assert_eq!(got, expect);
    }

    #[test]
    fn negative_index_inverts_the_run() {
        // (x)_d · (q⁻¹x; q⁻¹)_{−d} = 1 for d in [−6, 6], symbolically and
        // after expansion.
        let spec = spec1(0, 8);
        let one = FactorProduct::one(1);
        for d in -6i64..=6 {
            let lhs = pochhammer_finite(&QRat::q_power(-1), &x(), d, PochBase::Q);
            let rhs = pochhammer_finite(&QRat::one(), &x(), -d, PochBase::QInv);
            let prod = lhs.mul(&rhs);
            assert!(prod.equivalent(&one).unwrap(), "symbolic failure at d = {d}");
            let expanded = prod.expand(&spec).unwrap();
            assert_eq!(expanded, TruncatedSeries::one(spec.clone()), "series failure at d = {d}");
        }
    }

    #[test]
    fn q_binomial_inverse_expansion() {
        // 1/(x)_∞ = 1 + x/(1−q) + x²/((1−q)(1−q²)) + …
        let spec = spec1(0, 2);
        let s = inv_inf_pochhammer(&QRat::one(), &x(), &spec).unwrap();
        assert_eq!(s.coefficient(&ExponentMonomial::unit(1)).unwrap(), QRat::one());
        assert_eq!(
            s.coefficient(&x()).unwrap(),
            QRat::one().div(&QRat::one_minus_q_power(1)).unwrap()
        );
        let den = &QRat::one_minus_q_power(1) * &QRat::one_minus_q_power(2);
        assert_eq!(
            s.coefficient(&x().pow(2)).unwrap(),
            QRat::one().div(&den).unwrap()
        );
    }

    #[test]
    fn q_binomial_direct_expansion() {
        // (x)_∞ = Σ (q⁻¹x)^m / (q⁻¹; q⁻¹)_m
        let spec = spec1(0, 2);
        let s = inf_pochhammer(&QRat::one(), &x(), &spec).unwrap();
        assert_eq!(s.coefficient(&ExponentMonomial::unit(1)).unwrap(), QRat::one());
        assert_eq!(
            s.coefficient(&x()).unwrap(),
            QRat::q_power(-1)
                .div(&QRat::one_minus_q_power(-1))
                .unwrap()
        );
        let den = &QRat::one_minus_q_power(-1) * &QRat::one_minus_q_power(-2);
        assert_eq!(
            s.coefficient(&x().pow(2)).unwrap(),
            QRat::q_power(-2).div(&den).unwrap()
        );
    }

    #[test]
    fn infinite_symbols_are_reciprocal_to_order_eight() {
        for order in [4i64, 8] {
            let spec = spec1(0, order);
            let a = inv_inf_pochhammer(&QRat::one(), &x(), &spec).unwrap();
            let b = inf_pochhammer(&QRat::one(), &x(), &spec).unwrap();
            assert_eq!(a.mul(&b).unwrap(), TruncatedSeries::one(spec));
        }
    }

    #[test]
    fn tau_of_inverse_infinite_symbol_is_shifted_direct_symbol() {
        // τ(1/(x)_∞) = (qx)_∞ term by term, orders up to 8. The left side is
        // expanded in an a-variable; τ moves it to the z side.
        let order = 8;
        let spec = spec1(0, order);
        let lhs = inv_inf_pochhammer(&QRat::one(), &x(), &spec)
            .unwrap()
            .tau();
        let swapped = spec.swapped();
        let zvar = ExponentMonomial::from_z(vec![1]);
        let rhs = inf_pochhammer(&QRat::q_power(1), &zvar, &swapped).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn geometric_expansion_examples() {
        let spec = spec1(0, 2);
        // 1/(1 − q⁻¹x) = 1 + q⁻¹x + q⁻²x²
        let s = expand_inverse_linear(&QRat::q_power(-1), &x(), &spec).unwrap();
        assert_eq!(s.coefficient(&x()).unwrap(), QRat::q_power(-1));
        assert_eq!(s.coefficient(&x().pow(2)).unwrap(), QRat::q_power(-2));
        // 1/(1 − x) to order 1 = 1 + x
        let spec = spec1(0, 1);
        let s = expand_inverse_linear(&QRat::one(), &x(), &spec).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coefficient(&x()).unwrap(), QRat::one());
        // c = 0 → 1
        let s = expand_inverse_linear(&QRat::zero(), &x(), &spec).unwrap();
        assert_eq!(s, TruncatedSeries::one(spec));
    }

    #[test]
    fn nonpositive_grading_is_rejected() {
        let spec = spec1(4, 4);
        let unit = ExponentMonomial::unit(1);
        assert_eq!(
            inv_inf_pochhammer(&QRat::one(), &unit, &spec),
            Err(QSeriesError::NonPositiveGrading)
        );
        let neg = x().inverse();
        assert_eq!(
            expand_inverse_linear(&QRat::one(), &neg, &spec),
            Err(QSeriesError::NonPositiveGrading)
        );
    }

    #[test]
    fn pole_at_truncation_is_detected() {
        // Inverting (1 − q⁰·1) is a genuine pole.
        let unit = ExponentMonomial::unit(1);
        let p = pochhammer_finite(&QRat::one(), &unit, -1, PochBase::Q);
        assert_eq!(p.as_qrat(), Err(QSeriesError::PoleAtTruncation));
        assert_eq!(p.expand(&spec1(2, 2)), Err(QSeriesError::PoleAtTruncation));
    }

    #[test]
    fn negative_grade_factors_reorient() {
        // 1/(1 − q·x⁻¹) = (−q⁻¹x)·1/(1 − q⁻¹x) expands with positive support.
        let spec = spec1(0, 3);
        let mut p = FactorProduct::one(1);
        p.factors.push(LinearFactor {
            coeff: QRat::q_power(1),
            mono: x().inverse(),
            inverted: true,
        });
        let s = p.expand(&spec).unwrap();
        // −q⁻¹x − q⁻²x² − q⁻³x³
        assert!(s.coefficient(&ExponentMonomial::unit(1)).unwrap().is_zero());
        for m in 1..=3 {
            assert_eq!(
                s.coefficient(&x().pow(m)).unwrap(),
                -&QRat::q_power(-m)
            );
        }
    }
}
