//! Per-fixed-point I-function assembly: degree enumeration over the
//! effective cone, the level-l localization series, the canonical
//! integer-q-power series, and its modified form with the exponential
//! prefactor and q-Gamma factors.
//!
//! The canonical series at a fixed point `p` is
//!
//! ```text
//!   Σ_{d}  z^D / ∏_{i=1}^n (q⁻¹·U_i|_p ; q⁻¹)_{D_i},       D = iota·d,
//! ```
//!
//! summed over the effective cone (outside it the coordinate factors for
//! `i ∈ p` have a pole of infinite order and kill the term). Coordinates in
//! `p` restrict to 1 and contribute rational functions of `q`; coordinates
//! outside `p` contribute factors that are expanded in the a-monomials
//! `U_i|_p`. The modified form multiplies by `∏_{i∉p} 1/(U_i|_p)_∞` and
//! carries the prefactor `exp(−Σ_{i∉p} ln z_i ln U_i|_p / ln q)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::qseries::{
    inv_inf_pochhammer, pochhammer_finite, ExponentMonomial, FactorProduct, LogPrefactor,
    PochBase, PrefactoredSeries, QRat, QSeriesError, TruncatedSeries, TruncationSpec, Var,
};
use crate::toric::{FixedPoint, RestrictionTable, ToricDatum};

/// A quasimap degree: the vector `d` in the quotient-degree lattice together
/// with the induced coordinate line-bundle degrees `D = iota·d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeVector {
    pub d: Vec<i64>,
    pub line_degrees: Vec<i64>,
}

/// Which q-Gamma factors dress the modified I-function. The plain form
/// `1/(U)_∞` is the canonical one (the difference equations and the mirror
/// statement hold for it); the shifted form `1/(qU)_∞` is kept available for
/// side-by-side comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaConvention {
    Plain,
    QShifted,
}

/// The normalization factors multiplying the bare degree sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaPart {
    /// `∏_{i∉p} 1/(U_i; q)_∞` (or `1/(qU_i; q)_∞` when `shifted`).
    InverseInfinite {
        monomials: Vec<(usize, Vec<i64>)>,
        shifted: bool,
        expanded: TruncatedSeries,
    },
    /// `∏_{i∉p} 1/(1 − U_i⁻¹)`, the localization normalization of the
    /// level-l series.
    InverseLocalization {
        monomials: Vec<(usize, Vec<i64>)>,
        expanded: TruncatedSeries,
    },
}

impl GammaPart {
    pub fn expanded(&self) -> &TruncatedSeries {
        match self {
            GammaPart::InverseInfinite { expanded, .. } => expanded,
            GammaPart::InverseLocalization { expanded, .. } => expanded,
        }
    }
}

/// One fixed point's contribution: a log-bilinear prefactor, symbolic (and
/// expanded) normalization factors, and the bare degree sum whose constant
/// term is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointContribution {
    pub point: FixedPoint,
    pub level: i64,
    pub prefactor: LogPrefactor,
    pub gamma: GammaPart,
    pub series: TruncatedSeries,
}

impl FixedPointContribution {
    /// The full dressed object `prefactor · gamma · series` in the
    /// two-component form the difference operators act on.
    pub fn to_prefactored(&self) -> Result<PrefactoredSeries, QSeriesError> {
        let total = self.gamma.expanded().mul(&self.series)?;
        Ok(PrefactoredSeries::new(self.prefactor.clone(), total))
    }
}

/// The truncation spec attached to a fixed point: the z-grading sums the
/// coordinate degrees over `p` (the effective-cone grading) and the
/// a-grading sums the exponents over the complement (total degree in the
/// `U_i|_p` monomials).
pub fn point_spec(datum: &ToricDatum, p: &FixedPoint, nz: i64, na: i64) -> TruncationSpec {
    let n = datum.n();
    let mut lz = vec![0i64; n];
    for &i in p.indices() {
        lz[i] = 1;
    }
    let mut la = vec![0i64; n];
    for i in p.complement(n) {
        la[i] = 1;
    }
    TruncationSpec::new(lz, la, nz, na)
}

/// All degrees in the effective cone of `p` with grading at most `nz`, via
/// the unimodular chart `m = iota_p·d`, in lexicographic order of `m`.
pub fn enumerate_degrees(datum: &ToricDatum, p: &FixedPoint, nz: i64) -> Vec<DegreeVector> {
    assert!(datum.is_fixed_point(p), "not a fixed point of this datum");
    let k = datum.k();
    let p_inv = crate::exactalg::invert_unimodular(&datum.iota().row_submatrix(p.indices()))
        .expect("fixed point submatrix is unimodular");
    let mut out = Vec::new();
    let mut m = vec![0i64; k];
    enumerate_box_lex(&mut m, 0, nz, &mut |m| {
        let d: Vec<i64> = (0..k)
            .map(|row| {
                (0..k)
                    .map(|col| {
                        i64::try_from(p_inv.at(row, col)).expect("chart entry exceeds i64") * m[col]
                    })
                    .sum()
            })
            .collect();
        let line_degrees: Vec<i64> = (0..datum.n())
            .map(|i| {
                (0..k)
                    .map(|j| {
                        i64::try_from(datum.iota().at(i, j)).expect("charge entry exceeds i64")
                            * d[j]
                    })
                    .sum()
            })
            .collect();
        out.push(DegreeVector { d, line_degrees });
    });
    out
}

fn enumerate_box_lex(m: &mut Vec<i64>, idx: usize, budget: i64, f: &mut impl FnMut(&[i64])) {
    if idx == m.len() {
        f(m);
        return;
    }
    for v in 0..=budget {
        m[idx] = v;
        enumerate_box_lex(m, idx + 1, budget - v, f);
    }
    m[idx] = 0;
}

fn u_monomial(table: &RestrictionTable, row: usize) -> ExponentMonomial {
    ExponentMonomial::from_a(table.exponents[row].clone())
}

/// The canonical integer-q-power series at `p`: the degree sum with factors
/// `1/(q⁻¹U_i|_p; q⁻¹)_{D_i}`, a-expanded against `spec`.
pub fn i_eff(
    datum: &ToricDatum,
    p: &FixedPoint,
    spec: &TruncationSpec,
) -> Result<TruncatedSeries, QSeriesError> {
    let table = datum.restriction_table(p);
    let degrees = enumerate_degrees(datum, p, spec.nz);
    let mut factor_cache: BTreeMap<(usize, i64), TruncatedSeries> = BTreeMap::new();
    let mut out = TruncatedSeries::zero(spec.clone());
    for deg in &degrees {
        let term = degree_term(&table, deg, spec, &mut factor_cache, 1)?;
        out = out.add(&term)?;
    }
    Ok(out)
}

/// One degree's summand of the canonical series (or, with `level ≠ 1`
/// handled by `i_function`, of the level series). `z^D` times the product of
/// coordinate factors.
fn degree_term(
    table: &RestrictionTable,
    deg: &DegreeVector,
    spec: &TruncationSpec,
    cache: &mut BTreeMap<(usize, i64), TruncatedSeries>,
    _level_tag: i64,
) -> Result<TruncatedSeries, QSeriesError> {
    let n = deg.line_degrees.len();
    let mut acc = TruncatedSeries::one(spec.clone());
    let mut scalar = QRat::one();
    for i in 0..n {
        let di = deg.line_degrees[i];
        if di == 0 {
            continue;
        }
        if table.point.contains(i) {
            // U_i|_p = 1: the factor is 1/(q⁻¹; q⁻¹)_{D_i}, a pure q-object.
            let f = pochhammer_finite(&QRat::one(), &ExponentMonomial::unit(n), di, PochBase::QInv);
            let val = f
                .as_qrat()?
                .expect("unit monomial collapses")
                .inv()?;
            scalar = &scalar * &val;
        } else {
            let row = table
                .complement
                .iter()
                .position(|&j| j == i)
                .expect("complement index");
            if let Some(cached) = cache.get(&(i, di)) {
                acc = acc.mul(cached)?;
                continue;
            }
            let u = u_monomial(table, row);
            let f = pochhammer_finite(&QRat::one(), &u, di, PochBase::QInv).invert()?;
            let expanded = f.expand(spec)?;
            acc = acc.mul(&expanded)?;
            cache.insert((i, di), expanded);
        }
    }
    let zmono = ExponentMonomial::from_z(deg.line_degrees.clone());
    Ok(acc.mul_monomial(&zmono, &scalar))
}

/// Prefactor form `−Σ_{i∉p} ln z_i ln U_i|_p / ln q` expanded over the
/// a-exponent vectors of the restrictions.
pub fn modified_prefactor(datum: &ToricDatum, table: &RestrictionTable) -> LogPrefactor {
    let n = datum.n();
    let mut b = LogPrefactor::zero(n);
    for (row, &i) in table.complement.iter().enumerate() {
        for (l, &e) in table.exponents[row].iter().enumerate() {
            if e != 0 {
                let c = BigRational::from_integer((-e).into());
                b.add_coupling(Var::Z(i), Var::A(l), &c);
            }
        }
    }
    b
}

/// The modified I-function at `p`: prefactor, q-Gamma factors, and the
/// canonical degree sum.
pub fn i_eff_modified(
    datum: &ToricDatum,
    p: &FixedPoint,
    spec: &TruncationSpec,
) -> Result<FixedPointContribution, QSeriesError> {
    i_eff_modified_with(datum, p, spec, GammaConvention::Plain)
}

pub fn i_eff_modified_with(
    datum: &ToricDatum,
    p: &FixedPoint,
    spec: &TruncationSpec,
    convention: GammaConvention,
) -> Result<FixedPointContribution, QSeriesError> {
    let table = datum.restriction_table(p);
    let prefactor = modified_prefactor(datum, &table);
    let shifted = convention == GammaConvention::QShifted;
    let coeff = if shifted {
        QRat::q_power(1)
    } else {
        QRat::one()
    };
    let mut expanded = TruncatedSeries::one(spec.clone());
    let mut monomials = Vec::new();
    for (row, &i) in table.complement.iter().enumerate() {
        let u = u_monomial(&table, row);
        let factor = inv_inf_pochhammer(&coeff, &u, spec)?;
        expanded = expanded.mul(&factor)?;
        monomials.push((i, table.exponents[row].clone()));
    }
    let series = i_eff(datum, p, spec)?;
    Ok(FixedPointContribution {
        point: p.clone(),
        level: 1,
        prefactor,
        gamma: GammaPart::InverseInfinite {
            monomials,
            shifted,
            expanded,
        },
        series,
    })
}

/// The level-l localization series at `p`: the degree sum
/// `Σ_d z^D · Λ(D)^l / ∏_i (q·U_i⁻¹|_p; q)_{D_i}` with the per-coordinate
/// level factor `Λ_i(D) = (−1)^D U_i^{−D} q^{D(D+1)/2}`, each degree's
/// factor product assembled symbolically and then a-expanded. The standing
/// localization normalization `∏_{i∉p} 1/(1 − U_i⁻¹|_p)` is recorded (and
/// expanded) separately in `gamma`.
pub fn i_function(
    datum: &ToricDatum,
    p: &FixedPoint,
    level: i64,
    spec: &TruncationSpec,
) -> Result<FixedPointContribution, QSeriesError> {
    let n = datum.n();
    let table = datum.restriction_table(p);
    let degrees = enumerate_degrees(datum, p, spec.nz);
    let mut out = TruncatedSeries::zero(spec.clone());
    for deg in &degrees {
        let mut product = FactorProduct::one(n);
        for i in 0..n {
            let di = deg.line_degrees[i];
            if di == 0 {
                continue;
            }
            let u = if table.point.contains(i) {
                ExponentMonomial::unit(n)
            } else {
                let row = table
                    .complement
                    .iter()
                    .position(|&j| j == i)
                    .expect("complement index");
                u_monomial(&table, row)
            };
            product = product.mul(&level_factor(&u, di, level)?);
        }
        let expanded = product.expand(spec)?;
        let zmono = ExponentMonomial::from_z(deg.line_degrees.clone());
        out = out.add(&expanded.mul_monomial(&zmono, &QRat::one()))?;
    }
    let mut gamma_expanded = TruncatedSeries::one(spec.clone());
    let mut monomials = Vec::new();
    for (row, &i) in table.complement.iter().enumerate() {
        let u = u_monomial(&table, row);
        let mut f = FactorProduct::one(n);
        f.factors.push(crate::qseries::LinearFactor {
            coeff: QRat::one(),
            mono: u.inverse(),
            inverted: true,
        });
        gamma_expanded = gamma_expanded.mul(&f.expand(spec)?)?;
        monomials.push((i, table.exponents[row].clone()));
    }
    Ok(FixedPointContribution {
        point: p.clone(),
        level,
        prefactor: LogPrefactor::zero(n),
        gamma: GammaPart::InverseLocalization {
            monomials,
            expanded: gamma_expanded,
        },
        series: out,
    })
}

/// The symbolic per-coordinate level-series factor
/// `Λ(D)^l / (q·U⁻¹; q)_D` with `Λ(D) = (−1)^D U^{−D} q^{D(D+1)/2}`.
pub fn level_factor(
    u: &ExponentMonomial,
    d: i64,
    level: i64,
) -> Result<FactorProduct, QSeriesError> {
    let n = u.n();
    let mut sign = QRat::one();
    if (d * level).rem_euclid(2) == 1 {
        sign = -&sign;
    }
    let qpow = QRat::q_power(level * d * (d + 1) / 2);
    let scalar = &sign * &qpow;
    let lambda_mono = u.pow(-d * level);
    let poch = pochhammer_finite(&QRat::one(), &u.inverse(), d, PochBase::Q).invert()?;
    Ok(FactorProduct::from_scalar(n, scalar)
        .mul_monomial(&lambda_mono)
        .mul(&poch))
}

/// The canonical-series factor `1/(q⁻¹U; q⁻¹)_D` in symbolic form, for the
/// level-identity comparison.
pub fn canonical_factor(u: &ExponentMonomial, d: i64) -> Result<FactorProduct, QSeriesError> {
    pochhammer_finite(&QRat::one(), u, d, PochBase::QInv).invert()
}

/// All contributions, one per fixed point, in lexicographic point order.
pub fn i_eff_stack(
    datum: &ToricDatum,
    nz: i64,
    na: i64,
) -> Result<Vec<FixedPointContribution>, QSeriesError> {
    datum
        .fixed_points()
        .into_iter()
        .map(|p| {
            let spec = point_spec(datum, &p, nz, na);
            i_eff_modified(datum, &p, &spec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::IntMatrix;
    use num_bigint::BigInt;
    use num_traits::One;

    fn projective_space(n: usize) -> ToricDatum {
        ToricDatum::validate(IntMatrix::new(n + 1, 1, vec![BigInt::one(); n + 1])).unwrap()
    }

    fn bl_p2() -> ToricDatum {
        ToricDatum::validate(IntMatrix::from_rows(&[&[1, 1], &[0, 1], &[1, 0], &[0, 1]])).unwrap()
    }

    fn fp(indices: &[usize]) -> FixedPoint {
        FixedPoint::new(indices.iter().map(|&i| i - 1).collect())
    }

    fn binomial(n: i64, k: i64) -> usize {
        let mut acc = 1i64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc as usize
    }

    #[test]
    fn degree_enumeration_on_p1() {
        let x = projective_space(1);
        let p = fp(&[1]);
        let degrees = enumerate_degrees(&x, &p, 2);
        assert_eq!(degrees.len(), 3);
        for (i, deg) in degrees.iter().enumerate() {
            let d = i as i64;
            assert_eq!(deg.d, vec![d]);
            assert_eq!(deg.line_degrees, vec![d, d]);
        }
    }

    #[test]
    fn degree_count_is_binomial() {
        for x in [projective_space(2), bl_p2(), bl_p2().gale_dual().unwrap()] {
            for p in x.fixed_points() {
                for nz in 0..=4 {
                    let count = enumerate_degrees(&x, &p, nz).len();
                    assert_eq!(count, binomial(nz + x.k() as i64, x.k() as i64));
                }
            }
        }
    }

    #[test]
    fn degree_enumeration_matches_brute_force_on_dual_point() {
        // Mirror side of Bl(P²), point {2,4}: compare against brute force
        // over the box d ∈ [−3,3]² intersected with the inequality system.
        let x = bl_p2().gale_dual().unwrap();
        let p = fp(&[2, 4]);
        let nz = 1;
        let fast: alloc::collections::BTreeSet<Vec<i64>> = enumerate_degrees(&x, &p, nz)
            .into_iter()
            .map(|deg| deg.d)
            .collect();
        let mut brute = alloc::collections::BTreeSet::new();
        let iota = x.iota();
        for d0 in -3i64..=3 {
            for d1 in -3i64..=3 {
                let line: Vec<i64> = (0..x.n())
                    .map(|i| {
                        i64::try_from(iota.at(i, 0)).unwrap() * d0
                            + i64::try_from(iota.at(i, 1)).unwrap() * d1
                    })
                    .collect();
                let effective = p.indices().iter().all(|&i| line[i] >= 0);
                let grade: i64 = p.indices().iter().map(|&i| line[i]).sum();
                if effective && grade <= nz {
                    brute.insert(vec![d0, d1]);
                }
            }
        }
        assert_eq!(fast, brute);
        // Line-bundle degrees may be negative outside the point.
        assert!(enumerate_degrees(&x, &p, nz)
            .iter()
            .any(|deg| deg.line_degrees.iter().any(|&v| v < 0)));
    }

    #[test]
    fn i_eff_p1_frozen_coefficients() {
        let x = projective_space(1);
        let p = fp(&[1]);
        let spec = point_spec(&x, &p, 3, 3);
        let s = i_eff(&x, &p, &spec).unwrap();
        assert!(s.constant_term().is_one());
        // z1 z2 at a-order 0: 1/(1 − q⁻¹).
        let m = ExponentMonomial::from_z(vec![1, 1]);
        assert_eq!(
            s.coefficient(&m).unwrap(),
            QRat::one().div(&QRat::one_minus_q_power(-1)).unwrap()
        );
        // z1 z2 · (a2/a1): geometric term q⁻¹/(1−q⁻¹) = 1/(q−1).
        let mut m = ExponentMonomial::from_z(vec![1, 1]);
        m.a = vec![-1, 1];
        let q_minus_one = &QRat::q_power(1) - &QRat::one();
        assert_eq!(
            s.coefficient(&m).unwrap(),
            QRat::one().div(&q_minus_one).unwrap()
        );
    }

    #[test]
    fn i_eff_constant_term_is_one_on_corpus() {
        for x in [
            projective_space(1),
            projective_space(2),
            bl_p2(),
            bl_p2().gale_dual().unwrap(),
        ] {
            for p in x.fixed_points() {
                let spec = point_spec(&x, &p, 2, 2);
                let s = i_eff(&x, &p, &spec).unwrap();
                assert!(s.constant_term().is_one(), "{p}");
                // Degree-zero slice is exactly the constant term.
                for (m, _) in s.iter() {
                    if spec.grade_z(&m.z) == 0 {
                        assert!(m.is_unit());
                    }
                }
            }
        }
    }

    #[test]
    fn i_eff_projective_diagonal_coefficients() {
        // Coefficient of (z1···z_{N+1})^d at a-order 0 is 1/(q⁻¹; q⁻¹)_d.
        for n in [1usize, 2] {
            let x = projective_space(n);
            for p in x.fixed_points() {
                let spec = point_spec(&x, &p, 3, 2);
                let s = i_eff(&x, &p, &spec).unwrap();
                for d in 0..=3i64 {
                    let m = ExponentMonomial::from_z(vec![d; n + 1]);
                    let expect = crate::qseries::q_inv_factorial(d).inv().unwrap();
                    assert_eq!(s.coefficient(&m).unwrap(), expect, "n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn i_eff_support_lies_in_the_effective_cone_image() {
        for x in [bl_p2(), bl_p2().gale_dual().unwrap()] {
            for p in x.fixed_points() {
                let spec = point_spec(&x, &p, 3, 3);
                let allowed: alloc::collections::BTreeSet<Vec<i64>> =
                    enumerate_degrees(&x, &p, 3)
                        .into_iter()
                        .map(|deg| deg.line_degrees)
                        .collect();
                let s = i_eff(&x, &p, &spec).unwrap();
                for (m, _) in s.iter() {
                    assert!(allowed.contains(&m.z), "{p} {m}");
                }
            }
        }
    }

    #[test]
    fn i_eff_is_independent_of_the_cokernel_choice() {
        // The series consumes only (iota, p); swapping in a different valid
        // beta must not change it.
        let iota = IntMatrix::from_rows(&[&[1, 1], &[0, 1], &[1, 0], &[0, 1]]);
        let canonical = ToricDatum::validate(iota.clone()).unwrap();
        let other = ToricDatum::with_beta(
            iota,
            IntMatrix::from_rows(&[&[1, 1, -1, -2], &[0, 1, 0, -1]]),
        )
        .unwrap();
        for p in canonical.fixed_points() {
            let spec = point_spec(&canonical, &p, 3, 3);
            assert_eq!(
                i_eff(&canonical, &p, &spec).unwrap(),
                i_eff(&other, &p, &spec).unwrap()
            );
        }
    }

    #[test]
    fn modified_contribution_on_p1() {
        let x = projective_space(1);
        let p = fp(&[1]);
        let spec = point_spec(&x, &p, 3, 3);
        let c = i_eff_modified(&x, &p, &spec).unwrap();
        // Prefactor −ln z2 · ln(a2/a1): symmetrized halves at (z2, a2) and
        // (z2, a1).
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(c.prefactor.entry(1, 2 + 1), &-half.clone()); // (z2, a2)
        assert_eq!(c.prefactor.entry(1, 2), &half); // (z2, a1)
        assert!(c.series.constant_term().is_one());
        assert!(c.gamma.expanded().constant_term().is_one());
        let total = c.to_prefactored().unwrap();
        assert!(total.series.constant_term().is_one());
    }

    #[test]
    fn modified_contribution_structure_on_projective_space() {
        let x = projective_space(2);
        for (j, p) in x.fixed_points().into_iter().enumerate() {
            let spec = point_spec(&x, &p, 2, 2);
            let c = i_eff_modified(&x, &p, &spec).unwrap();
            let GammaPart::InverseInfinite {
                monomials, shifted, ..
            } = &c.gamma
            else {
                panic!("wrong gamma kind");
            };
            assert!(!shifted);
            assert_eq!(monomials.len(), 2);
            for (i, e) in monomials {
                let mut expect = vec![0i64; 3];
                expect[*i] = 1;
                expect[j] -= 1;
                assert_eq!(e, &expect);
            }
        }
    }

    #[test]
    fn stack_has_one_contribution_per_fixed_point() {
        assert_eq!(i_eff_stack(&projective_space(1), 2, 2).unwrap().len(), 2);
        let stack = i_eff_stack(&bl_p2(), 2, 2).unwrap();
        assert_eq!(stack.len(), 5);
        let dual_stack = i_eff_stack(&bl_p2().gale_dual().unwrap(), 2, 2).unwrap();
        assert_eq!(dual_stack.len(), 5);
        let mirrored: alloc::collections::BTreeSet<FixedPoint> =
            stack.iter().map(|c| c.point.mirror(4)).collect();
        let dual_points: alloc::collections::BTreeSet<FixedPoint> =
            dual_stack.iter().map(|c| c.point.clone()).collect();
        assert_eq!(mirrored, dual_points);
    }

    #[test]
    fn level_factor_identity_symbolically() {
        // Λ(D)/(qU⁻¹; q)_D = 1/(q⁻¹U; q⁻¹)_D for |D| ≤ 6.
        let u = ExponentMonomial::from_a(vec![1]);
        for d in -6i64..=6 {
            let lhs = level_factor(&u, d, 1).unwrap();
            let rhs = canonical_factor(&u, d).unwrap();
            assert!(lhs.equivalent(&rhs).unwrap(), "d = {d}");
        }
    }

    #[test]
    fn level_one_series_is_the_canonical_series() {
        for x in [projective_space(1), projective_space(2), bl_p2()] {
            for p in x.fixed_points() {
                let spec = point_spec(&x, &p, 3, 3);
                let level = i_function(&x, &p, 1, &spec).unwrap();
                let canonical = i_eff(&x, &p, &spec).unwrap();
                assert_eq!(level.series, canonical, "{p}");
            }
        }
    }

    #[test]
    fn level_one_cross_check_at_degree_one_on_p1() {
        // Coefficient of z1z2 at a-order 0 equals the level-factor formula
        // at d = 1, which the canonical factors give as 1/(1 − q⁻¹).
        let x = projective_space(1);
        let p = fp(&[1]);
        let spec = point_spec(&x, &p, 2, 2);
        let c = i_function(&x, &p, 1, &spec).unwrap();
        let m = ExponentMonomial::from_z(vec![1, 1]);
        assert_eq!(
            c.series.coefficient(&m).unwrap(),
            QRat::one().div(&QRat::one_minus_q_power(-1)).unwrap()
        );
        assert_eq!(c.level, 1);
    }

    #[test]
    fn level_zero_series_has_positive_a_support_beyond_degree_zero() {
        // The plain localization series pushes every positive degree into
        // strictly positive a-order (each factor carries U⁻¹-monomials that
        // reorient).
        let x = projective_space(1);
        let p = fp(&[1]);
        let spec = point_spec(&x, &p, 2, 4);
        let c = i_function(&x, &p, 0, &spec).unwrap();
        assert!(c.series.constant_term().is_one());
        for (m, _) in c.series.iter() {
            if spec.grade_z(&m.z) > 0 {
                assert!(spec.grade_a(&m.a) > 0, "{m}");
            }
        }
    }

    #[test]
    fn gamma_convention_variants_differ() {
        let x = projective_space(1);
        let p = fp(&[1]);
        let spec = point_spec(&x, &p, 2, 2);
        let plain = i_eff_modified_with(&x, &p, &spec, GammaConvention::Plain).unwrap();
        let shifted = i_eff_modified_with(&x, &p, &spec, GammaConvention::QShifted).unwrap();
        assert_eq!(plain.series, shifted.series);
        assert_ne!(plain.gamma.expanded(), shifted.gamma.expanded());
    }
}
