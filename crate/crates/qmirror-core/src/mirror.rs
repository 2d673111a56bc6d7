//! Circuits, q-difference operators, the coefficient-recursion uniqueness
//! check, and the end-to-end mirror verification.
//!
//! Each kernel vector with entries in {−1, 0, 1} (a circuit) yields one
//! difference equation for the dressed contributions: circuits of
//! `ker beta` act through the Kähler variables, circuits of `ker iotaᵀ` act
//! through the equivariant variables after multiplying in the coupling
//! prefactor. The mirror statement itself is checked per fixed point by
//! computing both sides independently and comparing prefactor forms and
//! every in-window coefficient exactly.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::exactalg::{integer_kernel, rational_rank, solve_rational, IntMatrix, RatVector};
use crate::ifunction::{degree_coefficient, enumerate_degrees, i_eff, i_eff_modified, point_spec};
use crate::qseries::{
    expand_inverse_linear, ExponentMonomial, LogPrefactor, PrefactoredSeries, QRat, QSeriesError,
    TruncatedSeries, TruncationSpec, Var,
};
use crate::toric::{FixedPoint, ToricDatum, ToricError};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MirrorError {
    Series(QSeriesError),
    Toric(ToricError),
    /// The requested assertion window is not covered by the computed orders.
    TruncationUnderflow {
        needed: (i64, i64),
        available: (i64, i64),
    },
    /// A recursion pivot vanishes at a required q-power point.
    HypothesisViolated { at: Vec<i64> },
    /// The provided circuit list is missing a chart column circuit.
    MissingChartCircuit { column: usize },
    /// Mirror comparison requires matching truncation data.
    TruncationMismatch,
}

impl fmt::Display for MirrorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MirrorError::Series(e) => write!(f, "{e}"),
            MirrorError::Toric(e) => write!(f, "{e}"),
            MirrorError::TruncationUnderflow { needed, available } => write!(
                f,
                "truncation underflow: need orders ({}, {}), computed ({}, {})",
                needed.0, needed.1, available.0, available.1
            ),
            MirrorError::HypothesisViolated { at } => {
                write!(f, "recursion pivot vanishes at q-powers {at:?}")
            }
            MirrorError::MissingChartCircuit { column } => {
                write!(f, "circuit list is missing chart column {}", column + 1)
            }
            MirrorError::TruncationMismatch => write!(f, "mismatched truncation data"),
        }
    }
}

impl core::error::Error for MirrorError {}

impl From<QSeriesError> for MirrorError {
    fn from(e: QSeriesError) -> Self {
        MirrorError::Series(e)
    }
}

impl From<ToricError> for MirrorError {
    fn from(e: ToricError) -> Self {
        MirrorError::Toric(e)
    }
}

/// Which kernel a circuit lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitSide {
    /// `ker beta`; acts through the Kähler variables.
    Kahler,
    /// `ker iotaᵀ`; acts through the equivariant variables.
    Equivariant,
}

/// A kernel vector with entries in {−1, 0, 1}, canonicalized so the first
/// nonzero entry is +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub mu: Vec<i64>,
    pub side: CircuitSide,
}

impl Circuit {
    pub fn new(mu: Vec<i64>, side: CircuitSide) -> Self {
        assert!(mu.iter().all(|&v| (-1..=1).contains(&v)));
        assert!(mu.iter().any(|&v| v != 0));
        Circuit { mu, side }
    }

    pub fn positive_support(&self) -> Vec<usize> {
        self.mu
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn negative_support(&self) -> Vec<usize> {
        self.mu
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.mu.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// All nonzero vectors of `ker M` with entries in {−1, 0, 1}, one
/// representative per ± pair (first nonzero entry +1), sorted. Complete by
/// construction: a circuit is determined by its restriction to any row set
/// on which the kernel basis is invertible, and that restriction is itself a
/// {−1, 0, 1}-vector, so scanning all 3^rank sign patterns on such a row set
/// finds every circuit.
pub fn circuits(m: &IntMatrix) -> Vec<Vec<i64>> {
    let basis = integer_kernel(m);
    let n = basis.rows();
    let r = basis.cols();
    if r == 0 {
        return Vec::new();
    }
    // First r rows of the basis that are linearly independent.
    let rows_rat: Vec<RatVector> = (0..n)
        .map(|i| {
            (0..r)
                .map(|j| BigRational::from(basis.at(i, j).clone()))
                .collect()
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut trial: Vec<RatVector> = chosen.iter().map(|&c| rows_rat[c].clone()).collect();
        trial.push(rows_rat[i].clone());
        if rational_rank(&trial) == trial.len() {
            chosen.push(i);
            if chosen.len() == r {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), r, "kernel basis has full column rank");
    let system: Vec<RatVector> = chosen.iter().map(|&c| rows_rat[c].clone()).collect();

    let mut found: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let mut pattern = vec![0i64; r];
    loop {
        // Solve basis_S · x = pattern exactly.
        let rhs: Vec<BigRational> = pattern
            .iter()
            .map(|&v| BigRational::from(BigInt::from(v)))
            .collect();
        if let Some(x) = solve_rational(&system, &rhs) {
            if x.iter().all(|c| c.is_integer()) {
                let mut mu = vec![0i64; n];
                let mut valid = true;
                for (i, row) in rows_rat.iter().enumerate() {
                    let mut acc = BigRational::zero();
                    for (j, c) in x.iter().enumerate() {
                        acc += &row[j] * c;
                    }
                    if !acc.is_integer() {
                        valid = false;
                        break;
                    }
                    let num = acc.numer().clone();
                    if num.abs() > BigInt::from(1) {
                        valid = false;
                        break;
                    }
                    mu[i] = i64::try_from(&num).expect("entry is ±1 or 0");
                }
                if valid && mu.iter().any(|&v| v != 0) {
                    if let Some(first) = mu.iter().find(|&&v| v != 0) {
                        if *first < 0 {
                            for v in &mut mu {
                                *v = -*v;
                            }
                        }
                    }
                    found.insert(mu, ());
                }
            }
        }
        // Next sign pattern in {−1, 0, 1}^r.
        let mut idx = 0;
        loop {
            if idx == r {
                return found.into_keys().collect();
            }
            if pattern[idx] < 1 {
                pattern[idx] += 1;
                break;
            }
            pattern[idx] = -1;
            idx += 1;
        }
    }
}

/// Brute-force circuit enumeration over the full sign box {−1, 0, 1}^n,
/// feasible at desk scale (n ≤ 12); the oracle for `circuits`.
pub fn circuits_brute_force(m: &IntMatrix) -> Vec<Vec<i64>> {
    let n = m.cols();
    let mut found: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let mut v = vec![-1i64; n];
    'outer: loop {
        if v.iter().any(|&x| x != 0) {
            let in_kernel = (0..m.rows()).all(|i| {
                let mut acc = BigInt::zero();
                for (j, &x) in v.iter().enumerate() {
                    acc += m.at(i, j) * BigInt::from(x);
                }
                acc.is_zero()
            });
            if in_kernel {
                let mut mu = v.clone();
                if mu.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 {
                    for x in &mut mu {
                        *x = -*x;
                    }
                }
                found.insert(mu, ());
            }
        }
        let mut idx = 0;
        loop {
            if idx == n {
                break 'outer;
            }
            if v[idx] < 1 {
                v[idx] += 1;
                break;
            }
            v[idx] = -1;
            idx += 1;
        }
    }
    found.into_keys().collect()
}

/// Circuits of `ker beta` (Kähler side).
pub fn kahler_circuits(datum: &ToricDatum) -> Vec<Circuit> {
    circuits(datum.beta())
        .into_iter()
        .map(|mu| Circuit::new(mu, CircuitSide::Kahler))
        .collect()
}

/// Circuits of `ker iotaᵀ` (equivariant side).
pub fn equivariant_circuits(datum: &ToricDatum) -> Vec<Circuit> {
    circuits(&datum.iota().transpose())
        .into_iter()
        .map(|mu| Circuit::new(mu, CircuitSide::Equivariant))
        .collect()
}

/// One normal-form summand of a difference operator: coefficient times
/// monomial multiplication times a composite variable shift, the
/// multiplication applied after the shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTerm {
    pub coeff: QRat,
    pub z_mul: Vec<i64>,
    pub a_mul: Vec<i64>,
    pub z_shift: Vec<i64>,
    pub a_shift: Vec<i64>,
}

/// A q-difference operator as a sum of normal-form terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceOperator {
    n: usize,
    terms: Vec<OperatorTerm>,
}

impl DifferenceOperator {
    pub fn identity(n: usize) -> Self {
        DifferenceOperator {
            n,
            terms: vec![OperatorTerm {
                coeff: QRat::one(),
                z_mul: vec![0; n],
                a_mul: vec![0; n],
                z_shift: vec![0; n],
                a_shift: vec![0; n],
            }],
        }
    }

    pub fn zero(n: usize) -> Self {
        DifferenceOperator { n, terms: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    /// Multiplication by `coeff · z^{zexp} a^{aexp}`.
    pub fn monomial(n: usize, coeff: QRat, zexp: Vec<i64>, aexp: Vec<i64>) -> Self {
        DifferenceOperator {
            n,
            terms: vec![OperatorTerm {
                coeff,
                z_mul: zexp,
                a_mul: aexp,
                z_shift: vec![0; n],
                a_shift: vec![0; n],
            }],
        }
    }

    /// The shift `v ↦ q^s v`.
    pub fn shift(n: usize, var: Var, s: i64) -> Self {
        let mut z_shift = vec![0; n];
        let mut a_shift = vec![0; n];
        match var {
            Var::Z(i) => z_shift[i] = s,
            Var::A(i) => a_shift[i] = s,
        }
        DifferenceOperator {
            n,
            terms: vec![OperatorTerm {
                coeff: QRat::one(),
                z_mul: vec![0; n],
                a_mul: vec![0; n],
                z_shift,
                a_shift,
            }],
        }
    }

    pub fn add(&self, other: &DifferenceOperator) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        DifferenceOperator { n: self.n, terms }.normalized()
    }

    pub fn sub(&self, other: &DifferenceOperator) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| OperatorTerm {
            coeff: -&t.coeff,
            ..t.clone()
        }));
        DifferenceOperator { n: self.n, terms }.normalized()
    }

    /// Operator composition `self ∘ other` (self applied after other).
    /// Commuting a shift past a monomial costs the q-power
    /// `q^{⟨shift, monomial⟩}`.
    pub fn compose(&self, other: &DifferenceOperator) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for t1 in &self.terms {
            for t2 in &other.terms {
                let pairing: i64 = t1
                    .z_shift
                    .iter()
                    .zip(&t2.z_mul)
                    .chain(t1.a_shift.iter().zip(&t2.a_mul))
                    .map(|(s, m)| s * m)
                    .sum();
                let coeff = &(&t1.coeff * &t2.coeff) * &QRat::q_power(pairing);
                terms.push(OperatorTerm {
                    coeff,
                    z_mul: add_vec(&t1.z_mul, &t2.z_mul),
                    a_mul: add_vec(&t1.a_mul, &t2.a_mul),
                    z_shift: add_vec(&t1.z_shift, &t2.z_shift),
                    a_shift: add_vec(&t1.a_shift, &t2.a_shift),
                });
            }
        }
        DifferenceOperator { n: self.n, terms }.normalized()
    }

    /// Sorted-merged normal form; coefficient arithmetic is exact so equal
    /// operators have equal normal forms.
    pub fn normalized(&self) -> Self {
        let mut map: BTreeMap<(Vec<i64>, Vec<i64>, Vec<i64>, Vec<i64>), QRat> = BTreeMap::new();
        for t in &self.terms {
            let key = (
                t.z_mul.clone(),
                t.a_mul.clone(),
                t.z_shift.clone(),
                t.a_shift.clone(),
            );
            match map.remove(&key) {
                Some(c) => {
                    let s = &c + &t.coeff;
                    if !s.is_zero() {
                        map.insert(key, s);
                    }
                }
                None => {
                    if !t.coeff.is_zero() {
                        map.insert(key, t.coeff.clone());
                    }
                }
            }
        }
        DifferenceOperator {
            n: self.n,
            terms: map
                .into_iter()
                .map(|((z_mul, a_mul, z_shift, a_shift), coeff)| OperatorTerm {
                    coeff,
                    z_mul,
                    a_mul,
                    z_shift,
                    a_shift,
                })
                .collect(),
        }
    }

    /// Conjugation by the mirror map: variable blocks swap, shifts reverse
    /// (the shift base inverts with `q`), coefficients pass through
    /// `q ↦ q⁻¹`.
    pub fn tau_conjugate(&self) -> Self {
        DifferenceOperator {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| OperatorTerm {
                    coeff: t.coeff.invert_q(),
                    z_mul: t.a_mul.clone(),
                    a_mul: t.z_mul.clone(),
                    z_shift: t.a_shift.iter().map(|s| -s).collect(),
                    a_shift: t.z_shift.iter().map(|s| -s).collect(),
                })
                .collect(),
        }
        .normalized()
    }

    /// Apply to a dressed series. The prefactor is unchanged; each term
    /// shifts variable by variable (producing prefactor multipliers) and
    /// then multiplies by its monomial and coefficient.
    pub fn apply(&self, input: &PrefactoredSeries) -> Result<PrefactoredSeries, QSeriesError> {
        let spec = input.series.spec().clone();
        let mut total = TruncatedSeries::zero(spec);
        for t in &self.terms {
            let mut cur = input.clone();
            for i in 0..self.n {
                if t.z_shift[i] != 0 {
                    cur = cur.shift(Var::Z(i), t.z_shift[i]);
                }
            }
            for i in 0..self.n {
                if t.a_shift[i] != 0 {
                    cur = cur.shift(Var::A(i), t.a_shift[i]);
                }
            }
            let mono = ExponentMonomial {
                z: t.z_mul.clone(),
                a: t.a_mul.clone(),
            };
            total = total.add(&cur.series.mul_monomial(&mono, &t.coeff))?;
        }
        Ok(PrefactoredSeries {
            prefactor: input.prefactor.clone(),
            series: total,
        })
    }

    /// Net support displacement of each term against a given prefactor:
    /// the term monomial times the shift multipliers.
    fn displacements(&self, prefactor: &LogPrefactor) -> Vec<ExponentMonomial> {
        self.terms
            .iter()
            .map(|t| {
                let mut mono = ExponentMonomial {
                    z: t.z_mul.clone(),
                    a: t.a_mul.clone(),
                };
                for i in 0..self.n {
                    if t.z_shift[i] != 0 {
                        let (m, _) = prefactor.multiplier_monomial(Var::Z(i), t.z_shift[i]);
                        mono = mono.mul(&m);
                    }
                    if t.a_shift[i] != 0 {
                        let (m, _) = prefactor.multiplier_monomial(Var::A(i), t.a_shift[i]);
                        mono = mono.mul(&m);
                    }
                }
                mono
            })
            .collect()
    }

    /// Apply the operator and decide whether the result vanishes on the
    /// assertion window `(nz, na)`. A coefficient may be asserted only if
    /// every term reads it from inside the computed window; errs if the
    /// requested window is not fully assertable.
    pub fn annihilates(
        &self,
        input: &PrefactoredSeries,
        nz: i64,
        na: i64,
    ) -> Result<bool, MirrorError> {
        let spec = input.series.spec();
        let displacements = self.displacements(&input.prefactor);
        let mut safe_nz = spec.nz;
        let mut safe_na = spec.na;
        for d in &displacements {
            safe_nz = safe_nz.min(spec.nz + spec.grade_z(&d.z));
            safe_na = safe_na.min(spec.na + spec.grade_a(&d.a));
        }
        if nz > safe_nz || na > safe_na {
            return Err(MirrorError::TruncationUnderflow {
                needed: (nz, na),
                available: (safe_nz, safe_na),
            });
        }
        let result = self.apply(input)?;
        Ok(result
            .series
            .iter()
            .all(|(m, _)| spec.grade_z(&m.z) > nz || spec.grade_a(&m.a) > na))
    }
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// The factor `z_i⁻¹ (1 − q^{−z_i ∂_{z_i}})`.
fn kahler_factor(n: usize, i: usize) -> DifferenceOperator {
    let mut zexp = vec![0i64; n];
    zexp[i] = -1;
    let div = DifferenceOperator::monomial(n, QRat::one(), zexp, vec![0; n]);
    let inner = DifferenceOperator::identity(n).sub(&DifferenceOperator::shift(n, Var::Z(i), -1));
    div.compose(&inner)
}

/// The factor `a_i⁻¹ (1 − q^{a_i ∂_{a_i}})`.
fn equivariant_factor(n: usize, i: usize) -> DifferenceOperator {
    let mut aexp = vec![0i64; n];
    aexp[i] = -1;
    let div = DifferenceOperator::monomial(n, QRat::one(), vec![0; n], aexp);
    let inner = DifferenceOperator::identity(n).sub(&DifferenceOperator::shift(n, Var::A(i), 1));
    div.compose(&inner)
}

fn support_product(
    n: usize,
    support: &[usize],
    factor: impl Fn(usize, usize) -> DifferenceOperator,
) -> DifferenceOperator {
    let mut op = DifferenceOperator::identity(n);
    for &i in support {
        op = op.compose(&factor(n, i));
    }
    op
}

/// The Kähler-side operator of a circuit:
/// `∏_{i∈S₊} z_i⁻¹(1 − q^{−z_i∂}) − ∏_{i∈S₋} z_i⁻¹(1 − q^{−z_i∂})`.
pub fn kahler_operator(n: usize, circuit: &Circuit) -> DifferenceOperator {
    assert_eq!(circuit.side, CircuitSide::Kahler);
    let plus = support_product(n, &circuit.positive_support(), kahler_factor);
    let minus = support_product(n, &circuit.negative_support(), kahler_factor);
    plus.sub(&minus)
}

/// The equivariant-side operator of a circuit:
/// `∏_{i∈R₊} a_i⁻¹(1 − q^{a_i∂}) − ∏_{i∈R₋} a_i⁻¹(1 − q^{a_i∂})`,
/// to be applied after multiplying in the coupling prefactor.
pub fn equivariant_operator(n: usize, circuit: &Circuit) -> DifferenceOperator {
    assert_eq!(circuit.side, CircuitSide::Equivariant);
    let plus = support_product(n, &circuit.positive_support(), equivariant_factor);
    let minus = support_product(n, &circuit.negative_support(), equivariant_factor);
    plus.sub(&minus)
}

/// The coupling prefactor `Σ_i ln z_i ln a_i / ln q` the equivariant
/// equations act through.
pub fn coupling_prefactor(n: usize) -> LogPrefactor {
    LogPrefactor::kahler_equivariant_coupling(n)
}

/// Check `(q^{−z_i∂} + z_i q^{a_i∂} − 1)` annihilates the contribution, on
/// the contribution's full window.
pub fn linear_relation_check(
    input: &PrefactoredSeries,
    i: usize,
) -> Result<bool, MirrorError> {
    let n = input.prefactor.n();
    let mut zexp = vec![0i64; n];
    zexp[i] = 1;
    let op = DifferenceOperator::shift(n, Var::Z(i), -1)
        .add(
            &DifferenceOperator::monomial(n, QRat::one(), zexp, vec![0; n])
                .compose(&DifferenceOperator::shift(n, Var::A(i), 1)),
        )
        .sub(&DifferenceOperator::identity(n));
    let spec = input.series.spec();
    op.annihilates(input, spec.nz, spec.na)
}

/// Per-point difference-equation verification at the stated orders. The
/// contribution is computed on an internally enlarged window so that every
/// asserted coefficient is genuinely in-window.
pub fn check_kahler_equation(
    datum: &ToricDatum,
    p: &FixedPoint,
    circuit: &Circuit,
    nz: i64,
    na: i64,
) -> Result<bool, MirrorError> {
    let dz = circuit
        .positive_support()
        .iter()
        .filter(|&&i| p.contains(i))
        .count()
        .max(
            circuit
                .negative_support()
                .iter()
                .filter(|&&i| p.contains(i))
                .count(),
        ) as i64;
    let spec = point_spec(datum, p, nz + dz, na);
    let contribution = i_eff_modified(datum, p, &spec)?.to_prefactored()?;
    let op = kahler_operator(datum.n(), circuit);
    op.annihilates(&contribution, nz, na)
}

pub fn check_equivariant_equation(
    datum: &ToricDatum,
    p: &FixedPoint,
    circuit: &Circuit,
    nz: i64,
    na: i64,
) -> Result<bool, MirrorError> {
    let da = circuit
        .positive_support()
        .iter()
        .filter(|&&i| !p.contains(i))
        .count()
        .max(
            circuit
                .negative_support()
                .iter()
                .filter(|&&i| !p.contains(i))
                .count(),
        ) as i64;
    let spec = point_spec(datum, p, nz, na + da);
    let contribution = i_eff_modified(datum, p, &spec)?
        .to_prefactored()?
        .with_added_form(&coupling_prefactor(datum.n()));
    let op = equivariant_operator(datum.n(), circuit);
    op.annihilates(&contribution, nz, na)
}

/// One line of the difference-equation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquationKind {
    Linear { variable: usize },
    Kahler { circuit: Vec<i64> },
    Equivariant { circuit: Vec<i64> },
}

#[derive(Clone, Debug)]
pub struct DiffeqLine {
    pub point: FixedPoint,
    pub equation: EquationKind,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct DiffeqReport {
    pub orders: (i64, i64),
    pub lines: Vec<DiffeqLine>,
}

impl DiffeqReport {
    pub fn all_ok(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }
}

/// Run the full difference-equation suite on one datum: the linear relation
/// for every coordinate at every point, and both circuit families.
pub fn verify_difference_equations(
    datum: &ToricDatum,
    nz: i64,
    na: i64,
) -> Result<DiffeqReport, MirrorError> {
    let n = datum.n();
    let kahler = kahler_circuits(datum);
    let equivariant = equivariant_circuits(datum);
    let mut lines = Vec::new();
    for p in datum.fixed_points() {
        let spec = point_spec(datum, &p, nz, na);
        let contribution = i_eff_modified(datum, &p, &spec)?.to_prefactored()?;
        for i in 0..n {
            lines.push(DiffeqLine {
                point: p.clone(),
                equation: EquationKind::Linear { variable: i },
                ok: linear_relation_check(&contribution, i)?,
            });
        }
        for c in &kahler {
            lines.push(DiffeqLine {
                point: p.clone(),
                equation: EquationKind::Kahler {
                    circuit: c.mu.clone(),
                },
                ok: check_kahler_equation(datum, &p, c, nz, na)?,
            });
        }
        for c in &equivariant {
            lines.push(DiffeqLine {
                point: p.clone(),
                equation: EquationKind::Equivariant {
                    circuit: c.mu.clone(),
                },
                ok: check_equivariant_equation(datum, &p, c, nz, na)?,
            });
        }
    }
    Ok(DiffeqReport {
        orders: (nz, na),
        lines,
    })
}

/// Rebuild the canonical series coefficients from the constant term via the
/// chart-column recursion and compare against the directly computed series.
/// `initial` scales the seed (the series is linear in it).
pub fn uniqueness_recursion_check(
    datum: &ToricDatum,
    p: &FixedPoint,
    circuits: &[Circuit],
    nz: i64,
    na: i64,
    initial: &QRat,
) -> Result<bool, MirrorError> {
    let table = datum.restriction_table(p);
    let k = datum.k();
    let spec = point_spec(datum, p, nz, na);

    // Chart column circuits: +1 at p_j, C_{ij} outside p. They must be among
    // the provided circuits (up to the sign canonicalization).
    let mut columns: Vec<Vec<i64>> = Vec::new();
    for j in 0..k {
        let mut mu = vec![0i64; datum.n()];
        mu[p.indices()[j]] = 1;
        for (row, &i) in table.complement.iter().enumerate() {
            mu[i] = i64::try_from(table.c.at(row, j)).expect("chart entry exceeds i64");
        }
        let mut canon = mu.clone();
        if canon.iter().find(|&&v| v != 0).copied().unwrap_or(0) < 0 {
            for v in &mut canon {
                *v = -*v;
            }
        }
        if !circuits.iter().any(|c| c.mu == canon) {
            return Err(MirrorError::MissingChartCircuit { column: j });
        }
        columns.push(mu);
    }

    let degrees = enumerate_degrees(datum, p, nz);
    let by_chart: BTreeMap<Vec<i64>, &crate::ifunction::DegreeVector> = degrees
        .iter()
        .map(|deg| {
            let m: Vec<i64> = p.indices().iter().map(|&i| deg.line_degrees[i]).collect();
            (m, deg)
        })
        .collect();

    let mut computed: BTreeMap<Vec<i64>, TruncatedSeries> = BTreeMap::new();
    for (m, deg) in &by_chart {
        if m.iter().all(|&v| v == 0) {
            computed.insert(
                m.clone(),
                TruncatedSeries::one(spec.clone()).scale(initial),
            );
            continue;
        }
        let j = m.iter().position(|&v| v > 0).expect("nonzero chart degree");
        let mut prev_m = m.clone();
        prev_m[j] -= 1;
        let prev = computed
            .get(&prev_m)
            .expect("lexicographic order visits predecessors first")
            .clone();
        // Pivot (1 − q^{−m_j}) must not vanish at the required q-power.
        let pivot = QRat::one_minus_q_power(-m[j]);
        if pivot.is_zero() {
            return Err(MirrorError::HypothesisViolated { at: m.clone() });
        }
        let mu = &columns[j];
        let mut acc = prev.scale(&pivot.inv().map_err(MirrorError::Series)?);
        for (row, &i) in table.complement.iter().enumerate() {
            let di = deg.line_degrees[i];
            let u = ExponentMonomial::from_a(table.exponents[row].clone());
            match mu[i] {
                1 => {
                    // Divide by (1 − U_i q^{−D_i}): geometric inverse.
                    let inv = expand_inverse_linear(&QRat::q_power(-di), &u, &spec)?;
                    acc = acc.mul(&inv)?;
                }
                -1 => {
                    // Multiply by (1 − U_i q^{−D'_i}) with D' = D − mu.
                    let mut f = TruncatedSeries::one(spec.clone());
                    f.add_term(u, -&QRat::q_power(-(di - mu[i])));
                    acc = acc.mul(&f)?;
                }
                _ => {}
            }
        }
        computed.insert(m.clone(), acc);
    }

    // Compare against the directly assembled per-degree coefficients.
    for (m, deg) in &by_chart {
        let direct = degree_coefficient(&table, deg, &spec)?.scale(initial);
        if computed[m] != direct {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One coefficient disagreement in a mirror comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffDiff {
    pub monomial: ExponentMonomial,
    pub lhs: QRat,
    pub rhs: QRat,
}

/// Verdict for one fixed point of the mirror comparison.
#[derive(Clone, Debug)]
pub struct PointVerdict {
    pub point: FixedPoint,
    pub mirror_point: FixedPoint,
    pub prefactor_ok: bool,
    pub diffs: Vec<CoeffDiff>,
}

impl PointVerdict {
    pub fn ok(&self) -> bool {
        self.prefactor_ok && self.diffs.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct MirrorReport {
    pub orders: (i64, i64),
    pub points: Vec<PointVerdict>,
}

impl MirrorReport {
    pub fn all_ok(&self) -> bool {
        self.points.iter().all(PointVerdict::ok)
    }
}

/// Compare the dressed contribution at `p` with the mirror-mapped dressed
/// contribution at `partner` on the dual datum. The dual side is computed at
/// swapped orders; after the variable swap the truncation data coincide and
/// the comparison is exact coefficient by coefficient.
pub fn verify_pair(
    datum: &ToricDatum,
    dual: &ToricDatum,
    p: &FixedPoint,
    partner: &FixedPoint,
    nz: i64,
    na: i64,
) -> Result<PointVerdict, MirrorError> {
    let n = datum.n();
    let spec = point_spec(datum, p, nz, na);
    let lhs = i_eff_modified(datum, p, &spec)?.to_prefactored()?;
    let dual_spec = point_spec(dual, partner, na, nz);
    let rhs = i_eff_modified(dual, partner, &dual_spec)?
        .to_prefactored()?
        .tau();
    // Identity under comparison:
    //   prefactor(p) + Σ ln z_i ln a_i / ln q = tau(prefactor(partner)).
    let coupled = lhs.prefactor.add(&coupling_prefactor(n));
    let prefactor_ok = coupled == rhs.prefactor;
    if lhs.series.spec() != rhs.series.spec() {
        return Err(MirrorError::TruncationMismatch);
    }
    let difference = lhs.series.sub(&rhs.series)?;
    let mut diffs = Vec::new();
    for (m, _) in difference.iter() {
        diffs.push(CoeffDiff {
            monomial: m.clone(),
            lhs: lhs.series.coefficient(m).map_err(MirrorError::Series)?,
            rhs: rhs.series.coefficient(m).map_err(MirrorError::Series)?,
        });
    }
    Ok(PointVerdict {
        point: p.clone(),
        mirror_point: partner.clone(),
        prefactor_ok,
        diffs,
    })
}

/// Verify the mirror identity point by point: for each fixed point `p`, the
/// dressed contribution equals the coupling prefactor times the mirror map
/// of the dual contribution at the complement point.
pub fn mirror_verify(datum: &ToricDatum, nz: i64, na: i64) -> Result<MirrorReport, MirrorError> {
    let dual = datum.gale_dual()?;
    let mut points = Vec::new();
    for p in datum.fixed_points() {
        let partner = p.mirror(datum.n());
        points.push(verify_pair(datum, &dual, &p, &partner, nz, na)?);
    }
    Ok(MirrorReport {
        orders: (nz, na),
        points,
    })
}
