//! Toric datum layer: validated charge matrices, Gale duality, fixed points,
//! Kähler/attracting/effective cones, GIT chambers, and the character
//! restrictions at fixed points.
//!
//! A datum is the short exact sequence `0 → Z^k → Z^n → Z^d → 0` presented by
//! a totally unimodular charge matrix `iota` (n×k) and its cokernel map
//! `beta` (d×n). Fixed points of the quotient stack are the k-subsets of row
//! indices whose `iota`-submatrix is invertible; all cones attached to a
//! fixed point are read off `iota` and `beta` directly.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactalg::{
    cokernel_map, first_bad_minor, integer_kernel, invert_unimodular, rational_rank,
    row_hermite_normal_form, smith_normal_form, solve_affine, subsets_lex, ExactAlgError,
    IntMatrix, RatVector,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToricError {
    /// Some maximal minor falls outside {−1, 0, 1}; carries the offending
    /// 0-based row subset and the minor value.
    NotTotallyUnimodular { rows: Vec<usize>, minor: BigInt },
    RankDeficient { rank: usize, expected: usize },
    /// A user-supplied cokernel map is incompatible with the charge matrix.
    InvalidBeta { reason: String },
    /// Stability condition lies on a facet hyperplane of some Kähler cone.
    OnWall { point: FixedPoint },
    /// Cocharacter whose lift has a zero entry outside the fixed point.
    NonGenericCocharacter { index: usize },
    /// Chamber enumeration is only implemented for k ≤ 2.
    UnsupportedChambers { k: usize },
    DimensionMismatch { expected: usize, got: usize },
}

impl fmt::Display for ToricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToricError::NotTotallyUnimodular { rows, minor } => {
                write!(f, "not totally unimodular: rows {{")?;
                for (i, r) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", r + 1)?;
                }
                write!(f, "}} have minor {minor}")
            }
            ToricError::RankDeficient { rank, expected } => {
                write!(f, "charge matrix is rank deficient: rank {rank}, expected {expected}")
            }
            ToricError::InvalidBeta { reason } => write!(f, "invalid cokernel map: {reason}"),
            ToricError::OnWall { point } => {
                write!(f, "stability condition lies on a wall of the Kähler cone of {point}")
            }
            ToricError::NonGenericCocharacter { index } => {
                write!(f, "cocharacter is not generic: lift vanishes at index {}", index + 1)
            }
            ToricError::UnsupportedChambers { k } => {
                write!(f, "chamber enumeration unsupported for k = {k} (only k ≤ 2); use point queries")
            }
            ToricError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
        }
    }
}

impl core::error::Error for ToricError {}

impl From<ExactAlgError> for ToricError {
    fn from(e: ExactAlgError) -> Self {
        match e {
            ExactAlgError::RankDeficient { rank, expected } => {
                ToricError::RankDeficient { rank, expected }
            }
            ExactAlgError::NotUnimodular { det } => ToricError::NotTotallyUnimodular {
                rows: Vec::new(),
                minor: det,
            },
        }
    }
}

/// A torus-fixed point of the quotient stack: a size-k subset of row indices
/// (0-based, sorted) whose `iota`-submatrix has determinant ±1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedPoint {
    indices: Vec<usize>,
}

impl FixedPoint {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        FixedPoint { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Indices not in the subset, in increasing order.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.contains(*i)).collect()
    }

    /// The mirror fixed point: the complement subset.
    pub fn mirror(&self, n: usize) -> FixedPoint {
        FixedPoint {
            indices: self.complement(n),
        }
    }
}

impl fmt::Debug for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.indices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, "}}")
    }
}

/// Finitely generated rational polyhedral cone, tagged with whether it
/// stands for its interior or its closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    generators: Vec<RatVector>,
    ambient: usize,
    open: bool,
}

impl RationalCone {
    pub fn new(generators: Vec<RatVector>, ambient: usize, open: bool) -> Self {
        for g in &generators {
            assert_eq!(g.len(), ambient, "generator dimension mismatch");
            assert!(g.iter().any(|x| !x.is_zero()), "zero generator");
        }
        RationalCone {
            generators,
            ambient,
            open,
        }
    }

    pub fn generators(&self) -> &[RatVector] {
        &self.generators
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_open(&self) -> bool {
        self.open
    }

    /// Exact membership test. `strict` asks for the interior, otherwise the
    /// closure. Linearly independent generator sets are decided by solving
    /// the generator system; general sets fall back to exact
    /// Fourier–Motzkin feasibility.
    pub fn contains(&self, v: &[BigRational], strict: bool) -> Result<bool, ToricError> {
        if v.len() != self.ambient {
            return Err(ToricError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        if self.ambient == 0 {
            return Ok(true);
        }
        if self.generators.is_empty() {
            // The zero cone: contains only the origin, has empty interior.
            return Ok(!strict && v.iter().all(Zero::is_zero));
        }
        let m = self.generators.len();
        if rational_rank(&self.generators) == m {
            // rows of the system: ambient equations, unknowns = coefficients
            let rows: Vec<RatVector> = (0..self.ambient)
                .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
                .collect();
            let Some(lambda) = crate::exactalg::solve_rational(&rows, v) else {
                return Ok(false);
            };
            return Ok(if strict {
                // Interior is nonempty only when the cone is full-dimensional.
                m == self.ambient && lambda.iter().all(Signed::is_positive)
            } else {
                lambda.iter().all(|x| !x.is_negative())
            });
        }
        // General case: ∃ λ ≥ 0 (or λ > 0 for the relative interior) with
        // G·λ = v, decided by eliminating the solution-space parameters.
        let rows: Vec<RatVector> = (0..self.ambient)
            .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
            .collect();
        let Some((particular, kernel)) = solve_affine(&rows, v) else {
            return Ok(false);
        };
        if strict && rational_rank(&self.generators) < self.ambient {
            return Ok(false);
        }
        // λ = particular + kernel·t; require λ_i ≥ 0 (resp. > 0): as
        // inequalities in t: −Σ_j kernel_j[i] t_j ≤ particular[i].
        let nt = kernel.len();
        let system: Vec<Inequality> = (0..m)
            .map(|i| Inequality {
                coeffs: (0..nt).map(|j| -kernel[j][i].clone()).collect(),
                rhs: particular[i].clone(),
                strict,
            })
            .collect();
        Ok(fm_feasible(system))
    }
}

/// One inequality `coeffs · t ≤ rhs` (strict: `<`).
struct Inequality {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
    strict: bool,
}

/// Fourier–Motzkin feasibility over exact rationals.
fn fm_feasible(mut system: Vec<Inequality>) -> bool {
    let nvars = system.first().map_or(0, |i| i.coeffs.len());
    for var in (0..nvars).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for ineq in system {
            if ineq.coeffs[var].is_positive() {
                pos.push(ineq);
            } else if ineq.coeffs[var].is_negative() {
                neg.push(ineq);
            } else {
                rest.push(ineq);
            }
        }
        for p in &pos {
            for q in &neg {
                // p has c_p > 0, q has c_q < 0; (−c_q)·p + c_p·q drops var.
                let cp = p.coeffs[var].clone();
                let cq = q.coeffs[var].clone();
                let coeffs: Vec<BigRational> = (0..var)
                    .map(|j| &(-&cq) * &p.coeffs[j] + &cp * &q.coeffs[j])
                    .collect();
                let rhs = &(-&cq) * &p.rhs + &cp * &q.rhs;
                rest.push(Inequality {
                    coeffs,
                    rhs,
                    strict: p.strict || q.strict,
                });
            }
        }
        for ineq in &mut rest {
            ineq.coeffs.truncate(var);
        }
        system = rest;
    }
    system.iter().all(|i| {
        if i.strict {
            i.rhs.is_positive()
        } else {
            !i.rhs.is_negative()
        }
    })
}

/// Per-fixed-point character restriction data: the integer matrix
/// `C = Q·P⁻¹` (rows over the complement, columns over the point) and the
/// a-exponent vector of each restricted coordinate character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionTable {
    pub point: FixedPoint,
    /// Complement indices, increasing; rows of `c` and entries of
    /// `exponents` are aligned with this.
    pub complement: Vec<usize>,
    /// `C = Q·P⁻¹`, integral because `P` is unimodular.
    pub c: IntMatrix,
    /// For complement index `i`: the exponent vector of
    /// `U_i|_p = a_i · ∏_{j∈p} a_j^{−C_{ij}}` over `a_1..a_n`.
    pub exponents: Vec<Vec<i64>>,
}

impl RestrictionTable {
    /// Exponent vector for a given ambient index `i ∉ p`.
    pub fn exponent_of(&self, i: usize) -> Option<&[i64]> {
        self.complement
            .iter()
            .position(|&j| j == i)
            .map(|pos| self.exponents[pos].as_slice())
    }
}

/// A validated toric datum: the exact sequence `0 → Z^k →iota Z^n →beta Z^d → 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct ToricDatum {
    iota: IntMatrix,
    beta: IntMatrix,
}

impl fmt::Debug for ToricDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ToricDatum(n={}, k={}, iota={:?}, beta={:?})",
            self.n(),
            self.k(),
            self.iota,
            self.beta
        )
    }
}

impl ToricDatum {
    /// Validate a charge matrix and derive its canonical cokernel map.
    pub fn validate(iota: IntMatrix) -> Result<Self, ToricError> {
        let k = iota.cols();
        let rank = iota.rank();
        if rank < k {
            return Err(ToricError::RankDeficient { rank, expected: k });
        }
        if let Some((rows, minor)) = first_bad_minor(&iota) {
            return Err(ToricError::NotTotallyUnimodular { rows, minor });
        }
        let beta = cokernel_map(&iota)?;
        Ok(ToricDatum { iota, beta })
    }

    /// Validate a charge matrix against a caller-supplied cokernel map.
    /// Any `beta` with `beta·iota = 0`, full rank `d = n − k` and surjective
    /// onto `Z^d` presents the same datum (the basis on `Z^d` is free).
    pub fn with_beta(iota: IntMatrix, beta: IntMatrix) -> Result<Self, ToricError> {
        let n = iota.rows();
        let k = iota.cols();
        let d = n - k;
        let rank = iota.rank();
        if rank < k {
            return Err(ToricError::RankDeficient { rank, expected: k });
        }
        if let Some((rows, minor)) = first_bad_minor(&iota) {
            return Err(ToricError::NotTotallyUnimodular { rows, minor });
        }
        if beta.rows() != d || beta.cols() != n {
            return Err(ToricError::InvalidBeta {
                reason: alloc::format!(
                    "expected a {d}×{n} matrix, got {}×{}",
                    beta.rows(),
                    beta.cols()
                ),
            });
        }
        if !beta.mul(&iota).is_zero_matrix() {
            return Err(ToricError::InvalidBeta {
                reason: String::from("beta·iota ≠ 0"),
            });
        }
        if beta.rank() != d {
            return Err(ToricError::InvalidBeta {
                reason: alloc::format!("rank {} < {d}", beta.rank()),
            });
        }
        if d > 0 {
            let snf = smith_normal_form(&beta);
            if !snf.invariant_factors().iter().all(One::is_one) {
                return Err(ToricError::InvalidBeta {
                    reason: String::from("beta is not surjective onto Z^d"),
                });
            }
        }
        Ok(ToricDatum { iota, beta })
    }

    pub fn n(&self) -> usize {
        self.iota.rows()
    }

    pub fn k(&self) -> usize {
        self.iota.cols()
    }

    pub fn d(&self) -> usize {
        self.n() - self.k()
    }

    pub fn iota(&self) -> &IntMatrix {
        &self.iota
    }

    pub fn beta(&self) -> &IntMatrix {
        &self.beta
    }

    /// The Gale dual datum: `iota^! = betaᵀ`, `beta^! = iotaᵀ`.
    pub fn gale_dual(&self) -> Result<ToricDatum, ToricError> {
        ToricDatum::with_beta(self.beta.transpose(), self.iota.transpose())
    }

    /// All fixed points: k-subsets with invertible `iota`-submatrix, in
    /// lexicographic order.
    pub fn fixed_points(&self) -> Vec<FixedPoint> {
        subsets_lex(self.n(), self.k())
            .into_iter()
            .filter(|s| !self.iota.row_submatrix(s).determinant().is_zero())
            .map(FixedPoint::new)
            .collect()
    }

    pub fn is_fixed_point(&self, p: &FixedPoint) -> bool {
        p.len() == self.k()
            && p.indices().iter().all(|&i| i < self.n())
            && !self.iota.row_submatrix(p.indices()).determinant().is_zero()
    }

    /// Open cone generated by the `iota`-rows at the point (stability
    /// conditions for which the point survives).
    pub fn kahler_cone(&self, p: &FixedPoint) -> RationalCone {
        let gens = p
            .indices()
            .iter()
            .map(|&i| int_row_to_rat(&self.iota, i))
            .collect();
        RationalCone::new(gens, self.k(), true)
    }

    /// Open cone generated by the `beta`-columns outside the point
    /// (cocharacters for which the point is minimal).
    pub fn attracting_cone(&self, p: &FixedPoint) -> RationalCone {
        let gens = p
            .complement(self.n())
            .into_iter()
            .map(|i| int_col_to_rat(&self.beta, i))
            .collect();
        RationalCone::new(gens, self.d(), true)
    }

    /// Closed dual of the Kähler cone, generated by the columns of the
    /// inverse of the `iota`-submatrix. Equivalently the inequality system
    /// `(iota·v)_i ≥ 0` for `i ∈ p`.
    pub fn effective_cone(&self, p: &FixedPoint) -> RationalCone {
        let inv = invert_unimodular(&self.iota.row_submatrix(p.indices()))
            .expect("fixed point submatrix is unimodular");
        let gens = (0..self.k()).map(|j| int_col_to_rat(&inv, j)).collect();
        RationalCone::new(gens, self.k(), false)
    }

    /// Membership in the effective cone via the inequality description.
    pub fn effective_cone_contains_by_inequalities(
        &self,
        p: &FixedPoint,
        v: &[BigRational],
    ) -> bool {
        p.indices().iter().all(|&i| {
            let mut acc = BigRational::zero();
            for (j, x) in v.iter().enumerate() {
                acc += BigRational::from(self.iota.at(i, j).clone()) * x;
            }
            !acc.is_negative()
        })
    }

    /// Coordinates of `theta` in the basis of Kähler-cone generators at `p`.
    fn kahler_coordinates(&self, p: &FixedPoint, theta: &[BigRational]) -> Vec<BigRational> {
        let inv = invert_unimodular(&self.iota.row_submatrix(p.indices()))
            .expect("fixed point submatrix is unimodular");
        // theta (row) = c · iota_p, so c = theta · iota_p⁻¹.
        (0..self.k())
            .map(|j| {
                let mut acc = BigRational::zero();
                for (l, t) in theta.iter().enumerate() {
                    acc += t * BigRational::from(inv.at(l, j).clone());
                }
                acc
            })
            .collect()
    }

    /// Fixed points surviving in the GIT quotient at `theta`. Errors if
    /// `theta` lies on a wall, i.e. on a facet of the closure of any Kähler
    /// cone (in generator coordinates: some coordinate zero, the rest
    /// nonnegative).
    pub fn quotient_fixed_points(
        &self,
        theta: &[BigRational],
    ) -> Result<Vec<FixedPoint>, ToricError> {
        if theta.len() != self.k() {
            return Err(ToricError::DimensionMismatch {
                expected: self.k(),
                got: theta.len(),
            });
        }
        let points = self.fixed_points();
        for p in &points {
            let coords = self.kahler_coordinates(p, theta);
            let on_facet = coords.iter().any(Zero::is_zero)
                && coords.iter().all(|c| !c.is_negative());
            if on_facet {
                return Err(ToricError::OnWall { point: p.clone() });
            }
        }
        Ok(self.points_at(theta, &points))
    }

    /// Fixed points whose Kähler cone interior contains `theta`, with no
    /// genericity requirement (boundary points are simply excluded).
    fn points_at(&self, theta: &[BigRational], points: &[FixedPoint]) -> Vec<FixedPoint> {
        points
            .iter()
            .filter(|p| {
                self.kahler_coordinates(p, theta)
                    .iter()
                    .all(Signed::is_positive)
            })
            .cloned()
            .collect()
    }

    /// Full-dimensional chambers of the wall structure cut out by the facets
    /// of all Kähler cones, each with its (constant) fixed-point set; empty
    /// chambers are omitted. Implemented for k ≤ 2: half-lines for k = 1,
    /// angular sectors between consecutive facet rays for k = 2.
    pub fn chambers(&self) -> Result<Vec<(RationalCone, Vec<FixedPoint>)>, ToricError> {
        let k = self.k();
        let points = self.fixed_points();
        match k {
            0 => {
                let cone = RationalCone {
                    generators: Vec::new(),
                    ambient: 0,
                    open: true,
                };
                Ok(vec![(cone, points)])
            }
            1 => {
                let mut out = Vec::new();
                for sign in [1i64, -1] {
                    let theta = vec![BigRational::from(BigInt::from(sign))];
                    let pts = self.points_at(&theta, &points);
                    if !pts.is_empty() {
                        let cone = RationalCone::new(
                            vec![theta.clone()],
                            1,
                            true,
                        );
                        out.push((cone, pts));
                    }
                }
                Ok(out)
            }
            2 => {
                let mut rays: Vec<(BigInt, BigInt)> = Vec::new();
                for p in &points {
                    for &i in p.indices() {
                        let ray = primitive_ray(self.iota.at(i, 0), self.iota.at(i, 1));
                        if !rays.contains(&ray) {
                            rays.push(ray);
                        }
                    }
                }
                rays.sort_by(compare_rays_by_angle);
                let mut out = Vec::new();
                for w in 0..rays.len() {
                    let u = &rays[w];
                    let v = &rays[(w + 1) % rays.len()];
                    if rays.len() == 1 {
                        break; // a single ray bounds no sector
                    }
                    let sample = sector_sample(u, v);
                    let theta: Vec<BigRational> = vec![
                        BigRational::from(sample.0.clone()),
                        BigRational::from(sample.1.clone()),
                    ];
                    let pts = self.points_at(&theta, &points);
                    if pts.is_empty() {
                        continue;
                    }
                    let cone = RationalCone::new(
                        vec![
                            vec![
                                BigRational::from(u.0.clone()),
                                BigRational::from(u.1.clone()),
                            ],
                            vec![
                                BigRational::from(v.0.clone()),
                                BigRational::from(v.1.clone()),
                            ],
                        ],
                        2,
                        true,
                    );
                    out.push((cone, pts));
                }
                Ok(out)
            }
            _ => Err(ToricError::UnsupportedChambers { k }),
        }
    }

    /// Unique lift of a quotient-torus cocharacter that vanishes on the
    /// point's coordinates. Errors if the lift vanishes anywhere outside the
    /// point (non-generic cocharacter).
    pub fn lift_cocharacter(
        &self,
        p: &FixedPoint,
        sigma: &[BigRational],
    ) -> Result<Vec<BigRational>, ToricError> {
        if sigma.len() != self.d() {
            return Err(ToricError::DimensionMismatch {
                expected: self.d(),
                got: sigma.len(),
            });
        }
        let complement = p.complement(self.n());
        let cols: Vec<usize> = complement.clone();
        // beta restricted to the complement columns is d×d unimodular.
        let mut sub = IntMatrix::zero(self.d(), self.d());
        for (cj, &j) in cols.iter().enumerate() {
            for i in 0..self.d() {
                *sub.at_mut(i, cj) = self.beta.at(i, j).clone();
            }
        }
        let inv = invert_unimodular(&sub).expect("complement beta-submatrix is unimodular");
        let mut lift = vec![BigRational::zero(); self.n()];
        for (cj, &j) in cols.iter().enumerate() {
            let mut acc = BigRational::zero();
            for (i, s) in sigma.iter().enumerate() {
                acc += BigRational::from(inv.at(cj, i).clone()) * s;
            }
            if acc.is_zero() {
                return Err(ToricError::NonGenericCocharacter { index: j });
            }
            lift[j] = acc;
        }
        Ok(lift)
    }

    /// True iff the point is the minimal fixed point for the cocharacter:
    /// the canonical lift is positive outside the point.
    pub fn is_minimal(&self, p: &FixedPoint, sigma: &[BigRational]) -> Result<bool, ToricError> {
        let lift = self.lift_cocharacter(p, sigma)?;
        Ok(p.complement(self.n())
            .into_iter()
            .all(|i| lift[i].is_positive()))
    }

    /// Character restrictions at a fixed point: `C = Q·P⁻¹` and the
    /// a-exponent vectors of `U_i|_p = a_i ∏_{j∈p} a_j^{−C_{ij}}` for
    /// `i ∉ p` (coordinates in `p` restrict to 1 and are not stored).
    pub fn restriction_table(&self, p: &FixedPoint) -> RestrictionTable {
        let n = self.n();
        let complement = p.complement(n);
        let p_inv = invert_unimodular(&self.iota.row_submatrix(p.indices()))
            .expect("fixed point submatrix is unimodular");
        let q = self.iota.row_submatrix(&complement);
        let c = q.mul(&p_inv);
        let mut exponents = Vec::with_capacity(complement.len());
        for (row, &i) in complement.iter().enumerate() {
            let mut e = vec![0i64; n];
            e[i] = 1;
            for (col, &j) in p.indices().iter().enumerate() {
                e[j] -= i64::try_from(c.at(row, col)).expect("restriction exponent exceeds i64");
            }
            exponents.push(e);
        }
        RestrictionTable {
            point: p.clone(),
            complement,
            c,
            exponents,
        }
    }

    /// The n effective levels `½(Σ_a iota_{ja})²`, one per row.
    pub fn effective_levels(&self) -> Vec<BigRational> {
        effective_levels_of(&self.iota)
    }

    /// Canonical kernel basis of `beta` (columns span the circuits' lattice).
    pub fn kernel_of_beta(&self) -> IntMatrix {
        integer_kernel(&self.beta)
    }

    /// Canonical kernel basis of `iotaᵀ`.
    pub fn kernel_of_iota_transpose(&self) -> IntMatrix {
        integer_kernel(&self.iota.transpose())
    }

    /// Canonical form of the image lattice of `iota` (used for lattice
    /// equality tests).
    pub fn iota_image_lattice(&self) -> IntMatrix {
        row_hermite_normal_form(&self.iota.transpose())
    }
}

/// `½ Σ_{a,b} M_{ja} M_{jb}` for each row `j`: the effective levels of a
/// charge matrix, computable for any integer matrix.
pub fn effective_levels_of(m: &IntMatrix) -> Vec<BigRational> {
    (0..m.rows())
        .map(|j| {
            let mut acc = BigInt::zero();
            for a in 0..m.cols() {
                for b in 0..m.cols() {
                    acc += m.at(j, a) * m.at(j, b);
                }
            }
            BigRational::new(acc, BigInt::from(2))
        })
        .collect()
}

fn int_row_to_rat(m: &IntMatrix, i: usize) -> RatVector {
    m.row(i)
        .iter()
        .map(|x| BigRational::from(x.clone()))
        .collect()
}

fn int_col_to_rat(m: &IntMatrix, j: usize) -> RatVector {
    (0..m.rows())
        .map(|i| BigRational::from(m.at(i, j).clone()))
        .collect()
}

fn primitive_ray(x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
    use num_integer::Integer;
    let g = x.gcd(y);
    if g.is_zero() {
        (BigInt::zero(), BigInt::zero())
    } else {
        (x / &g, y / &g)
    }
}

/// Order rays counterclockwise starting from the positive x-axis.
fn compare_rays_by_angle(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> core::cmp::Ordering {
    let half = |r: &(BigInt, BigInt)| -> u8 {
        if r.1.is_positive() || (r.1.is_zero() && r.0.is_positive()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    // Same half-plane: a before b iff cross(a, b) > 0.
    let cross = &a.0 * &b.1 - &a.1 * &b.0;
    if cross.is_positive() {
        core::cmp::Ordering::Less
    } else if cross.is_negative() {
        core::cmp::Ordering::Greater
    } else {
        core::cmp::Ordering::Equal
    }
}

/// An interior direction of the counterclockwise sector from `u` to `v`.
fn sector_sample(u: &(BigInt, BigInt), v: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    let cross = &u.0 * &v.1 - &u.1 * &v.0;
    let sum = (&u.0 + &v.0, &u.1 + &v.1);
    if cross.is_positive() {
        sum // span < 180°: the angle bisector direction works
    } else if cross.is_negative() {
        (-sum.0, -sum.1) // span > 180°: the antipode of the short bisector
    } else {
        // span exactly 180°: rotate u by +90°
        (-u.1.clone(), u.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    pub(crate) fn bl_p2() -> ToricDatum {
        ToricDatum::validate(IntMatrix::from_rows(&[&[1, 1], &[0, 1], &[1, 0], &[0, 1]])).unwrap()
    }

    pub(crate) fn projective_space(n: usize) -> ToricDatum {
        ToricDatum::validate(IntMatrix::new(n + 1, 1, vec![BigInt::one(); n + 1])).unwrap()
    }

    fn rat(x: i64) -> BigRational {
        BigRational::from(BigInt::from(x))
    }

    fn rats(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn fp(indices: &[usize]) -> FixedPoint {
        // 1-based input to match the paper's examples.
        FixedPoint::new(indices.iter().map(|&i| i - 1).collect())
    }

    fn names(points: &[FixedPoint]) -> Vec<alloc::string::String> {
        points.iter().map(|p| alloc::format!("{p}")).collect()
    }

    #[test]
    fn validate_examples() {
        let x = bl_p2();
        assert_eq!((x.n(), x.k(), x.d()), (4, 2, 2));
        assert_eq!(
            x.beta(),
            &IntMatrix::from_rows(&[&[1, 0, -1, -1], &[0, 1, 0, -1]])
        );

        let p1 = projective_space(1);
        assert_eq!((p1.n(), p1.k(), p1.d()), (2, 1, 1));
        assert_eq!(p1.beta(), &IntMatrix::from_rows(&[&[1, -1]]));

        let bad = ToricDatum::validate(IntMatrix::from_rows(&[&[1, 0], &[0, 2], &[1, 1]]));
        assert_eq!(
            bad,
            Err(ToricError::NotTotallyUnimodular {
                rows: vec![0, 1],
                minor: BigInt::from(2)
            })
        );
    }

    #[test]
    fn gale_dual_of_bl_p2_matches_mirror_example() {
        let x = bl_p2();
        let dual = x.gale_dual().unwrap();
        assert_eq!(
            dual.iota(),
            &IntMatrix::from_rows(&[&[1, 0], &[0, 1], &[-1, 0], &[-1, -1]])
        );
        assert_eq!(dual.beta(), &x.iota().transpose());
        // Kernel-lattice equality with the paper's mirror charge matrix.
        let paper = ToricDatum::with_beta(
            IntMatrix::from_rows(&[&[1, 0], &[0, 1], &[-1, 0], &[-1, -1]]),
            IntMatrix::from_rows(&[&[1, 0, 1, 0], &[1, 1, 0, 1]]),
        )
        .unwrap();
        assert_eq!(dual.iota_image_lattice(), paper.iota_image_lattice());
    }

    #[test]
    fn gale_dual_of_projective_space() {
        let x = projective_space(3);
        let dual = x.gale_dual().unwrap();
        assert_eq!(dual.iota(), &x.beta().transpose());
        assert_eq!(dual.beta(), &IntMatrix::new(1, 4, vec![BigInt::one(); 4]).clone());
    }

    #[test]
    fn gale_dual_is_an_involution_on_fixed_points() {
        for x in [bl_p2(), projective_space(2)] {
            let twice = x.gale_dual().unwrap().gale_dual().unwrap();
            assert_eq!(x.fixed_points(), twice.fixed_points());
        }
    }

    #[test]
    fn fixed_points_of_bl_p2_and_dual() {
        assert_eq!(
            names(&bl_p2().fixed_points()),
            ["{1,2}", "{1,3}", "{1,4}", "{2,3}", "{3,4}"]
        );
        assert_eq!(
            names(&bl_p2().gale_dual().unwrap().fixed_points()),
            ["{1,2}", "{1,4}", "{2,3}", "{2,4}", "{3,4}"]
        );
        assert_eq!(
            names(&projective_space(2).fixed_points()),
            ["{1}", "{2}", "{3}"]
        );
    }

    #[test]
    fn fixed_point_duality() {
        for x in [bl_p2(), projective_space(2)] {
            let dual = x.gale_dual().unwrap();
            let mut mirrored: Vec<FixedPoint> = x
                .fixed_points()
                .into_iter()
                .map(|p| p.mirror(x.n()))
                .collect();
            mirrored.sort();
            assert_eq!(mirrored, dual.fixed_points());
        }
    }

    #[test]
    fn kahler_cone_generators_match_paper() {
        let x = bl_p2();
        let c1 = x.kahler_cone(&fp(&[1, 3]));
        assert_eq!(c1.generators(), &[rats(&[1, 1]), rats(&[1, 0])]);

        let dual = x.gale_dual().unwrap();
        let c = dual.kahler_cone(&fp(&[2, 4]));
        assert_eq!(c.generators(), &[rats(&[0, 1]), rats(&[-1, -1])]);

        let p1 = projective_space(1);
        let p = fp(&[1]);
        assert_eq!(p1.kahler_cone(&p).generators(), &[rats(&[1])]);
        assert_eq!(p1.attracting_cone(&p).generators(), &[rats(&[-1])]);
        assert_eq!(p1.effective_cone(&p).generators(), &[rats(&[1])]);
    }

    #[test]
    fn cone_membership_examples() {
        let c1 = RationalCone::new(vec![rats(&[1, 0]), rats(&[1, 1])], 2, true);
        assert!(c1.contains(&rats(&[2, 1]), true).unwrap());
        assert!(!c1.contains(&rats(&[1, 1]), true).unwrap()); // boundary
        assert!(c1.contains(&rats(&[1, 1]), false).unwrap());
        assert!(!c1.contains(&rats(&[0, 1]), false).unwrap());
        assert_eq!(
            c1.contains(&rats(&[1]), false),
            Err(ToricError::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn cone_membership_with_dependent_generators() {
        // Three generators spanning the right half plane's upper quadrant
        // plus a redundant interior ray.
        let c = RationalCone::new(
            vec![rats(&[1, 0]), rats(&[0, 1]), rats(&[1, 1])],
            2,
            false,
        );
        assert!(c.contains(&rats(&[3, 2]), false).unwrap());
        assert!(c.contains(&rats(&[3, 2]), true).unwrap());
        assert!(c.contains(&rats(&[1, 0]), false).unwrap());
        assert!(!c.contains(&rats(&[1, 0]), true).unwrap());
        assert!(!c.contains(&rats(&[-1, 2]), false).unwrap());
    }

    #[test]
    fn quotient_fixed_points_in_both_chambers() {
        let x = bl_p2();
        assert_eq!(
            names(&x.quotient_fixed_points(&rats(&[2, 1])).unwrap()),
            ["{1,3}", "{2,3}", "{3,4}"]
        );
        // The paper's printed list for the second chamber contains {2,4},
        // which is not a fixed point ({1,3} belongs to the first chamber);
        // this pins the computed set.
        assert_eq!(
            names(&x.quotient_fixed_points(&rats(&[1, 2])).unwrap()),
            ["{1,2}", "{1,4}", "{2,3}", "{3,4}"]
        );
        let dual = x.gale_dual().unwrap();
        assert_eq!(
            names(&dual.quotient_fixed_points(&rats(&[1, 1])).unwrap()),
            ["{1,2}"]
        );
        // On the wall between the two chambers.
        assert!(matches!(
            x.quotient_fixed_points(&rats(&[1, 1])),
            Err(ToricError::OnWall { .. })
        ));
    }

    #[test]
    fn chambers_of_bl_p2() {
        let x = bl_p2();
        let chambers = x.chambers().unwrap();
        assert_eq!(chambers.len(), 2);
        assert_eq!(names(&chambers[0].1), ["{1,3}", "{2,3}", "{3,4}"]);
        assert_eq!(
            names(&chambers[1].1),
            ["{1,2}", "{1,4}", "{2,3}", "{3,4}"]
        );
        assert_eq!(
            chambers[0].0.generators(),
            &[rats(&[1, 0]), rats(&[1, 1])]
        );
        assert_eq!(
            chambers[1].0.generators(),
            &[rats(&[1, 1]), rats(&[0, 1])]
        );
    }

    #[test]
    fn chambers_of_bl_p2_dual() {
        let dual = bl_p2().gale_dual().unwrap();
        let chambers = dual.chambers().unwrap();
        let sets: Vec<Vec<alloc::string::String>> =
            chambers.iter().map(|(_, pts)| names(pts)).collect();
        let expect: Vec<Vec<alloc::string::String>> = [
            vec!["{1,2}"],
            vec!["{2,3}", "{2,4}"],
            vec!["{2,4}", "{3,4}"],
            vec!["{1,4}"],
        ]
        .iter()
        .map(|v| v.iter().map(|s| alloc::string::String::from(*s)).collect())
        .collect();
        assert_eq!(sets, expect);
    }

    #[test]
    fn chambers_of_projective_space() {
        for n in 1..=3 {
            let x = projective_space(n);
            let chambers = x.chambers().unwrap();
            assert_eq!(chambers.len(), 1);
            assert_eq!(chambers[0].1.len(), n + 1);
            assert_eq!(chambers[0].0.generators(), &[rats(&[1])]);
        }
    }

    #[test]
    fn chamber_queries_are_constant_on_chambers() {
        let mut rng = StdRng::seed_from_u64(41);
        for x in [bl_p2(), bl_p2().gale_dual().unwrap()] {
            for (cone, pts) in x.chambers().unwrap() {
                for _ in 0..20 {
                    // Random positive rational combination of the two
                    // boundary rays stays in the open sector.
                    let c1 = BigRational::new(
                        BigInt::from(rng.gen_range(1i64..50)),
                        BigInt::from(rng.gen_range(1i64..50)),
                    );
                    let c2 = BigRational::new(
                        BigInt::from(rng.gen_range(1i64..50)),
                        BigInt::from(rng.gen_range(1i64..50)),
                    );
                    let g = cone.generators();
                    let theta: Vec<BigRational> = (0..2)
                        .map(|i| &c1 * &g[0][i] + &c2 * &g[1][i])
                        .collect();
                    assert_eq!(x.quotient_fixed_points(&theta).unwrap(), pts);
                }
            }
        }
    }

    #[test]
    fn mirror_fixed_point_examples() {
        assert_eq!(fp(&[1, 3]).mirror(4), fp(&[2, 4]));
        assert_eq!(fp(&[1]).mirror(2), fp(&[2]));
        let p = fp(&[2, 3]);
        assert_eq!(p.mirror(5).mirror(5), p);
    }

    #[test]
    fn cone_duality_under_gale_dual() {
        for x in [bl_p2(), projective_space(2)] {
            let dual = x.gale_dual().unwrap();
            for p in x.fixed_points() {
                let pd = p.mirror(x.n());
                let a = x.attracting_cone(&p);
                let k_dual = dual.kahler_cone(&pd);
                for g in a.generators() {
                    assert!(k_dual.contains(g, false).unwrap());
                }
                for g in k_dual.generators() {
                    assert!(a.contains(g, false).unwrap());
                }
                let k = x.kahler_cone(&p);
                let a_dual = dual.attracting_cone(&pd);
                for g in k.generators() {
                    assert!(a_dual.contains(g, false).unwrap());
                }
                for g in a_dual.generators() {
                    assert!(k.contains(g, false).unwrap());
                }
            }
        }
    }

    #[test]
    fn effective_cone_descriptions_agree() {
        let mut rng = StdRng::seed_from_u64(43);
        for x in [bl_p2(), bl_p2().gale_dual().unwrap(), projective_space(2)] {
            for p in x.fixed_points() {
                let eff = x.effective_cone(&p);
                for _ in 0..100 {
                    let v: Vec<BigRational> = (0..x.k())
                        .map(|_| {
                            BigRational::new(
                                BigInt::from(rng.gen_range(-12i64..=12)),
                                BigInt::from(rng.gen_range(1i64..=6)),
                            )
                        })
                        .collect();
                    assert_eq!(
                        eff.contains(&v, false).unwrap(),
                        x.effective_cone_contains_by_inequalities(&p, &v)
                    );
                }
            }
        }
    }

    #[test]
    fn lift_cocharacter_on_p1() {
        let x = projective_space(1); // beta = (1, -1)
        let p1 = fp(&[1]);
        let lift = x.lift_cocharacter(&p1, &rats(&[1])).unwrap();
        assert_eq!(lift, rats(&[0, -1]));
        assert!(!x.is_minimal(&p1, &rats(&[1])).unwrap());
        let p2 = fp(&[2]);
        assert!(x.is_minimal(&p2, &rats(&[1])).unwrap());
    }

    #[test]
    fn minimality_matches_strict_attracting_membership() {
        let mut rng = StdRng::seed_from_u64(47);
        for x in [bl_p2(), bl_p2().gale_dual().unwrap(), projective_space(2)] {
            let all_points = x.fixed_points();
            let mut tested = 0;
            while tested < 100 {
                let sigma: Vec<BigRational> = (0..x.d())
                    .map(|_| {
                        BigRational::new(
                            BigInt::from(rng.gen_range(-20i64..=20)),
                            BigInt::from(rng.gen_range(1i64..=7)),
                        )
                    })
                    .collect();
                let minimal: Result<Vec<bool>, ToricError> =
                    all_points.iter().map(|p| x.is_minimal(p, &sigma)).collect();
                let Ok(flags) = minimal else {
                    continue; // non-generic draw
                };
                tested += 1;
                for (p, flag) in all_points.iter().zip(&flags) {
                    assert_eq!(
                        x.attracting_cone(p).contains(&sigma, true).unwrap(),
                        *flag
                    );
                }
            }
        }
    }

    #[test]
    fn exactly_one_minimal_point_per_quotient() {
        // Minimality partitions the fixed points of each GIT quotient (the
        // whole stack's attracting cones overlap across chambers). A
        // cocharacter drawn from inside one point's attracting cone makes
        // exactly that point minimal among its chamber companions.
        let mut rng = StdRng::seed_from_u64(49);
        for x in [bl_p2(), bl_p2().gale_dual().unwrap(), projective_space(2)] {
            for (_, pts) in x.chambers().unwrap() {
                for target in &pts {
                    let gens = x.attracting_cone(target);
                    for _ in 0..10 {
                        let mut sigma = vec![BigRational::zero(); x.d()];
                        for g in gens.generators() {
                            let c = BigRational::from(BigInt::from(rng.gen_range(1i64..30)));
                            for (i, v) in g.iter().enumerate() {
                                sigma[i] += &c * v;
                            }
                        }
                        let minimal: Vec<&FixedPoint> = pts
                            .iter()
                            .filter(|p| x.is_minimal(p, &sigma).unwrap_or(false))
                            .collect();
                        assert_eq!(minimal, vec![target], "sigma = {sigma:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_table_on_projective_space() {
        let x = projective_space(2);
        for (j, p) in x.fixed_points().into_iter().enumerate() {
            let table = x.restriction_table(&p);
            for (row, &i) in table.complement.iter().enumerate() {
                // U_i|_{p_j} = a_i / a_j
                let mut expect = vec![0i64; 3];
                expect[i] = 1;
                expect[j] -= 1;
                assert_eq!(table.exponents[row], expect);
            }
        }
    }

    #[test]
    fn restriction_table_on_bl_p2() {
        let x = bl_p2();
        let table = x.restriction_table(&fp(&[2, 3]));
        assert_eq!(table.complement, vec![0, 3]);
        // U1 = a1 a2⁻¹ a3⁻¹, U4 = a4 a2⁻¹
        assert_eq!(table.exponents[0], vec![1, -1, -1, 0]);
        assert_eq!(table.exponents[1], vec![0, -1, 0, 1]);
    }

    #[test]
    fn restriction_exponents_satisfy_the_defining_relations() {
        // Σ_j beta_{bj}·(u_j − e_j) = 0 where u_j is the exponent vector of
        // U_j|_p; coordinates in p restrict to 1, so there u_j = 0.
        for x in [bl_p2(), bl_p2().gale_dual().unwrap(), projective_space(3)] {
            for p in x.fixed_points() {
                let table = x.restriction_table(&p);
                for b in 0..x.d() {
                    let mut acc = vec![0i64; x.n()];
                    for j in 0..x.n() {
                        let beta_bj = i64::try_from(x.beta().at(b, j)).unwrap();
                        if beta_bj == 0 {
                            continue;
                        }
                        if let Some(e) = table.exponent_of(j) {
                            for (l, &v) in e.iter().enumerate() {
                                acc[l] += beta_bj * v;
                            }
                        }
                        acc[j] -= beta_bj; // subtract e_j
                    }
                    assert!(acc.iter().all(|&v| v == 0), "{p} relation {b}");
                }
            }
        }
    }

    #[test]
    fn restriction_exponents_are_identity_outside_the_point() {
        for x in [bl_p2(), bl_p2().gale_dual().unwrap()] {
            for p in x.fixed_points() {
                let table = x.restriction_table(&p);
                for (row, &i) in table.complement.iter().enumerate() {
                    for (col, &l) in table.complement.iter().enumerate() {
                        let expect = i64::from(row == col);
                        assert_eq!(table.exponents[row][l], expect, "{p} {i} {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn effective_levels_examples() {
        let p2 = projective_space(2);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(p2.effective_levels(), vec![half.clone(); 3]);

        let x = bl_p2();
        assert_eq!(
            x.effective_levels(),
            vec![rat(2), half.clone(), half.clone(), half]
        );

        // Zero row through the raw formula.
        let m = IntMatrix::from_rows(&[&[0, 0]]);
        assert_eq!(effective_levels_of(&m), vec![rat(0)]);
    }

    #[test]
    fn attracting_cones_partition_each_quotient() {
        // Within one GIT quotient's fixed-point set the attracting-cone
        // interiors are disjoint, and wherever the closed cones reach (for
        // non-proper quotients they need not cover cocharacter space) a
        // generic cocharacter lies in exactly one interior.
        let mut rng = StdRng::seed_from_u64(53);
        for x in [bl_p2(), bl_p2().gale_dual().unwrap(), projective_space(2)] {
            for (_, pts) in x.chambers().unwrap() {
                for _ in 0..60 {
                    let sigma: Vec<BigRational> = (0..x.d())
                        .map(|_| BigRational::from(BigInt::from(rng.gen_range(-15i64..=15))))
                        .collect();
                    let strict: Vec<bool> = pts
                        .iter()
                        .map(|p| x.attracting_cone(p).contains(&sigma, true).unwrap())
                        .collect();
                    let weak: Vec<bool> = pts
                        .iter()
                        .map(|p| x.attracting_cone(p).contains(&sigma, false).unwrap())
                        .collect();
                    let strict_count = strict.iter().filter(|&&b| b).count();
                    assert!(strict_count <= 1);
                    if strict == weak && weak.iter().any(|&b| b) {
                        assert_eq!(strict_count, 1, "sigma = {sigma:?}");
                    }
                }
            }
        }
    }
}

