//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision: determinants via fraction-free
//! Bareiss elimination, kernels via Smith normal form, and canonical cokernel
//! maps via the row-style Hermite normal form. No floating point.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Vector of exact rationals. `num_rational::Ratio` keeps entries reduced
/// with a positive denominator, which is the canonical form we rely on.
pub type RatVector = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactAlgError {
    /// Matrix does not have the full column rank required by the operation.
    RankDeficient { rank: usize, expected: usize },
    /// Square matrix whose determinant is not ±1.
    NotUnimodular { det: BigInt },
}

impl fmt::Display for ExactAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactAlgError::RankDeficient { rank, expected } => {
                write!(f, "rank deficient: rank {rank}, expected {expected}")
            }
            ExactAlgError::NotUnimodular { det } => {
                write!(f, "matrix is not unimodular: determinant {det}")
            }
        }
    }
}

impl core::error::Error for ExactAlgError {}

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    /// Convenience constructor from machine integers, one slice per row.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        out
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Submatrix with the given rows, in the given order.
    pub fn row_submatrix(&self, rows: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Entries converted to `i64`, panicking on overflow. Used where exponent
    /// vectors are known to be small (charge matrices at desk scale).
    pub fn row_i64(&self, i: usize) -> Vec<i64> {
        self.row(i)
            .iter()
            .map(|x| i64::try_from(x).expect("entry exceeds i64"))
            .collect()
    }

    /// Determinant by fraction-free Bareiss elimination. Exact; square only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[idx(k, k)].is_zero() {
                // Find a row below with a nonzero pivot.
                let Some(swap) = (k + 1..n).find(|&i| !m[idx(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    m.swap(idx(k, j), idx(swap, j));
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[idx(i, j)] * &m[idx(k, k)] - &m[idx(i, k)] * &m[idx(k, j)];
                    // Bareiss guarantees exact divisibility by the previous pivot.
                    m[idx(i, j)] = t / &prev;
                }
                m[idx(i, k)] = BigInt::zero();
            }
            prev = m[idx(k, k)].clone();
        }
        let det = m[idx(n - 1, n - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next subset.
        let mut i = k;
        while i > 0 {
            i -= 1;
            if cur[i] != i + n - k {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                i = usize::MAX;
                break;
            }
        }
        if i != usize::MAX {
            break;
        }
    }
    out
}

/// All maximal (cols × cols) minors, in lexicographic order of row subsets.
/// For rows < cols there are no maximal square submatrices and the list is
/// empty.
pub fn maximal_minors(m: &IntMatrix) -> Vec<BigInt> {
    subsets_lex(m.rows(), m.cols())
        .into_iter()
        .map(|s| m.row_submatrix(&s).determinant())
        .collect()
}

/// True iff every maximal minor lies in {−1, 0, 1} and the matrix has full
/// column rank (some maximal minor is nonzero).
pub fn is_totally_unimodular(m: &IntMatrix) -> bool {
    if m.rows() < m.cols() {
        return false;
    }
    let minors = maximal_minors(m);
    let mut full_rank = false;
    for d in &minors {
        if d.abs() > BigInt::one() {
            return false;
        }
        if !d.is_zero() {
            full_rank = true;
        }
    }
    full_rank
}

/// First (lexicographic) row subset whose maximal minor falls outside
/// {−1, 0, 1}, if any. Used for validation diagnostics.
pub fn first_bad_minor(m: &IntMatrix) -> Option<(Vec<usize>, BigInt)> {
    for s in subsets_lex(m.rows(), m.cols()) {
        let d = m.row_submatrix(&s).determinant();
        if d.abs() > BigInt::one() {
            return Some((s, d));
        }
    }
    None
}

/// Exact inverse of a square matrix with determinant ±1, via the adjugate.
pub fn invert_unimodular(p: &IntMatrix) -> Result<IntMatrix, ExactAlgError> {
    assert_eq!(p.rows(), p.cols(), "inverse of non-square matrix");
    let n = p.rows();
    let det = p.determinant();
    if !det.abs().is_one() {
        return Err(ExactAlgError::NotUnimodular { det });
    }
    let mut inv = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            // Cofactor C_{ji}: delete row j, column i.
            let mut sub = IntMatrix::zero(n - 1, n - 1);
            let mut r = 0;
            for ii in 0..n {
                if ii == j {
                    continue;
                }
                let mut c = 0;
                for jj in 0..n {
                    if jj == i {
                        continue;
                    }
                    *sub.at_mut(r, c) = p.at(ii, jj).clone();
                    c += 1;
                }
                r += 1;
            }
            let mut cof = sub.determinant();
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            *inv.at_mut(i, j) = &cof * &det; // det = ±1, so adj/det = adj*det
        }
    }
    Ok(inv)
}

/// Smith normal form `left · m · right = s` with `left`, `right` unimodular
/// and `s` diagonal with each diagonal entry dividing the next.
pub struct Snf {
    pub s: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).filter(|&i| !self.s.at(i, i).is_zero()).count()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s.at(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut s = m.clone();
    let mut left = IntMatrix::identity(m.rows());
    let mut right = IntMatrix::identity(m.cols());
    let (rows, cols) = (m.rows(), m.cols());

    let swap_rows = |s: &mut IntMatrix, left: &mut IntMatrix, a: usize, b: usize| {
        for j in 0..cols {
            let x = s.at(a, j).clone();
            *s.at_mut(a, j) = s.at(b, j).clone();
            *s.at_mut(b, j) = x;
        }
        for j in 0..rows {
            let x = left.at(a, j).clone();
            *left.at_mut(a, j) = left.at(b, j).clone();
            *left.at_mut(b, j) = x;
        }
    };
    let swap_cols = |s: &mut IntMatrix, right: &mut IntMatrix, a: usize, b: usize| {
        for i in 0..rows {
            let x = s.at(i, a).clone();
            *s.at_mut(i, a) = s.at(i, b).clone();
            *s.at_mut(i, b) = x;
        }
        for i in 0..cols {
            let x = right.at(i, a).clone();
            *right.at_mut(i, a) = right.at(i, b).clone();
            *right.at_mut(i, b) = x;
        }
    };
    // row_a -= q * row_b, mirrored in left.
    let row_op = |s: &mut IntMatrix, left: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for j in 0..cols {
            let t = q * s.at(b, j);
            *s.at_mut(a, j) -= t;
        }
        for j in 0..rows {
            let t = q * left.at(b, j);
            *left.at_mut(a, j) -= t;
        }
    };
    // col_a -= q * col_b, mirrored in right.
    let col_op = |s: &mut IntMatrix, right: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for i in 0..rows {
            let t = q * s.at(i, b);
            *s.at_mut(i, a) -= t;
        }
        for i in 0..cols {
            let t = q * right.at(i, b);
            *right.at_mut(i, a) -= t;
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // Locate the smallest nonzero entry in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !s.at(i, j).is_zero()
                    && pivot.is_none_or(|(pi, pj)| s.at(i, j).abs() < s.at(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            swap_rows(&mut s, &mut left, t, pi);
        }
        if pj != t {
            swap_cols(&mut s, &mut right, t, pj);
        }

        'reduce: loop {
            // Clear the pivot column.
            for i in t + 1..rows {
                if !s.at(i, t).is_zero() {
                    let (q, r) = s.at(i, t).div_mod_floor(s.at(t, t));
                    row_op(&mut s, &mut left, i, t, &q);
                    if !r.is_zero() {
                        swap_rows(&mut s, &mut left, t, i);
                        continue 'reduce;
                    }
                }
            }
            // Clear the pivot row.
            for j in t + 1..cols {
                if !s.at(t, j).is_zero() {
                    let (q, r) = s.at(t, j).div_mod_floor(s.at(t, t));
                    col_op(&mut s, &mut right, j, t, &q);
                    if !r.is_zero() {
                        swap_cols(&mut s, &mut right, t, j);
                        continue 'reduce;
                    }
                }
            }
            // Enforce divisibility of the trailing block by the pivot.
            let piv = s.at(t, t).clone();
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !s.at(i, j).mod_floor(&piv).is_zero() {
                        // Fold row i into row t and restart the reduction.
                        let minus_one = -BigInt::one();
                        row_op(&mut s, &mut left, t, i, &minus_one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if s.at(t, t).is_negative() {
            for j in 0..cols {
                let v = -s.at(t, j).clone();
                *s.at_mut(t, j) = v;
            }
            for j in 0..rows {
                let v = -left.at(t, j).clone();
                *left.at_mut(t, j) = v;
            }
        }
        t += 1;
    }

    Snf { s, left, right }
}

/// Columns form a basis of `ker(M) ∩ Z^cols`, computed via Smith normal form.
/// The returned basis is saturated (the kernel is a direct summand) and each
/// column is sign-canonicalized so its first nonzero entry is positive.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let nullity = m.cols() - rank;
    let mut out = IntMatrix::zero(m.cols(), nullity);
    for (c, j) in (rank..m.cols()).enumerate() {
        let mut col: Vec<BigInt> = (0..m.cols()).map(|i| snf.right.at(i, j).clone()).collect();
        if let Some(first) = col.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in &mut col {
                    *x = -x.clone();
                }
            }
        }
        for (i, x) in col.into_iter().enumerate() {
            *out.at_mut(i, c) = x;
        }
    }
    out
}

/// Row-style Hermite normal form: row pivots positive, entries above each
/// pivot reduced into `[0, pivot)`, zero rows dropped. The row lattice is
/// preserved, so this is a canonical basis of the row span.
pub fn row_hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut r = 0;
    for col in 0..cols {
        if r >= rows {
            break;
        }
        // Euclidean elimination below row r in this column.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !h.at(i, col).is_zero()
                    && best.is_none_or(|b| h.at(i, col).abs() < h.at(b, col).abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            if b != r {
                for j in 0..cols {
                    let x = h.at(r, j).clone();
                    *h.at_mut(r, j) = h.at(b, j).clone();
                    *h.at_mut(b, j) = x;
                }
            }
            let mut done = true;
            let piv = h.at(r, col).clone();
            for i in r + 1..rows {
                if !h.at(i, col).is_zero() {
                    let q = h.at(i, col).div_floor(&piv);
                    for j in 0..cols {
                        let t = &q * h.at(r, j);
                        *h.at_mut(i, j) -= t;
                    }
                    if !h.at(i, col).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h.at(r, col).is_zero() {
            continue;
        }
        if h.at(r, col).is_negative() {
            for j in 0..cols {
                let v = -h.at(r, j).clone();
                *h.at_mut(r, j) = v;
            }
        }
        // Reduce entries above the pivot.
        let piv = h.at(r, col).clone();
        for i in 0..r {
            let q = h.at(i, col).div_floor(&piv);
            if !q.is_zero() {
                for j in 0..cols {
                    let t = &q * h.at(r, j);
                    *h.at_mut(i, j) -= t;
                }
            }
        }
        r += 1;
    }
    let kept: Vec<usize> = (0..r).collect();
    h.row_submatrix(&kept)
}

/// Canonical cokernel map of an injective `iota`: a `d × n` matrix `beta`
/// (`d = n − k`) with `beta · iota = 0`, `beta` surjective onto `Z^d`, and
/// `ker beta = im iota`. Canonicalized as the row Hermite normal form of the
/// orthogonal-complement lattice basis, so the output is deterministic.
pub fn cokernel_map(iota: &IntMatrix) -> Result<IntMatrix, ExactAlgError> {
    let k = iota.cols();
    let rank = iota.rank();
    if rank < k {
        return Err(ExactAlgError::RankDeficient { rank, expected: k });
    }
    // ker(iota^T) = { v : v^T iota = 0 } is the row lattice of any valid beta.
    let kernel = integer_kernel(&iota.transpose());
    Ok(row_hermite_normal_form(&kernel.transpose()))
}

/// Gaussian elimination over exact rationals. Returns a particular solution
/// of `a · x = b` together with a basis of the solution space of the
/// homogeneous system, or `None` if inconsistent. Rows of `a` are equations.
pub fn solve_affine(a: &[RatVector], b: &[BigRational]) -> Option<(RatVector, Vec<RatVector>)> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<RatVector> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in &mut m[r] {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut particular = vec![BigRational::zero(); cols];
    for &(pr, pc) in &pivots {
        particular[pc] = m[pr][cols].clone();
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for &(pr, pc) in &pivots {
            v[pc] = -m[pr][free].clone();
        }
        kernel.push(v);
    }
    Some((particular, kernel))
}

/// Gaussian elimination over exact rationals. Returns one solution of
/// `a · x = b` if the system is consistent. Rows of `a` are equations.
pub fn solve_rational(a: &[RatVector], b: &[BigRational]) -> Option<RatVector> {
    solve_affine(a, b).map(|(particular, _)| particular)
}

/// Rank of a rational matrix (rows are vectors).
pub fn rational_rank(a: &[RatVector]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<RatVector> = a.to_vec();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].clone();
        for x in &mut m[rank] {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[rank][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
