//! Small dense complex matrices, unitarity checks, Kronecker powers,
//! numerical kernels and explicitly enumerated finite matrix groups.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const DEFAULT_EPS: f64 = 1e-9;

/// Absolute tolerance used for every numerical identification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_nan() || eps < 0.0 || !eps.is_finite() {
            return Err(Error::Usage(format!("tolerance must be a finite nonnegative number, got {eps}")));
        }
        Ok(Tolerance(eps))
    }

    pub fn eps(self) -> f64 {
        self.0
    }

    /// The same tolerance scaled by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Tolerance(self.0 * factor)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_EPS)
    }
}

/// Dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix{}x{}[", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.4}{:+.4}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn identity(d: usize) -> Self {
        CMatrix(DMatrix::identity(d, d))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix(DMatrix::zeros(rows, cols))
    }

    /// Builds a matrix from row vectors. Rejects ragged, empty or non-finite input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Parse("matrix must have at least one row and one column".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        let m = CMatrix(DMatrix::from_fn(r, c, |i, j| rows[i][j]));
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        CMatrix(DMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) }))
    }

    pub fn scalar(z: C64) -> Self {
        CMatrix::diag(&[z])
    }

    /// Column vector.
    pub fn column(entries: &[C64]) -> Self {
        CMatrix(DMatrix::from_column_slice(entries.len(), 1, entries))
    }

    pub fn from_inner(m: DMatrix<C64>) -> Self {
        CMatrix(m)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn conjugate(&self) -> Self {
        CMatrix(self.0.map(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        CMatrix(self.0.transpose())
    }

    pub fn scale(&self, z: C64) -> Self {
        CMatrix(&self.0 * z)
    }

    pub fn kron(&self, other: &CMatrix) -> Self {
        CMatrix(self.0.kronecker(&other.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Result<C64> {
        self.require_square()?;
        Ok(self.0.clone().determinant())
    }

    /// Entrywise max-norm.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise max-norm distance; infinite when shapes differ.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: Tolerance) -> bool {
        self.distance(other) <= tol.eps()
    }

    /// Hilbert-Schmidt inner product `tr(self† other)`.
    pub fn hs_inner(&self, other: &CMatrix) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Column-major vectorization as a column vector.
    pub fn vectorize(&self) -> CMatrix {
        CMatrix(DMatrix::from_column_slice(self.rows() * self.cols(), 1, self.0.as_slice()))
    }

    /// Inverse of [`CMatrix::vectorize`].
    pub fn unvectorize(v: &CMatrix, rows: usize, cols: usize) -> Result<CMatrix> {
        if v.rows() * v.cols() != rows * cols {
            return Err(Error::DimensionMismatch(format!("cannot reshape {} entries into {rows}x{cols}", v.rows() * v.cols())));
        }
        Ok(CMatrix(DMatrix::from_column_slice(rows, cols, v.0.as_slice())))
    }

    /// Is this a scalar multiple of the identity?
    pub fn is_scalar(&self, tol: Tolerance) -> bool {
        if !self.is_square() {
            return false;
        }
        let z = self.0[(0, 0)];
        self.approx_eq(&CMatrix::identity(self.rows()).scale(z), tol)
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare { rows: self.rows(), cols: self.cols() })
        }
    }

    /// Singular values, largest first.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.0.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Unitary factor `W` of the polar decomposition `self = W·P`, together
    /// with the 2-norm condition number of `self`.
    pub fn polar_unitary(&self) -> Result<(CMatrix, f64)> {
        self.require_square()?;
        let svd = self.0.clone().svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::NonFinite),
        };
        let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let min = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
        let cond = if min > 0.0 { max / min } else { f64::INFINITY };
        Ok((CMatrix(u * v_t), cond))
    }

    /// Eigenvalues of a square matrix (complex Schur form).
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        self.require_square()?;
        let schur = nalgebra::linalg::Schur::new(self.0.clone());
        let (_, t) = schur.unpack();
        Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &'a CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 * rhs.0)
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &'a CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &'a CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

/// Convenience constructor for a complex number.
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
pub fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// True iff `‖U·U† − I‖_max ≤ eps`.
pub fn is_unitary(u: &CMatrix, tol: Tolerance) -> Result<bool> {
    let d = u.require_square()?;
    Ok((u * &u.adjoint()).approx_eq(&CMatrix::identity(d), tol))
}

pub fn require_unitary(u: &CMatrix, tol: Tolerance, what: &str) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::NonFinite);
    }
    if is_unitary(u, tol)? {
        Ok(())
    } else {
        Err(Error::NotUnitary(what.to_string()))
    }
}

/// `r`-fold Kronecker power; `r = 0` gives the 1×1 identity.
pub fn kron_power(u: &CMatrix, r: usize) -> CMatrix {
    let mut out = CMatrix::identity(1);
    for _ in 0..r {
        out = out.kron(u);
    }
    out
}

/// Orthonormal basis of the numerical kernel of `a`, as column vectors.
///
/// Singular values at most `eps·max(1, σ_max)` count as zero.
pub fn nullspace(a: &CMatrix, tol: Tolerance) -> Vec<CMatrix> {
    let (m, n) = (a.rows(), a.cols());
    // Thin SVD only returns min(m, n) right singular vectors; pad to square.
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(&a.0);
        p
    } else {
        a.0.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = match svd.v_t {
        Some(v_t) => v_t,
        None => return Vec::new(),
    };
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = tol.eps() * sigma_max.max(1.0);
    let mut out = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= threshold {
            let row = v_t.row(k);
            out.push(CMatrix(DMatrix::from_fn(n, 1, |i, _| row[i].conj())));
        }
    }
    out
}

/// Orthonormal basis (column vectors) for the span of the given column vectors.
pub fn range_basis(vectors: &[CMatrix], tol: Tolerance) -> Vec<CMatrix> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let n = first.rows();
    let k = vectors.len();
    let m = DMatrix::from_fn(n, k, |i, j| vectors[j].0[(i, 0)]);
    let svd = m.svd(true, false);
    let Some(u) = svd.u else {
        return Vec::new();
    };
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = tol.eps() * sigma_max.max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > threshold)
        .map(|(j, _)| CMatrix(DMatrix::from_fn(n, 1, |i, _| u[(i, j)])))
        .collect()
}

/// Stacks matrices with equal column counts on top of each other.
pub fn vstack(blocks: &[CMatrix]) -> Result<CMatrix> {
    let Some(first) = blocks.first() else {
        return Err(Error::DimensionMismatch("nothing to stack".into()));
    };
    let cols = first.cols();
    if blocks.iter().any(|b| b.cols() != cols) {
        return Err(Error::DimensionMismatch("stacked blocks have different widths".into()));
    }
    let rows: usize = blocks.iter().map(CMatrix::rows).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut offset = 0;
    for b in blocks {
        out.view_mut((offset, 0), (b.rows(), cols)).copy_from(&b.0);
        offset += b.rows();
    }
    Ok(CMatrix(out))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-random unitary via QR with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = random_matrix(d, d, rng);
    let qr = z.0.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<C64> = (0..d)
        .map(|i| {
            let x = r[(i, i)];
            if x.norm() > 0.0 {
                x / x.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        })
        .collect();
    CMatrix(q * CMatrix::diag(&phases).0)
}

/// A finite subgroup of `U(d)` given by the full list of its elements.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    dim: usize,
    elements: Vec<CMatrix>,
    generators: Vec<CMatrix>,
}

impl FiniteMatrixGroup {
    /// The trivial group `{I_d}`.
    pub fn trivial(dim: usize) -> Self {
        FiniteMatrixGroup { dim, elements: vec![CMatrix::identity(dim)], generators: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Generators if any were given, otherwise every element.
    pub fn generating_set(&self) -> &[CMatrix] {
        if self.generators.is_empty() {
            &self.elements
        } else {
            &self.generators
        }
    }

    pub fn position(&self, u: &CMatrix, tol: Tolerance) -> Option<usize> {
        self.elements.iter().position(|g| g.approx_eq(u, tol))
    }

    fn check_dim(&self, u: &CMatrix) -> Result<()> {
        if u.rows() != self.dim || u.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!("group acts in dimension {}, matrix is {}x{}", self.dim, u.rows(), u.cols())));
        }
        Ok(())
    }

    pub fn contains(&self, u: &CMatrix, tol: Tolerance) -> Result<bool> {
        self.check_dim(u)?;
        Ok(self.position(u, tol).is_some())
    }

    /// `q(u) = q(v)` in the quotient by this group, i.e. `u·v† ∈ G`.
    pub fn same_coset(&self, u: &CMatrix, v: &CMatrix, tol: Tolerance) -> Result<bool> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        self.contains(&(u * &v.adjoint()), tol)
    }

    /// Does `u` normalize the group? Checks `u·g·u† ∈ G` on generators.
    pub fn is_normalized_by(&self, u: &CMatrix, tol: Tolerance) -> Result<bool> {
        self.check_dim(u)?;
        let ud = u.adjoint();
        for g in self.generating_set() {
            if !self.contains(&(&(u * g) * &ud), tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Is `self` a subgroup of `other`, elementwise?
    pub fn is_subgroup_of(&self, other: &FiniteMatrixGroup, tol: Tolerance) -> bool {
        self.dim == other.dim && self.elements.iter().all(|g| other.position(g, tol).is_some())
    }

    /// Builds a group from an already closed element list, verifying closure.
    pub fn from_elements(dim: usize, elements: Vec<CMatrix>, tol: Tolerance) -> Result<Self> {
        let group = group_closure(dim, &elements, elements.len().max(1), tol)?;
        Ok(FiniteMatrixGroup { generators: elements.clone(), ..group })
    }
}

/// Breadth-first closure of `generators` under multiplication.
///
/// Elements closer than `eps` in max-norm are identified. Fails once more
/// than `bound` distinct elements have been produced.
pub fn group_closure(dim: usize, generators: &[CMatrix], bound: usize, tol: Tolerance) -> Result<FiniteMatrixGroup> {
    if bound == 0 {
        return Err(Error::Usage("closure bound must be at least 1".into()));
    }
    for (k, g) in generators.iter().enumerate() {
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::DimensionMismatch(format!("generator {k} is not {dim}x{dim}")));
        }
        require_unitary(g, tol, &format!("generator {k}"))?;
    }
    let mut elements = vec![CMatrix::identity(dim)];
    let mut next = 0;
    while next < elements.len() {
        let x = elements[next].clone();
        next += 1;
        for g in generators {
            let y = g * &x;
            if !elements.iter().any(|e| e.approx_eq(&y, tol)) {
                if elements.len() == bound {
                    return Err(Error::ClosureBoundExceeded(bound));
                }
                elements.push(y);
            }
        }
    }
    Ok(FiniteMatrixGroup { dim, elements, generators: generators.to_vec() })
}

/// Pauli matrices `X`, `Y`, `Z` and the Hadamard matrix.
pub mod paulis {
    use super::{c, CMatrix};

    pub fn x() -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn y() -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        })
    }

    pub fn z() -> CMatrix {
        CMatrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)])
    }

    pub fn hadamard() -> CMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_fn(2, 2, |i, j| if i == 1 && j == 1 { c(-h, 0.0) } else { c(h, 0.0) })
    }
}

/// Permutation matrix sending basis vector `e_j` to `e_{perm[j]}`.
pub fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    CMatrix::from_fn(n, n, |i, j| if perm[j] == i { c(1.0, 0.0) } else { c(0.0, 0.0) })
}
