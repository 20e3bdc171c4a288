//! Small dense complex matrices, density matrices and superoperators.
//!
//! Vectorization is column stacking: `vec(ρ)[i + d*j] = ρ[i, j]`, so that
//! `A ρ B` vectorizes as `(Bᵀ ⊗ A) vec(ρ)`. This matches the column-major
//! storage of [`nalgebra::DMatrix`], and every superoperator in the crate is
//! assembled with it.
//!
//! Qubit basis: index 0 is the excited state |e⟩ (σ_z = +1), index 1 the
//! ground state |g⟩. σ₊ = |e⟩⟨g| raises, σ₋ = |g⟩⟨e| lowers.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Hermiticity tolerance used by eigen-solvers and partial transposes.
pub const HERMITIAN_TOL: f64 = 1e-10;

const ALLOWED_DIMS: [usize; 3] = [2, 4, 16];

/// Square complex matrix of dimension 2, 4 or 16 with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() || !ALLOWED_DIMS.contains(&m.nrows()) {
            return Err(Error::DimensionMismatch {
                expected: "square matrix of dimension 2, 4 or 16".into(),
                found: m.nrows().max(m.ncols()),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self(m))
    }

    /// Builds a matrix from rows. Panics on ragged or unsupported input; meant
    /// for literals.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::new(m).expect("literal matrix")
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = DMatrix::from_fn(n, n, |i, j| C64::from(rows[i][j]));
        Self::new(m).expect("literal matrix")
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(DMatrix::zeros(dim, dim)).expect("supported dimension")
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim)).expect("supported dimension")
    }

    pub fn from_diagonal(diag: &[C64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// `|ket⟩⟨ket|` for a (not necessarily normalized) ket.
    pub fn outer(ket: &[C64]) -> Result<Self> {
        let v = DVector::from_column_slice(ket);
        Self::new(&v * v.adjoint())
    }

    /// Matrix unit `|i⟩⟨j|`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(i, j)] = ONE;
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::from(s))
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Self::new(self.0.kronecker(&other.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn one_norm(&self) -> f64 {
        self.0
            .column_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-entry deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Pauli and ladder operators in the (|e⟩, |g⟩) basis.
pub mod pauli {
    use super::*;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    /// σ₊ = |e⟩⟨g|.
    pub fn plus() -> ComplexMatrix {
        ComplexMatrix::unit(2, 0, 1)
    }

    /// σ₋ = |g⟩⟨e|.
    pub fn minus() -> ComplexMatrix {
        ComplexMatrix::unit(2, 1, 0)
    }
}

/// Column-stacking vectorization of a 2×2 or 4×4 matrix.
pub fn vectorize(m: &ComplexMatrix) -> Result<DVector<C64>> {
    match m.dim() {
        2 | 4 => Ok(DVector::from_column_slice(m.0.as_slice())),
        d => Err(Error::DimensionMismatch {
            expected: "matrix of dimension 2 or 4".into(),
            found: d,
        }),
    }
}

/// Inverse of [`vectorize`]; accepts vectors of length 4 or 16.
pub fn devectorize(v: &DVector<C64>) -> Result<ComplexMatrix> {
    let d = match v.len() {
        4 => 2,
        16 => 4,
        n => {
            return Err(Error::DimensionMismatch {
                expected: "vector of length 4 or 16".into(),
                found: n,
            })
        }
    };
    ComplexMatrix::new(DMatrix::from_column_slice(d, d, v.as_slice()))
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
///
/// The argument is scaled by `2^-s` so its 1-norm is at most 1/2, the series
/// is summed until a term drops below `tol` relative to the partial sum, and
/// the result is squared `s` times.
pub fn matrix_exp(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if m.0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix_exp argument"));
    }
    let tol = tol.max(f64::EPSILON * 0.5);
    let norm = m.one_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = &m.0 * C64::from(0.5f64.powi(squarings));
    let n = m.dim();
    let mut sum = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &a * C64::from(1.0 / k as f64);
        sum += &term;
        let term_norm = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let sum_norm = sum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if term_norm <= tol * sum_norm {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    ComplexMatrix::new(sum)
}

/// Default truncation tolerance for [`matrix_exp`].
pub const EXP_TOL: f64 = 1e-17;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * (1.0 + m.max_abs()) {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let sym = (&m.0 + m.0.adjoint()) * C64::from(0.5);
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    m.0.singular_values().iter().sum()
}

/// Positive semidefiniteness with the tolerance `λ_min ≥ -1e-10 (1 + ‖m‖)`.
pub fn is_psd(m: &ComplexMatrix) -> Result<bool> {
    let lo = hermitian_eigenvalues(m)?[0];
    Ok(lo >= -1e-10 * (1.0 + m.max_abs()))
}

/// Tensor factor of a bipartite 2⊗2 operator. The system factor is the
/// leading (most significant) index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Ancilla,
}

/// Partial transpose of a Hermitian 4×4 operator on 2⊗2.
pub fn partial_transpose(m: &ComplexMatrix, which: Subsystem) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4x4 bipartite operator".into(),
            found: m.dim(),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * (1.0 + m.max_abs()) {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let mut out = DMatrix::zeros(4, 4);
    for a in 0..2 {
        for i in 0..2 {
            for b in 0..2 {
                for j in 0..2 {
                    let (ra, ri, cb, cj) = match which {
                        Subsystem::System => (b, i, a, j),
                        Subsystem::Ancilla => (a, j, b, i),
                    };
                    out[(2 * a + i, 2 * b + j)] = m.0[(2 * ra + ri, 2 * cb + cj)];
                }
            }
        }
    }
    ComplexMatrix::new(out)
}

fn check_density(m: &ComplexMatrix, dim: usize) -> Result<()> {
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: format!("{dim}x{dim} density matrix"),
            found: m.dim(),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > 1e-12 {
        return Err(Error::InvalidState(format!(
            "not Hermitian (deviation {defect:.3e})"
        )));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
        return Err(Error::InvalidState(format!("trace {tr} != 1")));
    }
    let lo = hermitian_eigenvalues(m)?[0];
    if lo < -1e-10 {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {lo:.3e}"
        )));
    }
    Ok(())
}

/// Validated single-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState(ComplexMatrix);

impl QubitState {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_density(&m, 2)?;
        Ok(Self(m))
    }

    /// Pure state from a normalized ket.
    pub fn pure(ket: [C64; 2]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(&ket)?)
    }

    pub fn excited() -> Self {
        Self(ComplexMatrix::unit(2, 0, 0))
    }

    pub fn ground() -> Self {
        Self(ComplexMatrix::unit(2, 1, 1))
    }

    /// (|e⟩ + |g⟩)/√2.
    pub fn plus() -> Self {
        Self(ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]))
    }

    /// ±1 eigenstate of σ_y.
    pub fn sigma_y_eigenstate(positive: bool) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phase = if positive { I } else { -I };
        Self::pure([C64::from(h), phase * h]).expect("normalized ket")
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(2).scale_re(0.5))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn excited_population(&self) -> f64 {
        self.0.get(0, 0).re
    }

    /// The off-diagonal element ρ_eg.
    pub fn coherence(&self) -> C64 {
        self.0.get(0, 1)
    }
}

/// Validated two-qubit (system ⊗ ancilla) density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitState(ComplexMatrix);

impl TwoQubitState {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_density(&m, 4)?;
        Ok(Self(m))
    }

    /// |Φ⟩⟨Φ| with |Φ⟩ = (|00⟩ + |11⟩)/√2.
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ket = [C64::from(h), ZERO, ZERO, C64::from(h)];
        Self(ComplexMatrix::outer(&ket).expect("4-dim ket"))
    }

    pub fn product(a: &QubitState, b: &QubitState) -> Self {
        Self(a.0.kron(&b.0).expect("2x2 factors"))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Linear map on d×d matrices (d = 2 or 4) represented on column-stacked
/// vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator(ComplexMatrix);

impl Superoperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        match m.dim() {
            4 | 16 => Ok(Self(m)),
            d => Err(Error::DimensionMismatch {
                expected: "superoperator of dimension 4 or 16".into(),
                found: d,
            }),
        }
    }

    pub fn identity(hilbert_dim: usize) -> Self {
        Self(ComplexMatrix::identity(hilbert_dim * hilbert_dim))
    }

    pub fn zeros(hilbert_dim: usize) -> Self {
        Self(ComplexMatrix::zeros(hilbert_dim * hilbert_dim))
    }

    /// X ↦ A X B.
    pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(b.transpose().kron(a)?)
    }

    /// X ↦ A X.
    pub fn left(a: &ComplexMatrix) -> Result<Self> {
        Self::sandwich(a, &ComplexMatrix::identity(a.dim()))
    }

    /// X ↦ X B.
    pub fn right(b: &ComplexMatrix) -> Result<Self> {
        Self::sandwich(&ComplexMatrix::identity(b.dim()), b)
    }

    /// X ↦ X ᵀ.
    pub fn transpose_map(hilbert_dim: usize) -> Self {
        let d = hilbert_dim;
        let mut m = DMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                // vec index of (i,j) is i + d j, of (j,i) is j + d i
                m[(j + d * i, i + d * j)] = ONE;
            }
        }
        Self(ComplexMatrix(m))
    }

    pub fn hilbert_dim(&self) -> usize {
        match self.0.dim() {
            4 => 2,
            _ => 4,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.dim() != self.hilbert_dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} operand", self.hilbert_dim()),
                found: x.dim(),
            });
        }
        devectorize(&(&self.0 .0 * vectorize(x)?))
    }

    pub fn compose(&self, inner: &Self) -> Self {
        Self(&self.0 * &inner.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn exp(&self) -> Result<Self> {
        Ok(Self(matrix_exp(&self.0, EXP_TOL)?))
    }

    /// Commutator of superoperators.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(self.0.commutator(&other.0))
    }

    /// Action on each matrix unit; returns `max |tr S(E_ij) - δ_ij|`.
    pub fn trace_defect(&self) -> f64 {
        let d = self.hilbert_dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let img = self.apply(&ComplexMatrix::unit(d, i, j)).expect("dim");
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((img.trace() - target).norm());
            }
        }
        worst
    }

    /// `max |L(E_ij†) - L(E_ij)†|` over matrix units.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.hilbert_dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let e = ComplexMatrix::unit(d, i, j);
                let lhs = self.apply(&e.adjoint()).expect("dim");
                let rhs = self.apply(&e).expect("dim").adjoint();
                worst = worst.max((&lhs - &rhs).max_abs());
            }
        }
        worst
    }

    /// `(S ⊗ id)` acting on system ⊗ ancilla operators (system index leading).
    pub fn extend_with_ancilla(&self) -> Result<Self> {
        if self.hilbert_dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: "qubit superoperator".into(),
                found: self.0.dim(),
            });
        }
        let mut m = DMatrix::zeros(16, 16);
        // column-stacked index of (2a+i, 2b+j) in a 4x4 matrix
        let idx = |a: usize, i: usize, b: usize, j: usize| (2 * a + i) + 4 * (2 * b + j);
        for b in 0..2 {
            for a in 0..2 {
                let img = self.apply(&ComplexMatrix::unit(2, a, b))?;
                for i in 0..2 {
                    for j in 0..2 {
                        for c in 0..2 {
                            for e in 0..2 {
                                m[(idx(c, i, e, j), idx(a, i, b, j))] = img.get(c, e);
                            }
                        }
                    }
                }
            }
        }
        Self::new(ComplexMatrix(m))
    }
}

/// Choi matrix `(S ⊗ id)|Φ⟩⟨Φ|` of a qubit map, normalized so that a
/// trace-preserving map has unit trace. The system factor is leading.
pub fn choi_matrix(s: &Superoperator) -> Result<ComplexMatrix> {
    if s.hilbert_dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "qubit superoperator (4x4)".into(),
            found: s.matrix().dim(),
        });
    }
    let mut out = DMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let img = s.apply(&ComplexMatrix::unit(2, i, j))?;
            for a in 0..2 {
                for b in 0..2 {
                    out[(2 * a + i, 2 * b + j)] = img.get(a, b) * 0.5;
                }
            }
        }
    }
    ComplexMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let d = (a - b).max_abs();
        assert!(d <= tol, "matrices differ by {d:.3e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn vectorize_identity_and_units() {
        let v = vectorize(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(v.as_slice(), &[ONE, ZERO, ZERO, ONE]);
        let v = vectorize(&ComplexMatrix::unit(2, 0, 1)).unwrap();
        assert_eq!(v.iter().filter(|z| **z != ZERO).count(), 1);
        assert_eq!(v[2], ONE);
    }

    #[test]
    fn vectorize_round_trips_all_units() {
        for d in [2usize, 4] {
            for i in 0..d {
                for j in 0..d {
                    let e = ComplexMatrix::unit(d, i, j);
                    assert_eq!(devectorize(&vectorize(&e).unwrap()).unwrap(), e);
                }
            }
        }
        let sx = pauli::x();
        assert_eq!(devectorize(&vectorize(&sx).unwrap()).unwrap(), sx);
    }

    #[test]
    fn vectorize_rejects_bad_dims() {
        let m = ComplexMatrix::identity(16);
        assert!(vectorize(&m).is_err());
        assert!(devectorize(&DVector::from_element(5, ONE)).is_err());
        assert!(ComplexMatrix::new(DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn sandwich_matches_column_stacking_rule() {
        let a = pauli::plus();
        let b = pauli::y();
        let rho = ComplexMatrix::from_rows(&[&[C64::new(0.3, 0.0), C64::new(0.1, 0.2)], &[
            C64::new(0.1, -0.2),
            C64::new(0.7, 0.0),
        ]]);
        let direct = &(&a * &rho) * &b;
        let via = Superoperator::sandwich(&a, &b).unwrap().apply(&rho).unwrap();
        assert_close(&direct, &via, 1e-15);
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        let e = matrix_exp(&ComplexMatrix::zeros(4), EXP_TOL).unwrap();
        assert_eq!(e, ComplexMatrix::identity(4));
        let d = ComplexMatrix::from_diagonal(&[C64::new(1.3, 0.0), C64::new(-2.0, 0.5)]).unwrap();
        let e = matrix_exp(&d, EXP_TOL).unwrap();
        assert_abs_diff_eq!(e.get(0, 0).re, 1.3f64.exp(), epsilon = 1e-14);
        let z = C64::new(-2.0, 0.5).exp();
        assert!((e.get(1, 1) - z).norm() < 1e-15);
        assert_eq!(e.get(0, 1), ZERO);
    }

    #[test]
    fn exp_inverse_pair() {
        let a = pauli::x().scale(I * std::f64::consts::FRAC_PI_2);
        let prod = &matrix_exp(&a, EXP_TOL).unwrap() * &matrix_exp(&(-&a), EXP_TOL).unwrap();
        assert_close(&prod, &ComplexMatrix::identity(2), 1e-12);
    }

    #[test]
    fn exp_large_norm_matches_nalgebra() {
        let m = ComplexMatrix::from_rows(&[
            &[C64::new(-20.0, 1.0), C64::new(3.0, 0.0), ZERO, C64::new(0.0, 2.0)],
            &[C64::new(1.0, 0.0), C64::new(-5.0, 0.0), ZERO, ZERO],
            &[ZERO, C64::new(0.5, 0.5), C64::new(-1.0, 4.0), ZERO],
            &[C64::new(2.0, 0.0), ZERO, ZERO, C64::new(0.3, 0.0)],
        ]);
        let ours = matrix_exp(&m, EXP_TOL).unwrap();
        let reference = ComplexMatrix::new(m.as_matrix().clone().exp()).unwrap();
        let rel = (&ours - &reference).max_abs() / reference.max_abs();
        assert!(rel < 1e-12, "relative error {rel:e}");
    }

    #[test]
    fn exp_rejects_non_finite() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matrix_exp(&ComplexMatrix(m), EXP_TOL).is_err());
    }

    #[test]
    fn choi_of_identity_is_bell_state() {
        let c = choi_matrix(&Superoperator::identity(2)).unwrap();
        assert_close(&c, TwoQubitState::bell().matrix(), 1e-15);
    }

    #[test]
    fn choi_of_sigma_x_conjugation_is_rank_one() {
        let s = Superoperator::sandwich(&pauli::x(), &pauli::x()).unwrap();
        let c = choi_matrix(&s).unwrap();
        let ev = hermitian_eigenvalues(&c).unwrap();
        assert_abs_diff_eq!(c.trace().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[3], 1.0, epsilon = 1e-14);
        for v in &ev[..3] {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn choi_of_transpose_is_not_psd() {
        let c = choi_matrix(&Superoperator::transpose_map(2)).unwrap();
        let ev = hermitian_eigenvalues(&c).unwrap();
        assert_abs_diff_eq!(ev[0], -0.5, epsilon = 1e-14);
        assert!(!is_psd(&c).unwrap());
    }

    #[test]
    fn trace_norm_and_eigenvalues() {
        assert_abs_diff_eq!(trace_norm(&pauli::z()), 2.0, epsilon = 1e-14);
        let ev = hermitian_eigenvalues(&pauli::y()).unwrap();
        assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 1.0, epsilon = 1e-14);
        assert!(hermitian_eigenvalues(&pauli::plus()).is_err());
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let bell = TwoQubitState::bell();
        for which in [Subsystem::System, Subsystem::Ancilla] {
            let pt = partial_transpose(bell.matrix(), which).unwrap();
            let ev = hermitian_eigenvalues(&pt).unwrap();
            assert_abs_diff_eq!(ev[0], -0.5, epsilon = 1e-14);
            for v in &ev[1..] {
                assert_abs_diff_eq!(*v, 0.5, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn partial_transposes_compose_to_full_transpose() {
        let psi = [C64::new(0.1, 0.2), C64::new(0.5, 0.0), C64::new(-0.3, 0.4), C64::new(0.2, -0.6)];
        let m = ComplexMatrix::outer(&psi).unwrap();
        let both = partial_transpose(&partial_transpose(&m, Subsystem::System).unwrap(), Subsystem::Ancilla).unwrap();
        assert_close(&both, &m.transpose(), 0.0);
    }

    #[test]
    fn ancilla_extension_matches_choi() {
        let s = Superoperator::sandwich(&pauli::plus(), &pauli::minus())
            .unwrap()
            .add(&Superoperator::sandwich(&pauli::z(), &pauli::x()).unwrap());
        let ext = s.extend_with_ancilla().unwrap();
        let via_ext = ext.apply(TwoQubitState::bell().matrix()).unwrap();
        assert_close(&via_ext, &choi_matrix(&s).unwrap(), 1e-15);
    }

    #[test]
    fn state_validation() {
        assert!(QubitState::new(pauli::z()).is_err());
        assert!(QubitState::new(ComplexMatrix::identity(2)).is_err());
        let m = ComplexMatrix::from_real_rows(&[&[1.2, 0.0], &[0.0, -0.2]]);
        assert!(QubitState::new(m).is_err());
        let s = QubitState::sigma_y_eigenstate(true);
        let expect = (&pauli::y() * s.matrix()).clone();
        assert_close(&expect, s.matrix(), 1e-15);
        assert!(TwoQubitState::new(TwoQubitState::bell().matrix().clone()).is_ok());
    }

    #[test]
    fn ladder_operators() {
        let sp = pauli::plus();
        let sm = pauli::minus();
        let x = &sp + &sm;
        assert_close(&x, &pauli::x(), 0.0);
        let y = (&sp - &sm).scale(-I);
        assert_close(&y, &pauli::y(), 0.0);
        // σ₊ maps |g⟩ to |e⟩
        let g = QubitState::ground();
        let raised = &(&sp * g.matrix()) * &sm;
        assert_close(&raised, QubitState::excited().matrix(), 0.0);
    }
}
