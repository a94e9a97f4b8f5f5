//! Dense complex linear algebra and the entropy functionals.
//!
//! Eigendecompositions use a cyclic Jacobi sweep for Hermitian matrices;
//! singular values come from the eigendecomposition of `M†M`. All
//! logarithms are base 2, so entropies are in bits/ebits.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

#[allow(unused_imports)]
use crate::fmath::*;
use crate::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Eigenvalues of the second argument below this are treated as exact
/// zeros when testing the support condition of the relative entropy.
pub const SUPPORT_TOL: f64 = 1e-12;
/// σ-weight on the kernel of ρ above this yields +∞.
pub const KERNEL_WEIGHT_TOL: f64 = 1e-9;

pub const LN2: f64 = core::f64::consts::LN_2;

#[inline]
pub fn log2(x: f64) -> f64 {
    x.ln() / LN2
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl core::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for c in 0..self.cols.min(8) {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl core::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.cols + c]
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(rows * cols, entries.len());
        ComplexMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ComplexMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Real matrix entered row by row; mostly a test convenience.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(rows * cols, data.len());
        Self::from_fn(rows, cols, |r, c| Complex64::new(data[r * cols + c], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            self[(r, c)] = v[r];
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..self.cols {
                acc += self[(r, c)] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] + other[(r, c)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] - other[(r, c)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let g = self.adjoint().mul(self);
        g.sub(&Self::identity(self.cols)).max_abs_entry()
    }

    /// ⟨A, B⟩ = tr[A†B], the Hilbert–Schmidt inner product.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Projector |v⟩⟨v| from a (not necessarily normalized) vector.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
    }
}

/// Kronecker (tensor) product A ⊗ B.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

pub fn tensor_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Descending list of non-negative reals; the currency of majorization.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedSpectrum {
    values: Vec<f64>,
}

impl OrderedSpectrum {
    /// Sorts descending and clamps values in [-1e-12, 0) to zero.
    pub fn new(mut values: Vec<f64>) -> Self {
        for v in values.iter_mut() {
            if *v < 0.0 && *v >= -1e-12 {
                *v = 0.0;
            }
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("NaN in spectrum"));
        OrderedSpectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Shannon entropy in bits of the (sub)normalized list.
    pub fn shannon_entropy(&self) -> f64 {
        shannon(&self.values)
    }
}

pub fn shannon(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 1e-300)
        .map(|&x| x * log2(x))
        .sum::<f64>()
}

/// Cyclic-Jacobi eigendecomposition of a Hermitian matrix.
///
/// Returns the spectrum in descending order and the matching eigenbasis
/// as columns, so that `M = V diag(λ) V†`.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(OrderedSpectrum, ComplexMatrix)> {
    let dev = if m.is_square() {
        m.hermiticity_deviation()
    } else {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    };
    let scale = m.max_abs_entry().max(1.0);
    if dev > HERMITICITY_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let (vals, vecs) = jacobi_hermitian(m);
    // Sort descending, carrying the eigenvector columns along.
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).expect("NaN eigenvalue"));
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut basis = ComplexMatrix::zeros(n, n);
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..n {
            basis[(r, new_c)] = vecs[(r, old_c)];
        }
    }
    Ok((
        OrderedSpectrum {
            values: sorted_vals,
        },
        basis,
    ))
}

/// Eigenvalues only; skips the sort bookkeeping of the basis.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<OrderedSpectrum> {
    eig_hermitian(m).map(|(s, _)| s)
}

fn jacobi_hermitian(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize away the representation error so the iteration sees an
    // exactly Hermitian matrix.
    for r in 0..n {
        for c in r..n {
            let avg = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            a[(r, c)] = avg;
            a[(c, r)] = avg.conj();
        }
        a[(r, r)] = Complex64::new(a[(r, r)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs_entry().max(1e-300);
    let tol = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for r in 0..n {
            for c in (r + 1)..n {
                off = off.max(a[(r, c)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= tol * 1e-2 {
                    continue;
                }
                // Unitary 2x2 rotation G with G[pp]=c, G[pq]=s,
                // G[qp]=-s̄, G[qq]=c annihilating A[p][q] in G†AG.
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let abs = apq.norm();
                let phase = apq / abs;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);

                // Column update A ← A G.
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * c - arq * s.conj();
                    a[(r, q)] = arp * s + arq * c;
                }
                // Row update A ← G† A.
                for r in 0..n {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = apr * c - aqr * s;
                    a[(q, r)] = apr * s.conj() + aqr * c;
                }
                // Accumulate V ← V G.
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * c - vrq * s.conj();
                    v[(r, q)] = vrp * s + vrq * c;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[(i, i)].re).collect();
    (vals, v)
}

/// Singular values of a square matrix via the spectrum of `M†M`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let gram = m.adjoint().mul(m);
    let spec = eigvals_hermitian(&gram)?;
    Ok(spec
        .values()
        .iter()
        .map(|&x| if x > 0.0 { x.sqrt() } else { 0.0 })
        .collect())
}

/// Trace norm ‖M‖ = tr|M|, the sum of singular values.
///
/// Hermitian inputs take the cheaper Σ|λ| route.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_square() && m.hermiticity_deviation() <= HERMITICITY_TOL * m.max_abs_entry().max(1.0) {
        let spec = eigvals_hermitian(m)?;
        return Ok(spec.values().iter().map(|x| x.abs()).sum());
    }
    Ok(singular_values(m)?.iter().sum())
}

/// Hermitian, positive, unit-trace matrix with attached subsystem dims.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), positivity (eigenvalues ≥ −1e-10,
    /// clamping is left to consumers of the spectrum) and unit trace.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let order: usize = dims.iter().product();
        if !matrix.is_square() || matrix.rows() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: matrix.rows(),
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITICITY_TOL * matrix.max_abs_entry().max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidState("trace is not 1"));
        }
        let spec = eigvals_hermitian(&matrix)?;
        if spec.values().iter().any(|&x| x < EIGENVALUE_FLOOR) {
            return Err(Error::InvalidState("negative eigenvalue"));
        }
        Ok(DensityMatrix { matrix, dims })
    }

    /// Constructor for matrices that are valid by construction.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix { matrix, dims }
    }

    pub fn pure(amplitudes: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let order: usize = dims.iter().product();
        if amplitudes.len() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState("vector is not normalized"));
        }
        Ok(DensityMatrix {
            matrix: ComplexMatrix::outer(amplitudes),
            dims,
        })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let order: usize = dims.iter().product();
        DensityMatrix {
            matrix: ComplexMatrix::identity(order).scale_re(1.0 / order as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    /// Reinterprets the same matrix with a different subsystem grouping.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let order: usize = dims.iter().product();
        if order != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                got: order,
            });
        }
        Ok(DensityMatrix {
            matrix: self.matrix.clone(),
            dims,
        })
    }

    pub fn spectrum(&self) -> OrderedSpectrum {
        eigvals_hermitian(&self.matrix).expect("density matrix is Hermitian")
    }

    /// Convex combination λ·self + (1−λ)·other.
    pub fn mix(&self, other: &DensityMatrix, lambda: f64) -> DensityMatrix {
        debug_assert_eq!(self.dims, other.dims);
        DensityMatrix {
            matrix: self
                .matrix
                .scale_re(lambda)
                .add(&other.matrix.scale_re(1.0 - lambda)),
            dims: self.dims.clone(),
        }
    }
}

fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn from_digits(digits: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0;
    for (d, &dim) in digits.iter().zip(dims.iter()) {
        idx = idx * dim + d;
    }
    idx
}

/// Traces out every subsystem not listed in `keep` (indices ascending).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    let n = dims.len();
    if keep.iter().any(|&k| k >= n) {
        return Err(Error::BadIndex);
    }
    let mut seen = vec![false; n];
    for &k in keep {
        if seen[k] {
            return Err(Error::BadIndex);
        }
        seen[k] = true;
    }
    let keep: Vec<usize> = {
        let mut k = keep.to_vec();
        k.sort_unstable();
        k
    };
    let drop: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let drop_dims: Vec<usize> = drop.iter().map(|&i| dims[i]).collect();
    let kd: usize = kept_dims.iter().product();
    let dd: usize = drop_dims.iter().product();

    let mut out = ComplexMatrix::zeros(kd, kd);
    let mut full_r = vec![0usize; n];
    let mut full_c = vec![0usize; n];
    let mut kr = vec![0usize; keep.len()];
    let mut kc = vec![0usize; keep.len()];
    let mut dr = vec![0usize; drop.len()];
    for r in 0..kd {
        digits(r, &kept_dims, &mut kr);
        for c in 0..kd {
            digits(c, &kept_dims, &mut kc);
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..dd {
                digits(e, &drop_dims, &mut dr);
                for (slot, &sys) in keep.iter().enumerate() {
                    full_r[sys] = kr[slot];
                    full_c[sys] = kc[slot];
                }
                for (slot, &sys) in drop.iter().enumerate() {
                    full_r[sys] = dr[slot];
                    full_c[sys] = dr[slot];
                }
                acc += rho.matrix()[(from_digits(&full_r, dims), from_digits(&full_c, dims))];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix {
        matrix: out,
        dims: kept_dims,
    })
}

/// Partial transpose of a bipartite state with respect to one subsystem.
///
/// Multi-part states must be coarse-grained to two subsystems first.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<ComplexMatrix> {
    let dims = rho.dims();
    if dims.len() != 2 {
        return Err(Error::BadPartition);
    }
    if subsystem >= 2 {
        return Err(Error::BadIndex);
    }
    let (da, db) = (dims[0], dims[1]);
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    for ra in 0..da {
        for rb in 0..db {
            for ca in 0..da {
                for cb in 0..db {
                    // ρ^{T_B}_{mμ,nν} = ρ_{mν,nμ}; T_A analogous.
                    let src = if subsystem == 1 {
                        (ra * db + cb, ca * db + rb)
                    } else {
                        (ca * db + rb, ra * db + cb)
                    };
                    out[(ra * db + rb, ca * db + cb)] = m[src];
                }
            }
        }
    }
    Ok(out)
}

/// Von Neumann entropy S(ρ) = −tr[ρ log₂ ρ] in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let spec = rho.spectrum();
    shannon(
        &spec
            .values()
            .iter()
            .map(|&x| x.max(0.0))
            .collect::<Vec<_>>(),
    )
}

/// Quantum relative entropy S(σ‖ρ) = tr[σ(log₂σ − log₂ρ)].
///
/// Returns +∞ when the support of σ is not contained in the support of
/// ρ (σ-weight above 1e-9 on eigenvalues of ρ below 1e-12).
pub fn relative_entropy(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    if sigma.order() != rho.order() {
        return Err(Error::DimensionMismatch {
            expected: sigma.order(),
            got: rho.order(),
        });
    }
    let (q, qv) = eig_hermitian(sigma.matrix())?;
    let (p, pv) = eig_hermitian(rho.matrix())?;
    let n = sigma.order();
    // overlap[i][j] = |⟨p_i|q_j⟩|²
    let cross = pv.adjoint().mul(&qv);
    let mut kernel_weight = 0.0;
    let mut cross_term = 0.0;
    for i in 0..n {
        let pi = p.values()[i].max(0.0);
        for j in 0..n {
            let qj = q.values()[j].max(0.0);
            if qj <= 0.0 {
                continue;
            }
            let w = cross[(i, j)].norm_sqr() * qj;
            if pi < SUPPORT_TOL {
                kernel_weight += w;
            } else {
                cross_term += w * log2(pi);
            }
        }
    }
    if kernel_weight > KERNEL_WEIGHT_TOL {
        return Ok(f64::INFINITY);
    }
    let neg_entropy: f64 = q
        .values()
        .iter()
        .filter(|&&x| x > 1e-300)
        .map(|&x| x * log2(x))
        .sum();
    Ok((neg_entropy - cross_term).max(0.0))
}

/// Hermitian square root via the eigendecomposition, clamping negatives.
pub fn sqrtm_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (spec, basis) = eig_hermitian(m)?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lam) in spec.values().iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let s = lam.sqrt();
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] += basis[(r, k)] * basis[(c, k)].conj() * s;
            }
        }
    }
    Ok(out)
}

/// Uhlmann fidelity F(σ,ρ) = (tr[(√σ ρ √σ)^{1/2}])².
pub fn fidelity(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    if sigma.order() != rho.order() {
        return Err(Error::DimensionMismatch {
            expected: sigma.order(),
            got: rho.order(),
        });
    }
    let s = sqrtm_psd(sigma.matrix())?;
    let inner = s.mul(rho.matrix()).mul(&s);
    let spec = eigvals_hermitian(&inner)?;
    let root_sum: f64 = spec
        .values()
        .iter()
        .map(|&x| if x > 0.0 { x.sqrt() } else { 0.0 })
        .sum();
    Ok((root_sum * root_sum).min(1.0 + 1e-12))
}

/// exp(i·scale·H) for Hermitian H; the result is unitary.
pub fn matrix_exp_hermitian(h: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    let (spec, basis) = eig_hermitian(h)?;
    let n = h.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lam) in spec.values().iter().enumerate() {
        let phase = Complex64::new((scale * lam).cos(), (scale * lam).sin());
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] += basis[(r, k)] * basis[(c, k)].conj() * phase;
            }
        }
    }
    Ok(out)
}
