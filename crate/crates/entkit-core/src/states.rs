//! Constructors for the named states, Schmidt decomposition, and random
//! state generation.
//!
//! Subsystem 0 is the leftmost tensor factor and the most significant
//! digit of a computational-basis index.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

#[allow(unused_imports)]
use crate::fmath::*;
use crate::qla::{eig_hermitian, tensor_vec, ComplexMatrix, DensityMatrix, OrderedSpectrum};
use crate::rng::SplitRng;
use crate::{Error, Result};

/// Normalized complex vector with a subsystem-dimension list.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    dims: Vec<usize>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let order: usize = dims.iter().product();
        if amplitudes.len() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState("vector is not normalized"));
        }
        Ok(StateVector { amplitudes, dims })
    }

    /// Normalizes the input before construction.
    pub fn normalized(mut amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector"));
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        StateVector::new(amplitudes, dims)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(
            ComplexMatrix::outer(&self.amplitudes),
            self.dims.clone(),
        )
    }

    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let order: usize = dims.iter().product();
        if order != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                got: order,
            });
        }
        Ok(StateVector {
            amplitudes: self.amplitudes.clone(),
            dims,
        })
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        StateVector {
            amplitudes: tensor_vec(&self.amplitudes, &other.amplitudes),
            dims,
        }
    }

    /// Schmidt coefficients (probabilities) across a bipartition.
    pub fn schmidt_spectrum(&self, side_a: &[usize]) -> Result<OrderedSpectrum> {
        Ok(schmidt(self, side_a)?.coefficients)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

pub fn bell(kind: BellKind) -> StateVector {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let (a, b, sign) = match kind {
        BellKind::PhiPlus => (0usize, 3usize, 1.0),
        BellKind::PhiMinus => (0, 3, -1.0),
        BellKind::PsiPlus => (1, 2, 1.0),
        BellKind::PsiMinus => (1, 2, -1.0),
    };
    let mut amp = vec![Complex64::new(0.0, 0.0); 4];
    amp[a] = Complex64::new(s, 0.0);
    amp[b] = Complex64::new(sign * s, 0.0);
    StateVector {
        amplitudes: amp,
        dims: vec![2, 2],
    }
}

/// (|0…0⟩ + |1…1⟩)/√2 on `n` qubits.
pub fn ghz(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::BadParameter("ghz needs n >= 2"));
    }
    let dim = 1usize << n;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut amp = vec![Complex64::new(0.0, 0.0); dim];
    amp[0] = Complex64::new(s, 0.0);
    amp[dim - 1] = Complex64::new(s, 0.0);
    Ok(StateVector {
        amplitudes: amp,
        dims: vec![2; n],
    })
}

/// Uniform superposition of the weight-one computational strings.
pub fn w_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::BadParameter("w_state needs n >= 2"));
    }
    let dim = 1usize << n;
    let s = 1.0 / (n as f64).sqrt();
    let mut amp = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..n {
        amp[1 << k] = Complex64::new(s, 0.0);
    }
    Ok(StateVector {
        amplitudes: amp,
        dims: vec![2; n],
    })
}

/// (|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩)/2.
pub fn cluster4() -> StateVector {
    let mut amp = vec![Complex64::new(0.0, 0.0); 16];
    amp[0b0000] = Complex64::new(0.5, 0.0);
    amp[0b0011] = Complex64::new(0.5, 0.0);
    amp[0b1100] = Complex64::new(0.5, 0.0);
    amp[0b1111] = Complex64::new(-0.5, 0.0);
    StateVector {
        amplitudes: amp,
        dims: vec![2; 4],
    }
}

/// Computational basis state |b₀b₁…⟩ of qubits.
pub fn product_basis_state(bits: &[u8]) -> StateVector {
    let n = bits.len();
    let mut index = 0usize;
    for &b in bits {
        index = index * 2 + (b as usize & 1);
    }
    let mut amp = vec![Complex64::new(0.0, 0.0); 1 << n];
    amp[index] = Complex64::new(1.0, 0.0);
    StateVector {
        amplitudes: amp,
        dims: vec![2; n],
    }
}

/// Basis state |d₀d₁…⟩ with arbitrary local dimensions.
pub fn product_computational(digits: &[usize], dims: &[usize]) -> StateVector {
    assert_eq!(digits.len(), dims.len());
    let mut index = 0usize;
    for (&d, &dim) in digits.iter().zip(dims.iter()) {
        assert!(d < dim);
        index = index * dim + d;
    }
    let order: usize = dims.iter().product();
    let mut amp = vec![Complex64::new(0.0, 0.0); order];
    amp[index] = Complex64::new(1.0, 0.0);
    StateVector {
        amplitudes: amp,
        dims: dims.to_vec(),
    }
}

/// Σᵢ √pᵢ |ii⟩ on C^N ⊗ C^N from Schmidt probabilities.
pub fn schmidt_diagonal_state(probs: &[f64], n: usize) -> StateVector {
    assert!(probs.len() <= n);
    let mut amp = vec![Complex64::new(0.0, 0.0); n * n];
    for (i, &p) in probs.iter().enumerate() {
        amp[i * n + i] = Complex64::new(p.max(0.0).sqrt(), 0.0);
    }
    StateVector::normalized(amp, vec![n, n]).expect("nonzero Schmidt vector")
}

/// Two-qubit Werner family λ|ψ⁻⟩⟨ψ⁻| + (1−λ)·1/4.
pub fn werner2(lambda: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::BadParameter("lambda must be in [0,1]"));
    }
    let singlet = bell(BellKind::PsiMinus).to_density();
    let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
    Ok(singlet.mix(&mixed, lambda))
}

/// Projectors onto the symmetric and antisymmetric subspaces of C^N⊗C^N.
pub fn sym_antisym_projectors(n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let d = n * n;
    let mut swap = ComplexMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            swap[(i * n + j, j * n + i)] = Complex64::new(1.0, 0.0);
        }
    }
    let id = ComplexMatrix::identity(d);
    let ps = id.add(&swap).scale_re(0.5);
    let pa = id.sub(&swap).scale_re(0.5);
    (ps, pa)
}

/// λσ_s + (1−λ)σ_a on C^N⊗C^N, the U⊗U-invariant family.
pub fn werner_sym(lambda: f64, n: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::BadParameter("lambda must be in [0,1]"));
    }
    if n < 2 {
        return Err(Error::BadParameter("dimension must be at least 2"));
    }
    let (ps, pa) = sym_antisym_projectors(n);
    let tr_s = (n * (n + 1) / 2) as f64;
    let tr_a = (n * (n - 1) / 2) as f64;
    let m = ps
        .scale_re(lambda / tr_s)
        .add(&pa.scale_re((1.0 - lambda) / tr_a));
    Ok(DensityMatrix::from_parts_unchecked(m, vec![n, n]))
}

/// Schmidt decomposition data: probabilities plus both local bases.
#[derive(Clone, Debug)]
pub struct SchmidtData {
    /// Squared Schmidt amplitudes, descending; they sum to one.
    pub coefficients: OrderedSpectrum,
    /// Columns are the A-side Schmidt vectors.
    pub basis_a: ComplexMatrix,
    /// Columns are the B-side Schmidt vectors.
    pub basis_b: ComplexMatrix,
}

impl SchmidtData {
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients
            .values()
            .iter()
            .filter(|&&x| x > tol)
            .count()
    }

    /// Σᵢ √αᵢ |aᵢ⟩|bᵢ⟩ as a flat vector (A-major ordering).
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let da = self.basis_a.rows();
        let db = self.basis_b.rows();
        let mut out = vec![Complex64::new(0.0, 0.0); da * db];
        for (k, &alpha) in self.coefficients.values().iter().enumerate() {
            if alpha <= 0.0 {
                continue;
            }
            let s = alpha.sqrt();
            for r in 0..da {
                for c in 0..db {
                    out[r * db + c] += self.basis_a[(r, k)] * self.basis_b[(c, k)] * s;
                }
            }
        }
        out
    }
}

/// Reorders amplitudes so the subsystems in `side_a` come first.
pub(crate) fn regroup_vector(
    psi: &StateVector,
    side_a: &[usize],
) -> Result<(Vec<Complex64>, usize, usize)> {
    let dims = psi.dims();
    let n = dims.len();
    let mut in_a = vec![false; n];
    for &s in side_a {
        if s >= n || in_a[s] {
            return Err(Error::BadPartition);
        }
        in_a[s] = true;
    }
    let side_b: Vec<usize> = (0..n).filter(|&i| !in_a[i]).collect();
    let da: usize = side_a.iter().map(|&i| dims[i]).product();
    let db: usize = side_b.iter().map(|&i| dims[i]).product();
    let mut out = vec![Complex64::new(0.0, 0.0); da * db];
    let mut digits_buf = vec![0usize; n];
    for (idx, &amp) in psi.amplitudes().iter().enumerate() {
        let mut rem = idx;
        for k in (0..n).rev() {
            digits_buf[k] = rem % dims[k];
            rem /= dims[k];
        }
        let mut ia = 0usize;
        for &s in side_a {
            ia = ia * dims[s] + digits_buf[s];
        }
        let mut ib = 0usize;
        for &s in &side_b {
            ib = ib * dims[s] + digits_buf[s];
        }
        out[ia * db + ib] = amp;
    }
    Ok((out, da, db))
}

/// Schmidt decomposition of a pure state across a bipartition, given as
/// the subsystem indices of side A.
pub fn schmidt(psi: &StateVector, side_a: &[usize]) -> Result<SchmidtData> {
    if side_a.is_empty() || side_a.len() >= psi.dims().len() {
        return Err(Error::BadPartition);
    }
    let (flat, da, db) = regroup_vector(psi, side_a)?;
    let m = ComplexMatrix::from_rows(da, db, flat);
    // Eigenvectors of M M† give the A basis; B vectors follow from M.
    let gram = m.mul(&m.adjoint());
    let (spec, u) = eig_hermitian(&gram)?;
    let rank_max = da.min(db);
    let mut coeffs = Vec::with_capacity(rank_max);
    let mut basis_a = ComplexMatrix::zeros(da, rank_max);
    let mut basis_b = ComplexMatrix::zeros(db, rank_max);
    for k in 0..rank_max {
        let alpha = spec.values()[k].max(0.0);
        coeffs.push(alpha);
        let ua = u.column(k);
        basis_a.set_column(k, &ua);
        if alpha > 1e-30 {
            // w = Mᵀ conj(u) / √α  so that ψ = Σ √α u ⊗ w.
            let s = alpha.sqrt();
            let mut w = vec![Complex64::new(0.0, 0.0); db];
            for c in 0..db {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..da {
                    acc += ua[r].conj() * m[(r, c)];
                }
                w[c] = acc / s;
            }
            basis_b.set_column(k, &w);
        } else {
            // Zero coefficient: any unit vector keeps the basis usable.
            let mut w = vec![Complex64::new(0.0, 0.0); db];
            w[k % db] = Complex64::new(1.0, 0.0);
            basis_b.set_column(k, &w);
        }
    }
    Ok(SchmidtData {
        coefficients: OrderedSpectrum::new(coeffs),
        basis_a,
        basis_b,
    })
}

/// Haar-random unitary via QR of a Ginibre matrix with the R-diagonal
/// phases folded into Q.
pub fn haar_unitary(n: usize, rng: &mut SplitRng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.next_gaussian(), rng.next_gaussian())
    });
    // Modified Gram-Schmidt.
    let mut q = ComplexMatrix::zeros(n, n);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|c| g.column(c)).collect();
    for c in 0..n {
        for prev in 0..c {
            let qprev = q.column(prev);
            let proj: Complex64 = qprev
                .iter()
                .zip(cols[c].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            for r in 0..n {
                cols[c][r] -= qprev[r] * proj;
            }
        }
        let norm: f64 = cols[c].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // Phase fix: make the "R diagonal" real positive by rotating the
        // column with the phase of its leading component against g.
        let diag: Complex64 = (0..n).map(|r| g[(r, c)] * cols[c][r].conj()).sum();
        let phase = if diag.norm() > 1e-300 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for r in 0..n {
            q[(r, c)] = cols[c][r] / norm * phase;
        }
    }
    q
}

/// Uniform point on the probability simplex via sorted-uniform spacings.
pub fn simplex_point(d: usize, rng: &mut SplitRng) -> Vec<f64> {
    if d == 1 {
        return vec![1.0];
    }
    let mut cuts: Vec<f64> = (0..d - 1).map(|_| rng.next_f64()).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::with_capacity(d);
    let mut prev = 0.0;
    for &c in &cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(1.0 - prev);
    out
}

/// U D U† with U Haar-distributed and D uniform on the simplex.
pub fn random_density(d: usize, rng: &mut SplitRng) -> DensityMatrix {
    let u = haar_unitary(d, rng);
    let p = simplex_point(d, rng);
    let mut m = ComplexMatrix::zeros(d, d);
    for (k, &pk) in p.iter().enumerate() {
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] += u[(r, k)] * u[(c, k)].conj() * pk;
            }
        }
    }
    DensityMatrix::from_parts_unchecked(m, vec![d])
}

/// Gaussian-amplitude random pure state.
pub fn random_pure(dims: &[usize], rng: &mut SplitRng) -> StateVector {
    let order: usize = dims.iter().product();
    let amp: Vec<Complex64> = (0..order)
        .map(|_| Complex64::new(rng.next_gaussian(), rng.next_gaussian()))
        .collect();
    StateVector::normalized(amp, dims.to_vec()).expect("Gaussian vector is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::{partial_trace, tensor_product};

    #[test]
    fn named_states_match_printed_expansions() {
        let g = ghz(3).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((g.amplitudes()[0].re - s).abs() < 1e-15);
        assert!((g.amplitudes()[7].re - s).abs() < 1e-15);

        let w = w_state(3).unwrap();
        let t = 1.0 / 3f64.sqrt();
        for idx in [0b100, 0b010, 0b001] {
            assert!((w.amplitudes()[idx].re - t).abs() < 1e-15);
        }

        let c = cluster4();
        assert!((c.amplitudes()[0b0000].re - 0.5).abs() < 1e-15);
        assert!((c.amplitudes()[0b0011].re - 0.5).abs() < 1e-15);
        assert!((c.amplitudes()[0b1100].re - 0.5).abs() < 1e-15);
        assert!((c.amplitudes()[0b1111].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn werner_limits() {
        let w0 = werner2(0.0).unwrap();
        let mm = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(w0.matrix().sub(mm.matrix()).max_abs_entry() < 1e-15);
        let w1 = werner2(1.0).unwrap();
        let singlet = bell(BellKind::PsiMinus).to_density();
        assert!(w1.matrix().sub(singlet.matrix()).max_abs_entry() < 1e-15);
        assert!(werner2(1.5).is_err());
    }

    #[test]
    fn projector_traces_and_algebra() {
        for n in [2usize, 3, 4] {
            let (ps, pa) = sym_antisym_projectors(n);
            assert!((ps.trace().re - (n * (n + 1) / 2) as f64).abs() < 1e-12);
            assert!((pa.trace().re - (n * (n - 1) / 2) as f64).abs() < 1e-12);
            let sum = ps.add(&pa);
            assert!(sum.sub(&ComplexMatrix::identity(n * n)).max_abs_entry() < 1e-12);
            assert!(ps.mul(&pa).max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn antisym_matches_printed_expansion() {
        // σ_a = (1/3)·Σ_{i<j}(|ij⟩−|ji⟩)(⟨ij|−⟨ji|)/… on C³⊗C³.
        let sa = werner_sym(0.0, 3).unwrap();
        let mut expect = ComplexMatrix::zeros(9, 9);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let mut v = vec![Complex64::new(0.0, 0.0); 9];
                v[i * 3 + j] = Complex64::new(1.0, 0.0);
                v[j * 3 + i] = Complex64::new(-1.0, 0.0);
                expect = expect.add(&ComplexMatrix::outer(&v));
            }
        }
        let expect = expect.scale_re(1.0 / 6.0); // each term has norm² = 2
        assert!(sa.matrix().sub(&expect).max_abs_entry() < 1e-12);
    }

    #[test]
    fn werner_sym_twirl_invariance() {
        let mut rng = SplitRng::new(31);
        let w = werner_sym(0.35, 3).unwrap();
        for _ in 0..100 {
            let u = haar_unitary(3, &mut rng);
            let uu = tensor_product(&u, &u);
            let rotated = uu.mul(w.matrix()).mul(&uu.adjoint());
            assert!(rotated.sub(w.matrix()).max_abs_entry() < 1e-9);
        }
    }

    #[test]
    fn schmidt_cases() {
        // Product vector: rank 1.
        let p = product_basis_state(&[0, 1]);
        let d = schmidt(&p, &[0]).unwrap();
        assert_eq!(d.rank(1e-10), 1);

        // Bell: coefficients (1/2, 1/2).
        let b = bell(BellKind::PhiPlus);
        let d = schmidt(&b, &[0]).unwrap();
        assert!((d.coefficients.values()[0] - 0.5).abs() < 1e-12);
        assert!((d.coefficients.values()[1] - 0.5).abs() < 1e-12);

        // Printed 3x3 example: coefficients (0.6, 0.3, 0.1).
        let psi = schmidt_diagonal_state(&[0.6, 0.3, 0.1], 3);
        let d = schmidt(&psi, &[0]).unwrap();
        for (got, want) in d.coefficients.values().iter().zip([0.6, 0.3, 0.1]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_reconstruction_random() {
        let mut rng = SplitRng::new(37);
        for &dims in &[[2usize, 2], [3, 2], [4, 4], [2, 4]] {
            for _ in 0..5 {
                let psi = random_pure(&dims, &mut rng);
                let d = schmidt(&psi, &[0]).unwrap();
                assert!((d.coefficients.sum() - 1.0).abs() < 1e-9);
                let rec = d.reconstruct();
                // Align the global phase on the largest amplitude.
                let k = psi
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
                    .unwrap()
                    .0;
                let phase = psi.amplitudes()[k] / rec[k];
                let err: f64 = psi
                    .amplitudes()
                    .iter()
                    .zip(rec.iter())
                    .map(|(a, r)| (a - r * phase).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(err < 1e-9, "dims {dims:?}: reconstruction error {err}");
            }
        }
    }

    #[test]
    fn schmidt_over_middle_cut() {
        // Partition by subsystem subsets that are not a prefix.
        let psi = ghz(3).unwrap();
        let d = schmidt(&psi, &[1]).unwrap();
        assert_eq!(d.rank(1e-10), 2);
        let d = schmidt(&psi, &[0, 2]).unwrap();
        assert_eq!(d.rank(1e-10), 2);
    }

    #[test]
    fn haar_columns_and_moment() {
        let mut rng = SplitRng::new(41);
        let u = haar_unitary(4, &mut rng);
        assert!(u.unitarity_deviation() < 1e-9);

        // |U11|² uniform on [0,1] for d=2: Kolmogorov–Smirnov < 0.05.
        let n = 10_000;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| haar_unitary(2, &mut rng)[(0, 0)].norm_sqr())
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let lo = i as f64 / n as f64;
                let hi = (i + 1) as f64 / n as f64;
                (x - lo).abs().max((x - hi).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.05, "KS statistic {ks}");
    }

    #[test]
    fn random_density_is_valid_and_unbiased() {
        let mut rng = SplitRng::new(43);
        let d1 = random_density(1, &mut rng);
        assert!((d1.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);

        let mut mean = ComplexMatrix::zeros(2, 2);
        let samples = 10_000;
        for _ in 0..samples {
            let rho = random_density(2, &mut rng);
            mean = mean.add(rho.matrix());
        }
        mean = mean.scale_re(1.0 / samples as f64);
        let target = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(
            mean.sub(&target).max_abs_entry() < 0.02,
            "ensemble mean deviates: {:?}",
            mean
        );
        // Validity of a sample.
        let rho = random_density(5, &mut rng);
        DensityMatrix::new(rho.matrix().clone(), vec![5]).unwrap();
    }

    #[test]
    fn partial_trace_of_random_pure_matches_schmidt() {
        let mut rng = SplitRng::new(47);
        let psi = random_pure(&[3, 4], &mut rng);
        let rho = psi.to_density();
        let red = partial_trace(&rho, &[0]).unwrap();
        let spec = red.spectrum();
        let d = schmidt(&psi, &[0]).unwrap();
        for (a, b) in spec.values().iter().zip(d.coefficients.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
