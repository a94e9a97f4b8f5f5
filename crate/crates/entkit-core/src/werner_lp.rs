//! Symmetric-group-reduced PPT constraints for copies of the C³⊗C³
//! Werner family, an exact rational simplex, and the regularized
//! relative-entropy series e_n.
//!
//! On n copies the relevant reference states are classified by a
//! probability vector p₀..p_n over how many factors are antisymmetric;
//! positivity of the partial transpose reduces to n+1 linear
//! inequalities with rational coefficients. The simplex runs in exact
//! rational arithmetic throughout: the optimal p_n shrinks like 2^(-cn),
//! far below what a float tableau resolves reliably at n = 40.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;

#[allow(unused_imports)]
use crate::fmath::*;
use crate::qla::log2;
use crate::{Error, Result};

fn big(i: i64) -> BigInt {
    BigInt::from(i)
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(big(num), big(den))
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return big(0);
    }
    let mut acc = big(1);
    for i in 0..k.min(n - k) {
        acc = acc * big((n - i) as i64) / big((i + 1) as i64);
    }
    acc
}

/// Reduced PPT constraint system: row s demands Σ_k c[s][k]·p_k ≥ 0.
#[derive(Clone, Debug)]
pub struct PptConstraintSystem {
    pub n: usize,
    /// Exact coefficients, (n+1)×(n+1), indexed `[s][k]`.
    pub coeffs: Vec<Vec<BigRational>>,
}

impl PptConstraintSystem {
    pub fn coeffs_f64(&self) -> Vec<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|row| row.iter().map(rational_to_f64).collect())
            .collect()
    }

    /// Evaluates every row at a probability vector.
    pub fn rows_at(&self, p: &[f64]) -> Vec<f64> {
        self.coeffs_f64()
            .iter()
            .map(|row| row.iter().zip(p.iter()).map(|(c, x)| c * x).sum())
            .collect()
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Scale down huge numerators/denominators pairwise to stay in range.
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    let bits = |x: &BigInt| x.bits();
    while bits(&num).max(bits(&den)) > 900 {
        num >>= 64;
        den >>= 64;
    }
    let to = |x: &BigInt| -> f64 {
        let (sign, digits) = x.to_u64_digits();
        let mut acc = 0.0f64;
        for &d in digits.iter().rev() {
            acc = acc * 1.8446744073709552e19 + d as f64;
        }
        match sign {
            num_bigint::Sign::Minus => -acc,
            _ => acc,
        }
    };
    to(&num) / to(&den)
}

/// Exact coefficients c[s][k] = Σ_l (−1/2)^l C(n−s,k−l)C(s,l)·2^k / C(n,k).
pub fn ppt_constraints(n: usize) -> Result<PptConstraintSystem> {
    if n == 0 || n > 64 {
        return Err(Error::BadParameter("copy count must be in 1..=64"));
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let mut row = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = BigRational::from_integer(big(0));
            for l in 0..=k.min(s) {
                let sign = if l % 2 == 0 { 1 } else { -1 };
                let term = BigRational::new(
                    big(sign) * binomial_big(n - s, k - l) * binomial_big(s, l),
                    big(2).pow(l as u32),
                );
                acc += term;
            }
            let scale = BigRational::new(big(2).pow(k as u32), binomial_big(n, k));
            row.push(acc * scale);
        }
        coeffs.push(row);
    }
    Ok(PptConstraintSystem { n, coeffs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// Simplex output: the optimizing probability vector and objective.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub p: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
    /// Exact vertex when solved in rational arithmetic.
    pub exact: Option<Vec<BigRational>>,
}

/// Two-phase tableau simplex in exact rational arithmetic with
/// Bland's rule: maximize c·x subject to Ax = b, x ≥ 0. Returns None
/// when infeasible.
fn simplex_eq(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
) -> Option<Vec<BigRational>> {
    use num_bigint::Sign;
    let is_pos = |x: &BigRational| x.numer().sign() == Sign::Plus;
    let is_neg = |x: &BigRational| x.numer().sign() == Sign::Minus;
    let zero = BigRational::from_integer(big(0));
    let one = BigRational::from_integer(big(1));

    let m = a.len();
    let nvars = c.len();
    // Tableau columns: nvars structural + m artificial + rhs.
    let total = nvars + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<BigRational> = Vec::with_capacity(total + 1);
        let flip = is_neg(&b[i]);
        for aij in &a[i] {
            row.push(if flip { -aij } else { aij.clone() });
        }
        for j in 0..m {
            row.push(if i == j { one.clone() } else { zero.clone() });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();

    // Phase 1: minimize the artificial sum, i.e. maximize its negation.
    let mut obj1: Vec<BigRational> = vec![zero.clone(); total + 1];
    for row in &t {
        for j in 0..=total {
            obj1[j] = &obj1[j] + &row[j];
        }
    }
    pivot_loop(&mut t, &mut basis, &mut obj1, nvars + m);
    if is_pos(&obj1[total]) {
        return None; // artificials could not be driven to zero
    }
    // Force remaining artificial basics out where possible.
    for i in 0..m {
        if basis[i] >= nvars {
            if let Some(j) = (0..nvars).find(|&j| is_pos(&t[i][j]) || is_neg(&t[i][j])) {
                pivot(&mut t, &mut basis, i, j, &mut obj1);
            }
        }
    }

    // Phase 2: reduced costs for the real objective.
    let mut obj2: Vec<BigRational> = vec![zero.clone(); total + 1];
    for (j, cj) in c.iter().enumerate() {
        obj2[j] = cj.clone();
    }
    for i in 0..m {
        let bi = basis[i];
        if bi < nvars && (is_pos(&c[bi]) || is_neg(&c[bi])) {
            let coef = c[bi].clone();
            for j in 0..=total {
                obj2[j] = &obj2[j] - &(&coef * &t[i][j]);
            }
        }
    }
    pivot_loop(&mut t, &mut basis, &mut obj2, nvars);

    let mut x = vec![zero; nvars];
    for i in 0..m {
        if basis[i] < nvars {
            x[basis[i]] = t[i][total].clone();
        }
    }
    Some(x)
}

#[allow(clippy::needless_range_loop)] // two tableau rows borrowed at once
fn pivot(
    t: &mut [Vec<BigRational>],
    basis: &mut [usize],
    row: usize,
    col: usize,
    obj: &mut [BigRational],
) {
    use num_bigint::Sign;
    let nonzero = |x: &BigRational| x.numer().sign() != Sign::NoSign;
    let total = t[0].len() - 1;
    let pivot_val = t[row][col].clone();
    for cell in t[row].iter_mut() {
        *cell = &*cell / &pivot_val;
    }
    for i in 0..t.len() {
        if i == row {
            continue;
        }
        let factor = t[i][col].clone();
        if nonzero(&factor) {
            for j in 0..=total {
                t[i][j] = &t[i][j] - &(&factor * &t[row][j]);
            }
        }
    }
    let factor = obj[col].clone();
    if nonzero(&factor) {
        for (o, trow) in obj.iter_mut().zip(t[row].iter()) {
            *o = &*o - &(&factor * trow);
        }
    }
    basis[row] = col;
}

/// Bland's rule: entering = lowest-index column with positive reduced
/// cost, leaving = lowest-index row passing the ratio test.
fn pivot_loop(
    t: &mut [Vec<BigRational>],
    basis: &mut [usize],
    obj: &mut [BigRational],
    cols: usize,
) {
    use num_bigint::Sign;
    let total = t[0].len() - 1;
    loop {
        let Some(col) = (0..cols).find(|&j| obj[j].numer().sign() == Sign::Plus) else {
            return;
        };
        let mut best: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[col].numer().sign() == Sign::Plus {
                let ratio = &row[total] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = best else {
            return; // unbounded; callers only pose bounded problems
        };
        pivot(t, basis, row, col, obj);
    }
}

/// Primal simplex from an explicitly known feasible basis (skips the
/// artificial-variable phase).
fn simplex_warm(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
    start_basis: &[usize],
) -> Option<Vec<BigRational>> {
    use num_bigint::Sign;
    let zero = BigRational::from_integer(big(0));
    let m = a.len();
    let nvars = c.len();
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut basis = start_basis.to_vec();
    // Canonicalize the starting basis columns.
    for i in 0..m {
        let col = basis[i];
        if t[i][col].numer().sign() == Sign::NoSign {
            let swap = (i + 1..m).find(|&r| t[r][col].numer().sign() != Sign::NoSign)?;
            t.swap(i, swap);
            basis.swap(i, swap);
        }
        let mut dummy = alloc::vec![zero.clone(); nvars + 1];
        pivot(&mut t, &mut basis, i, col, &mut dummy);
    }
    let mut obj: Vec<BigRational> = c.to_vec();
    obj.push(zero.clone());
    for i in 0..m {
        let bi = basis[i];
        if obj[bi].numer().sign() != Sign::NoSign {
            let coef = obj[bi].clone();
            for j in 0..=nvars {
                obj[j] = &obj[j] - &(&coef * &t[i][j]);
            }
        }
    }
    pivot_loop(&mut t, &mut basis, &mut obj, nvars);
    let mut x = alloc::vec![zero; nvars];
    for i in 0..m {
        if basis[i] < nvars {
            x[basis[i]] = t[i][nvars].clone();
        }
    }
    Some(x)
}

/// Maximizes a linear objective over {p ≥ 0, Σp = 1, PPT rows ≥ 0} in
/// exact rational arithmetic (the objective, a float, is itself an
/// exact rational).
pub fn simplex_maximize(objective: &[f64], system: &PptConstraintSystem) -> Result<LpSolution> {
    let n = system.n;
    if objective.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            got: objective.len(),
        });
    }
    let c: Vec<BigRational> = objective
        .iter()
        .map(|&x| BigRational::from_float(x).ok_or(Error::BadParameter("objective must be finite")))
        .collect::<Result<_>>()?;
    let exact = simplex_rational(system, &c, &[])?;
    let p: Vec<f64> = exact.iter().map(rational_to_f64).collect();
    let objective = objective.iter().zip(p.iter()).map(|(c, x)| c * x).sum();
    Ok(LpSolution {
        p,
        objective,
        status: LpStatus::Optimal,
        exact: Some(exact),
    })
}

/// Exact vertex maximizing a rational objective, optionally with extra
/// equality pins `p_j = v` on individual coordinates.
pub fn simplex_rational(
    system: &PptConstraintSystem,
    objective: &[BigRational],
    pins: &[(usize, BigRational)],
) -> Result<Vec<BigRational>> {
    let n = system.n;
    // Variables: p_0..p_n then one slack per PPT row.
    let nv = (n + 1) * 2;
    let mut a: Vec<Vec<BigRational>> = Vec::new();
    let mut b: Vec<BigRational> = Vec::new();
    for s in 0..=n {
        let mut row = vec![BigRational::from_integer(big(0)); nv];
        row[..=n].clone_from_slice(&system.coeffs[s]);
        row[n + 1 + s] = ratio(-1, 1);
        a.push(row);
        b.push(ratio(0, 1));
    }
    let mut norm = vec![BigRational::from_integer(big(0)); nv];
    for cell in norm.iter_mut().take(n + 1) {
        *cell = ratio(1, 1);
    }
    a.push(norm);
    b.push(ratio(1, 1));
    for (j, v) in pins {
        let mut row = vec![BigRational::from_integer(big(0)); nv];
        row[*j] = ratio(1, 1);
        a.push(row);
        b.push(v.clone());
    }

    let mut c = vec![BigRational::from_integer(big(0)); nv];
    c[..=n].clone_from_slice(objective);
    let x = if pins.is_empty() {
        // p₀ = 1 with all PPT slacks basic is feasible (column k = 0 of
        // every row is 1), so the artificial phase can be skipped.
        let mut basis: Vec<usize> = (0..=n).map(|s| n + 1 + s).collect();
        basis.push(0);
        simplex_warm(&a, &b, &c, &basis).ok_or(Error::Infeasible)?
    } else {
        simplex_eq(&a, &b, &c).ok_or(Error::Infeasible)?
    };
    Ok(x[..=n].to_vec())
}

/// Canonical vertex of the p_n-optimal face: maximizes p_n, then
/// lexicographically maximizes p₀, p₁, … subject to the values already
/// fixed. Makes the reported optimum deterministic even when the LP
/// has a face of optima.
pub fn simplex_lexicographic(system: &PptConstraintSystem) -> Result<Vec<BigRational>> {
    let n = system.n;
    let zero = BigRational::from_integer(big(0));
    let one = BigRational::from_integer(big(1));
    let mut pins: Vec<(usize, BigRational)> = Vec::new();
    let order: Vec<usize> = core::iter::once(n).chain(0..n).collect();
    let mut last = vec![zero.clone(); n + 1];
    for &j in &order {
        let mut c = vec![zero.clone(); n + 1];
        c[j] = one.clone();
        let x = simplex_rational(system, &c, &pins)?;
        pins.push((j, x[j].clone()));
        last = x;
    }
    Ok(last)
}

/// One entry of the antisymmetric series: e_n(0) = −log₂(p_n*)/n where
/// p_n* maximizes p_n over the PPT polytope. p_n* is unique even though
/// the optimal vertex may not be; use [`simplex_lexicographic`] when
/// the full canonical vector is wanted.
pub fn e_antisym(n: usize) -> Result<(f64, LpSolution)> {
    let system = ppt_constraints(n)?;
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let sol = simplex_maximize(&objective, &system)?;
    let e = -log2(sol.p[n]) / n as f64;
    Ok((e, sol))
}

/// e_n(0) for n = 1..=n_max.
pub fn e_series_antisym(n_max: usize) -> Result<Vec<f64>> {
    (1..=n_max).map(|n| Ok(e_antisym(n)?.0)).collect()
}

/// Binomial mixture weights q_k = C(n,k)·λ^{n−k}(1−λ)^k.
fn mixture_weights(n: usize, lambda: f64) -> Vec<f64> {
    let mut q = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let c = rational_to_f64(&BigRational::from_integer(binomial_big(n, k)));
        let w = c * lambda.powi((n - k) as i32) * (1.0 - lambda).powi(k as i32);
        q.push(w);
    }
    q
}

fn divergence_bits(q: &[f64], p: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (qk, pk) in q.iter().zip(p.iter()) {
        if *qk <= 0.0 {
            continue;
        }
        if *pk <= 0.0 {
            return f64::INFINITY;
        }
        acc += qk * log2(qk / pk);
    }
    acc
}

/// Result of the general-λ convex minimization.
#[derive(Clone, Debug)]
pub struct ESolveResult {
    pub value: f64,
    pub p: Vec<f64>,
    pub gap: f64,
    pub converged: bool,
}

/// e_n(λ): minimize the binomial-mixture divergence D(q‖p)/n over the
/// PPT polytope. Convex; Frank–Wolfe steps with the exact LP as the
/// linear-minimization oracle give a duality-gap certificate.
pub fn e_general(n: usize, lambda: f64, tol: f64) -> Result<ESolveResult> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::BadParameter("lambda must be in [0,1]"));
    }
    if n == 0 || n > 30 {
        return Err(Error::BadParameter("copy count must be in 1..=30"));
    }
    let system = ppt_constraints(n)?;
    let q = mixture_weights(n, lambda);

    // λ = 1 is separable outright: p = (1,0,…,0) gives divergence 0.
    if lambda >= 1.0 {
        let mut p = vec![0.0; n + 1];
        p[0] = 1.0;
        return Ok(ESolveResult {
            value: 0.0,
            p,
            gap: 0.0,
            converged: true,
        });
    }

    // Interior feasible start: the n-fold product of the single-copy
    // optimum, p_k = C(n,k)/2^n.
    let mut p = mixture_weights(n, 0.5);
    let mut gap = f64::INFINITY;
    let mut converged = false;
    for _iter in 0..4000 {
        // ∇_p D(q‖p) = −q_k/(p_k ln 2).
        let grad: Vec<f64> = q
            .iter()
            .zip(p.iter())
            .map(|(qk, pk)| {
                if *qk <= 0.0 {
                    0.0
                } else {
                    -qk / (pk.max(1e-300) * core::f64::consts::LN_2)
                }
            })
            .collect();
        // LP oracle: minimize ⟨grad, x⟩ = maximize ⟨−grad, x⟩.
        let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
        let vertex = simplex_maximize(&neg, &system)?.p;
        gap = grad
            .iter()
            .zip(p.iter().zip(vertex.iter()))
            .map(|(g, (pk, vk))| g * (pk - vk))
            .sum::<f64>()
            / n as f64;
        if gap <= tol {
            converged = true;
            break;
        }
        // Exact-ish line search on the segment toward the vertex.
        let f = |t: f64| -> f64 {
            let mixed: Vec<f64> = p
                .iter()
                .zip(vertex.iter())
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect();
            divergence_bits(&q, &mixed)
        };
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(m1) <= f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let t = 0.5 * (lo + hi);
        if t <= 1e-16 {
            converged = true;
            break;
        }
        for (pk, vk) in p.iter_mut().zip(vertex.iter()) {
            *pk = (1.0 - t) * *pk + t * vk;
        }
    }
    Ok(ESolveResult {
        value: divergence_bits(&q, &p) / n as f64,
        p,
        gap,
        converged,
    })
}

/// The printed optimal vectors for n = 1..=7, as exact rationals.
pub fn reference_optima() -> Vec<Vec<BigRational>> {
    vec![
        vec![ratio(1, 2), ratio(1, 2)],
        vec![ratio(2, 3), ratio(0, 1), ratio(1, 3)],
        vec![ratio(4, 5), ratio(0, 1), ratio(0, 1), ratio(1, 5)],
        vec![
            ratio(3, 8),
            ratio(1, 2),
            ratio(0, 1),
            ratio(0, 1),
            ratio(1, 8),
        ],
        vec![
            ratio(33, 106),
            ratio(45, 106),
            ratio(10, 53),
            ratio(0, 1),
            ratio(0, 1),
            ratio(4, 53),
        ],
        vec![
            ratio(23, 87),
            ratio(30, 87),
            ratio(30, 87),
            ratio(0, 1),
            ratio(0, 1),
            ratio(0, 1),
            ratio(4, 87),
        ],
        vec![
            ratio(7, 24),
            ratio(7, 72),
            ratio(7, 12),
            ratio(0, 1),
            ratio(0, 1),
            ratio(0, 1),
            ratio(0, 1),
            ratio(1, 36),
        ],
    ]
}
