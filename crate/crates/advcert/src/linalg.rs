//! Dense linear algebra: symmetric eigendecomposition, spectral norms, and
//! Gram-based orthonormalization of spanning sets.
//!
//! Everything here is self-contained double-precision code.  Spectral norms
//! use a full eigendecomposition of the squared matrix up to a configurable
//! dimension cutoff and switch to seeded power iteration above it.

use ndarray::{Array1, Array2, ArrayView2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// How spectral norms are computed.
#[derive(Debug, Clone, Copy)]
pub struct SpectralConfig {
    /// Matrices with min(rows, cols) at most this use full eigendecomposition.
    pub dense_cutoff: usize,
    /// Relative tolerance for power iteration.
    pub power_tol: f64,
    pub power_max_iter: usize,
    /// Seed for the power-iteration start vector.
    pub seed: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { dense_cutoff: 2048, power_tol: 1e-9, power_max_iter: 100_000, seed: 0 }
    }
}

/// Eigendecomposition of a symmetric matrix: eigenvalues ascending,
/// eigenvectors as the corresponding columns of an orthogonal matrix.
pub fn sym_eigen(a: &ArrayView2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Solver(format!("sym_eigen needs a square matrix, got {}x{}", n, a.ncols())));
    }
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let mut v = a.to_owned();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;
    Ok((Array1::from(d), v))
}

// Householder reduction to tridiagonal form (EISPACK tred2).
fn tred2(v: &mut Array2<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for (j, dj) in d.iter_mut().enumerate() {
        *dj = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for d_k in d.iter().take(i) {
            scale += d_k.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            // generate the Householder vector
            for d_k in d.iter_mut().take(i) {
                *d_k /= scale;
                h += *d_k * *d_k;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for e_j in e.iter_mut().take(i) {
                *e_j = 0.0;
            }

            // apply the similarity transformation to the remaining columns
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for (k, dk) in d.iter_mut().enumerate().take(i + 1) {
                *dk = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for (j, dj) in d.iter_mut().enumerate() {
        *dj = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

// Symmetric tridiagonal QL with implicit shifts (EISPACK tql2).
fn tql2(v: &mut Array2<f64>, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 64 {
                    return Err(Error::Solver("tql2 failed to converge".into()));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for d_i in d.iter_mut().skip(l + 2) {
                    *d_i -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // sort eigenvalues ascending, carry eigenvectors along
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in i + 1..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d.swap(i, k);
            for r in 0..n {
                let tmp = v[(r, i)];
                v[(r, i)] = v[(r, k)];
                v[(r, k)] = tmp;
            }
        }
    }
    Ok(())
}

/// Largest singular value of a real matrix.
pub fn spectral_norm(m: &ArrayView2<f64>, cfg: &SpectralConfig) -> Result<f64> {
    Ok(top_singular_value(m, cfg)?.0)
}

/// Largest singular value together with its left and right singular vectors.
pub fn top_singular_triple(
    m: &ArrayView2<f64>,
    cfg: &SpectralConfig,
) -> Result<(f64, Array1<f64>, Array1<f64>)> {
    let (sigma, v) = top_singular_value(m, cfg)?;
    if sigma <= 0.0 {
        let u = Array1::zeros(m.nrows());
        return Ok((0.0, u, v));
    }
    let u = m.dot(&v).mapv(|x| x / sigma);
    Ok((sigma, u, v))
}

// Returns (sigma_max, right singular vector in the smaller-side space lifted
// back to column space of m).
fn top_singular_value(m: &ArrayView2<f64>, cfg: &SpectralConfig) -> Result<(f64, Array1<f64>)> {
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows == 0 || cols == 0 {
        return Ok((0.0, Array1::zeros(cols)));
    }
    // square up on the smaller side
    let transpose = rows < cols;
    let work = if transpose { m.t().to_owned() } else { m.to_owned() };
    // work is tall: gram = work^T work is cols(work) x cols(work), the smaller square
    let gram = work.t().dot(&work);
    let dim = gram.nrows();

    let (lambda, vec) = if dim <= cfg.dense_cutoff {
        let (vals, vecs) = sym_eigen(&gram.view())?;
        let idx = vals.len() - 1;
        (vals[idx].max(0.0), vecs.column(idx).to_owned())
    } else {
        power_iteration(&gram, cfg)?
    };
    let sigma = lambda.max(0.0).sqrt();

    if transpose {
        // vec lives in row space of m; lift to a right singular vector of m
        if sigma > 0.0 {
            let right = m.t().dot(&vec).mapv(|x| x / sigma);
            Ok((sigma, right))
        } else {
            Ok((0.0, Array1::zeros(cols)))
        }
    } else {
        Ok((sigma, vec))
    }
}

// Power iteration on a symmetric PSD matrix; returns (top eigenvalue, eigenvector).
fn power_iteration(g: &Array2<f64>, cfg: &SpectralConfig) -> Result<(f64, Array1<f64>)> {
    let n = g.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut v = Array1::from_iter((0..n).map(|_| rng.random_range(-1.0..1.0f64)));
    let norm = v.dot(&v).sqrt();
    if norm == 0.0 {
        v[0] = 1.0;
    } else {
        v.mapv_inplace(|x| x / norm);
    }
    let mut lambda = 0.0f64;
    for _ in 0..cfg.power_max_iter {
        let w = g.dot(&v);
        let new_lambda = v.dot(&w);
        let w_norm = w.dot(&w).sqrt();
        if w_norm == 0.0 {
            return Ok((0.0, v));
        }
        v = w.mapv(|x| x / w_norm);
        if (new_lambda - lambda).abs() <= cfg.power_tol * new_lambda.abs().max(1e-300) {
            return Ok((new_lambda, v));
        }
        lambda = new_lambda;
    }
    // eigenvalue estimates are sandwiched between successive Rayleigh quotients;
    // hitting the cap still yields the best current estimate
    Ok((lambda, v))
}

/// Orthonormal basis for the column span of `vectors`, via eigendecomposition
/// of the Gram matrix: keep eigenvalues above `rank_tol_factor * lambda_max`,
/// return `B = V U L^{-1/2}` with orthonormal columns.
pub fn orthonormal_span(vectors: &ArrayView2<f64>, rank_tol_factor: f64) -> Result<Array2<f64>> {
    let dim = vectors.nrows();
    let count = vectors.ncols();
    if count == 0 {
        return Ok(Array2::zeros((dim, 0)));
    }
    let gram = vectors.t().dot(vectors);
    let (vals, vecs) = sym_eigen(&gram.view())?;
    let lambda_max = vals.iter().cloned().fold(0.0f64, f64::max);
    if lambda_max <= 0.0 {
        return Ok(Array2::zeros((dim, 0)));
    }
    let threshold = rank_tol_factor * lambda_max;
    let kept: Vec<usize> = (0..count).filter(|&i| vals[i] > threshold).collect();
    let mut coeff = Array2::zeros((count, kept.len()));
    for (out_col, &i) in kept.iter().enumerate() {
        let scale = 1.0 / vals[i].sqrt();
        for r in 0..count {
            coeff[(r, out_col)] = vecs[(r, i)] * scale;
        }
    }
    Ok(vectors.dot(&coeff))
}

/// Orthogonal projector onto the column span of `vectors`.
pub fn projector_onto_span(vectors: &ArrayView2<f64>, rank_tol_factor: f64) -> Result<Array2<f64>> {
    let b = orthonormal_span(vectors, rank_tol_factor)?;
    Ok(b.dot(&b.t()))
}

pub fn frobenius_norm(m: &ArrayView2<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs(m: &ArrayView2<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Rank of a projector-like matrix, read off its trace.
pub fn projector_rank(p: &ArrayView2<f64>) -> usize {
    let trace: f64 = (0..p.nrows().min(p.ncols())).map(|i| p[(i, i)]).sum();
    trace.round().max(0.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn eigen_of_small_symmetric() {
        let a = array![[2.0, 1.0], [1.0, 2.0]];
        let (vals, vecs) = sym_eigen(&a.view()).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        // reconstruct
        let recon = vecs.dot(&Array2::from_diag(&vals)).dot(&vecs.t());
        assert!(max_abs(&(&recon - &a).view()) < 1e-12);
    }

    #[test]
    fn eigen_reconstructs_random_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 5, 16, 33] {
            let mut a = Array2::zeros((n, n));
            for i in 0..n {
                for j in 0..=i {
                    let x = rng.random_range(-1.0..1.0f64);
                    a[(i, j)] = x;
                    a[(j, i)] = x;
                }
            }
            let (vals, vecs) = sym_eigen(&a.view()).unwrap();
            let recon = vecs.dot(&Array2::from_diag(&vals)).dot(&vecs.t());
            assert!(max_abs(&(&recon - &a).view()) < 1e-10, "n = {n}");
            let gram = vecs.t().dot(&vecs);
            let eye = Array2::<f64>::eye(n);
            assert!(max_abs(&(&gram - &eye).view()) < 1e-10);
            for w in vals.as_slice().unwrap().windows(2) {
                assert!(w[0] <= w[1] + 1e-14);
            }
        }
    }

    #[test]
    fn spectral_norm_examples() {
        let cfg = SpectralConfig::default();
        // rank-1 u v^T has norm |u||v|
        let u = array![[1.0], [2.0], [2.0]];
        let v = array![[3.0, 4.0]];
        let m = u.dot(&v);
        let norm = spectral_norm(&m.view(), &cfg).unwrap();
        assert!((norm - 15.0).abs() < 1e-9);
        // orthogonal projector has norm 1
        let p = array![[0.5, 0.5], [0.5, 0.5]];
        assert!((spectral_norm(&p.view(), &cfg).unwrap() - 1.0).abs() < 1e-12);
        // permutation
        let s = array![[0.0, 1.0], [1.0, 0.0]];
        assert!((spectral_norm(&s.view(), &cfg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_iteration_agrees_with_dense_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut m = Array2::zeros((12, 7));
        for x in m.iter_mut() {
            *x = rng.random_range(-1.0..1.0f64);
        }
        let dense = SpectralConfig::default();
        let power = SpectralConfig { dense_cutoff: 1, ..Default::default() };
        let a = spectral_norm(&m.view(), &dense).unwrap();
        let b = spectral_norm(&m.view(), &power).unwrap();
        assert!((a - b).abs() <= 1e-7 * a.max(1.0), "dense {a} vs power {b}");
    }

    #[test]
    fn orthonormal_span_handles_rank_deficiency() {
        // three coplanar vectors in R^3
        let v = array![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]];
        let b = orthonormal_span(&v.view(), 1e-10).unwrap();
        assert_eq!(b.ncols(), 2);
        let gram = b.t().dot(&b);
        assert!(max_abs(&(&gram - &Array2::<f64>::eye(2)).view()) < 1e-12);
        let p = projector_onto_span(&v.view(), 1e-10).unwrap();
        assert!(max_abs(&(&p.dot(&p) - &p).view()) < 1e-12);
        assert_eq!(projector_rank(&p.view()), 2);
    }

    #[test]
    fn top_singular_triple_consistency() {
        let m = array![[3.0, 0.0], [0.0, 1.0], [0.0, 0.0]];
        let cfg = SpectralConfig::default();
        let (sigma, u, v) = top_singular_triple(&m.view(), &cfg).unwrap();
        assert!((sigma - 3.0).abs() < 1e-12);
        assert!((u[0].abs() - 1.0).abs() < 1e-12);
        assert!((v[0].abs() - 1.0).abs() < 1e-12);
    }
}
