//! Dense symmetric-definite generalized eigensolver for pencils (A, B).
//!
//! The standard path takes B symmetric positive definite: Cholesky B = LLᵀ,
//! congruence C = L⁻¹AL⁻ᵀ, Householder tridiagonalization, implicit-shift QL
//! iteration, back-transform. The semidefinite path handles pencils whose
//! right-hand matrix has a kernel (buckling and Steklov-type operators) by
//! deflating the common kernel and statically condensing the remaining
//! kernel directions (Schur complement of A), which leaves an equivalent
//! problem on the B-nondegenerate subspace.
//!
//! The solver is sign-agnostic on A's spectrum; only B-side definiteness is
//! structural.

use crate::linalg::{axpy, dot, norm2, Cholesky, LinalgError, Mat};
use crate::model::Spectrum;
use thiserror::Error;

/// Iteration cap per eigenvalue in the QL stage.
const MAX_QL_ITER: usize = 50;

/// Relative threshold below which singular directions of the right-hand
/// matrix are treated as kernel: n·ε·λ_max(B).
pub fn rank_tolerance(n: usize, max_eig: f64) -> f64 {
    n as f64 * f64::EPSILON * max_eig
}

#[derive(Debug, Clone, Error)]
pub enum EigError {
    #[error("right-hand matrix not positive definite: {0}")]
    NotSpd(LinalgError),
    #[error("QL iteration failed to converge for eigenvalue index {0}")]
    NoConvergence(usize),
    #[error("rank detection ambiguous: {0}")]
    RankDetectionAmbiguous(String),
    #[error("left-hand matrix is singular on the kernel of the right-hand matrix: {0}")]
    IndefiniteOnKernel(String),
    #[error("dimension mismatch: A is {0}x{0}, B is {1}x{1}")]
    Dimension(usize, usize),
}

/// How the right-hand matrix of the pencil is to be treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PencilKind {
    /// B symmetric positive definite (a mass matrix).
    StandardMass,
    /// B symmetric positive semidefinite with nontrivial kernel.
    SemidefiniteRhs,
}

/// A generalized symmetric eigenproblem A v = λ B v.
#[derive(Debug, Clone)]
pub struct PencilProblem {
    pub a: Mat,
    pub b: Mat,
    pub kind: PencilKind,
    /// Number of smallest eigenpairs wanted; 0 means all available.
    pub k_wanted: usize,
    pub tol: f64,
}

impl PencilProblem {
    pub fn standard(a: Mat, b: Mat, k_wanted: usize) -> Self {
        PencilProblem { a, b, kind: PencilKind::StandardMass, k_wanted, tol: 1e-10 }
    }

    pub fn semidefinite(a: Mat, b: Mat, k_wanted: usize) -> Self {
        PencilProblem { a, b, kind: PencilKind::SemidefiniteRhs, k_wanted, tol: 1e-10 }
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form, with
/// accumulation of the orthogonal transformation.
///
/// Returns (d, e, z): diagonal, subdiagonal (e[0] unused), and the matrix
/// whose columns carry the accumulated transform.
fn tridiagonalize(a: &Mat, accumulate: bool) -> (Vec<f64>, Vec<f64>, Mat) {
    let n = a.n_rows();
    let mut a = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    a[(i, k)] /= scale;
                    h += a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    if accumulate {
                        a[(j, i)] = a[(i, j)] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[(j, k)] * a[(i, k)];
                    }
                    for k in j + 1..=l {
                        g += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    e[j] -= hh * f;
                    let g = e[j];
                    for k in 0..=j {
                        a[(j, k)] -= f * e[k] + g * a[(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;

    if accumulate {
        for i in 0..n {
            if i > 0 && d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += a[(i, k)] * a[(k, j)];
                    }
                    for k in 0..i {
                        let delta = g * a[(k, i)];
                        a[(k, j)] -= delta;
                    }
                }
            }
            d[i] = a[(i, i)];
            a[(i, i)] = 1.0;
            for j in 0..i {
                a[(j, i)] = 0.0;
                a[(i, j)] = 0.0;
            }
        }
        (d, e, a)
    } else {
        for i in 0..n {
            d[i] = a[(i, i)];
        }
        (d, e, Mat::zeros(0, 0))
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix, rotating
/// the columns of `z` along (pass an empty matrix to skip accumulation).
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut Mat) -> Result<(), EigError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let accumulate = z.n_rows() > 0;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(EigError::NoConvergence(l));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if accumulate {
                    for k in 0..z.n_rows() {
                        f = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * f;
                        z[(k, i)] = c * z[(k, i)] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues and eigenvectors of a dense symmetric matrix, ascending.
pub fn symmetric_eig(a: &Mat) -> Result<(Vec<f64>, Mat), EigError> {
    let n = a.n_rows();
    let (mut d, mut e, mut z) = tridiagonalize(a, true);
    ql_implicit(&mut d, &mut e, &mut z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vecs = Mat::from_fn(n, n, |i, j| z[(i, order[j])]);
    Ok((vals, vecs))
}

/// Eigenvalues only, ascending.
pub fn symmetric_eigvals(a: &Mat) -> Result<Vec<f64>, EigError> {
    let (mut d, mut e, mut z) = tridiagonalize(a, false);
    ql_implicit(&mut d, &mut e, &mut z)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(d)
}

fn pencil_residual(a: &Mat, b: &Mat, lambda: f64, v: &[f64]) -> f64 {
    let mut r = a.matvec(v);
    let bv = b.matvec(v);
    axpy(&mut r, -lambda, &bv);
    norm2(&r)
}

/// Solve A v = λ B v with B SPD, returning the smallest `k_wanted` pairs.
pub fn solve_gevp(p: &PencilProblem) -> Result<Spectrum, EigError> {
    let n = p.a.n_rows();
    if p.b.n_rows() != n || !p.a.is_square() || !p.b.is_square() {
        return Err(EigError::Dimension(n, p.b.n_rows()));
    }
    let chol = Cholesky::new(&p.b).map_err(EigError::NotSpd)?;
    let c = chol.whiten(&p.a);
    let (vals, vecs) = symmetric_eig(&c)?;

    let keep = if p.k_wanted == 0 { n } else { p.k_wanted.min(n) };
    let mut eigenvalues = Vec::with_capacity(keep);
    let mut eigenvectors = Vec::with_capacity(keep);
    let mut residual_norms = Vec::with_capacity(keep);
    for j in 0..keep {
        let y: Vec<f64> = (0..n).map(|i| vecs[(i, j)]).collect();
        let x = chol.solve_lower_transpose(&y);
        residual_norms.push(pencil_residual(&p.a, &p.b, vals[j], &x));
        eigenvalues.push(vals[j]);
        eigenvectors.push(x);
    }
    Ok(Spectrum { eigenvalues, eigenvectors, residual_norms, mesh_size: 0.0, dof_count: n })
}

/// Eigenvalues only for the SPD-mass pencil; cheaper for sweeps.
pub fn solve_gevp_values(a: &Mat, b: &Mat, k_wanted: usize) -> Result<Vec<f64>, EigError> {
    let chol = Cholesky::new(b).map_err(EigError::NotSpd)?;
    let c = chol.whiten(a);
    let vals = symmetric_eigvals(&c)?;
    let keep = if k_wanted == 0 { vals.len() } else { k_wanted.min(vals.len()) };
    Ok(vals[..keep].to_vec())
}

/// Solve A v = η B v where B is symmetric positive semidefinite.
///
/// Directions in ker B ∩ ker A carry no spectral information and are
/// deflated. The remaining kernel directions are condensed by the Schur
/// complement of A, which must be invertible there; the finite eigenvalues
/// of the reduced problem are returned in ascending order, with eigenvectors
/// lifted back to the full space (B-orthonormal on the reduced subspace).
pub fn solve_semidefinite_pencil(p: &PencilProblem) -> Result<Spectrum, EigError> {
    let n = p.a.n_rows();
    if p.b.n_rows() != n {
        return Err(EigError::Dimension(n, p.b.n_rows()));
    }
    let (b_vals, b_vecs) = symmetric_eig(&p.b)?;
    let max_eig = b_vals.last().copied().unwrap_or(0.0).max(0.0);
    if max_eig <= 0.0 || !max_eig.is_finite() {
        return Err(EigError::RankDetectionAmbiguous(
            "right-hand matrix has no positive spectrum".into(),
        ));
    }
    let tol = rank_tolerance(n, max_eig);
    // Significantly negative directions mean B is not psd at all.
    if b_vals[0] < -1e3 * tol {
        return Err(EigError::RankDetectionAmbiguous(format!(
            "right-hand matrix has negative eigenvalue {:.3e}",
            b_vals[0]
        )));
    }
    let kept: Vec<usize> = (0..n).filter(|&i| b_vals[i] > tol).collect();
    let kernel: Vec<usize> = (0..n).filter(|&i| b_vals[i] <= tol).collect();
    if kept.is_empty() {
        return Err(EigError::RankDetectionAmbiguous("right-hand matrix is numerically zero".into()));
    }
    // No clear spectral gap at the cut: refuse to guess.
    let smallest_kept = kept.iter().map(|&i| b_vals[i]).fold(f64::INFINITY, f64::min);
    let largest_dropped = kernel.iter().map(|&i| b_vals[i].abs()).fold(0.0f64, f64::max);
    if largest_dropped > 0.0 && smallest_kept / largest_dropped.max(tol * 1e-6) < 10.0 {
        return Err(EigError::RankDetectionAmbiguous(format!(
            "no spectral gap at the rank cut: kept {smallest_kept:.3e}, dropped {largest_dropped:.3e}"
        )));
    }

    // W: range directions scaled so WᵀBW = I. N: kernel directions.
    let w = Mat::from_fn(n, kept.len(), |i, j| b_vecs[(i, kept[j])] / b_vals[kept[j]].sqrt());
    let reduced = if kernel.is_empty() {
        p.a.congruence(&w)
    } else {
        let nmat = Mat::from_fn(n, kernel.len(), |i, j| b_vecs[(i, kernel[j])]);
        let k_block = p.a.congruence(&nmat);
        let (k_vals, k_vecs) = symmetric_eig(&k_block)?;
        let a_scale = p.a.max_abs().max(1.0);
        let kernel_zero_tol = n as f64 * f64::EPSILON * a_scale * 64.0;
        // Split ker B into the common kernel (deflated) and the invertible rest.
        let live: Vec<usize> = (0..kernel.len()).filter(|&i| k_vals[i].abs() > kernel_zero_tol).collect();
        if live.iter().any(|&i| k_vals[i].abs() < 1e3 * kernel_zero_tol) {
            return Err(EigError::IndefiniteOnKernel(format!(
                "kernel-block eigenvalue near the deflation threshold (tol {kernel_zero_tol:.3e})"
            )));
        }
        if live.is_empty() {
            p.a.congruence(&w)
        } else {
            // n2 = N U_live: basis of the condensed kernel directions.
            let n2 = Mat::from_fn(n, live.len(), |i, j| {
                (0..kernel.len()).map(|r| nmat[(i, r)] * k_vecs[(r, live[j])]).sum()
            });
            // Coupling G = N2ᵀ A W, Schur complement A' = WᵀAW − Gᵀ K₂⁻¹ G
            // with K₂ diagonal in this basis.
            let m = kept.len();
            let aw = {
                let mut aw = Mat::zeros(n, m);
                for i in 0..n {
                    let row = p.a.row(i);
                    for k in 0..n {
                        let v = row[k];
                        if v != 0.0 {
                            for j in 0..m {
                                aw[(i, j)] += v * w[(k, j)];
                            }
                        }
                    }
                }
                aw
            };
            let mut g = Mat::zeros(live.len(), m);
            for r in 0..live.len() {
                for j in 0..m {
                    let mut s = 0.0;
                    for i in 0..n {
                        s += n2[(i, r)] * aw[(i, j)];
                    }
                    g[(r, j)] = s;
                }
            }
            let mut reduced = p.a.congruence(&w);
            for r in 0..live.len() {
                let inv_k = 1.0 / k_vals[live[r]];
                for i in 0..m {
                    for j in 0..m {
                        reduced[(i, j)] -= g[(r, i)] * inv_k * g[(r, j)];
                    }
                }
            }
            reduced.symmetrize();
            // Eigenvectors need the kernel correction z = −K₂⁻¹ G y.
            let (vals, vecs) = symmetric_eig(&reduced)?;
            return assemble_semidefinite_spectrum(p, &w, Some((&n2, &g, &k_vals, &live)), vals, vecs);
        }
    };
    let (vals, vecs) = symmetric_eig(&reduced)?;
    assemble_semidefinite_spectrum(p, &w, None, vals, vecs)
}

#[allow(clippy::type_complexity)]
fn assemble_semidefinite_spectrum(
    p: &PencilProblem,
    w: &Mat,
    condensation: Option<(&Mat, &Mat, &[f64], &[usize])>,
    vals: Vec<f64>,
    vecs: Mat,
) -> Result<Spectrum, EigError> {
    let n = p.a.n_rows();
    let m = w.n_cols();
    let keep = if p.k_wanted == 0 { m } else { p.k_wanted.min(m) };
    let mut eigenvalues = Vec::with_capacity(keep);
    let mut eigenvectors = Vec::with_capacity(keep);
    let mut residual_norms = Vec::with_capacity(keep);
    for j in 0..keep {
        let y: Vec<f64> = (0..m).map(|i| vecs[(i, j)]).collect();
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[i] = dot(w.row(i), &y);
        }
        if let Some((n2, g, k_vals, live)) = condensation {
            for r in 0..live.len() {
                let gy = dot(g.row(r), &y);
                let z = -gy / k_vals[live[r]];
                for i in 0..n {
                    x[i] += z * n2[(i, r)];
                }
            }
        }
        residual_norms.push(pencil_residual(&p.a, &p.b, vals[j], &x));
        eigenvalues.push(vals[j]);
        eigenvectors.push(x);
    }
    Ok(Spectrum { eigenvalues, eigenvectors, residual_norms, mesh_size: 0.0, dof_count: m })
}
