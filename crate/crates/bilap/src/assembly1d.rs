//! C¹ Hermite-cubic assembly of the energy form and L² mass on an interval,
//! with constraint masks realizing the four boundary regimes.
//!
//! All element integrands are polynomials; each term is integrated with the
//! Gauss rule that is exact for its degree. Boundary contributions are
//! rank-one updates on the endpoint dofs, so no boundary quadrature exists
//! in one dimension. Constraints are applied by dof elimination (row and
//! column deletion), never by penalty, so the reduced pencil stays
//! symmetric definite and parameter monotonicity is exact on a fixed mesh.

use crate::hermite;
use crate::linalg::Mat;
use crate::model::{regime_of, validate, BoundaryRegime, DomainSpec, ModelError, ParamSet};
use crate::quad::{gauss_legendre, points_for_degree};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum AssemblyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("mesh too coarse: {0} elements")]
    MeshTooCoarse(usize),
    #[error("zero vector passed to Rayleigh quotient")]
    ZeroVector,
}

/// Where a degree of freedom lives and what it represents.
#[derive(Debug, Clone)]
pub enum BasisMeta {
    /// 1-D Hermite line: dofs (value, slope) per node.
    Line { nodes: Vec<f64> },
    /// Tensor BFS grid: dofs (u, u_x, u_y, u_xy) per node, x fastest.
    Grid { xs: Vec<f64>, ys: Vec<f64> },
    /// Radial Hermite line for one angular index.
    Radial { nodes: Vec<f64>, mode: usize },
}

/// Discrete realization of the energy form: the assembled pencil plus the
/// individual operators needed by the Steklov and buckling pencils.
///
/// All matrices are reduced to the free dofs of the regime, and share that
/// dimension. `hessian` is the σ-weighted second-order energy (the
/// α = β = γ = 0 part of A), `grad_l` the gradient stiffness, `bdry_t` the
/// boundary mass of the normal derivative, `bdry_m` the boundary trace mass:
/// A = hessian + α·grad_l + β·bdry_t + γ·bdry_m with infinite parameters
/// contributing zero weight (their dofs are eliminated instead).
#[derive(Debug, Clone)]
pub struct DiscreteForm {
    pub a: Mat,
    pub b: Mat,
    pub hessian: Mat,
    pub grad_l: Mat,
    pub bdry_t: Mat,
    pub bdry_m: Mat,
    /// Indices of the retained dofs in the full numbering.
    pub free_dofs: Vec<usize>,
    pub basis: BasisMeta,
    pub params: ParamSet,
    pub regime: BoundaryRegime,
    pub mesh_size: f64,
}

impl DiscreteForm {
    pub fn n_dofs(&self) -> usize {
        self.a.n_rows()
    }

    /// (vᵀAv)/(vᵀBv) on the free dofs.
    pub fn rayleigh(&self, v: &[f64]) -> Result<f64, AssemblyError> {
        assert_eq!(v.len(), self.n_dofs());
        let bv = self.b.matvec(v);
        let den: f64 = v.iter().zip(&bv).map(|(x, y)| x * y).sum();
        if den <= 0.0 {
            return Err(AssemblyError::ZeroVector);
        }
        let av = self.a.matvec(v);
        let num: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        Ok(num / den)
    }

    /// Restrict a full-numbering coefficient vector to the free dofs.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.free_dofs.iter().map(|&i| full[i]).collect()
    }
}

/// 1-D mesh as a strictly increasing list of node coordinates.
#[derive(Debug, Clone)]
pub struct Mesh1d {
    pub nodes: Vec<f64>,
}

impl Mesh1d {
    pub fn uniform(a: f64, b: f64, n_elems: usize) -> Self {
        assert!(n_elems >= 1 && b > a);
        let h = (b - a) / n_elems as f64;
        Mesh1d { nodes: (0..=n_elems).map(|i| a + h * i as f64).collect() }
    }

    /// Mesh refined geometrically towards both endpoints: first element of
    /// size `h_boundary`, growing by `ratio` until `h_interior` is reached,
    /// uniform in between. Used when boundary layers of width ~1/t develop.
    pub fn boundary_refined(a: f64, b: f64, h_interior: f64, h_boundary: f64, ratio: f64) -> Self {
        assert!(b > a && ratio > 1.0);
        let h_boundary = h_boundary.min(h_interior);
        let mut left = vec![a];
        let mut h = h_boundary;
        while h < h_interior && *left.last().unwrap() + h < 0.5 * (a + b) {
            let next = *left.last().unwrap() + h;
            left.push(next);
            h *= ratio;
        }
        let last_left = *left.last().unwrap();
        let right_start = a + b - last_left;
        let span = right_start - last_left;
        let n_mid = (span / h_interior).ceil().max(1.0) as usize;
        let hm = span / n_mid as f64;
        let mut nodes = left.clone();
        for i in 1..n_mid {
            nodes.push(last_left + hm * i as f64);
        }
        for &x in left.iter().rev() {
            nodes.push(a + b - x);
        }
        nodes.dedup_by(|p, q| (*p - *q).abs() < 1e-15 * (b - a));
        Mesh1d { nodes }
    }

    pub fn n_elems(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn max_h(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// Dof indices in the full numbering: 2i value, 2i+1 slope at node i.
fn value_dof(node: usize) -> usize {
    2 * node
}

fn slope_dof(node: usize) -> usize {
    2 * node + 1
}

/// Assemble the unconstrained form on a given mesh (free_dofs = all).
pub fn assemble_interval_mesh(
    mesh: &Mesh1d,
    params: &ParamSet,
) -> Result<DiscreteForm, AssemblyError> {
    let a_end = mesh.nodes[0];
    let b_end = *mesh.nodes.last().unwrap();
    let domain = DomainSpec::interval(a_end, b_end);
    validate(&domain, params)?;
    if mesh.n_elems() < 2 {
        return Err(AssemblyError::MeshTooCoarse(mesh.n_elems()));
    }

    let n_nodes = mesh.nodes.len();
    let n_dofs = 2 * n_nodes;
    let mut hess = Mat::zeros(n_dofs, n_dofs);
    let mut grad = Mat::zeros(n_dofs, n_dofs);
    let mut mass = Mat::zeros(n_dofs, n_dofs);

    // Exact rules per term: u″v″ has degree 2, u′v′ degree 4, uv degree 6.
    let rule_bend = gauss_legendre(points_for_degree(2));
    let rule_grad = gauss_legendre(points_for_degree(4));
    let rule_mass = gauss_legendre(points_for_degree(6));

    for e in 0..mesh.n_elems() {
        let x0 = mesh.nodes[e];
        let h = mesh.nodes[e + 1] - x0;
        let dofs = [value_dof(e), slope_dof(e), value_dof(e + 1), slope_dof(e + 1)];
        let mut ke = [[0.0; 4]; 4];
        let mut le = [[0.0; 4]; 4];
        let mut me = [[0.0; 4]; 4];
        accumulate_term(&mut ke, &rule_bend, h, |s| hermite::shape_d2(s, h));
        accumulate_term(&mut le, &rule_grad, h, |s| hermite::shape_d1(s, h));
        accumulate_term(&mut me, &rule_mass, h, |s| hermite::shape(s, h));
        for i in 0..4 {
            for j in 0..4 {
                hess[(dofs[i], dofs[j])] += ke[i][j];
                grad[(dofs[i], dofs[j])] += le[i][j];
                mass[(dofs[i], dofs[j])] += me[i][j];
            }
        }
    }

    // Endpoint boundary terms: (∂u/∂ν)(∂v/∂ν) = u′v′ at both ends.
    let mut bdry_t = Mat::zeros(n_dofs, n_dofs);
    let mut bdry_m = Mat::zeros(n_dofs, n_dofs);
    for node in [0, n_nodes - 1] {
        bdry_t[(slope_dof(node), slope_dof(node))] += 1.0;
        bdry_m[(value_dof(node), value_dof(node))] += 1.0;
    }

    let mut a = hess.clone();
    add_scaled(&mut a, params.alpha, &grad);
    add_scaled(&mut a, params.beta.finite_or_zero(), &bdry_t);
    add_scaled(&mut a, params.gamma.finite_or_zero(), &bdry_m);

    Ok(DiscreteForm {
        a,
        b: mass,
        hessian: hess,
        grad_l: grad,
        bdry_t,
        bdry_m,
        free_dofs: (0..n_dofs).collect(),
        basis: BasisMeta::Line { nodes: mesh.nodes.clone() },
        params: *params,
        regime: BoundaryRegime::FullRobin,
        mesh_size: mesh.max_h(),
    })
}

fn accumulate_term(
    out: &mut [[f64; 4]; 4],
    rule: &(Vec<f64>, Vec<f64>),
    h: f64,
    eval: impl Fn(f64) -> [f64; 4],
) {
    for (x, w) in rule.0.iter().zip(&rule.1) {
        let s = 0.5 * (x + 1.0);
        let wx = 0.5 * h * w;
        let n = eval(s);
        for i in 0..4 {
            for j in 0..=i {
                let v = wx * n[i] * n[j];
                out[i][j] += v;
                if i != j {
                    out[j][i] += v;
                }
            }
        }
    }
}

pub(crate) fn add_scaled(target: &mut Mat, coeff: f64, source: &Mat) {
    if coeff == 0.0 {
        return;
    }
    for i in 0..target.n_rows() {
        let ri = source.row(i).to_vec();
        let ti = target.row_mut(i);
        for j in 0..ti.len() {
            ti[j] += coeff * ri[j];
        }
    }
}

/// Eliminate the dofs fixed by the regime: endpoint values for Navier–Robin,
/// endpoint slopes for Kuttler–Sigillito, both for Dirichlet.
pub fn apply_regime(form: &DiscreteForm, regime: BoundaryRegime) -> DiscreteForm {
    let BasisMeta::Line { ref nodes } = form.basis else {
        panic!("apply_regime on a non-line basis");
    };
    let last = nodes.len() - 1;
    let mut fixed = Vec::new();
    match regime {
        BoundaryRegime::FullRobin => {}
        BoundaryRegime::NavierRobin => fixed.extend([value_dof(0), value_dof(last)]),
        BoundaryRegime::KuttlerSigillito => fixed.extend([slope_dof(0), slope_dof(last)]),
        BoundaryRegime::Dirichlet => {
            fixed.extend([value_dof(0), slope_dof(0), value_dof(last), slope_dof(last)])
        }
    }
    reduce_form(form, &fixed, regime)
}

/// Shared elimination: keep every free dof not listed in `fixed`.
pub(crate) fn reduce_form(form: &DiscreteForm, fixed: &[usize], regime: BoundaryRegime) -> DiscreteForm {
    let keep: Vec<usize> = (0..form.free_dofs.len())
        .filter(|&i| !fixed.contains(&form.free_dofs[i]))
        .collect();
    let free_dofs: Vec<usize> = keep.iter().map(|&i| form.free_dofs[i]).collect();
    DiscreteForm {
        a: form.a.principal_submatrix(&keep),
        b: form.b.principal_submatrix(&keep),
        hessian: form.hessian.principal_submatrix(&keep),
        grad_l: form.grad_l.principal_submatrix(&keep),
        bdry_t: form.bdry_t.principal_submatrix(&keep),
        bdry_m: form.bdry_m.principal_submatrix(&keep),
        free_dofs,
        basis: form.basis.clone(),
        params: form.params,
        regime,
        mesh_size: form.mesh_size,
    }
}

/// Assemble on a uniform mesh and apply the regime dictated by the params.
pub fn assemble_interval(
    domain: &DomainSpec,
    params: &ParamSet,
    n_elems: usize,
) -> Result<DiscreteForm, AssemblyError> {
    let DomainSpec::Interval { a, b } = *domain else {
        panic!("assemble_interval needs an interval domain");
    };
    let full = assemble_interval_mesh(&Mesh1d::uniform(a, b, n_elems), params)?;
    Ok(apply_regime(&full, regime_of(params)))
}

/// Same on an explicit (possibly graded) mesh.
pub fn assemble_interval_graded(
    mesh: &Mesh1d,
    params: &ParamSet,
) -> Result<DiscreteForm, AssemblyError> {
    let full = assemble_interval_mesh(mesh, params)?;
    Ok(apply_regime(&full, regime_of(params)))
}

/// Interpolate a smooth function into the full Hermite dof vector, then
/// restrict to the form's free dofs.
pub fn interpolate_1d(form: &DiscreteForm, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Vec<f64> {
    let BasisMeta::Line { ref nodes } = form.basis else {
        panic!("interpolate_1d on a non-line basis");
    };
    let mut full = vec![0.0; 2 * nodes.len()];
    for (i, &x) in nodes.iter().enumerate() {
        full[value_dof(i)] = f(x);
        full[slope_dof(i)] = df(x);
    }
    form.restrict(&full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigsolve::{solve_gevp, PencilProblem};
    use crate::model::ExtReal;

    /// First root of cos k · cosh k = 1 by bisection: the clamped-beam
    /// eigenvalue oracle.
    pub(crate) fn clamped_beam_wavenumber(k_index: usize) -> f64 {
        let f = |k: f64| k.cos() * k.cosh() - 1.0;
        let (mut lo, mut hi) = ((k_index as f64 + 0.3) * std::f64::consts::PI,
                                (k_index as f64 + 0.7) * std::f64::consts::PI);
        assert!(f(lo) * f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn domain01() -> DomainSpec {
        DomainSpec::interval(0.0, 1.0)
    }

    #[test]
    fn free_beam_has_two_zero_modes() {
        let params = ParamSet::finite(0.0, 0.0, 0.0, 0.0);
        let form = assemble_interval(&domain01(), &params, 16).unwrap();
        let s = solve_gevp(&PencilProblem::standard(form.a.clone(), form.b.clone(), 4)).unwrap();
        let scale = form.a.max_abs();
        assert!(s.eigenvalues[0].abs() < 1e-10 * scale);
        assert!(s.eigenvalues[1].abs() < 1e-10 * scale);
        assert!(s.eigenvalues[2] > 1.0);
    }

    #[test]
    fn clamped_beam_anchor() {
        let params = ParamSet::new(0.0, 0.0, ExtReal::Infinite, ExtReal::Infinite);
        let form = assemble_interval(&domain01(), &params, 64).unwrap();
        assert_eq!(form.free_dofs.len(), 2 * 65 - 4);
        let s = solve_gevp(&PencilProblem::standard(form.a.clone(), form.b.clone(), 1)).unwrap();
        let k1 = clamped_beam_wavenumber(1);
        let want = k1.powi(4);
        assert!((want - 500.5639).abs() < 1e-3, "oracle sanity: {want}");
        let rel = (s.eigenvalues[0] - want).abs() / want;
        assert!(rel < 1e-6, "clamped λ1 rel err {rel:.3e}");
    }

    #[test]
    fn hinged_beam_sines() {
        // Navier–Robin with β = 0: λ_k = (kπ)⁴.
        let params = ParamSet::new(0.0, 0.0, 0.0, ExtReal::Infinite);
        let form = assemble_interval(&domain01(), &params, 64).unwrap();
        let s = solve_gevp(&PencilProblem::standard(form.a.clone(), form.b.clone(), 3)).unwrap();
        for k in 1..=3usize {
            let want = (k as f64 * std::f64::consts::PI).powi(4);
            let rel = (s.eigenvalues[k - 1] - want).abs() / want;
            assert!(rel < 1e-6, "hinged λ{k} rel err {rel:.3e}");
        }
    }

    #[test]
    fn ks_cosines() {
        // Kuttler–Sigillito with γ = 0: spectrum {0, π⁴, (2π)⁴, …}.
        let params = ParamSet::new(0.0, 0.0, ExtReal::Infinite, 0.0);
        let form = assemble_interval(&domain01(), &params, 64).unwrap();
        let s = solve_gevp(&PencilProblem::standard(form.a.clone(), form.b.clone(), 3)).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-12 * form.a.max_abs());
        for k in 1..=2usize {
            let want = (k as f64 * std::f64::consts::PI).powi(4);
            let rel = (s.eigenvalues[k] - want).abs() / want;
            assert!(rel < 1e-6, "KS λ{} rel err {rel:.3e}", k + 1);
        }
    }

    #[test]
    fn regime_dof_counts() {
        let params = ParamSet::finite(0.0, 0.0, 1.0, 1.0);
        let full = assemble_interval_mesh(&Mesh1d::uniform(0.0, 1.0, 8), &params).unwrap();
        let n = full.free_dofs.len();
        assert_eq!(apply_regime(&full, BoundaryRegime::FullRobin).free_dofs.len(), n);
        assert_eq!(apply_regime(&full, BoundaryRegime::NavierRobin).free_dofs.len(), n - 2);
        assert_eq!(apply_regime(&full, BoundaryRegime::KuttlerSigillito).free_dofs.len(), n - 2);
        assert_eq!(apply_regime(&full, BoundaryRegime::Dirichlet).free_dofs.len(), n - 4);
    }

    #[test]
    fn rayleigh_quotient_basics() {
        let params = ParamSet::finite(0.0, 0.0, 0.0, 0.0);
        let form = assemble_interval(&domain01(), &params, 16).unwrap();
        // Discrete constant: kernel vector, Rayleigh 0.
        let c = interpolate_1d(&form, |_| 1.0, |_| 0.0);
        let r = form.rayleigh(&c).unwrap();
        assert!(r.abs() < 1e-12);
        // Any vector sits above λ1 (here λ1 = 0).
        let v = interpolate_1d(&form, |x| x * x, |x| 2.0 * x);
        assert!(form.rayleigh(&v).unwrap() >= -1e-12);
        // Zero vector rejected.
        assert!(form.rayleigh(&vec![0.0; form.n_dofs()]).is_err());
    }

    #[test]
    fn monotone_in_each_parameter() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..12 {
            let base = ParamSet::finite(
                0.0,
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            );
            let bump = rng.gen_range(0.1..2.0);
            let axis = rng.gen_range(0..3);
            let bumped = match axis {
                0 => base.with_alpha(base.alpha + bump),
                1 => base.with_beta(base.beta.finite_or_zero() + bump),
                _ => base.with_gamma(base.gamma.finite_or_zero() + bump),
            };
            let f0 = assemble_interval(&domain01(), &base, 24).unwrap();
            let f1 = assemble_interval(&domain01(), &bumped, 24).unwrap();
            let s0 = solve_gevp(&PencilProblem::standard(f0.a, f0.b, 5)).unwrap();
            let s1 = solve_gevp(&PencilProblem::standard(f1.a, f1.b, 5)).unwrap();
            let scale = s0.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for k in 0..5 {
                assert!(
                    s1.eigenvalues[k] >= s0.eigenvalues[k] - 1e-9 * scale,
                    "axis {axis} λ{k} decreased: {} -> {}",
                    s0.eigenvalues[k],
                    s1.eigenvalues[k]
                );
            }
        }
    }

    #[test]
    fn h_convergence_order_on_clamped_beam() {
        let params = ParamSet::new(0.0, 0.0, ExtReal::Infinite, ExtReal::Infinite);
        let want = clamped_beam_wavenumber(1).powi(4);
        let errs: Vec<f64> = [8usize, 16, 32]
            .iter()
            .map(|&n| {
                let f = assemble_interval(&domain01(), &params, n).unwrap();
                let s = solve_gevp(&PencilProblem::standard(f.a, f.b, 1)).unwrap();
                (s.eigenvalues[0] - want).abs()
            })
            .collect();
        let order1 = (errs[0] / errs[1]).log2();
        let order2 = (errs[1] / errs[2]).log2();
        assert!(order1 > 3.5 && order2 > 3.5, "orders {order1:.2}, {order2:.2}");
    }

    #[test]
    fn sigma_ignored_in_1d() {
        let p0 = ParamSet::finite(0.0, 0.5, 1.0, 2.0);
        let p1 = ParamSet::finite(0.7, 0.5, 1.0, 2.0);
        let f0 = assemble_interval(&domain01(), &p0, 8).unwrap();
        let f1 = assemble_interval(&domain01(), &p1, 8).unwrap();
        let mut diff = 0.0f64;
        for i in 0..f0.a.n_rows() {
            for j in 0..f0.a.n_cols() {
                diff = diff.max((f0.a[(i, j)] - f1.a[(i, j)]).abs());
            }
        }
        assert_eq!(diff, 0.0);
    }

    #[test]
    fn boundary_refined_mesh_is_sane() {
        let m = Mesh1d::boundary_refined(0.0, 1.0, 0.05, 0.002, 1.4);
        assert!(m.nodes.windows(2).all(|w| w[1] > w[0]));
        assert!((m.nodes[0] - 0.0).abs() < 1e-15);
        assert!((m.nodes.last().unwrap() - 1.0).abs() < 1e-12);
        assert!(m.nodes[1] - m.nodes[0] <= 0.002 + 1e-12);
        // symmetric-ish: last element also small
        let n = m.nodes.len();
        assert!(m.nodes[n - 1] - m.nodes[n - 2] <= 0.002 + 1e-12);
    }
}
