//! The linearized Willmore operator at `ω`, the linearized conformality
//! conditions, the frame decomposition of their solutions and a discrete
//! version of the kernel classification.

use super::omega::{grad_omega_sq, omega_chart};
use crate::background::CurvatureBackground;
use crate::error::{Error, Result};
use crate::immersion::fd::Stencil;
use crate::immersion::{quadrature_weights, Blend, Chart, ChartGrid, ScalarField};
use crate::jet::Jet;
use crate::real::{cross, dot, Real, V3};
use crate::sphharm::{modes, real_harmonics};
use nalgebra::DMatrix;
use rayon::prelude::*;

/// `ψ_0 = (1−r²)/(1+r²)`, `ψ_i = x_i/(1+r²)`, in the order `[ψ_0, ψ_1, ψ_2]`.
pub fn psi_basis(z: [f64; 2]) -> [f64; 3] {
    let q = 1.0 + z[0] * z[0] + z[1] * z[1];
    [(2.0 - q) / q, z[0] / q, z[1] / q]
}

/// Jet version of [`psi_basis`].
pub fn psi_jets(z: [f64; 2]) -> [Jet; 3] {
    let (x, y) = (Jet::var_x(z[0]), Jet::var_y(z[1]));
    let inv = (x * x + y * y + 1.0).recip();
    [(-(x * x) - y * y + 1.0) * inv, x * inv, y * inv]
}

/// Closed-form image of the corrector under `L_ω`:
/// `(−Ric(ω,ω) + ratio/2 + Scal/6)|∇ω|²`.
pub fn corrector_rhs(bg: &CurvatureBackground, ratio: f64, z: [f64; 2]) -> f64 {
    let w = Chart::North.to_sphere(z);
    let mut rww = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            rww += bg.ric[a][b] * w[a] * w[b];
        }
    }
    (-rww + 0.5 * ratio + bg.scal / 6.0) * grad_omega_sq(z)
}

/// `(⟨Δρ, ω⟩ + 2⟨∇ω, ∇ρ⟩)/|∇ω|²` from exact derivatives of `ρ`.
pub fn inner_exact(c: Chart, z: [f64; 2], rho: &[Jet; 3]) -> f64 {
    let w = omega_chart(c, z);
    let mut num = 0.0;
    let mut g2 = 0.0;
    for a in 0..3 {
        let wv = w[a].deriv(0, 0);
        let (wx, wy) = (w[a].deriv(1, 0), w[a].deriv(0, 1));
        num += rho[a].laplacian() * wv + 2.0 * (wx * rho[a].deriv(1, 0) + wy * rho[a].deriv(0, 1));
        g2 += wx * wx + wy * wy;
    }
    num / g2
}

/// Samples of a vector field on one chart grid.
fn sample<F>(g: &ChartGrid, c: Chart, rho: &F) -> Vec<[f64; 3]>
where
    F: Fn(Chart, [f64; 2]) -> [f64; 3] + Sync,
{
    (0..g.len()).into_par_iter().map(|k| rho(c, g.z(k))).collect()
}

fn component(v: &[[f64; 3]], a: usize) -> Vec<f64> {
    v.iter().map(|p| p[a]).collect()
}

/// `L_ω ρ` with both Laplacians by finite differences from samples of `ρ`
/// (`ω` itself is exact). Nodes outside the reach of the nested stencils
/// hold NaN.
pub fn l_omega_apply_grid<F>(n: usize, order: usize, rho: F) -> Result<ScalarField>
where
    F: Fn(Chart, [f64; 2]) -> [f64; 3] + Sync,
{
    let g = ChartGrid::new(n);
    let st = Stencil::new(order)?;
    let per = |c: Chart| -> Vec<f64> {
        let data = sample(&g, c, &rho);
        let mut num = vec![0.0; g.len()];
        for a in 0..3 {
            let f = component(&data, a);
            let lap = st.laplacian(&g, &f);
            let fx = st.dx(&g, &f);
            let fy = st.dy(&g, &f);
            for k in 0..g.len() {
                let w = omega_chart(c, g.z(k));
                num[k] += lap[k] * w[a].deriv(0, 0) + 2.0 * (w[a].deriv(1, 0) * fx[k] + w[a].deriv(0, 1) * fy[k]);
            }
        }
        let q: Vec<f64> = (0..g.len()).map(|k| num[k] / grad_omega_sq(g.z(k))).collect();
        st.laplacian(&g, &q).into_iter().map(|v| -v).collect()
    };
    Ok(ScalarField::new(g, per(Chart::North), per(Chart::South)))
}

/// `L_ω ρ` with the inner expression from exact derivatives and one finite
/// difference Laplacian.
pub fn l_omega_apply_exact_inner<F>(n: usize, order: usize, rho: F) -> Result<ScalarField>
where
    F: Fn(Chart, [f64; 2]) -> [Jet; 3] + Sync,
{
    let g = ChartGrid::new(n);
    let st = Stencil::new(order)?;
    let per = |c: Chart| -> Vec<f64> {
        let q: Vec<f64> = (0..g.len())
            .into_par_iter()
            .map(|k| {
                let z = g.z(k);
                inner_exact(c, z, &rho(c, z))
            })
            .collect();
        st.laplacian(&g, &q).into_iter().map(|v| -v).collect()
    };
    Ok(ScalarField::new(g, per(Chart::North), per(Chart::South)))
}

/// Linearized conformality `(⟨ω_x,ρ_x⟩ − ⟨ω_y,ρ_y⟩, ⟨ω_x,ρ_y⟩ + ⟨ω_y,ρ_x⟩)`.
pub fn linearized_conformality(c: Chart, z: [f64; 2], rho: &[Jet; 3]) -> (f64, f64) {
    let w = omega_chart(c, z);
    let (mut e, mut f) = (0.0, 0.0);
    for a in 0..3 {
        let (wx, wy) = (w[a].deriv(1, 0), w[a].deriv(0, 1));
        let (rx, ry) = (rho[a].deriv(1, 0), rho[a].deriv(0, 1));
        e += wx * rx - wy * ry;
        f += wx * ry + wy * rx;
    }
    (e, f)
}

/// Coefficients of `ρ_x = aω_x + bω_y + cω`, `ρ_y = −b'ω_x + a'ω_y + dω`
/// at one point, with the residuals of the first order system they obey.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// `|a − a'| + |b − b'|`, zero exactly when the linearized conformality
    /// conditions hold.
    pub consistency: f64,
    /// `a_y + b_x − d`.
    pub de1: f64,
    /// `b_y − a_x + c`.
    pub de2: f64,
    /// `Δa + a|∇ω|²`.
    pub eigen_a: f64,
    /// `Δb + b|∇ω|²`.
    pub eigen_b: f64,
}

/// Smallest `|det|` of the frame `(ω_x, ω_y, ω)` accepted by
/// [`kernel_decompose`], relative to `|ω_x||ω_y|`.
const FRAME_TOL: f64 = 1e-10;

fn solve_frame<T: Real>(f: &[V3<T>; 3], v: &V3<T>) -> Option<[T; 3]> {
    let det = dot(&f[0], &cross(&f[1], &f[2]));
    let scale = dot(&f[0], &f[0]).sqrt().value() * dot(&f[1], &f[1]).sqrt().value();
    if det.value().abs() <= FRAME_TOL * scale {
        return None;
    }
    let inv = det.recip();
    Some([dot(v, &cross(&f[1], &f[2])) * inv, dot(&f[0], &cross(v, &f[2])) * inv, dot(&f[0], &cross(&f[1], v)) * inv])
}

/// Pointwise frame decomposition of `ρ` (given as jets about `z` on the
/// north chart). The coefficient functions are themselves jets, so the
/// residuals of the differential system are exact.
pub fn kernel_decompose(z: [f64; 2], rho: &[Jet; 3]) -> Result<Decomposition> {
    let w = omega_chart(Chart::North, z);
    let frame = [[w[0].dx(), w[1].dx(), w[2].dx()], [w[0].dy(), w[1].dy(), w[2].dy()], w];
    let rx = [rho[0].dx(), rho[1].dx(), rho[2].dx()];
    let ry = [rho[0].dy(), rho[1].dy(), rho[2].dy()];
    let bad = || Error::Singular(format!("frame (ω_x, ω_y, ω) is ill conditioned at z = {z:?}"));
    let [a, b, c] = solve_frame(&frame, &rx).ok_or_else(bad)?;
    let [mb, a2, d] = solve_frame(&frame, &ry).ok_or_else(bad)?;
    let g2 = grad_omega_sq(z);
    let at = |j: &Jet| j.deriv(0, 0);
    Ok(Decomposition {
        a: at(&a),
        b: at(&b),
        c: at(&c),
        d: at(&d),
        consistency: (at(&a) - at(&a2)).abs() + (at(&b) + at(&mb)).abs(),
        de1: a.deriv(0, 1) + b.deriv(1, 0) - at(&d),
        de2: b.deriv(0, 1) - a.deriv(1, 0) + at(&c),
        eigen_a: a.laplacian() + at(&a) * g2,
        eigen_b: b.laplacian() + at(&b) * g2,
    })
}

/// Outcome of the discrete kernel classification.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub n: usize,
    /// Degrees of the harmonic basis.
    pub lmin: usize,
    pub lmax: usize,
    /// Singular values of the operator rows alone, ascending.
    pub singular_values: Vec<f64>,
    /// Dimension of the continuous kernel within the basis: the conformal
    /// Killing fields, once constants are excluded.
    pub kernel_dim: usize,
    /// Discretization tolerance: the largest of the `kernel_dim` smallest
    /// singular values, i.e. how far the exact kernel is from solving the
    /// discrete rows.
    pub tau: f64,
    /// First singular value above the kernel; separates kernel from the
    /// rest of the spectrum.
    pub gap: f64,
    /// Smallest singular value once the point normalizations are imposed.
    pub sigma_min: f64,
    /// `‖∇ρ‖_{L²(S²)} ≤ grad_bound` for every admissible `ρ` solving the
    /// discrete system to tolerance `tau`.
    pub grad_bound: f64,
}

impl KernelReport {
    /// The normalizations force `∇ρ ≈ 0`: the bound is at most ten times
    /// the discretization tolerance.
    pub fn passes(&self) -> bool {
        self.grad_bound <= 10.0 * self.tau
    }
}

/// Rows `[L_ω, linc]` and the point normalizations for the basis
/// `e_α Y_lm(ω)`, `lmin ≤ l ≤ lmax`. Columns are scaled to unit
/// `‖∇ρ‖_{L²(S²)}`; rows are weighted so that the sum of squares
/// approximates an `L²(S²)` norm of chart-invariant quantities.
fn kernel_rows(n: usize, order: usize, lmin: usize, lmax: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let g = ChartGrid::new(n);
    let st = Stencil::new(order)?;
    let blend = Blend::default();
    let md = modes(lmin, lmax);
    let ncol = 3 * md.len();
    let col_scale: Vec<f64> = md.iter().map(|(l, _)| 1.0 / ((l * (l + 1)) as f64).sqrt()).collect();
    let basis = |c: Chart, z: [f64; 2]| -> Vec<Jet> {
        let w = omega_chart(c, z);
        let y = real_harmonics(lmax, &w);
        md.iter().map(|(l, m)| y[crate::sphharm::index(*l, *m)]).collect()
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for c in Chart::BOTH {
        let weights = quadrature_weights(&g, &blend, c);
        let nodes: Vec<usize> = (0..g.len()).filter(|k| weights[*k] > 0.0).collect();
        // per node and column: inner expression and the two linc values
        let per_node: Vec<Vec<[f64; 3]>> = (0..g.len())
            .into_par_iter()
            .map(|k| {
                let z = g.z(k);
                let y = basis(c, z);
                let zero = Jet::constant(0.0);
                let mut out = Vec::with_capacity(ncol);
                for yh in &y {
                    for a in 0..3 {
                        let mut rho = [zero; 3];
                        rho[a] = *yh;
                        let q = inner_exact(c, z, &rho);
                        let (e, f) = linearized_conformality(c, z, &rho);
                        out.push([q, e, f]);
                    }
                }
                out
            })
            .collect();
        let mut lq = vec![vec![0.0; g.len()]; ncol];
        for col in 0..ncol {
            let q: Vec<f64> = per_node.iter().map(|v| v[col][0]).collect();
            lq[col] = st.laplacian(&g, &q);
        }
        for &k in &nodes {
            let z = g.z(k);
            let g2 = grad_omega_sq(z);
            let da = weights[k] * 4.0 / ((1.0 + z[0] * z[0] + z[1] * z[1]).powi(2));
            let s = da.sqrt() * 2.0 / g2;
            let mut lrow = vec![0.0; ncol];
            let mut erow = vec![0.0; ncol];
            let mut frow = vec![0.0; ncol];
            for col in 0..ncol {
                let cs = col_scale[col / 3];
                let lv = -lq[col][k];
                if !lv.is_finite() {
                    return Err(Error::Margin { what: "linearized operator", n });
                }
                lrow[col] = s * lv * cs;
                erow[col] = s * per_node[k][col][1] * cs;
                frow[col] = s * per_node[k][col][2] * cs;
            }
            rows.push(lrow);
            rows.push(erow);
            rows.push(frow);
        }
    }
    // decay at infinity of the north chart: the inner expression of a field
    // of finite energy vanishes there, which excludes the dilation
    let y_inf = basis(Chart::South, [0.0, 0.0]);
    let zero = Jet::constant(0.0);
    let mut drow = vec![0.0; ncol];
    for (m, yh) in y_inf.iter().enumerate() {
        for a in 0..3 {
            let mut rho = [zero; 3];
            rho[a] = *yh;
            drow[3 * m + a] = inner_exact(Chart::South, [0.0, 0.0], &rho) * col_scale[m];
        }
    }
    rows.push(drow);
    let a = DMatrix::from_fn(rows.len(), ncol, |i, j| rows[i][j]);
    // ρ_x(0), ρ_y(0) and ⟨ρ_ij(0), ω_k(0)⟩ on the north chart
    let z0 = [0.0, 0.0];
    let w0 = omega_chart(Chart::North, z0);
    let y0 = basis(Chart::North, z0);
    let mut p = DMatrix::zeros(12, ncol);
    let grad0 = grad_omega_sq(z0).sqrt();
    for (m, yh) in y0.iter().enumerate() {
        for a in 0..3 {
            let col = 3 * m + a;
            let cs = col_scale[m] / grad0;
            p[(a, col)] = yh.deriv(1, 0) * cs;
            p[(3 + a, col)] = yh.deriv(0, 1) * cs;
            let second = [yh.deriv(2, 0), yh.deriv(1, 1), yh.deriv(0, 2)];
            for (ij, v) in second.iter().enumerate() {
                for (kk, wk) in [w0[a].deriv(1, 0), w0[a].deriv(0, 1)].iter().enumerate() {
                    p[(6 + 2 * ij + kk, col)] = v * wk * cs / grad0;
                }
            }
        }
    }
    Ok((a, p))
}

fn singular_values(m: DMatrix<f64>) -> Vec<f64> {
    // QR first: the row count is far larger than the column count
    let r = if m.nrows() > m.ncols() { m.qr().r() } else { m };
    let mut s: Vec<f64> = r.svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| a.total_cmp(b));
    s
}

/// Discrete kernel classification on the harmonic basis of degrees
/// `1..=lmax`: solves `L_ω ρ = 0` with linearized conformality in the least
/// squares sense, then imposes `∇ρ(0) = 0` and `⟨∇²ρ, ∇ω⟩(0) = 0` as hard
/// constraints through their null space.
pub fn lemma_a1_check(n: usize, order: usize, lmax: usize) -> Result<KernelReport> {
    let lmin = 1;
    let (a, p) = kernel_rows(n, order, lmin, lmax)?;
    // rotations and Möbius fields
    let kernel_dim = 6;
    let sv = singular_values(a.clone());
    if sv.len() <= kernel_dim {
        return Err(Error::Validation(format!("basis of degree {lmax} is too small")));
    }
    let tau = sv[kernel_dim - 1];
    let gap = sv[kernel_dim];
    // null space of the 12 point rows from the eigenvectors of pᵀp
    let eig = (p.transpose() * &p).symmetric_eigen();
    let emax = eig.eigenvalues.max();
    let null_cols: Vec<_> = (0..a.ncols())
        .filter(|i| eig.eigenvalues[*i] <= 1e-10 * emax)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if null_cols.len() + p.nrows() != a.ncols() {
        return Err(Error::Singular(format!(
            "point constraints have rank {} instead of {}",
            a.ncols() - null_cols.len(),
            p.nrows()
        )));
    }
    let nmat = DMatrix::from_columns(&null_cols);
    let constrained = singular_values(&a * &nmat);
    let sigma_min = constrained[0];
    Ok(KernelReport {
        n,
        lmin,
        lmax,
        singular_values: sv,
        kernel_dim,
        tau,
        gap,
        sigma_min,
        grad_bound: tau / sigma_min,
    })
}
