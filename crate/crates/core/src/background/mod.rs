//! Curvature data at the concentration point and the truncated
//! normal-coordinate metric it defines.

mod file;
mod metric;

pub use file::{pack, parse_background, parse_preset, BackgroundSpec};
pub use metric::{admissibility_bound, MetricJet, Order};

use crate::error::{Error, Result};

pub type Sym3 = [[f64; 3]; 3];
pub type Tensor3 = [[[f64; 3]; 3]; 3];
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];
pub type Tensor5 = [[[[[f64; 3]; 3]; 3]; 3]; 3];

const SYM_TOL: f64 = 1e-12;

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Ricci tensor, its covariant derivative and the derived Riemann data at
/// the base point of normal coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureBackground {
    pub ric: Sym3,
    /// `dric[a][b][c] = Ric_{ab,c}`, symmetric in `a, b`.
    pub dric: Tensor3,
    pub riemann: Tensor4,
    /// `driemann[a][b][c][d][e] = R_{abcd,e}`.
    pub driemann: Tensor5,
    pub scal: f64,
    pub dscal: [f64; 3],
}

impl CurvatureBackground {
    /// Builds the background from Ricci data; Riemann is derived through
    /// the three-dimensional decomposition.
    pub fn from_ricci(ric: Sym3, dric: Tensor3) -> Result<Self> {
        check_symmetric(&ric)?;
        for c in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    let d = (dric[a][b][c] - dric[b][a][c]).abs();
                    if d > SYM_TOL * (1.0 + dric[a][b][c].abs()) {
                        return Err(Error::Validation(format!(
                            "dric is not symmetric in its first two slots at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let scal = trace(&ric);
        let riemann = riemann_from_ricci(&ric, scal)?;
        let mut dscal = [0.0; 3];
        for (c, ds) in dscal.iter_mut().enumerate() {
            *ds = (0..3).map(|a| dric[a][a][c]).sum();
        }
        let mut driemann = [[[[[0.0; 3]; 3]; 3]; 3]; 3];
        for e in 0..3 {
            let slice = [
                [dric[0][0][e], dric[0][1][e], dric[0][2][e]],
                [dric[1][0][e], dric[1][1][e], dric[1][2][e]],
                [dric[2][0][e], dric[2][1][e], dric[2][2][e]],
            ];
            let r = decompose(&slice, dscal[e]);
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        for d in 0..3 {
                            driemann[a][b][c][d][e] = r[a][b][c][d];
                        }
                    }
                }
            }
        }
        Ok(CurvatureBackground { ric, dric, riemann, driemann, scal, dscal })
    }

    /// Accepts a Riemann tensor and its derivative directly, after checking
    /// every algebraic symmetry.
    pub fn from_riemann(riemann: Tensor4, driemann: Tensor5) -> Result<Self> {
        check_riemann_symmetries(&riemann, "riemann")?;
        for e in 0..3 {
            let mut slice = [[[[0.0; 3]; 3]; 3]; 3];
            for (a, sa) in slice.iter_mut().enumerate() {
                for (b, sb) in sa.iter_mut().enumerate() {
                    for (c, sc) in sb.iter_mut().enumerate() {
                        for (d, v) in sc.iter_mut().enumerate() {
                            *v = driemann[a][b][c][d][e];
                        }
                    }
                }
            }
            check_riemann_symmetries(&slice, "driemann")?;
        }
        let ric = contract(&riemann);
        let mut dric = [[[0.0; 3]; 3]; 3];
        for (b, db) in dric.iter_mut().enumerate() {
            for (m, dm) in db.iter_mut().enumerate() {
                for (e, v) in dm.iter_mut().enumerate() {
                    *v = (0..3).map(|a| driemann[a][b][a][m][e]).sum();
                }
            }
        }
        let bg = Self::from_ricci(ric, dric)?;
        let mut dev: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        dev = dev.max((bg.riemann[a][b][c][d] - riemann[a][b][c][d]).abs());
                        for e in 0..3 {
                            dev = dev.max((bg.driemann[a][b][c][d][e] - driemann[a][b][c][d][e]).abs());
                        }
                    }
                }
            }
        }
        if dev > 1e-10 {
            return Err(Error::Validation(format!(
                "tensor is not a three-dimensional curvature tensor (Weyl part {dev:e})"
            )));
        }
        Ok(bg)
    }

    pub fn flat() -> Self {
        Self::from_ricci([[0.0; 3]; 3], [[[0.0; 3]; 3]; 3]).expect("flat data is valid")
    }

    /// Constant sectional curvature `k`: `Ric = 2k δ`.
    pub fn space_form(k: f64) -> Self {
        let mut ric = [[0.0; 3]; 3];
        for (a, row) in ric.iter_mut().enumerate() {
            row[a] = 2.0 * k;
        }
        Self::from_ricci(ric, [[[0.0; 3]; 3]; 3]).expect("space form data is valid")
    }

    /// Vanishing Ricci at the base point with `∇Scal = s`; the derivative
    /// satisfies the contracted Bianchi identity.
    pub fn gradient(s: [f64; 3]) -> Self {
        let mut dric = [[[0.0; 3]; 3]; 3];
        for (a, da) in dric.iter_mut().enumerate() {
            for (b, db) in da.iter_mut().enumerate() {
                for (c, v) in db.iter_mut().enumerate() {
                    *v = 0.3 * delta(a, b) * s[c] + 0.05 * (delta(a, c) * s[b] + delta(b, c) * s[a]);
                }
            }
        }
        Self::from_ricci([[0.0; 3]; 3], dric).expect("gradient data is valid")
    }

    /// `div_m = Ric_{mb,b}`; equals `dscal/2` for curvature-compatible data.
    pub fn ricci_divergence(&self) -> [f64; 3] {
        let mut div = [0.0; 3];
        for (m, v) in div.iter_mut().enumerate() {
            *v = (0..3).map(|b| self.dric[m][b][b]).sum();
        }
        div
    }

    /// Largest component of `div Ric − ∇Scal/2`.
    pub fn bianchi_defect(&self) -> f64 {
        let div = self.ricci_divergence();
        (0..3).map(|m| (div[m] - 0.5 * self.dscal[m]).abs()).fold(0.0, f64::max)
    }

    pub fn is_flat(&self) -> bool {
        self.ric.iter().flatten().all(|v| *v == 0.0) && self.dric.iter().flatten().flatten().all(|v| *v == 0.0)
    }
}

fn trace(m: &Sym3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

fn check_symmetric(m: &Sym3) -> Result<()> {
    for a in 0..3 {
        for b in 0..a {
            if (m[a][b] - m[b][a]).abs() > SYM_TOL * (1.0 + m[a][b].abs()) {
                return Err(Error::Validation(format!("ric is not symmetric at ({a},{b})")));
            }
        }
    }
    Ok(())
}

/// Three-dimensional Riemann tensor of a symmetric Ricci tensor.
pub fn riemann_from_ricci(ric: &Sym3, scal: f64) -> Result<Tensor4> {
    check_symmetric(ric)?;
    let tr = trace(ric);
    if (tr - scal).abs() > 1e-12 * (1.0 + scal.abs()) {
        return Err(Error::Validation(format!("scal = {scal} differs from trace(ric) = {tr}")));
    }
    Ok(decompose(ric, scal))
}

fn decompose(ric: &Sym3, scal: f64) -> Tensor4 {
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for (a, ra) in r.iter_mut().enumerate() {
        for (b, rb) in ra.iter_mut().enumerate() {
            for (g, rg) in rb.iter_mut().enumerate() {
                for (m, v) in rg.iter_mut().enumerate() {
                    *v = delta(a, g) * ric[b][m] - delta(a, m) * ric[b][g] + delta(b, m) * ric[a][g]
                        - delta(b, g) * ric[a][m]
                        + 0.5 * scal * (delta(a, m) * delta(b, g) - delta(a, g) * delta(b, m));
                }
            }
        }
    }
    r
}

/// `Ric_{bm} = Σ_a R_{abam}`.
pub fn contract(r: &Tensor4) -> Sym3 {
    let mut ric = [[0.0; 3]; 3];
    for (b, row) in ric.iter_mut().enumerate() {
        for (m, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|a| r[a][b][a][m]).sum();
        }
    }
    ric
}

/// Largest violation among antisymmetry, pair symmetry and first Bianchi.
pub fn riemann_symmetry_defect(r: &Tensor4) -> f64 {
    let mut dev: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let v = r[a][b][c][d];
                    dev = dev
                        .max((v + r[b][a][c][d]).abs())
                        .max((v + r[a][b][d][c]).abs())
                        .max((v - r[c][d][a][b]).abs())
                        .max((v + r[a][c][d][b] + r[a][d][b][c]).abs());
                }
            }
        }
    }
    dev
}

fn check_riemann_symmetries(r: &Tensor4, what: &str) -> Result<()> {
    let scale = r.iter().flatten().flatten().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    let dev = riemann_symmetry_defect(r);
    if dev > SYM_TOL * scale {
        return Err(Error::Validation(format!("{what} violates curvature symmetries by {dev:e}")));
    }
    Ok(())
}
