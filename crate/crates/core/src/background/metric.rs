use super::{CurvatureBackground, Sym3};
use crate::error::{Error, Result};
use crate::real::{Real, V3};

/// Truncation of the ε-expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    /// Curvature terms only.
    Two,
    /// Curvature and first-derivative terms.
    Three,
}

const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
const TRIPLES: [(usize, usize, usize); 10] =
    [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 1), (0, 1, 2), (0, 2, 2), (1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)];

fn pair_perms(a: usize, b: usize) -> Vec<(usize, usize)> {
    if a == b {
        vec![(a, b)]
    } else {
        vec![(a, b), (b, a)]
    }
}

fn triple_perms(a: usize, b: usize, c: usize) -> Vec<(usize, usize, usize)> {
    let mut v = vec![(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)];
    v.sort_unstable();
    v.dedup();
    v
}

/// The rescaled model metric `g_ε` about the base point: the exact
/// polynomial truncation, with no remainder.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub bg: CurvatureBackground,
    pub eps: f64,
    pub order: Order,
    e2: f64,
    e3: f64,
    // g_{mn} = δ + e2 Σ m2[m][n][p] y^p + e3 Σ m3[m][n][q] y^q
    m2: [[[f64; 6]; 3]; 3],
    m3: [[[f64; 10]; 3]; 3],
    // Γ^c_{ab} = e2 Σ g2[c][a][b][m] y^m + e3 Σ g3[c][a][b][p] y^p
    g2: [[[[f64; 3]; 3]; 3]; 3],
    g3: [[[[f64; 6]; 3]; 3]; 3],
    d2: [f64; 6],
    d3: [f64; 10],
}

impl MetricJet {
    pub fn new(bg: CurvatureBackground, eps: f64, order: Order) -> Self {
        let r = &bg.riemann;
        let dr = &bg.driemann;
        let e2 = eps * eps;
        let e3 = match order {
            Order::Two => 0.0,
            Order::Three => e2 * eps,
        };
        let mut m2 = [[[0.0; 6]; 3]; 3];
        let mut m3 = [[[0.0; 10]; 3]; 3];
        for m in 0..3 {
            for n in 0..3 {
                for (p, &(a, b)) in PAIRS.iter().enumerate() {
                    m2[m][n][p] = pair_perms(a, b).iter().map(|&(x, y)| r[x][m][n][y]).sum::<f64>() / 3.0;
                }
                for (q, &(a, b, c)) in TRIPLES.iter().enumerate() {
                    m3[m][n][q] = triple_perms(a, b, c).iter().map(|&(x, y, z)| dr[x][m][n][y][z]).sum::<f64>() / 6.0;
                }
            }
        }
        let mut g2 = [[[[0.0; 3]; 3]; 3]; 3];
        let mut g3 = [[[[0.0; 6]; 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for m in 0..3 {
                        g2[c][a][b][m] = (r[b][m][a][c] + r[a][m][b][c]) / 3.0;
                    }
                    for (p, &(m, n)) in PAIRS.iter().enumerate() {
                        g3[c][a][b][p] = pair_perms(m, n)
                            .iter()
                            .map(|&(m, n)| {
                                2.0 * dr[b][m][a][c][n]
                                    + 2.0 * dr[a][m][b][c][n]
                                    + dr[b][m][n][c][a]
                                    + dr[a][m][n][c][b]
                                    - dr[a][m][n][b][c]
                            })
                            .sum::<f64>()
                            / 12.0;
                    }
                }
            }
        }
        let mut d2 = [0.0; 6];
        for (p, &(a, b)) in PAIRS.iter().enumerate() {
            d2[p] = -pair_perms(a, b).iter().map(|&(x, y)| bg.ric[x][y]).sum::<f64>() / 6.0;
        }
        let mut d3 = [0.0; 10];
        for (q, &(a, b, c)) in TRIPLES.iter().enumerate() {
            d3[q] = -triple_perms(a, b, c).iter().map(|&(x, y, z)| bg.dric[x][y][z]).sum::<f64>() / 12.0;
        }
        MetricJet { bg, eps, order, e2, e3, m2, m3, g2, g3, d2, d3 }
    }

    pub fn flat() -> Self {
        Self::new(CurvatureBackground::flat(), 0.0, Order::Three)
    }

    pub fn is_euclidean(&self) -> bool {
        self.eps == 0.0 || self.bg.is_flat()
    }

    fn monomials<T: Real>(y: &V3<T>) -> ([T; 6], [T; 10]) {
        let p2 = PAIRS.map(|(a, b)| y[a] * y[b]);
        let p3 = [
            p2[0] * y[0],
            p2[0] * y[1],
            p2[0] * y[2],
            p2[3] * y[0],
            p2[1] * y[2],
            p2[5] * y[0],
            p2[3] * y[1],
            p2[3] * y[2],
            p2[5] * y[1],
            p2[5] * y[2],
        ];
        (p2, p3)
    }

    fn contract_sym<T: Real>(
        &self,
        c2: &[[[f64; 6]; 3]; 3],
        c3: &[[[f64; 10]; 3]; 3],
        p2: &[T; 6],
        p3: &[T; 10],
        sign: f64,
    ) -> [[T; 3]; 3] {
        let zero = T::cst(0.0);
        let mut g = [[zero; 3]; 3];
        for m in 0..3 {
            for n in m..3 {
                let mut s = zero;
                for p in 0..6 {
                    if c2[m][n][p] != 0.0 {
                        s = s + p2[p] * (c2[m][n][p] * self.e2);
                    }
                }
                if self.e3 != 0.0 {
                    for q in 0..10 {
                        if c3[m][n][q] != 0.0 {
                            s = s + p3[q] * (c3[m][n][q] * self.e3);
                        }
                    }
                }
                s = s * sign;
                if m == n {
                    s = s + 1.0;
                }
                g[m][n] = s;
                g[n][m] = s;
            }
        }
        g
    }

    /// Metric coefficients at `y`, without the positivity check.
    pub fn metric<T: Real>(&self, y: &V3<T>) -> [[T; 3]; 3] {
        let (p2, p3) = Self::monomials(y);
        self.contract_sym(&self.m2, &self.m3, &p2, &p3, 1.0)
    }

    /// Inverse metric expansion (sign-flipped correction terms).
    pub fn inverse_metric<T: Real>(&self, y: &V3<T>) -> [[T; 3]; 3] {
        let (p2, p3) = Self::monomials(y);
        self.contract_sym(&self.m2, &self.m3, &p2, &p3, -1.0)
    }

    pub fn volume_density<T: Real>(&self, y: &V3<T>) -> T {
        let (p2, p3) = Self::monomials(y);
        let mut s = T::cst(1.0);
        for p in 0..6 {
            s = s + p2[p] * (self.d2[p] * self.e2);
        }
        if self.e3 != 0.0 {
            for q in 0..10 {
                s = s + p3[q] * (self.d3[q] * self.e3);
            }
        }
        s
    }

    /// `Γ[c][a][b] = Γ^c_{ab}`.
    pub fn christoffel<T: Real>(&self, y: &V3<T>) -> [[[T; 3]; 3]; 3] {
        let zero = T::cst(0.0);
        let mut out = [[[zero; 3]; 3]; 3];
        if self.e2 == 0.0 {
            return out;
        }
        let p2 = PAIRS.map(|(a, b)| y[a] * y[b]);
        for c in 0..3 {
            for a in 0..3 {
                for b in a..3 {
                    let mut s = zero;
                    for m in 0..3 {
                        let k = self.g2[c][a][b][m];
                        if k != 0.0 {
                            s = s + y[m] * (k * self.e2);
                        }
                    }
                    if self.e3 != 0.0 {
                        for p in 0..6 {
                            let k = self.g3[c][a][b][p];
                            if k != 0.0 {
                                s = s + p2[p] * (k * self.e3);
                            }
                        }
                    }
                    out[c][a][b] = s;
                    out[c][b][a] = s;
                }
            }
        }
        out
    }

    /// Ricci tensor of the rescaled metric at `y`: `ε² Ric + ε³ ∇Ric · y`.
    pub fn ricci<T: Real>(&self, y: &V3<T>) -> [[T; 3]; 3] {
        let zero = T::cst(0.0);
        let mut out = [[zero; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let mut s = T::cst(self.bg.ric[a][b] * self.e2);
                if self.e3 != 0.0 {
                    for (c, yc) in y.iter().enumerate() {
                        s = s + *yc * (self.bg.dric[a][b][c] * self.e3);
                    }
                }
                out[a][b] = s;
            }
        }
        out
    }

    /// Checked metric evaluation.
    pub fn metric_at(&self, y: [f64; 3]) -> Result<Sym3> {
        let g = self.metric(&y);
        if is_positive_definite(&g) {
            Ok(g)
        } else {
            Err(Error::NotPositiveDefinite { y, eps: self.eps })
        }
    }

    pub fn inverse_metric_at(&self, y: [f64; 3]) -> Result<Sym3> {
        self.metric_at(y)?;
        Ok(self.inverse_metric(&y))
    }

    pub fn volume_density_at(&self, y: [f64; 3]) -> Result<f64> {
        self.metric_at(y)?;
        Ok(self.volume_density(&y))
    }

    pub fn christoffel_at(&self, y: [f64; 3]) -> [[[f64; 3]; 3]; 3] {
        self.christoffel(&y)
    }

    /// The bound of [`admissibility_bound`] for this background and order.
    pub fn admissibility_bound(&self) -> f64 {
        admissibility_bound(&self.bg, self.order)
    }

    pub fn check_admissible(&self) -> Result<()> {
        let bound = self.admissibility_bound();
        if self.eps > bound {
            Err(Error::Inadmissible { eps: self.eps, bound })
        } else {
            Ok(())
        }
    }
}

pub fn is_positive_definite(g: &Sym3) -> bool {
    let m1 = g[0][0];
    let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    m1 > 0.0 && m2 > 0.0 && det > 0.0
}

const PROBE: usize = 17;
const EPS_CAP: f64 = 1e3;

fn probe_points() -> Vec<[f64; 3]> {
    let h = 4.0 / (PROBE - 1) as f64;
    let mut pts = Vec::new();
    for i in 0..PROBE {
        for j in 0..PROBE {
            for k in 0..PROBE {
                let y = [-2.0 + i as f64 * h, -2.0 + j as f64 * h, -2.0 + k as f64 * h];
                if y[0] * y[0] + y[1] * y[1] + y[2] * y[2] <= 4.0 + 1e-12 {
                    pts.push(y);
                }
            }
        }
    }
    pts
}

/// Largest ε for which the model metric is positive definite at every
/// point of a 17³ probe lattice of the ball `|y| ≤ 2` (for all smaller ε as
/// well). Returns `f64::INFINITY` when no failure occurs below 10³.
pub fn admissibility_bound(bg: &CurvatureBackground, order: Order) -> f64 {
    if bg.is_flat() {
        return f64::INFINITY;
    }
    let pts = probe_points();
    let ok = |eps: f64| {
        let jet = MetricJet::new(bg.clone(), eps, order);
        pts.iter().all(|y| is_positive_definite(&jet.metric(y)))
    };
    // geometric scan for the first failure, then bisection
    let steps = 800;
    let (lo_exp, hi_exp) = (-4.0f64, EPS_CAP.log10());
    let mut prev = 0.0;
    for s in 0..=steps {
        let eps = 10f64.powf(lo_exp + (hi_exp - lo_exp) * s as f64 / steps as f64);
        if !ok(eps) {
            let (mut lo, mut hi) = (prev, eps);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return lo;
        }
        prev = eps;
    }
    f64::INFINITY
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_form_example_values() {
        let jet = MetricJet::new(CurvatureBackground::space_form(1.0), 0.1, Order::Three);
        let y = [1.0, 0.0, 0.0];
        let g = jet.metric_at(y).unwrap();
        assert!((g[1][1] - (1.0 - 0.01 / 3.0)).abs() < 1e-15);
        assert!((g[0][0] - 1.0).abs() < 1e-15);
        let gi = jet.inverse_metric_at(y).unwrap();
        assert!((gi[1][1] - (1.0 + 0.01 / 3.0)).abs() < 1e-15);
        let d = jet.volume_density_at(y).unwrap();
        assert!((d - (1.0 - 0.01 / 6.0 * 2.0)).abs() < 1e-15);
    }

    #[test]
    fn space_form_bound_is_tangential_degeneracy() {
        // g_tangential = 1 − ε²|y|²/3 vanishes at |y| = 2 when ε = √3/2
        let b = admissibility_bound(&CurvatureBackground::space_form(1.0), Order::Three);
        assert!((b - 0.75f64.sqrt()).abs() < 1e-9, "{b}");
        assert!(admissibility_bound(&CurvatureBackground::flat(), Order::Three).is_infinite());
    }

    #[test]
    fn checked_evaluation_reports_the_point() {
        let jet = MetricJet::new(CurvatureBackground::space_form(1.0), 1.0, Order::Three);
        let y = [2.0, 0.0, 0.0];
        match jet.metric_at(y) {
            Err(Error::NotPositiveDefinite { y: p, .. }) => assert_eq!(p, y),
            other => panic!("expected degeneracy, got {other:?}"),
        }
        assert!(matches!(jet.check_admissible(), Err(Error::Inadmissible { .. })));
    }
}
