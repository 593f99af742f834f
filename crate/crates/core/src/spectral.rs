//! Eigenvalue bounds on regular induced subgraphs and t-good structures, and cage-number formulas.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygon::IncidencePolygon;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("empty graph")]
    Empty,
    #[error("ratio bounds need d > lambda (d = {d}, lambda = {lambda})")]
    DegreeTooSmall { d: f64, lambda: f64 },
    #[error("no generalized {0}-gon bound")]
    InvalidGon(u32),
    #[error("girth-8 cage bound needs a square prime power, got {0}")]
    NotSquare(u64),
    #[error("no cage bound for girth {0}")]
    UnsupportedGirth(u32),
}

pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const COMPARE_TOLERANCE: f64 = 1e-6;

/// Eigenvalues of a real symmetric matrix, sorted descending, by cyclic Jacobi rotations.
pub fn eigen_sym(m: &[Vec<f64>]) -> Result<Vec<f64>, SpectralError> {
    let n = m.len();
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(SpectralError::NotSymmetric(i, j));
            }
        }
    }
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_TOLERANCE * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Eigenvalues of the incidence graph come in pairs `±sqrt(mu)` with `mu` an eigenvalue of `N Nᵀ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub lambda1: f64,
    pub lambda2: f64,
    /// eigenvalues of `N Nᵀ`, descending
    pub gram_spectrum: Vec<f64>,
    pub tolerance: f64,
}

fn gram(polygon: &IncidencePolygon) -> Vec<Vec<f64>> {
    let np = polygon.num_points();
    let mut m = vec![vec![0.0; np]; np];
    for l in 0..polygon.num_lines() {
        let pts = polygon.points_on(l);
        for &a in pts {
            for &b in pts {
                m[a as usize][b as usize] += 1.0;
            }
        }
    }
    m
}

pub fn spectrum(polygon: &IncidencePolygon) -> Result<SpectralReport, SpectralError> {
    if polygon.num_points() == 0 || polygon.num_lines() == 0 {
        return Err(SpectralError::Empty);
    }
    let ev = eigen_sym(&gram(polygon))?;
    let root = |x: f64| x.max(0.0).sqrt();
    Ok(SpectralReport {
        lambda1: root(ev[0]),
        lambda2: ev.get(1).map_or(0.0, |&x| root(x)),
        gram_spectrum: ev,
        tolerance: JACOBI_TOLERANCE,
    })
}

/// Second largest eigenvalue of the incidence graph.
pub fn second_eigenvalue(polygon: &IncidencePolygon) -> Result<f64, SpectralError> {
    spectrum(polygon).map(|r| r.lambda2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Expander mixing inequality for a point set `s` and a line set `t`, with `lambda2`, `lambda1`
/// the top two eigenvalues of the incidence graph.
pub fn mixing_check(polygon: &IncidencePolygon, lambda1: f64, lambda2: f64, s: &[usize], t: &[usize]) -> MixingCheck {
    let mut in_t = vec![false; polygon.num_lines()];
    for &l in t {
        in_t[l] = true;
    }
    let edges_st: usize =
        s.iter().map(|&p| polygon.lines_through(p).iter().filter(|&&l| in_t[l as usize]).count()).sum();
    let edges: usize = (0..polygon.num_points()).map(|p| polygon.lines_through(p).len()).sum();
    let alpha = s.len() as f64 / polygon.num_points() as f64;
    let beta = t.len() as f64 / polygon.num_lines() as f64;
    let lhs = (edges_st as f64 / edges as f64 - alpha * beta).abs();
    let rhs = lambda2 / lambda1 * (alpha * beta * (1.0 - alpha) * (1.0 - beta)).sqrt();
    MixingCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: Option<u32>,
    pub q: Option<u64>,
    pub t: Option<u64>,
    pub k: Option<f64>,
    pub d: Option<f64>,
    pub lambda: Option<f64>,
    pub lower_ratio: Option<f64>,
    pub upper_ratio: Option<f64>,
    /// set when `k <= lambda`, so the lower ratio says nothing
    pub lower_vacuous: bool,
    pub tgood_bound: Option<f64>,
    pub tgood_floor: Option<u64>,
}

impl BoundReport {
    fn blank() -> Self {
        BoundReport {
            n: None,
            q: None,
            t: None,
            k: None,
            d: None,
            lambda: None,
            lower_ratio: None,
            upper_ratio: None,
            lower_vacuous: false,
            tgood_bound: None,
            tgood_floor: None,
        }
    }

    /// Whether a `k`-regular induced subgraph on `vertices` of `total` vertices fits the ratio window.
    pub fn admits(&self, vertices: usize, total: usize) -> bool {
        let r = vertices as f64 / total as f64;
        let lo = self.lower_ratio.unwrap_or(0.0);
        let hi = self.upper_ratio.unwrap_or(1.0);
        r >= lo - 1e-9 && r <= hi + 1e-9
    }
}

/// Window `(k−λ)/(d−λ) ≤ |V(H)|/|V(G)| ≤ (k+λ)/(d+λ)` for a `k`-regular induced subgraph `H` of a
/// `d`-regular graph `G` with second eigenvalue `λ`.
pub fn subgraph_ratio_bounds(d: f64, k: f64, lambda: f64) -> Result<BoundReport, SpectralError> {
    if d <= lambda {
        return Err(SpectralError::DegreeTooSmall { d, lambda });
    }
    Ok(BoundReport {
        k: Some(k),
        d: Some(d),
        lambda: Some(lambda),
        lower_ratio: Some((k - lambda) / (d - lambda)),
        upper_ratio: Some((k + lambda) / (d + lambda)),
        lower_vacuous: k <= lambda,
        ..BoundReport::blank()
    })
}

fn is_square(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q).then_some(r)
}

/// Upper bound on the size of a t-good structure in a generalized n-gon of order q.
pub fn tgood_upper_bound(n: u32, q: u64, t: u64) -> Result<BoundReport, SpectralError> {
    let qf = q as f64;
    let tf = t as f64;
    let (value, exact) = match n {
        3 => (tf * (qf + qf.sqrt() + 1.0), is_square(q).map(|r| t * (q + r + 1))),
        4 => (tf * (qf + 1.0) * (qf + (2.0 * qf).sqrt() + 1.0), is_square(2 * q).map(|r| t * (q + 1) * (q + r + 1))),
        6 => (
            tf * (qf + 1.0) * (qf * qf + 1.0) * (qf + (3.0 * qf).sqrt() + 1.0),
            is_square(3 * q).map(|r| t * (q + 1) * (q * q + 1) * (q + r + 1)),
        ),
        other => return Err(SpectralError::InvalidGon(other)),
    };
    let floor = exact.unwrap_or_else(|| (value + 1e-9).floor() as u64);
    Ok(BoundReport {
        n: Some(n),
        q: Some(q),
        t: Some(t),
        tgood_bound: Some(value),
        tgood_floor: Some(floor),
        ..BoundReport::blank()
    })
}

/// Upper bounds `c(q+1, 8) ≤ 2(q³ − q√q − q)` for square q and `c(q+1, 12) ≤ 2(q⁵ − 3q³)`.
pub fn cage_bounds(q: u64, g: u32) -> Result<u64, SpectralError> {
    match g {
        8 => {
            let r = is_square(q).ok_or(SpectralError::NotSquare(q))?;
            Ok(2 * (q.pow(3) - q * r - q))
        }
        12 => Ok(2 * (q.pow(5) - 3 * q.pow(3))),
        other => Err(SpectralError::UnsupportedGirth(other)),
    }
}

/// Moore lower bound on the order of a k-regular graph of girth g.
pub fn moore_bound(k: u64, g: u32) -> u64 {
    let g = g as u64;
    if g.is_multiple_of(2) {
        2 * (0..=(g - 2) / 2).map(|i| (k - 1).pow(i as u32)).sum::<u64>()
    } else {
        1 + k * (0..=(g - 3) / 2).map(|i| (k - 1).pow(i as u32)).sum::<u64>()
    }
}
