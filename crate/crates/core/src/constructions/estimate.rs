use super::ProjectedTarget;
use crate::bounds::ln_big;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::count_homs;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeSet;

/// Finite-scale values `y(n)` and the fit `y ≈ limit + slope / ln n`.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentEstimate {
    /// `(scale, y)` per target, in input order.
    pub points: Vec<(u64, f64)>,
    pub limit: f64,
    pub slope: f64,
    /// Last observed value minus the fitted limit.
    pub residual: f64,
}

/// Least squares for `y = L + c·x` over `(x, y)`; returns `(L, c)`.
pub fn fit_limit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let k = points.len() as f64;
    let distinct: BTreeSet<u64> = points.iter().map(|p| p.0.to_bits()).collect();
    if distinct.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 distinct scales".into()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let c = sxy / sxx;
    Ok((my - c * mx, c))
}

fn fit(points: Vec<(u64, f64)>) -> Result<ExponentEstimate> {
    if points.iter().any(|p| p.0 < 2) {
        return Err(Error::InvalidParameter("scales must be at least 2".into()));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(n, y)| (1.0 / (n as f64).ln(), y)).collect();
    let (limit, slope) = fit_limit(&xy)?;
    let residual = points.last().map_or(0.0, |p| p.1) - limit;
    Ok(ExponentEstimate {
        points,
        limit,
        slope,
        residual,
    })
}

fn log_hom(f: &Graph, t: &ProjectedTarget) -> Result<f64> {
    let h = count_homs(f, &t.target);
    if h.is_zero() {
        return Err(Error::NoHomomorphism);
    }
    Ok(ln_big(&h))
}

/// `log_n hom(F, T_n)` over a family of targets, extrapolated in `1/ln n`.
pub fn estimate_exponent(f: &Graph, targets: &[ProjectedTarget]) -> Result<ExponentEstimate> {
    let mut points = Vec::with_capacity(targets.len());
    for t in targets {
        points.push((t.meta.scale, log_hom(f, t)? / (t.meta.scale as f64).ln()));
    }
    fit(points)
}

/// `log hom(F, T) / log hom(G, T)` over a family of targets.
pub fn estimate_ratio(f: &Graph, g: &Graph, targets: &[ProjectedTarget]) -> Result<ExponentEstimate> {
    let mut points = Vec::with_capacity(targets.len());
    for t in targets {
        let lg = log_hom(g, t)?;
        if lg <= 0.0 {
            return Err(Error::InvalidParameter(format!("hom(G, T) = 1 at scale {}", t.meta.scale)));
        }
        points.push((t.meta.scale, log_hom(f, t)? / lg));
    }
    fit(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_Tn_upper;
    use crate::graph::{builtin, VertexSet};
    use crate::polymatroid::SetFunction;
    use crate::rational::int;

    #[test]
    fn exact_line_is_recovered() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|k| (k as f64, 0.5 + 2.0 * k as f64)).collect();
        let (l, c) = fit_limit(&pts).unwrap();
        assert!((l - 0.5).abs() < 1e-12 && (c - 2.0).abs() < 1e-12);
        assert!(fit_limit(&pts[..2]).is_err());
    }

    fn k2_targets() -> Vec<ProjectedTarget> {
        let k2 = builtin("complete", &[2]).unwrap();
        let mut q = SetFunction::zero(2);
        q.set(VertexSet::full(2), int(1));
        [3, 5, 9, 17].iter().map(|&n| build_Tn_upper(&k2, &q, n).unwrap()).collect()
    }

    #[test]
    fn k2_blocks_have_exponent_one() {
        let k2 = builtin("complete", &[2]).unwrap();
        let e = estimate_exponent(&k2, &k2_targets()).unwrap();
        // n disjoint edges carry 2n maps of K2: exponent 1 with a ln 2 / ln n tail
        assert!((e.limit - 1.0).abs() < 1e-9 && (e.slope - 2f64.ln()).abs() < 1e-9, "{e:?}");
        assert!(e.points.iter().all(|p| p.1 > 1.0));
        let p3 = builtin("path", &[3]).unwrap();
        let e = estimate_exponent(&p3, &k2_targets()).unwrap();
        assert!((e.limit - 1.0).abs() < 1e-9 && (e.slope - 2f64.ln()).abs() < 1e-9, "{e:?}");
        let r = estimate_ratio(&p3, &k2, &k2_targets()).unwrap();
        assert!((r.limit - 1.0).abs() < 1e-9);
    }
}
