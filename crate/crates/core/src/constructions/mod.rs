//! Explicit target families with projections onto G: the upper-bound
//! targets `T_n`, the tightness targets glued from clique blocks, the
//! random targets for `P4` against `P_{4n+2}`, Ruzsa-Szemerédi graphs, and
//! finite-scale exponent estimates.

mod estimate;
mod p4;
mod rs;
mod tight;
mod upper;

pub use estimate::{estimate_exponent, estimate_ratio, fit_limit, ExponentEstimate};
pub use p4::{build_TN_p4, p4_level_exponents};
pub use rs::{behrend_set, is_progression_free, rs_graph, triangle_audit, TriangleAudit};
pub use tight::{build_tightness_target, filter_to_series_parallel};
pub use upper::{build_Tn_upper, fiber_law};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::is_homomorphism;
use serde::Serialize;
use std::path::Path;

/// Largest target a constructor will build.
pub const TARGET_VERTEX_CAP: usize = 400_000;
pub const TARGET_EDGE_CAP: usize = 20_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub kind: &'static str,
    /// The `n` (or `N`) the target realizes; `log` base for exponents.
    pub scale: u64,
    pub seed: Option<u64>,
    pub params: serde_json::Value,
}

/// A target graph `T` with a homomorphism `π: T → base`.
#[derive(Clone, Debug)]
pub struct ProjectedTarget {
    pub target: Graph,
    pub projection: Vec<usize>,
    pub base: Graph,
    pub meta: Metadata,
}

impl ProjectedTarget {
    pub fn projection_is_homomorphism(&self) -> bool {
        is_homomorphism(&self.target, &self.base, &self.projection)
    }

    /// Number of target vertices over each base vertex.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.base.n()];
        for &v in &self.projection {
            s[v] += 1;
        }
        s
    }

    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "meta": self.meta,
            "base": self.base.to_text(),
            "projection": self.projection,
            "vertices": self.target.n(),
            "edges": self.target.edge_count(),
        })
    }

    /// Writes the target in the graph text format and `<path>.json` beside it.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.target.write_file(path)?;
        let mut side = path.as_os_str().to_owned();
        side.push(".json");
        std::fs::write(side, serde_json::to_string_pretty(&self.sidecar())?)?;
        Ok(())
    }
}

fn check_size(what: &'static str, vertices: usize, edges: usize) -> Result<()> {
    if vertices > TARGET_VERTEX_CAP {
        return Err(Error::guard(what, format!("{vertices} vertices"), TARGET_VERTEX_CAP));
    }
    if edges > TARGET_EDGE_CAP {
        return Err(Error::guard(what, format!("{edges} edges"), TARGET_EDGE_CAP));
    }
    Ok(())
}
