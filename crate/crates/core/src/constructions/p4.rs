use super::{check_size, Metadata, ProjectedTarget};
use crate::error::{Error, Result};
use crate::graph::{builtin, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Level exponents `f(v)` on `0..=4n+1`.
pub fn p4_level_exponents(n: usize) -> Vec<u32> {
    let mut f = vec![0u32; 4 * n + 2];
    f[0] = 2 * n as u32 + 1;
    f[4 * n + 1] = 2 * n as u32 + 1;
    for k in 0..n {
        let (a, b) = (2 * k as u32 + 1, (2 * n - 2 * k - 1) as u32);
        f[4 * k + 1] = a;
        f[4 * k + 3] = a;
        f[4 * k + 2] = b;
        f[4 * k + 4] = b;
    }
    f
}

/// Random target over `P_{4n+2}`: level `v` has `N^{f(v)}` vertices;
/// consecutive levels `{4k, 4k+1}` (`k = 0..=n`) are joined independently
/// with probability `1/N`, all other consecutive levels completely.
#[allow(non_snake_case)]
pub fn build_TN_p4(n: usize, big_n: u64, seed: u64) -> Result<ProjectedTarget> {
    if n == 0 || big_n < 2 {
        return Err(Error::InvalidParameter("need n >= 1 and N >= 2".into()));
    }
    let f = p4_level_exponents(n);
    let mut sizes = Vec::with_capacity(f.len());
    for &e in &f {
        let s = big_n
            .checked_pow(e)
            .and_then(|s| usize::try_from(s).ok())
            .filter(|&s| s <= super::TARGET_VERTEX_CAP)
            .ok_or_else(|| Error::guard("P4 target", format!("{big_n}^{e}"), super::TARGET_VERTEX_CAP))?;
        sizes.push(s);
    }
    let total: usize = sizes.iter().sum();
    let trials: usize = (0..f.len() - 1).map(|v| sizes[v] * sizes[v + 1]).sum();
    check_size("P4 target", total, trials / 4)?;
    let mut offset = vec![0; sizes.len() + 1];
    for v in 0..sizes.len() {
        offset[v + 1] = offset[v] + sizes[v];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = u32::try_from(big_n).map_err(|_| Error::InvalidParameter("N too large".into()))?;
    let mut edges = Vec::new();
    for v in 0..f.len() - 1 {
        let sparse = v % 4 == 0;
        for i in 0..sizes[v] {
            for j in 0..sizes[v + 1] {
                if !sparse || rng.random_ratio(1, den) {
                    edges.push((offset[v] + i, offset[v + 1] + j));
                }
            }
        }
    }
    let projection = (0..sizes.len()).flat_map(|v| std::iter::repeat_n(v, sizes[v])).collect();
    Ok(ProjectedTarget {
        target: Graph::undirected(total, edges)?.named(format!("T_N[n={n},N={big_n},seed={seed}]")),
        projection,
        base: builtin("path", &[4 * n + 2])?,
        meta: Metadata {
            kind: "p4",
            scale: big_n,
            seed: Some(seed),
            params: serde_json::json!({ "n": n, "levels": f }),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_at_n1() {
        assert_eq!(p4_level_exponents(1), vec![3, 1, 1, 1, 1, 3]);
        assert_eq!(p4_level_exponents(2), vec![5, 1, 3, 1, 3, 3, 1, 3, 1, 5]);
    }

    #[test]
    fn shape_and_seed() {
        let t = build_TN_p4(1, 4, 7).unwrap();
        assert_eq!(t.fiber_sizes(), vec![64, 4, 4, 4, 4, 64]);
        assert!(t.projection_is_homomorphism());
        assert!(t.target.is_symmetric());
        let again = build_TN_p4(1, 4, 7).unwrap();
        assert_eq!(again.target, t.target);
        // the dense middle boundaries are complete
        assert!(t.target.has_edge(64 + 3, 68 + 2));
    }
}
