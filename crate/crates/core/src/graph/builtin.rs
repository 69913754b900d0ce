use super::Graph;
use crate::error::{Error, Result};

fn need(params: &[usize], k: usize, name: &str) -> Result<()> {
    if params.len() != k {
        return Err(Error::InvalidParameter(format!(
            "`{name}` takes {k} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

/// Named generators. `path(n)` has `n` vertices and `n-1` edges; `vee` has
/// edges `0->1`, `0->2`; `dicycle(n)` is `0->1->...->n-1->0`.
pub fn builtin(name: &str, params: &[usize]) -> Result<Graph> {
    let positive = |p: usize, what: &str| -> Result<usize> {
        if p == 0 {
            Err(Error::InvalidParameter(format!("{what} must be positive")))
        } else {
            Ok(p)
        }
    };
    let g = match name {
        "path" | "P" => {
            need(params, 1, name)?;
            let n = positive(params[0], "path size")?;
            Graph::undirected(n, (1..n).map(|i| (i - 1, i)))?.named(format!("P{n}"))
        }
        "dipath" => {
            need(params, 1, name)?;
            let n = positive(params[0], "path size")?;
            Graph::new(n, (1..n).map(|i| (i - 1, i)))?.named(format!("dP{n}"))
        }
        "cycle" | "C" => {
            need(params, 1, name)?;
            let n = params[0];
            if n < 3 {
                return Err(Error::InvalidParameter("cycle needs at least 3 vertices".into()));
            }
            Graph::undirected(n, (0..n).map(|i| (i, (i + 1) % n)))?.named(format!("C{n}"))
        }
        "dicycle" => {
            need(params, 1, name)?;
            let n = positive(params[0], "cycle size")?;
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?.named(format!("dC{n}"))
        }
        "complete" | "K" => {
            need(params, 1, name)?;
            let n = positive(params[0], "clique size")?;
            let e = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
            Graph::new(n, e)?.named(format!("K{n}"))
        }
        "bipartite" => {
            need(params, 2, name)?;
            let (a, b) = (positive(params[0], "part size")?, positive(params[1], "part size")?);
            let e = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v)));
            Graph::undirected(a + b, e)?.named(format!("K{a},{b}"))
        }
        "star" => {
            need(params, 1, name)?;
            let k = params[0];
            Graph::undirected(k + 1, (1..=k).map(|v| (0, v)))?.named(format!("S{k}"))
        }
        "vee" => {
            need(params, 0, name)?;
            Graph::new(3, [(0, 1), (0, 2)])?.named("Vee")
        }
        "edgeless" => {
            need(params, 1, name)?;
            let n = positive(params[0], "vertex count")?;
            Graph::edgeless(n).named(format!("E{n}"))
        }
        "book" => {
            // k triangles sharing the edge {0,1}
            need(params, 1, name)?;
            let k = positive(params[0], "page count")?;
            let mut e = vec![(0, 1)];
            for i in 0..k {
                e.push((0, 2 + i));
                e.push((1, 2 + i));
            }
            Graph::undirected(k + 2, e)?.named(format!("B{k}"))
        }
        _ => return Err(Error::UnknownBuiltin(name.to_string())),
    };
    Ok(g)
}

/// Parses `[k*]name[:p1,p2,...]`, e.g. `path:4`, `2*complete:1`, `vee`.
pub fn parse_builtin_spec(spec: &str) -> Result<Graph> {
    let (copies, rest) = match spec.split_once('*') {
        Some((k, rest)) => (
            k.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad copy count in `{spec}`")))?,
            rest,
        ),
        None => (1, spec),
    };
    let (name, params) = match rest.split_once(':') {
        Some((name, ps)) => {
            let params = ps
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidParameter(format!("bad parameter `{p}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            (name.trim(), params)
        }
        None => (rest.trim(), Vec::new()),
    };
    let g = builtin(name, &params)?;
    Ok(if copies == 1 { g } else { g.copies(copies) })
}
