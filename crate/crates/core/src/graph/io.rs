//! Text format: a header `n directed|undirected`, then one `u v` pair per
//! line. Lines starting with `#` are comments.

use super::Graph;
use crate::error::{Error, Result};
use std::path::Path;
use std::str::FromStr;

impl Graph {
    pub fn parse(text: &str) -> Result<Graph> {
        let mut header: Option<(usize, bool)> = None;
        let mut name = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if header.is_none() && name.is_none() {
                    if let Some(n) = comment.trim().strip_prefix("name:") {
                        name = Some(n.trim().to_string());
                    }
                }
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            if toks.len() != 2 {
                return Err(perr(format!("expected two tokens, found {}", toks.len())));
            }
            match header {
                None => {
                    let n = toks[0]
                        .parse::<usize>()
                        .map_err(|_| perr(format!("bad vertex count `{}`", toks[0])))?;
                    let directed = match toks[1] {
                        "directed" => true,
                        "undirected" => false,
                        other => return Err(perr(format!("expected directed|undirected, got `{other}`"))),
                    };
                    header = Some((n, directed));
                }
                Some((n, _)) => {
                    let parse_v = |t: &str| -> Result<usize> {
                        let v = t.parse::<usize>().map_err(|_| perr(format!("bad vertex `{t}`")))?;
                        if v >= n {
                            return Err(perr(format!("vertex {v} out of range 0..{n}")));
                        }
                        Ok(v)
                    };
                    edges.push((parse_v(toks[0])?, parse_v(toks[1])?));
                }
            }
        }
        let (n, directed) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let g = if directed {
            Graph::new(n, edges)?
        } else {
            Graph::undirected(n, edges)?
        };
        Ok(match name {
            Some(nm) => g.named(nm),
            None => g,
        })
    }

    /// Canonical form: symmetric graphs are written `undirected` with `u <= v`;
    /// edges are sorted lexicographically.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(name) = &self.name {
            s.push_str(&format!("# name: {name}\n"));
        }
        let sym = self.is_symmetric();
        s.push_str(&format!("{} {}\n", self.n, if sym { "undirected" } else { "directed" }));
        for (u, v) in self.edges() {
            if !sym || u <= v {
                s.push_str(&format!("{u} {v}\n"));
            }
        }
        s
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Graph> {
        let path = path.as_ref();
        let g = Graph::parse(&std::fs::read_to_string(path)?)?;
        Ok(if g.name.is_none() {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("G");
            g.named(stem)
        } else {
            g
        })
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Graph> {
        Graph::parse(s)
    }
}
