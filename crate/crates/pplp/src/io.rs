//! Text formats: `.poly` constraint systems, `.plp` parametric
//! programs, region dumps as JSON, spanning trees as DOT, and run
//! statistics as JSON.
//!
//! `.poly`: `#` comments, a `poly <nvars> <nrows>` header, then one row
//! per line as `a_1 ... a_n b` meaning `a . x <= b`.
//!
//! `.plp`: a `plp <n> <m> <k>` header, `m` rows of `A`, one line `B`,
//! then `k+1` objective lines `C_0 ... C_k`.
//!
//! Rationals everywhere are `p`, `-p` or `p/q` with `q > 0`.

use serde::Serialize;
use thiserror::Error;

use crate::explore::{PlpSolution, RunStats};
use crate::lp::StandardLP;
use crate::plp::ParametricLP;
use crate::poly::Polyhedron;
use crate::rat::{parse_rat, Rat, RatMat, RatVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

struct Lines<'a> {
    tokens: Vec<(usize, Vec<(usize, &'a str)>)>, // (line number, [(col, token)])
    cursor: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut tokens = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut toks = Vec::new();
            let mut col = 0;
            for piece in line.split_whitespace() {
                let at = line[col..].find(piece).map(|p| p + col).unwrap_or(col);
                toks.push((at + 1, piece));
                col = at + piece.len();
            }
            if !toks.is_empty() {
                tokens.push((idx + 1, toks));
            }
        }
        Lines { tokens, cursor: 0 }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &[(usize, &'a str)]), IoError> {
        let Some((line, toks)) = self.tokens.get(self.cursor) else {
            return Err(IoError::Parse {
                line: self.tokens.last().map_or(1, |(l, _)| *l + 1),
                col: 1,
                msg: format!("expected {what}, found end of input"),
            });
        };
        self.cursor += 1;
        Ok((*line, toks.as_slice()))
    }

    fn finished(&self) -> Result<(), IoError> {
        if let Some((line, toks)) = self.tokens.get(self.cursor) {
            return Err(IoError::Parse {
                line: *line,
                col: toks[0].0,
                msg: "unexpected trailing content".into(),
            });
        }
        Ok(())
    }
}

fn parse_count(line: usize, tok: (usize, &str), what: &str) -> Result<usize, IoError> {
    tok.1.parse().map_err(|_| IoError::Parse {
        line,
        col: tok.0,
        msg: format!("bad {what} `{}`", tok.1),
    })
}

fn parse_rat_tok(line: usize, tok: (usize, &str)) -> Result<Rat, IoError> {
    parse_rat(tok.1).map_err(|msg| IoError::Parse {
        line,
        col: tok.0,
        msg,
    })
}

fn parse_rat_line(
    line: usize,
    toks: &[(usize, &str)],
    expected: usize,
    what: &str,
) -> Result<RatVec, IoError> {
    if toks.len() != expected {
        return Err(IoError::Parse {
            line,
            col: toks.first().map_or(1, |t| t.0),
            msg: format!("{what}: expected {expected} values, found {}", toks.len()),
        });
    }
    toks.iter().map(|&t| parse_rat_tok(line, t)).collect()
}

pub fn parse_polyhedron(text: &str) -> Result<Polyhedron, IoError> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines.next_line("`poly <nvars> <nrows>` header")?;
    if header.is_empty() || header[0].1 != "poly" || header.len() != 3 {
        return Err(IoError::Parse {
            line: hline,
            col: header.first().map_or(1, |t| t.0),
            msg: "expected header `poly <nvars> <nrows>`".into(),
        });
    }
    let nvars = parse_count(hline, header[1], "variable count")?;
    let nrows = parse_count(hline, header[2], "row count")?;
    let mut rows = Vec::with_capacity(nrows);
    for _ in 0..nrows {
        let (line, toks) = lines.next_line("a constraint row")?;
        let vals = parse_rat_line(line, toks, nvars + 1, "constraint row")?;
        let (b, a) = vals.split_last().expect("nvars + 1 >= 1");
        rows.push((a.to_vec(), b.clone()));
    }
    lines.finished()?;
    Ok(Polyhedron::new(nvars, rows))
}

pub fn emit_polyhedron(p: &Polyhedron) -> String {
    let mut out = format!("poly {} {}\n", p.nvars(), p.rows().len());
    for (a, b) in p.rows() {
        let mut parts: Vec<String> = a.iter().map(|v| v.to_string()).collect();
        parts.push(b.to_string());
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_plp(text: &str) -> Result<ParametricLP, IoError> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines.next_line("`plp <n> <m> <k>` header")?;
    if header.is_empty() || header[0].1 != "plp" || header.len() != 4 {
        return Err(IoError::Parse {
            line: hline,
            col: header.first().map_or(1, |t| t.0),
            msg: "expected header `plp <n> <m> <k>`".into(),
        });
    }
    let n = parse_count(hline, header[1], "variable count")?;
    let m = parse_count(hline, header[2], "row count")?;
    let k = parse_count(hline, header[3], "parameter count")?;
    let mut a_rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, toks) = lines.next_line("a matrix row")?;
        a_rows.push(parse_rat_line(line, toks, n, "matrix row")?);
    }
    let (bline, btoks) = lines.next_line("the right-hand side")?;
    let b = parse_rat_line(bline, btoks, m, "right-hand side")?;
    let mut objectives = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        let (line, toks) = lines.next_line("an objective row")?;
        objectives.push(parse_rat_line(line, toks, n, "objective row")?);
    }
    lines.finished()?;
    let lp = StandardLP::new(RatMat::from_rows(a_rows), b)
        .map_err(|e| IoError::Invalid(e.to_string()))?;
    ParametricLP::new(lp, objectives).map_err(|e| IoError::Invalid(e.to_string()))
}

#[derive(Serialize)]
struct ConstraintJson {
    coeffs: Vec<String>,
    constant: String,
}

#[derive(Serialize)]
struct ParentJson {
    region: usize,
    facet: usize,
}

#[derive(Serialize)]
struct RegionJson {
    id: usize,
    basis: Vec<usize>,
    optimum: Vec<String>,
    constraints: Vec<ConstraintJson>,
    parent: Option<ParentJson>,
}

/// Region dump: one object per region, rationals as strings so nothing
/// is rounded.
pub fn regions_json(solution: &PlpSolution) -> String {
    let regions: Vec<RegionJson> = solution
        .regions
        .iter()
        .map(|r| RegionJson {
            id: r.id,
            basis: r.basis.indices().to_vec(),
            optimum: r.optimum.iter().map(|v| v.to_string()).collect(),
            constraints: r
                .constraints
                .iter()
                .map(|f| ConstraintJson {
                    coeffs: f.coeffs.iter().map(|v| v.to_string()).collect(),
                    constant: f.constant.to_string(),
                })
                .collect(),
            parent: r.parent.map(|e| ParentJson {
                region: e.region,
                facet: e.facet,
            }),
        })
        .collect();
    serde_json::to_string_pretty(&regions).expect("region serialization cannot fail")
}

/// Spanning tree of the exploration: directed edges parent -> child
/// labeled with the generating facet index.
pub fn dot_tree(solution: &PlpSolution) -> String {
    let mut out = String::from("digraph regions {\n");
    for r in &solution.regions {
        out.push_str(&format!("  {} [label=\"R{}\"];\n", r.id, r.id));
    }
    for r in &solution.regions {
        if let Some(edge) = r.parent {
            out.push_str(&format!(
                "  {} -> {} [label=\"{}\"];\n",
                edge.region, r.id, edge.facet
            ));
        }
    }
    out.push_str("}\n");
    out
}

pub fn stats_json(stats: &RunStats) -> String {
    serde_json::to_string_pretty(stats).expect("stats serialization cannot fail")
}
