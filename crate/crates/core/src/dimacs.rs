//! DIMACS edge and CNF formats. Ids are 1-indexed in files, 0-indexed in memory.

use std::fmt::Write;

use crate::cnf::{check_clause, CnfFormula, Lit};
use crate::error::{Error, Result};
use crate::graph::Graph;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("invalid {what} '{tok}'")))
}

/// Parses `p edge n m` followed by `e u v` lines.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(perr(ln, "second problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => return Err(perr(ln, format!("expected 'p edge', found {other:?}"))),
                }
                let n = parse_num(toks.next(), ln, "vertex count")?;
                let m = parse_num(toks.next(), ln, "edge count")?;
                if toks.next().is_some() {
                    return Err(perr(ln, "trailing tokens in problem line"));
                }
                header = Some((n, m, ln));
            }
            Some("e") => {
                let (n, _, _) = header.ok_or_else(|| perr(ln, "edge before problem line"))?;
                let u: usize = parse_num(toks.next(), ln, "endpoint")?;
                let v: usize = parse_num(toks.next(), ln, "endpoint")?;
                if toks.next().is_some() {
                    return Err(perr(ln, "trailing tokens in edge line"));
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(perr(ln, format!("vertex id out of range 1..={n}")));
                }
                if u == v {
                    return Err(perr(ln, format!("self-loop at vertex {u}")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(perr(ln, format!("duplicate edge {u} {v}")));
                }
                edges.push((u - 1, v - 1));
            }
            Some(tok) => return Err(perr(ln, format!("unexpected line start '{tok}'"))),
        }
    }
    let (n, m, hl) = header.ok_or_else(|| perr(0, "missing problem line"))?;
    if m != edges.len() {
        return Err(perr(hl, format!("header declares {m} edges but {} given", edges.len())));
    }
    Graph::from_edges(n, &edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("p edge {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(s, "e {} {}", u + 1, v + 1).unwrap();
    }
    s
}

/// Parses DIMACS CNF. With `k_bound`, wider clauses are rejected.
pub fn parse_cnf(text: &str, k_bound: Option<usize>) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<Lit> = Vec::new();
    let mut cur_start = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(perr(ln, "second problem line"));
            }
            let mut toks = t.split_whitespace().skip(1);
            if toks.next() != Some("cnf") {
                return Err(perr(ln, "expected 'p cnf'"));
            }
            let n = parse_num(toks.next(), ln, "variable count")?;
            let m = parse_num(toks.next(), ln, "clause count")?;
            if toks.next().is_some() {
                return Err(perr(ln, "trailing tokens in problem line"));
            }
            header = Some((n, m, ln));
            continue;
        }
        let (n, _, _) = header.ok_or_else(|| perr(ln, "clause before problem line"))?;
        for tok in t.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| perr(ln, format!("invalid literal '{tok}'")))?;
            if x == 0 {
                check_clause(n, &cur).map_err(|m| perr(cur_start, m))?;
                if let Some(k) = k_bound {
                    if cur.len() > k {
                        return Err(perr(cur_start, format!("clause width {} exceeds k={k}", cur.len())));
                    }
                }
                clauses.push(std::mem::take(&mut cur));
            } else {
                if x.unsigned_abs() as usize > n {
                    return Err(perr(ln, format!("literal {x} out of range for {n} variables")));
                }
                if cur.is_empty() {
                    cur_start = ln;
                }
                cur.push(Lit::from_dimacs(x));
            }
        }
    }
    let (n, m, hl) = header.ok_or_else(|| perr(0, "missing problem line"))?;
    if !cur.is_empty() {
        return Err(perr(cur_start, "unterminated clause"));
    }
    if m != clauses.len() {
        return Err(perr(hl, format!("header declares {m} clauses but {} given", clauses.len())));
    }
    CnfFormula::new(n, clauses)
}

pub fn write_cnf(f: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.num_vars(), f.clauses().len());
    for c in f.clauses() {
        for l in c {
            write!(s, "{} ", l.to_dimacs()).unwrap();
        }
        s.push_str("0\n");
    }
    s
}
