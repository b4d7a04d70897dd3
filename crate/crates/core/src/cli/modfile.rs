//! The line-oriented module file format.
//!
//! ```text
//! # comment
//! umodule NAME
//! k 2            # or: k inf
//! maxdeg 10
//! gen x 3
//! gen y 5
//! sq 1 x = y     # Sq_1 x = y; targets may be summed with '+', or be 0
//! ```
//!
//! Statements may also be separated by `;`. Squares that are not declared
//! act as zero.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;
use crate::unstable::{validate, FiniteUModule, Level};

struct SqLine {
    line: usize,
    j: usize,
    src: String,
    dst: Vec<String>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_nat(line: usize, what: &str, tok: Option<&str>) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("{what} must be a natural number, got '{tok}'")))
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && !l.contains(['+', '=', '#', ';']) && l != "0"
}

/// Parses and validates a module file. Syntax and degree-rule problems are
/// [`Error::Parse`]; relation failures are [`Error::Validation`].
pub fn parse_module_file(text: &str) -> Result<FiniteUModule> {
    let mut name = None;
    let mut k = None;
    let mut max_deg = None;
    let mut gens: Vec<(usize, String, usize)> = Vec::new();
    let mut sqs: Vec<SqLine> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        for stmt in content.split(';') {
            let toks: Vec<&str> = stmt.split_whitespace().collect();
            let Some(&head) = toks.first() else {
                continue;
            };
            match head {
                "umodule" => {
                    if toks.len() != 2 {
                        return Err(parse_err(line, "expected 'umodule NAME'"));
                    }
                    name = Some(toks[1].to_string());
                }
                "k" => {
                    if toks.len() != 2 {
                        return Err(parse_err(line, "expected 'k INT' or 'k inf'"));
                    }
                    k = Some(toks[1].parse::<Level>().map_err(|e| parse_err(line, e))?);
                }
                "maxdeg" => {
                    if toks.len() != 2 {
                        return Err(parse_err(line, "expected 'maxdeg INT'"));
                    }
                    max_deg = Some(parse_nat(line, "maxdeg", toks.get(1).copied())?);
                }
                "gen" => {
                    if toks.len() != 3 {
                        return Err(parse_err(line, "expected 'gen LABEL DEG'"));
                    }
                    if !valid_label(toks[1]) {
                        return Err(parse_err(line, format!("invalid label '{}'", toks[1])));
                    }
                    gens.push((line, toks[1].to_string(), parse_nat(line, "degree", Some(toks[2]))?));
                }
                "sq" => {
                    if toks.len() < 5 || toks[3] != "=" {
                        return Err(parse_err(line, "expected 'sq J SRC = DST [+ DST]*' or 'sq J SRC = 0'"));
                    }
                    let j = parse_nat(line, "square index", Some(toks[1]))?;
                    let rhs = &toks[4..];
                    let dst = if rhs == ["0"] {
                        Vec::new()
                    } else {
                        let mut dst = Vec::new();
                        for (i, t) in rhs.iter().enumerate() {
                            if i % 2 == 1 {
                                if *t != "+" {
                                    return Err(parse_err(line, format!("expected '+', got '{t}'")));
                                }
                            } else {
                                dst.push(t.to_string());
                            }
                        }
                        if rhs.len().is_multiple_of(2) {
                            return Err(parse_err(line, "dangling '+'"));
                        }
                        dst
                    };
                    sqs.push(SqLine {
                        line,
                        j,
                        src: toks[2].to_string(),
                        dst,
                    });
                }
                other => return Err(parse_err(line, format!("unknown statement '{other}'"))),
            }
        }
    }
    let name = name.ok_or_else(|| parse_err(0, "missing 'umodule NAME'"))?;
    let k = k.ok_or_else(|| parse_err(0, "missing 'k'"))?;
    let max_deg = max_deg.ok_or_else(|| parse_err(0, "missing 'maxdeg'"))?;

    let mut m = FiniteUModule::new(name, k, max_deg);
    let mut where_: HashMap<String, (usize, usize)> = HashMap::new();
    for (line, label, d) in gens {
        if d > max_deg {
            return Err(parse_err(line, format!("degree {d} of '{label}' exceeds maxdeg {max_deg}")));
        }
        if where_.contains_key(&label) {
            return Err(parse_err(line, format!("duplicate label '{label}'")));
        }
        let i = m.add_basis(label.clone(), d);
        where_.insert(label, (d, i));
    }

    let mut identity_violations = Vec::new();
    let mut matrices: BTreeMap<(usize, usize), BitMatrix> = BTreeMap::new();
    let mut seen: HashMap<(usize, String), usize> = HashMap::new();
    for sq in sqs {
        let &(d, c) = where_
            .get(&sq.src)
            .ok_or_else(|| parse_err(sq.line, format!("unknown label '{}'", sq.src)))?;
        if let Some(prev) = seen.insert((sq.j, sq.src.clone()), sq.line) {
            return Err(parse_err(sq.line, format!("Sq_{} {} already given on line {prev}", sq.j, sq.src)));
        }
        if sq.j > d {
            return Err(parse_err(sq.line, format!("Sq_{} on '{}' of degree {d} needs j <= {d}", sq.j, sq.src)));
        }
        if sq.j < d && !k.allows(sq.j) {
            return Err(parse_err(sq.line, format!("Sq_{} is not available at level k = {k}", sq.j)));
        }
        let tgt = 2 * d - sq.j;
        let mut rows = Vec::new();
        for l in &sq.dst {
            let &(dd, r) = where_
                .get(l)
                .ok_or_else(|| parse_err(sq.line, format!("unknown label '{l}'")))?;
            if dd != tgt {
                return Err(parse_err(
                    sq.line,
                    format!("'{l}' has degree {dd}, but Sq_{} on degree {d} lands in degree {tgt}", sq.j),
                ));
            }
            rows.push(r);
        }
        if sq.j == d {
            // Sq_d on degree d is the identity
            let mut ones: Vec<usize> = Vec::new();
            for r in rows {
                if let Some(p) = ones.iter().position(|&x| x == r) {
                    ones.remove(p);
                } else {
                    ones.push(r);
                }
            }
            if ones != [c] {
                identity_violations.push(format!("line {}: Sq_{} on degree {d} must be the identity", sq.line, sq.j));
            }
            continue;
        }
        if tgt > max_deg {
            if !rows.is_empty() {
                return Err(parse_err(sq.line, format!("Sq_{} {} lands beyond maxdeg", sq.j, sq.src)));
            }
            continue;
        }
        let a = matrices
            .entry((sq.j, d))
            .or_insert_with(|| BitMatrix::zeros(m.dim(tgt), m.dim(d)));
        for r in rows {
            a.set(r, c, !a.get(r, c));
        }
    }
    for ((j, d), a) in matrices {
        m.set_action(j, d, a).map_err(|e| parse_err(0, e.to_string()))?;
    }
    let mut violations = identity_violations;
    violations.extend(validate(&m));
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    Ok(m)
}

/// Renders a module in the file format; parsing the result gives back the
/// same module.
pub fn write_module_file(m: &FiniteUModule) -> String {
    let mut out = format!("umodule {}\nk {}\nmaxdeg {}\n", m.name().replace(char::is_whitespace, "_"), m.k(), m.max_deg());
    for d in 0..=m.max_deg() {
        for l in m.labels(d) {
            out.push_str(&format!("gen {l} {d}\n"));
        }
    }
    for (j, d) in m.squares() {
        let Some(a) = m.stored(j, d) else {
            continue;
        };
        let tgt = 2 * d - j;
        for c in 0..a.cols() {
            let col = a.column(c);
            if col.is_zero() {
                continue;
            }
            let dst: Vec<&str> = col.iter_ones().map(|r| m.labels(tgt)[r].as_str()).collect();
            out.push_str(&format!("sq {j} {} = {}\n", m.labels(d)[c], dst.join(" + ")));
        }
    }
    out
}
