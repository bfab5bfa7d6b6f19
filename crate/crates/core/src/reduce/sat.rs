use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;

/// CNF formula with clauses of width 2 or 3 and at most three occurrences per variable.
///
/// Literals are `±v` with 1-based variable numbers, as in DIMACS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl SatFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, Error> {
        let mut occurrences = alloc::vec![0usize; num_vars];
        for (c, clause) in clauses.iter().enumerate() {
            if !(2..=3).contains(&clause.len()) {
                return Err(Error::Parse(format!("clause {} has {} literals, expected 2 or 3", c + 1, clause.len())));
            }
            for &lit in clause {
                let v = lit.unsigned_abs() as usize;
                if lit == 0 || v > num_vars {
                    return Err(Error::Parse(format!("clause {} mentions unknown variable {lit}", c + 1)));
                }
                occurrences[v - 1] += 1;
            }
        }
        if let Some(v) = occurrences.iter().position(|&k| k > 3) {
            return Err(Error::Parse(format!("variable {} occurs {} times (at most 3 allowed)", v + 1, occurrences[v])));
        }
        Ok(SatFormula { num_vars, clauses })
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Reads DIMACS CNF (`c` comments, optional `p cnf V C` header, `0`-terminated
/// clauses) or one parenthesised clause per line such as `(x1 ∨ ¬x2)`.
pub fn parse_sat(text: &str) -> Result<SatFormula, Error> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| Error::Parse(format!("line {}: bad header", ln + 1)))?;
                    let c = c.parse().map_err(|_| Error::Parse(format!("line {}: bad header", ln + 1)))?;
                    header = Some((v, c));
                }
                _ => return Err(Error::Parse(format!("line {}: bad header", ln + 1))),
            }
            continue;
        }
        if line.starts_with('(') {
            clauses.push(parse_infix(line).map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?);
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| Error::Parse(format!("line {}: bad literal {tok:?}", ln + 1)))?;
            if lit == 0 {
                clauses.push(core::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let max_var = clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
    let num_vars = match header {
        Some((v, c)) => {
            if c != clauses.len() {
                return Err(Error::Parse(format!("header announces {c} clauses, found {}", clauses.len())));
            }
            v
        }
        None => max_var,
    };
    SatFormula::new(num_vars, clauses)
}

fn parse_infix(line: &str) -> Result<Vec<i32>, String> {
    let body = line.trim_start_matches('(').trim_end_matches(')');
    let mut out = Vec::new();
    for part in body.split(['∨', '|']).map(str::trim) {
        let (neg, name) = match part.strip_prefix(['¬', '~', '-', '!']) {
            Some(rest) => (true, rest.trim()),
            None => (false, part),
        };
        let digits = name.trim_start_matches(|c: char| c.is_alphabetic());
        let v: i32 = digits.parse().map_err(|_| format!("bad literal {part:?}"))?;
        if v <= 0 {
            return Err(format!("bad literal {part:?}"));
        }
        out.push(if neg { -v } else { v });
    }
    Ok(out)
}
