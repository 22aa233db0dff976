//! DIMACS CNF reading and writing.

use std::io::{self, Write};

use crate::encoder::CnfInstance;
use crate::error::SatError;

/// Write `cnf` in DIMACS form; returns the number of bytes written.
pub fn write_dimacs<W: Write>(cnf: &CnfInstance, sink: &mut W) -> io::Result<usize> {
    write_clauses(cnf.num_vars, &cnf.clauses, sink)
}

pub fn write_clauses<W: Write>(num_vars: usize, clauses: &[Vec<i32>], sink: &mut W) -> io::Result<usize> {
    let mut buf = String::with_capacity(16 + clauses.len() * 12);
    buf.push_str(&format!("p cnf {} {}\n", num_vars, clauses.len()));
    for c in clauses {
        for l in c {
            buf.push_str(&l.to_string());
            buf.push(' ');
        }
        buf.push_str("0\n");
    }
    sink.write_all(buf.as_bytes())?;
    Ok(buf.len())
}

pub fn to_dimacs_string(cnf: &CnfInstance) -> String {
    let mut out = Vec::new();
    write_dimacs(cnf, &mut out).expect("writing to memory cannot fail");
    String::from_utf8(out).expect("DIMACS output is ASCII")
}

/// Parse DIMACS text into `(num_vars, clauses)`.
pub fn parse_dimacs(text: &str) -> Result<(usize, Vec<Vec<i32>>), SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v
                        .parse()
                        .map_err(|_| SatError::Dimacs(format!("bad header `{line}`")))?;
                    let c = c
                        .parse()
                        .map_err(|_| SatError::Dimacs(format!("bad header `{line}`")))?;
                    header = Some((v, c));
                }
                _ => return Err(SatError::Dimacs(format!("bad header `{line}`"))),
            }
            continue;
        }
        let (nv, _) = header.ok_or_else(|| SatError::Dimacs("clause before header".into()))?;
        for tok in line.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| SatError::Dimacs(format!("bad literal `{tok}`")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > nv {
                return Err(SatError::Dimacs(format!("literal {l} exceeds {nv} variables")));
            } else {
                current.push(l);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (nv, nc) = header.ok_or_else(|| SatError::Dimacs("missing header".into()))?;
    if nc != clauses.len() {
        return Err(SatError::Dimacs(format!(
            "header declares {nc} clauses, found {}",
            clauses.len()
        )));
    }
    Ok((nv, clauses))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_instance() {
        let mut out = Vec::new();
        let n = write_clauses(0, &[], &mut out).unwrap();
        assert_eq!(out, b"p cnf 0 0\n");
        assert_eq!(n, 10);
    }

    #[test]
    fn two_clauses() {
        let mut out = Vec::new();
        write_clauses(2, &[vec![-1, 2], vec![1, -2]], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "p cnf 2 2\n-1 2 0\n1 -2 0\n");
    }

    #[test]
    fn round_trip_with_comments() {
        let text = "c hello\np cnf 3 2\n1 -3\n 0 2 0\nc bye\n";
        let (nv, cs) = parse_dimacs(text).unwrap();
        assert_eq!(nv, 3);
        assert_eq!(cs, vec![vec![1, -3], vec![2]]);
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    }
}
