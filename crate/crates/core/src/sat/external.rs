//! Running a SAT-competition style solver as a child process.

use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use super::{SatResult, UnknownReason};

/// Parse solver standard output. `num_vars` sizes the model.
pub fn parse_solver_output(text: &str, num_vars: usize) -> SatResult {
    let mut status: Option<&str> = None;
    let mut model = vec![false; num_vars];
    let mut saw_values = false;
    for line in text.lines() {
        let line = line.trim_end();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(rest.trim());
        } else if let Some(rest) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            for tok in rest.split_whitespace() {
                let Ok(l) = tok.parse::<i64>() else {
                    return SatResult::Unknown(UnknownReason::SolverError(format!("bad value token `{tok}`")));
                };
                if l == 0 {
                    continue;
                }
                let v = l.unsigned_abs() as usize;
                if v > num_vars {
                    return SatResult::Unknown(UnknownReason::SolverError(format!(
                        "value {l} exceeds {num_vars} variables"
                    )));
                }
                model[v - 1] = l > 0;
                saw_values = true;
            }
        }
    }
    match status {
        Some("SATISFIABLE") if saw_values || num_vars == 0 => SatResult::Sat(model),
        Some("SATISFIABLE") => SatResult::Unknown(UnknownReason::SolverError("SATISFIABLE without values".into())),
        Some("UNSATISFIABLE") => SatResult::Unsat,
        Some("UNKNOWN") => SatResult::Unknown(UnknownReason::SolverError("solver answered UNKNOWN".into())),
        Some(other) => SatResult::Unknown(UnknownReason::SolverError(format!("unrecognized status `{other}`"))),
        None => SatResult::Unknown(UnknownReason::SolverError("no status line".into())),
    }
}

fn header_vars(cnf_path: &Path) -> std::io::Result<usize> {
    let file = std::fs::File::open(cnf_path)?;
    for line in BufReader::new(file).lines() {
        let line = line?;
        if let Some(rest) = line.trim().strip_prefix("p cnf") {
            return rest
                .split_whitespace()
                .next()
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| std::io::Error::other("bad DIMACS header"));
        }
    }
    Err(std::io::Error::other("missing DIMACS header"))
}

/// Expand a command template into program and arguments.
pub fn expand_command(template: &str, cnf_path: &Path, seed: Option<u64>) -> Vec<String> {
    let path = cnf_path.to_string_lossy();
    let seed = seed.unwrap_or(0).to_string();
    let mut args: Vec<String> = template
        .split_whitespace()
        .map(|t| t.replace("{cnf}", &path).replace("{seed}", &seed))
        .collect();
    if !template.contains("{cnf}") {
        args.push(path.into_owned());
    }
    args
}

/// Run the solver described by `command` on the DIMACS file at `cnf_path`.
pub fn run_command(
    command: &str,
    cnf_path: &Path,
    seed: Option<u64>,
    timeout: Duration,
    cancel: Option<&Arc<AtomicBool>>,
) -> SatResult {
    let num_vars = match header_vars(cnf_path) {
        Ok(n) => n,
        Err(e) => return SatResult::Unknown(UnknownReason::SolverError(format!("cannot read CNF: {e}"))),
    };
    let args = expand_command(command, cnf_path, seed);
    let Some((program, rest)) = args.split_first() else {
        return SatResult::Unknown(UnknownReason::SolverError("empty solver command".into()));
    };
    let mut child = match Command::new(program)
        .args(rest)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return SatResult::Unknown(UnknownReason::SolverError(format!("cannot start `{program}`: {e}"))),
    };
    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let deadline = Instant::now() + timeout;
    let stopped = loop {
        match child.try_wait() {
            Ok(Some(_)) => break None,
            Ok(None) => {}
            Err(e) => break Some(UnknownReason::SolverError(e.to_string())),
        }
        if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            break Some(UnknownReason::Cancelled);
        }
        if Instant::now() >= deadline {
            break Some(UnknownReason::Timeout);
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    if let Some(reason) = stopped {
        let _ = child.kill();
        let _ = child.wait();
        let _ = reader.join();
        return SatResult::Unknown(reason);
    }
    let text = reader.join().unwrap_or_default();
    parse_solver_output(&text, num_vars)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_interleaved_output() {
        let out = "c banner\ns SATISFIABLE\nv 1 -2\nc stats\nv 3 0\n";
        assert_eq!(parse_solver_output(out, 3), SatResult::Sat(vec![true, false, true]));
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 3), SatResult::Unsat);
        assert!(matches!(parse_solver_output("garbage", 3), SatResult::Unknown(_)));
        assert!(matches!(
            parse_solver_output("s SATISFIABLE\n", 3),
            SatResult::Unknown(_)
        ));
    }

    #[test]
    fn template_expansion() {
        let p = Path::new("/tmp/x.cnf");
        assert_eq!(expand_command("kissat -q", p, None), vec!["kissat", "-q", "/tmp/x.cnf"]);
        assert_eq!(
            expand_command("cadical --seed={seed} {cnf}", p, Some(7)),
            vec!["cadical", "--seed=7", "/tmp/x.cnf"]
        );
    }
}
