//! Scripted scorer double speaking protocol v1 on stdin/stdout.
//!
//! ```text
//! docpredict-scripted-scorer constant [VALUE]
//! docpredict-scripted-scorer oracle GOLD_TSV     # lines: query_id <TAB> doc_id
//! docpredict-scripted-scorer overlap
//! docpredict-scripted-scorer hang | bad | error | silent
//! ```

use std::collections::{HashMap, HashSet};
use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use docpredict::hybrid::{DocScore, Ready, ScoreRequest, ScoreResponse};

enum Mode {
    Constant(f64),
    Oracle(HashMap<String, String>),
    Overlap,
    Hang,
    Bad,
    Error,
    Silent,
}

fn parse_args() -> Result<Mode, String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mode = match args.first().map(String::as_str) {
        Some("constant") => Mode::Constant(match args.get(1) {
            Some(v) => v.parse().map_err(|e| format!("bad value `{v}`: {e}"))?,
            None => 0.0,
        }),
        Some("oracle") => {
            let path = args.get(1).ok_or("oracle needs a gold file")?;
            let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            let gold = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| {
                    let (q, d) = l.split_once('\t').ok_or_else(|| format!("bad gold line `{l}`"))?;
                    Ok((q.to_string(), d.to_string()))
                })
                .collect::<Result<_, String>>()?;
            Mode::Oracle(gold)
        }
        Some("overlap") => Mode::Overlap,
        Some("hang") => Mode::Hang,
        Some("bad") => Mode::Bad,
        Some("error") => Mode::Error,
        Some("silent") => Mode::Silent,
        other => return Err(format!("unknown mode {other:?}")),
    };
    Ok(mode)
}

fn respond(mode: &Mode, req: ScoreRequest) -> Option<ScoreResponse> {
    let score_all = |f: &dyn Fn(&docpredict::hybrid::Candidate) -> f64| {
        req.candidates
            .iter()
            .map(|c| DocScore {
                doc_id: c.doc_id.clone(),
                score: f(c),
            })
            .collect::<Vec<_>>()
    };
    let scores = match mode {
        Mode::Constant(v) => score_all(&|_| *v),
        Mode::Oracle(gold) => {
            let g = gold.get(&req.query_id);
            score_all(&|c| if Some(&c.doc_id) == g { 1.0 } else { 0.0 })
        }
        Mode::Overlap => {
            let q: HashSet<&str> = req.dialog_tokens.iter().map(String::as_str).collect();
            score_all(&|c| {
                let hits = c.doc_tokens.iter().filter(|t| q.contains(t.as_str())).count();
                hits as f64 / c.doc_tokens.len().max(1) as f64
            })
        }
        Mode::Hang => return None,
        Mode::Bad => {
            let mut s = score_all(&|_| 0.5);
            s.pop();
            s
        }
        Mode::Error => {
            return Some(ScoreResponse {
                query_id: req.query_id,
                scores: vec![],
                error: Some("scripted failure".into()),
            })
        }
        Mode::Silent => unreachable!(),
    };
    Some(ScoreResponse {
        query_id: req.query_id,
        scores,
        error: None,
    })
}

fn main() -> ExitCode {
    let mode = match parse_args() {
        Ok(m) => m,
        Err(e) => {
            eprintln!("docpredict-scripted-scorer: {e}");
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if matches!(mode, Mode::Silent) {
        let _ = io::copy(&mut io::stdin().lock(), &mut io::sink());
        return ExitCode::SUCCESS;
    }
    let ready = serde_json::to_string(&Ready { ready: true }).unwrap();
    if writeln!(out, "{ready}").and_then(|_| out.flush()).is_err() {
        return ExitCode::FAILURE;
    }
    for line in io::stdin().lock().lines() {
        let Ok(line) = line else { break };
        let resp = match serde_json::from_str::<ScoreRequest>(&line) {
            Ok(req) => respond(&mode, req),
            Err(e) => Some(ScoreResponse {
                query_id: String::new(),
                scores: vec![],
                error: Some(format!("malformed request: {e}")),
            }),
        };
        match resp {
            Some(r) => {
                if writeln!(out, "{}", r.to_line()).and_then(|_| out.flush()).is_err() {
                    break;
                }
            }
            None => {}
        }
    }
    ExitCode::SUCCESS
}
