//! Text format of proof scripts and theories.
//!
//! ```text
//! logic gl
//! footprint a: x y
//! 1. p -> p | q ; taut
//! 2. <a*> p -> <a*> (p | q) ; M 1
//! ```

use std::fmt::Write;

use super::{Ax, Calculus, Just, ProofLine, ProofScript, Theory};
use crate::surface::{parse_gl, parse_mu, print_gl, print_mu};
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ScriptError {
    /// 1-based line of the source text.
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ScriptError> {
    Err(ScriptError { line, msg: msg.into() })
}

fn parse_formula(calc: Calculus, text: &str, line: usize) -> Result<Formula, ScriptError> {
    let r = match calc {
        Calculus::Mu => parse_mu(text).map(Formula::Mu),
        Calculus::Gl => parse_gl(text).map(Formula::Gl),
    };
    r.or_else(|e| err(line, e.to_string()))
}

fn parse_logic(rest: &str, line: usize) -> Result<Calculus, ScriptError> {
    match rest.trim() {
        "mu" => Ok(Calculus::Mu),
        "gl" => Ok(Calculus::Gl),
        other => err(line, format!("unknown logic {:?}", other)),
    }
}

fn parse_just(text: &str, line: usize) -> Result<Just, ScriptError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let num = |k: usize| -> Result<usize, ScriptError> {
        match words.get(k).map(|w| w.parse::<usize>()) {
            Some(Ok(n)) => Ok(n),
            _ => err(line, format!("justification {:?} needs a line number", words[0])),
        }
    };
    let Some(&head) = words.first() else {
        return err(line, "missing justification");
    };
    let arity = match head {
        "mp" => 3,
        "hyp" | "Ma" | "M" | "FPmu" | "FPstar" | "rename" => 2,
        _ => 1,
    };
    if words.len() != arity {
        return err(line, format!("justification {:?} takes {} argument(s)", head, arity - 1));
    }
    Ok(match head {
        "taut" => Just::Taut,
        "eq" => Just::Eq,
        "hyp" => Just::Hyp(num(1)?),
        "mp" => Just::Mp(num(1)?, num(2)?),
        "Ma" => Just::Ma(num(1)?),
        "M" => Just::M(num(1)?),
        "FPmu" => Just::FpMu(num(1)?),
        "FPstar" => Just::FpStar(num(1)?),
        "rename" => Just::Rename(num(1)?),
        _ => match Ax::ALL.iter().find(|a| a.token() == head) {
            Some(&a) => Just::Axiom(a),
            None => return err(line, format!("unknown justification {:?}", head)),
        },
    })
}

pub fn print_just(j: &Just) -> String {
    match j {
        Just::Taut => "taut".into(),
        Just::Eq => "eq".into(),
        Just::Axiom(a) => a.token().into(),
        Just::Hyp(k) => format!("hyp {}", k),
        Just::Mp(i, j) => format!("mp {} {}", i, j),
        Just::Ma(i) => format!("Ma {}", i),
        Just::M(i) => format!("M {}", i),
        Just::FpMu(i) => format!("FPmu {}", i),
        Just::FpStar(i) => format!("FPstar {}", i),
        Just::Rename(i) => format!("rename {}", i),
    }
}

fn content(raw: &str) -> &str {
    match raw.find('#') {
        Some(k) => raw[..k].trim(),
        None => raw.trim(),
    }
}

/// Parses a proof script. The `logic` header must precede the first line.
pub fn parse_proof(text: &str) -> Result<ProofScript, ScriptError> {
    let mut script: Option<ProofScript> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = content(raw);
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix("logic ") {
            if script.is_some() {
                return err(line, "duplicate logic header");
            }
            script = Some(ProofScript::new(parse_logic(rest, line)?));
            continue;
        }
        let Some(sc) = script.as_mut() else {
            return err(line, "expected `logic mu` or `logic gl` first");
        };
        if let Some(rest) = s.strip_prefix("footprint ") {
            let Some((name, vars)) = rest.split_once(':') else {
                return err(line, "expected `footprint name: vars`");
            };
            sc.footprints.insert(name.trim().to_string(), vars.split_whitespace().map(String::from).collect());
            continue;
        }
        let Some((num, rest)) = s.split_once('.') else {
            return err(line, "expected `n. formula ; justification`");
        };
        let number: usize = match num.trim().parse() {
            Ok(n) => n,
            Err(_) => return err(line, format!("bad line number {:?}", num.trim())),
        };
        let Some(semi) = rest.rfind(';') else {
            return err(line, "missing `;` before the justification");
        };
        let formula = parse_formula(sc.calculus, rest[..semi].trim(), line)?;
        let just = parse_just(&rest[semi + 1..], line)?;
        sc.lines.push(ProofLine { number, formula, just });
    }
    script.map_or_else(|| err(0, "empty proof script"), Ok)
}

pub fn print_formula(f: &Formula) -> String {
    match f {
        Formula::Mu(m) => print_mu(m),
        Formula::Gl(g) => print_gl(g),
    }
}

pub fn print_proof(s: &ProofScript) -> String {
    let mut out = String::new();
    let logic = if s.calculus == Calculus::Mu { "mu" } else { "gl" };
    writeln!(out, "logic {}", logic).unwrap();
    for (name, vars) in &s.footprints {
        writeln!(out, "footprint {}: {}", name, vars.join(" ")).unwrap();
    }
    for l in &s.lines {
        writeln!(out, "{}. {} ; {}", l.number, print_formula(&l.formula), print_just(&l.just)).unwrap();
    }
    out
}

/// A theory file: `logic` header, optional `name`, then one formula per line.
pub fn parse_theory(text: &str) -> Result<(Calculus, Theory), ScriptError> {
    let mut calc = None;
    let mut th = Theory::default();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = content(raw);
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix("logic ") {
            calc = Some(parse_logic(rest, line)?);
        } else if let Some(rest) = s.strip_prefix("name ") {
            th.name = rest.trim().to_string();
        } else {
            let Some(c) = calc else {
                return err(line, "expected `logic mu` or `logic gl` first");
            };
            th.formulas.push(parse_formula(c, s, line)?);
        }
    }
    calc.map_or_else(|| err(0, "empty theory"), |c| Ok((c, th)))
}

pub fn print_theory(calc: Calculus, th: &Theory) -> String {
    let mut out = format!("logic {}\n", if calc == Calculus::Mu { "mu" } else { "gl" });
    if !th.name.is_empty() {
        writeln!(out, "name {}", th.name).unwrap();
    }
    for f in &th.formulas {
        writeln!(out, "{}", print_formula(f)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "logic gl\nfootprint a: x\n1. p -> p | q ; taut\n2. <a*> p -> <a*> (p | q) ; M 1\n";
        let s = parse_proof(text).unwrap();
        assert_eq!(s.lines.len(), 2);
        assert_eq!(s.lines[1].just, Just::M(1));
        assert_eq!(parse_proof(&print_proof(&s)).unwrap(), s);
    }

    #[test]
    fn unknown_justification_is_named() {
        let e = parse_proof("logic mu\n1. p | !p ; magic\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("magic"), "{}", e.msg);
    }
}
