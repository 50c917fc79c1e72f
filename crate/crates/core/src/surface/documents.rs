//! JSON documents for finite structures and valuations.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde_json::{Map, Value};

use crate::semantics::{Caps, FiniteStructure, Function, Predicate, StateSet, Transition, Valuation};

/// Every problem found in a document, each with the path of the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentError {
    pub problems: Vec<(String, String)>,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (path, msg)) in self.problems.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", path, msg)?;
        }
        Ok(())
    }
}

impl std::error::Error for DocumentError {}

struct Collector {
    problems: Vec<(String, String)>,
}

impl Collector {
    fn err(&mut self, path: impl Into<String>, msg: impl Into<String>) {
        self.problems.push((path.into(), msg.into()));
    }

    fn finish<T>(self, v: T) -> Result<T, DocumentError> {
        if self.problems.is_empty() {
            Ok(v)
        } else {
            Err(DocumentError { problems: self.problems })
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn element(s: &FiniteStructure, v: &Value, path: &str, c: &mut Collector) -> Option<usize> {
    match scalar(v) {
        Some(name) => match s.element(&name) {
            Some(i) => Some(i),
            None => {
                c.err(path, format!("{} is not a domain element", name));
                None
            }
        },
        None => {
            c.err(path, "expected a domain element");
            None
        }
    }
}

/// Reads a partial state `{var: element}` whose keys must be exactly `vars`.
fn partial_state(s: &FiniteStructure, v: &Value, vars: &[String], path: &str, c: &mut Collector) -> Option<Vec<usize>> {
    let Some(obj) = v.as_object() else {
        c.err(path, "expected an object mapping variables to elements");
        return None;
    };
    let mut ok = true;
    for k in obj.keys() {
        if !vars.contains(k) {
            c.err(format!("{}.{}", path, k), format!("variable {} is not declared here", k));
            ok = false;
        }
    }
    let mut out = Vec::new();
    for x in vars {
        match obj.get(x) {
            Some(e) => match element(s, e, &format!("{}.{}", path, x), c) {
                Some(i) => out.push(i),
                None => ok = false,
            },
            None => {
                c.err(path, format!("missing variable {}", x));
                ok = false;
            }
        }
    }
    ok.then_some(out)
}

fn string_list(v: Option<&Value>, path: &str, c: &mut Collector) -> Vec<String> {
    match v {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .filter_map(|(i, x)| {
                let r = scalar(x);
                if r.is_none() {
                    c.err(format!("{}[{}]", path, i), "expected a string");
                }
                r
            })
            .collect(),
        Some(_) => {
            c.err(path, "expected an array");
            Vec::new()
        }
    }
}

fn object<'v>(v: Option<&'v Value>, path: &str, c: &mut Collector) -> Option<&'v Map<String, Value>> {
    match v {
        None => None,
        Some(Value::Object(m)) => Some(m),
        Some(_) => {
            c.err(path, "expected an object");
            None
        }
    }
}

fn tuple(s: &FiniteStructure, v: &Value, path: &str, c: &mut Collector) -> Option<Vec<usize>> {
    let Some(items) = v.as_array() else {
        c.err(path, "expected an array");
        return None;
    };
    let vals: Vec<Option<usize>> =
        items.iter().enumerate().map(|(i, e)| element(s, e, &format!("{}[{}]", path, i), c)).collect();
    vals.into_iter().collect()
}

fn all_tuples(d: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out.into_iter().flat_map(|t| (0..d).map(move |v| [t.clone(), vec![v]].concat())).collect();
    }
    out
}

fn parse_caps(v: Option<&Value>, c: &mut Collector) -> Caps {
    let mut caps = Caps::default();
    if let Some(m) = object(v, "caps", c) {
        for (k, val) in m {
            let Some(n) = val.as_u64() else {
                c.err(format!("caps.{}", k), "expected a nonnegative integer");
                continue;
            };
            match k.as_str() {
                "max_domain" => caps.max_domain = n as usize,
                "max_support" => caps.max_support = n as usize,
                "max_states" => caps.max_states = n as usize,
                _ => c.err(format!("caps.{}", k), "unknown cap"),
            }
        }
    }
    caps
}

const STRUCTURE_KEYS: &[&str] = &["domain", "constants", "functions", "predicates", "support", "transitions", "caps"];

pub fn parse_structure(text: &str) -> Result<FiniteStructure, DocumentError> {
    let mut c = Collector { problems: Vec::new() };
    let root: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            c.err("$", format!("invalid JSON: {}", e));
            return c.finish(FiniteStructure::new(Vec::new(), Vec::new()));
        }
    };
    let Some(obj) = root.as_object() else {
        c.err("$", "expected an object");
        return c.finish(FiniteStructure::new(Vec::new(), Vec::new()));
    };
    for k in obj.keys() {
        if !STRUCTURE_KEYS.contains(&k.as_str()) {
            c.err(k.clone(), "unknown field");
        }
    }
    let domain = string_list(obj.get("domain"), "domain", &mut c);
    if domain.is_empty() {
        c.err("domain", "domain must be a nonempty list");
    }
    if domain.iter().collect::<HashSet<_>>().len() != domain.len() {
        c.err("domain", "duplicate domain element");
    }
    let support = string_list(obj.get("support"), "support", &mut c);
    if support.iter().collect::<HashSet<_>>().len() != support.len() {
        c.err("support", "duplicate support variable");
    }
    let mut s = FiniteStructure::new(domain, support);
    s.caps = parse_caps(obj.get("caps"), &mut c);
    s.constants.clear();
    if let Some(m) = object(obj.get("constants"), "constants", &mut c) {
        for (k, v) in m {
            if let Some(e) = element(&s, v, &format!("constants.{}", k), &mut c) {
                s.constants.insert(k.clone(), e);
            }
        }
    }
    if let (Some(&a), Some(&b)) = (s.constants.get("0"), s.constants.get("1")) {
        if a == b {
            c.err("constants", "0 and 1 must denote distinct elements");
        }
    }
    let d = s.domain.len();
    if let Some(m) = object(obj.get("functions"), "functions", &mut c) {
        for (name, spec) in m {
            let path = format!("functions.{}", name);
            let Some(arity) = spec.get("arity").and_then(Value::as_u64).map(|a| a as usize) else {
                c.err(format!("{}.arity", path), "expected a nonnegative integer");
                continue;
            };
            let mut table = HashMap::new();
            match spec.get("table").and_then(Value::as_array) {
                Some(rows) => {
                    for (i, row) in rows.iter().enumerate() {
                        let rp = format!("{}.table[{}]", path, i);
                        let Some(vals) = tuple(&s, row, &rp, &mut c) else { continue };
                        if vals.len() != arity + 1 {
                            c.err(rp, format!("expected {} arguments and a result", arity));
                            continue;
                        }
                        let (args, res) = vals.split_at(arity);
                        if let Some(prev) = table.insert(args.to_vec(), res[0]) {
                            if prev != res[0] {
                                c.err(rp, "conflicting entry for the same arguments");
                            }
                        }
                    }
                }
                None => c.err(format!("{}.table", path), "expected an array of rows"),
            }
            if d > 0 && d <= s.caps.max_domain {
                for t in all_tuples(d, arity) {
                    if !table.contains_key(&t) {
                        let names: Vec<&str> = t.iter().map(|&v| s.domain[v].as_str()).collect();
                        c.err(path.clone(), format!("no value for ({})", names.join(", ")));
                    }
                }
            }
            s.functions.insert(name.clone(), Function { arity, table });
        }
    }
    if let Some(m) = object(obj.get("predicates"), "predicates", &mut c) {
        for (name, spec) in m {
            let path = format!("predicates.{}", name);
            let (declared, rows) = match spec {
                Value::Array(rows) => (None, rows),
                Value::Object(o) => match o.get("tuples").and_then(Value::as_array) {
                    Some(rows) => (o.get("arity").and_then(Value::as_u64).map(|a| a as usize), rows),
                    None => {
                        c.err(format!("{}.tuples", path), "expected an array");
                        continue;
                    }
                },
                _ => {
                    c.err(path, "expected an array of tuples");
                    continue;
                }
            };
            let mut tuples = HashSet::new();
            let mut arity = declared;
            for (i, row) in rows.iter().enumerate() {
                let rp = format!("{}[{}]", path, i);
                let Some(vals) = tuple(&s, row, &rp, &mut c) else { continue };
                match arity {
                    Some(a) if a != vals.len() => c.err(rp, format!("expected {} arguments", a)),
                    _ => {
                        arity = Some(vals.len());
                        tuples.insert(vals);
                    }
                }
            }
            s.predicates.insert(name.clone(), Predicate { arity: arity.unwrap_or(0), tuples });
        }
    }
    if let Some(m) = object(obj.get("transitions"), "transitions", &mut c) {
        for (name, spec) in m {
            let path = format!("transitions.{}", name);
            let footprint = string_list(spec.get("footprint"), &format!("{}.footprint", path), &mut c);
            for x in &footprint {
                if !s.support.contains(x) {
                    c.err(format!("{}.footprint", path), format!("{} is not in the support", x));
                }
            }
            let mut pairs = Vec::new();
            match spec.get("pairs").and_then(Value::as_array) {
                Some(rows) => {
                    for (i, row) in rows.iter().enumerate() {
                        let rp = format!("{}.pairs[{}]", path, i);
                        match row.as_array().map(Vec::as_slice) {
                            Some([a, b]) => {
                                let pre = partial_state(&s, a, &footprint, &format!("{}[0]", rp), &mut c);
                                let post = partial_state(&s, b, &footprint, &format!("{}[1]", rp), &mut c);
                                if let (Some(pre), Some(post)) = (pre, post) {
                                    pairs.push((pre, post));
                                }
                            }
                            _ => c.err(rp, "expected a pair of states"),
                        }
                    }
                }
                None => c.err(format!("{}.pairs", path), "expected an array of pairs"),
            }
            s.transitions.insert(name.clone(), Transition { footprint, pairs });
        }
    }
    if c.problems.is_empty() {
        if let Err(e) = s.num_states() {
            c.err("support", e.to_string());
        }
    }
    c.finish(s)
}

/// Reads `{pvar: [state, ...]}` where each state assigns every support variable.
pub fn parse_valuation(text: &str, s: &FiniteStructure) -> Result<Valuation, DocumentError> {
    let mut c = Collector { problems: Vec::new() };
    let root: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            c.err("$", format!("invalid JSON: {}", e));
            return c.finish(Valuation::new());
        }
    };
    let n = match s.num_states() {
        Ok(n) => n,
        Err(e) => {
            c.err("$", e.to_string());
            return c.finish(Valuation::new());
        }
    };
    let mut sets = BTreeMap::new();
    match root.as_object() {
        Some(m) => {
            for (x, states) in m {
                if !x.chars().next().is_some_and(|ch| ch.is_ascii_uppercase()) {
                    c.err(x.clone(), "propositional variables start with an uppercase letter");
                }
                let mut set = StateSet::empty(n);
                match states.as_array() {
                    Some(items) => {
                        for (i, st) in items.iter().enumerate() {
                            if let Some(v) = partial_state(s, st, &s.support, &format!("{}[{}]", x, i), &mut c) {
                                set.insert(s.index(&v));
                            }
                        }
                    }
                    None => c.err(x.clone(), "expected an array of states"),
                }
                sets.insert(x.clone(), set);
            }
        }
        None => c.err("$", "expected an object"),
    }
    c.finish(Valuation { sets })
}

/// Renders a state as `{x: 0, y: 1}`.
pub fn format_state(s: &FiniteStructure, state: &[usize]) -> String {
    let parts: Vec<String> = s.support.iter().zip(state).map(|(x, &v)| format!("{}: {}", x, s.domain[v])).collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const TOGGLE: &str = r#"{
        "domain": ["0", "1"],
        "constants": {"0": "0", "1": "1"},
        "support": ["x"],
        "transitions": {"tog": {"footprint": ["x"], "pairs": [[{"x": "0"}, {"x": "1"}], [{"x": "1"}, {"x": "0"}]]}}
    }"#;

    #[test]
    fn toggle_structure_has_two_states() {
        let s = parse_structure(TOGGLE).unwrap();
        assert_eq!(s.num_states().unwrap(), 2);
        assert_eq!(s.transitions["tog"].pairs.len(), 2);
    }

    #[test]
    fn undeclared_variable_in_pair_is_rejected() {
        let bad = TOGGLE.replace(r#"[{"x": "0"}, {"x": "1"}]"#, r#"[{"x": "0", "y": "1"}, {"x": "1"}]"#);
        let e = parse_structure(&bad).unwrap_err();
        assert!(e.problems.iter().any(|(p, _)| p.contains("pairs[0][0].y")), "{}", e);
    }

    #[test]
    fn partial_function_lists_every_gap() {
        let doc = r#"{"domain": ["0","1","2"], "support": [],
            "functions": {"f": {"arity": 1, "table": [["0","1"]]}}}"#;
        let e = parse_structure(doc).unwrap_err();
        assert_eq!(e.problems.len(), 2, "{}", e);
    }

    #[test]
    fn valuation_states_are_checked() {
        let s = parse_structure(TOGGLE).unwrap();
        let om = parse_valuation(r#"{"X": [{"x": "1"}]}"#, &s).unwrap();
        assert_eq!(om.sets["X"].iter().collect::<Vec<_>>(), vec![1]);
        assert!(parse_valuation(r#"{"X": [{"x": "7"}]}"#, &s).is_err());
    }
}
