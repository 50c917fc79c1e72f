//! CSV formats for fields and reachability triples.
//!
//! A field file has the header `component,coefficient,<var>...` and one row
//! per monomial: the component variable, a rational coefficient and the
//! exponent of each variable. A triple file has rows `x..., y..., t, expected`
//! where `expected` is `reachable` or `unreachable`.

use num::Zero;

use super::numeric::ReachTriple;
use super::poly::{rational, Poly, PolyVec};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {0}: {1}")]
    Row(usize, String),
}

fn records(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes())
}

pub fn parse_field(text: &str) -> Result<PolyVec, FileError> {
    let mut rd = records(text);
    let header = rd.headers()?.clone();
    if header.len() < 3 || &header[0] != "component" || &header[1] != "coefficient" {
        return Err(FileError::Row(0, "header must be component,coefficient,<variables>".into()));
    }
    let vars: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
    let mut comps = vec![Poly::zero(); vars.len()];
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let bad = |m: &str| FileError::Row(row, m.to_string());
        if rec.len() != vars.len() + 2 {
            return Err(bad("wrong number of columns"));
        }
        let j = vars.iter().position(|v| v == &rec[0]).ok_or_else(|| bad("unknown component"))?;
        let c = rational(&rec[1]).map_err(|e| bad(&e.to_string()))?;
        let e = rec.iter().skip(2).map(|s| s.parse::<u32>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("bad exponent"))?;
        comps[j].add_term(e, c);
    }
    PolyVec::new(vars, comps).map_err(|e| FileError::Row(0, e.to_string()))
}

pub fn print_field(f: &PolyVec) -> String {
    let mut out = format!("component,coefficient,{}\n", f.vars.join(","));
    for (x, p) in f.vars.iter().zip(&f.comps) {
        for (e, c) in &p.terms {
            if !c.is_zero() {
                let es: Vec<String> = e.iter().map(u32::to_string).collect();
                out.push_str(&format!("{},{},{}\n", x, c, es.join(",")));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledTriple {
    pub triple: ReachTriple,
    pub reachable: bool,
}

pub fn parse_triples(text: &str, dim: usize) -> Result<Vec<LabeledTriple>, FileError> {
    let mut out = Vec::new();
    for (i, rec) in records(text).records().enumerate() {
        let rec = rec?;
        let bad = |m: &str| FileError::Row(i + 1, m.to_string());
        if rec.len() != 2 * dim + 2 {
            return Err(bad("expected x..., y..., t, expected"));
        }
        let nums = rec.iter().take(2 * dim + 1).map(|s| s.parse::<f64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("bad number"))?;
        let reachable = match &rec[2 * dim + 1] {
            "reachable" => true,
            "unreachable" => false,
            _ => return Err(bad("expected must be reachable or unreachable")),
        };
        let triple = ReachTriple { x: nums[..dim].to_vec(), y: nums[dim..2 * dim].to_vec(), t: nums[2 * dim] };
        out.push(LabeledTriple { triple, reachable });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trip() {
        let text = "component,coefficient,x,y\n# rotation\nx,1,0,1\ny,-1,1,0\n";
        let f = parse_field(text).unwrap();
        assert_eq!(f.eval(&[2.0, 3.0]), vec![3.0, -2.0]);
        assert_eq!(parse_field(&print_field(&f)).unwrap(), f);
        assert!(parse_field("component,coefficient,x\nz,1,0\n").is_err());
    }

    #[test]
    fn triples() {
        let ts = parse_triples("x,y,t,expected\n0,1,1,reachable\n0,3,1,unreachable\n", 1).unwrap();
        assert_eq!(ts.len(), 2);
        assert!(ts[0].reachable && !ts[1].reachable);
        assert_eq!(ts[1].triple.y, vec![3.0]);
        assert!(parse_triples("x,y,t,expected\n0,1,1,maybe\n", 1).is_err());
    }
}
