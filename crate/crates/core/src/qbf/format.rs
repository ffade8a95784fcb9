//! QDIMACS, DIMACS and QCIR-G14 text formats.
//!
//! QDIMACS output numbers variables by their position in the prefix. With
//! names enabled a `c <n> <name>` line per variable precedes the header;
//! the reader uses such lines to restore names. A DNF part is written in an
//! extended form: header `p qbf <vars> <clauses> <terms>` and one
//! `t <lits> 0` line per term.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{is_identifier, Lit};

use super::{Block, Matrix, Qbf, Quant};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QdimacsOptions {
    /// Emit `c <n> <name>` lines.
    pub names: bool,
    /// Accept a DNF part and write the extended form.
    pub allow_dnf: bool,
}

fn numbering(q: &Qbf) -> (Vec<String>, HashMap<String, usize>) {
    let mut order: Vec<String> = q.prefix_vars().cloned().collect();
    let mut seen: BTreeSet<String> = order.iter().cloned().collect();
    for v in q.matrix.vars_in_order() {
        if seen.insert(v.clone()) {
            order.push(v);
        }
    }
    let index = order.iter().enumerate().map(|(i, v)| (v.clone(), i + 1)).collect();
    (order, index)
}

fn write_lits(out: &mut String, lits: &[Lit], index: &HashMap<String, usize>) {
    for l in lits {
        let n = index[&l.atom] as i64;
        let _ = write!(out, "{} ", if l.positive { n } else { -n });
    }
    out.push_str("0\n");
}

/// Serializes in QDIMACS. A DNF part is an error unless `allow_dnf` is set.
pub fn write_qdimacs(q: &Qbf, opts: QdimacsOptions) -> Result<String> {
    if q.matrix.dnf.is_some() && !opts.allow_dnf {
        return Err(Error::Unsupported("QDIMACS needs a CNF matrix; convert with prenex_cnf first".into()));
    }
    let (order, index) = numbering(q);
    let mut out = String::new();
    if opts.names {
        for (i, v) in order.iter().enumerate() {
            let _ = writeln!(out, "c {} {v}", i + 1);
        }
    }
    match &q.matrix.dnf {
        None => {
            let _ = writeln!(out, "p cnf {} {}", order.len(), q.matrix.cnf.len());
        }
        Some(d) => {
            let _ = writeln!(out, "p qbf {} {} {}", order.len(), q.matrix.cnf.len(), d.len());
        }
    }
    for b in &q.blocks {
        out.push_str(match b.quant {
            Quant::Exists => "e ",
            Quant::Forall => "a ",
        });
        for v in &b.vars {
            let _ = write!(out, "{} ", index[v]);
        }
        out.push_str("0\n");
    }
    for c in &q.matrix.cnf {
        write_lits(&mut out, c, &index);
    }
    for t in q.matrix.dnf.iter().flatten() {
        out.push_str("t ");
        write_lits(&mut out, t, &index);
    }
    Ok(out)
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col: 1, msg: msg.into() }
}

struct Header {
    vars: usize,
    clauses: usize,
    terms: Option<usize>,
}

fn parse_ints(line: usize, toks: &[&str]) -> Result<Vec<i64>> {
    toks.iter().map(|t| t.parse::<i64>().map_err(|_| syntax(line, format!("`{t}` is not an integer")))).collect()
}

fn zero_terminated(line: usize, toks: &[&str]) -> Result<Vec<i64>> {
    let mut xs = parse_ints(line, toks)?;
    if xs.pop() != Some(0) {
        return Err(syntax(line, "line must end with 0"));
    }
    if xs.contains(&0) {
        return Err(syntax(line, "0 inside a line"));
    }
    Ok(xs)
}

/// Reads QDIMACS (or the extended DNF form). Variables without a
/// quantifier are bound existentially in an outermost block.
pub fn read_qdimacs(text: &str) -> Result<Qbf> {
    let mut names: HashMap<i64, String> = HashMap::new();
    let mut header: Option<Header> = None;
    let mut blocks: Vec<(Quant, Vec<i64>)> = Vec::new();
    let mut cnf: Vec<Vec<i64>> = Vec::new();
    let mut dnf: Vec<Vec<i64>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&first) = toks.first() else { continue };
        match first {
            "c" => {
                if let [_, n, name] = toks.as_slice() {
                    if let Ok(n) = n.parse::<i64>() {
                        if n > 0 && is_identifier(name) {
                            names.insert(n, name.to_string());
                        }
                    }
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(syntax(ln, "second problem line"));
                }
                let nums = parse_ints(ln, &toks[2.min(toks.len())..])?;
                header = Some(match (toks.get(1).copied(), nums.as_slice()) {
                    (Some("cnf"), [v, c]) if *v >= 0 && *c >= 0 => {
                        Header { vars: *v as usize, clauses: *c as usize, terms: None }
                    }
                    (Some("qbf"), [v, c, t]) if *v >= 0 && *c >= 0 && *t >= 0 => {
                        Header { vars: *v as usize, clauses: *c as usize, terms: Some(*t as usize) }
                    }
                    _ => return Err(syntax(ln, "malformed problem line")),
                });
            }
            "e" | "a" => {
                if header.is_none() {
                    return Err(syntax(ln, "quantifier line before the problem line"));
                }
                if !cnf.is_empty() || !dnf.is_empty() {
                    return Err(syntax(ln, "quantifier line after clauses"));
                }
                let q = if first == "e" { Quant::Exists } else { Quant::Forall };
                blocks.push((q, zero_terminated(ln, &toks[1..])?));
            }
            "t" => {
                if header.as_ref().is_none_or(|h| h.terms.is_none()) {
                    return Err(syntax(ln, "term line outside the extended format"));
                }
                dnf.push(zero_terminated(ln, &toks[1..])?);
            }
            _ => {
                if header.is_none() {
                    return Err(syntax(ln, "clause before the problem line"));
                }
                cnf.push(zero_terminated(ln, &toks)?);
            }
        }
    }
    let h = header.ok_or_else(|| syntax(1, "missing problem line"))?;
    if cnf.len() != h.clauses {
        return Err(syntax(1, format!("header announces {} clauses, found {}", h.clauses, cnf.len())));
    }
    if let Some(t) = h.terms {
        if dnf.len() != t {
            return Err(syntax(1, format!("header announces {t} terms, found {}", dnf.len())));
        }
    }
    let name = |n: i64| -> Result<String> {
        if n < 1 || n as usize > h.vars {
            return Err(syntax(1, format!("variable {n} out of range")));
        }
        Ok(names.get(&n).cloned().unwrap_or_else(|| format!("v{n}")))
    };
    let lits = |xs: &Vec<i64>| -> Result<Vec<Lit>> { xs.iter().map(|&x| Ok(Lit::new(name(x.abs())?, x > 0))).collect() };
    let mut bound = BTreeSet::new();
    let mut qblocks = Vec::new();
    for (q, vs) in &blocks {
        let mut vars = Vec::new();
        for &v in vs {
            if v < 0 {
                return Err(syntax(1, "negative number in a quantifier line"));
            }
            if !bound.insert(v) {
                return Err(syntax(1, format!("variable {v} quantified twice")));
            }
            vars.push(name(v)?);
        }
        qblocks.push(Block { quant: *q, vars });
    }
    let mut free = Vec::new();
    for x in cnf.iter().chain(&dnf).flatten() {
        if bound.insert(x.abs()) {
            free.push(name(x.abs())?);
        }
    }
    if !free.is_empty() {
        qblocks.insert(0, Block { quant: Quant::Exists, vars: free });
    }
    let matrix = Matrix {
        cnf: cnf.iter().map(lits).collect::<Result<_>>()?,
        dnf: match h.terms {
            Some(_) => Some(dnf.iter().map(lits).collect::<Result<_>>()?),
            None => None,
        },
    };
    let q = Qbf::new(qblocks, matrix);
    q.validate()?;
    Ok(q)
}

/// Reads a DIMACS CNF as a purely existential QBF over variables 1..=n.
pub fn read_dimacs(text: &str) -> Result<Qbf> {
    if text.lines().any(|l| matches!(l.split_whitespace().next(), Some("e" | "a" | "t"))) {
        return Err(syntax(1, "quantifier or term lines in a DIMACS file"));
    }
    let mut q = read_qdimacs(text)?;
    let h = text
        .lines()
        .find(|l| l.starts_with("p "))
        .and_then(|l| l.split_whitespace().nth(2)?.parse::<usize>().ok())
        .unwrap_or(0);
    // keep declared but unused variables so that models are over 1..=n
    let names: HashMap<i64, String> = text
        .lines()
        .filter_map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            match t.as_slice() {
                ["c", n, name] => Some((n.parse().ok()?, name.to_string())),
                _ => None,
            }
        })
        .collect();
    let all: Vec<String> = (1..=h as i64).map(|n| names.get(&n).cloned().unwrap_or_else(|| format!("v{n}"))).collect();
    q.blocks = if all.is_empty() { Vec::new() } else { vec![Block { quant: Quant::Exists, vars: all }] };
    q.validate()?;
    Ok(q)
}

/// Serializes in QCIR-G14: one or-gate per clause, one and-gate per term,
/// output = and(clauses…, or(terms…)). Variable names are kept.
pub fn write_qcir(q: &Qbf) -> Result<String> {
    q.validate()?;
    let used: BTreeSet<String> = q.prefix_vars().cloned().collect();
    let mut next = 0usize;
    let mut gate = || loop {
        next += 1;
        let g = format!("g{next}");
        if !used.contains(&g) {
            return g;
        }
    };
    let lit = |l: &Lit| if l.positive { l.atom.clone() } else { format!("-{}", l.atom) };
    let mut out = String::from("#QCIR-G14\n");
    for b in &q.blocks {
        let _ = writeln!(out, "{}({})", b.quant, b.vars.join(", "));
    }
    let mut body = String::new();
    let mut top = Vec::new();
    for c in &q.matrix.cnf {
        let g = gate();
        let _ = writeln!(body, "{g} = or({})", c.iter().map(lit).collect::<Vec<_>>().join(", "));
        top.push(g);
    }
    if let Some(d) = &q.matrix.dnf {
        let mut ts = Vec::new();
        for t in d {
            let g = gate();
            let _ = writeln!(body, "{g} = and({})", t.iter().map(lit).collect::<Vec<_>>().join(", "));
            ts.push(g);
        }
        let g = gate();
        let _ = writeln!(body, "{g} = or({})", ts.join(", "));
        top.push(g);
    }
    let g = gate();
    let _ = writeln!(body, "{g} = and({})", top.join(", "));
    let _ = writeln!(out, "output({g})");
    out.push_str(&body);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GateKind {
    And,
    Or,
}

/// A parsed QCIR circuit with and/or gates, evaluated by expansion.
#[derive(Clone, Debug)]
pub struct Circuit {
    pub blocks: Vec<Block>,
    gates: Vec<(GateKind, Vec<(usize, bool)>)>,
    /// Node ids: 0..vars are variables, then gates in definition order.
    output: (usize, bool),
    vars: usize,
}

impl Circuit {
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut blocks = Vec::new();
        let mut gate_lines = Vec::new();
        let mut output = None;
        for (k, raw) in text.lines().enumerate() {
            let ln = k + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, args) = match (line.find('('), line.rfind(')')) {
                (Some(a), Some(b)) if a < b => (line[..a].trim(), &line[a + 1..b]),
                _ => return Err(syntax(ln, "expected `name(args)`")),
            };
            let args: Vec<String> =
                args.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            match head {
                "exists" | "forall" => {
                    let quant = if head == "exists" { Quant::Exists } else { Quant::Forall };
                    for v in &args {
                        let id = ids.len();
                        ids.insert(v.clone(), id);
                    }
                    blocks.push(Block { quant, vars: args });
                }
                "output" => output = Some(args.first().cloned().ok_or_else(|| syntax(ln, "empty output"))?),
                _ => {
                    let (name, kind) = head.split_once('=').ok_or_else(|| syntax(ln, "expected a gate"))?;
                    let kind = match kind.trim() {
                        "and" => GateKind::And,
                        "or" => GateKind::Or,
                        other => return Err(syntax(ln, format!("unsupported gate `{other}`"))),
                    };
                    gate_lines.push((ln, name.trim().to_string(), kind, args));
                }
            }
        }
        let vars = ids.len();
        let resolve = |ids: &HashMap<String, usize>, ln: usize, s: &str| -> Result<(usize, bool)> {
            let (name, pos) = match s.strip_prefix('-') {
                Some(n) => (n, false),
                None => (s, true),
            };
            ids.get(name).map(|&i| (i, pos)).ok_or_else(|| syntax(ln, format!("`{name}` used before definition")))
        };
        let mut gates = Vec::new();
        for (ln, name, kind, args) in gate_lines {
            let inputs = args.iter().map(|a| resolve(&ids, ln, a)).collect::<Result<Vec<_>>>()?;
            gates.push((kind, inputs));
            let id = ids.len();
            ids.insert(name, id);
        }
        let out = output.ok_or_else(|| syntax(1, "missing output line"))?;
        let output = resolve(&ids, 1, &out)?;
        Ok(Circuit { blocks, gates, output, vars })
    }

    fn eval_leaf(&self, asg: &[bool]) -> bool {
        let mut val = asg.to_vec();
        for (kind, inputs) in &self.gates {
            let mut it = inputs.iter().map(|&(i, p)| val[i] == p);
            let v = match kind {
                GateKind::And => it.all(|b| b),
                GateKind::Or => it.any(|b| b),
            };
            val.push(v);
        }
        val[self.output.0] == self.output.1
    }

    pub fn evaluate(&self, cap: usize) -> Result<bool> {
        if self.vars > cap {
            return Err(Error::CapExceeded { what: "QCIR variables", size: self.vars, cap });
        }
        let universal: Vec<bool> =
            self.blocks.iter().flat_map(|b| b.vars.iter().map(move |_| b.quant == Quant::Forall)).collect();
        fn go(c: &Circuit, univ: &[bool], asg: &mut Vec<bool>) -> bool {
            let v = asg.len();
            if v == c.vars {
                return c.eval_leaf(asg);
            }
            asg.push(true);
            let a = go(c, univ, asg);
            asg.pop();
            if a != univ[v] {
                return a;
            }
            asg.push(false);
            let b = go(c, univ, asg);
            asg.pop();
            b
        }
        Ok(go(self, &universal, &mut Vec::with_capacity(self.vars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{evaluate_qbf, prenex_cnf};

    fn ex6() -> Qbf {
        crate::qbf::tests::ex6()
    }

    #[test]
    fn smallest_qdimacs() {
        let q = Qbf::new(vec![Block::new(Quant::Exists, ["x"])], Matrix::cnf(vec![vec![Lit::pos("x")]]));
        assert_eq!(write_qdimacs(&q, QdimacsOptions::default()).unwrap(), "p cnf 1 1\ne 1 0\n1 0\n");
        let named = write_qdimacs(&q, QdimacsOptions { names: true, allow_dnf: false }).unwrap();
        assert_eq!(named, "c 1 x\np cnf 1 1\ne 1 0\n1 0\n");
        assert_eq!(read_qdimacs(&named).unwrap(), q);
    }

    #[test]
    fn dnf_needs_opt_in() {
        assert!(write_qdimacs(&ex6(), QdimacsOptions::default()).is_err());
        let text = write_qdimacs(&ex6(), QdimacsOptions { names: true, allow_dnf: true }).unwrap();
        assert_eq!(read_qdimacs(&text).unwrap(), ex6());
    }

    #[test]
    fn example_file_reads() {
        let q = read_qdimacs(include_str!("../../../../instances/ex6.qdimacs")).unwrap();
        assert_eq!(q, ex6());
    }

    #[test]
    fn prenexed_round_trip() {
        let p = prenex_cnf(&ex6());
        let text = write_qdimacs(&p, QdimacsOptions::default()).unwrap();
        let back = read_qdimacs(&text).unwrap();
        assert_eq!(evaluate_qbf(&back, 24).unwrap(), evaluate_qbf(&p, 24).unwrap());
    }

    #[test]
    fn unquantified_variables_become_existential() {
        let q = read_qdimacs("p cnf 2 1\na 1 0\n1 2 0\n").unwrap();
        assert_eq!(q.blocks[0], Block::new(Quant::Exists, ["v2"]));
        assert_eq!(q.blocks[1].quant, Quant::Forall);
    }

    #[test]
    fn malformed_inputs() {
        assert!(read_qdimacs("e 1 0\np cnf 1 0\n").is_err());
        assert!(read_qdimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(read_qdimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(read_qdimacs("p cnf 1 1\n1\n").is_err());
    }

    #[test]
    fn dimacs_keeps_unused_variables() {
        let q = read_dimacs("p cnf 3 1\n1 -2 0\n").unwrap();
        assert_eq!(q.blocks[0].vars, vec!["v1", "v2", "v3"]);
    }

    #[test]
    fn qcir_agrees() {
        let text = write_qcir(&ex6()).unwrap();
        assert!(text.starts_with("#QCIR-G14\nexists(x1, x2)\nforall(y)\noutput("));
        assert!(Circuit::parse(&text).unwrap().evaluate(24).unwrap());
        let n = ex6().negate().unwrap();
        assert!(!Circuit::parse(&write_qcir(&n).unwrap()).unwrap().evaluate(24).unwrap());
    }
}
