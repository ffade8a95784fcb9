//! Quantified Boolean formulas with a CNF ∧ DNF matrix.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{is_identifier, Lit};
use crate::par::Exec;

pub mod format;

pub use format::{read_dimacs, read_qdimacs, write_qcir, write_qdimacs, Circuit, QdimacsOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn flip(self) -> Quant {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

impl fmt::Display for Quant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quant::Exists => "exists",
            Quant::Forall => "forall",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub quant: Quant,
    pub vars: Vec<String>,
}

impl Block {
    pub fn new<S: Into<String>>(quant: Quant, vars: impl IntoIterator<Item = S>) -> Block {
        Block { quant, vars: vars.into_iter().map(Into::into).collect() }
    }
}

pub type Clause = Vec<Lit>;
pub type Term = Vec<Lit>;

/// (⋀ cnf) ∧ (⋁ dnf). An absent DNF part is ⊤; a present but empty one is ⊥.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub cnf: Vec<Clause>,
    pub dnf: Option<Vec<Term>>,
}

impl Matrix {
    pub fn cnf(cnf: Vec<Clause>) -> Matrix {
        Matrix { cnf, dnf: None }
    }

    pub fn dnf(dnf: Vec<Term>) -> Matrix {
        Matrix { cnf: Vec::new(), dnf: Some(dnf) }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.cnf.iter().chain(self.dnf.iter().flatten()).flatten().map(|l| l.atom.clone()).collect()
    }

    /// Variables in order of first occurrence.
    pub fn vars_in_order(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for l in self.cnf.iter().chain(self.dnf.iter().flatten()).flatten() {
            if seen.insert(l.atom.clone()) {
                out.push(l.atom.clone());
            }
        }
        out
    }

    pub fn eval_with<F: Fn(&str) -> bool>(&self, value: F) -> bool {
        let lit = |l: &Lit| value(&l.atom) == l.positive;
        self.cnf.iter().all(|c| c.iter().any(lit))
            && self.dnf.as_ref().is_none_or(|d| d.iter().any(|t| t.iter().all(lit)))
    }

    pub fn is_cnf(&self) -> bool {
        self.dnf.is_none()
    }
}

/// A prenex QBF Q1 X1 … Qn Xn. matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qbf {
    pub blocks: Vec<Block>,
    pub matrix: Matrix,
}

impl Qbf {
    /// Drops empty blocks and merges adjacent blocks with equal quantifiers.
    pub fn new(blocks: Vec<Block>, matrix: Matrix) -> Qbf {
        let mut out: Vec<Block> = Vec::new();
        for b in blocks {
            if b.vars.is_empty() {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.quant == b.quant => last.vars.extend(b.vars),
                _ => out.push(b),
            }
        }
        Qbf { blocks: out, matrix }
    }

    pub fn num_vars(&self) -> usize {
        self.blocks.iter().map(|b| b.vars.len()).sum()
    }

    /// Quantified variables in prefix order.
    pub fn prefix_vars(&self) -> impl Iterator<Item = &String> {
        self.blocks.iter().flat_map(|b| b.vars.iter())
    }

    pub fn quantifier_of(&self, v: &str) -> Option<Quant> {
        self.blocks.iter().find(|b| b.vars.iter().any(|x| x == v)).map(|b| b.quant)
    }

    /// Checks identifiers, alternation, disjointness and that every matrix
    /// variable is bound. Bound variables need not occur in the matrix.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (i, b) in self.blocks.iter().enumerate() {
            if b.vars.is_empty() {
                return Err(Error::Qbf(format!("block {i} is empty")));
            }
            if i > 0 && self.blocks[i - 1].quant == b.quant {
                return Err(Error::Qbf(format!("blocks {} and {i} do not alternate", i - 1)));
            }
            for v in &b.vars {
                if !is_identifier(v) {
                    return Err(Error::Qbf(format!("`{v}` is not a valid variable name")));
                }
                if !seen.insert(v.clone()) {
                    return Err(Error::Qbf(format!("variable `{v}` is bound twice")));
                }
            }
        }
        if let Some(v) = self.matrix.vars().into_iter().find(|v| !seen.contains(v)) {
            return Err(Error::Qbf(format!("variable `{v}` is free")));
        }
        Ok(())
    }

    /// Quantifier depth (number of blocks).
    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    /// ¬φ with flipped quantifiers; only for matrices that are purely CNF or
    /// purely DNF.
    pub fn negate(&self) -> Result<Qbf> {
        let flip = |xs: &Vec<Vec<Lit>>| -> Vec<Vec<Lit>> {
            xs.iter().map(|c| c.iter().map(Lit::negate).collect()).collect()
        };
        let matrix = match (&self.matrix.cnf, &self.matrix.dnf) {
            (cnf, None) => Matrix::dnf(flip(cnf)),
            (cnf, Some(dnf)) if cnf.is_empty() => Matrix::cnf(flip(dnf)),
            _ => return Err(Error::Unsupported("negation of a mixed CNF/DNF matrix".into())),
        };
        let blocks = self.blocks.iter().map(|b| Block { quant: b.quant.flip(), vars: b.vars.clone() }).collect();
        Ok(Qbf { blocks, matrix })
    }
}

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{} {} . ", b.quant, b.vars.join(" "))?;
        }
        let show = |xs: &[Lit], sep: &str| xs.iter().map(Lit::to_string).collect::<Vec<_>>().join(sep);
        let cnf: Vec<String> = self.matrix.cnf.iter().map(|c| format!("({})", show(c, " | "))).collect();
        write!(f, "[{}]", cnf.join(" & "))?;
        if let Some(dnf) = &self.matrix.dnf {
            let dnf: Vec<String> = dnf.iter().map(|t| format!("({})", show(t, " & "))).collect();
            write!(f, " & [{}]", dnf.join(" | "))?;
        }
        Ok(())
    }
}

/// Literal over variable indices: `var << 1 | negated`.
type ILit = u32;

fn ilit(var: usize, positive: bool) -> ILit {
    (var as u32) << 1 | (!positive) as u32
}

fn ivar(l: ILit) -> usize {
    (l >> 1) as usize
}

fn ipos(l: ILit) -> bool {
    l & 1 == 0
}

struct Compiled {
    n: usize,
    universal: Vec<bool>,
    /// prefix position of each variable's block
    level: Vec<usize>,
    clauses: Vec<Vec<ILit>>,
    terms: Option<Vec<Vec<ILit>>>,
}

fn compile(q: &Qbf, cap: usize) -> Result<Compiled> {
    q.validate()?;
    let n = q.num_vars();
    if n > cap {
        return Err(Error::CapExceeded { what: "QBF variables", size: n, cap });
    }
    let mut index = HashMap::new();
    let mut universal = Vec::with_capacity(n);
    let mut level = Vec::with_capacity(n);
    for (bi, b) in q.blocks.iter().enumerate() {
        for v in &b.vars {
            index.insert(v.as_str(), universal.len());
            universal.push(b.quant == Quant::Forall);
            level.push(bi);
        }
    }
    let conv = |xs: &Vec<Lit>| -> Vec<ILit> {
        let mut out: Vec<ILit> = xs.iter().map(|l| ilit(index[l.atom.as_str()], l.positive)).collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    // tautological clauses are always satisfied; contradictory terms never
    let complementary = |c: &Vec<ILit>| c.windows(2).any(|w| ivar(w[0]) == ivar(w[1]));
    let clauses = q.matrix.cnf.iter().map(conv).filter(|c| !complementary(c)).collect();
    let terms = q.matrix.dnf.as_ref().map(|d| d.iter().map(conv).filter(|t| !complementary(t)).collect());
    Ok(Compiled { n, universal, level, clauses, terms })
}

const UNSET: i8 = -1;

fn lit_value(asg: &[i8], l: ILit) -> Option<bool> {
    match asg[ivar(l)] {
        UNSET => None,
        v => Some((v == 1) == ipos(l)),
    }
}

enum Status {
    True,
    False,
    Open,
}

impl Compiled {
    fn set(&self, asg: &mut [i8], l: ILit) {
        asg[ivar(l)] = ipos(l) as i8;
    }

    /// Early termination plus the falsified-clause and universal-clause checks.
    fn status(&self, asg: &[i8]) -> Status {
        let mut cnf_done = true;
        for c in &self.clauses {
            let mut sat = false;
            let mut open_exist = false;
            let mut open = false;
            for &l in c {
                match lit_value(asg, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open = true;
                        if !self.universal[ivar(l)] {
                            open_exist = true;
                        }
                    }
                }
            }
            if sat {
                continue;
            }
            if !open_exist {
                // empty, or only universal literals left: ∀ falsifies it
                let _ = open;
                return Status::False;
            }
            cnf_done = false;
        }
        match &self.terms {
            None => {
                if cnf_done {
                    Status::True
                } else {
                    Status::Open
                }
            }
            Some(terms) => {
                let mut any_live = false;
                for t in terms {
                    let mut all_true = true;
                    let mut dead = false;
                    for &l in t {
                        match lit_value(asg, l) {
                            Some(true) => {}
                            Some(false) => {
                                dead = true;
                                break;
                            }
                            None => all_true = false,
                        }
                    }
                    if dead {
                        continue;
                    }
                    any_live = true;
                    if all_true && cnf_done {
                        return Status::True;
                    }
                }
                if any_live {
                    Status::Open
                } else {
                    Status::False
                }
            }
        }
    }

    /// One round of unit and pure-literal propagation; returns a forced
    /// literal if any.
    fn forced(&self, asg: &[i8]) -> Option<ILit> {
        // existential unit clauses
        let mut live_clause_occ = vec![[false; 2]; self.n];
        for c in &self.clauses {
            if c.iter().any(|&l| lit_value(asg, l) == Some(true)) {
                continue;
            }
            let open: Vec<ILit> = c.iter().copied().filter(|&l| lit_value(asg, l).is_none()).collect();
            if open.len() == 1 && !self.universal[ivar(open[0])] {
                return Some(open[0]);
            }
            for l in open {
                live_clause_occ[ivar(l)][(!ipos(l)) as usize] = true;
            }
        }
        let mut live_term_occ = vec![[false; 2]; self.n];
        if let Some(terms) = &self.terms {
            for t in terms {
                if t.iter().any(|&l| lit_value(asg, l) == Some(false)) {
                    continue;
                }
                let open: Vec<ILit> = t.iter().copied().filter(|&l| lit_value(asg, l).is_none()).collect();
                if open.len() == 1 {
                    let l = open[0];
                    let v = ivar(l);
                    if self.universal[v] && !live_clause_occ[v][0] && !live_clause_occ[v][1] {
                        return Some(l ^ 1);
                    }
                }
                for l in open {
                    live_term_occ[ivar(l)][(!ipos(l)) as usize] = true;
                }
            }
        }
        // pure literals: judged on live clauses and terms together
        for v in 0..self.n {
            if asg[v] != UNSET {
                continue;
            }
            let pos = live_clause_occ[v][0] || live_term_occ[v][0];
            let neg = live_clause_occ[v][1] || live_term_occ[v][1];
            let positive = match (pos, neg) {
                (true, true) => continue,
                (true, false) => true,
                (false, true) => false,
                // unused: any value, pick the one that keeps searching short
                (false, false) => !self.universal[v],
            };
            // ∃ satisfies the pure polarity, ∀ falsifies it
            let value = if self.universal[v] { !positive } else { positive };
            return Some(ilit(v, value));
        }
        None
    }

    fn branch_var(&self, asg: &[i8]) -> Option<usize> {
        let first_level = (0..self.n).filter(|&v| asg[v] == UNSET).map(|v| self.level[v]).min()?;
        (0..self.n).find(|&v| asg[v] == UNSET && self.level[v] == first_level)
    }

    fn solve(&self, asg: &mut Vec<i8>, exec: Exec, depth: usize) -> bool {
        let mut trail = Vec::new();
        let result = loop {
            match self.status(asg) {
                Status::True => break true,
                Status::False => break false,
                Status::Open => {}
            }
            if let Some(l) = self.forced(asg) {
                self.set(asg, l);
                trail.push(ivar(l));
                continue;
            }
            let Some(v) = self.branch_var(asg) else {
                // every variable assigned; status decides
                unreachable!("a total assignment has a definite status")
            };
            let univ = self.universal[v];
            let try_value = |asg: &mut Vec<i8>, value: bool| {
                asg[v] = value as i8;
                let r = self.solve(asg, Exec::Sequential, depth + 1);
                asg[v] = UNSET;
                r
            };
            #[cfg(feature = "parallel")]
            if exec.is_parallel() && depth == 0 && self.n > 12 {
                let mut a1 = asg.clone();
                let mut a0 = asg.clone();
                let (r1, r0) = rayon::join(|| try_value(&mut a1, true), || try_value(&mut a0, false));
                break if univ { r1 && r0 } else { r1 || r0 };
            }
            let _ = exec;
            let first = try_value(asg, true);
            break if univ {
                first && try_value(asg, false)
            } else {
                first || try_value(asg, false)
            };
        };
        for v in trail {
            asg[v] = UNSET;
        }
        result
    }
}

/// Truth value of a closed QBF by search with propagation.
pub fn evaluate_qbf(q: &Qbf, cap: usize) -> Result<bool> {
    evaluate_qbf_with(q, cap, Exec::default())
}

pub fn evaluate_qbf_with(q: &Qbf, cap: usize, exec: Exec) -> Result<bool> {
    let c = compile(q, cap)?;
    let mut asg = vec![UNSET; c.n];
    Ok(c.solve(&mut asg, exec, 0))
}

/// Plain Shannon expansion ∃x.φ ≡ φ[x↦1] ∨ φ[x↦0]; slow, used as reference.
pub fn evaluate_by_expansion(q: &Qbf, cap: usize) -> Result<bool> {
    let c = compile(q, cap)?;
    fn go(c: &Compiled, asg: &mut Vec<i8>, v: usize) -> bool {
        if v == c.n {
            let val = |l: ILit| lit_value(asg, l) == Some(true);
            return c.clauses.iter().all(|cl| cl.iter().any(|&l| val(l)))
                && c.terms.as_ref().is_none_or(|ts| ts.iter().any(|t| t.iter().all(|&l| val(l))));
        }
        asg[v] = 1;
        let a = go(c, asg, v + 1);
        if a != c.universal[v] {
            asg[v] = UNSET;
            return a;
        }
        asg[v] = 0;
        let b = go(c, asg, v + 1);
        asg[v] = UNSET;
        b
    }
    let mut asg = vec![UNSET; c.n];
    Ok(go(&c, &mut asg, 0))
}

/// Replaces the DNF part by selector variables t_i ↔ term_i in a new
/// innermost existential block: clauses (¬t_i ∨ l) for l ∈ term_i and
/// (t_1 ∨ … ∨ t_k). CNF-only input is returned unchanged.
pub fn prenex_cnf(q: &Qbf) -> Qbf {
    let Some(terms) = &q.matrix.dnf else {
        return q.clone();
    };
    let mut used: BTreeSet<String> = q.prefix_vars().cloned().collect();
    used.extend(q.matrix.vars());
    let mut k = 0usize;
    let mut fresh = || loop {
        let name = format!("__sel{k}");
        k += 1;
        if used.insert(name.clone()) {
            return name;
        }
    };
    let mut cnf = q.matrix.cnf.clone();
    let mut selectors = Vec::with_capacity(terms.len());
    for t in terms {
        let s = fresh();
        for l in t {
            cnf.push(vec![Lit::neg(s.clone()), l.clone()]);
        }
        selectors.push(s);
    }
    cnf.push(selectors.iter().map(|s| Lit::pos(s.clone())).collect());
    let mut blocks = q.blocks.clone();
    blocks.push(Block { quant: Quant::Exists, vars: selectors });
    Qbf::new(blocks, Matrix::cnf(cnf))
}
