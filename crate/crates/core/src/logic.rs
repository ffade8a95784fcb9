//! Propositional evaluation and answer-set machinery.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{Formula, Lit, Rule};

/// A partial truth assignment.
pub type Assignment = BTreeMap<String, bool>;

/// Evaluates φ under ν; every variable of φ must be assigned.
pub fn evaluate(f: &Formula, nu: &Assignment) -> Result<bool> {
    f.eval_with(&|a| nu.get(a).copied())
}

/// Partial evaluation: substitutes known values and folds constants.
pub fn simplify<F>(f: &Formula, value: &F) -> Formula
where
    F: Fn(&str) -> Option<bool>,
{
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => match value(a) {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => f.clone(),
        },
        Formula::Not(g) => match simplify(g, value) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            g => Formula::not(g),
        },
        Formula::And(fs) => {
            let mut out = Vec::with_capacity(fs.len());
            for g in fs {
                match simplify(g, value) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    g => out.push(g),
                }
            }
            Formula::and(out)
        }
        Formula::Or(fs) => {
            let mut out = Vec::with_capacity(fs.len());
            for g in fs {
                match simplify(g, value) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    g => out.push(g),
                }
            }
            Formula::or(out)
        }
        Formula::Implies(a, b) => {
            let a = simplify(a, value);
            let b = simplify(b, value);
            match (&a, &b) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, _) => b,
                (_, Formula::False) => Formula::not(a),
                _ => Formula::implies(a, b),
            }
        }
        Formula::Iff(a, b) => {
            let a = simplify(a, value);
            let b = simplify(b, value);
            match (&a, &b) {
                (Formula::True, _) => b,
                (_, Formula::True) => a,
                (Formula::False, _) => simplify(&Formula::not(b), value),
                (_, Formula::False) => simplify(&Formula::not(a), value),
                _ => Formula::iff(a, b),
            }
        }
    }
}

/// Formula compiled against a variable index, evaluated over a bit mask.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Const(bool),
    Var(usize),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub(crate) fn new(f: &Formula, index: &HashMap<&str, usize>) -> Compiled {
        match f {
            Formula::True => Compiled::Const(true),
            Formula::False => Compiled::Const(false),
            Formula::Atom(a) => Compiled::Var(index[a.as_str()]),
            Formula::Not(g) => Compiled::Not(Box::new(Compiled::new(g, index))),
            Formula::And(fs) => Compiled::And(fs.iter().map(|g| Compiled::new(g, index)).collect()),
            Formula::Or(fs) => Compiled::Or(fs.iter().map(|g| Compiled::new(g, index)).collect()),
            Formula::Implies(a, b) => {
                Compiled::Implies(Box::new(Compiled::new(a, index)), Box::new(Compiled::new(b, index)))
            }
            Formula::Iff(a, b) => {
                Compiled::Iff(Box::new(Compiled::new(a, index)), Box::new(Compiled::new(b, index)))
            }
        }
    }

    pub(crate) fn eval(&self, m: u64) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Var(i) => m >> i & 1 == 1,
            Compiled::Not(g) => !g.eval(m),
            Compiled::And(fs) => fs.iter().all(|g| g.eval(m)),
            Compiled::Or(fs) => fs.iter().any(|g| g.eval(m)),
            Compiled::Implies(a, b) => !a.eval(m) || b.eval(m),
            Compiled::Iff(a, b) => a.eval(m) == b.eval(m),
        }
    }
}

/// Whether some total extension of `fixed` satisfies every formula.
/// Brute force over the remaining variables, at most `cap` of them.
pub fn classical_consistent(fs: &[Formula], fixed: &Assignment, cap: usize) -> Result<bool> {
    let lookup = |a: &str| fixed.get(a).copied();
    let mut residual = Vec::new();
    for f in fs {
        match simplify(f, &lookup) {
            Formula::True => {}
            Formula::False => return Ok(false),
            g => residual.push(g),
        }
    }
    if residual.is_empty() {
        return Ok(true);
    }
    let vars: BTreeSet<String> = residual.iter().flat_map(Formula::vars).collect();
    if vars.len() > cap {
        return Err(Error::CapExceeded { what: "free variables", size: vars.len(), cap });
    }
    if vars.len() <= DIRECT_VARS {
        let index: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let compiled: Vec<Compiled> = residual.iter().map(|f| Compiled::new(f, &index)).collect();
        return Ok((0..1u64 << vars.len()).any(|m| compiled.iter().all(|c| c.eval(m))));
    }
    Ok(branch(residual))
}

// Above this many free variables, search by splitting instead of scanning
// every assignment.
const DIRECT_VARS: usize = 12;

fn branch(fs: Vec<Formula>) -> bool {
    let Some(v) = fs.iter().find_map(|f| f.vars().into_iter().next()) else {
        return true;
    };
    [true, false].into_iter().any(|b| {
        let set = |a: &str| (a == v).then_some(b);
        let mut rest = Vec::with_capacity(fs.len());
        for f in &fs {
            match simplify(f, &set) {
                Formula::True => {}
                Formula::False => return false,
                g => rest.push(g),
            }
        }
        branch(rest)
    })
}

/// Rule over atom indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct MaskRule {
    head: u64,
    pos: u64,
    neg: u64,
}

impl MaskRule {
    fn satisfied(self, m: u64) -> bool {
        self.pos & !m != 0 || self.neg & m != 0 || self.head & m != 0
    }

    fn satisfied_reduct(self, m: u64, red: u64) -> bool {
        // rule of P^red evaluated in m
        self.neg & red != 0 || self.pos & !m != 0 || self.head & m != 0
    }
}

/// A finite disjunctive program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    rules: Vec<Rule>,
    atoms: Vec<String>,
}

impl Program {
    /// Duplicate rules are dropped; atom order is lexicographic.
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Program {
        let mut out: Vec<Rule> = Vec::new();
        for r in rules {
            if !out.contains(&r) {
                out.push(r);
            }
        }
        let atoms: BTreeSet<String> = out.iter().flat_map(Rule::atoms).collect();
        Program { rules: out, atoms: atoms.into_iter().collect() }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// at(P), sorted.
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Edges (x, y) with x ∈ H(r), y ∈ B⁺(r).
    pub fn dependency_edges(&self) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            for h in &r.head {
                for b in &r.pos {
                    out.insert((h.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// Acyclic dependency digraph; self-loops are cycles.
    pub fn is_tight(&self) -> bool {
        let mut succ: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (x, y) in self.dependency_edges() {
            succ.entry(x).or_default().push(y);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state: HashMap<&str, u8> = HashMap::new();
        fn dfs<'a>(v: &'a str, succ: &'a BTreeMap<String, Vec<String>>, state: &mut HashMap<&'a str, u8>) -> bool {
            state.insert(v, 1);
            for w in succ.get(v).into_iter().flatten() {
                match state.get(w.as_str()).copied().unwrap_or(0) {
                    1 => return false,
                    0 => {
                        if !dfs(w, succ, state) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            state.insert(v, 2);
            true
        }
        for v in succ.keys() {
            if state.get(v.as_str()).copied().unwrap_or(0) == 0 && !dfs(v, &succ, &mut state) {
                return false;
            }
        }
        true
    }

    /// P^M = {H(r) ← B⁺(r) | M ∩ B⁻(r) = ∅}.
    pub fn gl_reduct(&self, m: &BTreeSet<String>) -> Program {
        Program::new(self.rules.iter().filter(|r| r.neg.is_disjoint(m)).map(|r| Rule {
            head: r.head.clone(),
            pos: r.pos.clone(),
            neg: BTreeSet::new(),
        }))
    }

    /// M ⊨ P.
    pub fn is_model(&self, m: &BTreeSet<String>) -> bool {
        self.rules.iter().all(|r| {
            !r.pos.is_subset(m) || !r.neg.is_disjoint(m) || !r.head.is_disjoint(m)
        })
    }

    fn index(&self) -> HashMap<&str, usize> {
        self.atoms.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect()
    }

    fn masks(&self) -> Vec<MaskRule> {
        let idx = self.index();
        let mask = |s: &BTreeSet<String>| s.iter().fold(0u64, |m, a| m | 1 << idx[a.as_str()]);
        self.rules.iter().map(|r| MaskRule { head: mask(&r.head), pos: mask(&r.pos), neg: mask(&r.neg) }).collect()
    }

    // Masks are 64 bits wide; the configurable cap bounds the search space.
    fn check_width(&self) -> Result<()> {
        if self.atoms.len() > 63 {
            return Err(Error::CapExceeded { what: "program atoms", size: self.atoms.len(), cap: 63 });
        }
        Ok(())
    }

    /// Whether M is a ⊆-minimal model of P^M. Atoms of M outside at(P)
    /// make M a non-answer-set.
    pub fn is_answer_set(&self, m: &BTreeSet<String>, cap: usize) -> Result<bool> {
        self.check_width()?;
        if m.len() > cap {
            return Err(Error::CapExceeded { what: "candidate atoms", size: m.len(), cap });
        }
        let idx = self.index();
        let mut mask = 0u64;
        for a in m {
            match idx.get(a.as_str()) {
                Some(&i) => mask |= 1 << i,
                None => return Ok(false),
            }
        }
        Ok(answer_set_mask(&self.masks(), mask))
    }

    /// All answer sets in ascending mask order.
    pub fn answer_sets(&self, cap: usize) -> Result<Vec<BTreeSet<String>>> {
        self.check_width()?;
        let rules = self.masks();
        let mut out = Vec::new();
        search(&rules, self.atoms.len(), cap, &mut |m| {
            out.push(self.atoms.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, a)| a.clone()).collect());
            false
        })?;
        Ok(out)
    }

    /// Whether P has an answer set.
    pub fn is_consistent(&self, cap: usize) -> Result<bool> {
        self.check_width()?;
        let rules = self.masks();
        search(&rules, self.atoms.len(), cap, &mut |_| true)
    }

    /// M ⊨ P and every a ∈ M has a rule r with a ∈ H(r), B⁺(r) ⊆ M,
    /// B⁻(r) ∩ M = ∅ and no other head atom in M. Requires a tight program.
    pub fn justified_model_check(&self, m: &BTreeSet<String>) -> Result<bool> {
        if !self.is_tight() {
            return Err(Error::NotTight);
        }
        if !self.is_model(m) {
            return Ok(false);
        }
        Ok(m.iter().all(|a| {
            self.rules.iter().any(|r| {
                r.head.contains(a)
                    && r.pos.is_subset(m)
                    && r.neg.is_disjoint(m)
                    && r.head.iter().all(|h| h == a || !m.contains(h))
            })
        }))
    }
}

fn answer_set_mask(rules: &[MaskRule], m: u64) -> bool {
    if !rules.iter().all(|r| r.satisfied(m)) {
        return false;
    }
    let reduct: Vec<MaskRule> = rules.iter().copied().filter(|r| r.neg & m == 0).collect();
    if reduct.iter().all(|r| r.head.count_ones() <= 1) {
        // Horn reduct: M is minimal iff it is the least model
        let mut lm = 0u64;
        loop {
            let mut next = lm;
            for r in &reduct {
                if r.head != 0 && r.pos & !next == 0 {
                    next |= r.head;
                }
            }
            if next == lm {
                break;
            }
            lm = next;
        }
        return lm == m;
    }
    // proper submodels of M; sub-masks are enumerated in decreasing order
    let mut sub = m;
    while sub != 0 {
        sub = (sub - 1) & m;
        if reduct.iter().all(|r| r.satisfied_reduct(sub, m)) {
            return false;
        }
    }
    true
}

/// Enumerates candidate answer sets. Only head atoms can be true, facts
/// must be true and atoms denied by a unit constraint must be false.
/// At most `cap` atoms may remain undetermined. `visit` returns true to
/// stop early; the return value tells whether it did.
fn search<F: FnMut(u64) -> bool>(rules: &[MaskRule], n: usize, cap: usize, visit: &mut F) -> Result<bool> {
    let mut heads = 0u64;
    let mut forced = 0u64;
    let mut denied = 0u64;
    for r in rules {
        heads |= r.head;
        if r.pos == 0 && r.neg == 0 && r.head.count_ones() == 1 {
            forced |= r.head;
        }
        if r.head == 0 && r.neg == 0 && r.pos.count_ones() == 1 {
            denied |= r.pos;
        }
        if r.head == 0 && r.pos == 0 && r.neg == 0 {
            return Ok(false);
        }
    }
    if forced & denied != 0 {
        return Ok(false);
    }
    let free = heads & !forced & !denied & mask_n(n);
    let k = free.count_ones() as usize;
    if k > cap {
        return Err(Error::CapExceeded { what: "undetermined atoms", size: k, cap });
    }
    let mut sub = 0u64;
    loop {
        let m = forced | sub;
        if answer_set_mask(rules, m) && visit(m) {
            return Ok(true);
        }
        // next sub-mask of `free` in increasing order
        if sub == free {
            return Ok(false);
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
}

fn mask_n(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Free-function form of [`Program::gl_reduct`].
pub fn gl_reduct(p: &Program, m: &BTreeSet<String>) -> Program {
    p.gl_reduct(m)
}

pub fn is_answer_set(p: &Program, m: &BTreeSet<String>, cap: usize) -> Result<bool> {
    p.is_answer_set(m, cap)
}

pub fn asp_consistent(p: &Program, cap: usize) -> Result<bool> {
    p.is_consistent(cap)
}

pub fn is_tight(p: &Program) -> bool {
    p.is_tight()
}

pub fn justified_model_check(p: &Program, m: &BTreeSet<String>) -> Result<bool> {
    p.justified_model_check(m)
}

/// Result of the Tseitin transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tseitin {
    pub clauses: Vec<Vec<Lit>>,
    /// Auxiliary variables with the subformula each one defines.
    pub aux: Vec<(String, Formula)>,
    /// Literal equivalent to φ in every model of `clauses`.
    pub output: Lit,
}

/// Tseitin encoding with full biconditional definitions. Auxiliary
/// variables are named `{prefix}{k}`, skipping names used in φ.
pub fn tseitin_with(f: &Formula, prefix: &str) -> Tseitin {
    let used = f.vars();
    let mut st = TseitinState { prefix: prefix.to_string(), used, next: 0, clauses: Vec::new(), aux: Vec::new() };
    let output = st.encode(f);
    Tseitin { clauses: st.clauses, aux: st.aux, output }
}

pub fn tseitin(f: &Formula) -> Tseitin {
    tseitin_with(f, "__t")
}

struct TseitinState {
    prefix: String,
    used: BTreeSet<String>,
    next: usize,
    clauses: Vec<Vec<Lit>>,
    aux: Vec<(String, Formula)>,
}

impl TseitinState {
    fn fresh(&mut self, def: &Formula) -> String {
        loop {
            let name = format!("{}{}", self.prefix, self.next);
            self.next += 1;
            if !self.used.contains(&name) {
                self.aux.push((name.clone(), def.clone()));
                return name;
            }
        }
    }

    fn encode(&mut self, f: &Formula) -> Lit {
        match f {
            Formula::Atom(a) => Lit::pos(a.clone()),
            Formula::Not(g) => self.encode(g).negate(),
            Formula::True | Formula::False => {
                let t = self.fresh(f);
                let positive = matches!(f, Formula::True);
                self.clauses.push(vec![Lit::new(t.clone(), positive)]);
                Lit::pos(t)
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let kids: Vec<Lit> = fs.iter().map(|g| self.encode(g)).collect();
                let t = Lit::pos(self.fresh(f));
                let is_and = matches!(f, Formula::And(_));
                // and: t → l_i, (∧ l_i) → t;  or: l_i → t, t → (∨ l_i)
                let mut long = vec![if is_and { t.clone() } else { t.negate() }];
                for l in &kids {
                    if is_and {
                        self.clauses.push(vec![t.negate(), l.clone()]);
                        long.push(l.negate());
                    } else {
                        self.clauses.push(vec![t.clone(), l.negate()]);
                        long.push(l.clone());
                    }
                }
                self.clauses.push(long);
                t
            }
            Formula::Implies(a, b) => {
                let a = self.encode(a);
                let b = self.encode(b);
                let t = Lit::pos(self.fresh(f));
                self.clauses.push(vec![t.negate(), a.negate(), b.clone()]);
                self.clauses.push(vec![t.clone(), a]);
                self.clauses.push(vec![t.clone(), b.negate()]);
                t
            }
            Formula::Iff(a, b) => {
                let a = self.encode(a);
                let b = self.encode(b);
                let t = Lit::pos(self.fresh(f));
                self.clauses.push(vec![t.negate(), a.negate(), b.clone()]);
                self.clauses.push(vec![t.negate(), a.clone(), b.negate()]);
                self.clauses.push(vec![t.clone(), a.clone(), b.clone()]);
                self.clauses.push(vec![t.clone(), a.negate(), b.negate()]);
                t
            }
        }
    }
}

/// Negation normal form.
pub fn nnf(f: &Formula) -> Formula {
    fn go(f: &Formula, neg: bool) -> Formula {
        match f {
            Formula::True => if neg { Formula::False } else { Formula::True },
            Formula::False => if neg { Formula::True } else { Formula::False },
            Formula::Atom(_) => if neg { Formula::not(f.clone()) } else { f.clone() },
            Formula::Not(g) => go(g, !neg),
            Formula::And(fs) | Formula::Or(fs) => {
                let kids = fs.iter().map(|g| go(g, neg)).collect();
                if matches!(f, Formula::And(_)) != neg { Formula::and(kids) } else { Formula::or(kids) }
            }
            Formula::Implies(a, b) => {
                if neg {
                    Formula::and(vec![go(a, false), go(b, true)])
                } else {
                    Formula::or(vec![go(a, true), go(b, false)])
                }
            }
            Formula::Iff(a, b) => {
                // a ↔ b ≡ (¬a ∨ b) ∧ (a ∨ ¬b);  ¬(a ↔ b) ≡ (a ∨ b) ∧ (¬a ∨ ¬b)
                if neg {
                    Formula::and(vec![
                        Formula::or(vec![go(a, false), go(b, false)]),
                        Formula::or(vec![go(a, true), go(b, true)]),
                    ])
                } else {
                    Formula::and(vec![
                        Formula::or(vec![go(a, true), go(b, false)]),
                        Formula::or(vec![go(a, false), go(b, true)]),
                    ])
                }
            }
        }
    }
    go(f, false)
}

/// Clausal form by distribution, or `None` when more than `max_clauses`
/// clauses would be produced. Tautological clauses are dropped.
pub fn to_cnf(f: &Formula, max_clauses: usize) -> Option<Vec<Vec<Lit>>> {
    fn go(f: &Formula, max: usize) -> Option<Vec<BTreeSet<Lit>>> {
        match f {
            Formula::True => Some(Vec::new()),
            Formula::False => Some(vec![BTreeSet::new()]),
            Formula::Atom(a) => Some(vec![BTreeSet::from([Lit::pos(a.clone())])]),
            Formula::Not(g) => match g.as_ref() {
                Formula::Atom(a) => Some(vec![BTreeSet::from([Lit::neg(a.clone())])]),
                _ => unreachable!("input is in negation normal form"),
            },
            Formula::And(fs) => {
                let mut out = Vec::new();
                for g in fs {
                    out.extend(go(g, max)?);
                    if out.len() > max {
                        return None;
                    }
                }
                Some(out)
            }
            Formula::Or(fs) => {
                let mut acc: Vec<BTreeSet<Lit>> = vec![BTreeSet::new()];
                for g in fs {
                    let part = go(g, max)?;
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &part {
                            let c: BTreeSet<Lit> = a.union(b).cloned().collect();
                            if !c.iter().any(|l| c.contains(&l.negate())) {
                                next.push(c);
                            }
                            if next.len() > max {
                                return None;
                            }
                        }
                    }
                    acc = next;
                }
                Some(acc)
            }
            Formula::Implies(..) | Formula::Iff(..) => unreachable!("input is in negation normal form"),
        }
    }
    let mut out: Vec<Vec<Lit>> = Vec::new();
    for c in go(&nnf(f), max_clauses)? {
        let c: Vec<Lit> = c.into_iter().collect();
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_rule};

    fn prog(rules: &[&str]) -> Program {
        Program::new(rules.iter().map(|r| parse_rule(r).unwrap()))
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn nu(pairs: &[(&str, bool)]) -> Assignment {
        pairs.iter().map(|(a, b)| (a.to_string(), *b)).collect()
    }

    #[test]
    fn evaluate_examples() {
        let w = parse_formula("(~p_hw | ~p_dl) & (p_dl -> p_hw)").unwrap();
        assert!(!evaluate(&w, &nu(&[("p_hw", true), ("p_dl", true)])).unwrap());
        assert!(evaluate(&Formula::True, &Assignment::new()).unwrap());
        let d = parse_formula("(~x1 | x2 | ~y) & (~x1 | x2 | y)").unwrap();
        assert!(!evaluate(&d, &nu(&[("x1", true), ("x2", false), ("y", true)])).unwrap());
        assert_eq!(evaluate(&d, &Assignment::new()), Err(Error::Unassigned("x1".into())));
    }

    #[test]
    fn consistency_examples() {
        let fs: Vec<Formula> = ["(~p_hw | ~p_dl) & (p_dl -> p_hw)", "p_dl", "p_dl", "~p_exp & (p_hw -> p_exp)"]
            .iter()
            .map(|s| parse_formula(s).unwrap())
            .collect();
        let fixed = nu(&[("noS", false), ("Te", false), ("Re", true), ("W", true), ("T", true), ("P", true)]);
        assert!(!classical_consistent(&fs, &fixed, 22).unwrap());
        assert!(classical_consistent(&[], &Assignment::new(), 22).unwrap());
        let d = parse_formula("(~x1 | x2 | ~y) & (~x1 | x2 | y)").unwrap();
        let fixed = nu(&[("x1", true), ("x2__p", true), ("x1__p", false), ("x2", false)]);
        assert!(!classical_consistent(&[d], &fixed, 22).unwrap());
    }

    #[test]
    fn splitting_agrees_with_scanning() {
        let mut r = crate::random::rng(41);
        let vars = crate::random::var_names("v", 14);
        for _ in 0..40 {
            let fs: Vec<Formula> = (0..3).map(|_| crate::random::formula(&mut r, &vars, 3)).collect();
            let free: Vec<String> = fs.iter().flat_map(Formula::vars).collect::<BTreeSet<_>>().into_iter().collect();
            let index: HashMap<&str, usize> = free.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
            let compiled: Vec<Compiled> = fs.iter().map(|f| Compiled::new(f, &index)).collect();
            let scan = (0..1u64 << free.len()).any(|m| compiled.iter().all(|c| c.eval(m)));
            assert_eq!(branch(fs), scan);
        }
    }

    #[test]
    fn consistency_cap() {
        let f = Formula::or((0..5).map(|i| Formula::atom(format!("v{i}"))).collect());
        assert!(matches!(classical_consistent(&[f], &Assignment::new(), 4), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn reduct_examples() {
        let p = prog(&[":- not a, not b"]);
        assert!(p.gl_reduct(&set(&["a"])).rules().is_empty());
        let p = prog(&["x :- y", "y."]);
        assert_eq!(p.gl_reduct(&set(&["x"])), p);
        let p = prog(&["x :- not y", "y :- not x"]);
        assert_eq!(p.gl_reduct(&set(&["x"])), prog(&["x."]));
    }

    #[test]
    fn answer_set_examples() {
        let p = prog(&["x :- not y", "y :- not x"]);
        assert!(p.is_answer_set(&set(&["x"]), 22).unwrap());
        assert!(!p.is_answer_set(&set(&["x", "y"]), 22).unwrap());
        assert!(Program::new(vec![]).is_answer_set(&set(&[]), 22).unwrap());
        let p = prog(&["a | b."]);
        assert!(!p.is_answer_set(&set(&["a", "b"]), 22).unwrap());
        assert!(p.is_answer_set(&set(&["a"]), 22).unwrap());
        assert_eq!(p.answer_sets(22).unwrap(), vec![set(&["a"]), set(&["b"])]);
    }

    #[test]
    fn consistency_of_programs() {
        // E = {a, d} of the non-monotone example
        let p = prog(&[":- not a, not b", "a.", "d.", ":- b", ":- c"]);
        assert!(p.is_consistent(22).unwrap());
        assert!(!prog(&[":- ."]).is_consistent(22).unwrap());
        let p = prog(&[":- not a, not b", "d.", ":- a", ":- b", ":- c"]);
        assert!(!p.is_consistent(22).unwrap());
    }

    #[test]
    fn tightness() {
        assert!(prog(&["x :- y", "y."]).is_tight());
        assert!(Program::new(vec![]).is_tight());
        assert!(!prog(&["x :- x"]).is_tight());
        assert!(!prog(&["x :- y", "y :- x"]).is_tight());
        assert!(prog(&["x :- not x"]).is_tight());
    }

    #[test]
    fn justification_examples() {
        assert!(prog(&["x :- not y"]).justified_model_check(&set(&["x"])).unwrap());
        assert!(!prog(&["x."]).justified_model_check(&set(&[])).unwrap());
        assert!(prog(&["a | b."]).justified_model_check(&set(&["a"])).unwrap());
        assert_eq!(prog(&["x :- x"]).justified_model_check(&set(&[])), Err(Error::NotTight));
    }

    fn models_projected(clauses: &[Vec<Lit>], vars: &[String], aux: &[String]) -> BTreeSet<u64> {
        let all: Vec<&String> = vars.iter().chain(aux).collect();
        let mut out = BTreeSet::new();
        for m in 0..1u64 << all.len() {
            let val = |a: &str| all.iter().position(|v| v.as_str() == a).map(|i| m >> i & 1 == 1).unwrap();
            if clauses.iter().all(|c| c.iter().any(|l| val(&l.atom) == l.positive)) {
                out.insert(m & ((1 << vars.len()) - 1));
            }
        }
        out
    }

    #[test]
    fn tseitin_examples() {
        let t = tseitin(&Formula::atom("a"));
        assert!(t.aux.is_empty() && t.clauses.is_empty());
        assert_eq!(t.output, Lit::pos("a"));

        let f = parse_formula("~(a & b)").unwrap();
        let t = tseitin(&f);
        assert_eq!(t.aux.len(), 1);
        assert!((3..=4).contains(&t.clauses.len()));
        let mut cl = t.clauses.clone();
        cl.push(vec![t.output.clone()]);
        let vars = vec!["a".to_string(), "b".to_string()];
        let aux: Vec<String> = t.aux.iter().map(|(n, _)| n.clone()).collect();
        assert_eq!(models_projected(&cl, &vars, &aux).len(), 3);
    }

    #[test]
    fn cnf_by_distribution() {
        let f = parse_formula("(a & b) | ~(c -> d)").unwrap();
        let cnf = to_cnf(&f, 100).unwrap();
        let vars: Vec<String> = f.vars().into_iter().collect();
        for m in 0..16u64 {
            let nu: Assignment = vars.iter().enumerate().map(|(i, v)| (v.clone(), m >> i & 1 == 1)).collect();
            let want = evaluate(&f, &nu).unwrap();
            let got = cnf.iter().all(|c| c.iter().any(|l| nu[&l.atom] == l.positive));
            assert_eq!(want, got);
        }
        let big = Formula::or((0..8).map(|i| Formula::and(vec![Formula::atom(format!("a{i}")), Formula::atom(format!("b{i}"))])).collect());
        assert!(to_cnf(&big, 100).is_none());
    }
}
