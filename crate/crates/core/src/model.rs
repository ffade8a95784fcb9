//! Domain types: frameworks, formulas, rules, rejection conditions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Words that cannot be used as argument or atom names.
pub const RESERVED: [&str; 3] = ["true", "false", "not"];

/// Letters, digits and underscores, not starting with a digit.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED.contains(&s)
}

/// A set of arguments, stored as a bit mask over argument indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArgSet(pub u64);

impl ArgSet {
    pub const EMPTY: ArgSet = ArgSet(0);

    pub fn full(n: usize) -> ArgSet {
        if n >= 64 {
            ArgSet(u64::MAX)
        } else {
            ArgSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> ArgSet {
        ArgSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ArgSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ArgSet) -> ArgSet {
        ArgSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ArgSet) -> ArgSet {
        ArgSet(self.0 & other.0)
    }

    pub fn difference(self, other: ArgSet) -> ArgSet {
        ArgSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl FromIterator<usize> for ArgSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ArgSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// A Dung argumentation framework with arguments kept in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Af {
    names: Vec<String>,
    index: HashMap<String, usize>,
    attacks: BTreeSet<(usize, usize)>,
}

impl Af {
    /// Builds a framework without attacks. Names must be unique identifiers
    /// and the argument set non-empty.
    pub fn new<I, S>(names: I) -> Result<Af>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut af = Af { names: Vec::new(), index: HashMap::new(), attacks: BTreeSet::new() };
        for n in names {
            af.push_argument(n.into())?;
        }
        if af.names.is_empty() {
            return Err(Error::Invalid("a framework needs at least one argument".into()));
        }
        Ok(af)
    }

    /// Convenience constructor from name and attack lists.
    pub fn from_edges(names: &[&str], attacks: &[(&str, &str)]) -> Result<Af> {
        let mut af = Af::new(names.iter().copied())?;
        for (a, b) in attacks {
            af.add_attack(a, b)?;
        }
        Ok(af)
    }

    pub(crate) fn push_argument(&mut self, name: String) -> Result<usize> {
        if !is_identifier(&name) {
            return Err(Error::Invalid(format!("`{name}` is not a valid identifier")));
        }
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateArgument(name));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    pub fn add_attack(&mut self, from: &str, to: &str) -> Result<()> {
        let a = self.index_of(from).ok_or_else(|| Error::UndeclaredArgument(from.into()))?;
        let b = self.index_of(to).ok_or_else(|| Error::UndeclaredArgument(to.into()))?;
        self.attacks.insert((a, b));
        Ok(())
    }

    pub fn add_attack_idx(&mut self, from: usize, to: usize) {
        assert!(from < self.len() && to < self.len(), "attack endpoint out of range");
        self.attacks.insert((from, to));
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Attacks as index pairs, sorted.
    pub fn attacks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.attacks.iter().copied()
    }

    pub fn num_attacks(&self) -> usize {
        self.attacks.len()
    }

    pub fn attacks_between(&self, a: usize, b: usize) -> bool {
        self.attacks.contains(&(a, b))
    }

    /// Resolves argument names to a set.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<ArgSet> {
        if self.len() > 64 {
            return Err(Error::CapExceeded { what: "argument bit set", size: self.len(), cap: 64 });
        }
        let mut s = ArgSet::EMPTY;
        for n in names {
            let n = n.as_ref();
            s.insert(self.index_of(n).ok_or_else(|| Error::UnknownArgument(n.into()))?);
        }
        Ok(s)
    }

    /// Member names in declaration order.
    pub fn names_of(&self, s: ArgSet) -> Vec<String> {
        s.iter().map(|i| self.names[i].clone()).collect()
    }

    /// The sub-framework induced by `keep`, with arguments in original order.
    /// Returns `None` when `keep` is empty.
    pub fn induced(&self, keep: ArgSet) -> Option<(Af, Vec<usize>)> {
        let old: Vec<usize> = keep.iter().filter(|&i| i < self.len()).collect();
        if old.is_empty() {
            return None;
        }
        let mut sub = Af::new(old.iter().map(|&i| self.names[i].clone())).ok()?;
        for (a, b) in self.attacks() {
            if keep.contains(a) && keep.contains(b) {
                let na = old.iter().position(|&x| x == a).unwrap();
                let nb = old.iter().position(|&x| x == b).unwrap();
                sub.add_attack_idx(na, nb);
            }
        }
        Some((sub, old))
    }
}

/// A literal: an atom or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lit {
    pub atom: String,
    pub positive: bool,
}

impl Lit {
    pub fn new(atom: impl Into<String>, positive: bool) -> Lit {
        Lit { atom: atom.into(), positive }
    }

    pub fn pos(atom: impl Into<String>) -> Lit {
        Lit::new(atom, true)
    }

    pub fn neg(atom: impl Into<String>) -> Lit {
        Lit::new(atom, false)
    }

    /// The complementary literal.
    pub fn negate(&self) -> Lit {
        Lit { atom: self.atom.clone(), positive: !self.positive }
    }

    pub fn to_formula(&self) -> Formula {
        Formula::lit(self.atom.clone(), self.positive)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(&self.atom)
    }
}

/// Propositional formula tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn lit(name: impl Into<String>, positive: bool) -> Formula {
        if positive {
            Formula::atom(name)
        } else {
            Formula::not(Formula::atom(name))
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; `True` when empty, the operand itself when singleton.
    pub fn and(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }

    /// Disjunction; `False` when empty, the operand itself when singleton.
    pub fn or(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Disjunction of literals.
    pub fn clause<'a>(lits: impl IntoIterator<Item = &'a Lit>) -> Formula {
        Formula::or(lits.into_iter().map(Lit::to_formula).collect())
    }

    /// Conjunction of literals.
    pub fn term<'a>(lits: impl IntoIterator<Item = &'a Lit>) -> Formula {
        Formula::and(lits.into_iter().map(Lit::to_formula).collect())
    }

    /// var(φ).
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Evaluates under `value`, which must cover every atom.
    pub fn eval_with<F>(&self, value: &F) -> Result<bool>
    where
        F: Fn(&str) -> Option<bool>,
    {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => value(a).ok_or_else(|| Error::Unassigned(a.clone()))?,
            Formula::Not(f) => !f.eval_with(value)?,
            Formula::And(fs) => {
                let mut r = true;
                for f in fs {
                    r &= f.eval_with(value)?;
                }
                r
            }
            Formula::Or(fs) => {
                let mut r = false;
                for f in fs {
                    r |= f.eval_with(value)?;
                }
                r
            }
            Formula::Implies(a, b) => !a.eval_with(value)? || b.eval_with(value)?,
            Formula::Iff(a, b) => a.eval_with(value)? == b.eval_with(value)?,
        })
    }

    /// Renames every atom through `f`.
    pub fn map_atoms<F: Fn(&str) -> String>(&self, f: &F) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
        }
    }

    /// If the formula is syntactically a clause (a literal, a disjunction of
    /// literals or `False`), returns its literals.
    pub fn as_clause(&self) -> Option<Vec<Lit>> {
        fn literal(f: &Formula) -> Option<Lit> {
            match f {
                Formula::Atom(a) => Some(Lit::pos(a.clone())),
                Formula::Not(g) => match g.as_ref() {
                    Formula::Atom(a) => Some(Lit::neg(a.clone())),
                    _ => None,
                },
                _ => None,
            }
        }
        match self {
            Formula::False => Some(Vec::new()),
            Formula::Or(fs) => fs.iter().map(literal).collect(),
            f => literal(f).map(|l| vec![l]),
        }
    }
}

/// A disjunctive rule `h1 | ... | hk :- p1, ..., pn, not n1, ..., not nm`.
/// An empty head is a constraint.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub head: BTreeSet<String>,
    pub pos: BTreeSet<String>,
    pub neg: BTreeSet<String>,
}

impl Rule {
    pub fn new<S: AsRef<str>>(head: &[S], pos: &[S], neg: &[S]) -> Rule {
        let set = |xs: &[S]| xs.iter().map(|s| s.as_ref().to_string()).collect();
        Rule { head: set(head), pos: set(pos), neg: set(neg) }
    }

    pub fn fact(atom: impl Into<String>) -> Rule {
        Rule { head: BTreeSet::from([atom.into()]), ..Rule::default() }
    }

    /// `:- atom.`
    pub fn deny(atom: impl Into<String>) -> Rule {
        Rule { pos: BTreeSet::from([atom.into()]), ..Rule::default() }
    }

    /// at(r).
    pub fn atoms(&self) -> BTreeSet<String> {
        self.head.iter().chain(&self.pos).chain(&self.neg).cloned().collect()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }
}

/// Interpretation of rejection conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    Classical,
    Asp,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Classical => "classical",
            Mode::Asp => "asp",
        })
    }
}

/// One element of a rejection condition C(a).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    Formula(Formula),
    Rule(Rule),
}

impl Condition {
    pub fn mode(&self) -> Mode {
        match self {
            Condition::Formula(_) => Mode::Classical,
            Condition::Rule(_) => Mode::Asp,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        match self {
            Condition::Formula(f) => f.vars(),
            Condition::Rule(r) => r.atoms(),
        }
    }
}

/// Rejection-condition classes, from most to least specific.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RcClass {
    Simple,
    Propositional,
    Tight,
    Normal,
    Disjunctive,
}

impl fmt::Display for RcClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RcClass::Simple => "simple",
            RcClass::Propositional => "propositional",
            RcClass::Tight => "tight",
            RcClass::Normal => "normal",
            RcClass::Disjunctive => "disjunctive",
        })
    }
}

impl FromStr for RcClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<RcClass> {
        Ok(match s {
            "simple" => RcClass::Simple,
            "propositional" | "prop" => RcClass::Propositional,
            "tight" => RcClass::Tight,
            "normal" => RcClass::Normal,
            "disjunctive" | "disj" => RcClass::Disjunctive,
            _ => return Err(Error::Invalid(format!("unknown RC class `{s}`"))),
        })
    }
}

/// Argumentation semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Semantics {
    Conf,
    Adm,
    Comp,
    Pref,
    Stab,
    SemiSt,
    Stag,
}

impl Semantics {
    pub const ALL: [Semantics; 7] = [
        Semantics::Conf,
        Semantics::Adm,
        Semantics::Comp,
        Semantics::Pref,
        Semantics::Stab,
        Semantics::SemiSt,
        Semantics::Stag,
    ];

    /// conf, adm, comp, stab, semiSt, stag.
    pub const STANDARD: [Semantics; 6] = [
        Semantics::Conf,
        Semantics::Adm,
        Semantics::Comp,
        Semantics::Stab,
        Semantics::SemiSt,
        Semantics::Stag,
    ];
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Conf => "conf",
            Semantics::Adm => "adm",
            Semantics::Comp => "comp",
            Semantics::Pref => "pref",
            Semantics::Stab => "stab",
            Semantics::SemiSt => "semiSt",
            Semantics::Stag => "stag",
        })
    }
}

impl FromStr for Semantics {
    type Err = Error;
    fn from_str(s: &str) -> Result<Semantics> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "conf" | "cf" => Semantics::Conf,
            "adm" => Semantics::Adm,
            "comp" | "co" => Semantics::Comp,
            "pref" | "pr" => Semantics::Pref,
            "stab" | "st" => Semantics::Stab,
            "semist" | "sst" => Semantics::SemiSt,
            "stag" | "stg" => Semantics::Stag,
            _ => return Err(Error::Invalid(format!("unknown semantics `{s}`"))),
        })
    }
}

/// A rejection-augmented framework (A, R, C).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raf {
    pub af: Af,
    pub mode: Mode,
    rc: Vec<Vec<Condition>>,
}

impl Raf {
    /// All conditions empty (⊤).
    pub fn new(af: Af, mode: Mode) -> Raf {
        let rc = vec![Vec::new(); af.len()];
        Raf { af, mode, rc }
    }

    /// Adds a condition to C(arg); duplicates are ignored since C(a) is a set.
    pub fn add_condition(&mut self, arg: usize, c: Condition) -> Result<()> {
        if c.mode() != self.mode {
            return Err(Error::MixedModes(format!(
                "{} condition added to a {} framework (argument `{}`)",
                c.mode(),
                self.mode,
                self.af.name(arg)
            )));
        }
        for v in c.vars() {
            if !is_identifier(&v) {
                return Err(Error::Invalid(format!("`{v}` is not a valid atom name")));
            }
        }
        if !self.rc[arg].contains(&c) {
            self.rc[arg].push(c);
        }
        Ok(())
    }

    pub fn add_formula(&mut self, arg: &str, f: Formula) -> Result<()> {
        let i = self.af.index_of(arg).ok_or_else(|| Error::UndeclaredArgument(arg.into()))?;
        self.add_condition(i, Condition::Formula(f))
    }

    pub fn add_rule(&mut self, arg: &str, r: Rule) -> Result<()> {
        let i = self.af.index_of(arg).ok_or_else(|| Error::UndeclaredArgument(arg.into()))?;
        self.add_condition(i, Condition::Rule(r))
    }

    /// C(a).
    pub fn conditions(&self, arg: usize) -> &[Condition] {
        &self.rc[arg]
    }

    /// C(E) as (host, condition) pairs, without duplicates.
    pub fn conditions_of(&self, e: ArgSet) -> Vec<&Condition> {
        let mut out: Vec<&Condition> = Vec::new();
        for i in e.iter() {
            for c in &self.rc[i] {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// var(C(A)).
    pub fn rc_vars(&self) -> BTreeSet<String> {
        self.rc.iter().flatten().flat_map(|c| c.vars()).collect()
    }

    /// var(C(A)) \ A.
    pub fn aux_vars(&self) -> BTreeSet<String> {
        self.rc_vars().into_iter().filter(|v| !self.af.contains(v)).collect()
    }

    /// Checks every invariant, naming the first violation.
    pub fn validate(&self) -> Result<()> {
        if self.af.is_empty() {
            return Err(Error::Invalid("framework has no arguments".into()));
        }
        if self.rc.len() != self.af.len() {
            return Err(Error::Invalid("condition map is not total".into()));
        }
        for (i, cs) in self.rc.iter().enumerate() {
            for (k, c) in cs.iter().enumerate() {
                if c.mode() != self.mode {
                    return Err(Error::MixedModes(format!(
                        "rc({})[{k}] is {} but the framework is {}",
                        self.af.name(i),
                        c.mode(),
                        self.mode
                    )));
                }
                if let Some(v) = c.vars().into_iter().find(|v| !is_identifier(v)) {
                    return Err(Error::Invalid(format!("rc({})[{k}]: bad atom `{v}`", self.af.name(i))));
                }
            }
        }
        Ok(())
    }

    /// The most specific class of C.
    pub fn classify(&self) -> RcClass {
        match self.mode {
            Mode::Classical => {
                if self.rc_vars().iter().all(|v| self.af.contains(v)) {
                    RcClass::Simple
                } else {
                    RcClass::Propositional
                }
            }
            Mode::Asp => {
                let program = crate::logic::Program::new(self.all_rules());
                if program.is_tight() {
                    RcClass::Tight
                } else if program.rules().iter().all(|r| r.head.len() <= 1) {
                    RcClass::Normal
                } else {
                    RcClass::Disjunctive
                }
            }
        }
    }

    /// The rules of C(A) (asp mode).
    pub fn all_rules(&self) -> Vec<Rule> {
        let mut out: Vec<Rule> = Vec::new();
        for c in self.rc.iter().flatten() {
            if let Condition::Rule(r) = c {
                if !out.contains(r) {
                    out.push(r.clone());
                }
            }
        }
        out
    }
}

/// A constrained framework (A, R, φ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caf {
    pub af: Af,
    pub constraint: Formula,
}

impl Caf {
    pub fn new(af: Af, constraint: Formula) -> Result<Caf> {
        if let Some(v) = constraint.vars().into_iter().find(|v| !af.contains(v)) {
            return Err(Error::UndeclaredArgument(v));
        }
        Ok(Caf { af, constraint })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifiers() {
        assert!(is_identifier("noS"));
        assert!(is_identifier("_x1"));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier("a-b"));
        assert!(!is_identifier("not"));
        assert!(!is_identifier(""));
    }

    #[test]
    fn argset_ops() {
        let s: ArgSet = [0, 3, 5].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert!(ArgSet::singleton(3).is_subset(s));
        assert_eq!(ArgSet::full(3).0, 0b111);
    }

    #[test]
    fn af_rejects_duplicates_and_undeclared() {
        assert_eq!(Af::new(["a", "a"]).unwrap_err(), Error::DuplicateArgument("a".into()));
        let mut af = Af::new(["a"]).unwrap();
        assert_eq!(af.add_attack("a", "b").unwrap_err(), Error::UndeclaredArgument("b".into()));
        assert!(Af::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn mixed_mode_condition_is_rejected() {
        let mut raf = Raf::new(Af::new(["a"]).unwrap(), Mode::Classical);
        raf.add_formula("a", Formula::False).unwrap();
        assert!(matches!(raf.add_rule("a", Rule::fact("x")), Err(Error::MixedModes(_))));
    }

    #[test]
    fn clause_view() {
        let lits = vec![Lit::pos("a"), Lit::neg("b")];
        let f = Formula::clause(&lits);
        assert_eq!(f.as_clause().unwrap(), lits);
        assert_eq!(Formula::False.as_clause().unwrap(), vec![]);
        assert!(Formula::True.as_clause().is_none());
    }
}
