//! Simulations of related formalisms and QBF hardness generators.

use std::collections::{BTreeSet, HashMap};

use crate::af::{self, Masks};
use crate::error::{Error, Result};
use crate::logic::Compiled;
use crate::model::{Af, ArgSet, Caf, Formula, Lit, Mode, Raf, Rule, Semantics};
use crate::par;
use crate::Config;

/// Hands out names that avoid everything already taken, appending `_`
/// until a base name is free.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    taken: BTreeSet<String>,
}

impl Fresh {
    pub fn new<S: AsRef<str>>(taken: impl IntoIterator<Item = S>) -> Fresh {
        Fresh { taken: taken.into_iter().map(|s| s.as_ref().to_string()).collect() }
    }

    pub fn name(&mut self, base: &str) -> String {
        let mut s = base.to_string();
        while self.taken.contains(&s) {
            s.push('_');
        }
        self.taken.insert(s.clone());
        s
    }

    /// One fresh copy of each name, suffixed.
    pub fn copies(&mut self, names: &[String], suffix: &str) -> Vec<String> {
        names.iter().map(|n| self.name(&format!("{n}{suffix}"))).collect()
    }
}

/// Every argument is rejected unconditionally.
pub fn af_to_raf(af: &Af) -> Raf {
    let mut raf = Raf::new(af.clone(), Mode::Classical);
    for a in 0..af.len() {
        raf.add_condition(a, crate::Condition::Formula(Formula::False)).expect("classical condition");
    }
    raf
}

/// A framework together with the semantics to query it under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub raf: Raf,
    pub semantics: Semantics,
}

fn atoms(names: &[String]) -> Vec<Formula> {
    names.iter().map(Formula::atom).collect()
}

/// Admissibility of the set named by `v`, or only conflict-freeness.
fn admissible_over(af: &Af, v: &[Formula], defense: bool) -> Formula {
    let mut parts = Vec::new();
    for (a, b) in af.attacks() {
        parts.push(Formula::or(vec![Formula::not(v[a].clone()), Formula::not(v[b].clone())]));
    }
    if defense {
        for (b, a) in af.attacks() {
            let counter: Vec<Formula> = af.attacks().filter(|&(_, t)| t == b).map(|(c, _)| v[c].clone()).collect();
            let mut disj = vec![Formula::not(v[a].clone())];
            disj.extend(counter);
            parts.push(Formula::or(disj));
        }
    }
    Formula::and(parts)
}

struct Copies {
    p: Vec<Formula>,
    pp: Vec<String>,
}

fn bridge(caf: &Caf, fresh: &mut Fresh) -> (Copies, Formula) {
    let names = caf.af.names().to_vec();
    let p = fresh.copies(&names, "__p");
    let pp = fresh.copies(&names, "__pp");
    let map: HashMap<&str, &str> = names.iter().map(String::as_str).zip(pp.iter().map(String::as_str)).collect();
    let mut parts: Vec<Formula> =
        p.iter().zip(&pp).map(|(a, b)| Formula::iff(Formula::atom(a), Formula::atom(b))).collect();
    parts.push(caf.constraint.map_atoms(&|x| map.get(x).map_or_else(|| x.to_string(), |s| s.to_string())));
    (Copies { p: atoms(&p), pp }, Formula::and(parts))
}

/// ψ for the preferred case: a strict superset that is admissible and
/// satisfies the constraint.
fn psi_pref(caf: &Caf, fresh: &mut Fresh) -> Formula {
    let (c, two) = bridge(caf, fresh);
    let _ = &c.pp;
    let one = admissible_over(&caf.af, &c.p, true);
    let e = atoms(caf.af.names());
    let sub: Vec<Formula> = e.iter().zip(&c.p).map(|(a, b)| Formula::implies(a.clone(), b.clone())).collect();
    let strict: Vec<Formula> =
        e.iter().zip(&c.p).map(|(a, b)| Formula::and(vec![b.clone(), Formula::not(a.clone())])).collect();
    Formula::and(vec![one, two, Formula::and(sub), Formula::or(strict)])
}

/// ψ for the range-maximal cases: a set with strictly larger range that is
/// admissible (or only conflict-free) and satisfies the constraint.
fn psi_range(caf: &Caf, fresh: &mut Fresh, defense: bool) -> Formula {
    let af = &caf.af;
    let (c, two) = bridge(caf, fresh);
    let one = admissible_over(af, &c.p, defense);
    let names = af.names().to_vec();
    let d = atoms(&fresh.copies(&names, "__d"));
    let dp = atoms(&fresh.copies(&names, "__dp"));
    let e = atoms(&names);
    let mut defs = Vec::new();
    for a in 0..af.len() {
        let att: Vec<usize> = af.attacks().filter(|&(_, t)| t == a).map(|(b, _)| b).collect();
        defs.push(Formula::iff(d[a].clone(), Formula::or(att.iter().map(|&b| e[b].clone()).collect())));
        defs.push(Formula::iff(dp[a].clone(), Formula::or(att.iter().map(|&b| c.p[b].clone()).collect())));
    }
    let mut incl = Vec::new();
    let mut strict = Vec::new();
    for a in 0..af.len() {
        let in_d = Formula::or(vec![c.p[a].clone(), dp[a].clone()]);
        incl.push(Formula::implies(e[a].clone(), in_d.clone()));
        incl.push(Formula::implies(d[a].clone(), in_d.clone()));
        strict.push(Formula::and(vec![in_d, Formula::not(e[a].clone()), Formula::not(d[a].clone())]));
    }
    Formula::and(vec![one, two, Formula::and(defs), Formula::and(incl), Formula::or(strict)])
}

/// A framework whose extensions under the returned semantics are the
/// non-empty extensions of the constrained framework under `sigma`.
pub fn caf_to_raf(caf: &Caf, sigma: Semantics) -> Result<Simulation> {
    let mut fresh = Fresh::new(caf.af.names());
    let not_phi = Formula::not(caf.constraint.clone());
    let (cond, semantics) = match sigma {
        Semantics::Adm | Semantics::Stab | Semantics::Comp => (not_phi, sigma),
        Semantics::Pref => (Formula::or(vec![not_phi, psi_pref(caf, &mut fresh)]), Semantics::Adm),
        Semantics::SemiSt => (Formula::or(vec![not_phi, psi_range(caf, &mut fresh, true)]), Semantics::Adm),
        Semantics::Stag => (Formula::or(vec![not_phi, psi_range(caf, &mut fresh, false)]), Semantics::Conf),
        Semantics::Conf => return Err(Error::Unsupported("conflict-free semantics of constrained frameworks".into())),
    };
    let mut raf = Raf::new(caf.af.clone(), Mode::Classical);
    for a in 0..caf.af.len() {
        raf.add_condition(a, crate::Condition::Formula(cond.clone()))?;
    }
    Ok(Simulation { raf, semantics })
}

fn check_cap(n: usize, cfg: &Config) -> Result<()> {
    if n > cfg.caps.arguments {
        return Err(Error::CapExceeded { what: "arguments", size: n, cap: cfg.caps.arguments });
    }
    Ok(())
}

/// Brute-force extensions of a constrained framework: the completion of a
/// set (members true, all other arguments false) must satisfy the
/// constraint.
pub fn caf_oracle(caf: &Caf, sigma: Semantics, cfg: &Config) -> Result<Vec<ArgSet>> {
    let af = &caf.af;
    check_cap(af.len(), cfg)?;
    let index: HashMap<&str, usize> = af.names().iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let phi = Compiled::new(&caf.constraint, &index);
    let m = Masks::new(af);
    let n = 1u64 << af.len();
    let base = match sigma {
        Semantics::Pref | Semantics::SemiSt => Semantics::Adm,
        Semantics::Stag => Semantics::Conf,
        s => s,
    };
    let ok = |s: u64| -> bool {
        let sem = match base {
            Semantics::Conf => m.conflict_free(s),
            Semantics::Adm => m.admissible(s),
            Semantics::Comp => m.complete(s),
            Semantics::Stab => m.stable(s),
            _ => unreachable!("base semantics"),
        };
        sem && phi.eval(s)
    };
    let sets = par::filter_map_range(cfg.exec, n, |s| ok(s).then_some(s));
    let out = match sigma {
        Semantics::Pref => af::maximal_by(&sets, |s| s),
        Semantics::SemiSt | Semantics::Stag => af::maximal_by(&sets, |s| m.range(s)),
        _ => sets,
    };
    Ok(out.into_iter().map(ArgSet).collect())
}

/// A framework, a shrinking S and two semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwofoldQuery {
    pub af: Af,
    pub shrinking: ArgSet,
    pub outer: Semantics,
    pub inner: Semantics,
}

/// Sets that are `outer`-extensions of the framework whose part inside S is
/// an `inner`-extension of the sub-framework induced by S.
pub fn twofold_oracle(q: &TwofoldQuery, cfg: &Config) -> Result<Vec<ArgSet>> {
    let af = &q.af;
    check_cap(af.len(), cfg)?;
    let s = q.shrinking;
    if !s.is_subset(ArgSet::full(af.len())) {
        return Err(Error::Invalid("shrinking is not a subset of the arguments".into()));
    }
    let outer = af::extension_masks(af, q.outer, cfg)?;
    let inner: BTreeSet<u64> = match af.induced(s) {
        // the empty sub-framework has exactly the empty extension
        None => [0].into_iter().collect(),
        Some((sub, orig)) => af::extension_masks(&sub, q.inner, cfg)?
            .into_iter()
            .map(|m| ArgSet(m).iter().fold(0u64, |acc, i| acc | 1 << orig[i]))
            .collect(),
    };
    Ok(outer.into_iter().filter(|e| inner.contains(&(e & s.0))).map(ArgSet).collect())
}

/// Encodes twofold (σ, stab)-extensions: E is rejected iff E ∩ S is stable
/// in the sub-framework induced by S. With S empty every set qualifies, so
/// every argument is rejected unconditionally.
pub fn twofold_to_raf(af: &Af, s: ArgSet) -> Result<Raf> {
    if !s.is_subset(ArgSet::full(af.len())) {
        return Err(Error::Invalid("shrinking is not a subset of the arguments".into()));
    }
    if s.is_empty() {
        return Ok(af_to_raf(af));
    }
    let mut fresh = Fresh::new(af.names());
    let primed = atoms(&fresh.copies(af.names(), "__p"));
    let escape = Formula::or(s.iter().map(|x| Formula::not(primed[x].clone())).collect());
    let mut raf = Raf::new(af.clone(), Mode::Classical);
    for a in 0..af.len() {
        let c = if s.contains(a) {
            let mut parts = vec![primed[a].clone()];
            parts.extend(af.attacks().filter(|&(x, _)| x == a).map(|(_, b)| primed[b].clone()));
            parts.push(escape.clone());
            Formula::and(parts)
        } else {
            Formula::True
        };
        raf.add_condition(a, crate::Condition::Formula(c))?;
    }
    Ok(raf)
}

use crate::qbf::{Qbf, Quant};
use crate::raf::Maximality;
use crate::td::{Bag, TreeDecomposition};
use crate::RcClass;

/// Splits the prefix along `pattern`, allowing absent blocks.
fn match_prefix(q: &Qbf, pattern: &[Quant]) -> Result<Vec<Vec<String>>> {
    let mut out = vec![Vec::new(); pattern.len()];
    let mut bi = 0;
    for (i, &p) in pattern.iter().enumerate() {
        if bi < q.blocks.len() && q.blocks[bi].quant == p {
            out[i] = q.blocks[bi].vars.clone();
            bi += 1;
        }
    }
    if bi != q.blocks.len() {
        let want: Vec<String> = pattern.iter().map(ToString::to_string).collect();
        return Err(Error::Qbf(format!("prefix does not fit `{}`", want.join(" "))));
    }
    Ok(out)
}

fn require_cnf(q: &Qbf) -> Result<()> {
    if q.matrix.dnf.is_some() {
        return Err(Error::Qbf("expected a CNF matrix".into()));
    }
    Ok(())
}

fn require_dnf(q: &Qbf) -> Result<&[Vec<Lit>]> {
    match &q.matrix.dnf {
        Some(d) if q.matrix.cnf.is_empty() => Ok(d),
        _ => Err(Error::Qbf("expected a DNF matrix".into())),
    }
}

/// Arguments X ∪ X′ with mutual attacks between each x and x′.
struct Guess {
    af: Af,
    x: Vec<String>,
    prime: HashMap<String, String>,
    fresh: Fresh,
}

fn guess_af(q: &Qbf, x: &[String]) -> Result<Guess> {
    if x.is_empty() {
        return Err(Error::Qbf("the outermost existential block is empty".into()));
    }
    q.validate()?;
    let mut fresh = Fresh::new(q.prefix_vars());
    let xp = fresh.copies(x, "__p");
    let mut names = x.to_vec();
    names.extend(xp.iter().cloned());
    let mut af = Af::new(names)?;
    for (a, b) in x.iter().zip(&xp) {
        af.add_attack(a, b)?;
        af.add_attack(b, a)?;
    }
    let prime = x.iter().cloned().zip(xp).collect();
    Ok(Guess { af, x: x.to_vec(), prime, fresh })
}

/// The generated framework with the primed copy of every variable that has
/// one.
#[derive(Clone, Debug)]
pub struct Generated {
    pub raf: Raf,
    pub prime: HashMap<String, String>,
}

/// Builds a framework with a conflict-free extension iff `q` is true.
///
/// * simple: `∃X. CNF`, every argument carries ¬φ
/// * propositional: `∃X ∀Y. DNF`, C(x) = C(x′) = negations of the terms on x
/// * tight: `∃X ∀Y. DNF`, guesses over Y and one constraint per term
/// * disjunctive: `∃X ∀Y ∃Z. CNF`, saturation over Z
pub fn hardness_instance(q: &Qbf, cls: RcClass) -> Result<Raf> {
    generate(q, cls).map(|g| g.raf)
}

pub fn generate(q: &Qbf, cls: RcClass) -> Result<Generated> {
    match cls {
        RcClass::Simple => {
            let g = match_prefix(q, &[Quant::Exists])?;
            require_cnf(q)?;
            let guess = guess_af(q, &g[0])?;
            let phi = Formula::and(q.matrix.cnf.iter().map(|c| Formula::clause(c)).collect());
            let mut raf = Raf::new(guess.af, Mode::Classical);
            for a in 0..raf.af.len() {
                raf.add_condition(a, crate::Condition::Formula(Formula::not(phi.clone())))?;
            }
            Ok(Generated { raf, prime: guess.prime })
        }
        RcClass::Propositional => {
            let g = match_prefix(q, &[Quant::Exists, Quant::Forall])?;
            let terms = require_dnf(q)?.to_vec();
            let guess = guess_af(q, &g[0])?;
            let xs: BTreeSet<&String> = guess.x.iter().collect();
            let mut raf = Raf::new(guess.af.clone(), Mode::Classical);
            for t in &terms {
                let hosts: Vec<&String> = t.iter().map(|l| &l.atom).filter(|v| xs.contains(v)).collect();
                if hosts.is_empty() {
                    return Err(Error::Qbf("every term must mention an existential variable".into()));
                }
                let neg: Vec<Lit> = t.iter().map(Lit::negate).collect();
                let f = Formula::clause(&neg);
                for h in hosts {
                    raf.add_formula(h, f.clone())?;
                    raf.add_formula(&guess.prime[h], f.clone())?;
                }
            }
            Ok(Generated { raf, prime: guess.prime })
        }
        RcClass::Tight => tight(q),
        RcClass::Disjunctive => disjunctive(q),
        RcClass::Normal => Err(Error::Unsupported("no generator for the normal class".into())),
    }
}

fn tight(q: &Qbf) -> Result<Generated> {
    let g = match_prefix(q, &[Quant::Exists, Quant::Forall])?;
    let terms = require_dnf(q)?.to_vec();
    let mut guess = guess_af(q, &g[0])?;
    let ys = g[1].clone();
    let yp = guess.fresh.copies(&ys, "__p");
    let mut prime = guess.prime.clone();
    prime.extend(ys.iter().cloned().zip(yp));
    let xs: BTreeSet<&String> = guess.x.iter().collect();
    let mut raf = Raf::new(guess.af.clone(), Mode::Asp);
    for t in &terms {
        // atoms true exactly when the term's literals hold
        let body: Vec<String> =
            t.iter().map(|l| if l.positive { l.atom.clone() } else { prime[&l.atom].clone() }).collect();
        let hosts: Vec<&String> = t.iter().filter(|l| xs.contains(&l.atom)).map(|l| &body[t.iter().position(|m| m == l).unwrap()]).collect();
        if hosts.is_empty() {
            return Err(Error::Qbf("every term must mention an existential variable".into()));
        }
        let mut rules = vec![Rule::new::<&str>(&[], &body.iter().map(String::as_str).collect::<Vec<_>>(), &[])];
        for l in t.iter().filter(|l| !xs.contains(&l.atom)) {
            let (y, y2) = (l.atom.as_str(), prime[&l.atom].as_str());
            rules.push(Rule::new(&[y], &[], &[y2]));
            rules.push(Rule::new(&[y2], &[], &[y]));
        }
        for h in hosts {
            for r in &rules {
                raf.add_rule(h, r.clone())?;
            }
        }
    }
    Ok(Generated { raf, prime })
}

fn disjunctive(q: &Qbf) -> Result<Generated> {
    let g = match_prefix(q, &[Quant::Exists, Quant::Forall, Quant::Exists])?;
    require_cnf(q)?;
    let mut guess = guess_af(q, &g[0])?;
    let (ys, zs) = (g[1].clone(), g[2].clone());
    let mut prime = guess.prime.clone();
    for v in ys.iter().chain(&zs) {
        let p = guess.fresh.name(&format!("{v}__p"));
        prime.insert(v.clone(), p);
    }
    let s = guess.fresh.name("sat");
    let xs: BTreeSet<&String> = guess.x.iter().collect();
    let mut common = Vec::new();
    for x in &guess.x {
        common.push(Rule::new(&[s.as_str()], &[], &[x.as_str(), prime[x].as_str()]));
    }
    for y in &ys {
        common.push(Rule::new(&[y.as_str()], &[], &[prime[y].as_str()]));
        common.push(Rule::new(&[prime[y].as_str()], &[], &[y.as_str()]));
    }
    for z in &zs {
        common.push(Rule::new::<&str>(&[z.as_str(), prime[z].as_str()], &[], &[]));
        common.push(Rule::new(&[z.as_str()], &[s.as_str()], &[]));
        common.push(Rule::new(&[prime[z].as_str()], &[s.as_str()], &[]));
    }
    common.push(Rule::new::<&str>(&[], &[], &[s.as_str()]));
    let mut raf = Raf::new(guess.af.clone(), Mode::Asp);
    let all: Vec<String> = raf.af.names().to_vec();
    for a in &all {
        for r in &common {
            raf.add_rule(a, r.clone())?;
        }
    }
    for c in &q.matrix.cnf {
        // atoms true exactly when the clause's literals are false
        let body: Vec<&str> =
            c.iter().map(|l| if l.positive { prime[&l.atom].as_str() } else { l.atom.as_str() }).collect();
        let rule = Rule::new(&[s.as_str()], &body, &[]);
        let hosts: Vec<String> = c
            .iter()
            .zip(&body)
            .filter(|(l, _)| xs.contains(&l.atom))
            .map(|(_, b)| b.to_string())
            .collect();
        let hosts = if hosts.is_empty() { all.clone() } else { hosts };
        for h in &hosts {
            raf.add_rule(h, rule.clone())?;
        }
    }
    Ok(Generated { raf, prime })
}

/// The decomposition of the generated framework's primal graph obtained
/// from a decomposition of the matrix's primal graph by adding the primed
/// copy of every bag variable. Arguments absent from the matrix get their
/// own leaf below the root.
pub fn lift_td(g: &Generated, td: &TreeDecomposition) -> TreeDecomposition {
    let mut out = td.clone();
    for bag in &mut out.bags {
        let extra: Vec<String> = bag.iter().filter_map(|v| g.prime.get(v).cloned()).collect();
        bag.extend(extra);
    }
    let covered: BTreeSet<String> = out.bags.iter().flatten().cloned().collect();
    let mut orphans: Vec<&String> = g.raf.af.names().iter().filter(|a| !covered.contains(*a)).collect();
    orphans.sort();
    let mut done = BTreeSet::new();
    for a in orphans {
        // pair each orphan with its twin
        let base = g.prime.iter().find(|(_, p)| *p == a).map(|(x, _)| x.clone()).unwrap_or_else(|| a.clone());
        if !done.insert(base.clone()) {
            continue;
        }
        let mut bag: Bag = [base.clone()].into_iter().collect();
        if let Some(p) = g.prime.get(&base) {
            bag.insert(p.clone());
        }
        out.bags.push(bag);
        out.children.push(Vec::new());
        let id = out.bags.len() - 1;
        out.children[out.root].push(id);
    }
    out
}

/// A credulous-hardness instance: the query argument lies in no
/// semi-stable (or stage) extension iff the input is true.
#[derive(Clone, Debug)]
pub struct CredInstance {
    pub raf: Raf,
    pub query: String,
    /// Reading of the maximality conditions under which the equivalence is
    /// meant to hold.
    pub maximality: Maximality,
}

/// Builds the credulous-hardness instance.
///
/// * simple: `∀Y ∃Z. CNF`; clause arguments, every argument rejected
///   unconditionally
/// * propositional: `∀Y ∃Z ∀X. DNF`; C(t) = negated terms, C(a) = {t}
///   elsewhere
/// * disjunctive: `∀Y ∃Z ∀X ∃W. CNF`; C(t) saturates over W, C(a) = {← not t}
///   elsewhere
pub fn cred_hardness_instance(q: &Qbf, cls: RcClass) -> Result<CredInstance> {
    q.validate()?;
    let g = match cls {
        RcClass::Simple => {
            require_cnf(q)?;
            match_prefix(q, &[Quant::Forall, Quant::Exists])?
        }
        RcClass::Propositional => {
            require_dnf(q)?;
            match_prefix(q, &[Quant::Forall, Quant::Exists, Quant::Forall])?
        }
        RcClass::Disjunctive => {
            require_cnf(q)?;
            match_prefix(q, &[Quant::Forall, Quant::Exists, Quant::Forall, Quant::Exists])?
        }
        other => return Err(Error::Unsupported(format!("no credulous generator for the {other} class"))),
    };
    let (ys, zs) = (&g[0], &g[1]);
    let mut fresh = Fresh::new(q.prefix_vars());
    let t = fresh.name("t");
    let tp = fresh.name("t__p");
    let b = fresh.name("b");
    let mut names = vec![t.clone(), tp.clone(), b.clone()];
    let mut prime: HashMap<String, String> = HashMap::new();
    let mut attacks: Vec<(String, String)> = vec![(t.clone(), tp.clone()), (tp.clone(), t.clone()), (t.clone(), b.clone()), (b.clone(), b.clone())];
    for v in ys.iter().chain(zs) {
        let p = fresh.name(&format!("{v}__p"));
        names.push(v.clone());
        names.push(p.clone());
        attacks.push((v.clone(), p.clone()));
        attacks.push((p.clone(), v.clone()));
        prime.insert(v.clone(), p);
    }
    for y in ys {
        let h = fresh.name(&format!("{y}__h"));
        let hp = fresh.name(&format!("{y}__ph"));
        names.push(h.clone());
        names.push(hp.clone());
        attacks.push((y.clone(), h.clone()));
        attacks.push((prime[y].clone(), hp.clone()));
        attacks.push((h.clone(), h.clone()));
        attacks.push((hp.clone(), hp.clone()));
    }
    let argument_of = |l: &Lit| if l.positive { l.atom.clone() } else { prime[&l.atom].clone() };
    if cls == RcClass::Simple {
        for (i, c) in q.matrix.cnf.iter().enumerate() {
            let cn = fresh.name(&format!("c{}", i + 1));
            names.push(cn.clone());
            attacks.push((cn.clone(), t.clone()));
            for l in c {
                attacks.push((argument_of(l), cn.clone()));
            }
        }
    }
    let mut af = Af::new(names)?;
    for (x, y) in &attacks {
        af.add_attack(x, y)?;
    }
    let all: Vec<String> = af.names().to_vec();
    let (mode, maximality) = match cls {
        RcClass::Disjunctive => (Mode::Asp, Maximality::Rejected),
        RcClass::Propositional => (Mode::Classical, Maximality::Rejected),
        _ => (Mode::Classical, Maximality::BaseAf),
    };
    let mut raf = Raf::new(af, mode);
    match cls {
        RcClass::Simple => {
            for a in &all {
                raf.add_formula(a, Formula::False)?;
            }
        }
        RcClass::Propositional => {
            for term in q.matrix.dnf.as_ref().expect("checked DNF") {
                let neg: Vec<Lit> = term.iter().map(Lit::negate).collect();
                raf.add_formula(&t, Formula::clause(&neg))?;
            }
            for a in all.iter().filter(|a| **a != t) {
                raf.add_formula(a, Formula::atom(&t))?;
            }
        }
        _ => {
            let (xs, ws) = (&g[2], &g[3]);
            let mut local = prime.clone();
            for v in xs.iter().chain(ws) {
                local.insert(v.clone(), fresh.name(&format!("{v}__p")));
            }
            let s = fresh.name("sat");
            let mut rules = Vec::new();
            for v in ys.iter().chain(zs) {
                rules.push(Rule::new(&[s.as_str()], &[], &[v.as_str(), local[v].as_str()]));
            }
            for x in xs {
                rules.push(Rule::new(&[x.as_str()], &[], &[local[x].as_str()]));
                rules.push(Rule::new(&[local[x].as_str()], &[], &[x.as_str()]));
            }
            for w in ws {
                rules.push(Rule::new::<&str>(&[w.as_str(), local[w].as_str()], &[], &[]));
                rules.push(Rule::new(&[w.as_str()], &[s.as_str()], &[]));
                rules.push(Rule::new(&[local[w].as_str()], &[s.as_str()], &[]));
            }
            rules.push(Rule::new::<&str>(&[], &[], &[s.as_str()]));
            for c in &q.matrix.cnf {
                let body: Vec<&str> =
                    c.iter().map(|l| if l.positive { local[&l.atom].as_str() } else { l.atom.as_str() }).collect();
                rules.push(Rule::new(&[s.as_str()], &body, &[]));
            }
            for r in rules {
                raf.add_rule(&t, r)?;
            }
            for a in all.iter().filter(|a| **a != t) {
                raf.add_rule(a, Rule::new::<&str>(&[], &[], &[t.as_str()]))?;
            }
        }
    }
    Ok(CredInstance { raf, query: tp, maximality })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_af, parse_formula, parse_raf};
    use crate::qbf::{evaluate_qbf, tests::ex6, Block, Matrix};
    use crate::raf::{cons_with, cred_with, extension_masks, is_extension};
    use crate::random;

    fn cfg() -> Config {
        Config::default()
    }

    fn fig4() -> Af {
        parse_raf(include_str!("../../../instances/fig4.raf")).unwrap().af
    }

    fn named(af: &Af, sets: &[u64]) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = sets
            .iter()
            .map(|&s| {
                let mut n = af.names_of(ArgSet(s));
                n.sort();
                n
            })
            .collect();
        v.sort();
        v
    }

    fn nonempty(v: Vec<u64>) -> Vec<u64> {
        v.into_iter().filter(|&s| s != 0).collect()
    }

    #[test]
    fn af_simulation_examples() {
        let f1 = parse_af(include_str!("../../../instances/fig1.af")).unwrap();
        let g = af_to_raf(&f1);
        let st = extension_masks(&g, Semantics::Stab, &cfg(), Maximality::BaseAf).unwrap();
        assert_eq!(named(&f1, &st), vec![vec!["P", "T", "W"]]);
        let selfish = Af::from_edges(&["a"], &[("a", "a")]).unwrap();
        for s in Semantics::ALL {
            assert!(extension_masks(&af_to_raf(&selfish), s, &cfg(), Maximality::BaseAf).unwrap().is_empty());
        }
        let f4 = fig4();
        let adm = extension_masks(&af_to_raf(&f4), Semantics::Adm, &cfg(), Maximality::BaseAf).unwrap();
        assert_eq!(named(&f4, &adm), vec![vec!["a"], vec!["a", "b"], vec!["a", "d"], vec!["b"], vec!["d"]]);
    }

    #[test]
    fn af_simulation_matches_on_random_frameworks() {
        let mut r = random::rng(11);
        for _ in 0..60 {
            let af = random::af(&mut r, 6, 0.25);
            let g = af_to_raf(&af);
            for s in Semantics::ALL {
                let want = nonempty(af::extension_masks(&af, s, &cfg()).unwrap());
                assert_eq!(extension_masks(&g, s, &cfg(), Maximality::BaseAf).unwrap(), want, "{s}");
            }
        }
    }

    fn sim(caf: &Caf, s: Semantics) -> Vec<u64> {
        let m = caf_to_raf(caf, s).unwrap();
        extension_masks(&m.raf, m.semantics, &cfg(), Maximality::BaseAf).unwrap()
    }

    fn oracle(caf: &Caf, s: Semantics) -> Vec<u64> {
        nonempty(caf_oracle(caf, s, &cfg()).unwrap().into_iter().map(|a| a.0).collect())
    }

    #[test]
    fn caf_examples() {
        let f4 = fig4();
        let ab = Caf::new(f4.clone(), parse_formula("a & b").unwrap()).unwrap();
        assert_eq!(named(&f4, &oracle(&ab, Semantics::Adm)), vec![vec!["a", "b"]]);
        assert_eq!(named(&f4, &sim(&ab, Semantics::Adm)), vec![vec!["a", "b"]]);
        let top = Caf::new(f4.clone(), Formula::True).unwrap();
        assert_eq!(named(&f4, &sim(&top, Semantics::Pref)), vec![vec!["a", "b"], vec!["a", "d"]]);
        let st = nonempty(af::extension_masks(&f4, Semantics::Stab, &cfg()).unwrap());
        assert_eq!(sim(&top, Semantics::Stab), st);
        let bot = Caf::new(f4.clone(), Formula::False).unwrap();
        for s in [Semantics::Adm, Semantics::Stab, Semantics::Pref, Semantics::Stag] {
            assert!(caf_oracle(&bot, s, &cfg()).unwrap().is_empty());
        }
        let f1 = parse_af(include_str!("../../../instances/fig1.af")).unwrap();
        let w = Caf::new(f1.clone(), Formula::atom("W")).unwrap();
        assert_eq!(named(&f1, &oracle(&w, Semantics::Stab)), vec![vec!["P", "T", "W"]]);
        assert!(matches!(caf_to_raf(&w, Semantics::Conf), Err(Error::Unsupported(_))));
    }

    #[test]
    fn caf_simulation_matches_oracle() {
        let mut r = random::rng(5);
        for _ in 0..40 {
            let caf = random::caf(&mut r, 4, 3);
            for s in [Semantics::Adm, Semantics::Comp, Semantics::Stab, Semantics::Pref, Semantics::SemiSt, Semantics::Stag] {
                assert_eq!(sim(&caf, s), oracle(&caf, s), "{s} on {caf:?}");
            }
        }
    }

    fn fig3() -> Af {
        parse_af(include_str!("../../../instances/fig3.af")).unwrap()
    }

    fn twofold(af: &Af, s: ArgSet, outer: Semantics, inner: Semantics) -> Vec<u64> {
        let q = TwofoldQuery { af: af.clone(), shrinking: s, outer, inner };
        twofold_oracle(&q, &cfg()).unwrap().into_iter().map(|a| a.0).collect()
    }

    #[test]
    fn twofold_examples() {
        let f = fig3();
        let abc = f.set_of(&["a", "b", "c"]).unwrap();
        let o = named(&f, &twofold(&f, abc, Semantics::Adm, Semantics::Stab));
        assert!(o.contains(&vec!["a".to_string()]) && o.contains(&vec!["b".to_string()]));
        let cde = f.set_of(&["c", "d", "e"]).unwrap();
        let c = f.set_of(&["c"]).unwrap().0;
        assert!(twofold(&f, cde, Semantics::Conf, Semantics::Pref).contains(&c));
        let g = twofold_to_raf(&f, abc).unwrap();
        let ext = extension_masks(&g, Semantics::Adm, &cfg(), Maximality::BaseAf).unwrap();
        assert_eq!(ext, nonempty(twofold(&f, abc, Semantics::Adm, Semantics::Stab)));
        let all = ArgSet::full(f.len());
        for s in Semantics::STANDARD {
            let both: Vec<u64> = af::extension_masks(&f, s, &cfg())
                .unwrap()
                .into_iter()
                .filter(|&e| af::satisfies(&f, ArgSet(e), Semantics::Stab).unwrap())
                .collect();
            assert_eq!(twofold(&f, all, s, Semantics::Stab), both);
        }
    }

    #[test]
    fn twofold_matches_oracle() {
        let mut r = random::rng(3);
        for i in 0..60u64 {
            let af = random::af(&mut r, 5, 0.3);
            let s = ArgSet(i.wrapping_mul(0x9E37_79B9) % (1 << af.len()));
            let g = twofold_to_raf(&af, s).unwrap();
            for sigma in Semantics::STANDARD {
                let want = nonempty(twofold(&af, s, sigma, Semantics::Stab));
                assert_eq!(extension_masks(&g, sigma, &cfg(), Maximality::BaseAf).unwrap(), want);
            }
        }
    }

    fn cons_conf(raf: &Raf) -> bool {
        cons_with(raf, Semantics::Conf, &cfg(), Maximality::BaseAf).unwrap()
    }

    #[test]
    fn example_six_generator() {
        let g = hardness_instance(&ex6(), RcClass::Propositional).unwrap();
        assert_eq!(g.classify(), RcClass::Propositional);
        let c = g.conditions(g.af.index_of("x1").unwrap()).to_vec();
        assert_eq!(c.len(), 2);
        for a in ["x2", "x1__p", "x2__p"] {
            assert_eq!(g.conditions(g.af.index_of(a).unwrap()), &c[..]);
        }
        let e = g.af.set_of(&["x1", "x2__p"]).unwrap();
        assert!(is_extension(&g, e, Semantics::Conf).unwrap());
    }

    #[test]
    fn small_generator_examples() {
        let unsat = Qbf::new(
            vec![Block::new(Quant::Exists, ["x"])],
            Matrix::cnf(vec![vec![Lit::pos("x")], vec![Lit::neg("x")]]),
        );
        assert!(!cons_conf(&hardness_instance(&unsat, RcClass::Simple).unwrap()));
        let valid = Qbf::new(
            vec![Block::new(Quant::Exists, ["x"]), Block::new(Quant::Forall, ["y"]), Block::new(Quant::Exists, ["z"])],
            Matrix::cnf(vec![vec![Lit::pos("x"), Lit::pos("y")], vec![Lit::pos("x"), Lit::neg("y")]]),
        );
        // z occurs in no clause, so the saturation part has no cycle
        let g = hardness_instance(&valid, RcClass::Disjunctive).unwrap();
        assert_eq!(g.classify(), RcClass::Tight);
        assert!(cons_conf(&g));
        assert!(hardness_instance(&ex6(), RcClass::Simple).is_err());
        assert!(hardness_instance(&valid, RcClass::Tight).is_err());
    }

    #[test]
    fn generators_agree_with_evaluator() {
        let mut r = random::rng(17);
        for _ in 0..40 {
            let sat = random::qbf(&mut r, Quant::Exists, &[4], 5, 3, false);
            assert_eq!(cons_conf(&hardness_instance(&sat, RcClass::Simple).unwrap()), evaluate_qbf(&sat, 24).unwrap());
            let ef = random::qbf_exists_forall_dnf(&mut r, 3, 2, 4, 3);
            let truth = evaluate_qbf(&ef, 24).unwrap();
            for cls in [RcClass::Propositional, RcClass::Tight] {
                let g = hardness_instance(&ef, cls).unwrap();
                assert_eq!(g.classify(), cls);
                assert_eq!(cons_conf(&g), truth, "{cls} {ef}");
            }
            let efe = random::qbf_efe_cnf(&mut r, 2, 2, 2, 5, 3);
            let g = hardness_instance(&efe, RcClass::Disjunctive).unwrap();
            assert_eq!(cons_conf(&g), evaluate_qbf(&efe, 24).unwrap(), "{efe}");
        }
    }

    fn cred_ok(q: &Qbf, cls: RcClass) {
        let inst = cred_hardness_instance(q, cls).unwrap();
        let truth = evaluate_qbf(q, 24).unwrap();
        for s in [Semantics::SemiSt, Semantics::Stag] {
            let c = cred_with(&inst.raf, s, &inst.query, &cfg(), inst.maximality).unwrap();
            assert_eq!(!c, truth, "{cls} {s} {q}");
        }
    }

    #[test]
    fn credulous_examples() {
        let valid = Qbf::new(
            vec![Block::new(Quant::Forall, ["y"]), Block::new(Quant::Exists, ["z"])],
            Matrix::cnf(vec![vec![Lit::pos("y"), Lit::pos("z")], vec![Lit::neg("y"), Lit::pos("z")]]),
        );
        let invalid = Qbf::new(
            vec![Block::new(Quant::Forall, ["y"]), Block::new(Quant::Exists, ["z"])],
            Matrix::cnf(vec![vec![Lit::pos("z")], vec![Lit::neg("z")]]),
        );
        assert!(evaluate_qbf(&valid, 24).unwrap() && !evaluate_qbf(&invalid, 24).unwrap());
        cred_ok(&valid, RcClass::Simple);
        cred_ok(&invalid, RcClass::Simple);
    }

    #[test]
    fn credulous_generators_agree_with_evaluator() {
        let mut r = random::rng(23);
        for _ in 0..15 {
            cred_ok(&random::qbf(&mut r, Quant::Forall, &[2, 2], 4, 3, false), RcClass::Simple);
            cred_ok(&random::qbf(&mut r, Quant::Forall, &[1, 2, 2], 4, 3, true), RcClass::Propositional);
            cred_ok(&random::qbf(&mut r, Quant::Forall, &[1, 1, 1, 1], 4, 3, false), RcClass::Disjunctive);
        }
    }

    #[test]
    fn lifted_decompositions_double_bags_at_most() {
        use crate::td::{heuristic_td, primal_matrix, primal_raf, validate_td};
        let mut r = random::rng(29);
        for _ in 0..30 {
            let q = random::qbf_exists_forall_dnf(&mut r, 4, 3, 5, 3);
            let td = heuristic_td(&primal_matrix(&q.matrix));
            for cls in [RcClass::Propositional, RcClass::Tight] {
                let g = generate(&q, cls).unwrap();
                let lifted = lift_td(&g, &td);
                let w = validate_td(&primal_raf(&g.raf), &lifted).unwrap();
                assert!(w <= 2 * td.width() + 1);
                for (a, b) in td.bags.iter().zip(&lifted.bags) {
                    assert!(b.len() <= 2 * a.len());
                }
            }
        }
    }
}
