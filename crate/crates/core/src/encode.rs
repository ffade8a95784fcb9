//! Decomposition-guided reductions from stable-consistency of a framework
//! to QBF, each with variable provenance and a decomposition of the result.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{to_cnf, tseitin_with};
use crate::model::{Af, Condition, Formula, Lit, Mode, Raf, RcClass, Rule};
use crate::parse::{render_formula, render_rule};
use crate::qbf::{Block, Clause, Matrix, Qbf, Quant, Term};
use crate::td::{heuristic_td_with, normalize_td, Heuristic, primal_matrix, primal_raf, validate_td, Bag, NormalTd, TreeDecomposition};
use crate::translate::Fresh;

// Formulas whose CNF by distribution would exceed this are defined by
// auxiliary variables instead.
const CNF_LIMIT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fragment {
    Stab,
    Simple,
    Prop,
    Tight,
    Disj,
}

impl Fragment {
    pub const ALL: [Fragment; 5] = [Fragment::Stab, Fragment::Simple, Fragment::Prop, Fragment::Tight, Fragment::Disj];

    /// The most specific encoding for a class.
    pub fn for_class(c: RcClass) -> Fragment {
        match c {
            RcClass::Simple => Fragment::Simple,
            RcClass::Propositional => Fragment::Prop,
            RcClass::Tight => Fragment::Tight,
            RcClass::Normal | RcClass::Disjunctive => Fragment::Disj,
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Stab => "stab",
            Fragment::Simple => "simple",
            Fragment::Prop => "prop",
            Fragment::Tight => "tight",
            Fragment::Disj => "disj",
        })
    }
}

impl FromStr for Fragment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Fragment> {
        Fragment::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown fragment {s}")))
    }
}

/// Where an encoding variable comes from. Node ids refer to the normalized
/// source decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Origin {
    Argument { name: String },
    Defeated { argument: String, node: usize },
    Witness { node: usize },
    ConditionWitness { node: usize, condition: String },
    RcVar { name: String },
    Auxiliary { name: String, defines: String },
    ReductCopy { atom: String },
    Justified { atom: String, node: usize },
    RuleJustified { node: usize, condition: String },
    Subset { node: usize },
    SubsetAtom { atom: String, node: usize },
    Reduct,
}

#[derive(Clone, Debug)]
pub struct Encoding {
    pub fragment: Fragment,
    pub qbf: Qbf,
    pub origin: BTreeMap<String, Origin>,
    /// Normalized decomposition the encoding was guided by.
    pub source: NormalTd,
    /// Width of the decomposition passed in.
    pub source_width: usize,
    /// Decomposition of the primal graph of the matrix built node by node
    /// from the source decomposition.
    pub structured: TreeDecomposition,
    /// The narrowest of `structured` and greedy decompositions of the matrix
    /// primal graph.
    pub induced: TreeDecomposition,
}

impl Encoding {
    pub fn induced_td(&self) -> &TreeDecomposition {
        &self.induced
    }

    /// Provenance as JSON, keyed by variable name.
    pub fn provenance_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.origin).expect("provenance serializes")
    }

    /// Provenance keyed by the QDIMACS numbering of `qdimacs_order`.
    pub fn numbered_provenance(&self, qdimacs_order: &[String]) -> serde_json::Value {
        let m: BTreeMap<usize, serde_json::Value> = qdimacs_order
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                self.origin.get(v).map(|o| {
                    let mut j = serde_json::to_value(o).expect("provenance serializes");
                    j["name"] = serde_json::Value::String(v.clone());
                    (i + 1, j)
                })
            })
            .collect();
        serde_json::to_value(m).expect("provenance serializes")
    }
}

fn describe(c: &Condition) -> String {
    match c {
        Condition::Formula(f) => render_formula(f),
        Condition::Rule(r) => render_rule(r),
    }
}

struct Ctx {
    raf: Raf,
    ntd: NormalTd,
    fresh: Fresh,
    origin: BTreeMap<String, Origin>,
    extra: Vec<BTreeSet<String>>,
    cnf: Vec<Clause>,
    dnf: Vec<Term>,
    /// d variables per node and argument index
    defeated: Vec<BTreeMap<usize, String>>,
}

impl Ctx {
    fn var(&mut self, base: &str, o: Origin) -> String {
        let v = self.fresh.name(base);
        self.origin.insert(v.clone(), o);
        v
    }

    fn touch(&mut self, node: usize, v: &str) {
        self.extra[node].insert(v.to_string());
    }

    fn nodes(&self) -> Vec<usize> {
        self.ntd.td.postorder()
    }

    fn args_of(&self, t: usize) -> Vec<usize> {
        self.ntd.projection(&self.raf, t).args.iter().collect()
    }

    fn arg(&self, a: usize) -> String {
        self.raf.af.name(a).to_string()
    }

    fn is_arg(&self, v: &str) -> bool {
        self.raf.af.contains(v)
    }

    fn hosts(&self, t: usize, c: &Condition) -> Vec<String> {
        self.ntd.projection(&self.raf, t).hosts(&self.raf, c).into_iter().map(|a| self.arg(a)).collect()
    }

    fn induced(&self) -> TreeDecomposition {
        let mut td = self.ntd.td.clone();
        for (b, e) in td.bags.iter_mut().zip(&self.extra) {
            b.extend(e.iter().cloned());
        }
        td
    }
}

/// Checks the decomposition against the framework and sets up the shared
/// state. `pre` rewrites conditions and may add vertices to bags.
fn setup(raf: &Raf, td: &TreeDecomposition, pre: Option<(Raf, TreeDecomposition)>) -> Result<(Ctx, usize)> {
    let k = validate_td(&primal_raf(raf), td)?;
    let (raf2, td2) = pre.unwrap_or_else(|| (raf.clone(), td.clone()));
    let ntd = normalize_td(&td2, Some(&raf2));
    let mut taken: BTreeSet<String> = raf2.af.names().iter().cloned().collect();
    taken.extend(raf2.rc_vars());
    taken.extend(td2.bags.iter().flatten().cloned());
    let n = ntd.td.len();
    let mut ctx = Ctx {
        raf: raf2,
        ntd,
        fresh: Fresh::new(&taken),
        origin: BTreeMap::new(),
        extra: vec![BTreeSet::new(); n],
        cnf: Vec::new(),
        dnf: Vec::new(),
        defeated: vec![BTreeMap::new(); n],
    };
    for a in ctx.raf.af.names().to_vec() {
        ctx.origin.insert(a.clone(), Origin::Argument { name: a });
    }
    Ok((ctx, k))
}

/// Formulas (1)-(3): defeated variables, conflict-freeness, and every
/// argument in or defeated at its topmost node.
fn stab_part(ctx: &mut Ctx) {
    for t in ctx.nodes() {
        for a in ctx.args_of(t) {
            let name = format!("d{t}_{}", ctx.arg(a));
            let v = ctx.var(&name, Origin::Defeated { argument: ctx.arg(a), node: t });
            ctx.touch(t, &v);
            ctx.defeated[t].insert(a, v);
        }
    }
    for t in ctx.nodes() {
        let proj = ctx.ntd.projection(&ctx.raf, t);
        for a in proj.args.iter() {
            let d = ctx.defeated[t][&a].clone();
            let mut clause = vec![Lit::neg(&d)];
            for &c in &ctx.ntd.td.children[t].clone() {
                if let Some(dc) = ctx.defeated[c].get(&a).cloned() {
                    clause.push(Lit::pos(&dc));
                    ctx.touch(t, &dc);
                }
            }
            // a self-attacker is never in the extension, so it defeats nothing
            for &(b, x) in &proj.attacks {
                if x == a && b != a {
                    clause.push(Lit::pos(ctx.arg(b)));
                }
            }
            ctx.cnf.push(clause);
        }
    }
    for (a, b) in ctx.raf.af.attacks().collect::<Vec<_>>() {
        let mut c = vec![Lit::neg(ctx.arg(a))];
        if a != b {
            c.push(Lit::neg(ctx.arg(b)));
        }
        ctx.cnf.push(c);
    }
    for a in 0..ctx.raf.af.len() {
        let name = ctx.arg(a);
        let last = ctx.ntd.last(&name).expect("validated decomposition covers every argument");
        let d = ctx.defeated[last][&a].clone();
        ctx.cnf.push(vec![Lit::pos(&name), Lit::pos(d)]);
    }
}

fn finish(ctx: Ctx, fragment: Fragment, k: usize, blocks: Vec<Block>) -> Encoding {
    let matrix = Matrix { cnf: ctx.cnf.clone(), dnf: if ctx.dnf.is_empty() && fragment_has_dnf(fragment) { Some(Vec::new()) } else if ctx.dnf.is_empty() { None } else { Some(ctx.dnf.clone()) } };
    let mut structured = ctx.induced();
    let used = matrix.vars();
    for b in &mut structured.bags {
        b.retain(|v| used.contains(v));
    }
    let g = primal_matrix(&matrix);
    let induced = [Heuristic::MinFill, Heuristic::MinDegree]
        .into_iter()
        .map(|h| heuristic_td_with(&g, h))
        .fold(structured.clone(), |best, td| if td.width() < best.width() { td } else { best });
    Encoding { fragment, qbf: Qbf::new(blocks, matrix), origin: ctx.origin, source: ctx.ntd, source_width: k, structured, induced }
}

fn fragment_has_dnf(f: Fragment) -> bool {
    matches!(f, Fragment::Prop | Fragment::Tight | Fragment::Disj)
}

fn family(ctx: &Ctx, pred: impl Fn(&Origin) -> bool) -> Vec<String> {
    ctx.origin.iter().filter(|(_, o)| pred(o)).map(|(v, _)| v.clone()).collect()
}

fn in_node_order(ctx: &Ctx, vars: Vec<String>) -> Vec<String> {
    // stable numbering: by node post-order position, then name
    let pos: BTreeMap<usize, usize> = ctx.nodes().into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    let node_of = |o: &Origin| match o {
        Origin::Defeated { node, .. }
        | Origin::Witness { node }
        | Origin::ConditionWitness { node, .. }
        | Origin::Justified { node, .. }
        | Origin::RuleJustified { node, .. }
        | Origin::Subset { node }
        | Origin::SubsetAtom { node, .. } => pos[node],
        _ => 0,
    };
    let mut v = vars;
    v.sort_by_key(|x| (node_of(&ctx.origin[x]), x.clone()));
    v
}

fn args_block(ctx: &Ctx) -> Vec<String> {
    let mut v = ctx.raf.af.names().to_vec();
    v.extend(in_node_order(ctx, family(ctx, |o| matches!(o, Origin::Defeated { .. }))));
    v
}

/// ∃A, D. φ_stab: satisfiable iff the framework has a stable extension.
pub fn encode_stab(af: &Af, td: &TreeDecomposition) -> Result<Encoding> {
    let raf = Raf::new(af.clone(), Mode::Classical);
    let (mut ctx, k) = setup(&raf, td, None)?;
    stab_part(&mut ctx);
    let blocks = vec![Block { quant: Quant::Exists, vars: args_block(&ctx) }];
    Ok(finish(ctx, Fragment::Stab, k, blocks))
}

fn wrong(expected: &str, raf: &Raf) -> Error {
    Error::WrongClass { expected: expected.into(), found: raf.classify().to_string() }
}

fn clause_lits(c: &Condition) -> Vec<Lit> {
    match c {
        Condition::Formula(Formula::False) => Vec::new(),
        Condition::Formula(f) => f.as_clause().expect("conditions were clausified"),
        Condition::Rule(_) => unreachable!("classical condition expected"),
    }
}

fn rule_of(c: &Condition) -> &Rule {
    match c {
        Condition::Rule(r) => r,
        Condition::Formula(_) => unreachable!("program condition expected"),
    }
}

/// Conditions rewritten as clauses; formulas without a small CNF are
/// defined through auxiliaries when allowed. Auxiliaries join every bag
/// holding all variables of their formula.
fn clausify(raf: &Raf, td: &TreeDecomposition, allow_aux: bool) -> Result<(Raf, TreeDecomposition, Vec<(String, Formula)>)> {
    let mut out = Raf::new(raf.af.clone(), Mode::Classical);
    let mut td = td.clone();
    let mut taken: BTreeSet<String> = raf.af.names().iter().cloned().collect();
    taken.extend(raf.rc_vars());
    let mut cache: BTreeMap<Formula, Vec<Vec<Lit>>> = BTreeMap::new();
    let mut aux = Vec::new();
    let mut next = 0usize;
    for a in 0..raf.af.len() {
        for c in raf.conditions(a) {
            let Condition::Formula(f) = c else { return Err(wrong("classical", raf)) };
            if !cache.contains_key(f) {
                let clauses = match to_cnf(f, CNF_LIMIT) {
                    Some(cs) => cs,
                    None if allow_aux => {
                        let ts = loop {
                            let ts = tseitin_with(f, &format!("__t{next}_"));
                            next += 1;
                            if ts.aux.iter().all(|(v, _)| !taken.contains(v)) {
                                break ts;
                            }
                        };
                        let vars = f.vars();
                        let new: Vec<String> = ts.aux.iter().map(|(v, _)| v.clone()).collect();
                        for bag in &mut td.bags {
                            if vars.is_subset(bag) {
                                bag.extend(new.iter().cloned());
                            }
                        }
                        taken.extend(new);
                        aux.extend(ts.aux.iter().cloned());
                        let mut cs = ts.clauses.clone();
                        cs.push(vec![ts.output.clone()]);
                        cs
                    }
                    None => return Err(Error::Unsupported("condition has no small CNF".into())),
                };
                cache.insert(f.clone(), clauses);
            }
            for cl in &cache[f] {
                out.add_condition(a, Condition::Formula(Formula::clause(cl)))?;
            }
        }
    }
    Ok((out, td, aux))
}

fn mark_rc_vars(ctx: &mut Ctx, aux: &[(String, Formula)]) -> Vec<String> {
    let defs: BTreeMap<&String, &Formula> = aux.iter().map(|(v, f)| (v, f)).collect();
    let mut b = Vec::new();
    for v in ctx.raf.rc_vars() {
        if ctx.is_arg(&v) {
            continue;
        }
        let o = match defs.get(&v) {
            Some(f) => Origin::Auxiliary { name: v.clone(), defines: render_formula(f) },
            None => Origin::RcVar { name: v.clone() },
        };
        ctx.origin.insert(v.clone(), o);
        b.push(v);
    }
    b
}

/// ∃A, D, W. φ_stab ∧ φ_simple: a stable extension with some condition of a
/// member false.
pub fn encode_stab_simple(raf: &Raf, td: &TreeDecomposition) -> Result<Encoding> {
    if raf.mode != Mode::Classical || raf.classify() != RcClass::Simple {
        return Err(wrong("simple", raf));
    }
    let pre = clausify(raf, td, false)?;
    let (mut ctx, k) = setup(raf, td, Some((pre.0, pre.1)))?;
    stab_part(&mut ctx);
    let nodes = ctx.nodes();
    let mut w = vec![String::new(); ctx.ntd.td.len()];
    for &t in &nodes {
        w[t] = ctx.var(&format!("w{t}"), Origin::Witness { node: t });
        let wt = w[t].clone();
        ctx.touch(t, &wt);
    }
    let mut witnesses = Vec::new();
    for &t in &nodes {
        let mut c4 = vec![Lit::neg(&w[t])];
        for c in ctx.ntd.td.children[t].clone() {
            c4.push(Lit::pos(&w[c]));
            let wc = w[c].clone();
            ctx.touch(t, &wc);
        }
        for (i, c) in ctx.ntd.owned[t].clone().iter().enumerate() {
            let wc = ctx.var(&format!("w{t}_c{i}"), Origin::ConditionWitness { node: t, condition: describe(c) });
            ctx.touch(t, &wc);
            witnesses.push(wc.clone());
            c4.push(Lit::pos(&wc));
            for l in clause_lits(c) {
                ctx.cnf.push(vec![Lit::neg(&wc), l.negate()]);
            }
            let mut c7 = vec![Lit::neg(&wc)];
            c7.extend(ctx.hosts(t, c).iter().map(Lit::pos));
            ctx.cnf.push(c7);
        }
        ctx.cnf.push(c4);
    }
    let root = ctx.ntd.td.root;
    ctx.cnf.push(vec![Lit::pos(&w[root])]);
    let mut vars = args_block(&ctx);
    vars.extend(in_node_order(&ctx, family(&ctx, |o| matches!(o, Origin::Witness { .. } | Origin::ConditionWitness { .. }))));
    Ok(finish(ctx, Fragment::Simple, k, vec![Block { quant: Quant::Exists, vars }]))
}

fn push_term(ctx: &mut Ctx, seen: &mut BTreeSet<Term>, mut t: Term) {
    t.sort();
    t.dedup();
    if seen.insert(t.clone()) {
        ctx.dnf.push(t);
    }
}

/// Terms true when a hosted condition is violated: a ∧ ¬c.
fn violation_terms(ctx: &mut Ctx, seen: &mut BTreeSet<Term>) {
    for t in ctx.nodes() {
        for c in ctx.ntd.owned[t].clone() {
            let body: Vec<Lit> = match &c {
                Condition::Formula(_) => clause_lits(&c).iter().map(Lit::negate).collect(),
                Condition::Rule(r) => r
                    .pos
                    .iter()
                    .map(Lit::pos)
                    .chain(r.neg.iter().map(Lit::neg))
                    .chain(r.head.iter().map(Lit::neg))
                    .collect(),
            };
            for a in ctx.hosts(t, &c) {
                let mut term = vec![Lit::pos(a)];
                term.extend(body.iter().cloned());
                push_term(ctx, seen, term);
            }
        }
    }
}

/// ∃A, D. ∀B. φ_stab ∧ φ_prop.
pub fn encode_stab_prop(raf: &Raf, td: &TreeDecomposition) -> Result<Encoding> {
    if raf.mode != Mode::Classical {
        return Err(wrong("propositional", raf));
    }
    let (r2, td2, aux) = clausify(raf, td, true)?;
    let (mut ctx, k) = setup(raf, td, Some((r2, td2)))?;
    let b = mark_rc_vars(&mut ctx, &aux);
    stab_part(&mut ctx);
    let mut seen = BTreeSet::new();
    violation_terms(&mut ctx, &mut seen);
    let blocks = vec![Block { quant: Quant::Exists, vars: args_block(&ctx) }, Block { quant: Quant::Forall, vars: b }];
    Ok(finish(ctx, Fragment::Prop, k, blocks))
}

/// Replaces every disjunctive rule by one normal rule per head atom, with
/// the other head atoms moved to the negative body.
pub fn shift(raf: &Raf) -> Result<Raf> {
    let mut out = Raf::new(raf.af.clone(), raf.mode);
    for a in 0..raf.af.len() {
        for c in raf.conditions(a) {
            let r = rule_of(c);
            if r.head.len() < 2 {
                out.add_condition(a, c.clone())?;
                continue;
            }
            for h in &r.head {
                let mut s = r.clone();
                s.head = [h.clone()].into_iter().collect();
                s.neg.extend(r.head.iter().filter(|x| *x != h).cloned());
                out.add_condition(a, Condition::Rule(s))?;
            }
        }
    }
    Ok(out)
}

/// ∃A, D. ∀B, J. φ_stab ∧ (φ_prop ∨ φ_tight): some atom of every model is
/// unsupported, which characterizes inconsistency for tight programs.
pub fn encode_stab_tight(raf: &Raf, td: &TreeDecomposition) -> Result<Encoding> {
    if raf.mode != Mode::Asp {
        return Err(wrong("tight", raf));
    }
    if raf.classify() != RcClass::Tight {
        return Err(Error::NotTight);
    }
    let shifted = shift(raf)?;
    let (mut ctx, k) = setup(raf, td, Some((shifted, td.clone())))?;
    let b = mark_rc_vars(&mut ctx, &[]);
    stab_part(&mut ctx);
    let mut seen = BTreeSet::new();
    violation_terms(&mut ctx, &mut seen);
    let nodes = ctx.nodes();
    let n = ctx.ntd.td.len();
    let mut jx: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); n];
    let mut jc: Vec<Vec<String>> = vec![Vec::new(); n];
    for &t in &nodes {
        let atoms: Vec<String> = ctx.ntd.td.bags[t].iter().filter(|v| !ctx.is_arg(v)).cloned().collect();
        for x in atoms {
            let v = ctx.var(&format!("j{t}_{x}"), Origin::Justified { atom: x.clone(), node: t });
            ctx.touch(t, &v);
            jx[t].insert(x, v);
        }
        for (i, c) in ctx.ntd.owned[t].clone().iter().enumerate() {
            let v = ctx.var(&format!("j{t}_c{i}"), Origin::RuleJustified { node: t, condition: describe(c) });
            ctx.touch(t, &v);
            jc[t].push(v);
        }
    }
    for &t in &nodes {
        let owned = ctx.ntd.owned[t].clone();
        for (x, v) in jx[t].clone() {
            let mut term = vec![Lit::pos(&v)];
            for c in ctx.ntd.td.children[t].clone() {
                if let Some(u) = jx[c].get(&x).cloned() {
                    term.push(Lit::neg(&u));
                    ctx.touch(t, &u);
                }
            }
            for (i, c) in owned.iter().enumerate() {
                if rule_of(c).head.contains(&x) {
                    term.push(Lit::neg(&jc[t][i]));
                }
            }
            push_term(&mut ctx, &mut seen, term);
        }
        for (i, c) in owned.iter().enumerate() {
            let r = rule_of(c);
            let j = &jc[t][i];
            for y in &r.neg {
                push_term(&mut ctx, &mut seen, vec![Lit::pos(j), Lit::pos(y)]);
            }
            for y in &r.pos {
                push_term(&mut ctx, &mut seen, vec![Lit::pos(j), Lit::neg(y)]);
            }
            let mut term = vec![Lit::pos(j)];
            term.extend(ctx.hosts(t, c).iter().map(Lit::neg));
            push_term(&mut ctx, &mut seen, term);
        }
    }
    for x in &b {
        let last = ctx.ntd.last(x).expect("validated decomposition covers every atom");
        push_term(&mut ctx, &mut seen, vec![Lit::pos(x), Lit::neg(&jx[last][x])]);
    }
    let mut inner = b;
    inner.extend(in_node_order(&ctx, family(&ctx, |o| matches!(o, Origin::Justified { .. } | Origin::RuleJustified { .. }))));
    let blocks = vec![Block { quant: Quant::Exists, vars: args_block(&ctx) }, Block { quant: Quant::Forall, vars: inner }];
    Ok(finish(ctx, Fragment::Tight, k, blocks))
}

/// ∃A, D. ∀B. ∃B′, S, r. (φ_stab ∧ φ_red ∧ φ_subs) ∧ (φ_prop ∨ r): every
/// model of the program has a strictly smaller model of its reduct.
pub fn encode_stab_disj(raf: &Raf, td: &TreeDecomposition) -> Result<Encoding> {
    if raf.mode != Mode::Asp {
        return Err(wrong("program", raf));
    }
    let (mut ctx, k) = setup(raf, td, None)?;
    let b = mark_rc_vars(&mut ctx, &[]);
    stab_part(&mut ctx);
    let mut seen = BTreeSet::new();
    violation_terms(&mut ctx, &mut seen);
    let nodes = ctx.nodes();
    let mut prime: BTreeMap<String, String> = BTreeMap::new();
    for x in &b {
        let v = ctx.var(&format!("{x}__p"), Origin::ReductCopy { atom: x.clone() });
        prime.insert(x.clone(), v);
    }
    let r = ctx.var("r", Origin::Reduct);
    for &t in &nodes {
        ctx.touch(t, &r);
        for v in ctx.ntd.td.bags[t].clone() {
            if let Some(p) = prime.get(&v).cloned() {
                ctx.touch(t, &p);
            }
        }
    }
    let pr = |v: &String| prime.get(v).cloned().unwrap_or_else(|| v.clone());
    for &t in &nodes {
        for c in ctx.ntd.owned[t].clone() {
            let rule = rule_of(&c);
            for a in ctx.hosts(t, &c) {
                let mut cl = vec![Lit::neg(&r), Lit::neg(a)];
                cl.extend(rule.head.iter().map(|h| Lit::pos(pr(h))));
                cl.extend(rule.pos.iter().map(|y| Lit::neg(pr(y))));
                cl.extend(rule.neg.iter().map(Lit::pos));
                ctx.cnf.push(cl);
            }
        }
    }
    for x in &b {
        ctx.cnf.push(vec![Lit::neg(&r), Lit::neg(&prime[x]), Lit::pos(x)]);
    }
    let n = ctx.ntd.td.len();
    let mut s = vec![String::new(); n];
    for &t in &nodes {
        s[t] = ctx.var(&format!("s{t}"), Origin::Subset { node: t });
        let st = s[t].clone();
        ctx.touch(t, &st);
    }
    for &t in &nodes {
        let mut c15 = vec![Lit::neg(&r), Lit::neg(&s[t])];
        for c in ctx.ntd.td.children[t].clone() {
            c15.push(Lit::pos(&s[c]));
            let sc = s[c].clone();
            ctx.touch(t, &sc);
        }
        let atoms: Vec<String> = ctx.ntd.td.bags[t].iter().filter(|v| prime.contains_key(*v)).cloned().collect();
        for x in atoms {
            let v = ctx.var(&format!("s{t}_{x}"), Origin::SubsetAtom { atom: x.clone(), node: t });
            ctx.touch(t, &v);
            c15.push(Lit::pos(&v));
            ctx.cnf.push(vec![Lit::neg(&v), Lit::pos(&x)]);
            ctx.cnf.push(vec![Lit::neg(&v), Lit::neg(&prime[&x])]);
        }
        ctx.cnf.push(c15);
    }
    let root = ctx.ntd.td.root;
    ctx.cnf.push(vec![Lit::pos(&s[root])]);
    push_term(&mut ctx, &mut seen, vec![Lit::pos(&r)]);
    let mut inner: Vec<String> = b.iter().map(|x| prime[x].clone()).collect();
    inner.extend(in_node_order(&ctx, family(&ctx, |o| matches!(o, Origin::Subset { .. } | Origin::SubsetAtom { .. }))));
    inner.push(r);
    let blocks = vec![
        Block { quant: Quant::Exists, vars: args_block(&ctx) },
        Block { quant: Quant::Forall, vars: b },
        Block { quant: Quant::Exists, vars: inner },
    ];
    Ok(finish(ctx, Fragment::Disj, k, blocks))
}

/// Encodes with the given fragment. For `Stab` the conditions are ignored
/// and the decomposition is restricted to the arguments.
pub fn encode(raf: &Raf, td: &TreeDecomposition, fragment: Fragment) -> Result<Encoding> {
    match fragment {
        Fragment::Stab => {
            validate_td(&primal_raf(raf), td)?;
            let mut t = td.clone();
            for bag in &mut t.bags {
                bag.retain(|v| raf.af.contains(v));
            }
            encode_stab(&raf.af, &t)
        }
        Fragment::Simple => encode_stab_simple(raf, td),
        Fragment::Prop => encode_stab_prop(raf, td),
        Fragment::Tight => encode_stab_tight(raf, td),
        Fragment::Disj => encode_stab_disj(raf, td),
    }
}

/// Bags of a decomposition as sorted name lists, for reports.
pub fn bag_sizes(td: &TreeDecomposition) -> Vec<usize> {
    td.bags.iter().map(Bag::len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Semantics;
    use crate::parse::{parse_af, parse_raf};
    use crate::qbf::evaluate_qbf;
    use crate::raf::{cons_with, Maximality};
    use crate::random::{self, RafShape};
    use crate::td::{heuristic_td, primal_af, primal_matrix, read_pace};
    use crate::Config;

    const CAP: usize = 400;

    fn solve(e: &Encoding) -> bool {
        evaluate_qbf(&e.qbf, CAP).unwrap()
    }

    fn auto_td(raf: &Raf) -> TreeDecomposition {
        heuristic_td(&primal_raf(raf))
    }

    fn check_induced(e: &Encoding) {
        let g = primal_matrix(&e.qbf.matrix);
        validate_td(&g, &e.induced).expect("induced decomposition is valid");
        validate_td(&g, &e.structured).expect("structured decomposition is valid");
    }

    fn fixed(e: &Encoding, names: &[String], mask: u64) -> Qbf {
        let mut q = e.qbf.clone();
        for (i, n) in names.iter().enumerate() {
            let l = if mask >> i & 1 == 1 { Lit::pos(n) } else { Lit::neg(n) };
            q.matrix.cnf.push(vec![l]);
        }
        q
    }

    #[test]
    fn fig1_has_exactly_one_stable_projection() {
        let af = parse_af(include_str!("../../../instances/fig1.af")).unwrap();
        let td = heuristic_td(&primal_af(&af));
        let e = encode_stab(&af, &td).unwrap();
        check_induced(&e);
        assert!(solve(&e));
        let names = af.names().to_vec();
        let models: Vec<Vec<&String>> = (0..1u64 << names.len())
            .filter(|&m| evaluate_qbf(&fixed(&e, &names, m), CAP).unwrap())
            .map(|m| names.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, n)| n).collect())
            .collect();
        assert_eq!(models, vec![vec!["T", "P", "W"]]);
    }

    #[test]
    fn frameworks_without_stable_extensions_are_unsatisfiable() {
        let af = parse_af(include_str!("../../../instances/fig3.af")).unwrap();
        assert!(!solve(&encode_stab(&af, &heuristic_td(&primal_af(&af))).unwrap()));
        let af = parse_af("arg(a). att(a,a).").unwrap();
        assert!(!solve(&encode_stab(&af, &heuristic_td(&primal_af(&af))).unwrap()));
    }

    #[test]
    fn fig2_with_given_decomposition() {
        let raf = parse_raf(include_str!("../../../instances/fig2.raf")).unwrap();
        let g = primal_raf(&raf);
        let td = read_pace(include_str!("../../../instances/fig2.td"), Some(&g)).unwrap();
        let e = encode(&raf, &td, Fragment::Prop).unwrap();
        check_induced(&e);
        assert_eq!(e.source_width, 3);
        assert_eq!(solve(&e), cons_with(&raf, Semantics::Stab, &Config::default(), Maximality::BaseAf).unwrap());
        assert!(solve(&e));
        let mut trivial = Raf::new(raf.af.clone(), Mode::Classical);
        for a in 0..raf.af.len() {
            trivial.add_condition(a, Condition::Formula(Formula::True)).unwrap();
        }
        let e = encode(&trivial, &auto_td(&trivial), Fragment::Prop).unwrap();
        assert!(!solve(&e));
    }

    #[test]
    fn provenance_covers_prefix() {
        let raf = parse_raf(include_str!("../../../instances/fig2.raf")).unwrap();
        let e = encode(&raf, &auto_td(&raf), Fragment::Prop).unwrap();
        for v in e.qbf.prefix_vars() {
            assert!(e.origin.contains_key(v), "{v} lacks provenance");
        }
        let j = e.provenance_json();
        assert_eq!(j["W"]["family"], "argument");
        assert_eq!(j["p_dl"]["family"], "rc_var");
    }

    #[test]
    fn class_mismatches_are_reported() {
        let raf = parse_raf(include_str!("../../../instances/fig2.raf")).unwrap();
        let td = auto_td(&raf);
        assert!(matches!(encode(&raf, &td, Fragment::Simple), Err(Error::WrongClass { .. })));
        assert!(matches!(encode(&raf, &td, Fragment::Tight), Err(Error::WrongClass { .. })));
        let prog = parse_raf("#mode asp.\narg(a).\nrc(a): p :- q.\nrc(a): q :- p.").unwrap();
        assert!(matches!(encode(&prog, &auto_td(&prog), Fragment::Tight), Err(Error::NotTight)));
        let bad = TreeDecomposition::single(["W".to_string()].into_iter().collect());
        assert!(matches!(encode(&raf, &bad, Fragment::Prop), Err(Error::InvalidTd(_))));
    }

    fn differential(class: RcClass, fragment: Fragment, seeds: std::ops::Range<u64>, aux: usize) {
        let cfg = Config::default();
        let mut seen = [0usize; 2];
        for seed in seeds {
            let mut r = random::rng(seed);
            let mut shape = RafShape::new(class, 2 + (seed % 4) as usize, aux);
            shape.clausal = class == RcClass::Simple;
            let raf = random::raf(&mut r, shape);
            if raf.classify() != class && !(class == RcClass::Propositional && raf.classify() == RcClass::Simple) {
                continue;
            }
            let want = cons_with(&raf, Semantics::Stab, &cfg, Maximality::BaseAf).unwrap();
            let e = encode(&raf, &auto_td(&raf), fragment).unwrap();
            check_induced(&e);
            assert_eq!(solve(&e), want, "seed {seed}\n{}", crate::parse::render_raf(&raf));
            seen[want as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0, "both answers occur: {seen:?}");
    }

    #[test]
    fn simple_matches_semantics() {
        differential(RcClass::Simple, Fragment::Simple, 0..60, 0);
    }

    #[test]
    fn prop_matches_semantics() {
        differential(RcClass::Propositional, Fragment::Prop, 0..60, 2);
    }

    #[test]
    fn tight_matches_semantics() {
        differential(RcClass::Tight, Fragment::Tight, 0..60, 2);
    }

    #[test]
    fn disj_matches_semantics() {
        differential(RcClass::Disjunctive, Fragment::Disj, 0..60, 2);
        differential(RcClass::Tight, Fragment::Disj, 100..140, 2);
    }

    #[test]
    fn stab_fragment_ignores_conditions() {
        let raf = parse_raf(include_str!("../../../instances/fig2.raf")).unwrap();
        let e = encode(&raf, &auto_td(&raf), Fragment::Stab).unwrap();
        assert!(e.qbf.prefix_vars().all(|v| !v.starts_with("p_")));
        assert!(solve(&e));
    }
}
