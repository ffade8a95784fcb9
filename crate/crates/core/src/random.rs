//! Seeded random instances for property tests, benches and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Af, Caf, Formula, Lit, Mode, Raf, RcClass, Rule};
use crate::qbf::{Block, Matrix, Qbf, Quant};

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

fn arg_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("a{i}")).collect()
}

/// n arguments `a0…`, each ordered pair (self-loops included) attacking
/// with probability `p`.
pub fn af(r: &mut Rand, n: usize, p: f64) -> Af {
    let mut af = Af::new(arg_names(n.max(1))).expect("generated names are valid");
    for a in 0..af.len() {
        for b in 0..af.len() {
            let q = if a == b { p / 3.0 } else { p };
            if r.gen_bool(q) {
                af.add_attack_idx(a, b);
            }
        }
    }
    af
}

pub fn literal(r: &mut Rand, vars: &[String]) -> Lit {
    Lit::new(vars.choose(r).expect("non-empty variable list").clone(), r.gen_bool(0.5))
}

/// A clause over distinct variables.
pub fn clause(r: &mut Rand, vars: &[String], width: usize) -> Vec<Lit> {
    let k = width.min(vars.len()).max(1);
    vars.choose_multiple(r, k).map(|v| Lit::new(v.clone(), r.gen_bool(0.5))).collect()
}

/// A clause of random width in `1..=width`.
pub fn clause_upto(r: &mut Rand, vars: &[String], width: usize) -> Vec<Lit> {
    let w = r.gen_range(1..=width.max(1));
    clause(r, vars, w)
}

/// Random formula with all connectives, depth at most `depth`.
pub fn formula(r: &mut Rand, vars: &[String], depth: usize) -> Formula {
    if depth == 0 || vars.is_empty() || r.gen_bool(0.25) {
        if vars.is_empty() || r.gen_bool(0.05) {
            return if r.gen_bool(0.5) { Formula::True } else { Formula::False };
        }
        return literal(r, vars).to_formula();
    }
    let sub = |r: &mut Rand| formula(r, vars, depth - 1);
    match r.gen_range(0..5) {
        0 => Formula::not(sub(r)),
        1 => Formula::And((0..r.gen_range(2..=3)).map(|_| sub(r)).collect()),
        2 => Formula::Or((0..r.gen_range(2..=3)).map(|_| sub(r)).collect()),
        3 => Formula::implies(sub(r), sub(r)),
        _ => Formula::iff(sub(r), sub(r)),
    }
}

/// Shape of a random rejection-augmented framework.
#[derive(Clone, Copy, Debug)]
pub struct RafShape {
    pub args: usize,
    pub aux: usize,
    pub attack_p: f64,
    pub class: RcClass,
    /// Classical conditions are clauses rather than arbitrary formulas.
    pub clausal: bool,
    /// Expected number of conditions per argument.
    pub conds: f64,
}

impl RafShape {
    pub fn new(class: RcClass, args: usize, aux: usize) -> RafShape {
        RafShape { args, aux, attack_p: 0.25, class, clausal: false, conds: 1.2 }
    }
}

fn aux_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn rule(r: &mut Rand, atoms: &[String], class: RcClass) -> Rule {
    let mut rule = Rule::default();
    let heads = match class {
        RcClass::Disjunctive => r.gen_range(0..=2),
        _ => r.gen_range(0..=1),
    };
    let pick = |r: &mut Rand| atoms.choose(r).expect("atoms").clone();
    for _ in 0..heads {
        rule.head.insert(pick(r));
    }
    for _ in 0..r.gen_range(0..=2) {
        let a = pick(r);
        if r.gen_bool(0.5) {
            rule.pos.insert(a);
        } else {
            rule.neg.insert(a);
        }
    }
    if class == RcClass::Tight {
        // acyclic: head atoms come strictly after positive body atoms
        let pos_max = rule.pos.iter().map(|a| atoms.iter().position(|x| x == a).unwrap()).max();
        if let Some(m) = pos_max {
            rule.head.retain(|h| atoms.iter().position(|x| x == h).unwrap() > m);
        }
    }
    rule
}

pub fn raf(r: &mut Rand, shape: RafShape) -> Raf {
    let base = af(r, shape.args, shape.attack_p);
    let args: Vec<String> = base.names().to_vec();
    let aux = if shape.class == RcClass::Simple { Vec::new() } else { aux_names(shape.aux) };
    let mode = match shape.class {
        RcClass::Simple | RcClass::Propositional => Mode::Classical,
        _ => Mode::Asp,
    };
    let mut raf = Raf::new(base, mode);
    let mut vars: Vec<String> = args.clone();
    vars.extend(aux.iter().cloned());
    // program atoms: auxiliaries first so tight heads land on them
    let mut atoms = aux.clone();
    atoms.extend(args.iter().cloned());
    for i in 0..args.len() {
        let k = (shape.conds * 2.0 * r.gen::<f64>()).round() as usize;
        for _ in 0..k {
            let c = match mode {
                Mode::Classical if shape.clausal => {
                    let w = r.gen_range(1..=3);
                    crate::model::Condition::Formula(Formula::clause(&clause(r, &vars, w)))
                }
                Mode::Classical => crate::model::Condition::Formula(formula(r, &vars, 2)),
                Mode::Asp => crate::model::Condition::Rule(rule(r, &atoms, shape.class)),
            };
            raf.add_condition(i, c).expect("generated condition matches mode");
        }
    }
    raf
}

/// Random constrained framework with a formula over the arguments.
pub fn caf(r: &mut Rand, n: usize, depth: usize) -> Caf {
    let base = af(r, n, 0.25);
    let vars = base.names().to_vec();
    let phi = formula(r, &vars, depth);
    Caf::new(base, phi).expect("formula over arguments")
}

pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random CNF over `vars`.
pub fn cnf(r: &mut Rand, vars: &[String], clauses: usize, width: usize) -> Vec<Vec<Lit>> {
    (0..clauses).map(|_| clause_upto(r, vars, width)).collect()
}

/// A conjunction/disjunction of literals drawn so that it mentions at least
/// one variable from each listed group.
pub fn mixed(r: &mut Rand, groups: &[&[String]], width: usize) -> Vec<Lit> {
    let mut lits: Vec<Lit> = Vec::new();
    for g in groups {
        if !g.is_empty() {
            lits.push(literal(r, g));
        }
    }
    let all: Vec<String> = groups.iter().flat_map(|g| g.iter().cloned()).collect();
    while lits.len() < width && !all.is_empty() {
        let l = literal(r, &all);
        if !lits.iter().any(|m| m.atom == l.atom) {
            lits.push(l);
        } else if r.gen_bool(0.3) {
            break;
        }
    }
    lits.sort();
    lits.dedup_by(|a, b| a.atom == b.atom);
    lits
}

/// ∃X ∀Y. DNF where every term mentions X and Y.
pub fn qbf_exists_forall_dnf(r: &mut Rand, nx: usize, ny: usize, terms: usize, width: usize) -> Qbf {
    let x = var_names("x", nx);
    let y = var_names("y", ny);
    let dnf = (0..terms).map(|_| mixed(r, &[&x, &y], width)).collect();
    Qbf::new(vec![Block { quant: Quant::Exists, vars: x }, Block { quant: Quant::Forall, vars: y }], Matrix::dnf(dnf))
}

/// ∃X ∀Y ∃Z. CNF.
pub fn qbf_efe_cnf(r: &mut Rand, nx: usize, ny: usize, nz: usize, clauses: usize, width: usize) -> Qbf {
    let x = var_names("x", nx);
    let y = var_names("y", ny);
    let z = var_names("z", nz);
    let all: Vec<String> = x.iter().chain(&y).chain(&z).cloned().collect();
    let cnf = (0..clauses)
        .map(|_| if r.gen_bool(0.5) { mixed(r, &[&x, &z], width) } else { clause_upto(r, &all, width) })
        .collect();
    Qbf::new(
        vec![
            Block { quant: Quant::Exists, vars: x },
            Block { quant: Quant::Forall, vars: y },
            Block { quant: Quant::Exists, vars: z },
        ],
        Matrix::cnf(cnf),
    )
}

/// A prefix of alternating blocks over the given group sizes and a CNF or
/// DNF matrix over all of them.
pub fn qbf(r: &mut Rand, first: Quant, sizes: &[usize], parts: usize, width: usize, dnf: bool) -> Qbf {
    let letters = ["x", "y", "z", "w", "u", "v"];
    let mut blocks = Vec::new();
    let mut q = first;
    let mut all = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let vars = var_names(letters[i % letters.len()], n);
        all.extend(vars.iter().cloned());
        blocks.push(Block { quant: q, vars });
        q = q.flip();
    }
    let rows: Vec<Vec<Lit>> = (0..parts).map(|_| clause_upto(r, &all, width)).collect();
    let matrix = if dnf { Matrix::dnf(rows) } else { Matrix::cnf(rows) };
    Qbf::new(blocks, matrix)
}

/// A random mix of CNF and DNF parts, either possibly empty.
pub fn qbf_mixed(r: &mut Rand, first: Quant, sizes: &[usize], width: usize) -> Qbf {
    let parts = r.gen_range(0..=4);
    let mut q = qbf(r, first, sizes, parts, width, false);
    let all: Vec<String> = q.prefix_vars().cloned().collect();
    if !all.is_empty() && r.gen_bool(0.7) {
        let k = r.gen_range(0..=4);
        q.matrix.dnf = Some((0..k).map(|_| clause_upto(r, &all, width)).collect());
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let a = raf(&mut rng(7), RafShape::new(RcClass::Propositional, 6, 3));
        let b = raf(&mut rng(7), RafShape::new(RcClass::Propositional, 6, 3));
        assert_eq!(a, b);
    }

    #[test]
    fn classes_are_respected() {
        let mut r = rng(1);
        for _ in 0..200 {
            let g = raf(&mut r, RafShape::new(RcClass::Tight, 5, 3));
            assert_eq!(g.classify(), RcClass::Tight);
            let g = raf(&mut r, RafShape::new(RcClass::Simple, 5, 3));
            assert_eq!(g.classify(), RcClass::Simple);
            assert!(g.validate().is_ok());
        }
    }

    #[test]
    fn generated_qbfs_validate() {
        let mut r = rng(2);
        for _ in 0..50 {
            qbf_exists_forall_dnf(&mut r, 3, 2, 4, 3).validate().unwrap();
            qbf_efe_cnf(&mut r, 2, 2, 2, 5, 3).validate().unwrap();
            qbf_mixed(&mut r, Quant::Forall, &[2, 2, 2], 3).validate().unwrap();
        }
    }
}
