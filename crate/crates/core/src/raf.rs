//! Extensions of rejection-augmented frameworks.
//!
//! A set E is a σ-extension when it is a σ-extension of the underlying
//! framework and the rejection instance
//! C(E) ∪ E ∪ {⊥ ← a | a ∉ E} is inconsistent. The empty set is never an
//! extension since its rejection instance is always consistent.

use crate::af::{self, Extension, Masks};
use crate::error::{Error, Result};
use crate::logic::{classical_consistent, Assignment, Program};
use crate::model::{ArgSet, Condition, Formula, Mode, Raf, Rule, Semantics};
use crate::par;
use crate::Config;

/// Where maximality of pref, semiSt and stag is judged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Maximality {
    /// Among sets of the underlying framework (the defining reading).
    #[default]
    BaseAf,
    /// Among the framework's own adm (pref, semiSt) or conf (stag) extensions.
    Rejected,
}

/// The object whose consistency decides rejection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectionInstance {
    /// C(E) with the arguments fixed: members true, the rest false.
    Classical { formulas: Vec<Formula>, fixed: Assignment },
    /// C(E) ∪ {e.} ∪ {⊥ ← a}.
    Asp { program: Program },
}

impl RejectionInstance {
    pub fn is_consistent(&self, cfg: &Config) -> Result<bool> {
        match self {
            RejectionInstance::Classical { formulas, fixed } => {
                classical_consistent(formulas, fixed, cfg.caps.atoms)
            }
            RejectionInstance::Asp { program } => program.is_consistent(cfg.caps.atoms),
        }
    }
}

pub fn rejection_instance(raf: &Raf, e: ArgSet) -> RejectionInstance {
    let conds = raf.conditions_of(e);
    match raf.mode {
        Mode::Classical => RejectionInstance::Classical {
            formulas: conds
                .into_iter()
                .filter_map(|c| match c {
                    Condition::Formula(f) => Some(f.clone()),
                    Condition::Rule(_) => None,
                })
                .collect(),
            fixed: raf.af.names().iter().enumerate().map(|(i, n)| (n.clone(), e.contains(i))).collect(),
        },
        Mode::Asp => {
            let mut rules: Vec<Rule> = conds
                .into_iter()
                .filter_map(|c| match c {
                    Condition::Rule(r) => Some(r.clone()),
                    Condition::Formula(_) => None,
                })
                .collect();
            for (i, n) in raf.af.names().iter().enumerate() {
                rules.push(if e.contains(i) { Rule::fact(n.clone()) } else { Rule::deny(n.clone()) });
            }
            RejectionInstance::Asp { program: Program::new(rules) }
        }
    }
}

/// Whether the rejection instance of E is inconsistent.
pub fn is_rejected(raf: &Raf, e: ArgSet, cfg: &Config) -> Result<bool> {
    if e.is_empty() {
        return Ok(false);
    }
    Ok(!rejection_instance(raf, e).is_consistent(cfg)?)
}

pub fn is_extension(raf: &Raf, e: ArgSet, sigma: Semantics) -> Result<bool> {
    is_extension_with(raf, e, sigma, &Config::default(), Maximality::BaseAf)
}

pub fn is_extension_with(raf: &Raf, e: ArgSet, sigma: Semantics, cfg: &Config, max: Maximality) -> Result<bool> {
    if e.is_empty() {
        return Ok(false);
    }
    match (max, sigma) {
        (Maximality::Rejected, Semantics::Pref | Semantics::SemiSt | Semantics::Stag) => {
            Ok(extension_masks(raf, sigma, cfg, max)?.contains(&e.0))
        }
        _ => Ok(af::satisfies_with(&raf.af, e, sigma, cfg)? && is_rejected(raf, e, cfg)?),
    }
}

fn rejected_subset(raf: &Raf, cands: &[u64], cfg: &Config) -> Result<Vec<u64>> {
    let verdicts = par::map_slice(cfg.exec, cands, |&s| is_rejected(raf, ArgSet(s), cfg));
    let mut out = Vec::new();
    for (s, v) in cands.iter().zip(verdicts) {
        if v? {
            out.push(*s);
        }
    }
    Ok(out)
}

/// Extensions as masks in ascending order.
pub fn extension_masks(raf: &Raf, sigma: Semantics, cfg: &Config, max: Maximality) -> Result<Vec<u64>> {
    let base_sigma = match (max, sigma) {
        (Maximality::Rejected, Semantics::Pref | Semantics::SemiSt) => Semantics::Adm,
        (Maximality::Rejected, Semantics::Stag) => Semantics::Conf,
        _ => sigma,
    };
    let mut cands = af::extension_masks(&raf.af, base_sigma, cfg)?;
    cands.retain(|&s| s != 0);
    let kept = rejected_subset(raf, &cands, cfg)?;
    if base_sigma == sigma {
        return Ok(kept);
    }
    let m = Masks::new(&raf.af);
    Ok(match sigma {
        Semantics::Pref => af::maximal_by(&kept, |s| s),
        _ => af::maximal_by(&kept, |s| m.range(s)),
    })
}

pub fn enumerate_extensions(raf: &Raf, sigma: Semantics) -> Result<Vec<Extension>> {
    enumerate_extensions_with(raf, sigma, &Config::default(), Maximality::BaseAf)
}

/// All extensions, by cardinality then by sorted member names.
pub fn enumerate_extensions_with(raf: &Raf, sigma: Semantics, cfg: &Config, max: Maximality) -> Result<Vec<Extension>> {
    let m = Masks::new(&raf.af);
    let mut out: Vec<Extension> = extension_masks(raf, sigma, cfg, max)?
        .into_iter()
        .map(|s| Extension { members: ArgSet(s), range: ArgSet(m.range(s)) })
        .collect();
    af::sort_extensions(&raf.af, &mut out);
    Ok(out)
}

pub fn cons(raf: &Raf, sigma: Semantics) -> Result<bool> {
    cons_with(raf, sigma, &Config::default(), Maximality::BaseAf)
}

/// Whether an extension exists. Stops at the first witness for the
/// semantics without a maximality condition.
pub fn cons_with(raf: &Raf, sigma: Semantics, cfg: &Config, max: Maximality) -> Result<bool> {
    match sigma {
        Semantics::Pref | Semantics::SemiSt | Semantics::Stag => {
            Ok(!extension_masks(raf, sigma, cfg, max)?.is_empty())
        }
        _ => first_rejected(raf, sigma, cfg).map(|w| w.is_some()),
    }
}

fn first_rejected(raf: &Raf, sigma: Semantics, cfg: &Config) -> Result<Option<u64>> {
    let mut cands = af::extension_masks(&raf.af, sigma, cfg)?;
    cands.retain(|&s| s != 0);
    if !cfg.exec.is_parallel() {
        for &s in &cands {
            if is_rejected(raf, ArgSet(s), cfg)? {
                return Ok(Some(s));
            }
        }
        return Ok(None);
    }
    Ok(rejected_subset(raf, &cands, cfg)?.into_iter().next())
}

/// Existence via a guessed adm (semiSt) or conf (stag) set that is
/// rejected, skipping maximality. It coincides with `cons_with` under
/// [`Maximality::Rejected`]; under the base-framework reading it may
/// answer yes where no extension exists.
pub fn cons_shortcut(raf: &Raf, sigma: Semantics, cfg: &Config) -> Result<bool> {
    let guess = match sigma {
        Semantics::SemiSt | Semantics::Pref => Semantics::Adm,
        Semantics::Stag => Semantics::Conf,
        other => other,
    };
    Ok(first_rejected(raf, guess, cfg)?.is_some())
}

pub fn cred(raf: &Raf, sigma: Semantics, arg: &str) -> Result<bool> {
    cred_with(raf, sigma, arg, &Config::default(), Maximality::BaseAf)
}

/// Whether `arg` belongs to some extension.
pub fn cred_with(raf: &Raf, sigma: Semantics, arg: &str, cfg: &Config, max: Maximality) -> Result<bool> {
    let c = raf.af.index_of(arg).ok_or_else(|| Error::UnknownArgument(arg.into()))?;
    let bit = 1u64 << c;
    match sigma {
        Semantics::Pref | Semantics::SemiSt | Semantics::Stag => {
            Ok(extension_masks(raf, sigma, cfg, max)?.iter().any(|s| s & bit != 0))
        }
        _ => {
            let mut cands = af::extension_masks(&raf.af, sigma, cfg)?;
            cands.retain(|&s| s & bit != 0);
            for s in cands {
                if is_rejected(raf, ArgSet(s), cfg)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_raf;

    const FIG2: &str = include_str!("../../../instances/fig2.raf");
    const FIG4: &str = include_str!("../../../instances/fig4.raf");

    fn names(raf: &Raf, exts: &[Extension]) -> Vec<Vec<String>> {
        exts.iter().map(|e| af::set_key(&raf.af, e.members).1).collect()
    }

    #[test]
    fn research_example_instance() {
        let raf = parse_raf(FIG2).unwrap();
        let e = raf.af.set_of(&["Re", "W", "T", "P"]).unwrap();
        match rejection_instance(&raf, e) {
            RejectionInstance::Classical { formulas, fixed } => {
                // C(T) and C(P) are the same formula, so the union has three
                assert_eq!(formulas.len(), 3);
                assert_eq!(fixed["noS"], false);
                assert_eq!(fixed["Te"], false);
                assert!(fixed["Re"] && fixed["W"] && fixed["T"] && fixed["P"]);
            }
            other => panic!("{other:?}"),
        }
        assert!(is_extension(&raf, e, Semantics::Stab).unwrap());
        assert!(cons(&raf, Semantics::Stab).unwrap());
    }

    #[test]
    fn empty_set_is_never_an_extension() {
        let raf = parse_raf(FIG4).unwrap();
        for sigma in Semantics::ALL {
            assert!(!is_extension(&raf, ArgSet::EMPTY, sigma).unwrap());
        }
        assert!(rejection_instance(&raf, ArgSet::EMPTY).is_consistent(&Config::default()).unwrap());
    }

    #[test]
    fn non_monotone_example() {
        let raf = parse_raf(FIG4).unwrap();
        let d = raf.af.set_of(&["d"]).unwrap();
        let want = Program::new(
            ["d.", ":- a.", ":- b.", ":- c.", ":- not a, not b."].iter().map(|r| crate::parse::parse_rule(r).unwrap()),
        );
        match rejection_instance(&raf, d) {
            RejectionInstance::Asp { program } => {
                let mut got = program.rules().to_vec();
                let mut exp = want.rules().to_vec();
                got.sort();
                exp.sort();
                assert_eq!(got, exp);
            }
            other => panic!("{other:?}"),
        }
        let adm = enumerate_extensions(&raf, Semantics::Adm).unwrap();
        assert_eq!(names(&raf, &adm), vec![vec!["d"], vec!["a", "b"]]);
        assert!(!is_extension(&raf, raf.af.set_of(&["a", "d"]).unwrap(), Semantics::Adm).unwrap());
        assert!(cons(&raf, Semantics::Adm).unwrap());
        assert!(cred(&raf, Semantics::Adm, "a").unwrap());
        assert!(!cred(&raf, Semantics::Adm, "c").unwrap());
        assert!(matches!(cred(&raf, Semantics::Adm, "zz"), Err(Error::UnknownArgument(_))));
    }

    #[test]
    fn top_conditions_reject_nothing() {
        let raf = parse_raf("arg(a).").unwrap();
        for sigma in Semantics::ALL {
            assert!(!cons(&raf, sigma).unwrap());
        }
    }

    #[test]
    fn shortcut_overshoots_under_base_maximality() {
        // a <-> b, b -> c, c -> c; only {a} is rejected
        let raf = parse_raf(
            "arg(a). arg(b). arg(c). att(a,b). att(b,a). att(b,c). att(c,c).
             rc(a): false. rc(b): true.",
        )
        .unwrap();
        let cfg = Config::default();
        assert!(cons_shortcut(&raf, Semantics::SemiSt, &cfg).unwrap());
        assert!(!cons(&raf, Semantics::SemiSt).unwrap());
        assert!(cons_with(&raf, Semantics::SemiSt, &cfg, Maximality::Rejected).unwrap());
    }

    #[test]
    fn sequential_matches_parallel() {
        let raf = parse_raf(FIG2).unwrap();
        for sigma in Semantics::ALL {
            let a = enumerate_extensions_with(&raf, sigma, &Config::sequential(), Maximality::BaseAf).unwrap();
            let b = enumerate_extensions(&raf, sigma).unwrap();
            assert_eq!(a, b);
        }
    }
}
