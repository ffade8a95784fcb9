//! Dung semantics by subset enumeration.

use crate::error::{Error, Result};
use crate::model::{Af, ArgSet, Semantics};
use crate::par;
use crate::Config;

/// An extension together with its range S⁺.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    pub members: ArgSet,
    pub range: ArgSet,
}

/// Attack relation as per-argument bit masks.
#[derive(Clone, Debug)]
pub struct Masks {
    pub n: usize,
    /// attackers[a] = {b | (b, a) ∈ R}
    pub attackers: Vec<u64>,
    /// targets[b] = {a | (b, a) ∈ R}
    pub targets: Vec<u64>,
}

impl Masks {
    pub fn new(af: &Af) -> Masks {
        let n = af.len();
        let mut attackers = vec![0u64; n];
        let mut targets = vec![0u64; n];
        for (b, a) in af.attacks() {
            attackers[a] |= 1 << b;
            targets[b] |= 1 << a;
        }
        Masks { n, attackers, targets }
    }

    pub fn all(&self) -> u64 {
        ArgSet::full(self.n).0
    }

    /// Everything attacked by `s`.
    pub fn attacked_by(&self, s: u64) -> u64 {
        ArgSet(s).iter().fold(0, |m, b| m | self.targets[b])
    }

    pub fn range(&self, s: u64) -> u64 {
        s | self.attacked_by(s)
    }

    pub fn conflict_free(&self, s: u64) -> bool {
        ArgSet(s).iter().all(|a| self.attackers[a] & s == 0)
    }

    /// def(S) = {a | every attacker of a is attacked by S}.
    pub fn defended(&self, s: u64) -> u64 {
        let hit = self.attacked_by(s);
        (0..self.n).filter(|&a| self.attackers[a] & !hit == 0).fold(0, |m, a| m | 1 << a)
    }

    pub fn admissible(&self, s: u64) -> bool {
        self.conflict_free(s) && s & !self.defended(s) == 0
    }

    pub fn complete(&self, s: u64) -> bool {
        self.conflict_free(s) && self.defended(s) == s
    }

    pub fn stable(&self, s: u64) -> bool {
        self.conflict_free(s) && self.range(s) == self.all()
    }

    /// Membership for the semantics that need no comparison with other sets.
    fn local(&self, s: u64, sigma: Semantics) -> bool {
        match sigma {
            Semantics::Conf | Semantics::Stag => self.conflict_free(s),
            Semantics::Adm | Semantics::Pref | Semantics::SemiSt => self.admissible(s),
            Semantics::Comp => self.complete(s),
            Semantics::Stab => self.stable(s),
        }
    }
}

fn check_cap(af: &Af, cfg: &Config) -> Result<()> {
    let cap = cfg.caps.arguments.min(63);
    if af.len() > cap {
        return Err(Error::CapExceeded { what: "arguments", size: af.len(), cap });
    }
    Ok(())
}

fn check_members(af: &Af, s: ArgSet) -> Result<()> {
    if !s.is_subset(ArgSet::full(af.len())) {
        let i = s.iter().find(|&i| i >= af.len()).unwrap();
        return Err(Error::UnknownArgument(format!("#{i}")));
    }
    Ok(())
}

/// S⁺_R.
pub fn range(af: &Af, s: ArgSet) -> ArgSet {
    ArgSet(Masks::new(af).range(s.0))
}

/// def_F(S).
pub fn defended_set(af: &Af, s: ArgSet) -> Result<ArgSet> {
    check_members(af, s)?;
    Ok(ArgSet(Masks::new(af).defended(s.0)))
}

pub fn satisfies(af: &Af, s: ArgSet, sigma: Semantics) -> Result<bool> {
    satisfies_with(af, s, sigma, &Config::default())
}

/// S ∈ ext_σ(F); maximality-based semantics compare against all subsets.
pub fn satisfies_with(af: &Af, s: ArgSet, sigma: Semantics, cfg: &Config) -> Result<bool> {
    check_cap(af, cfg)?;
    check_members(af, s)?;
    let m = Masks::new(af);
    let s = s.0;
    if !m.local(s, sigma) {
        return Ok(false);
    }
    let n = 1u64 << m.n;
    Ok(match sigma {
        Semantics::Pref => {
            // any admissible proper superset?
            let rest = m.all() & !s;
            !par::any_range(cfg.exec, n, |t| t != 0 && t & !rest == 0 && m.admissible(s | t))
        }
        Semantics::SemiSt | Semantics::Stag => {
            let r = m.range(s);
            !par::any_range(cfg.exec, n, |t| {
                let rt = m.range(t);
                r & !rt == 0 && rt != r && m.local(t, sigma)
            })
        }
        _ => true,
    })
}

pub fn enumerate(af: &Af, sigma: Semantics) -> Result<Vec<Extension>> {
    enumerate_with(af, sigma, &Config::default())
}

/// All σ-extensions, by cardinality then by sorted member names.
pub fn enumerate_with(af: &Af, sigma: Semantics, cfg: &Config) -> Result<Vec<Extension>> {
    let sets = extension_masks(af, sigma, cfg)?;
    let m = Masks::new(af);
    let mut out: Vec<Extension> =
        sets.into_iter().map(|s| Extension { members: ArgSet(s), range: ArgSet(m.range(s)) }).collect();
    sort_extensions(af, &mut out);
    Ok(out)
}

/// Sets satisfying σ, in ascending mask order.
pub fn extension_masks(af: &Af, sigma: Semantics, cfg: &Config) -> Result<Vec<u64>> {
    check_cap(af, cfg)?;
    let m = Masks::new(af);
    let n = 1u64 << m.n;
    let base = par::filter_map_range(cfg.exec, n, |s| m.local(s, sigma).then_some(s));
    Ok(match sigma {
        Semantics::Pref => maximal_by(&base, |s| s),
        Semantics::SemiSt | Semantics::Stag => maximal_by(&base, |s| m.range(s)),
        _ => base,
    })
}

/// Keeps the sets whose key is ⊆-maximal among all keys.
pub fn maximal_by<F: Fn(u64) -> u64>(sets: &[u64], key: F) -> Vec<u64> {
    let mut keys: Vec<u64> = sets.iter().map(|&s| key(s)).collect();
    keys.sort_by_key(|k| std::cmp::Reverse(k.count_ones()));
    keys.dedup();
    let mut top: Vec<u64> = Vec::new();
    for k in keys {
        if !top.iter().any(|&t| k & !t == 0 && k != t) && !top.contains(&k) {
            top.push(k);
        }
    }
    sets.iter().copied().filter(|&s| top.contains(&key(s))).collect()
}

/// Sort key: cardinality, then the sorted member names.
pub fn set_key(af: &Af, s: ArgSet) -> (usize, Vec<String>) {
    let mut names = af.names_of(s);
    names.sort();
    (s.len(), names)
}

pub fn sort_sets(af: &Af, sets: &mut [ArgSet]) {
    sets.sort_by_cached_key(|&s| set_key(af, s));
}

pub fn sort_extensions(af: &Af, exts: &mut [Extension]) {
    exts.sort_by_cached_key(|e| set_key(af, e.members));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Af {
        Af::from_edges(&["noS", "T", "P", "W"], &[("noS", "T"), ("noS", "P"), ("W", "noS")]).unwrap()
    }

    fn fig4() -> Af {
        Af::from_edges(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("b", "d"), ("d", "b")]).unwrap()
    }

    fn fig3() -> Af {
        Af::from_edges(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "a"), ("a", "c"), ("b", "c"), ("e", "d"), ("e", "e")],
        )
        .unwrap()
    }

    fn names(af: &Af, exts: &[Extension]) -> Vec<Vec<String>> {
        exts.iter().map(|e| set_key(af, e.members).1).collect()
    }

    #[test]
    fn defended_examples() {
        let af = fig1();
        let d = defended_set(&af, af.set_of(&["W"]).unwrap()).unwrap();
        assert_eq!(af.names_of(d), vec!["T", "P", "W"]);
        assert_eq!(af.names_of(defended_set(&af, ArgSet::EMPTY).unwrap()), vec!["W"]);
        // Fig. 4: d's attacker b is attacked only by d, so {a} does not defend d
        let af = fig4();
        let d = defended_set(&af, af.set_of(&["a"]).unwrap()).unwrap();
        assert_eq!(af.names_of(d), vec!["a"]);
    }

    #[test]
    fn range_examples() {
        let af = fig1();
        assert_eq!(af.names_of(range(&af, af.set_of(&["W"]).unwrap())), vec!["noS", "W"]);
        assert_eq!(range(&af, ArgSet::EMPTY), ArgSet::EMPTY);
        let af = fig4();
        assert_eq!(af.names_of(range(&af, af.set_of(&["b"]).unwrap())), vec!["b", "c", "d"]);
    }

    #[test]
    fn satisfies_examples() {
        let af = fig1();
        assert!(satisfies(&af, af.set_of(&["W", "T", "P"]).unwrap(), Semantics::Stab).unwrap());
        assert!(satisfies(&af, ArgSet::EMPTY, Semantics::Adm).unwrap());
        let af = fig3();
        assert!(enumerate(&af, Semantics::Stab).unwrap().is_empty());
    }

    #[test]
    fn enumerate_examples() {
        let af = fig4();
        let adm = enumerate(&af, Semantics::Adm).unwrap();
        let want: Vec<Vec<String>> = vec![vec![], vec!["a"], vec!["b"], vec!["d"], vec!["a", "b"], vec!["a", "d"]]
            .into_iter()
            .map(|v| v.into_iter().map(String::from).collect())
            .collect();
        assert_eq!(names(&af, &adm), want);

        let single = Af::new(["a"]).unwrap();
        assert_eq!(enumerate(&single, Semantics::Stab).unwrap().len(), 1);

        let (sub, _) = fig3().induced(ArgSet(0b111)).unwrap();
        assert_eq!(names(&sub, &enumerate(&sub, Semantics::Stab).unwrap()), vec![vec!["a"], vec!["b"]]);
    }

    #[test]
    fn preferred_of_fig4() {
        let af = fig4();
        let pref = enumerate(&af, Semantics::Pref).unwrap();
        assert_eq!(names(&af, &pref), vec![vec!["a", "b"], vec!["a", "d"]]);
    }

    #[test]
    fn enumeration_agrees_with_membership() {
        let af = fig3();
        for sigma in Semantics::ALL {
            let listed: Vec<ArgSet> = enumerate(&af, sigma).unwrap().iter().map(|e| e.members).collect();
            for s in 0..32u64 {
                assert_eq!(listed.contains(&ArgSet(s)), satisfies(&af, ArgSet(s), sigma).unwrap(), "{sigma} {s:b}");
            }
        }
    }

    #[test]
    fn cap_is_reported() {
        let af = Af::new((0..21).map(|i| format!("a{i}"))).unwrap();
        assert!(matches!(enumerate(&af, Semantics::Conf), Err(Error::CapExceeded { .. })));
    }
}
