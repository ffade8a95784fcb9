//! Primal graphs and tree decompositions.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Af, ArgSet, Condition, Raf};
use crate::qbf::Matrix;

/// Simple undirected graph over named vertices. Self-loops are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn add_vertex(&mut self, v: &str) -> usize {
        if let Some(&i) = self.index.get(v) {
            return i;
        }
        self.names.push(v.to_string());
        self.adj.push(BTreeSet::new());
        self.index.insert(v.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }

    pub fn add_edge(&mut self, u: &str, v: &str) {
        let (a, b) = (self.add_vertex(u), self.add_vertex(v));
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    pub fn add_clique<'a>(&mut self, vs: impl IntoIterator<Item = &'a String>) {
        let vs: Vec<&String> = vs.into_iter().collect();
        for (i, u) in vs.iter().enumerate() {
            self.add_vertex(u);
            for v in &vs[i + 1..] {
                self.add_edge(u, v);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Vertices in insertion order.
    pub fn vertices(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &str) -> bool {
        self.index.contains_key(v)
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.adj[a].contains(&b),
            _ => false,
        }
    }

    pub fn degree(&self, v: &str) -> usize {
        self.index_of(v).map_or(0, |i| self.adj[i].len())
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as name pairs with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            for &b in ns {
                let (u, v) = (&self.names[a], &self.names[b]);
                if u < v {
                    out.push((u.clone(), v.clone()));
                }
            }
        }
        out.sort();
        out
    }
}

pub fn primal_af(af: &Af) -> Graph {
    let mut g = Graph::new();
    for n in af.names() {
        g.add_vertex(n);
    }
    for (a, b) in af.attacks() {
        g.add_edge(af.name(a), af.name(b));
    }
    g
}

/// Attacks, the primal graph of every condition, and each argument joined
/// to the variables of its conditions.
pub fn primal_raf(raf: &Raf) -> Graph {
    let mut g = primal_af(&raf.af);
    for a in 0..raf.af.len() {
        let name = raf.af.name(a).to_string();
        for c in raf.conditions(a) {
            let vars = c.vars();
            g.add_clique(&vars);
            for v in &vars {
                g.add_edge(&name, v);
            }
        }
    }
    g
}

/// Variables are adjacent iff they share a clause or a term.
pub fn primal_matrix(m: &Matrix) -> Graph {
    let mut g = Graph::new();
    for part in m.cnf.iter().chain(m.dnf.iter().flatten()) {
        let vars: Vec<String> = part.iter().map(|l| l.atom.clone()).collect();
        g.add_clique(&vars);
    }
    g
}

pub type Bag = BTreeSet<String>;

/// A rooted tree of bags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Bag>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl TreeDecomposition {
    /// A decomposition with a single bag.
    pub fn single(bag: Bag) -> TreeDecomposition {
        TreeDecomposition { bags: vec![bag], children: vec![Vec::new()], root: 0 }
    }

    /// Roots an undirected tree given by `edges` at `root`.
    pub fn from_edges(bags: Vec<Bag>, edges: &[(usize, usize)], root: usize) -> Result<TreeDecomposition> {
        let n = bags.len();
        if n == 0 || root >= n {
            return Err(Error::InvalidTd("decomposition needs at least one node and a valid root".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTd(format!("{} nodes need {} tree edges, found {}", n, n - 1, edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidTd(format!("bad tree edge {} {}", a + 1, b + 1)));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(t) = stack.pop() {
            for &s in &adj[t] {
                if !seen[s] {
                    seen[s] = true;
                    children[t].push(s);
                    stack.push(s);
                }
            }
        }
        if let Some(t) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidTd(format!("node {} is not connected to the root", t + 1)));
        }
        for c in &mut children {
            c.sort_unstable();
        }
        Ok(TreeDecomposition { bags, children, root })
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.len()];
        for (t, cs) in self.children.iter().enumerate() {
            for &c in cs {
                p[c] = Some(t);
            }
        }
        p
    }

    /// Children before parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = self.preorder();
        out.reverse();
        out
    }

    /// Parents before children.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(self.children[t].iter().rev());
        }
        out
    }

    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> =
            self.children.iter().enumerate().flat_map(|(t, cs)| cs.iter().map(move |&c| (t, c))).collect();
        e.sort_unstable();
        e
    }

    /// The topmost node whose bag holds `v`.
    pub fn last(&self, v: &str) -> Option<usize> {
        self.preorder().into_iter().find(|&t| self.bags[t].contains(v))
    }

    /// `last` for every vertex in some bag.
    pub fn last_map(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for t in self.preorder() {
            for v in &self.bags[t] {
                m.entry(v.clone()).or_insert(t);
            }
        }
        m
    }

    /// Whether every vertex has exactly one node t* holding it that is the
    /// root or the only child of a node without it.
    pub fn has_unique_last(&self) -> bool {
        let parents = self.parents();
        let vs: BTreeSet<&String> = self.bags.iter().flatten().collect();
        vs.into_iter().all(|v| {
            let count = (0..self.len())
                .filter(|&t| {
                    self.bags[t].contains(v)
                        && match parents[t] {
                            None => true,
                            Some(p) => self.children[p].len() == 1 && !self.bags[p].contains(v),
                        }
                })
                .count();
            count == 1
        })
    }

    fn is_ancestor(&self, parents: &[Option<usize>], anc: usize, mut t: usize) -> bool {
        loop {
            if t == anc {
                return true;
            }
            match parents[t] {
                Some(p) => t = p,
                None => return false,
            }
        }
    }
}

/// Checks the decomposition conditions and returns the width.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Result<usize> {
    let n = td.len();
    if n == 0 || td.root >= n || td.children.len() != n {
        return Err(Error::InvalidTd("malformed tree".into()));
    }
    let mut seen = vec![false; n];
    let mut stack = vec![td.root];
    seen[td.root] = true;
    let mut count = 1;
    while let Some(t) = stack.pop() {
        for &c in &td.children[t] {
            if c >= n || seen[c] {
                return Err(Error::InvalidTd(format!("node {} is reached twice or does not exist", c + 1)));
            }
            seen[c] = true;
            count += 1;
            stack.push(c);
        }
    }
    if count != n {
        return Err(Error::InvalidTd("some node is not reachable from the root".into()));
    }
    for (t, bag) in td.bags.iter().enumerate() {
        if let Some(v) = bag.iter().find(|v| !g.contains(v)) {
            return Err(Error::InvalidTd(format!("bag {} holds unknown vertex {v}", t + 1)));
        }
    }
    for v in g.vertices() {
        if !td.bags.iter().any(|b| b.contains(v)) {
            return Err(Error::InvalidTd(format!("vertex {v} is in no bag")));
        }
    }
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(Error::InvalidTd(format!("edge {{{u}, {v}}} is in no bag")));
        }
    }
    let parents = td.parents();
    for v in g.vertices() {
        let tops: Vec<usize> = (0..n)
            .filter(|&t| td.bags[t].contains(v) && parents[t].is_none_or(|p| !td.bags[p].contains(v)))
            .collect();
        if tops.len() > 1 {
            let (a, b) = (tops[0], tops[1]);
            let (a, b) = if td.is_ancestor(&parents, a, b) { (a, b) } else { (b, a) };
            // b is not an ancestor of a, so the a-b path passes b's parent
            let s = parents[b].expect("a top below another node has a parent");
            return Err(Error::InvalidTd(format!(
                "vertex {v} is in nodes {} and {} but not in node {} between them",
                a + 1,
                b + 1,
                s + 1
            )));
        }
    }
    Ok(td.width())
}

/// Elimination-ordering heuristic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Heuristic {
    #[default]
    MinFill,
    MinDegree,
}

impl FromStr for Heuristic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Heuristic> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "min-fill" | "minfill" => Ok(Heuristic::MinFill),
            "min-degree" | "mindegree" => Ok(Heuristic::MinDegree),
            _ => Err(Error::Invalid(format!("unknown heuristic {s}"))),
        }
    }
}

pub fn heuristic_td(g: &Graph) -> TreeDecomposition {
    heuristic_td_with(g, Heuristic::MinFill)
}

/// Decomposition from a greedy elimination ordering. Ties go to the
/// lexicographically smallest name; the root is the last eliminated vertex.
pub fn heuristic_td_with(g: &Graph, h: Heuristic) -> TreeDecomposition {
    let n = g.len();
    if n == 0 {
        return TreeDecomposition::single(Bag::new());
    }
    let mut adj = g.adj.clone();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    let fill = |adj: &[BTreeSet<usize>], v: usize| -> usize {
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        let mut f = 0;
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !adj[a].contains(&b) {
                    f += 1;
                }
            }
        }
        f
    };
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by(|&a, &b| {
                let key = |v: usize| match h {
                    Heuristic::MinFill => (fill(&adj, v), adj[v].len()),
                    Heuristic::MinDegree => (adj[v].len(), 0),
                };
                key(a).cmp(&key(b)).then_with(|| g.names[a].cmp(&g.names[b]))
            })
            .expect("a vertex is alive");
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &ns {
            adj[a].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        bags[v] = std::iter::once(v).chain(ns).collect();
        order.push(v);
    }
    from_elimination(g, &order, &bags)
}

// Node i of the result holds the i-th eliminated vertex and its neighbours
// at elimination time; `bags[v]` starts with v.
fn from_elimination(g: &Graph, order: &[usize], bags: &[Vec<usize>]) -> TreeDecomposition {
    let n = order.len();
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    // node i belongs to the i-th eliminated vertex
    let root = n - 1;
    let mut edges = Vec::new();
    for (i, &v) in order.iter().enumerate().take(n - 1) {
        let parent = bags[v].iter().skip(1).map(|&u| pos[u]).min().unwrap_or(root);
        edges.push((parent, i));
    }
    let named: Vec<Bag> = order.iter().map(|&v| bags[v].iter().map(|&u| g.names[u].clone()).collect()).collect();
    let td = TreeDecomposition::from_edges(named, &edges, root).expect("elimination tree is a tree");
    contract_subsets(&td)
}

/// Result of [`td_within`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bounded {
    Found(TreeDecomposition),
    /// Every elimination ordering exceeds the bound.
    Impossible,
    /// The budget ran out or the graph is too large to search.
    Undecided,
}

/// Searches for a decomposition of width at most `bound` by branching over
/// elimination orderings, visiting at most `budget` states. Graphs above 64
/// vertices are not searched.
pub fn td_within(g: &Graph, bound: usize, budget: usize) -> Bounded {
    let n = g.len();
    if n == 0 {
        return Bounded::Found(TreeDecomposition::single(Bag::new()));
    }
    if n > 64 {
        return Bounded::Undecided;
    }
    let adj: Vec<u64> = g.adj.iter().map(|ns| ns.iter().fold(0u64, |m, &u| m | 1 << u)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Search { adj, all, bound, budget, exhausted: false, failed: HashSet::new(), order: Vec::new() };
    if !search.go(0) {
        return if search.exhausted { Bounded::Undecided } else { Bounded::Impossible };
    }
    let mut eliminated = 0u64;
    let mut order = search.order.clone();
    let rest = all & !order.iter().fold(0u64, |m, &v| m | 1 << v);
    order.extend(bits(rest));
    let mut bags = vec![Vec::new(); n];
    for &v in &order {
        let ns = search.neighbours(v, eliminated);
        bags[v] = std::iter::once(v).chain(bits(ns)).collect();
        eliminated |= 1 << v;
    }
    Bounded::Found(from_elimination(g, &order, &bags))
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

struct Search {
    adj: Vec<u64>,
    all: u64,
    bound: usize,
    budget: usize,
    exhausted: bool,
    failed: HashSet<u64>,
    order: Vec<usize>,
}

impl Search {
    /// Neighbours of `v` once the vertices of `gone` are eliminated.
    fn neighbours(&self, v: usize, gone: u64) -> u64 {
        let mut seen = 1u64 << v;
        let mut stack = self.adj[v] & gone;
        let mut out = self.adj[v] & !gone;
        seen |= self.adj[v];
        while stack != 0 {
            let u = stack.trailing_zeros() as usize;
            stack &= stack - 1;
            let nb = self.adj[u] & !seen;
            seen |= nb;
            out |= nb & !gone;
            stack |= nb & gone;
        }
        out & !(1u64 << v)
    }

    fn go(&mut self, gone: u64) -> bool {
        let left = self.all & !gone;
        if left.count_ones() as usize <= self.bound + 1 {
            return true;
        }
        if self.failed.contains(&gone) {
            return false;
        }
        if self.budget == 0 {
            self.exhausted = true;
            return false;
        }
        self.budget -= 1;
        let mut options: Vec<(usize, usize)> = Vec::new();
        for v in bits(left) {
            let ns = self.neighbours(v, gone);
            let d = ns.count_ones() as usize;
            if d > self.bound {
                continue;
            }
            // a vertex whose neighbourhood is a clique can always go first
            if bits(ns).all(|u| ns & !(1u64 << u) & !self.neighbours(u, gone) == 0) {
                options = vec![(d, v)];
                break;
            }
            options.push((d, v));
        }
        options.sort_unstable();
        for (_, v) in options {
            self.order.push(v);
            if self.go(gone | 1 << v) {
                return true;
            }
            self.order.pop();
        }
        self.failed.insert(gone);
        false
    }
}

/// Merges every node whose bag is contained in its parent's bag.
pub fn contract_subsets(td: &TreeDecomposition) -> TreeDecomposition {
    let parents = td.parents();
    let mut rep: Vec<usize> = (0..td.len()).collect();
    for t in td.preorder() {
        if let Some(p) = parents[t] {
            let rp = rep[p];
            if td.bags[t].is_subset(&td.bags[rp]) {
                rep[t] = rp;
            }
        }
    }
    let keep: Vec<usize> = (0..td.len()).filter(|&t| rep[t] == t).collect();
    let new_id: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let bags = keep.iter().map(|&t| td.bags[t].clone()).collect();
    let mut children = vec![Vec::new(); keep.len()];
    for &t in &keep {
        if let Some(p) = parents[t] {
            children[new_id[&rep[p]]].push(new_id[&t]);
        }
    }
    TreeDecomposition { bags, children, root: new_id[&rep[td.root]] }
}

/// Reads the PACE `td` format. Numeric vertices map to the vertices of `g`
/// (1-based, insertion order) when a graph is given; names are taken as is.
/// Bag 1 becomes the root.
pub fn read_pace(text: &str, g: Option<&Graph>) -> Result<TreeDecomposition> {
    let syntax = |line: usize, msg: String| Error::Syntax { line, col: 1, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Bag>> = Vec::new();
    let mut edges = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => continue,
            Some(&"s") => {
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(syntax(ln, "expected `s td <bags> <width+1> <vertices>`".into()));
                }
                let nb: usize = toks[2].parse().map_err(|_| syntax(ln, "bad bag count".into()))?;
                let w: usize = toks[3].parse().map_err(|_| syntax(ln, "bad bag size".into()))?;
                header = Some((nb, w));
                bags = vec![None; nb];
            }
            Some(&"b") => {
                let (nb, _) = header.ok_or_else(|| syntax(ln, "bag before header".into()))?;
                let id: usize = toks.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| syntax(ln, "bad bag id".into()))?;
                if id == 0 || id > nb {
                    return Err(syntax(ln, format!("bag id {id} out of range")));
                }
                let mut bag = Bag::new();
                for tok in &toks[2..] {
                    bag.insert(vertex_name(tok, g).map_err(|m| syntax(ln, m))?);
                }
                bags[id - 1] = Some(bag);
            }
            Some(_) => {
                if toks.len() != 2 || header.is_none() {
                    return Err(syntax(ln, format!("unexpected line `{raw}`")));
                }
                let a: usize = toks[0].parse().map_err(|_| syntax(ln, "bad tree edge".into()))?;
                let b: usize = toks[1].parse().map_err(|_| syntax(ln, "bad tree edge".into()))?;
                if a == 0 || b == 0 {
                    return Err(syntax(ln, "bag ids start at 1".into()));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, size) = header.ok_or_else(|| syntax(1, "missing `s td` header".into()))?;
    let bags: Vec<Bag> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::InvalidTd(format!("bag {} is not listed", i + 1))))
        .collect::<Result<_>>()?;
    let td = TreeDecomposition::from_edges(bags, &edges, 0)?;
    if td.width() + 1 > size.max(1) {
        return Err(Error::InvalidTd(format!("header says bags hold at most {size} vertices")));
    }
    Ok(td)
}

fn vertex_name(tok: &str, g: Option<&Graph>) -> std::result::Result<String, String> {
    match (g, tok.parse::<usize>()) {
        (Some(g), Ok(i)) => match i.checked_sub(1).and_then(|i| g.vertices().get(i)) {
            Some(v) => Ok(v.clone()),
            None => Err(format!("vertex {i} out of range")),
        },
        _ => Ok(tok.to_string()),
    }
}

/// Writes PACE `td`, numbering vertices by `g` when given, names otherwise.
/// The root is written as bag 1.
pub fn write_pace(td: &TreeDecomposition, g: Option<&Graph>) -> String {
    let order = td.preorder();
    let id: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &t)| (t, i + 1)).collect();
    let nv = g.map_or_else(|| td.bags.iter().flatten().collect::<BTreeSet<_>>().len(), Graph::len);
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.len(), td.width() + 1, nv);
    for &t in &order {
        let _ = write!(out, "b {}", id[&t]);
        for v in &td.bags[t] {
            match g.and_then(|g| g.index_of(v)) {
                Some(i) => {
                    let _ = write!(out, " {}", i + 1);
                }
                None => {
                    let _ = write!(out, " {v}");
                }
            }
        }
        out.push('\n');
    }
    for (a, b) in td.tree_edges() {
        let _ = writeln!(out, "{} {}", id[&a], id[&b]);
    }
    out
}

/// Arguments, attacks and rejection conditions visible in one bag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagProjection {
    pub args: ArgSet,
    pub attacks: Vec<(usize, usize)>,
    pub conds: Vec<Condition>,
}

impl BagProjection {
    /// Arguments of the bag hosting `c`.
    pub fn hosts(&self, raf: &Raf, c: &Condition) -> Vec<usize> {
        self.args.iter().filter(|&a| raf.conditions(a).contains(c)).collect()
    }
}

fn project(raf: &Raf, bag: &Bag) -> (ArgSet, Vec<(usize, usize)>) {
    let args: ArgSet = bag.iter().filter_map(|v| raf.af.index_of(v)).collect();
    let attacks = raf.af.attacks().into_iter().filter(|&(a, b)| args.contains(a) && args.contains(b)).collect();
    (args, attacks)
}

/// Distinct conditions of bag arguments whose variables all lie in the bag.
pub fn bag_conditions(raf: &Raf, bag: &Bag) -> Vec<Condition> {
    let mut out = BTreeSet::new();
    for v in bag {
        if let Some(a) = raf.af.index_of(v) {
            for c in raf.conditions(a) {
                if c.vars().iter().all(|x| bag.contains(x)) {
                    out.insert(c.clone());
                }
            }
        }
    }
    out.into_iter().collect()
}

pub fn bag_projection(raf: &Raf, td: &TreeDecomposition, node: usize) -> Result<BagProjection> {
    let bag = td.bags.get(node).ok_or_else(|| Error::InvalidTd(format!("no node {}", node + 1)))?;
    let (args, attacks) = project(raf, bag);
    Ok(BagProjection { args, attacks, conds: bag_conditions(raf, bag) })
}

/// A decomposition with at most two children per node, forget steps only
/// below single-child nodes, and conditions distributed over copy nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalTd {
    pub td: TreeDecomposition,
    /// Conditions each node is responsible for.
    pub owned: Vec<Vec<Condition>>,
    pub last: BTreeMap<String, usize>,
}

impl NormalTd {
    pub fn projection(&self, raf: &Raf, node: usize) -> BagProjection {
        let (args, attacks) = project(raf, &self.td.bags[node]);
        BagProjection { args, attacks, conds: self.owned[node].clone() }
    }

    pub fn last(&self, v: &str) -> Option<usize> {
        self.last.get(v).copied()
    }
}

struct Builder<'a> {
    src: &'a TreeDecomposition,
    raf: Option<&'a Raf>,
    chunk: usize,
    bags: Vec<Bag>,
    children: Vec<Vec<usize>>,
    owned: Vec<Vec<Condition>>,
}

impl Builder<'_> {
    fn emit(&mut self, bag: Bag, owned: Vec<Condition>) -> usize {
        self.bags.push(bag);
        self.children.push(Vec::new());
        self.owned.push(owned);
        self.bags.len() - 1
    }

    fn go(&mut self, t: usize) -> usize {
        let bag = self.src.bags[t].clone();
        let conds = self.raf.map(|r| bag_conditions(r, &bag)).unwrap_or_default();
        let mut chunks: Vec<Vec<Condition>> = conds.chunks(self.chunk).map(<[Condition]>::to_vec).collect();
        if chunks.is_empty() {
            chunks.push(Vec::new());
        }
        let top = self.emit(bag.clone(), chunks[0].clone());
        let mut cur = top;
        for c in &chunks[1..] {
            let n = self.emit(bag.clone(), c.clone());
            self.children[cur].push(n);
            cur = n;
        }
        let kids: Vec<usize> = self.src.children[t].iter().map(|&c| self.go(c)).collect();
        self.attach(cur, &kids);
        top
    }

    fn attach(&mut self, p: usize, kids: &[usize]) {
        match kids.len() {
            0 => {}
            1 => self.children[p].push(kids[0]),
            2 => {
                for &k in kids {
                    let w = self.wrap(p, k);
                    self.children[p].push(w);
                }
            }
            _ => {
                let w = self.wrap(p, kids[0]);
                self.children[p].push(w);
                let x = self.emit(self.bags[p].clone(), Vec::new());
                self.children[p].push(x);
                self.attach(x, &kids[1..]);
            }
        }
    }

    /// Puts the shared part of `p` and `k` above `k` when `k` has vertices
    /// `p` lacks, so that those are forgotten below a single-child node.
    fn wrap(&mut self, p: usize, k: usize) -> usize {
        if self.bags[k].is_subset(&self.bags[p]) {
            return k;
        }
        let shared = self.bags[p].intersection(&self.bags[k]).cloned().collect();
        let c = self.emit(shared, Vec::new());
        self.children[c].push(k);
        c
    }
}

/// Normalizes a valid decomposition without changing its width. With a
/// framework, each node owns at most width+1 of its bag conditions; larger
/// sets are split over chains of copy nodes.
pub fn normalize_td(td: &TreeDecomposition, raf: Option<&Raf>) -> NormalTd {
    let mut b = Builder {
        src: td,
        raf,
        chunk: td.width() + 1,
        bags: Vec::new(),
        children: Vec::new(),
        owned: Vec::new(),
    };
    let root = b.go(td.root);
    let out = TreeDecomposition { bags: b.bags, children: b.children, root };
    let last = out.last_map();
    NormalTd { td: out, owned: b.owned, last }
}
