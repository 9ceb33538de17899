//! Random fixtures and brute-force oracles shared by the integration tests.
//! Nothing here calls into the closure or selection code under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;
use std::sync::Arc;

use govsg_core::ontology::parse_obo;
use govsg_core::{GeneId, GeneInstance, Namespace, OntologyGraph, Term, TermId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn seven_terms() -> Arc<OntologyGraph> {
    let text = std::fs::read_to_string(fixture("seven_terms.obo")).unwrap();
    Arc::new(parse_obo(&text).unwrap().0)
}

pub fn id(s: &str) -> TermId {
    TermId::new(s).unwrap()
}

/// Raw DAG: node ids plus child → parents adjacency.
#[derive(Debug, Clone)]
pub struct RawDag {
    pub ids: Vec<TermId>,
    pub parents: Vec<Vec<usize>>,
}

impl RawDag {
    pub fn graph(&self) -> OntologyGraph {
        let terms = self.ids.iter().enumerate().map(|(i, t)| Term {
            id: t.clone(),
            name: format!("term {i}"),
            namespace: Namespace::BiologicalProcess,
            parents: self.parents[i].iter().map(|&p| self.ids[p].clone()).collect(),
        });
        OntologyGraph::from_terms(terms).unwrap()
    }

    pub fn position(&self, t: &TermId) -> usize {
        self.ids.iter().position(|x| x == t).unwrap()
    }

    /// Breadth-first walk over parent edges, excluding the start node.
    pub fn bfs_ancestors(&self, start: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<usize> = self.parents[start].iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            if seen.insert(v) {
                queue.extend(self.parents[v].iter().copied());
            }
        }
        seen
    }

    pub fn bfs_ancestor_ids(&self, start: usize) -> BTreeSet<TermId> {
        self.bfs_ancestors(start)
            .into_iter()
            .map(|i| self.ids[i].clone())
            .collect()
    }

    /// Adds parents until nothing changes.
    pub fn fixed_point_closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = set.clone();
        loop {
            let before = out.len();
            let snapshot: Vec<usize> = out.iter().copied().collect();
            for v in snapshot {
                out.extend(self.parents[v].iter().copied());
            }
            if out.len() == before {
                return out;
            }
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.ids.len())
            .filter(|&i| !self.parents.iter().any(|ps| ps.contains(&i)))
            .collect()
    }
}

/// Random DAG with `n` nodes. Edges only point from a later generation index
/// to an earlier one; ids are shuffled so id order is unrelated to depth.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, edge_p: f64) -> RawDag {
    let mut numbers: Vec<u32> = (1..=n as u32 * 3).collect();
    numbers.shuffle(rng);
    let ids: Vec<TermId> = numbers[..n]
        .iter()
        .map(|k| id(&format!("GO:{k:07}")))
        .collect();
    let mut parents = vec![Vec::new(); n];
    for (child, ps) in parents.iter_mut().enumerate().skip(1) {
        for parent in 0..child {
            if rng.gen_bool(edge_p) {
                ps.push(parent);
            }
        }
    }
    RawDag { ids, parents }
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, p: f64) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

pub fn instance(gene: &str, terms: BTreeSet<TermId>) -> GeneInstance {
    GeneInstance {
        gene: GeneId::new(gene).unwrap(),
        annotations: terms,
        class_label: None,
    }
}

/// Minimum subset of the universe whose values imply every other value,
/// found by enumerating all subsets. Feature `s` implies `t` when
/// `s = 1` and `s` is a descendant of `t`, or `s = 0` and `s` is an ancestor
/// of `t`. Panics if the minimum is not unique.
pub fn brute_force_hip(
    dag: &RawDag,
    universe: &[usize],
    annotations: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    let u = universe.len();
    assert!(u <= 20);
    let ancestors: Vec<BTreeSet<usize>> = (0..dag.ids.len()).map(|i| dag.bfs_ancestors(i)).collect();
    let value = |v: usize| annotations.contains(&v);
    // implies[s] = bitmask over universe positions implied by s (including s)
    let implies: Vec<u32> = universe
        .iter()
        .map(|&s| {
            let mut mask = 0u32;
            for (q, &t) in universe.iter().enumerate() {
                let hit = s == t
                    || (value(s) && ancestors[s].contains(&t))
                    || (!value(s) && ancestors[t].contains(&s));
                if hit {
                    mask |= 1 << q;
                }
            }
            mask
        })
        .collect();
    let full: u32 = if u == 32 { u32::MAX } else { (1 << u) - 1 };
    let mut best: Option<(u32, Vec<u32>)> = None;
    for subset in 0..=full {
        let covered = (0..u)
            .filter(|&q| subset & (1 << q) != 0)
            .fold(0u32, |acc, q| acc | implies[q]);
        if covered != full {
            continue;
        }
        let size = subset.count_ones();
        match &mut best {
            Some((b, list)) if size == *b => list.push(subset),
            Some((b, _)) if size > *b => {}
            _ => best = Some((size, vec![subset])),
        }
    }
    let (_, winners) = best.expect("the full set always covers");
    assert_eq!(winners.len(), 1, "minimum cover must be unique");
    (0..u)
        .filter(|&q| winners[0] & (1 << q) != 0)
        .map(|q| universe[q])
        .collect()
}

fn entropy(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| -(c / total) * (c / total).ln())
        .sum()
}

/// Smoothed I(X;Y|C) through the entropy identity
/// H(X,C) + H(Y,C) - H(X,Y,C) - H(C), with one pseudo-count per joint cell.
pub fn entropy_cmi(xs: &[bool], ys: &[bool], classes: Option<&[usize]>) -> f64 {
    let k = if classes.is_some() { 2 } else { 1 };
    let mut joint = vec![1.0f64; 4 * k];
    for i in 0..xs.len() {
        let c = classes.map_or(0, |cs| cs[i]);
        joint[(xs[i] as usize) * 2 * k + (ys[i] as usize) * k + c] += 1.0;
    }
    let cell = |x: usize, y: usize, c: usize| joint[x * 2 * k + y * k + c];
    let mut xc = Vec::new();
    let mut yc = Vec::new();
    let mut cc = Vec::new();
    for c in 0..k {
        for v in 0..2 {
            xc.push(cell(v, 0, c) + cell(v, 1, c));
            yc.push(cell(0, v, c) + cell(1, v, c));
        }
        cc.push((0..4).map(|xy| cell(xy / 2, xy % 2, c)).sum());
    }
    entropy(&xc) + entropy(&yc) - entropy(&joint) - entropy(&cc)
}

/// All labelled spanning trees of K_n via Prüfer sequences (n^(n-2) trees).
pub fn all_spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n < 2 {
        return vec![Vec::new()];
    }
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::new();
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

/// Count of each element in a multiset.
pub fn multiset<T: Ord + Clone>(items: impl IntoIterator<Item = T>) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for it in items {
        *m.entry(it).or_default() += 1;
    }
    m
}
