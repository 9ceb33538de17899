use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use super::{HfsError, SelectionResult};
use crate::annotations::{Dataset, GeneId, GeneInstance};
use crate::ontology::TermId;
use crate::scalar::Scalar;

/// Undirected dependency edge, `a < b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TanEdge<T> {
    pub a: TermId,
    pub b: TermId,
    pub weight: T,
}

/// Per-instance dependency forest over that instance's selected terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TanTree<T> {
    pub gene: GeneId,
    pub nodes: BTreeSet<TermId>,
    /// Sorted by endpoint ids.
    pub edges: Vec<TanEdge<T>>,
}

impl<T: Scalar> TanTree<T> {
    pub fn total_weight(&self) -> T {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Fewer than two nodes: no dependency can be expressed.
    pub fn is_singleton(&self) -> bool {
        self.nodes.len() < 2
    }
}

/// Laplace-smoothed (conditional) mutual information between two binary
/// features. With `classes` the value is I(X;Y|C) over binary C, otherwise
/// I(X;Y). Every joint cell receives one pseudo-count.
pub fn pair_weight<T: Scalar>(xs: &[bool], ys: &[bool], classes: Option<&[usize]>) -> T {
    let n_classes = if classes.is_some() { 2 } else { 1 };
    let mut counts = [[[0usize; 2]; 2]; 2];
    for (k, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        let c = classes.map_or(0, |cs| cs[k]);
        counts[x as usize][y as usize][c] += 1;
    }
    let total = T::from_count(xs.len() + 4 * n_classes);
    let one = T::one();
    let p = |x: usize, y: usize, c: usize| (T::from_count(counts[x][y][c]) + one) / total;

    let mut weight = T::zero();
    for c in 0..n_classes {
        let pc: T = (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).map(|(x, y)| p(x, y, c)).sum();
        for x in 0..2 {
            let pxc = p(x, 0, c) + p(x, 1, c);
            for y in 0..2 {
                let pyc = p(0, y, c) + p(1, y, c);
                let pxyc = p(x, y, c);
                weight = weight + pxyc * (pxyc * pc / (pxc * pyc)).ln();
            }
        }
    }
    weight
}

/// Kruskal over `edges` given as `(i, j, weight)` with `i < j` indexing
/// `n` nodes. Only strictly positive weights are considered; ties prefer the
/// lexicographically smallest `(i, j)`. Returns the chosen edges sorted.
pub fn maximum_spanning_forest<T: Scalar>(n: usize, edges: &[(usize, usize, T)]) -> Vec<(usize, usize)> {
    let mut candidates: Vec<&(usize, usize, T)> = edges
        .iter()
        .filter(|(_, _, w)| *w > T::zero_tolerance())
        .collect();
    candidates.sort_by(|x, y| {
        y.2.partial_cmp(&x.2)
            .unwrap_or(Ordering::Equal)
            .then((x.0, x.1).cmp(&(y.0, y.1)))
    });

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut chosen = Vec::new();
    for &&(i, j, _) in &candidates {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            chosen.push((i, j));
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Learns the dependency tree for one instance over its selected features,
/// estimating weights from every instance of the dataset.
pub fn learn_tan_tree<T: Scalar>(
    inst: &GeneInstance,
    sel: &SelectionResult,
    ds: &Dataset,
    label_fallback: bool,
) -> Result<TanTree<T>, HfsError> {
    let nodes: Vec<&TermId> = sel.selected.iter().collect();
    let mut tree = TanTree {
        gene: inst.gene.clone(),
        nodes: sel.selected.clone(),
        edges: Vec::new(),
    };
    if nodes.len() < 2 {
        return Ok(tree);
    }

    let classes: Option<Vec<usize>> = if ds.all_labelled() {
        Some(
            ds.instances()
                .iter()
                .map(|i| i.class_label.map_or(0, |l| l.index()))
                .collect(),
        )
    } else if label_fallback {
        None
    } else {
        let unlabelled = ds
            .instances()
            .iter()
            .find(|i| i.class_label.is_none())
            .map_or_else(|| inst.gene.clone(), |i| i.gene.clone());
        return Err(HfsError::MissingLabels(unlabelled));
    };

    let columns: Vec<Vec<bool>> = nodes
        .iter()
        .map(|t| {
            let p = ds.position_of(t).ok_or_else(|| HfsError::ForeignFeature {
                gene: inst.gene.clone(),
                term: (*t).clone(),
            })?;
            Ok((0..ds.instances().len()).map(|k| ds.row(k)[p]).collect())
        })
        .collect::<Result<_, HfsError>>()?;

    let mut weighted = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let w = pair_weight::<T>(&columns[i], &columns[j], classes.as_deref());
            weighted.push((i, j, w));
        }
    }
    tree.edges = maximum_spanning_forest(nodes.len(), &weighted)
        .into_iter()
        .map(|(i, j)| {
            let w = weighted
                .iter()
                .find(|e| e.0 == i && e.1 == j)
                .map(|e| e.2)
                .unwrap_or_else(T::zero);
            TanEdge {
                a: nodes[i].clone(),
                b: nodes[j].clone(),
                weight: w,
            }
        })
        .collect();
    Ok(tree)
}
