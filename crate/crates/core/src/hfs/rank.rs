use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{hip_select, HfsError, SelectionResult, TanTree};
use crate::annotations::Dataset;
use crate::ontology::TermId;

/// How a term's participation in the per-instance trees is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeCountMode {
    /// Number of edge endpoints equal to the term, summed over trees.
    #[default]
    Degree,
    /// Number of trees in which the term has at least one edge.
    TreeMembership,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedRow {
    pub rank: usize,
    pub term: TermId,
    pub name: String,
    pub selection_count: usize,
    pub edge_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedTermTable {
    pub organism: String,
    pub rows: Vec<RankedRow>,
}

pub const TSV_HEADER: &str = "rank\tterm\tname\tselection_count\tedge_count";

impl RankedTermTable {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(TSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                r.rank, r.term, r.name, r.selection_count, r.edge_count
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serialises");
        s.push('\n');
        s
    }

    /// The first `k` terms of the table.
    pub fn top(&self, k: usize) -> &[RankedRow] {
        &self.rows[..k.min(self.rows.len())]
    }
}

/// Per-term count of instances whose selection contains the term. Every term
/// of the feature universe is present, possibly with count 0.
pub fn selection_counts(selections: &[SelectionResult], ds: &Dataset) -> BTreeMap<TermId, usize> {
    let mut counts: BTreeMap<TermId, usize> =
        ds.feature_universe().iter().map(|t| (t.clone(), 0)).collect();
    for sel in selections {
        for t in &sel.selected {
            *counts.entry(t.clone()).or_default() += 1;
        }
    }
    counts
}

/// HIP selection frequency of every universe term over all instances.
pub fn selection_frequencies(ds: &Dataset) -> Result<BTreeMap<TermId, usize>, HfsError> {
    let selections = ds
        .instances()
        .iter()
        .map(|inst| hip_select(inst, ds))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(selection_counts(&selections, ds))
}

/// Terms absent from the result have count 0.
pub fn edge_frequencies<T>(trees: &[TanTree<T>], mode: EdgeCountMode) -> BTreeMap<TermId, usize> {
    let mut counts = BTreeMap::new();
    for tree in trees {
        match mode {
            EdgeCountMode::Degree => {
                for e in &tree.edges {
                    *counts.entry(e.a.clone()).or_default() += 1;
                    *counts.entry(e.b.clone()).or_default() += 1;
                }
            }
            EdgeCountMode::TreeMembership => {
                let touched: BTreeSet<&TermId> =
                    tree.edges.iter().flat_map(|e| [&e.a, &e.b]).collect();
                for t in touched {
                    *counts.entry(t.clone()).or_default() += 1;
                }
            }
        }
    }
    counts
}

/// Orders terms by selection count, then edge count (both descending), then id.
pub fn rank_terms(
    selection: &BTreeMap<TermId, usize>,
    edges: &BTreeMap<TermId, usize>,
    ds: &Dataset,
) -> RankedTermTable {
    let g = ds.ontology();
    let mut rows: Vec<RankedRow> = selection
        .iter()
        .map(|(t, &s)| RankedRow {
            rank: 0,
            term: t.clone(),
            name: g.term(t).map(|t| t.name.clone()).unwrap_or_default(),
            selection_count: s,
            edge_count: edges.get(t).copied().unwrap_or(0),
        })
        .collect();
    rows.sort_by(|x, y| {
        y.selection_count
            .cmp(&x.selection_count)
            .then(y.edge_count.cmp(&x.edge_count))
            .then(x.term.cmp(&y.term))
    });
    for (i, r) in rows.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    RankedTermTable {
        organism: ds.organism.clone(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotations::GeneId;
    use crate::hfs::TanEdge;

    fn id(s: &str) -> TermId {
        TermId::new(s).unwrap()
    }

    fn tree(edges: &[(&str, &str)]) -> TanTree<f64> {
        TanTree {
            gene: GeneId::new("g").unwrap(),
            nodes: edges.iter().flat_map(|(a, b)| [id(a), id(b)]).collect(),
            edges: edges
                .iter()
                .map(|(a, b)| TanEdge {
                    a: id(a),
                    b: id(b),
                    weight: 1.0,
                })
                .collect(),
        }
    }

    #[test]
    fn degree_counts() {
        let (a, b, c) = ("GO:0000001", "GO:0000002", "GO:0000003");
        let counts = edge_frequencies(&[tree(&[(a, b), (b, c)])], EdgeCountMode::Degree);
        assert_eq!(counts[&id(a)], 1);
        assert_eq!(counts[&id(b)], 2);
        assert_eq!(counts[&id(c)], 1);
        let membership = edge_frequencies(
            &[tree(&[(a, b), (b, c)]), tree(&[(a, b)])],
            EdgeCountMode::TreeMembership,
        );
        assert_eq!(membership[&id(b)], 2);
        assert_eq!(membership[&id(c)], 1);
        assert!(edge_frequencies::<f64>(&[], EdgeCountMode::Degree).is_empty());
    }
}
