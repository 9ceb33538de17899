use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::HfsError;
use crate::annotations::{Dataset, GeneId, GeneInstance};
use crate::ontology::TermId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub gene: GeneId,
    pub selected: BTreeSet<TermId>,
}

/// A per-instance (lazy) feature selection method.
pub trait SelectionStrategy: Sync {
    fn select(&self, inst: &GeneInstance, ds: &Dataset) -> Result<SelectionResult, HfsError>;
}

/// Hierarchical information-preserving selection.
#[derive(Debug, Clone, Copy, Default)]
pub struct Hip;

impl SelectionStrategy for Hip {
    fn select(&self, inst: &GeneInstance, ds: &Dataset) -> Result<SelectionResult, HfsError> {
        hip_select(inst, ds)
    }
}

/// Keeps the most specific positive terms and the most general negative terms
/// of the instance over the dataset's feature universe.
///
/// A positive term is dropped when some positive descendant implies it, and a
/// negative term is dropped when some negative ancestor implies it.
pub fn hip_select(inst: &GeneInstance, ds: &Dataset) -> Result<SelectionResult, HfsError> {
    let g = ds.ontology();
    for t in &inst.annotations {
        let i = g
            .index_of(t)
            .map_err(|_| HfsError::ForeignFeature {
                gene: inst.gene.clone(),
                term: t.clone(),
            })?;
        if let Some(&a) = g
            .ancestor_indices(i)
            .iter()
            .find(|&&a| !inst.annotations.contains(&g.term_at(a).id))
        {
            return Err(HfsError::ClosureViolation {
                gene: inst.gene.clone(),
                term: t.clone(),
                missing: g.term_at(a).id.clone(),
            });
        }
    }

    let universe = ds.feature_universe();
    let graph_index = ds.universe_graph_index();
    let values: Vec<bool> = universe
        .iter()
        .map(|t| inst.annotations.contains(t))
        .collect();
    // value of a graph term, if it belongs to the universe
    let value_of = |gi: usize| ds.universe_position_of_graph_index(gi).map(|p| values[p]);

    let selected = universe
        .iter()
        .zip(graph_index)
        .zip(&values)
        .filter(|((_, &gi), &v)| {
            if v {
                !g.descendant_indices(gi)
                    .iter()
                    .any(|&d| value_of(d) == Some(true))
            } else {
                !g.ancestor_indices(gi)
                    .iter()
                    .any(|&a| value_of(a) == Some(false))
            }
        })
        .map(|((t, _), _)| t.clone())
        .collect();

    Ok(SelectionResult {
        gene: inst.gene.clone(),
        selected,
    })
}
