//! Lazy hierarchical feature selection and the frequency-ranked term table.
//!
//! For every gene the HIP strategy picks the features whose values are not
//! implied by any other feature under the hierarchy. A tree-augmented naive
//! Bayes dependency tree is then learnt over that gene's selected terms, and
//! the terms are ranked by how often they were selected, with participation
//! in tree edges breaking ties.

mod hip;
mod rank;
mod tan;

use rayon::prelude::*;
use thiserror::Error;

use crate::annotations::{Dataset, GeneId};
use crate::ontology::TermId;
use crate::scalar::Scalar;

pub use hip::{hip_select, Hip, SelectionResult, SelectionStrategy};
pub use rank::{
    edge_frequencies, rank_terms, selection_counts, selection_frequencies, EdgeCountMode,
    RankedRow, RankedTermTable,
};
pub use tan::{learn_tan_tree, maximum_spanning_forest, pair_weight, TanEdge, TanTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HfsError {
    #[error("gene {gene}: annotation {term} is present but its ancestor {missing} is not")]
    ClosureViolation {
        gene: GeneId,
        term: TermId,
        missing: TermId,
    },
    #[error("gene {0} is missing a class label and the unlabelled fallback is disabled")]
    MissingLabels(GeneId),
    #[error("gene {0} does not belong to the dataset")]
    UnknownGene(GeneId),
    #[error("selection for gene {gene} contains {term}, which is outside the feature universe")]
    ForeignFeature { gene: GeneId, term: TermId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HfsOptions {
    pub edge_count_mode: EdgeCountMode,
    /// Use unconditional mutual information when class labels are missing.
    pub label_fallback: bool,
}

impl Default for HfsOptions {
    fn default() -> Self {
        HfsOptions {
            edge_count_mode: EdgeCountMode::Degree,
            label_fallback: false,
        }
    }
}

/// Everything produced while ranking one organism.
#[derive(Debug, Clone)]
pub struct RankOutput<T> {
    pub table: RankedTermTable,
    pub selections: Vec<SelectionResult>,
    pub trees: Vec<TanTree<T>>,
}

/// Runs selection and tree learning for every instance, then ranks.
///
/// The per-instance work runs in parallel; results are collected in gene
/// order so the output does not depend on scheduling.
pub fn rank_dataset<T: Scalar>(
    ds: &Dataset,
    opts: &HfsOptions,
) -> Result<RankOutput<T>, HfsError> {
    rank_dataset_with::<T, _>(ds, &Hip, opts)
}

pub fn rank_dataset_with<T: Scalar, S: SelectionStrategy>(
    ds: &Dataset,
    strategy: &S,
    opts: &HfsOptions,
) -> Result<RankOutput<T>, HfsError> {
    let per_instance: Vec<(SelectionResult, TanTree<T>)> = ds
        .instances()
        .par_iter()
        .map(|inst| {
            let sel = strategy.select(inst, ds)?;
            let tree = learn_tan_tree(inst, &sel, ds, opts.label_fallback)?;
            Ok((sel, tree))
        })
        .collect::<Result<_, HfsError>>()?;
    let (selections, trees): (Vec<_>, Vec<_>) = per_instance.into_iter().unzip();
    let selection = selection_counts(&selections, ds);
    let edges = edge_frequencies(&trees, opts.edge_count_mode);
    let table = rank_terms(&selection, &edges, ds);
    Ok(RankOutput {
        table,
        selections,
        trees,
    })
}
