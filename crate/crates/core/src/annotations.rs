//! Gene→GO annotation ingest and true-path closure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ontology::{OntologyError, OntologyGraph, TermId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnnotationError {
    #[error("annotation input contains no records")]
    EmptyDataset,
    #[error("gene {gene} has conflicting class labels")]
    InconsistentLabel { gene: GeneId },
    #[error("invalid gene id {0:?}")]
    BadGeneId(String),
    #[error("gene {0} appears twice")]
    DuplicateGene(GeneId),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Organism-local gene identifier: non-empty, no whitespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GeneId(String);

impl GeneId {
    pub fn new(value: impl Into<String>) -> Result<Self, AnnotationError> {
        let value = value.into();
        if value.is_empty() || value.chars().any(char::is_whitespace) {
            return Err(AnnotationError::BadGeneId(value));
        }
        Ok(GeneId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GeneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for GeneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for GeneId {
    type Error = AnnotationError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        GeneId::new(value)
    }
}

impl From<GeneId> for String {
    fn from(id: GeneId) -> Self {
        id.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Pro,
    Anti,
}

impl ClassLabel {
    pub fn index(self) -> usize {
        match self {
            ClassLabel::Pro => 0,
            ClassLabel::Anti => 1,
        }
    }
}

impl FromStr for ClassLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pro" => Ok(ClassLabel::Pro),
            "anti" => Ok(ClassLabel::Anti),
            other => Err(format!("class must be `pro` or `anti`, found {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneInstance {
    pub gene: GeneId,
    /// Closed under ancestors.
    pub annotations: BTreeSet<TermId>,
    pub class_label: Option<ClassLabel>,
}

/// One record of the annotation table. The term is kept raw so that malformed
/// or unknown ids can be reported per row instead of failing the load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRow {
    pub line: usize,
    pub gene: String,
    pub term: String,
    pub class_label: Option<String>,
}

impl AnnotationRow {
    pub fn new(gene: &str, term: &str) -> Self {
        AnnotationRow {
            line: 0,
            gene: gene.to_string(),
            term: term.to_string(),
            class_label: None,
        }
    }

    pub fn labelled(gene: &str, term: &str, label: &str) -> Self {
        AnnotationRow {
            class_label: Some(label.to_string()),
            ..AnnotationRow::new(gene, term)
        }
    }
}

/// Splits `gene_id<TAB>go_id[<TAB>class]` records; `#` lines and blank lines
/// are skipped. Column-count problems are left for the loader to report.
pub fn parse_annotation_tsv(text: &str) -> Vec<AnnotationRow> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(n, l)| {
            let mut cols = l.trim_end_matches('\r').split('\t');
            AnnotationRow {
                line: n + 1,
                gene: cols.next().unwrap_or("").trim().to_string(),
                term: cols.next().unwrap_or("").trim().to_string(),
                class_label: cols.next().map(|c| c.trim().to_string()).filter(|c| !c.is_empty()),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRow {
    pub line: usize,
    pub gene: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub skipped: Vec<SkippedRow>,
    /// Genes kept with no valid annotation (all-zero vectors).
    pub unannotated_genes: Vec<GeneId>,
}

impl LoadReport {
    pub fn is_clean(&self) -> bool {
        self.skipped.is_empty() && self.unannotated_genes.is_empty()
    }

    /// Line-oriented text form written next to the ranked tables.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.skipped {
            out.push_str(&format!(
                "skipped line {}: gene {}: {}\n",
                row.line, row.gene, row.reason
            ));
        }
        for gene in &self.unannotated_genes {
            out.push_str(&format!("unannotated gene {gene}\n"));
        }
        out
    }
}

/// Annotated instances for one organism over a shared ontology.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub organism: String,
    instances: Vec<GeneInstance>,
    ontology: Arc<OntologyGraph>,
    feature_universe: Vec<TermId>,
    // graph index of each universe position, and its inverse
    universe_index: Vec<usize>,
    universe_position: Vec<Option<usize>>,
    // instance × universe position
    matrix: Vec<Vec<bool>>,
}

impl Dataset {
    /// Builds a dataset from instances that are expected to be closed already.
    /// Instances are sorted by gene id. Closure is checked lazily by selection.
    pub fn new(
        organism: impl Into<String>,
        mut instances: Vec<GeneInstance>,
        ontology: Arc<OntologyGraph>,
    ) -> Result<Self, AnnotationError> {
        instances.sort_by(|a, b| a.gene.cmp(&b.gene));
        for pair in instances.windows(2) {
            if pair[0].gene == pair[1].gene {
                return Err(AnnotationError::DuplicateGene(pair[0].gene.clone()));
            }
        }
        let mut used = vec![false; ontology.len()];
        for inst in &instances {
            for t in &inst.annotations {
                let i = ontology.index_of(t)?;
                used[i] = true;
            }
        }
        let universe_index: Vec<usize> = ontology
            .topo_indices()
            .iter()
            .copied()
            .filter(|&i| used[i])
            .collect();
        let mut universe_position = vec![None; ontology.len()];
        for (p, &gi) in universe_index.iter().enumerate() {
            universe_position[gi] = Some(p);
        }
        let feature_universe: Vec<TermId> = universe_index
            .iter()
            .map(|&i| ontology.term_at(i).id.clone())
            .collect();
        let matrix = instances
            .iter()
            .map(|inst| binary_vector(inst, &feature_universe))
            .collect();
        Ok(Dataset {
            organism: organism.into(),
            instances,
            ontology,
            feature_universe,
            universe_index,
            universe_position,
            matrix,
        })
    }

    pub fn instances(&self) -> &[GeneInstance] {
        &self.instances
    }

    pub fn ontology(&self) -> &OntologyGraph {
        &self.ontology
    }

    pub fn ontology_arc(&self) -> &Arc<OntologyGraph> {
        &self.ontology
    }

    /// Every term annotating at least one instance, children before parents.
    pub fn feature_universe(&self) -> &[TermId] {
        &self.feature_universe
    }

    pub(crate) fn universe_graph_index(&self) -> &[usize] {
        &self.universe_index
    }

    pub(crate) fn universe_position_of_graph_index(&self, graph_index: usize) -> Option<usize> {
        self.universe_position[graph_index]
    }

    pub fn position_of(&self, term: &TermId) -> Option<usize> {
        let gi = self.ontology.index_of(term).ok()?;
        self.universe_position[gi]
    }

    /// Binary feature row of instance `i` over the universe.
    pub fn row(&self, i: usize) -> &[bool] {
        &self.matrix[i]
    }

    pub fn instance_index(&self, gene: &GeneId) -> Option<usize> {
        self.instances
            .binary_search_by(|inst| inst.gene.cmp(gene))
            .ok()
    }

    pub fn all_labelled(&self) -> bool {
        self.instances.iter().all(|i| i.class_label.is_some())
    }
}

/// `terms` together with all of their ancestors.
pub fn true_path_closure(
    terms: &BTreeSet<TermId>,
    g: &OntologyGraph,
) -> Result<BTreeSet<TermId>, OntologyError> {
    let mut out = terms.clone();
    for t in terms {
        let i = g.index_of(t)?;
        out.extend(g.ancestor_indices(i).iter().map(|&a| g.term_at(a).id.clone()));
    }
    Ok(out)
}

/// Position `i` is set iff `universe[i]` annotates the instance.
pub fn binary_vector(inst: &GeneInstance, universe: &[TermId]) -> Vec<bool> {
    universe
        .iter()
        .map(|t| inst.annotations.contains(t))
        .collect()
}

/// Groups rows by gene, closes each gene's terms upward and builds the dataset.
/// Rows with malformed or unknown ids are skipped and listed in the report.
pub fn load_annotations(
    organism: &str,
    rows: &[AnnotationRow],
    g: Arc<OntologyGraph>,
) -> Result<(Dataset, LoadReport), AnnotationError> {
    if rows.is_empty() {
        return Err(AnnotationError::EmptyDataset);
    }
    let mut report = LoadReport::default();
    let mut genes: BTreeMap<GeneId, (BTreeSet<TermId>, BTreeSet<ClassLabel>)> = BTreeMap::new();

    for row in rows {
        let skip = |reason: String| SkippedRow {
            line: row.line,
            gene: row.gene.clone(),
            reason,
        };
        let gene = match GeneId::new(row.gene.as_str()) {
            Ok(g) => g,
            Err(e) => {
                report.skipped.push(skip(e.to_string()));
                continue;
            }
        };
        let label = match row.class_label.as_deref().map(str::parse::<ClassLabel>) {
            None => None,
            Some(Ok(l)) => Some(l),
            Some(Err(e)) => {
                report.skipped.push(skip(e));
                continue;
            }
        };
        let entry = genes.entry(gene).or_default();
        entry.1.extend(label);
        match TermId::new(row.term.as_str()) {
            Ok(t) if g.contains(&t) => {
                entry.0.insert(t);
            }
            Ok(t) => report.skipped.push(skip(format!("unknown term {t}"))),
            Err(e) => report.skipped.push(skip(e.to_string())),
        }
    }

    let mut instances = Vec::with_capacity(genes.len());
    for (gene, (terms, labels)) in genes {
        if labels.len() > 1 {
            return Err(AnnotationError::InconsistentLabel { gene });
        }
        if terms.is_empty() {
            report.unannotated_genes.push(gene.clone());
        }
        let annotations = true_path_closure(&terms, &g)?;
        instances.push(GeneInstance {
            gene,
            annotations,
            class_label: labels.into_iter().next(),
        });
    }
    if instances.is_empty() {
        return Err(AnnotationError::EmptyDataset);
    }
    let ds = Dataset::new(organism, instances, g)?;
    Ok((ds, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Namespace, Term};

    fn id(s: &str) -> TermId {
        TermId::new(s).unwrap()
    }

    // r <- a <- c, r <- b
    fn small_graph() -> Arc<OntologyGraph> {
        let bp = Namespace::BiologicalProcess;
        Arc::new(
            OntologyGraph::from_terms([
                Term::new(id("GO:0000001"), "r", bp),
                Term::new(id("GO:0000002"), "a", bp).with_parent(id("GO:0000001")),
                Term::new(id("GO:0000003"), "b", bp).with_parent(id("GO:0000001")),
                Term::new(id("GO:0000004"), "c", bp).with_parent(id("GO:0000002")),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn gene_id_rules() {
        assert!(GeneId::new("daf-2").is_ok());
        assert!(GeneId::new("").is_err());
        assert!(GeneId::new("a b").is_err());
    }

    #[test]
    fn root_closure_is_itself() {
        let g = small_graph();
        let rows = [AnnotationRow::new("g1", "GO:0000001")];
        let (ds, report) = load_annotations("worm", &rows, g).unwrap();
        assert!(report.is_clean());
        let expected: BTreeSet<_> = [id("GO:0000001")].into();
        assert_eq!(ds.instances()[0].annotations, expected);
    }

    #[test]
    fn leaf_annotation_closes_upward() {
        let g = small_graph();
        let rows = [AnnotationRow::new("g1", "GO:0000004")];
        let (ds, _) = load_annotations("worm", &rows, g).unwrap();
        let expected: BTreeSet<_> = ["GO:0000001", "GO:0000002", "GO:0000004"].map(id).into();
        assert_eq!(ds.instances()[0].annotations, expected);
        // children before parents
        let universe: Vec<&str> = ds.feature_universe().iter().map(TermId::as_str).collect();
        assert_eq!(universe, ["GO:0000004", "GO:0000002", "GO:0000001"]);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(
            load_annotations("worm", &[], small_graph()).unwrap_err(),
            AnnotationError::EmptyDataset
        );
    }

    #[test]
    fn conflicting_labels_rejected() {
        let rows = [
            AnnotationRow::labelled("g1", "GO:0000002", "pro"),
            AnnotationRow::labelled("g1", "GO:0000003", "anti"),
        ];
        assert!(matches!(
            load_annotations("worm", &rows, small_graph()),
            Err(AnnotationError::InconsistentLabel { .. })
        ));
    }

    #[test]
    fn bad_rows_are_reported_and_gene_kept() {
        let text = "# synthetic\ng1\tGO:0000004\tpro\ng1\tGO:0009999\ng2\tGO:12\ng3\tGO:0000003\tmaybe\n";
        let rows = parse_annotation_tsv(text);
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].line, 2);
        let (ds, report) = load_annotations("worm", &rows, small_graph()).unwrap();
        assert_eq!(ds.instances().len(), 2);
        assert_eq!(ds.instances()[0].class_label, Some(ClassLabel::Pro));
        assert_eq!(report.skipped.len(), 3);
        assert_eq!(report.unannotated_genes, vec![GeneId::new("g2").unwrap()]);
        assert!(ds.row(1).iter().all(|&b| !b));
        let text = report.to_text();
        assert!(text.contains("skipped line 3: gene g1: unknown term GO:0009999"));
        assert!(text.contains("unannotated gene g2"));
    }

    #[test]
    fn binary_vector_edges() {
        let g = small_graph();
        let universe: Vec<TermId> = g.topo_order().cloned().collect();
        let full = GeneInstance {
            gene: GeneId::new("g").unwrap(),
            annotations: universe.iter().cloned().collect(),
            class_label: None,
        };
        assert!(binary_vector(&full, &universe).iter().all(|&b| b));
        let empty = GeneInstance {
            annotations: BTreeSet::new(),
            ..full
        };
        assert!(binary_vector(&empty, &universe).iter().all(|&b| !b));
    }

    #[test]
    fn unknown_term_in_closure() {
        let g = small_graph();
        let s: BTreeSet<_> = [id("GO:0000042")].into();
        assert!(matches!(true_path_closure(&s, &g), Err(OntologyError::UnknownTerm(_))));
    }
}
