//! Gene Ontology hierarchy: OBO-subset parsing and reachability queries.
//!
//! The graph is immutable once built. Every term is assigned a dense index in
//! ascending [`TermId`] order, and the ancestor/descendant closures are
//! precomputed so that per-instance feature selection never walks the DAG.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OntologyError {
    #[error("malformed GO term id {0:?} (expected GO: followed by 7 digits)")]
    BadTermId(String),
    #[error("line {line}: duplicate term {id}")]
    DuplicateTerm { id: TermId, line: usize },
    #[error("term {child} has is_a edge to undefined term {parent}")]
    DanglingEdge { child: TermId, parent: TermId },
    #[error("ontology contains a cycle through {0}")]
    CyclicOntology(TermId),
    #[error("unknown term {0}")]
    UnknownTerm(TermId),
    #[error("line {line}: stanza is missing required tag `{tag}`")]
    MissingTag { tag: &'static str, line: usize },
    #[error("line {line}: unknown namespace {value:?}")]
    BadNamespace { value: String, line: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// A validated `GO:NNNNNNN` identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TermId(String);

impl TermId {
    pub fn new(value: impl Into<String>) -> Result<Self, OntologyError> {
        let value = value.into();
        let valid = value.len() == 10
            && value.starts_with("GO:")
            && value[3..].bytes().all(|b| b.is_ascii_digit());
        if valid {
            Ok(TermId(value))
        } else {
            Err(OntologyError::BadTermId(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for TermId {
    type Err = OntologyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TermId::new(s)
    }
}

impl TryFrom<String> for TermId {
    type Error = OntologyError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        TermId::new(value)
    }
}

impl From<TermId> for String {
    fn from(id: TermId) -> Self {
        id.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Namespace {
    BiologicalProcess,
    MolecularFunction,
    CellularComponent,
}

impl Namespace {
    pub fn as_str(self) -> &'static str {
        match self {
            Namespace::BiologicalProcess => "biological_process",
            Namespace::MolecularFunction => "molecular_function",
            Namespace::CellularComponent => "cellular_component",
        }
    }
}

impl FromStr for Namespace {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "biological_process" => Ok(Namespace::BiologicalProcess),
            "molecular_function" => Ok(Namespace::MolecularFunction),
            "cellular_component" => Ok(Namespace::CellularComponent),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub id: TermId,
    pub name: String,
    pub namespace: Namespace,
    /// Direct `is_a` parents.
    pub parents: BTreeSet<TermId>,
}

impl Term {
    pub fn new(id: TermId, name: impl Into<String>, namespace: Namespace) -> Self {
        Term {
            id,
            name: name.into(),
            namespace,
            parents: BTreeSet::new(),
        }
    }

    pub fn with_parent(mut self, parent: TermId) -> Self {
        self.parents.insert(parent);
        self
    }
}

/// Immutable GO DAG with precomputed transitive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyGraph {
    terms: Vec<Term>,
    index: BTreeMap<TermId, usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    // sorted, excluding self
    ancestors: Vec<Vec<usize>>,
    descendants: Vec<Vec<usize>>,
    // children before parents
    topo_order: Vec<usize>,
}

impl OntologyGraph {
    /// Builds and validates a graph from a set of terms.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Result<Self, OntologyError> {
        let mut by_id = BTreeMap::new();
        for term in terms {
            if term.parents.contains(&term.id) {
                return Err(OntologyError::CyclicOntology(term.id));
            }
            if let Some(prev) = by_id.insert(term.id.clone(), term) {
                return Err(OntologyError::DuplicateTerm { id: prev.id, line: 0 });
            }
        }
        let terms: Vec<Term> = by_id.into_values().collect();
        let index: BTreeMap<TermId, usize> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.id.clone(), i))
            .collect();

        let n = terms.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for (i, term) in terms.iter().enumerate() {
            for p in &term.parents {
                let Some(&pi) = index.get(p) else {
                    return Err(OntologyError::DanglingEdge {
                        child: term.id.clone(),
                        parent: p.clone(),
                    });
                };
                parents[i].push(pi);
                children[pi].push(i);
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }

        // Kahn's algorithm from the leaves upward; the smallest id wins ties.
        let mut pending_children: Vec<usize> = children.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> = (0..n)
            .filter(|&i| pending_children[i] == 0)
            .map(Reverse)
            .collect();
        let mut topo_order = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            topo_order.push(i);
            for &p in &parents[i] {
                pending_children[p] -= 1;
                if pending_children[p] == 0 {
                    ready.push(Reverse(p));
                }
            }
        }
        if topo_order.len() != n {
            let stuck = (0..n).find(|&i| pending_children[i] > 0).unwrap_or(0);
            return Err(OntologyError::CyclicOntology(terms[stuck].id.clone()));
        }

        let mut ancestor_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &i in topo_order.iter().rev() {
            let mut acc = BTreeSet::new();
            for &p in &parents[i] {
                acc.insert(p);
                acc.extend(ancestor_sets[p].iter().copied());
            }
            ancestor_sets[i] = acc;
        }
        let mut descendants = vec![Vec::new(); n];
        for (i, anc) in ancestor_sets.iter().enumerate() {
            for &a in anc {
                descendants[a].push(i);
            }
        }
        let ancestors = ancestor_sets
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();

        Ok(OntologyGraph {
            terms,
            index,
            parents,
            children,
            ancestors,
            descendants,
            topo_order,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, id: &TermId) -> bool {
        self.index.contains_key(id)
    }

    pub fn term(&self, id: &TermId) -> Option<&Term> {
        self.index.get(id).map(|&i| &self.terms[i])
    }

    /// Terms in ascending id order.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter()
    }

    pub fn index_of(&self, id: &TermId) -> Result<usize, OntologyError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| OntologyError::UnknownTerm(id.clone()))
    }

    pub fn term_at(&self, index: usize) -> &Term {
        &self.terms[index]
    }

    pub fn parent_indices(&self, index: usize) -> &[usize] {
        &self.parents[index]
    }

    pub fn child_indices(&self, index: usize) -> &[usize] {
        &self.children[index]
    }

    /// Sorted ancestor indices, excluding `index` itself.
    pub fn ancestor_indices(&self, index: usize) -> &[usize] {
        &self.ancestors[index]
    }

    /// Sorted descendant indices, excluding `index` itself.
    pub fn descendant_indices(&self, index: usize) -> &[usize] {
        &self.descendants[index]
    }

    /// True when `ancestor` is a strict ancestor of `of`.
    pub fn is_ancestor_index(&self, ancestor: usize, of: usize) -> bool {
        self.ancestors[of].binary_search(&ancestor).is_ok()
    }

    pub fn ancestors(&self, id: &TermId) -> Result<BTreeSet<TermId>, OntologyError> {
        let i = self.index_of(id)?;
        Ok(self.ids(&self.ancestors[i]))
    }

    pub fn descendants(&self, id: &TermId) -> Result<BTreeSet<TermId>, OntologyError> {
        let i = self.index_of(id)?;
        Ok(self.ids(&self.descendants[i]))
    }

    /// True iff the two terms are equal or one is an ancestor of the other.
    pub fn related(&self, a: &TermId, b: &TermId) -> Result<bool, OntologyError> {
        let ai = self.index_of(a)?;
        let bi = self.index_of(b)?;
        Ok(ai == bi || self.is_ancestor_index(ai, bi) || self.is_ancestor_index(bi, ai))
    }

    /// Every term, children before parents, ties by ascending id.
    pub fn topo_order(&self) -> impl Iterator<Item = &TermId> + '_ {
        self.topo_order.iter().map(|&i| &self.terms[i].id)
    }

    pub fn topo_indices(&self) -> &[usize] {
        &self.topo_order
    }

    pub fn roots(&self) -> impl Iterator<Item = &TermId> + '_ {
        self.terms
            .iter()
            .zip(&self.parents)
            .filter(|(_, p)| p.is_empty())
            .map(|(t, _)| &t.id)
    }

    fn ids(&self, indices: &[usize]) -> BTreeSet<TermId> {
        indices.iter().map(|&i| self.terms[i].id.clone()).collect()
    }
}

/// Side information produced while parsing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub obsolete_dropped: usize,
    pub stanzas_ignored: usize,
}

#[derive(Default)]
struct Stanza {
    start_line: usize,
    id: Option<TermId>,
    name: Option<String>,
    namespace: Option<Namespace>,
    parents: BTreeSet<TermId>,
    obsolete: bool,
}

/// Parses the OBO subset: `[Term]` stanzas with `id`, `name`, `namespace`,
/// `is_a` and `is_obsolete` tags. Everything else is ignored.
pub fn parse_obo(text: &str) -> Result<(OntologyGraph, ParseReport), OntologyError> {
    let mut report = ParseReport::default();
    let mut terms: Vec<(usize, Term)> = Vec::new();
    let mut current: Option<Stanza> = None;

    let finish = |stanza: Stanza,
                  terms: &mut Vec<(usize, Term)>,
                  report: &mut ParseReport|
     -> Result<(), OntologyError> {
        let line = stanza.start_line;
        let id = stanza.id.ok_or(OntologyError::MissingTag { tag: "id", line })?;
        if stanza.obsolete {
            report.obsolete_dropped += 1;
            return Ok(());
        }
        let name = stanza.name.ok_or(OntologyError::MissingTag { tag: "name", line })?;
        let namespace = stanza
            .namespace
            .ok_or(OntologyError::MissingTag { tag: "namespace", line })?;
        terms.push((
            line,
            Term {
                id,
                name,
                namespace,
                parents: stanza.parents,
            },
        ));
        Ok(())
    };

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.starts_with('[') && line.ends_with(']') {
            if let Some(stanza) = current.take() {
                finish(stanza, &mut terms, &mut report)?;
            }
            if line == "[Term]" {
                current = Some(Stanza {
                    start_line: line_no,
                    ..Stanza::default()
                });
            } else {
                report.stanzas_ignored += 1;
            }
            continue;
        }
        if line.is_empty() {
            if let Some(stanza) = current.take() {
                finish(stanza, &mut terms, &mut report)?;
            }
            continue;
        }
        let Some(stanza) = current.as_mut() else {
            // header line or a line belonging to an ignored stanza
            continue;
        };
        let Some((key, value)) = line.split_once(':') else {
            return Err(OntologyError::Syntax {
                line: line_no,
                message: format!("expected `key: value`, found {line:?}"),
            });
        };
        let value = value.trim();
        match key.trim() {
            "id" => stanza.id = Some(TermId::new(value)?),
            "name" => stanza.name = Some(value.to_string()),
            "namespace" => {
                let ns = value.parse().map_err(|_| OntologyError::BadNamespace {
                    value: value.to_string(),
                    line: line_no,
                })?;
                stanza.namespace = Some(ns);
            }
            "is_a" => {
                let target = value.split('!').next().unwrap_or("").trim();
                stanza.parents.insert(TermId::new(target)?);
            }
            "is_obsolete" => stanza.obsolete = value == "true",
            _ => {}
        }
    }
    if let Some(stanza) = current.take() {
        finish(stanza, &mut terms, &mut report)?;
    }

    let mut seen = BTreeSet::new();
    for (line, term) in &terms {
        if !seen.insert(term.id.clone()) {
            return Err(OntologyError::DuplicateTerm {
                id: term.id.clone(),
                line: *line,
            });
        }
    }
    let graph = OntologyGraph::from_terms(terms.into_iter().map(|(_, t)| t))?;
    Ok((graph, report))
}
