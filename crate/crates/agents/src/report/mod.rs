//! Claims extracted from a transcript, reviewer support labels, and the
//! highlighted report rendering.

mod claims;
mod render;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vsg::{TaskStatus, Transcript};

pub use claims::{char_slice, segment_claims, sentence_spans, Claim};
pub use render::{escape_html, render, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportLabel {
    Supported,
    Unsupported,
    Contradicted,
    Unreviewed,
}

impl SupportLabel {
    pub const ALL: [SupportLabel; 4] = [
        SupportLabel::Supported,
        SupportLabel::Unsupported,
        SupportLabel::Contradicted,
        SupportLabel::Unreviewed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SupportLabel::Supported => "supported",
            SupportLabel::Unsupported => "unsupported",
            SupportLabel::Contradicted => "contradicted",
            SupportLabel::Unreviewed => "unreviewed",
        }
    }

    pub fn needs_citation(self) -> bool {
        matches!(self, SupportLabel::Supported | SupportLabel::Contradicted)
    }
}

impl fmt::Display for SupportLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportAnnotation {
    pub claim_id: String,
    pub label: SupportLabel,
    #[serde(default)]
    pub citations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub supported: usize,
    pub unsupported: usize,
    pub contradicted: usize,
    pub unreviewed: usize,
}

impl LabelCounts {
    pub fn get(&self, label: SupportLabel) -> usize {
        match label {
            SupportLabel::Supported => self.supported,
            SupportLabel::Unsupported => self.unsupported,
            SupportLabel::Contradicted => self.contradicted,
            SupportLabel::Unreviewed => self.unreviewed,
        }
    }

    fn bump(&mut self, label: SupportLabel) {
        match label {
            SupportLabel::Supported => self.supported += 1,
            SupportLabel::Unsupported => self.unsupported += 1,
            SupportLabel::Contradicted => self.contradicted += 1,
            SupportLabel::Unreviewed => self.unreviewed += 1,
        }
    }

    pub fn total(&self) -> usize {
        SupportLabel::ALL.iter().map(|&l| self.get(l)).sum()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("unknown claim {0}")]
    UnknownClaim(String),
    #[error("claim {claim} is labelled {label} but has no citations")]
    MissingCitation { claim: String, label: SupportLabel },
    #[error("unknown task {0}")]
    UnknownTask(String),
    #[error("span {start}..{end} is outside the output of {task}")]
    BadSpan { task: String, start: usize, end: usize },
    #[error("span of {claim} overlaps annotated claim {other}")]
    OverlappingSpan { claim: String, other: String },
    #[error("annotations are for run {found}, transcript is run {expected}")]
    RunMismatch { expected: String, found: String },
    #[error("invalid annotations file: {0}")]
    Parse(String),
}

/// One entry of an annotations file. `span`, when given, defines a custom
/// claim over char offsets of the task named by the part of `claim_id`
/// before `#`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub claim_id: String,
    pub label: SupportLabel,
    #[serde(default)]
    pub citations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationsFile {
    pub run_id: String,
    pub annotations: Vec<AnnotationRecord>,
}

impl AnnotationsFile {
    pub fn from_json_str(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| ReportError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ReportError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

/// Transcript plus claims, annotations and per-agent label counts.
/// Claims without an annotation count as unreviewed.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedReport {
    transcript: Transcript,
    claims: Vec<Claim>,
    annotations: BTreeMap<String, SupportAnnotation>,
    counts: BTreeMap<String, LabelCounts>,
}

impl AnnotatedReport {
    /// Segments every completed output into sentence claims.
    pub fn from_transcript(transcript: Transcript) -> Self {
        let claims = transcript
            .outputs
            .iter()
            .filter(|o| o.status == TaskStatus::Completed)
            .flat_map(|o| segment_claims(&o.response, &o.task_id))
            .collect();
        let mut report = AnnotatedReport {
            transcript,
            claims,
            annotations: BTreeMap::new(),
            counts: BTreeMap::new(),
        };
        report.recount();
        report
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn claims(&self) -> &[Claim] {
        &self.claims
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn claims_for<'a>(&'a self, task_id: &'a str) -> impl Iterator<Item = &'a Claim> + 'a {
        self.claims.iter().filter(move |c| c.source_task == task_id)
    }

    pub fn annotation(&self, claim_id: &str) -> Option<&SupportAnnotation> {
        self.annotations.get(claim_id)
    }

    pub fn annotations(&self) -> impl Iterator<Item = &SupportAnnotation> {
        self.annotations.values()
    }

    pub fn label_of(&self, claim_id: &str) -> SupportLabel {
        self.annotations
            .get(claim_id)
            .map_or(SupportLabel::Unreviewed, |a| a.label)
    }

    /// Label counts keyed by agent id.
    pub fn counts(&self) -> &BTreeMap<String, LabelCounts> {
        &self.counts
    }

    pub fn totals(&self) -> LabelCounts {
        let mut total = LabelCounts::default();
        for claim in &self.claims {
            total.bump(self.label_of(&claim.id));
        }
        total
    }

    /// Stores a label for an existing claim; a later call for the same claim
    /// replaces the earlier one.
    pub fn annotate(
        &mut self,
        claim_id: &str,
        label: SupportLabel,
        citations: Vec<String>,
        note: Option<String>,
    ) -> Result<(), ReportError> {
        if self.claim(claim_id).is_none() {
            return Err(ReportError::UnknownClaim(claim_id.to_string()));
        }
        if label.needs_citation() && citations.iter().all(|c| c.trim().is_empty()) {
            return Err(ReportError::MissingCitation {
                claim: claim_id.to_string(),
                label,
            });
        }
        self.annotations.insert(
            claim_id.to_string(),
            SupportAnnotation {
                claim_id: claim_id.to_string(),
                label,
                citations,
                note,
            },
        );
        self.recount();
        Ok(())
    }

    /// Adds a reviewer-chosen span as claim `claim_id`, replacing any
    /// unannotated sentence claims it overlaps. `claim_id` must be of the
    /// form `<task id>#<anything>`.
    pub fn define_claim(&mut self, claim_id: &str, (start, end): (usize, usize)) -> Result<(), ReportError> {
        let task = claim_id
            .split_once('#')
            .map(|(t, _)| t)
            .ok_or_else(|| ReportError::UnknownClaim(claim_id.to_string()))?;
        let output = self
            .transcript
            .outputs
            .iter()
            .find(|o| o.task_id == task && o.status == TaskStatus::Completed)
            .ok_or_else(|| ReportError::UnknownTask(task.to_string()))?;
        if start >= end || end > output.response.chars().count() {
            return Err(ReportError::BadSpan {
                task: task.to_string(),
                start,
                end,
            });
        }
        let text = char_slice(&output.response, (start, end)).to_string();
        let overlaps = |c: &Claim| c.source_task == task && c.span.0 < end && start < c.span.1;
        if let Some(other) = self
            .claims
            .iter()
            .find(|c| overlaps(c) && c.id != claim_id && self.annotations.contains_key(&c.id))
        {
            return Err(ReportError::OverlappingSpan {
                claim: claim_id.to_string(),
                other: other.id.clone(),
            });
        }
        self.claims.retain(|c| !overlaps(c) && c.id != claim_id);
        self.annotations.remove(claim_id);
        let claim = Claim {
            id: claim_id.to_string(),
            source_task: task.to_string(),
            text,
            span: (start, end),
        };
        let task_pos = |t: &str| self.transcript.outputs.iter().position(|o| o.task_id == t);
        let at = self
            .claims
            .iter()
            .position(|c| (task_pos(&c.source_task), c.span.0) > (task_pos(task), start))
            .unwrap_or(self.claims.len());
        self.claims.insert(at, claim);
        self.recount();
        Ok(())
    }

    /// Claim ids in `file` that match neither an existing claim nor a custom
    /// span defined by an earlier record.
    pub fn unknown_claims(&self, file: &AnnotationsFile) -> Vec<String> {
        let mut defined: Vec<&str> = Vec::new();
        let mut unknown = Vec::new();
        for rec in &file.annotations {
            if rec.span.is_some() {
                defined.push(&rec.claim_id);
            } else if self.claim(&rec.claim_id).is_none() && !defined.contains(&rec.claim_id.as_str()) {
                unknown.push(rec.claim_id.clone());
            }
        }
        unknown
    }

    /// Applies every record in order. Custom spans are defined before labels
    /// are attached.
    pub fn apply(&mut self, file: &AnnotationsFile) -> Result<(), ReportError> {
        if file.run_id != self.transcript.run_id {
            return Err(ReportError::RunMismatch {
                expected: self.transcript.run_id.clone(),
                found: file.run_id.clone(),
            });
        }
        for rec in &file.annotations {
            if let Some(span) = rec.span {
                self.define_claim(&rec.claim_id, span)?;
            }
            self.annotate(&rec.claim_id, rec.label, rec.citations.clone(), rec.note.clone())?;
        }
        Ok(())
    }

    fn recount(&mut self) {
        let agent_of: BTreeMap<&str, &str> = self
            .transcript
            .outputs
            .iter()
            .map(|o| (o.task_id.as_str(), o.agent_id.as_str()))
            .collect();
        let mut counts: BTreeMap<String, LabelCounts> = self
            .transcript
            .outputs
            .iter()
            .map(|o| (o.agent_id.clone(), LabelCounts::default()))
            .collect();
        for claim in &self.claims {
            let agent = agent_of[claim.source_task.as_str()];
            counts
                .get_mut(agent)
                .expect("every output has an agent")
                .bump(self.label_of(&claim.id));
        }
        self.counts = counts;
    }

    /// Plain-text per-agent label table.
    pub fn summary_text(&self) -> String {
        let mut out = String::from("agent\tsupported\tunsupported\tcontradicted\tunreviewed\n");
        for o in &self.transcript.outputs {
            let c = self.counts[&o.agent_id];
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                o.agent_id, c.supported, c.unsupported, c.contradicted, c.unreviewed
            ));
        }
        out
    }
}
