use std::collections::BTreeSet;

use super::{AnnotatedReport, Claim, SupportLabel};
use crate::vsg::TaskStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Html,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Markdown => "md",
            Format::Html => "html",
        }
    }
}

pub fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

fn css_class(label: SupportLabel) -> Option<&'static str> {
    match label {
        SupportLabel::Supported => Some("claim-supported"),
        SupportLabel::Unsupported => Some("claim-unsupported"),
        SupportLabel::Contradicted => Some("claim-contradicted"),
        SupportLabel::Unreviewed => None,
    }
}

fn css_rule(label: SupportLabel) -> &'static str {
    match label {
        SupportLabel::Supported => ".claim-supported { background-color: #b9f6ca; }",
        SupportLabel::Unsupported => ".claim-unsupported { background-color: #fff59d; }",
        SupportLabel::Contradicted => ".claim-contradicted { background-color: #ffab91; }",
        SupportLabel::Unreviewed => "",
    }
}

/// Source text with labelled claims wrapped. `esc` is applied to every
/// piece of source text; wrappers are injected unescaped.
fn annotate_text(report: &AnnotatedReport, task_id: &str, text: &str, esc: fn(&str) -> String) -> String {
    let chars: Vec<char> = text.chars().collect();
    let piece = |a: usize, b: usize| esc(&chars[a..b].iter().collect::<String>());
    let claims: Vec<&Claim> = report.claims_for(task_id).collect();
    let mut out = String::new();
    let mut pos = 0;
    for claim in claims {
        let Some(ann) = report.annotation(&claim.id) else { continue };
        let Some(class) = css_class(ann.label) else { continue };
        let (start, end) = claim.span;
        out.push_str(&piece(pos, start));
        out.push_str(&format!("<span class=\"{class}\" data-claim=\"{}\"", escape_html(&claim.id)));
        if let Some(note) = &ann.note {
            out.push_str(&format!(" title=\"{}\"", escape_html(note)));
        }
        out.push('>');
        out.push_str(&piece(start, end));
        out.push_str("</span>");
        if !ann.citations.is_empty() {
            out.push_str(&format!(
                "<span class=\"citations\"> [{}]</span>",
                escape_html(&ann.citations.join("; "))
            ));
        }
        pos = end;
    }
    out.push_str(&piece(pos, chars.len()));
    out
}

fn status_note(status: TaskStatus, error: Option<&str>) -> Option<String> {
    match status {
        TaskStatus::Completed => None,
        TaskStatus::Failed => Some(format!("Task failed: {}", error.unwrap_or("unknown error"))),
        TaskStatus::Skipped => Some(format!("Task skipped: {}", error.unwrap_or("upstream failure"))),
    }
}

fn render_markdown(report: &AnnotatedReport) -> String {
    let t = report.transcript();
    let mut out = format!("# Study group report {}\n", t.run_id);
    for o in &t.outputs {
        out.push_str(&format!("\n## {} ({})\n\n", o.agent_name, o.task_id));
        if let Some(note) = status_note(o.status, o.error.as_deref()) {
            out.push_str(&format!("_{note}_\n"));
            continue;
        }
        out.push_str(&annotate_text(report, &o.task_id, &o.response, str::to_string));
        out.push('\n');
    }
    out
}

fn render_html(report: &AnnotatedReport) -> String {
    let t = report.transcript();
    let used: BTreeSet<SupportLabel> = report.annotations().map(|a| a.label).collect();
    let title = escape_html(&format!("Study group report {}", t.run_id));
    let mut out = String::from("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    out.push_str(&format!("<title>{title}</title>\n<style>\n"));
    out.push_str(".output { white-space: pre-wrap; }\n.citations { font-size: smaller; }\n");
    for label in used.iter().filter(|l| css_class(**l).is_some()) {
        out.push_str(css_rule(*label));
        out.push('\n');
    }
    out.push_str("</style>\n</head>\n<body>\n");
    out.push_str(&format!("<h1>{title}</h1>\n"));
    for o in &t.outputs {
        out.push_str(&format!(
            "<section>\n<h2>{} <small>{}</small></h2>\n",
            escape_html(&o.agent_name),
            escape_html(&o.task_id)
        ));
        match status_note(o.status, o.error.as_deref()) {
            Some(note) => out.push_str(&format!("<p class=\"status\">{}</p>\n", escape_html(&note))),
            None => out.push_str(&format!(
                "<div class=\"output\" data-task=\"{}\">{}</div>\n",
                escape_html(&o.task_id),
                annotate_text(report, &o.task_id, &o.response, escape_html)
            )),
        }
        out.push_str("</section>\n");
    }
    out.push_str("</body>\n</html>\n");
    out
}

/// One section per transcript output. Supported, unsupported and
/// contradicted claims are wrapped in `claim-*` spans followed by their
/// citations; unreviewed text passes through untouched.
pub fn render(report: &AnnotatedReport, format: Format) -> String {
    match format {
        Format::Markdown => render_markdown(report),
        Format::Html => render_html(report),
    }
}
