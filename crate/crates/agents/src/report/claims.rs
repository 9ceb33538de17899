use serde::{Deserialize, Serialize};

/// A candidate scientific claim: a span of one task's output.
/// Offsets count Unicode scalar values, end exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub source_task: String,
    pub text: String,
    pub span: (usize, usize),
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '?' | '!')
}

/// Sentence spans in char offsets. A sentence ends at `.`, `?` or `!` when
/// followed by whitespace and then an uppercase letter or the end of text.
/// Leading and trailing whitespace belongs to the gaps between spans.
pub fn sentence_spans(text: &str) -> Vec<(usize, usize)> {
    let chars: Vec<char> = text.chars().collect();
    let mut spans = Vec::new();
    let mut start = None;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if start.is_none() {
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            start = Some(i);
        }
        if is_terminal(c) {
            let mut j = i + 1;
            let boundary = if j == chars.len() {
                true
            } else if chars[j].is_whitespace() {
                while j < chars.len() && chars[j].is_whitespace() {
                    j += 1;
                }
                j == chars.len() || chars[j].is_uppercase()
            } else {
                false
            };
            if boundary {
                spans.push((start.take().unwrap(), i + 1));
                i = j;
                continue;
            }
        }
        i += 1;
    }
    if let Some(s) = start {
        let mut end = chars.len();
        while end > s && chars[end - 1].is_whitespace() {
            end -= 1;
        }
        spans.push((s, end));
    }
    spans
}

/// Slice by char offsets.
pub fn char_slice(text: &str, (start, end): (usize, usize)) -> &str {
    let byte = |n: usize| text.char_indices().nth(n).map_or(text.len(), |(b, _)| b);
    &text[byte(start)..byte(end)]
}

/// Splits one output into sentence claims with ids `<task>#1`, `<task>#2`, ...
pub fn segment_claims(text: &str, task_id: &str) -> Vec<Claim> {
    sentence_spans(text)
        .into_iter()
        .enumerate()
        .map(|(n, span)| Claim {
            id: format!("{task_id}#{}", n + 1),
            source_task: task_id.to_string(),
            text: char_slice(text, span).to_string(),
            span,
        })
        .collect()
}
