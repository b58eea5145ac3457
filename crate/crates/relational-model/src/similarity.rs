//! Token-set similarity between free text and row content, used to
//! pick the rows (and, elsewhere, the demonstrations) most related to
//! a question.

use std::collections::BTreeSet;

use crate::database::Table;

/// Lower-cases the text and splits it on runs of non-alphanumeric
/// characters; empty tokens are dropped.
pub fn tokenize(text: &str) -> BTreeSet<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Jaccard similarity of two token sets; 0 when both are empty.
pub fn jaccard_tokens(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let intersection = a.intersection(b).count();
    let union = a.len() + b.len() - intersection;
    if union == 0 {
        0.0
    } else {
        intersection as f64 / union as f64
    }
}

/// Jaccard similarity of the token sets of two texts.
pub fn jaccard(a: &str, b: &str) -> f64 {
    jaccard_tokens(&tokenize(a), &tokenize(b))
}

/// Token set of one row: the union over its stringified cells.
pub fn row_tokens(table: &Table, row_index: usize) -> BTreeSet<String> {
    let mut tokens = BTreeSet::new();
    for value in &table.rows[row_index] {
        tokens.extend(tokenize(&value.to_cell_string()));
    }
    tokens
}

/// Indices of the `min(k, rows)` rows most similar to the question,
/// ranked by Jaccard similarity descending; ties keep file order.
/// With an empty question (or all-zero scores) this is the first k
/// rows in file order.
pub fn select_relevant_rows(table: &Table, question: &str, k: usize) -> Vec<usize> {
    let question_tokens = tokenize(question);
    let mut scored: Vec<(usize, f64)> = (0..table.rows.len())
        .map(|i| (i, jaccard_tokens(&question_tokens, &row_tokens(table, i))))
        .collect();
    scored.sort_by(|(ia, sa), (ib, sb)| sb.total_cmp(sa).then(ia.cmp(ib)));
    scored.truncate(k.min(table.rows.len()));
    scored.into_iter().map(|(i, _)| i).collect()
}
