//! Pulls the query line out of model prose.

/// The response held no query line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no VISUALIZE line in model output")]
pub struct ExtractionError;

/// Finds the query in a completion: code fences are stripped, the
/// first line starting (case-insensitively) with `VISUALIZE` is
/// taken, and trailing punctuation or fence leftovers are trimmed.
/// Parsing is the caller's job; this only isolates the candidate.
pub fn extract_vql(response: &str) -> Result<String, ExtractionError> {
    for line in response.lines() {
        let line = line.trim().trim_start_matches("```").trim();
        if line.len() >= 9 && line[..9].eq_ignore_ascii_case("VISUALIZE") {
            let cleaned = line
                .trim_end_matches("```")
                .trim_end_matches(|c: char| c == ';' || c == '.' || c.is_whitespace());
            return Ok(cleaned.to_string());
        }
    }
    Err(ExtractionError)
}
