use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

pub const MIN_CHOICES: usize = 2;
pub const MAX_CHOICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("choice count must be in {MIN_CHOICES}..={MAX_CHOICES}, got {0}")]
    BadChoiceCount(usize),
    #[error("no valid choice letter in response")]
    NoValidLetter,
}

struct Ladder {
    own_line: Regex,
    answer: Regex,
    punctuated: Regex,
    standalone: Regex,
}

fn ladder() -> &'static Ladder {
    static L: OnceLock<Ladder> = OnceLock::new();
    L.get_or_init(|| Ladder {
        own_line: Regex::new(r"^[\s*_(\[]*([A-H])[\s*_)\].:]*$").unwrap(),
        answer: Regex::new(r"\b(?:Answer|ANSWER|answer)(?:\s+is)?\s*[:：]?\s*[*_(\[]*([A-H])\b")
            .unwrap(),
        punctuated: Regex::new(r"\b([A-H])[.)]").unwrap(),
        standalone: Regex::new(r"\b([A-H])\b").unwrap(),
    })
}

/// Letters are uppercase only. Ladder, first rung that yields a valid letter wins:
/// 1. the first line that is a bare letter or carries "Answer: X";
/// 2. the first letter followed by "." or ")";
/// 3. the last standalone letter.
pub fn extract_choice(text: &str, n_choices: usize) -> Result<usize, ExtractError> {
    if !(MIN_CHOICES..=MAX_CHOICES).contains(&n_choices) {
        return Err(ExtractError::BadChoiceCount(n_choices));
    }
    let l = ladder();
    let valid = |re: &Regex, s: &str| -> Vec<usize> {
        re.captures_iter(s)
            .map(|c| (c[1].as_bytes()[0] - b'A') as usize)
            .filter(|&i| i < n_choices)
            .collect()
    };
    for line in text.lines() {
        if let Some(&i) = valid(&l.own_line, line).first() {
            return Ok(i);
        }
        if let Some(&i) = valid(&l.answer, line).first() {
            return Ok(i);
        }
    }
    if let Some(&i) = valid(&l.punctuated, text).first() {
        return Ok(i);
    }
    valid(&l.standalone, text)
        .last()
        .copied()
        .ok_or(ExtractError::NoValidLetter)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_examples() {
        assert_eq!(extract_choice("Answer: C", 4), Ok(2));
        assert_eq!(extract_choice("I think B. because the chart", 4), Ok(1));
        assert_eq!(
            extract_choice("none of these", 4),
            Err(ExtractError::NoValidLetter)
        );
        assert_eq!(extract_choice("Reasoning...\n**D**\n", 4), Ok(3));
        assert_eq!(
            extract_choice("Option (B) looks right, though A is tempting", 4),
            Ok(1)
        );
        assert_eq!(extract_choice("between A and C, C", 4), Ok(2));
    }

    #[test]
    fn out_of_range_letters_are_skipped() {
        assert_eq!(extract_choice("Answer: F\nAnswer: B", 4), Ok(1));
        assert_eq!(extract_choice("E", 4), Err(ExtractError::NoValidLetter));
        assert_eq!(extract_choice("a", 4), Err(ExtractError::NoValidLetter));
    }

    #[test]
    fn choice_count_bounds() {
        assert_eq!(extract_choice("A", 1), Err(ExtractError::BadChoiceCount(1)));
        assert_eq!(extract_choice("A", 9), Err(ExtractError::BadChoiceCount(9)));
    }
}
