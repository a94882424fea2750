//! Structural rules and the binary structural grader.
//!
//! Rules are mechanically checkable against plain text and live in a
//! declarative spec file, one rule per line:
//!
//! ```text
//! single_paragraph
//! sentence_count_range 3 8
//! starts_with_token GLI1
//! no_list_markers
//! max_chars 1200
//! contains_section Function:
//! ```

use std::path::Path;

use super::GradingError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuralRule {
    /// No blank-line paragraph break anywhere in the trimmed output.
    SingleParagraph,
    /// Sentence count within `[min, max]`, inclusive.
    SentenceCountRange { min: usize, max: usize },
    /// First whitespace token equals the given token, case-insensitively,
    /// ignoring surrounding punctuation.
    StartsWithToken(String),
    /// No line starts with a bullet or numbered-list marker.
    NoListMarkers,
    /// At most this many characters.
    MaxChars(usize),
    /// The given tag occurs somewhere in the output, case-insensitively.
    ContainsSection(String),
}

/// A non-empty, ordered list of structural rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSpec {
    rules: Vec<StructuralRule>,
}

impl PromptSpec {
    pub fn new(rules: Vec<StructuralRule>) -> Result<Self, GradingError> {
        if rules.is_empty() {
            return Err(GradingError::EmptyRuleSet);
        }
        Ok(Self { rules })
    }

    pub fn rules(&self) -> &[StructuralRule] {
        &self.rules
    }

    /// Parses the one-rule-per-line format. Blank lines and `#` comments
    /// are skipped.
    pub fn parse(text: &str) -> Result<Self, GradingError> {
        let mut rules = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            rules.push(parse_rule(line)?);
        }
        Self::new(rules)
    }

    pub fn from_file(path: &Path) -> Result<Self, GradingError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

fn parse_rule(line: &str) -> Result<StructuralRule, GradingError> {
    let (name, args) = match line.split_once(char::is_whitespace) {
        Some((n, a)) => (n, a.trim()),
        None => (line, ""),
    };
    let bad = |reason: &str| GradingError::BadRuleArgs {
        rule: name.to_string(),
        reason: reason.to_string(),
    };
    match name {
        "single_paragraph" => Ok(StructuralRule::SingleParagraph),
        "no_list_markers" => Ok(StructuralRule::NoListMarkers),
        "sentence_count_range" => {
            let mut parts = args.split_whitespace();
            let min = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| bad("expected: sentence_count_range <min> <max>"))?;
            let max = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| bad("expected: sentence_count_range <min> <max>"))?;
            if min > max {
                return Err(bad("min must not exceed max"));
            }
            Ok(StructuralRule::SentenceCountRange { min, max })
        }
        "starts_with_token" => {
            if args.is_empty() {
                return Err(bad("expected: starts_with_token <token>"));
            }
            Ok(StructuralRule::StartsWithToken(args.to_string()))
        }
        "max_chars" => args
            .parse()
            .map(StructuralRule::MaxChars)
            .map_err(|_| bad("expected: max_chars <n>")),
        "contains_section" => {
            if args.is_empty() {
                return Err(bad("expected: contains_section <tag>"));
            }
            Ok(StructuralRule::ContainsSection(args.to_string()))
        }
        other => Err(GradingError::UnknownRule(other.to_string())),
    }
}

/// Returns 1 iff every rule passes. Rules are independent, so evaluation
/// order cannot change the result.
pub fn grade_structural(output: &str, spec: &PromptSpec) -> u8 {
    spec.rules().iter().all(|r| rule_passes(r, output)) as u8
}

fn rule_passes(rule: &StructuralRule, text: &str) -> bool {
    match rule {
        StructuralRule::SingleParagraph => !has_paragraph_break(text.trim()),
        StructuralRule::SentenceCountRange { min, max } => {
            let count = sentence_count(text);
            count >= *min && count <= *max
        }
        StructuralRule::StartsWithToken(token) => first_token(text)
            .map(|t| t.eq_ignore_ascii_case(token.trim_matches(is_edge_punct)))
            .unwrap_or(false),
        StructuralRule::NoListMarkers => !text.lines().any(|l| is_list_line(l.trim_start())),
        StructuralRule::MaxChars(n) => text.chars().count() <= *n,
        StructuralRule::ContainsSection(tag) => {
            text.to_lowercase().contains(&tag.to_lowercase())
        }
    }
}

fn has_paragraph_break(text: &str) -> bool {
    let mut newlines = 0usize;
    for c in text.chars() {
        match c {
            '\n' => {
                newlines += 1;
                if newlines >= 2 {
                    return true;
                }
            }
            c if c.is_whitespace() => {}
            _ => newlines = 0,
        }
    }
    false
}

/// Counts sentences by terminator runs (`.`, `!`, `?` followed by
/// whitespace or end of text); a trailing unterminated fragment counts.
pub(crate) fn sentence_count(text: &str) -> usize {
    let chars: Vec<char> = text.chars().collect();
    let mut count = 0;
    let mut in_sentence = false;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let next_non_term = chars[i..]
                .iter()
                .position(|&c| !matches!(c, '.' | '!' | '?'))
                .map(|off| i + off);
            let boundary = match next_non_term {
                None => true,
                Some(j) => chars[j].is_whitespace(),
            };
            if boundary && in_sentence {
                count += 1;
                in_sentence = false;
            }
            i = next_non_term.unwrap_or(chars.len());
        } else {
            if !c.is_whitespace() {
                in_sentence = true;
            }
            i += 1;
        }
    }
    if in_sentence {
        count += 1;
    }
    count
}

fn is_edge_punct(c: char) -> bool {
    !c.is_alphanumeric()
}

fn first_token(text: &str) -> Option<String> {
    text.split_whitespace()
        .next()
        .map(|t| t.trim_matches(is_edge_punct).to_string())
        .filter(|t| !t.is_empty())
}

fn is_list_line(line: &str) -> bool {
    if line.starts_with("- ") || line.starts_with("* ") || line.starts_with("• ") || line == "-" {
        return true;
    }
    // Numbered markers: "1. ", "12) ".
    let digits: String = line.chars().take_while(char::is_ascii_digit).collect();
    if digits.is_empty() {
        return false;
    }
    let rest = &line[digits.len()..];
    rest.starts_with(". ") || rest.starts_with(") ")
}
