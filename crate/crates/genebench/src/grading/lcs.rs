//! Longest common substring over normalized text.

/// Lowercases, collapses whitespace runs to single spaces, and trims. All
/// substring comparison happens on this normal form.
pub fn normalize_for_match(text: &str) -> String {
    text.to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcsMatch {
    pub length: usize,
    /// The matched run, taken from the normalized form of `a`.
    pub substring: String,
}

/// The maximal-length contiguous character run occurring in both inputs,
/// compared case-insensitively after whitespace normalization. Ties are
/// broken by the earliest start in `a`. Empty input gives length 0.
pub fn longest_common_substring(a: &str, b: &str) -> LcsMatch {
    let a_chars: Vec<char> = normalize_for_match(a).chars().collect();
    let b_chars: Vec<char> = normalize_for_match(b).chars().collect();
    if a_chars.is_empty() || b_chars.is_empty() {
        return LcsMatch {
            length: 0,
            substring: String::new(),
        };
    }

    // suffix[j] = length of the common run ending at a[i], b[j].
    let mut prev = vec![0usize; b_chars.len() + 1];
    let mut curr = vec![0usize; b_chars.len() + 1];
    let mut best_len = 0usize;
    let mut best_end = 0usize; // exclusive end in a
    for (i, &ac) in a_chars.iter().enumerate() {
        for (j, &bc) in b_chars.iter().enumerate() {
            curr[j + 1] = if ac == bc { prev[j] + 1 } else { 0 };
            if curr[j + 1] > best_len {
                best_len = curr[j + 1];
                best_end = i + 1;
            }
        }
        std::mem::swap(&mut prev, &mut curr);
    }

    LcsMatch {
        length: best_len,
        substring: a_chars[best_end - best_len..best_end].iter().collect(),
    }
}

/// Longest common subsequence length over the same normal form; the
/// alternative scorer selectable in the grader config.
pub fn longest_common_subsequence_len(a: &str, b: &str) -> usize {
    let a_chars: Vec<char> = normalize_for_match(a).chars().collect();
    let b_chars: Vec<char> = normalize_for_match(b).chars().collect();
    let mut prev = vec![0usize; b_chars.len() + 1];
    let mut curr = vec![0usize; b_chars.len() + 1];
    for &ac in &a_chars {
        for (j, &bc) in b_chars.iter().enumerate() {
            curr[j + 1] = if ac == bc {
                prev[j] + 1
            } else {
                curr[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
        curr.fill(0);
    }
    prev[b_chars.len()]
}
