use std::collections::HashMap;

use super::{MetricDetail, MetricResult, NgramStat, TokenSequence};

/// Single-reference BLEU: geometric mean of clipped modified n-gram
/// precisions for n = 1..=`max_n`, times a brevity penalty
/// `exp(1 - |ref|/|cand|)` when the candidate is shorter than the reference.
///
/// A zero higher-order precision (n > 1) is smoothed to
/// `1 / (total_n + 1)`; a zero unigram precision pins the score to 0.
/// Each order's precision is additionally clamped to be no larger than the
/// previous order's, which keeps the final value bounded by the unigram
/// precision.
///
/// An empty candidate scores 0 with `detail.empty_candidate` set.
pub fn bleu(candidate: &TokenSequence, reference: &TokenSequence, max_n: usize) -> MetricResult {
    assert!(max_n >= 1, "bleu: max_n must be at least 1");
    if candidate.is_empty() {
        return MetricResult {
            value: 0.0,
            detail: MetricDetail {
                empty_candidate: true,
                ..MetricDetail::default()
            },
        };
    }

    let cand = candidate.tokens();
    let refr = reference.tokens();

    let mut per_n = Vec::with_capacity(max_n);
    let mut log_sum = 0.0;
    let mut any_zero = false;
    let mut prev = 1.0f64;
    for n in 1..=max_n {
        let (matched, total) = clipped_matches(cand, refr, n);
        let (mut value, smoothed) = if matched > 0 {
            (matched as f64 / total as f64, false)
        } else if n == 1 {
            (0.0, false)
        } else {
            (1.0 / (total as f64 + 1.0), true)
        };
        if value > prev {
            value = prev;
        }
        if value == 0.0 {
            any_zero = true;
        } else {
            log_sum += value.ln();
        }
        prev = value;
        per_n.push(NgramStat {
            n,
            matched,
            total,
            value,
            smoothed,
        });
    }

    let brevity_penalty = if cand.len() < refr.len() {
        (1.0 - refr.len() as f64 / cand.len() as f64).exp()
    } else {
        1.0
    };

    let value = if any_zero {
        0.0
    } else {
        brevity_penalty * (log_sum / max_n as f64).exp()
    };

    MetricResult {
        value,
        detail: MetricDetail {
            per_n,
            brevity_penalty: Some(brevity_penalty),
            empty_candidate: false,
        },
    }
}

/// Clipped n-gram matches of `cand` against `refr`: each candidate n-gram
/// occurrence counts as a match while the reference still has unconsumed
/// occurrences of it. Returns `(matched, total candidate n-grams)`.
fn clipped_matches(cand: &[String], refr: &[String], n: usize) -> (usize, usize) {
    if cand.len() < n {
        return (0, 0);
    }
    let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
    if refr.len() >= n {
        for gram in refr.windows(n) {
            *ref_counts.entry(gram).or_insert(0) += 1;
        }
    }
    let mut matched = 0;
    let mut total = 0;
    for gram in cand.windows(n) {
        total += 1;
        if let Some(remaining) = ref_counts.get_mut(gram) {
            if *remaining > 0 {
                *remaining -= 1;
                matched += 1;
            }
        }
    }
    (matched, total)
}

#[cfg(test)]
mod tests {
    use super::super::tokenize;
    use super::*;

    #[test]
    fn identity_is_one() {
        let x = tokenize("the tumor suppressor regulates cell cycle arrest");
        assert_eq!(bleu(&x, &x, 4).value, 1.0);
    }

    #[test]
    fn identity_is_one_for_short_candidates() {
        // Shorter than max_n: every absent order smooths to 1.
        let x = tokenize("kinase");
        assert_eq!(bleu(&x, &x, 4).value, 1.0);
    }

    #[test]
    fn disjoint_vocabulary_is_zero() {
        let c = tokenize("alpha beta gamma");
        let r = tokenize("delta epsilon zeta");
        assert_eq!(bleu(&c, &r, 4).value, 0.0);
    }

    #[test]
    fn empty_candidate_flags_and_scores_zero() {
        let c = TokenSequence::default();
        let r = tokenize("anything");
        let res = bleu(&c, &r, 4);
        assert_eq!(res.value, 0.0);
        assert!(res.detail.empty_candidate);
    }

    /// Golden value worked by hand:
    /// candidate = [the, cat, sat], reference = [the, cat, sat, on, the, mat].
    /// 1-grams: the/cat/sat all matched → p1 = 3/3 = 1.
    /// 2-grams: (the,cat), (cat,sat) both matched → p2 = 2/2 = 1.
    /// Brevity penalty = exp(1 - 6/3) = exp(-1).
    /// BLEU = exp(-1) · (1·1)^(1/2) = exp(-1).
    #[test]
    fn brevity_penalty_golden_value() {
        let c = tokenize("the cat sat");
        let r = tokenize("the cat sat on the mat");
        let res = bleu(&c, &r, 2);
        let expected = (-1.0f64).exp();
        assert!((res.value - expected).abs() < 1e-15, "got {}", res.value);
        assert_eq!(res.detail.brevity_penalty, Some(expected));
    }

    #[test]
    fn smoothing_applies_to_zero_bigrams_only() {
        // Unigrams overlap but no bigram does.
        let c = tokenize("cat the");
        let r = tokenize("the cat");
        let res = bleu(&c, &r, 2);
        assert!(res.detail.per_n[1].smoothed);
        assert!(!res.detail.per_n[0].smoothed);
        // p1 = 1, p2 smoothed = 1/(1+1) = 0.5, BP = 1.
        assert!((res.value - (0.5f64).sqrt()).abs() < 1e-15);
    }

    proptest::proptest! {
        /// The score never exceeds the unigram precision: the per-order
        /// clamp keeps the precision chain non-increasing and the brevity
        /// penalty is at most 1.
        #[test]
        fn value_never_exceeds_unigram_precision(
            cand in proptest::collection::vec("[a-c]", 1..20),
            refr in proptest::collection::vec("[a-c]", 0..20),
        ) {
            let candidate = TokenSequence::from_tokens(cand);
            let reference = TokenSequence::from_tokens(refr);
            let res = bleu(&candidate, &reference, 4);
            let p1 = res.detail.per_n[0].value;
            proptest::prop_assert!(res.value <= p1 + 1e-12);
        }

        /// Bounds: always within [0, 1].
        #[test]
        fn value_is_bounded(
            cand in proptest::collection::vec("[a-d]", 0..16),
            refr in proptest::collection::vec("[a-d]", 0..16),
        ) {
            let res = bleu(
                &TokenSequence::from_tokens(cand),
                &TokenSequence::from_tokens(refr),
                4,
            );
            proptest::prop_assert!((0.0..=1.0).contains(&res.value));
        }
    }
}
