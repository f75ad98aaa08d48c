//! Global alignment of two annotations' semantic token sequences.
//!
//! Annotators of the same audio disagree mostly in the stuttering material;
//! the semantic words are the stable spine. Tokens are compared
//! case-insensitively with unit costs (match 0, mismatch 1, gap 1), the
//! classic Needleman–Wunsch recurrence over the full matrix.

use crate::grammar::Transcript;
use crate::transforms::to_semantic;

/// An aligned pair sequence over two token lists. `None` on a side is a
/// gap. Projecting the `Some` indices out of either column yields
/// `0..token_count` for that side, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub pairs: Vec<(Option<usize>, Option<usize>)>,
    pub cost: usize,
}

/// Lowercased semantic tokens of a transcript, flattened across segments.
pub fn semantic_tokens(transcript: &Transcript) -> Vec<String> {
    to_semantic(transcript)
        .iter()
        .flat_map(|line| line.split_whitespace().map(str::to_string))
        .collect()
}

/// Minimum-cost global alignment of the two transcripts' semantic tokens.
///
/// Ties are broken deterministically: match, then mismatch, then a gap in
/// `a`, then a gap in `b`.
pub fn align(a: &Transcript, b: &Transcript) -> Alignment {
    let ta = semantic_tokens(a);
    let tb = semantic_tokens(b);
    align_tokens(&ta, &tb)
}

pub(crate) fn align_tokens(ta: &[String], tb: &[String]) -> Alignment {
    let n = ta.len();
    let m = tb.len();
    // cost[i][j] = optimal cost of aligning the suffixes ta[i..], tb[j..],
    // so the walk below can apply the preference order left to right.
    let mut cost = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in cost.iter_mut().enumerate() {
        row[m] = n - i;
    }
    for (j, cell) in cost[n].iter_mut().enumerate() {
        *cell = m - j;
    }
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            let sub = cost[i + 1][j + 1] + usize::from(!tokens_match(&ta[i], &tb[j]));
            let gap_a = cost[i][j + 1] + 1;
            let gap_b = cost[i + 1][j] + 1;
            cost[i][j] = sub.min(gap_a).min(gap_b);
        }
    }

    let mut pairs = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let here = cost[i][j];
        let matched = i < n && j < m && tokens_match(&ta[i], &tb[j]);
        // preference under ties: match, mismatch, gap in a, gap in b
        if i < n && j < m && here == cost[i + 1][j + 1] + usize::from(!matched) {
            pairs.push((Some(i), Some(j)));
            i += 1;
            j += 1;
        } else if j < m && here == cost[i][j + 1] + 1 {
            pairs.push((None, Some(j)));
            j += 1;
        } else {
            pairs.push((Some(i), None));
            i += 1;
        }
    }
    Alignment {
        pairs,
        cost: cost[0][0],
    }
}

fn tokens_match(a: &str, b: &str) -> bool {
    a.to_lowercase() == b.to_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse, ParseOptions};

    fn t(s: &str) -> Transcript {
        parse(s, &ParseOptions::default())
            .expect("parse")
            .transcript
    }

    fn strings(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    /// Exhaustive minimum-cost oracle over all alignments, for short inputs.
    fn brute_force_cost(a: &[String], b: &[String]) -> usize {
        fn go(a: &[String], b: &[String]) -> usize {
            match (a.split_first(), b.split_first()) {
                (None, None) => 0,
                (Some(_), None) => a.len(),
                (None, Some(_)) => b.len(),
                (Some((ha, ra)), Some((hb, rb))) => {
                    let sub = go(ra, rb) + usize::from(ha.to_lowercase() != hb.to_lowercase());
                    let ga = go(a, rb) + 1;
                    let gb = go(ra, b) + 1;
                    sub.min(ga).min(gb)
                }
            }
        }
        go(a, b)
    }

    #[test]
    fn self_alignment_is_all_matches() {
        let tr = t("H/b How are you");
        let alignment = align(&tr, &tr);
        assert_eq!(alignment.cost, 0);
        assert!(alignment
            .pairs
            .iter()
            .enumerate()
            .all(|(k, p)| *p == (Some(k), Some(k))));
    }

    #[test]
    fn single_gap_example() {
        // semantic sides of the two "How" annotations
        let a = t("H/b How");
        let b = t("How");
        let alignment = align(&a, &b);
        assert_eq!(alignment.cost, 1);
        let gaps = alignment
            .pairs
            .iter()
            .filter(|(x, y)| x.is_none() || y.is_none())
            .count();
        assert_eq!(gaps, 1);
    }

    #[test]
    fn both_empty() {
        let alignment = align(&Transcript::default(), &Transcript::default());
        assert_eq!(alignment.cost, 0);
        assert!(alignment.pairs.is_empty());
    }

    #[test]
    fn cost_matches_exhaustive_oracle() {
        let cases: [(&[&str], &[&str]); 5] = [
            (&["a", "b", "c"], &["a", "c"]),
            (&["a", "b"], &["b", "a"]),
            (&["x", "y", "z"], &["u", "v"]),
            (&["one"], &[]),
            (&["How", "are", "you"], &["how", "you", "are"]),
        ];
        for (a, b) in cases {
            let ta = strings(a);
            let tb = strings(b);
            assert_eq!(
                align_tokens(&ta, &tb).cost,
                brute_force_cost(&ta, &tb),
                "{a:?} vs {b:?}"
            );
        }
    }

    #[test]
    fn cost_is_symmetric() {
        let a = t("fr[o-o-o-o-]/som working late");
        let b = t("from work");
        assert_eq!(align(&a, &b).cost, align(&b, &a).cost);
    }

    #[test]
    fn projections_reproduce_token_sequences() {
        let a = strings(&["the", "quick", "fox"]);
        let b = strings(&["the", "slow", "red", "fox"]);
        let alignment = align_tokens(&a, &b);
        let proj_a: Vec<usize> = alignment.pairs.iter().filter_map(|p| p.0).collect();
        let proj_b: Vec<usize> = alignment.pairs.iter().filter_map(|p| p.1).collect();
        assert_eq!(proj_a, (0..a.len()).collect::<Vec<_>>());
        assert_eq!(proj_b, (0..b.len()).collect::<Vec<_>>());
    }

    #[test]
    fn tie_break_prefers_match_then_gap_in_a() {
        // "x" vs "x x": either pairing has cost 1; the fixed order must pick
        // the match first, then the gap in a.
        let a = strings(&["x"]);
        let b = strings(&["x", "x"]);
        let alignment = align_tokens(&a, &b);
        assert_eq!(alignment.cost, 1);
        assert_eq!(alignment.pairs, vec![(Some(0), Some(0)), (None, Some(1))]);
    }
}
