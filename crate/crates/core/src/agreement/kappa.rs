//! Chance-corrected agreement: Cohen's kappa for two raters, Fleiss' kappa
//! for any fixed number of raters.

use super::AgreementError;
use std::fmt;

/// A kappa statistic. Expected agreement of exactly 1 (all mass in a single
/// category) leaves the statistic undefined; that case is an explicit value
/// here rather than a silent 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    Value(f64),
    NotDefined,
}

impl Kappa {
    pub fn value(self) -> Option<f64> {
        match self {
            Kappa::Value(v) => Some(v),
            Kappa::NotDefined => None,
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Value(v) => {
                // keep float noise from printing as -0.0000
                let rounded = (v * 10_000.0).round() / 10_000.0;
                let rounded = if rounded == 0.0 { 0.0 } else { rounded };
                write!(f, "{rounded:.4}")
            }
            Kappa::NotDefined => write!(f, "not defined"),
        }
    }
}

/// Cohen's kappa over two binary label vectors:
/// κ = (p_o − p_e) / (1 − p_e), with p_o the observed agreement fraction
/// and p_e the chance agreement from the raters' marginals.
///
/// Returns exactly 1.0 for perfect agreement whenever both categories
/// occur, and [`Kappa::NotDefined`] when p_e == 1 (both raters constant and
/// identical).
pub fn cohen_kappa(x: &[bool], y: &[bool]) -> Result<Kappa, AgreementError> {
    if x.len() != y.len() {
        return Err(AgreementError::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(AgreementError::EmptyInput);
    }
    let n = x.len() as f64;
    let observed = x.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / n;
    let x_pos = x.iter().filter(|&&v| v).count() as f64 / n;
    let y_pos = y.iter().filter(|&&v| v).count() as f64 / n;
    let expected = x_pos * y_pos + (1.0 - x_pos) * (1.0 - y_pos);
    if expected >= 1.0 {
        return Ok(Kappa::NotDefined);
    }
    Ok(Kappa::Value((observed - expected) / (1.0 - expected)))
}

/// Fleiss' kappa over a per-clip category-count matrix with two categories
/// (absent, present). Every row must sum to `raters`.
///
/// κ = (P̄ − P̄_e) / (1 − P̄_e), where P_i = (Σ_j n_ij² − n) / (n(n−1)) is
/// the per-clip rater-pair agreement and P̄_e = Σ_j p_j² from the pooled
/// category proportions.
pub fn fleiss_kappa(counts: &[[usize; 2]], raters: usize) -> Result<Kappa, AgreementError> {
    if counts.is_empty() {
        return Err(AgreementError::EmptyInput);
    }
    if raters < 2 {
        return Err(AgreementError::RowSumMismatch {
            row: 0,
            expected: 2,
            found: raters,
        });
    }
    for (row, cell) in counts.iter().enumerate() {
        let sum = cell[0] + cell[1];
        if sum != raters {
            return Err(AgreementError::RowSumMismatch {
                row,
                expected: raters,
                found: sum,
            });
        }
    }
    let n_clips = counts.len() as f64;
    let n = raters as f64;
    let mut p_bar = 0.0;
    let mut totals = [0usize; 2];
    for cell in counts {
        let pairs: f64 = cell.iter().map(|&c| (c * c) as f64).sum::<f64>() - n;
        p_bar += pairs / (n * (n - 1.0));
        totals[0] += cell[0];
        totals[1] += cell[1];
    }
    p_bar /= n_clips;
    let p_e: f64 = totals
        .iter()
        .map(|&t| {
            let p = t as f64 / (n_clips * n);
            p * p
        })
        .sum();
    if p_e >= 1.0 {
        return Ok(Kappa::NotDefined);
    }
    Ok(Kappa::Value((p_bar - p_e) / (1.0 - p_e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent contingency-table oracle: builds the full 2×2 table with
    /// explicit loops and computes κ from its cells.
    #[allow(clippy::needless_range_loop)]
    fn cohen_oracle(x: &[bool], y: &[bool]) -> Kappa {
        let n = x.len() as f64;
        let mut table = [[0usize; 2]; 2];
        for (&a, &b) in x.iter().zip(y) {
            table[usize::from(a)][usize::from(b)] += 1;
        }
        let p_o = (table[0][0] + table[1][1]) as f64 / n;
        let mut p_e = 0.0;
        for cat in 0..2 {
            let row: usize = table[cat][0] + table[cat][1];
            let col: usize = table[0][cat] + table[1][cat];
            p_e += (row as f64 / n) * (col as f64 / n);
        }
        if (1.0 - p_e).abs() < 1e-15 {
            Kappa::NotDefined
        } else {
            Kappa::Value((p_o - p_e) / (1.0 - p_e))
        }
    }

    /// Definitional Fleiss oracle: mean pairwise agreement per clip over
    /// all rater pairs, chance agreement from pooled proportions.
    #[allow(clippy::needless_range_loop)]
    fn fleiss_oracle(counts: &[[usize; 2]], raters: usize) -> Kappa {
        let n_clips = counts.len() as f64;
        let n = raters as f64;
        let mut agree_sum = 0.0;
        for cell in counts {
            // count agreeing ordered rater pairs by brute force
            let mut agreements = 0usize;
            for cat in 0..2 {
                let c = cell[cat];
                agreements += c * c.saturating_sub(1);
            }
            agree_sum += agreements as f64 / (n * (n - 1.0));
        }
        let p_bar = agree_sum / n_clips;
        let mut p_e = 0.0;
        for cat in 0..2 {
            let total: usize = counts.iter().map(|c| c[cat]).sum();
            let p = total as f64 / (n_clips * n);
            p_e += p * p;
        }
        if (1.0 - p_e).abs() < 1e-15 {
            Kappa::NotDefined
        } else {
            Kappa::Value((p_bar - p_e) / (1.0 - p_e))
        }
    }

    fn assert_close(a: Kappa, b: Kappa) {
        match (a, b) {
            (Kappa::NotDefined, Kappa::NotDefined) => {}
            (Kappa::Value(x), Kappa::Value(y)) => {
                assert!((x - y).abs() < 1e-9, "{x} vs {y}")
            }
            _ => panic!("{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn perfect_agreement_with_both_categories_is_exactly_one() {
        let v = [true, false, true];
        assert_eq!(cohen_kappa(&v, &v).unwrap(), Kappa::Value(1.0));
    }

    #[test]
    fn hand_computed_example() {
        let x = [true, true, false, false, true];
        let y = [true, false, false, false, true];
        // p_o = 0.8, p_e = 0.6*0.4 + 0.4*0.6 = 0.48, κ = 0.32/0.52
        let kappa = cohen_kappa(&x, &y).unwrap().value().unwrap();
        assert!((kappa - 0.6154).abs() < 1e-4, "{kappa}");
        assert_close(cohen_kappa(&x, &y).unwrap(), cohen_oracle(&x, &y));
    }

    #[test]
    fn degenerate_marginals_are_not_defined() {
        let v = [true, true];
        assert_eq!(cohen_kappa(&v, &v).unwrap(), Kappa::NotDefined);
        let z = [false, false, false];
        assert_eq!(cohen_kappa(&z, &z).unwrap(), Kappa::NotDefined);
    }

    #[test]
    fn cohen_error_paths() {
        assert_eq!(
            cohen_kappa(&[true], &[true, false]),
            Err(AgreementError::LengthMismatch {
                expected: 1,
                found: 2
            })
        );
        assert_eq!(cohen_kappa(&[], &[]), Err(AgreementError::EmptyInput));
    }

    #[test]
    fn relabeling_invariance() {
        let x = [true, false, true, true, false, false, true];
        let y = [false, false, true, true, true, false, true];
        let flipped_x: Vec<bool> = x.iter().map(|v| !v).collect();
        let flipped_y: Vec<bool> = y.iter().map(|v| !v).collect();
        assert_close(
            cohen_kappa(&x, &y).unwrap(),
            cohen_kappa(&flipped_x, &flipped_y).unwrap(),
        );
    }

    #[test]
    fn fleiss_unanimous_with_both_categories() {
        let counts = [[3, 0], [0, 3]];
        assert_eq!(fleiss_kappa(&counts, 3).unwrap(), Kappa::Value(1.0));
    }

    #[test]
    fn fleiss_matches_definitional_oracle() {
        let counts = [[2, 1], [1, 2], [3, 0], [0, 3]];
        let got = fleiss_kappa(&counts, 3).unwrap();
        assert_close(got, fleiss_oracle(&counts, 3));
        // P̄ = (1/3 + 1/3 + 1 + 1)/4 = 2/3, P̄e = 1/2, κ = 1/3
        assert!((got.value().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn fleiss_degenerate_single_category() {
        assert_eq!(fleiss_kappa(&[[3, 0]], 3).unwrap(), Kappa::NotDefined);
    }

    #[test]
    fn fleiss_error_paths() {
        assert_eq!(fleiss_kappa(&[], 3), Err(AgreementError::EmptyInput));
        assert_eq!(
            fleiss_kappa(&[[2, 0]], 3),
            Err(AgreementError::RowSumMismatch {
                row: 0,
                expected: 3,
                found: 2
            })
        );
    }
}
