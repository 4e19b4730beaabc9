use serde::{Deserialize, Serialize};

use super::dictionary::Dictionary;
use super::theory::{cardinality_bound, coherence_mu};
use super::wavelet::sequency;

/// Summary of a binary dictionary: coherence, the cardinality bound, and
/// histograms of row weights and row sequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DictionaryStats {
    pub m: usize,
    pub d: usize,
    /// `None` when `m = 1`, where coherence is undefined.
    pub coherence: Option<usize>,
    /// Decimal string, as the bound quickly outgrows machine integers.
    pub cardinality_bound: String,
    /// `row_sum_histogram[k]` rows have exactly `k` ones.
    pub row_sum_histogram: Vec<usize>,
    /// `sequency_histogram[k]` rows have exactly `k` value changes.
    pub sequency_histogram: Vec<usize>,
}

pub fn dictionary_stats(dict: &Dictionary) -> crate::Result<DictionaryStats> {
    let d = dict.d();
    let coherence = if dict.m() < 2 { None } else { Some(coherence_mu(dict)?) };
    let bound = cardinality_bound(dict)?;
    let mut row_sum_histogram = vec![0; d + 1];
    let mut sequency_histogram = vec![0; d];
    for row in dict.rows() {
        row_sum_histogram[row.iter().filter(|v| **v == 1).count()] += 1;
        sequency_histogram[sequency(row)?] += 1;
    }
    Ok(DictionaryStats {
        m: dict.m(),
        d,
        coherence,
        cardinality_bound: bound.to_string(),
        row_sum_histogram,
        sequency_histogram,
    })
}
