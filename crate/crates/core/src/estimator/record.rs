use serde::{Deserialize, Serialize};

/// One backend call, kept as an audit trail. Every attempt gets its own
/// record, failed or not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub concept: String,
    pub color_index: usize,
    pub hex: String,
    pub repetition: usize,
    pub raw_response: String,
    pub parsed_value: Option<f64>,
    pub attempts: usize,
    pub protocol_name: String,
    pub model_id: String,
    pub timestamp: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RatingRecord {
    pub fn key(&self) -> RatingKey {
        RatingKey {
            concept: self.concept.clone(),
            color_index: self.color_index,
            repetition: self.repetition,
        }
    }

    pub fn succeeded(&self) -> bool {
        self.parsed_value.is_some()
    }
}

/// Identifies one rating trial within a run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RatingKey {
    pub concept: String,
    pub color_index: usize,
    pub repetition: usize,
}

/// Mean rating per library color for one concept, in library order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationDistribution {
    pub concept: String,
    pub library_name: String,
    pub values: Vec<f64>,
    pub n_ratings_per_color: usize,
}

/// Successful parsed values per color (1-based index → position 0), ordered
/// by repetition. Failed attempts are skipped; if a repetition somehow has
/// several successes the first attempt wins.
pub fn values_by_color(records: &[RatingRecord], n_colors: usize) -> Vec<Vec<f64>> {
    let mut hits: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n_colors];
    for r in records {
        if let (Some(v), true) = (r.parsed_value, (1..=n_colors).contains(&r.color_index)) {
            hits[r.color_index - 1].push((r.repetition, r.attempts, v));
        }
    }
    hits.into_iter()
        .map(|mut h| {
            h.sort_by_key(|&(rep, attempt, _)| (rep, attempt));
            h.dedup_by_key(|x| x.0);
            h.into_iter().map(|x| x.2).collect()
        })
        .collect()
}
