use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{line_of, locate_columns, StoreError};
use crate::colorlib::ColorLibrary;
use crate::metrics::HumanRatingSet;
use crate::numfmt::sig6;

pub const HUMAN_COLUMNS: [&str; 4] = ["participant_id", "concept", "color_index", "rating"];

/// A participant dropped from one concept for not rating every color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedParticipant {
    pub participant_id: String,
    pub concept: String,
    pub colors_rated: usize,
    pub colors_expected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HumanRatings {
    pub sets: BTreeMap<String, HumanRatingSet>,
    pub rejected: Vec<RejectedParticipant>,
    pub ignored_columns: Vec<String>,
}

pub fn load_human_ratings(path: &Path, library: &ColorLibrary) -> Result<HumanRatings, StoreError> {
    let file = File::open(path).map_err(|e| StoreError::io(path, e))?;
    read_human_ratings(file, library.len())
}

/// Participant order plus participant -> per-color ratings, for one concept.
type ConceptRows = (Vec<String>, HashMap<String, Vec<Option<f64>>>);

/// Group `participant_id,concept,color_index,rating` rows into one
/// participant × color matrix per concept. Participants keep their order of
/// first appearance.
pub fn read_human_ratings<R: Read>(reader: R, n_colors: usize) -> Result<HumanRatings, StoreError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let ([pi, ci, ki, ri], ignored_columns) = locate_columns(rdr.headers()?, HUMAN_COLUMNS)?;

    let mut grouped: BTreeMap<String, ConceptRows> = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        let err = |message: String| StoreError::Row { line, message };
        let participant = row.get(pi).unwrap_or_default().to_string();
        let concept = row.get(ci).unwrap_or_default().to_string();
        if participant.is_empty() || concept.is_empty() {
            return Err(err("empty participant_id or concept".into()));
        }
        let color: usize = row.get(ki).unwrap_or_default().parse().map_err(|_| {
            err(format!(
                "bad color_index {:?}",
                row.get(ki).unwrap_or_default()
            ))
        })?;
        if !(1..=n_colors).contains(&color) {
            return Err(err(format!(
                "unknown color_index {color} (library has {n_colors})"
            )));
        }
        let rating: f64 = row
            .get(ri)
            .unwrap_or_default()
            .parse()
            .map_err(|_| err(format!("bad rating {:?}", row.get(ri).unwrap_or_default())))?;
        if !(0.0..=1.0).contains(&rating) {
            return Err(err(format!("rating {rating} outside [0, 1]")));
        }
        let (order, by_participant) = grouped.entry(concept.clone()).or_default();
        let slots = by_participant
            .entry(participant.clone())
            .or_insert_with(|| {
                order.push(participant.clone());
                vec![None; n_colors]
            });
        if slots[color - 1].replace(rating).is_some() {
            return Err(err(format!(
                "duplicate rating for participant {participant:?}, concept {concept:?}, color {color}"
            )));
        }
    }

    let mut sets = BTreeMap::new();
    let mut rejected = Vec::new();
    for (concept, (order, mut by_participant)) in grouped {
        let mut ids = Vec::new();
        let mut ratings = Vec::new();
        for id in order {
            let slots = by_participant.remove(&id).unwrap_or_default();
            let present = slots.iter().flatten().count();
            if present == n_colors {
                ids.push(id);
                ratings.push(slots.into_iter().flatten().collect());
            } else {
                log::warn!(
                    "rejecting participant {id:?} for {concept:?}: {present} of {n_colors} colors rated"
                );
                rejected.push(RejectedParticipant {
                    participant_id: id,
                    concept: concept.clone(),
                    colors_rated: present,
                    colors_expected: n_colors,
                });
            }
        }
        if !ids.is_empty() {
            let set = HumanRatingSet::new(concept.clone(), ids, ratings)
                .map_err(|e| StoreError::Schema(e.to_string()))?;
            sets.insert(concept, set);
        }
    }
    Ok(HumanRatings {
        sets,
        rejected,
        ignored_columns,
    })
}

pub fn write_human_ratings<'a, W: Write>(
    out: W,
    sets: impl IntoIterator<Item = &'a HumanRatingSet>,
) -> Result<(), StoreError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HUMAN_COLUMNS)?;
    for set in sets {
        for (id, row) in set.participant_ids.iter().zip(&set.ratings) {
            for (i, v) in row.iter().enumerate() {
                w.write_record([
                    id.clone(),
                    set.concept.clone(),
                    (i + 1).to_string(),
                    sig6(*v),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
