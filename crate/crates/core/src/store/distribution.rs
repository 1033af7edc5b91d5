use std::io::{Read, Write};

use super::{line_of, locate_columns, StoreError};
use crate::colorlib::ColorLibrary;
use crate::estimator::AssociationDistribution;
use crate::numfmt::sig6;

pub fn write_distribution_csv<W: Write>(
    out: W,
    dist: &AssociationDistribution,
    library: &ColorLibrary,
) -> Result<(), StoreError> {
    if dist.values.len() != library.len() {
        return Err(StoreError::Mismatch(format!(
            "{} values for a library of {} colors",
            dist.values.len(),
            library.len()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["color_index", "hex", "value"])?;
    for (i, (c, v)) in library.colors.iter().zip(&dist.values).enumerate() {
        w.write_record([(i + 1).to_string(), c.hex.clone(), sig6(*v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Read a `color_index,hex,value` file written for `library`; the hexes must
/// match the library row by row.
pub fn read_distribution_csv<R: Read>(
    reader: R,
    concept: &str,
    library: &ColorLibrary,
    n_ratings_per_color: usize,
) -> Result<AssociationDistribution, StoreError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let ([ii, hi, vi], _) = locate_columns(rdr.headers()?, ["color_index", "hex", "value"])?;
    let mut values = vec![None; library.len()];
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        let err = |message: String| StoreError::Row { line, message };
        let idx: usize = row
            .get(ii)
            .unwrap_or_default()
            .parse()
            .map_err(|_| err("bad color_index".into()))?;
        let Some(color) = idx.checked_sub(1).and_then(|i| library.colors.get(i)) else {
            return Err(err(format!("unknown color_index {idx}")));
        };
        let hex = row.get(hi).unwrap_or_default();
        if !hex.eq_ignore_ascii_case(&color.hex) {
            return Err(err(format!(
                "hex {hex} does not match library color {}",
                color.hex
            )));
        }
        let v: f64 = row
            .get(vi)
            .unwrap_or_default()
            .parse()
            .map_err(|_| err("bad value".into()))?;
        if !(0.0..=1.0).contains(&v) {
            return Err(err(format!("value {v} outside [0, 1]")));
        }
        if values[idx - 1].replace(v).is_some() {
            return Err(err(format!("duplicate color_index {idx}")));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| StoreError::Schema(format!("color_index {} missing", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AssociationDistribution {
        concept: concept.to_string(),
        library_name: library.name.clone(),
        values,
        n_ratings_per_color,
    })
}
