pub mod estimate;
pub mod evaluate;
pub mod fit;
pub mod library;
pub mod report;
pub mod specificity;

use std::collections::BTreeSet;
use std::fs;

use anyhow::Result;
use chroma_assoc::concepts::{all_concepts, category};

use crate::failure::{config, input};
use crate::ConceptArgs;

/// Concepts requested on the command line, defaulting to all 70.
pub fn resolve_concepts(args: &ConceptArgs) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for c in &args.concepts {
        out.push(c.trim().to_string());
    }
    if let Some(path) = &args.concepts_file {
        let text = fs::read_to_string(path)
            .map_err(|e| config(format!("concepts file {}: {e}", path.display())))?;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or_default().trim();
            if !line.is_empty() {
                out.push(line.to_string());
            }
        }
    }
    if let Some(name) = &args.category {
        let cat = category(name).ok_or_else(|| config(format!("unknown category {name:?}")))?;
        out.extend(cat.concepts.iter().map(|s| s.to_string()));
    }
    if out.is_empty() {
        out = all_concepts().into_iter().map(String::from).collect();
    }
    let mut seen = BTreeSet::new();
    out.retain(|c| seen.insert(c.clone()));
    if out.iter().any(|c| c.is_empty()) {
        return Err(config("empty concept name"));
    }
    Ok(out)
}

/// Error unless both concept sets are identical, listing the difference.
pub fn require_same_concepts(what: &str, a: &[String], b: &[String]) -> Result<()> {
    let a: BTreeSet<&String> = a.iter().collect();
    let b: BTreeSet<&String> = b.iter().collect();
    if a == b {
        return Ok(());
    }
    let only_a: Vec<_> = a.difference(&b).collect();
    let only_b: Vec<_> = b.difference(&a).collect();
    Err(input(format!(
        "concept sets differ for {what}: only in first {only_a:?}, only in second {only_b:?}"
    )))
}

pub fn summary(command: &str, fields: serde_json::Value) -> String {
    let mut v = serde_json::json!({"status": "ok", "command": command});
    if let (Some(obj), serde_json::Value::Object(extra)) = (v.as_object_mut(), fields) {
        obj.extend(extra);
    }
    v.to_string()
}
