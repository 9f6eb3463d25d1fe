//! Reading groups from JSON.
//!
//! A group file holds either a Cayley table or permutation generators:
//!
//! ```json
//! {"name": "Z2", "cayley": [[0, 1], [1, 0]], "labels": ["e", "a"]}
//! {"name": "Q8", "generators": [[2, 3, 1, 0, 6, 7, 5, 4], [4, 5, 7, 6, 1, 0, 2, 3]]}
//! ```
//!
//! In a Cayley table row `g` column `h` holds the index of `g·h`, and index 0
//! must be the identity. Generators are permutations of `0..m` given as image
//! lists; `labels`, when present, must match the discovered element order.

use std::path::Path;

use serde::Deserialize;

use crate::error::{QdError, Result};
use crate::group::FiniteGroup;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    name: Option<String>,
    cayley: Option<Vec<Vec<usize>>>,
    generators: Option<Vec<Vec<usize>>>,
    labels: Option<Vec<String>>,
    max_order: Option<usize>,
}

pub fn group_from_json(text: &str) -> Result<FiniteGroup> {
    let file: GroupFile = serde_json::from_str(text)?;
    let name = file.name.as_deref().unwrap_or("G");
    match (file.cayley, file.generators) {
        (Some(table), None) => FiniteGroup::from_cayley(name, table, file.labels),
        (None, Some(gens)) => {
            if gens.is_empty() {
                return Err(QdError::Parse("\"generators\" is empty".into()));
            }
            let cap = file.max_order.unwrap_or(crate::group::DEFAULT_MAX_ORDER);
            FiniteGroup::from_generators_capped(&gens, cap)?.renamed(name, file.labels)
        }
        (Some(_), Some(_)) => Err(QdError::Parse("give either \"cayley\" or \"generators\", not both".into())),
        (None, None) => Err(QdError::Parse("group file needs \"cayley\" or \"generators\"".into())),
    }
}

pub fn group_from_file(path: &Path) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path).map_err(|e| QdError::Parse(format!("{}: {e}", path.display())))?;
    group_from_json(&text)
}
