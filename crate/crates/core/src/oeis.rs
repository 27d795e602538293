//! Reading and checking tabulated integer sequences (`id<TAB>index<TAB>value`).

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::kernel::{ExactCount, Profile};
use crate::nash::b_extended;
use crate::recurrences::e_by_recurrence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureEntry {
    pub id: String,
    pub index: u32,
    pub value: BigUint,
}

/// Blank lines and lines starting with `#` are skipped.
pub fn parse_fixtures(text: &str) -> Result<Vec<FixtureEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: {what}: `{line}`", lineno + 1));
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, index, value] = fields[..] else {
            return Err(bad("expected three tab-separated fields"));
        };
        out.push(FixtureEntry {
            id: id.to_string(),
            index: index.parse().map_err(|_| bad("bad index"))?,
            value: value.parse().map_err(|_| bad("bad value"))?,
        });
    }
    Ok(out)
}

/// The quantity a known sequence id tabulates, `None` for unknown ids.
pub fn compute_entry(id: &str, index: u32) -> Option<ExactCount> {
    let rep = |part: u32, times: u32| Profile::from(vec![part; times as usize]);
    let e_row = |part: u32| e_by_recurrence(&rep(part, index));
    let b_diag = |s: u32| ExactCount::new(b_extended(rep(index, s).parts()));
    Some(match id {
        "A000166" => e_row(1),
        "A000459" => e_row(2),
        "A059073" => e_row(3),
        "A059074" => e_row(4),
        "A123297" => e_row(5),
        "A000172" => e_by_recurrence(&rep(index, 3)),
        "A030662" => b_diag(2),
        "A144660" => b_diag(3),
        "A144661" => b_diag(4),
        _ => return None,
    })
}
