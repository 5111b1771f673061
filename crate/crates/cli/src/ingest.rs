//! Bit-string file ingestion.
//!
//! One record per line: `bits` or `label:bits`, bits over the alphabet
//! `{0,1}`. `#` starts a comment line; blank lines are skipped. Errors
//! carry the 1-based line number.

use crate::Failure;
use dstprot_core::dst_sim::BitString;
use std::path::Path;

/// Reads and parses a record file.
pub fn parse_bit_strings(path: &Path) -> Result<Vec<BitString>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_text(&text, &path.display().to_string())
}

/// Parses record text; `origin` only labels error messages.
pub fn parse_text(text: &str, origin: &str) -> Result<Vec<BitString>, Failure> {
    let mut records = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let number = index + 1;
        let (label, bits) = match line.split_once(':') {
            Some((label, bits)) => {
                let label = label.trim();
                if label.is_empty() {
                    return Err(Failure::Usage(format!("{origin}:{number}: empty label before ':'")));
                }
                (Some(label), bits.trim())
            }
            None => (None, line),
        };
        match BitString::from_text(label, bits) {
            Some(record) => records.push(record),
            None => {
                return Err(Failure::Usage(format!(
                    "{origin}:{number}: bit strings may contain only the characters 0 and 1"
                )))
            }
        }
    }
    Ok(records)
}
