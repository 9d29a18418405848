use crate::error::{Error, Result};

pub const MAX_PATTERN_J: usize = 20;

/// Every nonempty subset of `J` hypotheses under the alternative, in binary
/// counting order (`true` = under the alternative).
pub fn enumerate_alternative_patterns(j: usize) -> Result<Vec<Vec<bool>>> {
    if j == 0 || j > MAX_PATTERN_J {
        return Err(Error::JTooLarge(j));
    }
    Ok((1u32..(1 << j))
        .map(|mask| (0..j).map(|b| mask >> b & 1 == 1).collect())
        .collect())
}

/// `[H_A1, H_02, ...]` rendering of one pattern.
pub fn format_pattern(pattern: &[bool]) -> String {
    let parts: Vec<String> = pattern
        .iter()
        .enumerate()
        .map(|(i, &alt)| format!("H_{}{}", if alt { "A" } else { "0" }, i + 1))
        .collect();
    format!("[{}]", parts.join(", "))
}
