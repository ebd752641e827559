//! Bundled reference codes.

use crate::code::{parse_codes, StbcCode};

/// Rate-5/4 two-group code on four antennas.
pub const TABLE2_JSON: &str = include_str!("../fixtures/table2.json");

/// Rate-1 three-group code on four antennas, groups of sizes (2,2,4).
pub const TABLE3_JSON: &str = include_str!("../fixtures/table3.json");

fn single(json: &str) -> StbcCode {
    parse_codes(json)
        .expect("bundled fixture parses")
        .pop()
        .expect("bundled fixture holds one code")
}

pub fn table2() -> StbcCode {
    single(TABLE2_JSON)
}

pub fn table3() -> StbcCode {
    single(TABLE3_JSON)
}
