//! Sequential blow-ups tracked combinatorially.
//!
//! [`Tower`] realizes a chain of blow-ups along centers that are minimal in the
//! current building set, optionally carrying one extra element that may sit inside a
//! center. [`sequence`] builds on it to follow arbitrary orders satisfying (*).

mod sequence;
mod tower;

pub use sequence::{
    center_dim_closed_form, check_star_order, divisor_intersection_table, run_sequence,
    suggest_order, BlowupState, BlowupTrace, CenterRecord, DivisorTable, OrderStrategy, RunOptions,
    StarVerdict, TableRow,
};
pub use tower::{Id, LevelModel, Tower, Transformed};
