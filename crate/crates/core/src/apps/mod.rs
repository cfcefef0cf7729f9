//! Deterministic random-order algorithms built by simulating one random bit
//! from the arrival order.
//!
//! Each application pairs two deterministic sub-algorithms that agree on a
//! prefix of the stream (or serves one class provisionally with full
//! revocation at the switch), extracts a bit with one of the processes in
//! [`crate::extraction`], and commits to the selected sub-algorithm. After
//! the commit, the combined execution coincides with the selected
//! sub-algorithm run alone on the whole sequence.

mod knapsack;
mod single_length;
mod string_guess;
mod two_length;

pub use knapsack::{knapsack_online, KnapsackOutcome};
pub use single_length::{select_single_length, serve_parity, SingleLengthOutcome, SlotAppEvent};
pub use string_guess::{guess_string, guess_string_fixed_tail, StringGuessOutcome};
pub use two_length::{select_two_length, serve_cell, TwoLengthOutcome};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum AppError {
    #[error("instance mixes interval lengths")]
    MixedLengths,
    #[error("instance does not have exactly one or two interval lengths")]
    NotTwoLengths,
    #[error("identical items arrived before the first bit resolved")]
    DuplicateItems,
    #[error("arrival order is not a bijection on the instance ids")]
    InvalidOrder,
}

/// Grid position of an interval of length `ell`: the unique integer `k` with
/// `k * ell` inside `[start, start + ell)`, plus its parity. Intervals of
/// the same parity at different grid indices never conflict; intervals at
/// the same grid index always do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotKey {
    pub index: i64,
    pub parity: u8,
}

pub fn slot_key(iv: &Interval, ell: f64) -> SlotKey {
    debug_assert!(ell > 0.0);
    let mut k = (iv.start / ell).ceil() as i64;
    // Snap against floating-point drift at multiples of the length.
    while (k as f64) * ell < iv.start {
        k += 1;
    }
    while ((k - 1) as f64) * ell >= iv.start {
        k -= 1;
    }
    debug_assert!((k as f64) * ell >= iv.start && (k as f64) * ell < iv.start + ell);
    SlotKey {
        index: k,
        parity: k.rem_euclid(2) as u8,
    }
}
