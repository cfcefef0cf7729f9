//! Online interval selection with revocable acceptances under random-order
//! arrivals.
//!
//! The crate bundles four layers:
//!
//! * interval geometry, instances, and exact offline optima ([`interval`],
//!   [`instance`], [`oracle`]);
//! * an execution engine for deterministic online algorithms with revoking,
//!   with exact expectations over all arrival orders and seeded Monte Carlo
//!   estimates ([`engine`], [`order`]);
//! * charging instrumentation for the greedy replace-on-containment
//!   algorithm: the optimal-to-online mapping, direct/transfer charge split,
//!   closed-form transfer-charge probabilities on base instances, and the
//!   nested-trace bound ([`charging`]);
//! * single-bit randomness extraction from arrival order and the
//!   derandomized applications built on it ([`extraction`], [`apps`]).
//!
//! Instance generators for the named benchmark families and experiment
//! orchestration live in [`gen`] and [`experiment`]; [`verify`] runs the
//! battery of acceptance checks the CLI `verify` subcommand exposes.

pub mod apps;
pub mod charging;
pub mod engine;
pub mod experiment;
pub mod extraction;
pub mod gen;
pub mod instance;
pub mod interval;
pub mod oracle;
pub mod order;
pub mod ratio;
pub mod verify;

pub use instance::{Instance, InstanceStats, ParseError};
pub use interval::{classify_conflict, is_feasible_set, ConflictKind, Interval, IntervalId};
pub use order::ArrivalOrder;
