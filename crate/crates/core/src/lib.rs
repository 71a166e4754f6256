//! Content-centric wireless delivery toolkit.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`catalog`]: contents, service requests, the content-rate metric, its
//!   broadcast/unicast bandwidth bounds and the achievability checker.
//! - [`pet`]: a priority encoding transmission codec over GF(2^8).
//! - [`workload`]: seeded Zipf catalogs and request traces.
//! - [`sched`]: unicast, broadcast-everything and converged push planners,
//!   the plan simulator and the users-per-cell capacity search.
//! - [`crowd`]: matching content-distribution tasks to NSP service offers.
//!
//! Everything here is a pure function of its inputs. File formats, the CLI
//! and parallel sweeps live in the `contentcast` crate.
#![no_std]
#![deny(unused_must_use, rust_2018_idioms)]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod crowd;
pub mod gf256;
pub mod pet;
pub mod sched;
pub mod workload;

mod num;

pub use catalog::{
    CacheSpec, Catalog, ContentObject, ContentRateReport, DiversityMatrix, ServiceRequest,
    WirelessBudget,
};
pub use pet::{PetLayout, PetPacket, PriorityProfile};
pub use sched::{ConvergedConfig, DeliveryPlan, SimReport};
