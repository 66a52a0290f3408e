//! Polar codes under a limited number of processing elements.
//!
//! The crate builds polar codes from the Bhattacharyya parameters of the
//! synthetic channels, decodes them with successive cancellation (SC) and
//! simplified SC (SSC), and counts the time steps either decoder needs when
//! only `P` LLR computations can run in parallel.
//!
//! ```
//! use polarlat::{build_code, build_ssc_tree, ssc_latency, BmsChannel, ChannelKind, ZPolicy};
//!
//! let channel = BmsChannel::from_capacity(ChannelKind::Bec, 0.5).unwrap();
//! let code = build_code(&channel, 4, 1e-3, ZPolicy::ExactBec).unwrap();
//! let tree = build_ssc_tree(&code);
//! assert_eq!(ssc_latency(&tree, 1), 30);
//! ```

// Range checks are written as `!(x > lo)` so that NaN arguments are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod codec;
pub mod construct;
pub mod error;
pub mod experiments;
pub mod latency;
pub mod plot;

pub use channel::{BmsChannel, ChannelKind, ZPolicy};
pub use codec::{encode, monte_carlo_fer, sc_decode, simulate, ssc_decode, ScDecoder, SimulationReport, SscDecoder};
pub use construct::{build_code, PolarCode};
pub use error::{Error, Result};
pub use experiments::{fit_slope, run_fig6, run_fig7, run_fig8, PPolicy, SlopeFit, SweepGrid, SweepRecord};
pub use latency::{
    build_ssc_tree, min_p_within_factor, sc_latency_closed_form, sc_latency_tree, ssc_latency, theorem1_bound,
    LatencyReport, NodeKind, SscTree,
};
