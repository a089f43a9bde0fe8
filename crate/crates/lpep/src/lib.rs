//! Deterministic multi-agent power scheduling.
//!
//! Agents negotiate power demand and supply over a simulated network using a
//! lightweight power exchange protocol: a four-way handshake propagated over
//! the grid overlay, replies collected until a timer expires, and the
//! resulting disequilibrium resolved with an exact Boolean cover solver
//! backed by ternary vector lists. The solver atomizes heterogeneous offers
//! either into gcd-sized quanta or by interval partitioning, and falls back
//! to best-effort acceptance when no exact cover exists.
//!
//! Modules, bottom up:
//!
//! - [`model`] — time intervals, power quanta, schedules, message types
//! - [`tvl`] — the ternary-vector-list Boolean engine
//! - [`solver`] — atomization, cover construction, exact and best-effort solving
//! - [`protocol`] — the per-agent negotiation state machine
//! - [`trace`] — simulation trace records, export and invariant checking
//! - [`netsim`] — topologies, delay model and the discrete-event loop
//! - [`wire`] — the canonical binary message encoding and trace metrics
//! - [`scenario`] — the scenario file format and parser

pub mod model;
pub mod tvl;
