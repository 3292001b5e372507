//! Interlaced amalgamation classes of finite ordered structures.
//!
//! The crate builds the level hierarchy generated from a one-point base
//! structure by two amalgamation operations (an edgeless doubling and a
//! one-edge doubling steered by an interlace type), and provides the
//! machinery around it:
//!
//! * [`structures`] — the ordered-structure data model, validation,
//!   induced substructures, and the line-record serialization;
//! * [`amalgam`] — the interlacing predicate and the two amalgamations;
//! * [`enumerate`] — level-by-level catalogs with deduplication,
//!   size statistics, and the `.knel` file format;
//! * [`embedding`] — weak containment search and bounded class
//!   membership queries;
//! * [`invariants`] — graph reducts, exact chromatic number, girth and
//!   odd girth, the marker homomorphism check, and DOT export;
//! * [`interlace`] — interlace graphs and classical shift graphs on
//!   increasing tuples;
//! * [`forcing`] — finite conditions, the extension order, delta-system
//!   amalgamation, and seeded condition growth.
//!
//! Every value is immutable after construction and every operation is a
//! pure function, so values can be shared freely between threads.
//!
//! The `examples/` directory contains one runnable program per major
//! capability; `cargo run --example enumerate_catalog` is a good
//! starting point. The `knel` binary exposes the same functionality as
//! a command line tool.

pub mod amalgam;
pub mod embedding;
pub mod enumerate;
pub mod error;
pub mod forcing;
pub mod interlace;
pub mod invariants;
pub mod structures;

pub use error::Error;
