//! Flat strips, tapes, and distance reconstruction along strip boundaries.

pub mod reconstruct;
pub mod strip;
pub mod tape;

pub use reconstruct::{reconstruct_flat, FlatError, FlatEstimate, FlatOptions, FlatReconstruction};
pub use strip::{hosts_flats, parallel_set_sections, section_below, FlatChart, FlatStrip, SectionLabel, StripError};
pub use tape::{build_tape, min_tape_order, tape_width, Tape, TapeError, TapeIndex, TapeRow};
