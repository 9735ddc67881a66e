//! Visibility-based pursuit-evasion around polygonal obstacles.
//!
//! The crate solves the single-corner tracking game in closed form
//! ([`corner_game`]), sweeps it over workspace grids ([`partitions`]),
//! blends per-corner solutions into guidance fields for general scenes
//! ([`pursuit_field`]) and runs fixed-step tracking games ([`sim_engine`]).

pub mod geometry;
pub mod corner_game;
pub mod partitions;
pub mod pursuit_field;
pub mod sim_engine;
pub mod scenes;
