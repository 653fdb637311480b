//! Deterministic Four Pillars (BaZi) engine: calendrics, chart construction,
//! classical interpretation, luck and flowing cycles, persona prompt
//! rendering, plus an offline-capable multiple-choice evaluation harness.

pub mod analysis;
pub mod bench;
pub mod calendrics;
pub mod chart;
pub mod cycles;
pub mod llm;
pub mod persona;
pub mod symbols;
