//! Game-to-text toolkit for Doudizhu and Go.
//!
//! The crate bundles complete rule engines for both games, the textual
//! codecs used to serialize hands and boards, seeded data-generating
//! agents, clients for external decision engines, six dataset builders
//! with a manifest, the metric suite used to score model output, and a
//! match-play harness.

pub mod arena;
pub mod bridge;
pub mod datagen;
pub mod dou;
pub mod evalkit;
pub mod go;
pub mod seeding;
