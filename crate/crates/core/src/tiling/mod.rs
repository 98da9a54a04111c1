//! Torus embeddings, face tracing, heights of vanishing subgroups and the
//! bounded-height census of tilings.

pub mod census;
pub mod embedding;
pub mod height;
mod small;

pub use census::{census, default_hmax, enumerate_vanishing_subgroups, tiling_census, CensusLimits, CensusReport};
pub use embedding::{fundamental_tiles, is_tiling, torus_embedding, Dart, TilingVerdict, TorusEmbedding};
pub use height::{height, HeightReport};
