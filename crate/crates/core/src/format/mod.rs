//! Tile metadata: the packed, reusable merge-path schedule.
//!
//! A matrix's merge path is cut into lanes of `sigma` steps, and lanes are
//! grouped `omega` at a time into tiles. Each tile stores its starting
//! coordinate (`tile_x`, `tile_y`); each lane stores one 32-bit descriptor
//! holding its offset from the tile start and one direction bit per step.

mod cache;
mod config;
mod descriptor;
mod tile;

pub use cache::{read_tile_cache, write_tile_cache, TILE_CACHE_MAGIC, TILE_CACHE_VERSION};
pub use config::{select_sigma, SimtConfig, DEFAULT_BLOCK_WARPS};
pub use descriptor::{pack_descriptor, unpack_descriptor, LaneDescriptor, LaneFields};
pub use tile::{
    generate_tile, generate_tile_with_stats, lane_nnz, long_row_fraction, metadata_footprint,
    reconstruct_path, GenerationStats, TileMetadata, LONG_ROW_MARK, ROW_MASK,
};
