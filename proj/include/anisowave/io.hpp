#pragma once

#include <string>

#include "anisowave/grid.hpp"
#include "anisowave/transform.hpp"

namespace anisowave {

// Grid file: magic "AWGR", u32 version, u32 D, u64 dims[D], f64 box[2D],
// f64 data (little-endian, row-major, last axis fastest).
void write_grid(const Grid& g, const std::string& path);
Grid read_grid(const std::string& path);

// Tree file: magic "AWTR", u32 version, anisotropy (u32 D, u32 b[D],
// i64 norm_sum num/den), bank (u32 L, u32 L~), u32 boundary, u32 depth,
// u64 grid dims, f64 box, coarse block, then a per-level band directory.
// Coefficients are stored with the standard normalization: the level-0
// scaling coefficients are the grid samples filtered by the sqrt(2)-scaled
// lowpass chain (samples enter as fine-scale scaling coefficients).
void write_tree(const CoefficientTree& tree, const std::string& path);
CoefficientTree read_tree(const std::string& path);

}  // namespace anisowave
