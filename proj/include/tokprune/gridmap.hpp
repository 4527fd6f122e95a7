#pragma once

#include <span>
#include <string>

#include "tokprune/core.hpp"

namespace tokprune {

/// Spatial layout of a selection over a w x h token grid (row-major token
/// order), distinguishing diversity-guaranteed picks from backfilled ones.
struct GridMap {
  enum class Cell : std::uint8_t { Removed = 0, Retained = 1, Backfilled = 2 };

  TokenIndex width = 0;
  TokenIndex height = 0;
  std::vector<Cell> cells;  // row-major, width * height entries

  /// Throws grid_mismatch for non-positive dims, index_out_of_range for
  /// indices outside the grid, invalid_argument for duplicates or a
  /// backfilled index that is not selected.
  static GridMap from_selection(TokenIndex width, TokenIndex height,
                                std::span<const TokenIndex> indices,
                                std::span<const TokenIndex> backfilled_indices);

  Cell at(TokenIndex x, TokenIndex y) const;
  TokenIndex count(Cell kind) const;
};

/// Binary PGM (P5, maxval 255) with each cell drawn as a scale x scale
/// block: retained 230, backfilled 140, removed 40.  Output bytes are a
/// pure function of the map and scale.
std::string render_pgm(const GridMap& map, int scale = 1);

/// Minimal SVG: one filled rect per cell on a dark background, integer
/// coordinates only so the bytes are deterministic.
std::string render_svg(const GridMap& map, int cell_px = 16);

}  // namespace tokprune
