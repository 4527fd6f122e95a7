#include "tokprune/gridmap.hpp"

#include <algorithm>

namespace tokprune {
namespace {

constexpr unsigned char kGreyRetained = 230;
constexpr unsigned char kGreyBackfilled = 140;
constexpr unsigned char kGreyRemoved = 40;

const char* fill_of(GridMap::Cell cell) {
  switch (cell) {
    case GridMap::Cell::Retained: return "#e6e6e6";
    case GridMap::Cell::Backfilled: return "#8c8c8c";
    case GridMap::Cell::Removed: return "#282828";
  }
  return "#000000";
}

unsigned char grey_of(GridMap::Cell cell) {
  switch (cell) {
    case GridMap::Cell::Retained: return kGreyRetained;
    case GridMap::Cell::Backfilled: return kGreyBackfilled;
    case GridMap::Cell::Removed: return kGreyRemoved;
  }
  return 0;
}

}  // namespace

GridMap GridMap::from_selection(TokenIndex width, TokenIndex height,
                                std::span<const TokenIndex> indices,
                                std::span<const TokenIndex> backfilled_indices) {
  if (width < 1 || height < 1) {
    throw Error(Errc::grid_mismatch,
                "grid dims must be >= 1, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  const std::int64_t n = static_cast<std::int64_t>(width) * height;
  GridMap map;
  map.width = width;
  map.height = height;
  map.cells.assign(static_cast<std::size_t>(n), Cell::Removed);
  for (TokenIndex idx : indices) {
    if (idx < 0 || idx >= n) {
      throw Error(Errc::index_out_of_range,
                  "index " + std::to_string(idx) + " outside " +
                      std::to_string(width) + "x" + std::to_string(height) +
                      " grid");
    }
    if (map.cells[idx] != Cell::Removed) {
      throw Error(Errc::invalid_argument,
                  "duplicate index " + std::to_string(idx));
    }
    map.cells[idx] = Cell::Retained;
  }
  for (TokenIndex idx : backfilled_indices) {
    if (idx < 0 || idx >= n) {
      throw Error(Errc::index_out_of_range,
                  "backfilled index " + std::to_string(idx) + " outside grid");
    }
    if (map.cells[idx] != Cell::Retained) {
      throw Error(Errc::invalid_argument,
                  "backfilled index " + std::to_string(idx) +
                      " is not part of the selection");
    }
    map.cells[idx] = Cell::Backfilled;
  }
  return map;
}

GridMap::Cell GridMap::at(TokenIndex x, TokenIndex y) const {
  if (x < 0 || x >= width || y < 0 || y >= height) {
    throw Error(Errc::index_out_of_range,
                "cell (" + std::to_string(x) + ", " + std::to_string(y) +
                    ") outside " + std::to_string(width) + "x" +
                    std::to_string(height) + " grid");
  }
  return cells[static_cast<std::size_t>(y) * width + x];
}

TokenIndex GridMap::count(Cell kind) const {
  return static_cast<TokenIndex>(std::count(cells.begin(), cells.end(), kind));
}

std::string render_pgm(const GridMap& map, int scale) {
  if (scale < 1) {
    throw Error(Errc::invalid_argument,
                "scale must be >= 1, got " + std::to_string(scale));
  }
  const std::int64_t w = static_cast<std::int64_t>(map.width) * scale;
  const std::int64_t h = static_cast<std::int64_t>(map.height) * scale;
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(w * h));
  for (TokenIndex y = 0; y < map.height; ++y) {
    for (int sy = 0; sy < scale; ++sy) {
      for (TokenIndex x = 0; x < map.width; ++x) {
        const char grey = static_cast<char>(grey_of(map.at(x, y)));
        out.append(static_cast<std::size_t>(scale), grey);
      }
    }
  }
  return out;
}

std::string render_svg(const GridMap& map, int cell_px) {
  if (cell_px < 1) {
    throw Error(Errc::invalid_argument,
                "cell_px must be >= 1, got " + std::to_string(cell_px));
  }
  const std::int64_t w = static_cast<std::int64_t>(map.width) * cell_px;
  const std::int64_t h = static_cast<std::int64_t>(map.height) * cell_px;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(h) + "\">\n";
  out += "<rect width=\"" + std::to_string(w) + "\" height=\"" +
         std::to_string(h) + "\" fill=\"" + fill_of(GridMap::Cell::Removed) +
         "\"/>\n";
  for (TokenIndex y = 0; y < map.height; ++y) {
    for (TokenIndex x = 0; x < map.width; ++x) {
      const GridMap::Cell cell = map.at(x, y);
      if (cell == GridMap::Cell::Removed) continue;
      out += "<rect x=\"" + std::to_string(static_cast<std::int64_t>(x) * cell_px) +
             "\" y=\"" + std::to_string(static_cast<std::int64_t>(y) * cell_px) +
             "\" width=\"" + std::to_string(cell_px) + "\" height=\"" +
             std::to_string(cell_px) + "\" fill=\"" + fill_of(cell) + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace tokprune
