#include "tokprune/gridmap.hpp"

#include <functional>

#include "doctest.h"

using namespace tokprune;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error to be thrown");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("from_selection marks retained and backfilled cells") {
  const std::vector<TokenIndex> indices = {0, 3};
  const std::vector<TokenIndex> backfilled = {3};
  const GridMap map = GridMap::from_selection(2, 2, indices, backfilled);
  CHECK(map.width == 2);
  CHECK(map.height == 2);
  CHECK(map.cells[0] == GridMap::Cell::Retained);
  CHECK(map.cells[1] == GridMap::Cell::Removed);
  CHECK(map.cells[2] == GridMap::Cell::Removed);
  CHECK(map.cells[3] == GridMap::Cell::Backfilled);

  CHECK(map.count(GridMap::Cell::Retained) == 1);
  CHECK(map.count(GridMap::Cell::Backfilled) == 1);
  CHECK(map.count(GridMap::Cell::Removed) == 2);

  // (x, y) addressing is column-within-row over the row-major cells.
  CHECK(map.at(0, 0) == GridMap::Cell::Retained);
  CHECK(map.at(1, 0) == GridMap::Cell::Removed);
  CHECK(map.at(1, 1) == GridMap::Cell::Backfilled);
  CHECK(code_of([&] { map.at(2, 0); }) == Errc::index_out_of_range);
  CHECK(code_of([&] { map.at(0, -1); }) == Errc::index_out_of_range);
}

TEST_CASE("from_selection validates its inputs") {
  const std::vector<TokenIndex> ok = {0};
  const std::vector<TokenIndex> none;
  CHECK(code_of([&] { GridMap::from_selection(0, 2, ok, none); }) ==
        Errc::grid_mismatch);
  CHECK(code_of([&] { GridMap::from_selection(2, -1, ok, none); }) ==
        Errc::grid_mismatch);

  const std::vector<TokenIndex> outside = {4};
  CHECK(code_of([&] { GridMap::from_selection(2, 2, outside, none); }) ==
        Errc::index_out_of_range);

  const std::vector<TokenIndex> dup = {1, 1};
  CHECK(code_of([&] { GridMap::from_selection(2, 2, dup, none); }) ==
        Errc::invalid_argument);

  // Backfilled indices must be selected, and in range.
  const std::vector<TokenIndex> sel = {0, 1};
  const std::vector<TokenIndex> not_selected = {2};
  CHECK(code_of([&] { GridMap::from_selection(2, 2, sel, not_selected); }) ==
        Errc::invalid_argument);
  const std::vector<TokenIndex> back_outside = {9};
  CHECK(code_of([&] { GridMap::from_selection(2, 2, sel, back_outside); }) ==
        Errc::index_out_of_range);
}

TEST_CASE("render_pgm emits one grey block per cell") {
  const std::vector<TokenIndex> indices = {0};
  const std::vector<TokenIndex> none;
  const GridMap map = GridMap::from_selection(2, 1, indices, none);

  const std::string pgm = render_pgm(map);
  const std::string header = "P5\n2 1\n255\n";
  REQUIRE(pgm.size() == header.size() + 2);
  CHECK(pgm.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(pgm[header.size()]) == 230);
  CHECK(static_cast<unsigned char>(pgm[header.size() + 1]) == 40);

  // scale = 3 triples both dimensions and repeats each cell 9 times.
  const std::string scaled = render_pgm(map, 3);
  const std::string scaled_header = "P5\n6 3\n255\n";
  REQUIRE(scaled.size() == scaled_header.size() + 18);
  int light = 0;
  for (std::size_t i = scaled_header.size(); i < scaled.size(); ++i) {
    if (static_cast<unsigned char>(scaled[i]) == 230) ++light;
  }
  CHECK(light == 9);

  CHECK(render_pgm(map) == pgm);  // byte stable
  CHECK(code_of([&] { render_pgm(map, 0); }) == Errc::invalid_argument);
}

TEST_CASE("render_pgm distinguishes backfilled cells") {
  const std::vector<TokenIndex> indices = {0, 1};
  const std::vector<TokenIndex> backfilled = {1};
  const GridMap map = GridMap::from_selection(2, 1, indices, backfilled);
  const std::string pgm = render_pgm(map);
  const std::size_t base = pgm.size() - 2;
  CHECK(static_cast<unsigned char>(pgm[base]) == 230);
  CHECK(static_cast<unsigned char>(pgm[base + 1]) == 140);
}

TEST_CASE("render_svg draws a rect per retained cell") {
  const std::vector<TokenIndex> indices = {0, 2};
  const std::vector<TokenIndex> backfilled = {2};
  const GridMap map = GridMap::from_selection(2, 2, indices, backfilled);

  const std::string svg = render_svg(map, 10);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"20\" "
                 "height=\"20\">") != std::string::npos);
  // Background plus one rect per non-removed cell.
  std::size_t rects = 0;
  for (std::size_t pos = svg.find("<rect"); pos != std::string::npos;
       pos = svg.find("<rect", pos + 1)) {
    ++rects;
  }
  CHECK(rects == 3);
  CHECK(svg.find("x=\"0\" y=\"10\"") != std::string::npos);

  CHECK(render_svg(map, 10) == svg);  // byte stable
  CHECK(code_of([&] { render_svg(map, 0); }) == Errc::invalid_argument);
}

TEST_CASE("a 24x24 grid with 64 retained cells renders deterministically") {
  std::vector<TokenIndex> indices;
  for (TokenIndex k = 0; k < 64; ++k) indices.push_back(k * 9);
  const GridMap map = GridMap::from_selection(24, 24, indices, {});
  CHECK(map.count(GridMap::Cell::Retained) == 64);
  CHECK(map.count(GridMap::Cell::Removed) == 576 - 64);

  const std::string pgm = render_pgm(map, 4);
  const std::string svg = render_svg(map);
  CHECK(render_pgm(map, 4) == pgm);
  CHECK(render_svg(map) == svg);
}
