#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symbill/billiard_map.hpp"

namespace symbill {

enum class CellKind : std::uint8_t { Periodic, Halted, Capped, Excised };
const char* cell_kind_name(CellKind k);

struct Cell {
  CellKind kind = CellKind::Capped;
  int period = 0;

  friend bool operator==(const Cell& a, const Cell& b) { return a.kind == b.kind && a.period == b.period; }
};

enum class PortraitMode { Exact, Float };
const char* portrait_mode_name(PortraitMode m);

struct PortraitOptions {
  int nx = 128;
  int ny = 128;
  long max_steps = 10000;
  std::optional<PortraitMode> mode;  // unset: exact up to 256x256 cells, float above
  int jobs = 0;                      // 0: OpenMP default
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const std::atomic<bool>* cancel = nullptr;
};

PortraitMode resolve_mode(const PortraitOptions& opts);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb& a, const Rgb& b) { return a.r == b.r && a.g == b.g && a.b == b.b; }
};

// Phase square: the horizontal axis is the tail position, the vertical axis
// the head position. Each side takes an equal width 1/n, so side i covers
// [i/n, (i+1)/n). Cells are row-major, row 0 at the bottom (head near 0).
struct Portrait {
  Polygon polygon;
  int nx = 0;
  int ny = 0;
  PortraitMode mode = PortraitMode::Exact;
  long max_steps = 0;
  bool complete = true;  // false when a deadline or cancellation cut it short
  std::vector<Cell> cells;

  const Cell& at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * nx + ix]; }
  // Side boundaries as fractions of the square: k/n for k = 0..n.
  std::vector<Rat> marks() const;
  // Distinct periods, ascending.
  std::vector<int> periods() const;
};

// The chord at the center of cell (ix, iy): perimeter coordinate
// X = (ix + 1/2) / nx scaled by n gives side floor(nX) and fraction nX - floor(nX).
// Empty when the center lies on a side boundary.
struct CellCenter {
  int tail = 0;
  Rat s;
  int head = 0;
  Rat t;
  bool on_boundary = false;
};
CellCenter cell_center(int n, int nx, int ny, int ix, int iy);

// Status of a single cell, shared by both kernels.
Cell compute_cell(const MapTable& table, int nx, int ny, int ix, int iy, PortraitMode mode, long max_steps);

// Rows [row_begin, row_end) only; the rest of the grid is left Capped.
using RowCallback = std::function<void(int row_begin, int row_end, const std::vector<Cell>& cells)>;

Portrait compute_portrait(const Polygon& poly, const PortraitOptions& opts);
// Single-threaded reference with identical output.
Portrait compute_portrait_serial(const Polygon& poly, const PortraitOptions& opts);
// Computes in bands of `band` rows and reports each finished band in order.
Portrait compute_portrait_progressive(const Polygon& poly, const PortraitOptions& opts, int band,
                                      const RowCallback& on_band);

// Fixed palette: periods in ascending order take successive entries
// (cycling), excised is black, halted white, capped gray.
struct Legend {
  std::vector<std::pair<int, Rgb>> periods;
  Rgb excised{0, 0, 0};
  Rgb halted{255, 255, 255};
  Rgb capped{128, 128, 128};

  Rgb color(const Cell& c) const;
};
Legend make_legend(const Portrait& p);
std::string hex_color(const Rgb& c);

enum class ImageFormat { Ppm, Png };
// Throws Error{UnsupportedFormat} for anything but "ppm" / "png".
ImageFormat parse_image_format(const std::string& name);

// One square block of `scale` pixels per cell, the top image row being the
// top portrait row.
std::string render(const Portrait& p, ImageFormat format, int scale = 1);

}  // namespace symbill
