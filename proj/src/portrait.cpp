#include "symbill/portrait.hpp"

#include <png.h>

#include <algorithm>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace symbill {

const char* cell_kind_name(CellKind k) {
  switch (k) {
    case CellKind::Periodic: return "periodic";
    case CellKind::Halted: return "halted";
    case CellKind::Capped: return "capped";
    case CellKind::Excised: return "excised";
  }
  return "?";
}

const char* portrait_mode_name(PortraitMode m) { return m == PortraitMode::Exact ? "exact" : "float"; }

PortraitMode resolve_mode(const PortraitOptions& opts) {
  if (opts.mode) return *opts.mode;
  return static_cast<long>(opts.nx) * opts.ny > 256L * 256L ? PortraitMode::Float : PortraitMode::Exact;
}

std::vector<Rat> Portrait::marks() const {
  std::vector<Rat> out;
  for (int k = 0; k <= polygon.size(); ++k) out.push_back(make_rat(k, polygon.size()));
  return out;
}

std::vector<int> Portrait::periods() const {
  std::set<int> s;
  for (const Cell& c : cells)
    if (c.kind == CellKind::Periodic) s.insert(c.period);
  return {s.begin(), s.end()};
}

namespace {

// Side index and fraction of the perimeter position (2k+1) / (2m), scaled by n.
std::pair<int, Rat> split_axis(int n, int m, int k, bool& boundary) {
  Rat x = make_rat(static_cast<long>(n) * (2 * k + 1), 2L * m);
  Rat f = floor_rat(x);
  if (x == f) boundary = true;
  return {static_cast<int>(f.get_num().get_si()), x - f};
}

}  // namespace

CellCenter cell_center(int n, int nx, int ny, int ix, int iy) {
  CellCenter c;
  auto [i, s] = split_axis(n, nx, ix, c.on_boundary);
  auto [j, t] = split_axis(n, ny, iy, c.on_boundary);
  c.tail = i;
  c.s = std::move(s);
  c.head = j;
  c.t = std::move(t);
  return c;
}

Cell compute_cell(const MapTable& table, int nx, int ny, int ix, int iy, PortraitMode mode, long max_steps) {
  const Polygon& poly = table.polygon();
  CellCenter c = cell_center(poly.size(), nx, ny, ix, iy);
  if (c.tail == c.head || sgn(poly.side_cross(c.tail, c.head)) == 0) return {CellKind::Excised, 0};
  if (c.on_boundary) return {CellKind::Halted, 0};
  PhasePoint pp{c.tail, c.s, c.head, c.t};
  OrbitReport rep;
  if (mode == PortraitMode::Exact) {
    OrbitOptions o;
    o.max_steps = max_steps;
    rep = orbit(table, pp, o);
  } else {
    FloatOrbitOptions o;
    o.max_steps = max_steps;
    rep = float_orbit(table, to_float(pp), o);
  }
  switch (rep.status) {
    case OrbitStatus::Periodic: return {CellKind::Periodic, rep.period};
    case OrbitStatus::Halted: return {CellKind::Halted, 0};
    case OrbitStatus::Capped: return {CellKind::Capped, 0};
  }
  return {};
}

namespace {

Portrait blank(const Polygon& poly, const PortraitOptions& opts) {
  if (opts.nx < 2 || opts.ny < 2) throw Error(Errc::ParamOutOfRange, "portrait resolution must be at least 2x2");
  Portrait p{poly, opts.nx, opts.ny, resolve_mode(opts), opts.max_steps, true, {}};
  p.cells.assign(static_cast<std::size_t>(opts.nx) * opts.ny, Cell{});
  return p;
}

bool stopped(const PortraitOptions& opts) {
  if (opts.cancel && opts.cancel->load(std::memory_order_relaxed)) return true;
  return opts.deadline && std::chrono::steady_clock::now() > *opts.deadline;
}

// Fills rows [r0, r1); returns false if interrupted.
bool fill_rows_parallel(const MapTable& table, Portrait& p, const PortraitOptions& opts, int r0, int r1) {
  const long first = static_cast<long>(r0) * p.nx;
  const long last = static_cast<long>(r1) * p.nx;
  std::atomic<bool> interrupted{false};
  int threads = opts.jobs;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  threads = 1;
#endif
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (long k = first; k < last; ++k) {
    if (interrupted.load(std::memory_order_relaxed)) continue;
    if ((k & 63) == 0 && stopped(opts)) {
      interrupted.store(true, std::memory_order_relaxed);
      continue;
    }
    p.cells[static_cast<std::size_t>(k)] =
        compute_cell(table, p.nx, p.ny, static_cast<int>(k % p.nx), static_cast<int>(k / p.nx), p.mode, p.max_steps);
  }
  return !interrupted.load();
}

}  // namespace

Portrait compute_portrait(const Polygon& poly, const PortraitOptions& opts) {
  Portrait p = blank(poly, opts);
  MapTable table(poly);
  if (!fill_rows_parallel(table, p, opts, 0, p.ny)) p.complete = false;
  return p;
}

Portrait compute_portrait_serial(const Polygon& poly, const PortraitOptions& opts) {
  Portrait p = blank(poly, opts);
  MapTable table(poly);
  for (int iy = 0; iy < p.ny; ++iy)
    for (int ix = 0; ix < p.nx; ++ix) {
      if (stopped(opts)) {
        p.complete = false;
        return p;
      }
      p.cells[static_cast<std::size_t>(iy) * p.nx + ix] = compute_cell(table, p.nx, p.ny, ix, iy, p.mode, p.max_steps);
    }
  return p;
}

Portrait compute_portrait_progressive(const Polygon& poly, const PortraitOptions& opts, int band,
                                      const RowCallback& on_band) {
  Portrait p = blank(poly, opts);
  MapTable table(poly);
  band = std::max(band, 1);
  for (int r0 = 0; r0 < p.ny; r0 += band) {
    int r1 = std::min(p.ny, r0 + band);
    if (!fill_rows_parallel(table, p, opts, r0, r1)) {
      p.complete = false;
      break;
    }
    if (on_band) on_band(r0, r1, p.cells);
  }
  return p;
}

namespace {

const Rgb kPalette[] = {
    {220, 50, 47},  {40, 160, 60},  {38, 110, 210}, {240, 170, 20}, {150, 70, 190}, {20, 180, 180},
    {230, 100, 160}, {120, 90, 40}, {140, 200, 60}, {250, 120, 60}, {70, 60, 150},  {0, 120, 110},
};

}  // namespace

Rgb Legend::color(const Cell& c) const {
  switch (c.kind) {
    case CellKind::Excised: return excised;
    case CellKind::Halted: return halted;
    case CellKind::Capped: return capped;
    case CellKind::Periodic: break;
  }
  auto it = std::lower_bound(periods.begin(), periods.end(), c.period,
                             [](const std::pair<int, Rgb>& e, int v) { return e.first < v; });
  if (it == periods.end() || it->first != c.period) return capped;
  return it->second;
}

Legend make_legend(const Portrait& p) {
  Legend l;
  std::size_t k = 0;
  for (int q : p.periods()) l.periods.emplace_back(q, kPalette[k++ % std::size(kPalette)]);
  return l;
}

std::string hex_color(const Rgb& c) {
  static const char* digits = "0123456789abcdef";
  std::string s = "#";
  for (std::uint8_t v : {c.r, c.g, c.b}) {
    s += digits[v >> 4];
    s += digits[v & 15];
  }
  return s;
}

ImageFormat parse_image_format(const std::string& name) {
  if (name == "ppm") return ImageFormat::Ppm;
  if (name == "png") return ImageFormat::Png;
  throw Error(Errc::UnsupportedFormat, "image format '" + name + "'");
}

namespace {

std::vector<std::uint8_t> raster(const Portrait& p, int scale, int& w, int& h) {
  Legend legend = make_legend(p);
  w = p.nx * scale;
  h = p.ny * scale;
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    int iy = p.ny - 1 - y / scale;
    for (int x = 0; x < w; ++x) {
      Rgb c = legend.color(p.at(x / scale, iy));
      std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
      px[o] = c.r;
      px[o + 1] = c.g;
      px[o + 2] = c.b;
    }
  }
  return px;
}

void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), len);
}

void png_flush_noop(png_structp) {}

std::string encode_png(const std::vector<std::uint8_t>& px, int w, int h) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::string out;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, info ? &info : nullptr);
    throw std::runtime_error("png encoding failed");
  }
  png_set_write_fn(png, &out, png_append, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y)
    png_write_row(png, const_cast<png_bytep>(px.data() + static_cast<std::size_t>(y) * w * 3));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

std::string render(const Portrait& p, ImageFormat format, int scale) {
  if (scale < 1) throw Error(Errc::ParamOutOfRange, "scale must be positive");
  int w = 0, h = 0;
  std::vector<std::uint8_t> px = raster(p, scale, w, h);
  if (format == ImageFormat::Png) return encode_png(px, w, h);
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

}  // namespace symbill
