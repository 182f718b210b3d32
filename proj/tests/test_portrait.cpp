#include <doctest.h>

#include <png.h>

#include <set>
#include <sstream>

#include "symbill/families.hpp"
#include "symbill/portrait.hpp"

using namespace symbill;

namespace {

Rat frac(long p, long q = 1) { return make_rat(p, q); }

PortraitOptions grid(int n, int jobs = 0) {
  PortraitOptions o;
  o.nx = o.ny = n;
  o.jobs = jobs;
  return o;
}

std::vector<Rgb> decode_ppm(const std::string& data, int& w, int& h) {
  std::istringstream is(data);
  std::string magic;
  int maxval;
  is >> magic >> w >> h >> maxval;
  is.get();
  REQUIRE(magic == "P6");
  REQUIRE(maxval == 255);
  std::vector<Rgb> px(static_cast<std::size_t>(w) * h);
  for (Rgb& c : px) {
    c.r = static_cast<std::uint8_t>(is.get());
    c.g = static_cast<std::uint8_t>(is.get());
    c.b = static_cast<std::uint8_t>(is.get());
  }
  REQUIRE(is.good());
  return px;
}

std::vector<Rgb> decode_png(const std::string& data, int& w, int& h) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  REQUIRE(png_image_begin_read_from_memory(&img, data.data(), data.size()));
  img.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  REQUIRE(png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr));
  w = static_cast<int>(img.width);
  h = static_cast<int>(img.height);
  std::vector<Rgb> px(static_cast<std::size_t>(w) * h);
  for (std::size_t k = 0; k < px.size(); ++k) px[k] = {buf[3 * k], buf[3 * k + 1], buf[3 * k + 2]};
  return px;
}

}  // namespace

TEST_CASE("cell centers") {
  CellCenter c = cell_center(4, 8, 8, 0, 5);
  CHECK(c.tail == 0);
  CHECK(c.s == frac(1, 4));
  CHECK(c.head == 2);
  CHECK(c.t == frac(3, 4));
  CHECK(!c.on_boundary);
  // 3 sides on 3 columns: every center is a side midpoint
  CellCenter m = cell_center(3, 3, 3, 2, 1);
  CHECK(m.tail == 2);
  CHECK(m.s == frac(1, 2));
  // 4 sides on 2 columns: the centers 1/4 and 3/4 are side boundaries
  CHECK(cell_center(4, 2, 2, 0, 0).on_boundary);
}

TEST_CASE("parallel kernel equals the serial reference") {
  for (const Polygon& poly : {quad(), penthouse(frac(2), frac(3, 5)), kite()}) {
    Portrait s = compute_portrait_serial(poly, grid(48));
    for (int jobs : {1, 2, 4}) {
      Portrait p = compute_portrait(poly, grid(48, jobs));
      CHECK(p.cells == s.cells);
    }
  }
}

TEST_CASE("cells agree with a direct orbit of the center") {
  Polygon q = penthouse(frac(2), frac(3, 5));
  Portrait p = compute_portrait(q, grid(40));
  int checked = 0;
  for (int iy = 0; iy < 40; iy += 3)
    for (int ix = 0; ix < 40; ix += 3) {
      CellCenter c = cell_center(q.size(), 40, 40, ix, iy);
      const Cell& cell = p.at(ix, iy);
      if (c.on_boundary || c.tail == c.head || q.side_cross(c.tail, c.head) == 0) {
        CHECK(cell.kind != CellKind::Periodic);
        continue;
      }
      OrbitReport r = orbit(q, PhasePoint{c.tail, c.s, c.head, c.t});
      REQUIRE(r.status == OrbitStatus::Periodic);
      CHECK(cell.kind == CellKind::Periodic);
      CHECK(cell.period == r.period);
      ++checked;
    }
  CHECK(checked > 100);
}

TEST_CASE("excised cells are the diagonal and parallel blocks") {
  Portrait p = compute_portrait(unit_square(), grid(8));
  int excised = 0;
  for (const Cell& c : p.cells) excised += c.kind == CellKind::Excised;
  CHECK(excised == 4 * 2 * 4);
  CHECK(p.periods() == std::vector<int>{4});
}

TEST_CASE("tripling the resolution keeps the statuses of coarse centers") {
  for (const Polygon& poly : {quad(), hexhouse(6, 1, 4, 2)}) {
    Portrait a = compute_portrait(poly, grid(20));
    Portrait b = compute_portrait(poly, grid(60));
    for (int iy = 0; iy < 20; ++iy)
      for (int ix = 0; ix < 20; ++ix) CHECK(a.at(ix, iy) == b.at(3 * ix + 1, 3 * iy + 1));
  }
}

TEST_CASE("legends of the reference tables") {
  CHECK(compute_portrait(quad(), grid(128)).periods() == std::vector<int>{20, 36});
  CHECK(compute_portrait(penthouse(frac(2), frac(3, 5)), grid(128)).periods() == std::vector<int>{12, 20, 28});
}

TEST_CASE("float mode matches exact mode on a periodic table") {
  PortraitOptions e = grid(64), f = grid(64);
  e.mode = PortraitMode::Exact;
  f.mode = PortraitMode::Float;
  Portrait pe = compute_portrait(quad(), e), pf = compute_portrait(quad(), f);
  CHECK(pf.mode == PortraitMode::Float);
  CHECK(pe.cells == pf.cells);
  PortraitOptions big = grid(257);
  CHECK(resolve_mode(big) == PortraitMode::Float);
  CHECK(resolve_mode(grid(256)) == PortraitMode::Exact);
}

TEST_CASE("progressive bands arrive in order and match") {
  Polygon q = quad();
  std::vector<std::pair<int, int>> bands;
  Portrait p = compute_portrait_progressive(q, grid(30), 7, [&](int a, int b, const std::vector<Cell>&) {
    bands.emplace_back(a, b);
  });
  REQUIRE(!bands.empty());
  CHECK(bands.front().first == 0);
  CHECK(bands.back().second == 30);
  for (std::size_t k = 1; k < bands.size(); ++k) CHECK(bands[k].first == bands[k - 1].second);
  CHECK(p.cells == compute_portrait(q, grid(30)).cells);
}

TEST_CASE("deadline and cancellation leave an incomplete portrait") {
  PortraitOptions o = grid(64);
  o.deadline = std::chrono::steady_clock::now();
  CHECK(!compute_portrait(kite(), o).complete);
  std::atomic<bool> stop{true};
  PortraitOptions c = grid(64);
  c.cancel = &stop;
  CHECK(!compute_portrait_serial(kite(), c).complete);
}

TEST_CASE("render round-trips through PPM and PNG") {
  Portrait p = compute_portrait(penthouse(frac(2), frac(3, 5)), grid(25));
  Legend lg = make_legend(p);
  int w, h, w2, h2;
  std::vector<Rgb> ppm = decode_ppm(render(p, ImageFormat::Ppm, 2), w, h);
  std::vector<Rgb> png = decode_png(render(p, ImageFormat::Png, 2), w2, h2);
  CHECK(w == 50);
  CHECK(h == 50);
  CHECK(w2 == 50);
  CHECK(h2 == 50);
  CHECK(ppm == png);
  for (int iy = 0; iy < 25; ++iy)
    for (int ix = 0; ix < 25; ++ix) {
      // image rows run top-down, portrait rows bottom-up
      int y = (24 - iy) * 2 + 1, x = ix * 2;
      CHECK(ppm[static_cast<std::size_t>(y) * 50 + x] == lg.color(p.at(ix, iy)));
    }
  CHECK_THROWS_AS(parse_image_format("gif"), Error);
  CHECK(parse_image_format("png") == ImageFormat::Png);
}

TEST_CASE("legend colors are distinct and fixed") {
  Portrait p = compute_portrait(penthouse(frac(2), frac(3, 5)), grid(90));
  Legend lg = make_legend(p);
  std::set<std::string> seen;
  for (const auto& [period, c] : lg.periods) seen.insert(hex_color(c));
  CHECK(seen.size() == lg.periods.size());
  CHECK(hex_color(lg.excised) == "#000000");
  CHECK(hex_color(lg.halted) == "#ffffff");
  CHECK(make_legend(p).periods == lg.periods);
}
