#include "symbill/io.hpp"

#include <sstream>

namespace symbill {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

json rat_to_json(const Rat& r) { return to_string(r); }

Rat rat_from_json(const json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return Rat(std::to_string(j.get<unsigned long long>()));
  if (j.is_number_float()) return rat_from_double(j.get<double>());
  bad("expected a number or a \"p/q\" string, got " + j.dump());
}

json point_to_json(const Point& p) { return json::array({rat_to_json(p.x), rat_to_json(p.y)}); }

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) bad("a vertex must be a two-element array");
  return {rat_from_json(j[0]), rat_from_json(j[1])};
}

json polygon_to_json(const Polygon& poly) {
  json vs = json::array();
  for (const Point& p : poly.vertices()) vs.push_back(point_to_json(p));
  json out = {{"vertices", vs}};
  if (!poly.name().empty()) out["name"] = poly.name();
  return out;
}

namespace {

std::vector<Point> vertices_from_json(const json& j) {
  // a bare array of vertices is accepted too
  const json& vs = j.is_array() ? j : field(j, "vertices");
  if (!vs.is_array()) bad("'vertices' must be an array");
  std::vector<Point> out;
  for (const json& v : vs) out.push_back(point_from_json(v));
  return out;
}

std::string name_from_json(const json& j) {
  if (j.is_object() && j.contains("name") && j["name"].is_string()) return j["name"].get<std::string>();
  return {};
}

}  // namespace

Polygon polygon_from_json(const json& j) { return Polygon(vertices_from_json(j), name_from_json(j)); }

json family_spec_to_json(const FamilySpec& spec) {
  json params = json::object();
  for (const auto& [k, v] : spec.params) params[k] = rat_to_json(v);
  return {{"family", spec.family}, {"params", params}};
}

FamilySpec family_spec_from_json(const json& j) {
  const json& f = field(j, "family");
  if (!f.is_string()) bad("'family' must be a string");
  FamilySpec spec{f.get<std::string>(), {}};
  if (j.contains("params")) {
    if (!j["params"].is_object()) bad("'params' must be an object");
    for (const auto& [k, v] : j["params"].items()) spec.params.emplace(k, rat_from_json(v));
  }
  return spec;
}

Polygon table_from_json(const json& j) {
  if (!j.is_object()) bad("expected an object");
  if (j.contains("vertices")) return polygon_from_json(j);
  if (j.contains("family")) {
    if (j["family"].is_object()) return build(family_spec_from_json(j["family"]));
    return build(family_spec_from_json(j));
  }
  if (j.contains("polygon")) return table_from_json(j["polygon"]);
  bad("expected 'vertices', 'family' or 'polygon'");
}

json validation_to_json(const ValidationReport& rep) {
  json dirs = json::array();
  for (const Vec2& v : rep.side_directions) dirs.push_back(point_to_json(v));
  json pairs = json::array();
  for (auto [i, j] : rep.parallel_pairs) pairs.push_back({i, j});
  return {{"valid", true},
          {"polygon", polygon_to_json(rep.polygon)},
          {"reversed", rep.reversed},
          {"side_directions", dirs},
          {"parallel_pairs", pairs},
          {"phase_area", rat_to_json(phase_area(rep.polygon))},
          {"area", rat_to_json(area(rep.polygon))}};
}

json phase_point_to_json(const PhasePoint& pp) {
  return {{"tail", pp.tail}, {"s", rat_to_json(pp.s)}, {"head", pp.head}, {"t", rat_to_json(pp.t)}};
}

PhasePoint phase_point_from_json(const Polygon& poly, const json& j) {
  if (j.is_array()) {
    if (j.size() != 4 || !j[0].is_number_integer() || !j[2].is_number_integer())
      bad("phase point array must be [tail, s, head, t]");
    return make_phase_point(poly, j[0].get<int>(), rat_from_json(j[1]), j[2].get<int>(), rat_from_json(j[3]));
  }
  return make_phase_point(poly, int_field(j, "tail"), rat_from_json(field(j, "s")), int_field(j, "head"),
                          rat_from_json(field(j, "t")));
}

PhasePoint parse_phase_point(const Polygon& poly, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 4) bad("phase point must be 'i,s,j,t', got '" + text + "'");
  auto side = [&](const std::string& s) {
    Rat r = parse_rat(s);
    if (r.get_den() != 1 || !r.get_num().fits_sint_p()) bad("side index must be an integer: '" + s + "'");
    return static_cast<int>(r.get_num().get_si());
  };
  return make_phase_point(poly, side(parts[0]), parse_rat(parts[1]), side(parts[2]), parse_rat(parts[3]));
}

json step_result_to_json(const StepResult& r) {
  if (r.ok()) return {{"status", "ok"}, {"next", phase_point_to_json(*r.next)}};
  return {{"status", "halt"}, {"halt", halt_name(r.halt)}};
}

json orbit_report_to_json(const Polygon& poly, const OrbitReport& rep, bool chords) {
  json out = {{"status", status_name(rep.status)},
              {"mode", rep.float_mode ? "float" : "exact"},
              {"steps", rep.steps},
              {"symbolic", rep.symbolic}};
  if (rep.status == OrbitStatus::Periodic) out["period"] = rep.period;
  if (rep.status == OrbitStatus::Halted) out["halt"] = halt_name(rep.halt);
  if (!rep.note.empty()) out["note"] = rep.note;
  if (!rep.points.empty()) {
    json pts = json::array();
    for (const PhasePoint& p : rep.points) pts.push_back(phase_point_to_json(p));
    out["points"] = pts;
    if (chords) {
      json cs = json::array();
      for (const PhasePoint& p : rep.points)
        cs.push_back(json::array({point_to_json(tail_point(poly, p)), point_to_json(head_point(poly, p))}));
      out["chords"] = cs;
    }
  }
  if (!rep.float_points.empty()) {
    json pts = json::array();
    for (const FloatPhasePoint& p : rep.float_points) pts.push_back({p.tail, p.s, p.head, p.t});
    out["points"] = pts;
    if (chords) {
      json cs = json::array();
      auto at = [&](int side, double f) {
        const Point& a = poly.vertex(side);
        const Vec2& v = poly.side(side);
        return json::array({to_double(a.x) + f * to_double(v.x), to_double(a.y) + f * to_double(v.y)});
      };
      for (const FloatPhasePoint& p : rep.float_points) cs.push_back(json::array({at(p.tail, p.s), at(p.head, p.t)}));
      out["chords"] = cs;
    }
  }
  return out;
}

json stability_to_json(const StabilityReport& rep) {
  json out = {{"period", rep.period}, {"parity", parity_name(rep.parity)}, {"verdict", verdict_name(rep.verdict)}};
  if (rep.lambda) out["lambda"] = rat_to_json(*rep.lambda);
  return out;
}

json tile_rect_to_json(const TileRect& r) {
  return {{"tail", r.tail},
          {"head", r.head},
          {"s", {rat_to_json(r.s0), rat_to_json(r.s1)}},
          {"t", {rat_to_json(r.t0), rat_to_json(r.t1)}}};
}

TileRect tile_rect_from_json(const json& j) {
  const json& s = field(j, "s");
  const json& t = field(j, "t");
  if (!s.is_array() || s.size() != 2 || !t.is_array() || t.size() != 2) bad("rectangle intervals must be pairs");
  return {int_field(j, "tail"), int_field(j, "head"), rat_from_json(s[0]), rat_from_json(s[1]),
          rat_from_json(t[0]), rat_from_json(t[1])};
}

json certificate_to_json(const PeriodicityCertificate& cert) {
  json orbits = json::array();
  for (const TileOrbit& o : cert.tile_orbits)
    orbits.push_back({{"representative", tile_rect_to_json(o.representative)},
                      {"length", o.length},
                      {"return_order", o.return_order},
                      {"point_period", o.point_period},
                      {"orbit_area", rat_to_json(o.orbit_area)},
                      {"symbolic", o.symbolic}});
  json out = {{"polygon", polygon_to_json(cert.polygon)},
              {"verdict", cert_verdict_name(cert.verdict)},
              {"total_phase_area", rat_to_json(cert.total_phase_area)},
              {"covered_area", rat_to_json(cert.covered_area)},
              {"residual", rat_to_json(cert.residual())},
              {"periods", cert.periods()},
              {"rectangles_processed", cert.rectangles_processed},
              {"tile_orbits", orbits}};
  if (!cert.note.empty()) out["note"] = cert.note;
  return out;
}

PeriodicityCertificate certificate_from_json(const json& j) {
  Polygon poly = polygon_from_json(field(j, "polygon"));
  PeriodicityCertificate cert{poly, {}, rat_from_json(field(j, "total_phase_area")),
                              rat_from_json(field(j, "covered_area")), CertVerdict::Inconclusive, 0, {}};
  const json& v = field(j, "verdict");
  std::string verdict = v.is_string() ? v.get<std::string>() : "";
  if (verdict == "FullyPeriodic") cert.verdict = CertVerdict::FullyPeriodic;
  else if (verdict == "Incomplete") cert.verdict = CertVerdict::Incomplete;
  else if (verdict == "Inconclusive") cert.verdict = CertVerdict::Inconclusive;
  else bad("unknown verdict " + v.dump());
  if (j.contains("rectangles_processed")) cert.rectangles_processed = j["rectangles_processed"].get<long>();
  if (j.contains("note")) cert.note = j["note"].get<std::string>();
  for (const json& o : field(j, "tile_orbits")) {
    TileOrbit t;
    t.representative = tile_rect_from_json(field(o, "representative"));
    t.length = int_field(o, "length");
    t.return_order = int_field(o, "return_order");
    t.point_period = field(o, "point_period").get<long>();
    t.orbit_area = rat_from_json(field(o, "orbit_area"));
    if (o.contains("symbolic")) t.symbolic = o["symbolic"].get<std::vector<int>>();
    cert.tile_orbits.push_back(std::move(t));
  }
  return cert;
}

json certificate_check_to_json(const CertificateCheck& chk) {
  return {{"ok", chk.ok}, {"covered_area", rat_to_json(chk.covered)}, {"problems", chk.problems}};
}

json cell_to_json(const Cell& c) {
  if (c.kind == CellKind::Periodic) return c.period;
  return cell_kind_name(c.kind);
}

json legend_to_json(const Legend& l) {
  json periods = json::object();
  for (const auto& [q, c] : l.periods) periods[std::to_string(q)] = hex_color(c);
  return {{"periods", periods},
          {"excised", hex_color(l.excised)},
          {"halted", hex_color(l.halted)},
          {"capped", hex_color(l.capped)}};
}

json portrait_to_json(const Portrait& p) {
  json cells = json::array();
  for (const Cell& c : p.cells) cells.push_back(cell_to_json(c));
  json marks = json::array();
  for (const Rat& m : p.marks()) marks.push_back(rat_to_json(m));
  return {{"resolution", {p.nx, p.ny}},
          {"cells", cells},
          {"legend", legend_to_json(make_legend(p))},
          {"polygon", polygon_to_json(p.polygon)},
          {"mode", portrait_mode_name(p.mode)},
          {"max_steps", p.max_steps},
          {"complete", p.complete},
          {"marks", marks}};
}

Portrait portrait_from_json(const json& j) {
  const json& res = field(j, "resolution");
  if (!res.is_array() || res.size() != 2) bad("'resolution' must be [nx, ny]");
  Portrait p{polygon_from_json(field(j, "polygon")), res[0].get<int>(), res[1].get<int>(), PortraitMode::Exact, 0,
             true, {}};
  if (j.contains("mode") && j["mode"] == "float") p.mode = PortraitMode::Float;
  if (j.contains("max_steps")) p.max_steps = j["max_steps"].get<long>();
  if (j.contains("complete")) p.complete = j["complete"].get<bool>();
  const json& cells = field(j, "cells");
  if (!cells.is_array() || cells.size() != static_cast<std::size_t>(p.nx) * p.ny)
    bad("'cells' must hold nx * ny entries");
  for (const json& c : cells) {
    if (c.is_number_integer()) p.cells.push_back({CellKind::Periodic, c.get<int>()});
    else if (c == "excised") p.cells.push_back({CellKind::Excised, 0});
    else if (c == "halted") p.cells.push_back({CellKind::Halted, 0});
    else if (c == "capped") p.cells.push_back({CellKind::Capped, 0});
    else bad("bad cell " + c.dump());
  }
  return p;
}

json error_to_json(const std::exception& e) {
  json out = {{"error", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) out["code"] = errc_name(err->code());
  return out;
}

}  // namespace symbill
