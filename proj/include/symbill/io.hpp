#pragma once

#include <string>

#include <json.hpp>

#include "symbill/families.hpp"
#include "symbill/portrait.hpp"
#include "symbill/tiling.hpp"

namespace symbill {

using json = nlohmann::json;

// Rationals travel as "p/q" strings ("p" for integers). Readers also accept
// JSON numbers, taken at the exact value of their shortest decimal form.
json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);

json point_to_json(const Point& p);
Point point_from_json(const json& j);

// {"name": string?, "vertices": [[num, num], ...]}
json polygon_to_json(const Polygon& poly);
Polygon polygon_from_json(const json& j);

// {"family": "penthouse", "params": {"a": "2", "b": "3/5"}}
json family_spec_to_json(const FamilySpec& spec);
FamilySpec family_spec_from_json(const json& j);

// A raw polygon, a family spec, or an object holding either under
// "polygon" / "family".
Polygon table_from_json(const json& j);

json validation_to_json(const ValidationReport& rep);

// {"tail": i, "s": "p/q", "head": j, "t": "p/q"}
json phase_point_to_json(const PhasePoint& pp);
PhasePoint phase_point_from_json(const Polygon& poly, const json& j);
// "i,s,j,t" as on the command line.
PhasePoint parse_phase_point(const Polygon& poly, const std::string& text);

json step_result_to_json(const StepResult& r);
// With `chords`, adds the plane endpoints of every collected state.
json orbit_report_to_json(const Polygon& poly, const OrbitReport& rep, bool chords = false);
json stability_to_json(const StabilityReport& rep);

json tile_rect_to_json(const TileRect& r);
TileRect tile_rect_from_json(const json& j);
json certificate_to_json(const PeriodicityCertificate& cert);
PeriodicityCertificate certificate_from_json(const json& j);
json certificate_check_to_json(const CertificateCheck& chk);

// {"resolution": [nx, ny], "cells": [...], "legend": {...}, ...}; cells are
// row-major from the bottom row, a period or one of "excised", "halted",
// "capped".
json portrait_to_json(const Portrait& p);
Portrait portrait_from_json(const json& j);
json legend_to_json(const Legend& l);
json cell_to_json(const Cell& c);

json error_to_json(const std::exception& e);

}  // namespace symbill
