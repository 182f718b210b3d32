#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "symbill/acceptance.hpp"
#include "symbill/scan.hpp"
#include "symbill/service.hpp"

namespace symbill::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::ParseError, "cannot write " + path);
  out << data;
}

json read_json_arg(const std::string& arg) {
  std::string text = arg;
  if (arg == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    text = os.str();
  } else if (arg.empty() || (arg[0] != '{' && arg[0] != '[')) {
    text = read_file(arg);
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad JSON: ") + e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string extension(const std::string& path) {
  std::string e = std::filesystem::path(path).extension().string();
  return e.empty() ? e : e.substr(1);
}

}  // namespace

FamilySpec parse_family_shorthand(const std::string& text) {
  FamilySpec spec;
  auto colon = text.find(':');
  spec.family = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  for (const std::string& kv : split(text.substr(colon + 1), ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(Errc::ParseError, "expected key=value, got '" + kv + "'");
    spec.params[kv.substr(0, eq)] = parse_rat(kv.substr(eq + 1));
  }
  return spec;
}

Polygon load_table(const std::string& arg) {
  bool looks_json = !arg.empty() && (arg[0] == '{' || arg[0] == '[');
  if (looks_json || arg == "-" || std::filesystem::is_regular_file(arg)) return table_from_json(read_json_arg(arg));
  return build(parse_family_shorthand(arg));
}

std::vector<Rat> parse_rat_list(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::vector<Rat> out;
    for (const std::string& t : split(text, ',')) out.push_back(parse_rat(t));
    return out;
  }
  auto colon = text.find(':', dots);
  Rat lo = parse_rat(text.substr(0, dots));
  Rat hi = parse_rat(text.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2));
  int steps = colon == std::string::npos ? 2 : std::stoi(text.substr(colon + 1));
  return rat_range(lo, hi, steps);
}

std::pair<int, int> parse_resolution(const std::string& text) {
  auto x = text.find('x');
  try {
    int nx = std::stoi(text.substr(0, x));
    int ny = x == std::string::npos ? nx : std::stoi(text.substr(x + 1));
    if (nx <= 0 || ny <= 0) throw Error(Errc::ParamOutOfRange, "resolution must be positive");
    return {nx, ny};
  } catch (const std::logic_error&) {
    throw Error(Errc::ParseError, "resolution must look like 128 or 128x96");
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact symplectic billiards in convex polygons"};
  app.require_subcommand(1);
  std::function<int()> action;
  auto emit = [&](const json& j) { out << j.dump(2) << "\n"; };

  // validate
  std::string v_arg;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a polygon and print its side data");
  validate_cmd->add_option("polygon", v_arg, "polygon JSON (file, inline, or '-')")->required();
  validate_cmd->callback([&] {
    action = [&] {
      json j = read_json_arg(v_arg);
      const json& vs = j.is_object() && j.contains("vertices") ? j.at("vertices") : j;
      std::vector<Point> pts;
      for (const json& p : vs) pts.push_back(point_from_json(p));
      try {
        emit(validation_to_json(validate(std::move(pts), j.is_object() ? j.value("name", "") : "")));
        return int(kOk);
      } catch (const Error& e) {
        json r = error_to_json(e);
        r["valid"] = false;
        emit(r);
        return int(kVerificationFailed);
      }
    };
  });

  // step / orbit
  std::string t_arg, phase, mode = "exact";
  long max_steps = 100000;
  bool back = false, with_points = false, do_classify = false;
  auto* step_cmd = app.add_subcommand("step", "Apply the map once to a phase point");
  step_cmd->add_option("polygon", t_arg, "polygon JSON or family shorthand")->required();
  step_cmd->add_option("--phase", phase, "phase point i,s,j,t")->required();
  step_cmd->add_flag("--back", back, "apply the inverse map");
  step_cmd->callback([&] {
    action = [&] {
      Polygon poly = load_table(t_arg);
      PhasePoint pp = parse_phase_point(poly, phase);
      emit(step_result_to_json(back ? step_back(poly, pp) : step(poly, pp)));
      return int(kOk);
    };
  });
  auto* orbit_cmd = app.add_subcommand("orbit", "Iterate a phase point until it returns, halts, or hits --max");
  orbit_cmd->add_option("polygon", t_arg, "polygon JSON or family shorthand")->required();
  orbit_cmd->add_option("--phase", phase, "phase point i,s,j,t")->required();
  orbit_cmd->add_option("--max", max_steps, "step cap")->capture_default_str();
  orbit_cmd->add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
  orbit_cmd->add_flag("--points", with_points, "include visited points and chords");
  orbit_cmd->add_flag("--classify", do_classify, "classify a periodic exact orbit");
  orbit_cmd->callback([&] {
    action = [&] {
      Polygon poly = load_table(t_arg);
      PhasePoint pp = parse_phase_point(poly, phase);
      MapTable table(poly);
      OrbitReport rep;
      if (mode == "exact") {
        OrbitOptions o;
        o.max_steps = max_steps;
        o.collect_points = with_points;
        rep = orbit(table, pp, o);
      } else {
        FloatOrbitOptions o;
        o.max_steps = max_steps;
        o.collect_points = with_points;
        rep = float_orbit(table, to_float(pp), o);
      }
      json j = orbit_report_to_json(poly, rep, with_points);
      if (do_classify && !rep.float_mode && rep.status == OrbitStatus::Periodic)
        j["stability"] = stability_to_json(classify(poly, pp, rep.period));
      emit(j);
      return int(rep.status == OrbitStatus::Capped ? kBudgetExhausted : kOk);
    };
  });

  // certify / check-cert
  std::string c_arg, c_out;
  long max_tiles = 1'000'000, cert_steps = 100'000;
  double timeout = 0;
  auto* certify_cmd = app.add_subcommand("certify", "Decompose phase space into periodic tiles");
  certify_cmd->add_option("polygon", c_arg, "polygon JSON, family spec JSON, or family shorthand")->required();
  certify_cmd->add_option("--max-tiles", max_tiles, "rectangles taken off the work list")->capture_default_str();
  certify_cmd->add_option("--max-steps", cert_steps, "step cap per rectangle orbit")->capture_default_str();
  certify_cmd->add_option("--timeout", timeout, "wall-clock limit in seconds (0: none)");
  certify_cmd->add_option("--out", c_out, "also write the certificate here");
  certify_cmd->callback([&] {
    action = [&] {
      Polygon poly = load_table(c_arg);
      CertifyBudget b;
      b.max_tiles = max_tiles;
      b.max_steps = cert_steps;
      if (timeout > 0)
        b.deadline = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(timeout));
      PeriodicityCertificate cert = certify(poly, b);
      json j = certificate_to_json(cert);
      if (!c_out.empty()) write_file(c_out, j.dump(2) + "\n");
      if (cert.verdict == CertVerdict::FullyPeriodic) {
        CertificateCheck chk = check_certificate(cert);
        j["check"] = certificate_check_to_json(chk);
        emit(j);
        return int(chk.ok ? kOk : kVerificationFailed);
      }
      emit(j);
      return int(cert.verdict == CertVerdict::Inconclusive ? kBudgetExhausted : kVerificationFailed);
    };
  });
  std::string cc_arg;
  auto* check_cmd = app.add_subcommand("check-cert", "Re-verify a certificate by replay");
  check_cmd->add_option("certificate", cc_arg, "certificate JSON file")->required();
  check_cmd->callback([&] {
    action = [&] {
      CertificateCheck chk = check_certificate(certificate_from_json(read_json_arg(cc_arg)));
      emit(certificate_check_to_json(chk));
      return int(chk.ok ? kOk : kVerificationFailed);
    };
  });

  // portrait
  std::string p_arg, res = "128", p_out, p_mode;
  long p_steps = 10000;
  int scale = 1, jobs = 0;
  auto* portrait_cmd = app.add_subcommand("portrait", "Render a period-colored phase portrait");
  portrait_cmd->add_option("polygon", p_arg, "polygon JSON or family shorthand")->required();
  portrait_cmd->add_option("--res", res, "NX or NXxNY")->capture_default_str();
  portrait_cmd->add_option("--out", p_out, "output .ppm, .png or .json")->required();
  portrait_cmd->add_option("--max-steps", p_steps, "orbit cap per cell")->capture_default_str();
  portrait_cmd->add_option("--mode", p_mode, "exact or float (default: by size)")->check(CLI::IsMember({"exact", "float"}));
  portrait_cmd->add_option("--scale", scale, "pixels per cell")->capture_default_str();
  portrait_cmd->add_option("--timeout", timeout, "wall-clock limit in seconds (0: none)");
  portrait_cmd->add_option("--jobs", jobs, "threads (0: OpenMP default)");
  portrait_cmd->callback([&] {
    action = [&] {
      Polygon poly = load_table(p_arg);
      std::string ext = extension(p_out);
      std::optional<ImageFormat> fmt;
      if (ext != "json") fmt = parse_image_format(ext);
      PortraitOptions o;
      std::tie(o.nx, o.ny) = parse_resolution(res);
      o.max_steps = p_steps;
      o.jobs = jobs;
      if (!p_mode.empty()) o.mode = p_mode == "exact" ? PortraitMode::Exact : PortraitMode::Float;
      if (timeout > 0)
        o.deadline = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(timeout));
      Portrait p = compute_portrait(poly, o);
      write_file(p_out, fmt ? render(p, *fmt, scale) : portrait_to_json(p).dump() + "\n");
      emit({{"out", p_out},
            {"resolution", {p.nx, p.ny}},
            {"mode", portrait_mode_name(p.mode)},
            {"complete", p.complete},
            {"legend", legend_to_json(make_legend(p))}});
      return int(p.complete ? kOk : kBudgetExhausted);
    };
  });

  // diffbody / perturb
  std::string d_arg;
  auto* diff_cmd = app.add_subcommand("diffbody", "Difference body and the area identity");
  diff_cmd->add_option("polygon", d_arg, "polygon JSON or family shorthand")->required();
  diff_cmd->callback([&] {
    action = [&] {
      Polygon poly = load_table(d_arg);
      Polygon d = difference_body(poly);
      Rat ad = area(d), ph = phase_area(poly);
      emit({{"difference_body", polygon_to_json(d)},
            {"area_difference_body", rat_to_json(ad)},
            {"phase_area", rat_to_json(ph)},
            {"ratio", rat_to_json(ad / ph)},
            {"identity_holds", ad == ph}});
      return int(ad == ph ? kOk : kVerificationFailed);
    };
  });
  std::string pt_arg, eps;
  std::uint64_t seed = 1;
  auto* perturb_cmd = app.add_subcommand("perturb", "Move every vertex by a seeded random offset of size eps");
  perturb_cmd->add_option("polygon", pt_arg, "polygon JSON or family shorthand")->required();
  perturb_cmd->add_option("--eps", eps, "offset scale p/q")->required();
  perturb_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  perturb_cmd->callback([&] {
    action = [&] {
      emit(polygon_to_json(perturb(load_table(pt_arg), parse_rat(eps), seed)));
      return int(kOk);
    };
  });

  // scan
  std::string family, box, s_out, a_list = "5,2,3/2,1,5/6,2/3,3/5,1/2,2/5,3/8", b_list = "1/4,3/5,9/10";
  bool entries = false;
  long s_tiles = 1'000'000, s_steps = 100'000;
  auto* scan_cmd = app.add_subcommand("scan", "Certify every member of a family parameter box");
  scan_cmd->add_option("family", family, "penthouse, hexhouse, special_octagon or lattice_hexagon")
      ->required()
      ->check(CLI::IsMember({"penthouse", "hexhouse", "special_octagon", "lattice_hexagon"}));
  scan_cmd->add_option("--box", box, "integer limits, e.g. wmax=6,hmax=4 | max=5 | lo=1,hi=3");
  scan_cmd->add_option("--a", a_list, "penthouse a values: list or lo..hi:steps")->capture_default_str();
  scan_cmd->add_option("--b", b_list, "penthouse b values: list or lo..hi:steps")->capture_default_str();
  scan_cmd->add_option("--out", s_out, "line-delimited results; existing entries are reused");
  scan_cmd->add_option("--max-tiles", s_tiles, "certify budget per member")->capture_default_str();
  scan_cmd->add_option("--max-steps", s_steps, "step cap per rectangle orbit")->capture_default_str();
  scan_cmd->add_option("--jobs", jobs, "threads (0: OpenMP default)");
  scan_cmd->add_flag("--entries", entries, "print every member, not just the summary");
  scan_cmd->callback([&] {
    action = [&] {
      ScanOptions o;
      o.budget.max_tiles = s_tiles;
      o.budget.max_steps = s_steps;
      o.jobs = jobs;
      o.out_path = s_out;
      ScanReport r;
      if (family == "penthouse") {
        r = scan_penthouse(parse_rat_list(a_list), parse_rat_list(b_list), o);
      } else {
        std::map<std::string, long> limits;
        for (const std::string& kv : split(box, ',')) {
          auto eq = kv.find('=');
          if (eq == std::string::npos) throw Error(Errc::ParseError, "expected key=value in --box");
          limits[kv.substr(0, eq)] = std::stol(kv.substr(eq + 1));
        }
        r = scan_family(family, limits, o);
      }
      emit(scan_report_to_json(r, entries));
      long members = static_cast<long>(r.entries.size()) - r.invalid;
      bool budget_hit = false;
      for (const ScanEntry& e : r.entries) budget_hit = budget_hit || e.verdict == "Inconclusive";
      if (r.fully_periodic == members && r.nonconforming == 0) return int(kOk);
      return int(budget_hit ? kBudgetExhausted : kVerificationFailed);
    };
  });

  // search-kite
  PeriodSearchOptions so;
  std::string k_mode = "exact";
  auto* kite_cmd = app.add_subcommand("search-kite", "Look for periodic orbits of the kite");
  kite_cmd->add_option("--max-period", so.max_period, "orbit cap")->capture_default_str();
  kite_cmd->add_option("--max-denominator", so.max_denominator, "grid fractions a/q with q up to this")->capture_default_str();
  kite_cmd->add_option("--random", so.random_samples, "extra random samples")->capture_default_str();
  kite_cmd->add_option("--seed", so.seed, "random seed")->capture_default_str();
  kite_cmd->add_option("--mode", k_mode, "exact or float")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
  kite_cmd->add_option("--examples", so.keep_examples, "examples kept per period")->capture_default_str();
  kite_cmd->add_option("--jobs", so.jobs, "threads (0: OpenMP default)");
  kite_cmd->callback([&] {
    action = [&] {
      so.mode = k_mode == "exact" ? PortraitMode::Exact : PortraitMode::Float;
      PeriodSearchReport r = search_kite(so);
      emit(search_report_to_json(r));
      bool ok = true;
      for (const FoundOrbit& f : r.examples) ok = ok && f.verified;
      return int(ok ? kOk : kVerificationFailed);
    };
  });

  // acceptance table
  AcceptanceOptions ao;
  bool no_kite = false;
  auto* verify_cmd = app.add_subcommand("verify-paper", "Run the acceptance suite and print a pass/fail table");
  verify_cmd->add_option("--cases", ao.property_cases, "randomized cases per property")->capture_default_str();
  verify_cmd->add_option("--seed", ao.seed, "property seed")->capture_default_str();
  verify_cmd->add_flag("--no-kite", no_kite, "skip the kite search");
  verify_cmd->callback([&] {
    action = [&] {
      ao.kite = !no_kite;
      bool all = true;
      run_acceptance(ao, [&](const CriterionResult& r) {
        all = all && r.pass;
        out << format_result(r) << std::endl;
      });
      out << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
      return int(all ? kOk : kVerificationFailed);
    };
  });

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  long budget_ms = 30000;
  ServiceConfig cfg;
  auto* serve_cmd = app.add_subcommand("serve", "Start the JSON service");
  serve_cmd->add_option("--host", host, "bind address")->capture_default_str();
  serve_cmd->add_option("--port", port, "port (0: any free port)")->capture_default_str();
  serve_cmd->add_option("--budget-ms", budget_ms, "wall-clock budget per request")->capture_default_str();
  serve_cmd->add_option("--cors", cfg.cors_origin, "Access-Control-Allow-Origin value")->capture_default_str();
  serve_cmd->add_option("--static", cfg.static_dir, "directory served under /");
  serve_cmd->add_option("--max-resolution", cfg.max_resolution, "largest portrait side")->capture_default_str();
  serve_cmd->callback([&] {
    action = [&] {
      cfg.budget = std::chrono::milliseconds(budget_ms);
      serve(host, port, cfg, [&](int p) { err << "listening on http://" << host << ":" << p << std::endl; });
      return int(kOk);
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      auto subs = app.get_subcommands();
      out << (subs.empty() ? app.help() : subs.front()->help());
      return kOk;
    }
    err << e.what() << "\n";
    return kUsage;
  }
  try {
    return action ? action() : int(kUsage);
  } catch (const std::exception& e) {
    err << error_to_json(e).dump() << "\n";
    return kUsage;
  }
}

}  // namespace symbill::cli
