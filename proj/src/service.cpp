#include "symbill/service.hpp"

#include <httplib.h>

#include <future>
#include <mutex>
#include <thread>

#include "symbill/portrait.hpp"

namespace symbill {

namespace {

ApiResponse bad_request(const std::exception& e) { return {400, error_to_json(e)}; }

// First present key among the spellings.
const json* find(const json& req, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (req.is_object() && req.contains(k)) return &req.at(k);
  return nullptr;
}

long get_long(const json& req, std::initializer_list<const char*> keys, long def) {
  const json* v = find(req, keys);
  if (!v) return def;
  if (!v->is_number_integer()) throw Error(Errc::ParseError, std::string(*keys.begin()) + " must be an integer");
  return v->get<long>();
}

std::chrono::steady_clock::time_point deadline_for(const ServiceConfig& cfg) {
  return std::chrono::steady_clock::now() + cfg.budget;
}

PortraitOptions portrait_options(const json& req, const ServiceConfig& cfg, const std::atomic<bool>* cancel) {
  PortraitOptions o;
  const json* res = find(req, {"resolution"});
  if (res && res->is_array() && res->size() == 2) {
    o.nx = (*res)[0].get<int>();
    o.ny = (*res)[1].get<int>();
  } else if (res && res->is_number_integer()) {
    o.nx = o.ny = res->get<int>();
  } else if (res) {
    throw Error(Errc::ParseError, "resolution must be n or [nx, ny]");
  }
  if (o.nx > cfg.max_resolution || o.ny > cfg.max_resolution)
    throw Error(Errc::ParamOutOfRange, "resolution above " + std::to_string(cfg.max_resolution));
  o.max_steps = get_long(req, {"maxSteps", "max_steps"}, o.max_steps);
  if (const json* m = find(req, {"mode"})) {
    if (*m == "exact") o.mode = PortraitMode::Exact;
    else if (*m == "float") o.mode = PortraitMode::Float;
    else throw Error(Errc::ParseError, "mode must be \"exact\" or \"float\"");
  }
  o.deadline = deadline_for(cfg);
  o.cancel = cancel;
  return o;
}

json portrait_body(const Portrait& p) {
  json body = portrait_to_json(p);
  body["status"] = p.complete ? "complete" : "capped";
  return body;
}

}  // namespace

ApiResponse api_families() {
  json fams = json::array();
  for (const FamilySchema& f : family_schemas()) {
    json params = json::array();
    for (const ParamSchema& p : f.params) params.push_back({{"name", p.name}, {"kind", p.kind}, {"domain", p.domain}});
    fams.push_back({{"family", f.family}, {"description", f.description}, {"params", params}});
  }
  return {200, {{"families", fams}}};
}

ApiResponse api_validate(const json& req) {
  try {
    std::vector<Point> vs;
    const json& arr = req.is_object() && req.contains("vertices") ? req.at("vertices") : req;
    if (!arr.is_array()) throw Error(Errc::ParseError, "expected 'vertices'");
    for (const json& v : arr) vs.push_back(point_from_json(v));
    std::string name = req.is_object() ? req.value("name", "") : "";
    return {200, validation_to_json(validate(std::move(vs), name))};
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) return bad_request(e);
    json body = error_to_json(e);
    body["valid"] = false;
    return {200, body};
  } catch (const std::exception& e) {
    return bad_request(e);
  }
}

ApiResponse api_orbit(const json& req, const ServiceConfig& cfg) {
  Polygon poly = table_from_json(req);
  const json* ph = find(req, {"phase"});
  if (!ph) throw Error(Errc::ParseError, "missing 'phase'");
  PhasePoint pp = phase_point_from_json(poly, *ph);
  long max_steps = std::min(get_long(req, {"maxSteps", "max_steps"}, 10000), cfg.max_orbit_steps);
  std::string mode = req.value("mode", "exact");
  MapTable table(poly);
  OrbitReport rep;
  if (mode == "exact") {
    OrbitOptions o;
    o.max_steps = max_steps;
    o.collect_points = true;
    rep = orbit(table, pp, o);
  } else if (mode == "float") {
    FloatOrbitOptions o;
    o.max_steps = max_steps;
    o.collect_points = true;
    rep = float_orbit(table, to_float(pp), o);
  } else {
    throw Error(Errc::ParseError, "mode must be \"exact\" or \"float\"");
  }
  json body = orbit_report_to_json(poly, rep, true);
  body["polygon"] = polygon_to_json(poly);
  body["start"] = phase_point_to_json(pp);
  if (!rep.float_mode && rep.status == OrbitStatus::Periodic)
    body["stability"] = stability_to_json(classify(poly, pp, rep.period));
  return {200, body};
}

ApiResponse api_portrait(const json& req, const ServiceConfig& cfg, const std::atomic<bool>* cancel) {
  Polygon poly = table_from_json(req);
  Portrait p = compute_portrait(poly, portrait_options(req, cfg, cancel));
  return {200, portrait_body(p)};
}

void api_portrait_stream(const json& req, const ServiceConfig& cfg,
                         const std::function<bool(const std::string&)>& emit) {
  Polygon poly = table_from_json(req);
  std::atomic<bool> cancel{false};
  PortraitOptions o = portrait_options(req, cfg, &cancel);
  int band = static_cast<int>(get_long(req, {"band"}, std::max(1, o.ny / 16)));
  Portrait p = compute_portrait_progressive(poly, o, band, [&](int r0, int r1, const std::vector<Cell>& cells) {
    json rows = json::array();
    for (std::size_t k = static_cast<std::size_t>(r0) * o.nx; k < static_cast<std::size_t>(r1) * o.nx; ++k)
      rows.push_back(cell_to_json(cells[k]));
    json line = {{"type", "rows"}, {"from", r0}, {"to", r1}, {"cells", rows}};
    if (!emit(line.dump() + "\n")) cancel.store(true);
  });
  if (cancel.load()) return;
  json last = portrait_body(p);
  last["type"] = "portrait";
  emit(last.dump() + "\n");
}

ApiResponse api_certify(const json& req, const ServiceConfig& cfg, const std::atomic<bool>* cancel) {
  Polygon poly = table_from_json(req);
  CertifyBudget b;
  if (const json* bj = find(req, {"budget"})) {
    b.max_tiles = get_long(*bj, {"maxTiles", "max_tiles"}, b.max_tiles);
    b.max_steps = get_long(*bj, {"maxSteps", "max_steps"}, b.max_steps);
  }
  b.deadline = deadline_for(cfg);
  b.cancel = cancel;
  PeriodicityCertificate cert = certify(poly, b);
  json body = certificate_to_json(cert);
  bool timed_out = cert.verdict == CertVerdict::Inconclusive && cert.note == "deadline reached";
  body["status"] = timed_out ? "capped" : "complete";
  if (cert.verdict == CertVerdict::FullyPeriodic) body["check"] = certificate_check_to_json(check_certificate(cert));
  return {200, body};
}

ApiResponse api_perturb(const json& req) {
  Polygon poly = table_from_json(req);
  const json* eps = find(req, {"eps"});
  if (!eps) throw Error(Errc::ParseError, "missing 'eps'");
  std::uint64_t seed = static_cast<std::uint64_t>(get_long(req, {"seed"}, 1));
  Polygon out = perturb(poly, rat_from_json(*eps), seed);
  json body = polygon_to_json(out);
  body["phase_area"] = rat_to_json(phase_area(out));
  body["eps"] = rat_to_json(rat_from_json(*eps));
  body["seed"] = seed;
  return {200, body};
}

ApiResponse dispatch(const std::string& method, const std::string& path, const std::string& body,
                     const ServiceConfig& cfg, const std::atomic<bool>* cancel) {
  try {
    if (method == "GET" && path == "/api/families") return api_families();
    if (method != "POST") return {404, {{"error", "no route " + method + " " + path}}};
    json req = json::parse(body.empty() ? "{}" : body);
    if (path == "/api/validate") return api_validate(req);
    if (path == "/api/orbit") return api_orbit(req, cfg);
    if (path == "/api/portrait") return api_portrait(req, cfg, cancel);
    if (path == "/api/certify") return api_certify(req, cfg, cancel);
    if (path == "/api/perturb") return api_perturb(req);
    return {404, {{"error", "no route " + method + " " + path}}};
  } catch (const std::exception& e) {
    return bad_request(e);
  }
}

namespace {

std::mutex g_server_mu;
httplib::Server* g_server = nullptr;

void add_cors(httplib::Response& res, const ServiceConfig& cfg) {
  res.set_header("Access-Control-Allow-Origin", cfg.cors_origin);
  res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
  res.set_header("Access-Control-Allow-Headers", "Content-Type");
}

// Runs a long handler on a worker while watching the client; a closed
// connection raises the cancel flag the engine polls.
void long_running(const httplib::Request& req, httplib::Response& res, const ServiceConfig& cfg) {
  std::string path = req.path;
  std::string body = req.body;
  res.set_chunked_content_provider("application/json", [path, body, cfg](std::size_t, httplib::DataSink& sink) {
    auto cancel = std::make_shared<std::atomic<bool>>(false);
    auto fut = std::async(std::launch::async, [=] { return dispatch("POST", path, body, cfg, cancel.get()); });
    while (fut.wait_for(std::chrono::milliseconds(100)) != std::future_status::ready) {
      if (!sink.is_writable()) cancel->store(true);
    }
    ApiResponse r = fut.get();
    if (!cancel->load()) {
      std::string out = r.body.dump();
      sink.write(out.data(), out.size());
    }
    sink.done();
    return true;
  });
}

}  // namespace

void serve(const std::string& host, int port, const ServiceConfig& cfg, const std::function<void(int)>& on_ready) {
  httplib::Server svr;
  if (!cfg.static_dir.empty()) svr.set_mount_point("/", cfg.static_dir);
  svr.Options(R"(/api/.*)", [&](const httplib::Request&, httplib::Response& res) {
    add_cors(res, cfg);
    res.status = 204;
  });
  svr.Get("/api/families", [&](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r = dispatch("GET", req.path, "", cfg);
    add_cors(res, cfg);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  });
  for (const char* route : {"/api/validate", "/api/orbit", "/api/perturb"}) {
    svr.Post(route, [&](const httplib::Request& req, httplib::Response& res) {
      ApiResponse r = dispatch("POST", req.path, req.body, cfg);
      add_cors(res, cfg);
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    });
  }
  svr.Post("/api/certify", [&](const httplib::Request& req, httplib::Response& res) {
    add_cors(res, cfg);
    long_running(req, res, cfg);
  });
  svr.Post("/api/portrait", [&](const httplib::Request& req, httplib::Response& res) {
    add_cors(res, cfg);
    json body;
    try {
      body = json::parse(req.body.empty() ? "{}" : req.body);
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(error_to_json(e).dump(), "application/json");
      return;
    }
    if (!body.is_object() || !body.value("stream", false)) {
      long_running(req, res, cfg);
      return;
    }
    res.set_chunked_content_provider("application/x-ndjson", [body, cfg](std::size_t, httplib::DataSink& sink) {
      try {
        api_portrait_stream(body, cfg, [&](const std::string& line) {
          return sink.is_writable() && sink.write(line.data(), line.size());
        });
      } catch (const std::exception& e) {
        std::string out = error_to_json(e).dump() + "\n";
        sink.write(out.data(), out.size());
      }
      sink.done();
      return true;
    });
  });

  int bound = port;
  if (port == 0) bound = svr.bind_to_any_port(host);
  else if (!svr.bind_to_port(host, port)) bound = -1;
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  {
    std::lock_guard<std::mutex> lock(g_server_mu);
    g_server = &svr;
  }
  if (on_ready) on_ready(bound);
  svr.listen_after_bind();
  std::lock_guard<std::mutex> lock(g_server_mu);
  g_server = nullptr;
}

void stop_service() {
  std::lock_guard<std::mutex> lock(g_server_mu);
  if (g_server) g_server->stop();
}

}  // namespace symbill
