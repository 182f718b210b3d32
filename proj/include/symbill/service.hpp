#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <string>

#include "symbill/io.hpp"

namespace symbill {

struct ServiceConfig {
  std::chrono::milliseconds budget{30000};  // wall clock per request
  std::string cors_origin = "*";
  long max_orbit_steps = 1'000'000;
  int max_resolution = 1024;
  std::string static_dir;  // served under / when set
};

struct ApiResponse {
  int status = 200;
  json body;
};

// Pure handlers: a function of the request body and the config only.
ApiResponse api_families();
ApiResponse api_validate(const json& req);
ApiResponse api_orbit(const json& req, const ServiceConfig& cfg);
ApiResponse api_portrait(const json& req, const ServiceConfig& cfg, const std::atomic<bool>* cancel = nullptr);
ApiResponse api_certify(const json& req, const ServiceConfig& cfg, const std::atomic<bool>* cancel = nullptr);
ApiResponse api_perturb(const json& req);

// Progressive portrait: one JSON line per finished band of rows,
// {"type":"rows","from":r0,"to":r1,"cells":[...]}, then a final
// {"type":"portrait", ...} line. `emit` returning false cancels.
void api_portrait_stream(const json& req, const ServiceConfig& cfg, const std::function<bool(const std::string&)>& emit);

// Routes "GET /api/families", "POST /api/orbit", ...; malformed bodies and
// engine errors become 400 responses.
ApiResponse dispatch(const std::string& method, const std::string& path, const std::string& body,
                     const ServiceConfig& cfg, const std::atomic<bool>* cancel = nullptr);

// Blocks serving HTTP until stop_service() or the process ends. `on_ready`
// receives the bound port (useful with port 0).
void serve(const std::string& host, int port, const ServiceConfig& cfg,
           const std::function<void(int)>& on_ready = {});
void stop_service();

}  // namespace symbill
