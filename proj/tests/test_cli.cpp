#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"

using namespace symbill;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  json body() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("symbill_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove(p);
  return p;
}

}  // namespace

TEST_CASE("argument helpers") {
  FamilySpec s = cli::parse_family_shorthand("penthouse:a=2,b=3/5");
  CHECK(s.family == "penthouse");
  CHECK(s.params.at("a") == 2);
  CHECK(s.params.at("b") == make_rat(3, 5));
  CHECK(cli::parse_family_shorthand("quad").params.empty());
  CHECK(cli::parse_rat_list("5,2,3/2") == std::vector<Rat>{Rat(5), Rat(2), make_rat(3, 2)});
  CHECK(cli::parse_rat_list("0..1:3") == std::vector<Rat>{Rat(0), make_rat(1, 2), Rat(1)});
  CHECK(cli::parse_resolution("128") == std::pair{128, 128});
  CHECK(cli::parse_resolution("128x96") == std::pair{128, 96});
  CHECK_THROWS(cli::parse_resolution("x"));
  CHECK(cli::load_table("quad").size() == 4);
  CHECK(cli::load_table(R"({"vertices": [[0,0],[1,0],[0,1]]})").size() == 3);
  CHECK(cli::load_table(R"({"family": "penthouse", "params": {"a": "2", "b": "3/5"}})").size() == 5);
}

TEST_CASE("help and usage errors") {
  Run h = run({"--help"});
  CHECK(h.code == cli::kOk);
  CHECK(h.out.find("certify") != std::string::npos);
  Run sh = run({"certify", "--help"});
  CHECK(sh.code == cli::kOk);
  CHECK(sh.out.find("--max-tiles") != std::string::npos);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"orbit", "quad"}).code == cli::kUsage);
  Run bad = run({"orbit", "quad", "--phase", "0,1/2,0,1/2"});
  CHECK(bad.code == cli::kUsage);
  CHECK(json::parse(bad.err).contains("error"));
  CHECK(run({"certify", "nosuchfamily"}).code == cli::kUsage);
}

TEST_CASE("orbit and step") {
  Run o = run({"orbit", "triangle", "--phase", "0,1/2,1,1/2", "--points", "--classify"});
  REQUIRE(o.code == cli::kOk);
  json j = o.body();
  CHECK(j.at("period") == 3);
  CHECK(j.at("chords").size() == 3);
  CHECK(j.contains("stability"));

  Run capped = run({"orbit", "kite", "--phase", "0,1/7,1,2/7", "--max", "30"});
  CHECK(capped.code == cli::kBudgetExhausted);
  CHECK(capped.body().at("status") == "capped");

  Run s = run({"step", "quad", "--phase", "0,1/6,1,1/4"});
  REQUIRE(s.code == cli::kOk);
  json next = s.body();
  Run b = run({"step", "quad", "--back", "--phase",
               std::to_string(next.at("next").at("tail").get<int>()) + "," + next.at("next").at("s").get<std::string>() +
                   "," + std::to_string(next.at("next").at("head").get<int>()) + "," +
                   next.at("next").at("t").get<std::string>()});
  REQUIRE(b.code == cli::kOk);
  CHECK(b.body().at("next").at("s") == "1/6");
  CHECK(b.body().at("next").at("t") == "1/4");
}

TEST_CASE("certify, write and re-check") {
  fs::path cert = temp_file("cert.json");
  Run c = run({"certify", "quad", "--out", cert.string()});
  REQUIRE(c.code == cli::kOk);
  CHECK(c.body().at("periods") == json::array({20, 36}));
  CHECK(c.body().at("check").at("ok") == true);
  CHECK(run({"check-cert", cert.string()}).code == cli::kOk);

  // tamper with an orbit area
  json j = json::parse(std::ifstream(cert));
  j["tile_orbits"][0]["orbit_area"] = "1";
  std::ofstream(cert) << j.dump();
  CHECK(run({"check-cert", cert.string()}).code == cli::kVerificationFailed);
  fs::remove(cert);

  CHECK(run({"certify", "quad", "--max-tiles", "3"}).code == cli::kBudgetExhausted);
  CHECK(run({"certify", "penthouse:a=2,b=3/5", "--max-steps", "5"}).code == cli::kVerificationFailed);
}

TEST_CASE("validate") {
  CHECK(run({"validate", "[[0,0],[1,0],[0,1]]"}).code == cli::kOk);
  Run bow = run({"validate", "[[0,0],[1,1],[1,0],[0,1]]"});
  CHECK(bow.code == cli::kVerificationFailed);
  CHECK(bow.body().at("valid") == false);
}

TEST_CASE("portrait files") {
  fs::path png = temp_file("p.png"), js = temp_file("p.json");
  Run r = run({"portrait", "quad", "--res", "32", "--out", png.string(), "--scale", "2"});
  REQUIRE(r.code == cli::kOk);
  CHECK(fs::file_size(png) > 100);
  std::ifstream in(png, std::ios::binary);
  char sig[8];
  in.read(sig, 8);
  CHECK(std::string(sig + 1, 3) == "PNG");

  REQUIRE(run({"portrait", "quad", "--res", "20x10", "--out", js.string()}).code == cli::kOk);
  json j = json::parse(std::ifstream(js));
  CHECK(j.at("cells").size() == 200);
  CHECK(run({"portrait", "quad", "--out", temp_file("p.gif").string()}).code == cli::kUsage);
  fs::remove(png);
  fs::remove(js);
}

TEST_CASE("diffbody and perturb") {
  Run d = run({"diffbody", "quad"});
  REQUIRE(d.code == cli::kOk);
  CHECK(d.body().at("identity_holds") == true);
  CHECK(d.body().at("phase_area") == "19");
  Run a = run({"perturb", "quad", "--eps", "1/100", "--seed", "4"});
  Run b = run({"perturb", "quad", "--eps", "1/100", "--seed", "4"});
  CHECK(a.code == cli::kOk);
  CHECK(a.out == b.out);
}

TEST_CASE("scan and kite search") {
  Run s = run({"scan", "penthouse", "--a", "2,1", "--b", "3/5"});
  REQUIRE(s.code == cli::kOk);
  CHECK(s.body().at("fully_periodic") == 2);
  Run h = run({"scan", "lattice_hexagon", "--box", "lo=1,hi=2"});
  CHECK(h.code == cli::kOk);
  Run k = run({"search-kite", "--max-denominator", "5", "--random", "50", "--max-period", "100"});
  REQUIRE(k.code == cli::kOk);
  CHECK(k.body().at("period_counts").contains("6"));
}
