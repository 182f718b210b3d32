// Serial reference vs OpenMP kernels: portrait, scan and periodic search.
// Each row also checks that both produce the same result.
//
//   bench_kernels [--jobs N] [--repeat R]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "symbill/families.hpp"
#include "symbill/portrait.hpp"
#include "symbill/scan.hpp"

using namespace symbill;

namespace {

double best_of(int repeat, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeat; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-34s %9.3f %9.3f %7.2fx  %s\n", name, serial, parallel, serial / parallel, same ? "same" : "DIFFER");
}

std::string entries(const ScanReport& r) {
  std::string s;
  for (const ScanEntry& e : r.entries) s += scan_entry_to_json(e).dump();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  int jobs = omp_get_max_threads(), repeat = 3;
  for (int k = 1; k + 1 < argc; k += 2) {
    if (!std::strcmp(argv[k], "--jobs")) jobs = std::atoi(argv[k + 1]);
    else if (!std::strcmp(argv[k], "--repeat")) repeat = std::atoi(argv[k + 1]);
  }
  std::printf("threads %d, best of %d\n", jobs, repeat);
  std::printf("%-34s %9s %9s %8s\n", "kernel", "serial s", "omp s", "speedup");
  bool all = true;

  for (auto [name, poly, n] : {std::tuple{"portrait quad 256 exact", quad(), 256},
                               std::tuple{"portrait penthouse(2,3/5) 192", penthouse(Rat(2), make_rat(3, 5)), 192},
                               std::tuple{"portrait kite 96", kite(), 96}}) {
    PortraitOptions o;
    o.nx = o.ny = n;
    o.mode = PortraitMode::Exact;
    o.max_steps = 2000;
    o.jobs = jobs;
    std::vector<Cell> cs, cp;
    double ts = best_of(repeat, [&] { cs = compute_portrait_serial(poly, o).cells; });
    double tp = best_of(repeat, [&] { cp = compute_portrait(poly, o).cells; });
    bool same = cs == cp;
    all &= same;
    row(name, ts, tp, same);
  }

  {
    ScanOptions o;
    o.jobs = jobs;
    o.embed_certificates = false;
    auto members = hexhouse_members(5, 3);
    ScanReport ss, sp;
    double ts = best_of(repeat, [&] { ss = run_scan_serial("hexhouse", members, nullptr, o); });
    double tp = best_of(repeat, [&] { sp = run_scan("hexhouse", members, nullptr, o); });
    bool same = entries(ss) == entries(sp);
    all &= same;
    row("scan hexhouse 5x3", ts, tp, same);
  }

  {
    PeriodSearchOptions o;
    o.max_denominator = 9;
    o.random_samples = 500;
    o.max_period = 1000;
    o.jobs = jobs;
    PeriodSearchReport rs, rp;
    double ts = best_of(repeat, [&] { rs = search_periodic_serial(kite(), o); });
    double tp = best_of(repeat, [&] { rp = search_periodic(kite(), o); });
    bool same = search_report_to_json(rs).dump() == search_report_to_json(rp).dump();
    all &= same;
    row("kite search q<=9 +500", ts, tp, same);
  }
  return all ? 0 : 1;
}
