// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "verify.hpp"

namespace {

const std::map<int, std::string> kTitles = {
    {1, "special functions: xi(1/2), symmetry, |Theta| = 1, Theta(0) = 1"},
    {2, "Theta'(gamma)/2 = -i/m_gamma at all catalog zeros"},
    {3, "basis values F_gamma(gamma') over the full table"},
    {4, "Weil form of psi_gamma: 1/pi on the diagonal, 0 across"},
    {5, "2 pi ||psi_gamma1||^2 = 1 at Z and the 1/Z defect rate"},
    {6, "K: involution, isometry, fixes psi_gamma1"},
    {7, "screw kernel Gram positivity and the antiderivative relation"},
    {8, "Weil positivity on random bumps"},
    {9, "restriction isometry for gamma1..gamma3"},
    {10, "Hilbert-Polya eigen-residuals and perturbation detection"},
    {11, "V(0) decomposition of random bumps"},
    {12, "zero catalog: 29 zeros below 100, table match, counting"},
};

}  // namespace

int main() {
  using namespace weil::verify;
  RunConfig cfg;
  cfg.reference_table = std::string(WEIL_LAB_DATA_DIR) + "/zeros_first30.txt";
  cfg.cache_dir = std::filesystem::temp_directory_path() / "weil_lab_acceptance_cache";
  cfg.out_dir = std::filesystem::temp_directory_path() / "weil_lab_acceptance_out";
  Context ctx(cfg);

  std::map<int, std::vector<CheckRow>> by_criterion;
  std::map<int, double> seconds;
  for (const auto& suite : {"zeros", "special", "weil", "debranges", "screw", "hilbert_polya"}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_suite(suite, ctx);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("# suite %-14s %7.2f s\n", suite, dt);
    for (const auto& r : rows)
      if (r.criterion > 0) by_criterion[r.criterion].push_back(r);
  }

  bool all = true;
  for (const auto& [n, title] : kTitles) {
    const auto it = by_criterion.find(n);
    const bool present = it != by_criterion.end() && !it->second.empty();
    bool ok = present;
    if (present)
      for (const auto& r : it->second) ok = ok && r.pass;
    all = all && ok;
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", n, title.c_str());
    if (present)
      for (const auto& r : it->second)
        std::printf("        %-4s %-40s value %.3e  bound %.3e\n", r.pass ? "ok" : "FAIL", r.check_id.c_str(), r.value, r.bound);
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
