#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "verify.hpp"
#include "weil_lab/weil_lab.hpp"

namespace weil::cli {

enum ExitCode { kPass = 0, kCheckFailure = 1, kUsage = 2, kIo = 3 };

/// "a:b:c" -> three numbers.
inline std::vector<double> split_triple(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError(std::string(what) + ": cannot parse '" + s + "'");
    }
  }
  if (v.size() != 3) throw DomainError(std::string(what) + ": expected three ':'-separated numbers");
  return v;
}

inline verify::GridSpec parse_grid(const std::string& s) {
  const auto v = split_triple(s, "grid");
  if (v[2] < 2 || v[2] != std::floor(v[2])) throw DomainError("grid: point count must be an integer >= 2");
  return {v[0], v[1], static_cast<std::size_t>(v[2])};
}

inline void apply_tolerance(verify::RunConfig& cfg, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw DomainError("tol: expected <id>=<value>, got '" + kv + "'");
  try {
    cfg.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  } catch (const std::exception&) {
    throw DomainError("tol: bad value in '" + kv + "'");
  }
}

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

/// Line-based `key = value` configuration; '#' starts a comment.
inline void load_config(const std::filesystem::path& path, verify::RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config:" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      if (key == "zeros") cfg.zeros_path = value;
      else if (key == "compute_zeros") { if (value == "true" || value == "1") cfg.zeros_path.reset(); }
      else if (key == "height_T") cfg.height_T = std::stod(value);
      else if (key == "cutoff_Z") cfg.cutoff_Z = std::stod(value);
      else if (key == "grid") cfg.grid = parse_grid(value);
      else if (key == "out") cfg.out_dir = value;
      else if (key == "cache") cfg.cache_dir = value;
      else if (key == "reference_table") cfg.reference_table = value;
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key.rfind("tol.", 0) == 0) cfg.tolerances[key.substr(4)] = std::stod(value);
      else throw DomainError("config:" + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw DomainError("config:" + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
}

inline std::filesystem::path ensure_out(const verify::RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir.string());
  return cfg.out_dir;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

inline int cmd_verify(const std::string& suite, const verify::RunConfig& cfg, std::ostream& out) {
  verify::Context ctx(cfg);
  const auto rows = verify::run_suite(suite, ctx);
  bool ok = true;
  nlohmann::json report = nlohmann::json::array();
  for (const auto& r : rows) {
    ok = ok && r.pass;
    report.push_back(verify::to_json(r));
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-40s value %.3e  bound %.3e\n", r.pass ? "ok" : "FAIL", r.check_id.c_str(), r.value,
                  r.bound);
    out << buf;
  }
  const auto path = ensure_out(cfg) / ("report_" + suite + ".json");
  auto f = open_out(path);
  f << nlohmann::json{{"suite", suite}, {"pass", ok}, {"checks", report}}.dump(2) << "\n";
  out << (ok ? "all checks passed" : "some checks failed") << "; report: " << path.string() << "\n";
  return ok ? kPass : kCheckFailure;
}

inline int cmd_zeros(const std::string& action, const std::string& path, const verify::RunConfig& cfg, std::ostream& out) {
  if (action == "import") {
    if (path.empty()) throw DomainError("zeros import: missing table path");
    const auto zs = load_zeros(path, cfg.height_T);
    store_zeros(cfg.cache_dir, zs);
    out << zs.size() << " ordinates <= " << format_height(cfg.height_T) << " cached in "
        << cache_file(cfg.cache_dir, cfg.height_T).string() << "\n";
    if (zs.empty()) out << "warning: empty zero set\n";
  } else if (action == "compute") {
    const auto zs = compute_zeros(cfg.height_T);
    store_zeros(cfg.cache_dir, zs);
    out << zs.size() << " ordinates <= " << format_height(cfg.height_T) << " cached in "
        << cache_file(cfg.cache_dir, cfg.height_T).string() << "\n";
  } else if (action == "list") {
    if (!std::filesystem::is_directory(cfg.cache_dir)) return kPass;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(cfg.cache_dir))
      if (e.path().filename().string().rfind("zeros_T", 0) == 0) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto name = f.stem().string();
      const double T = std::stod(name.substr(7));
      out << name << ": " << load_zeros(f, T).size() << " ordinates\n";
    }
  } else {
    throw DomainError("zeros: unknown action '" + action + "'");
  }
  return kPass;
}

struct ExportArgs {
  std::string object;
  std::size_t index = 1;
  std::string range;
};

inline Grid range_grid(const std::string& range) {
  const auto v = split_triple(range, "range");
  if (!(v[2] > 0.0) || !(v[1] > v[0])) throw DomainError("range: need a < b and step > 0");
  const auto n = static_cast<std::size_t>(std::llround((v[1] - v[0]) / v[2])) + 1;
  return Grid(v[0], v[1], n);
}

inline int cmd_export(const ExportArgs& a, const verify::RunConfig& cfg, std::ostream& out) {
  verify::Context ctx(cfg);
  const auto dir = ensure_out(cfg);
  std::filesystem::path path;
  if (a.object == "psi_gamma") {
    if (a.index < 1) throw DomainError("export: index is 1-based");
    const auto& p = ctx.psi(a.index - 1, cfg.cutoff_Z);
    path = dir / ("psi_gamma_" + std::to_string(a.index) + ".csv");
    auto f = open_out(path);
    write_csv(f, p.samples);
  } else if (a.object == "screw_g") {
    const Grid g = range_grid(a.range.empty() ? "0:5:0.01" : a.range);
    const auto& zs = ctx.zeros();
    const auto v = GridFunction::sample(g, Domain::time, [&](double t) { return screw_g(t, zs).value; });
    path = dir / "screw_g.csv";
    auto f = open_out(path);
    write_csv(f, v);
  } else if (a.object == "omega") {
    const Grid g = range_grid(a.range.empty() ? "-5:5:0.01" : a.range);
    const auto v = GridFunction::sample(g, Domain::time, [](double x) { return cplx(omega_profile(x)); });
    path = dir / "omega.csv";
    auto f = open_out(path);
    write_csv(f, v);
  } else if (a.object == "F_gamma") {
    const auto& zs = ctx.zeros();
    if (a.index < 1 || a.index > zs.size()) throw DomainError("export: index outside the catalog");
    const Grid g = range_grid(a.range.empty() ? "-100:100:0.05" : a.range);
    const auto b = basis_F(zs[a.index - 1], zs);
    const auto v = sample_basis(b, sample_theta(g));
    path = dir / ("F_gamma_" + std::to_string(a.index) + ".csv");
    auto f = open_out(path);
    write_csv(f, v);
  } else {
    throw DomainError("export: unknown object '" + a.object + "'");
  }
  out << "wrote " << path.string() << "\n";
  return kPass;
}

/// Entry point; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"weil-lab: numerical checks of the Weil form, the de Branges basis and the Hilbert-Polya structure"};
  app.require_subcommand(1);
  verify::RunConfig cfg;
  std::string config_path, zeros_path, grid, out_dir, suite, action, table_path;
  bool compute = false;
  std::vector<std::string> tols;
  std::optional<double> T, Z;
  std::optional<std::uint64_t> seed;
  ExportArgs ex;

  app.add_option("--config", config_path, "key = value configuration file");
  auto* zopt = app.add_option("--zeros", zeros_path, "ordinate table (one per line)");
  app.add_flag("--compute-zeros", compute, "compute zeros by root finding (default)")->excludes(zopt);
  app.add_option("--height-T", T, "zero height T (<= 120)");
  app.add_option("--cutoff-Z", Z, "frequency cutoff Z (>= 500)");
  app.add_option("--grid", grid, "time grid xmin:xmax:n for psi_gamma");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tol", tols, "tolerance override <id>=<value>");
  app.add_option("--seed", seed, "seed for the randomized checks");

  auto* v = app.add_subcommand("verify", "run a verification suite");
  v->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(verify::suite_names()));
  auto* z = app.add_subcommand("zeros", "manage the zero cache");
  z->add_option("action", action, "import | compute | list")->required()->check(CLI::IsMember({"import", "compute", "list"}));
  z->add_option("path", table_path, "table to import");
  auto* e = app.add_subcommand("export", "write CSV artifacts");
  e->add_option("object", ex.object, "psi_gamma | screw_g | omega | F_gamma")
      ->required()
      ->check(CLI::IsMember({"psi_gamma", "screw_g", "omega", "F_gamma"}));
  e->add_option("--index", ex.index, "1-based zero index");
  e->add_option("--range", ex.range, "a:b:step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (!config_path.empty()) load_config(config_path, cfg);
    if (!zeros_path.empty()) cfg.zeros_path = zeros_path;
    if (compute) cfg.zeros_path.reset();
    if (T) cfg.height_T = *T;
    if (Z) cfg.cutoff_Z = *Z;
    if (seed) cfg.seed = *seed;
    if (!grid.empty()) cfg.grid = parse_grid(grid);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    for (const auto& t : tols) apply_tolerance(cfg, t);
    cfg.validate();

    if (*v) return cmd_verify(suite, cfg, out);
    if (*z) return cmd_zeros(action, table_path, cfg, out);
    return cmd_export(ex, cfg, out);
  } catch (const IoError& io) {
    err << "error: " << io.what() << "\n";
    return kIo;
  } catch (const Error& de) {
    err << "error: " << de.what() << "\n";
    return kUsage;
  }
}

}  // namespace weil::cli
