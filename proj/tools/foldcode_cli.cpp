// Command-line front end: bounds, table reproduction, algebra verification and
// problem export. See README for the full grammar.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "foldcode/delsarte.hpp"
#include "foldcode/model.hpp"
#include "foldcode/oracle.hpp"
#include "foldcode/sdpa_io.hpp"
#include "foldcode/solver.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace foldcode;

constexpr const char* kVersion = "0.1.0";
constexpr int kMaxSdpN = 20;
constexpr int kMaxLpN = 32;

struct ToolConfig {
  double tol = 1e-8;
  int max_iter = 200;
  int workers = 1;
};

// precedence: flags > environment (FOLDCODE_*) > config file > defaults
ToolConfig resolve_config(const std::string& config_path, const CLI::Option* tol_opt,
                          double tol_flag, const CLI::Option* iter_opt, int iter_flag,
                          const CLI::Option* workers_opt, int workers_flag) {
  ToolConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key == "tol") cfg.tol = std::stod(val);
      else if (key == "max_iter") cfg.max_iter = std::stoi(val);
      else if (key == "workers") cfg.workers = std::stoi(val);
    }
  }
  if (const char* e = std::getenv("FOLDCODE_TOL")) cfg.tol = std::atof(e);
  if (const char* e = std::getenv("FOLDCODE_MAXITER")) cfg.max_iter = std::atoi(e);
  if (const char* e = std::getenv("FOLDCODE_WORKERS")) cfg.workers = std::atoi(e);
  if (tol_opt->count()) cfg.tol = tol_flag;
  if (iter_opt->count()) cfg.max_iter = iter_flag;
  if (workers_opt->count()) cfg.workers = workers_flag;
  if (cfg.tol <= 0 || cfg.max_iter <= 0 || cfg.workers <= 0)
    throw CLI::ValidationError("config", "tol, max_iter and workers must be positive");
  return cfg;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const ToolConfig& cfg) {
  std::ostringstream os;
  os << "max_iter=" << cfg.max_iter << ";tol=" << cfg.tol << ";workers=" << cfg.workers;
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SolverConfig solver_config(const ToolConfig& cfg) {
  SolverConfig sc;
  sc.tol_gap = sc.tol_feas = cfg.tol;
  sc.max_iter = cfg.max_iter;
  return sc;
}

struct RunRecord {
  int n, d;
  std::string method;
  BoundResult result;
  std::string tool_version, cfg_hash, timestamp;
};

json run_record_json(const RunRecord& rec, bool deterministic) {
  json j;
  j["n"] = rec.n;
  j["d"] = rec.d;
  j["method"] = rec.method;
  j["status"] = to_string(rec.result.status);
  j["objective"] = rec.result.objective;
  j["bound"] = rec.result.bound;
  j["iterations"] = rec.result.iterations;
  j["residuals"] = {{"primal", rec.result.primal_res},
                    {"dual", rec.result.dual_res},
                    {"gap", rec.result.rel_gap}},
  j["min_block_eigenvalues"] = rec.result.min_block_eigenvalues;
  j["wall_time_ms"] = deterministic ? 0 : rec.result.wall_time_ms;
  j["tool_version"] = rec.tool_version;
  j["config_hash"] = rec.cfg_hash;
  j["timestamp"] = deterministic ? "" : rec.timestamp;
  return j;
}

BoundResult run_method(int n, int d, const std::string& method, const ToolConfig& cfg) {
  if (method == "sdp") return solve(build_sdp(n, d), solver_config(cfg));
  return delsarte_bound(n, d, solver_config(cfg));
}

void check_bound_args(int n, int d, const std::string& method) {
  const int cap = (method == "sdp") ? kMaxSdpN : kMaxLpN;
  if (n < kMinN || n > cap)
    throw CLI::ValidationError("--n", "n must be in [6, " + std::to_string(cap) +
                                          "] for method " + method);
  if (d < 1 || d > diameter(n))
    throw CLI::ValidationError("--d", "d must be in [1, floor(n/2)]");
}

// paper table rows bundled for --expected
struct ExpectedRow {
  int n, d;
  long long sdp, delsarte;
};
const std::vector<ExpectedRow> kExpectedBounds = {
    {8, 2, 28, 64},    {10, 2, 256, 256}, {10, 3, 24, 32},  {12, 3, 87, 128},
    {10, 4, 16, 16},   {12, 4, 54, 85},   {9, 2, 93, 112},  {13, 2, 1348, 1877},
    {11, 3, 85, 85},   {13, 3, 213, 213}, {11, 4, 20, 27},  {13, 4, 111, 120},
};

std::vector<ExpectedRow> load_expected(const std::string& path) {
  if (path.empty()) return kExpectedBounds;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--expected", "cannot open " + path);
  std::vector<ExpectedRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ExpectedRow r{};
    char comma;
    std::istringstream ls(line);
    ls >> r.n >> comma >> r.d >> comma >> r.sdp >> comma >> r.delsarte;
    if (ls) rows.push_back(r);
  }
  return rows;
}

int cmd_bound(int n, int d, std::string method, const std::string& format,
              bool deterministic, const ToolConfig& cfg) {
  if (method == "delsarte") method = "delsarte-lp";
  check_bound_args(n, d, method == "sdp" ? "sdp" : "delsarte-lp");
  RunRecord rec{n, d, method, run_method(n, d, method == "sdp" ? "sdp" : "lp", cfg),
                kVersion, config_hash(cfg), utc_timestamp()};
  rec.method = method;
  if (format == "json") {
    std::cout << run_record_json(rec, deterministic).dump(2) << "\n";
  } else {
    std::cout << "n=" << n << " d=" << d << " method=" << method
              << " status=" << to_string(rec.result.status)
              << " objective=" << rec.result.objective << " bound=" << rec.result.bound
              << "\n";
  }
  return rec.result.status == SolveStatus::optimal ? 0 : 2;
}

int cmd_table(int n_min, int n_max, const std::vector<int>& ds, bool use_expected,
              const std::string& expected_path, bool deterministic,
              const ToolConfig& cfg) {
  if (ds.empty()) throw CLI::ValidationError("--d", "at least one distance required");
  if (n_min < kMinN || n_max > kMaxSdpN || n_min > n_max)
    throw CLI::ValidationError("--n-min/--n-max",
                               "range must lie inside [6, " + std::to_string(kMaxSdpN) + "]");
  const auto expected = use_expected ? load_expected(expected_path) : std::vector<ExpectedRow>{};

  struct Row {
    int n, d;
    BoundResult sdp, lp;
  };
  std::vector<std::pair<int, int>> cells;
  for (int n = n_min; n <= n_max; ++n)
    for (int d : ds)
      if (d >= 1 && d <= diameter(n)) cells.emplace_back(n, d);

  std::vector<Row> rows(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      auto [n, d] = cells[k];
      rows[k] = Row{n, d, run_method(n, d, "sdp", cfg), run_method(n, d, "lp", cfg)};
    }
  };
  std::vector<std::thread> pool;
  const int nworkers = std::max(1, std::min<int>(cfg.workers, cells.size()));
  for (int w = 0; w < nworkers - 1; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::ostringstream out;
  out << "n,d,sdp_bound,delsarte_bound,sdp_objective,lp_objective,sdp_status,"
         "lp_status,sdp_ms,lp_ms";
  if (use_expected) out << ",expected_sdp,expected_delsarte,match";
  out << "\n";
  int exit_code = 0;
  for (const Row& r : rows) {
    out << r.n << ',' << r.d << ',' << r.sdp.bound << ',' << r.lp.bound << ','
        << r.sdp.objective << ',' << r.lp.objective << ',' << to_string(r.sdp.status)
        << ',' << to_string(r.lp.status) << ',' << (deterministic ? 0 : r.sdp.wall_time_ms)
        << ',' << (deterministic ? 0 : r.lp.wall_time_ms);
    if (r.sdp.status != SolveStatus::optimal || r.lp.status != SolveStatus::optimal)
      exit_code = 2;
    if (use_expected) {
      const ExpectedRow* exp = nullptr;
      for (const auto& e : expected)
        if (e.n == r.n && e.d == r.d) exp = &e;
      if (exp) {
        const bool ok = exp->sdp == r.sdp.bound && exp->delsarte == r.lp.bound;
        out << ',' << exp->sdp << ',' << exp->delsarte << ',' << (ok ? "yes" : "MISMATCH");
        if (!ok) exit_code = 2;
      } else {
        out << ",,,";
      }
    }
    out << "\n";
  }
  std::cout << out.str();
  return exit_code;
}

int cmd_verify(int n, const std::string& json_path) {
  if (n < kMinN || n > kOracleMaxN)
    throw CLI::ValidationError("--n", "verification requires 6 <= n <= 13");
  VerifyReport rep = full_verification(n);
  json checks = json::array();
  int failures = 0;
  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "pass  " : "FAIL  ") << c.name;
    if (c.residual != 0.0) std::cout << "  (residual " << c.residual << ")";
    if (!c.pass && !c.detail.empty()) std::cout << "  [" << c.detail << "]";
    std::cout << "\n";
    checks.push_back({{"identity", c.name},
                      {"status", c.pass ? "pass" : "fail"},
                      {"max_residual", c.residual}});
    if (!c.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed" : "FAILURES: " + std::to_string(failures))
            << " (n=" << n << ", " << rep.checks.size() << " checks)\n";
  if (!json_path.empty()) {
    json j{{"n", n}, {"all_pass", failures == 0}, {"checks", checks}};
    std::ofstream out(json_path);
    out << j.dump(2) << "\n";
  }
  return failures == 0 ? 0 : 1;
}

int cmd_export(int n, int d, const std::string& out_path) {
  check_bound_args(n, d, "sdp");
  SdpProblem prob = build_sdp(n, d);
  std::ofstream out(out_path);
  if (!out) throw CLI::ValidationError("--out", "cannot open " + out_path);
  out << export_sdpa(prob, kVersion);
  std::cout << problem_summary_json(prob) << "\n";
  return 0;
}

int cmd_dump_beta(int n, const std::string& out_path, bool with_oracle) {
  if (n < kMinN || n > kMaxSdpN)
    throw CLI::ValidationError("--n", "n must be in [6, 20]");
  BetaTable table = build_beta_table(n);
  if (with_oracle) {
    if (n > kOracleMaxN)
      throw CLI::ValidationError("--oracle", "oracle arbitration requires n <= 13");
    TerwilligerOracle oracle(n);
    auto mismatches = arbitrate_beta_table(table, oracle.beta_table_oracle());
    for (const auto& m : mismatches)
      std::cerr << "oracle overrides (r,i,j,t)=(" << m.r << "," << m.i << "," << m.j
                << "," << m.t << "): closed form " << m.closed_form << " -> "
                << m.oracle << "\n";
  }
  const std::string csv = beta_table_csv(table);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path);
    if (!out) throw CLI::ValidationError("--out", "cannot open " + out_path);
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semidefinite and linear programming code bounds for the folded n-cube"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  double tol_flag = 1e-8;
  int iter_flag = 200, workers_flag = 1;
  app.add_option("--config", config_path, "key=value configuration file");
  auto* tol_opt = app.add_option("--tol", tol_flag, "solver tolerance");
  auto* iter_opt = app.add_option("--max-iter", iter_flag, "iteration cap");
  auto* workers_opt = app.add_option("--workers", workers_flag, "table worker count");

  int n = 0, d = 1;
  std::string method = "sdp", format = "json", out_path, json_path, expected_path;
  bool deterministic = false, with_oracle = false, use_expected = false;
  int n_min = 8, n_max = 13;
  std::vector<int> ds;

  auto* bound = app.add_subcommand("bound", "compute one upper bound");
  bound->add_option("--n", n, "folded cube parameter")->required();
  bound->add_option("--d", d, "minimum distance")->required();
  bound->add_option("--method", method, "sdp | delsarte")
      ->check(CLI::IsMember({"sdp", "delsarte", "delsarte-lp"}));
  bound->add_option("--format", format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  bound->add_flag("--deterministic", deterministic, "suppress timestamp and timing");

  auto* table = app.add_subcommand("table", "bounds over a parameter range (CSV)");
  table->add_option("--n-min", n_min, "smallest n")->required();
  table->add_option("--n-max", n_max, "largest n")->required();
  table->add_option("--d", ds, "distances (repeat or comma separated)")
      ->required()
      ->delimiter(',');
  auto* exp_opt = table->add_option("--expected", expected_path,
                                    "compare against a bounds table (default: bundled)");
  exp_opt->expected(0, 1);
  table->add_flag("--deterministic", deterministic, "suppress timing columns");

  auto* verify = app.add_subcommand("verify", "run the algebra verification suite");
  verify->add_option("--n", n, "instance size (6..13)")->required();
  verify->add_option("--json", json_path, "write the machine-readable report here");

  auto* exp = app.add_subcommand("export", "write the SDP in SDPA sparse format");
  exp->add_option("--n", n, "folded cube parameter")->required();
  exp->add_option("--d", d, "minimum distance")->required();
  exp->add_option("--out", out_path, "output path")->required();

  auto* dump = app.add_subcommand("dump-beta", "dump the coefficient table as CSV");
  dump->add_option("--n", n, "folded cube parameter")->required();
  dump->add_option("--out", out_path, "output path (default stdout)");
  dump->add_flag("--oracle", with_oracle, "cross-check against the oracle (n <= 13)");

  try {
    app.parse(argc, argv);
    const ToolConfig cfg = resolve_config(config_path, tol_opt, tol_flag, iter_opt,
                                          iter_flag, workers_opt, workers_flag);
    use_expected = exp_opt->count() > 0;
    if (bound->parsed()) return cmd_bound(n, d, method, format, deterministic, cfg);
    if (table->parsed())
      return cmd_table(n_min, n_max, ds, use_expected, expected_path, deterministic, cfg);
    if (verify->parsed()) return cmd_verify(n, json_path);
    if (exp->parsed()) return cmd_export(n, d, out_path);
    if (dump->parsed()) return cmd_dump_beta(n, out_path, with_oracle);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
