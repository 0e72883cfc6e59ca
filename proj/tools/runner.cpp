#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "specopt/apps/instance_io.hpp"
#include "specopt/errors.hpp"
#include "specopt/trace_io.hpp"

#ifndef SPECOPT_VERSION
#define SPECOPT_VERSION "unknown"
#endif

namespace specopt::tools {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Shortest decimal form that parses back to exactly v.
std::string fmt17(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

long long parse_integer(const std::string& s) {
  size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

  json as_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json obj;
      for (size_t i = 0; i < header.size(); ++i) {
        const std::string& cell = r[i];
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v)) {
          obj[header[i]] = v;
        } else {
          obj[header[i]] = cell;
        }
      }
      arr.push_back(std::move(obj));
    }
    return arr;
  }
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string quoted(std::string s) {
  std::replace(s.begin(), s.end(), '"', '\'');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return "\"" + s + "\"";
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["sizes"] = c.sizes;
  j["seeds"] = c.seeds;
  j["deltas"] = c.deltas;
  if (c.eps) j["eps"] = *c.eps;
  if (c.max_outer) j["max_outer"] = *c.max_outer;
  j["restarts"] = c.restarts;
  j["samples"] = c.samples;
  j["formats"] = c.formats;
  j["trace"] = c.trace;
  j["region_grid"] = c.region_grid;
  return j;
}

std::string summary_triplet(std::vector<double> v) {
  if (v.empty()) return "nan,nan,nan";
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double mn = *lo;
  const double mx = *hi;
  return format_summary_value(mn) + "," + format_summary_value(median(v)) + "," +
         format_summary_value(mx);
}

// --- gensdp -----------------------------------------------------------------

void run_gensdp(const ExperimentConfig& cfg, ExperimentReport& rep,
                const fs::path& out, std::ostream* trace) {
  const SolverConfig sc = cfg.solver_config();
  fs::create_directories(out / "instances");
  for (int n : cfg.sizes) {
    for (std::uint64_t seed : cfg.seeds) {
      GenSdpRow row;
      row.n = n;
      row.seed = seed;
      try {
        const auto inst = apps::gen_sdp_instance(n, n, seed);
        write_file(out / "instances" /
                       ("gensdp_n" + std::to_string(n) + "_seed" + std::to_string(seed) + ".json"),
                   apps::to_json(inst) + "\n");
        row.run = apps::run_gen_sdp(inst, sc);
        row.ok = true;
        if (trace) {
          write_trace_jsonl(row.run.result.trace, *trace,
                            "gensdp:n=" + std::to_string(n) + ":seed=" + std::to_string(seed));
        }
      } catch (const std::exception& e) {
        row.error = e.what();
        rep.exit_code = 2;
      }
      rep.gensdp.push_back(std::move(row));
    }
  }

  Table results;
  results.header = {"experiment", "n", "s", "seed", "status", "iterations", "f", "f_star",
                    "dist_to_opt", "residual_eq", "residual_ineq", "solved", "error"};
  for (const auto& r : rep.gensdp) {
    if (!r.ok) {
      results.rows.push_back({"gensdp", std::to_string(r.n), std::to_string(r.n),
                              std::to_string(r.seed), "error", "0", "nan", "nan", "nan",
                              "nan", "nan", "0", quoted(r.error)});
      continue;
    }
    const auto& g = r.run;
    results.rows.push_back({"gensdp", std::to_string(r.n), std::to_string(r.n),
                            std::to_string(r.seed), to_string(g.result.trace.status),
                            std::to_string(g.result.iterations()), fmt17(g.f),
                            fmt17(g.f_star), fmt17(g.dist_to_opt), fmt17(g.residual_eq), fmt17(g.residual_ineq),
                            flag(g.solved), ""});
  }
  write_file(out / "results.csv", results.csv());
  if (std::find(cfg.formats.begin(), cfg.formats.end(), "json") != cfg.formats.end()) {
    write_file(out / "results.json", results.as_json().dump(1) + "\n");
  }

  Table summary;
  summary.header = {"n", "count", "solved", "dist_min", "dist_median", "dist_max",
                    "eq_min", "eq_median", "eq_max", "ineq_min", "ineq_median", "ineq_max"};
  for (int n : cfg.sizes) {
    std::vector<double> dist, eq, ineq;
    int solved = 0;
    int count = 0;
    for (const auto& r : rep.gensdp) {
      if (r.n != n) continue;
      ++count;
      if (!r.ok) continue;
      dist.push_back(r.run.dist_to_opt);
      eq.push_back(r.run.residual_eq);
      ineq.push_back(r.run.residual_ineq);
      solved += r.run.solved ? 1 : 0;
    }
    std::vector<std::string> cells{std::to_string(n), std::to_string(count),
                                   std::to_string(solved)};
    for (const auto* v : {&dist, &eq, &ineq}) {
      for (const auto& c : split(summary_triplet(*v), ',')) cells.push_back(c);
    }
    summary.rows.push_back(std::move(cells));
  }
  write_file(out / "summary.csv", summary.csv());
}

// --- qcqp -------------------------------------------------------------------

void run_qcqp(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out,
              std::ostream* trace) {
  const SolverConfig sc = cfg.solver_config();
  fs::create_directories(out / "instances");
  for (int m : cfg.sizes) {
    for (std::uint64_t seed : cfg.seeds) {
      QcqpRow row;
      row.m = m;
      row.seed = seed;
      try {
        const auto inst = apps::qcqp_instance(m, seed);
        write_file(out / "instances" /
                       ("qcqp_m" + std::to_string(m) + "_seed" + std::to_string(seed) + ".json"),
                   apps::to_json(inst) + "\n");
        row.outcome = apps::run_qcqp_comparison(inst, cfg.deltas, cfg.restarts, cfg.samples,
                                                seed, sc);
        row.ok = true;
        if (trace) {
          for (const auto& d : row.outcome.per_delta) {
            for (size_t k = 0; k < d.traces.size(); ++k) {
              write_trace_jsonl(d.traces[k], *trace,
                                "qcqp:m=" + std::to_string(m) + ":seed=" +
                                    std::to_string(seed) + ":delta=" + fmt17(d.delta) +
                                    ":start=" + std::to_string(k));
            }
          }
        }
        if (cfg.region_grid > 0) {
          write_file(out / ("region_m" + std::to_string(m) + "_seed" + std::to_string(seed) +
                            ".csv"),
                     region_csv(inst, row.outcome, cfg.region_grid));
        }
      } catch (const std::exception& e) {
        row.error = e.what();
        rep.exit_code = 2;
      }
      rep.qcqp.push_back(std::move(row));
    }
  }

  Table results;
  results.header = {"experiment", "m", "seed", "delta", "oracle", "sdr_orig", "sdr_random",
                    "sdr_random_solved", "ours_orig", "ours_random", "ours_project",
                    "orig_solved", "random_solved", "project_solved", "status", "starts",
                    "error"};
  for (const auto& r : rep.qcqp) {
    if (!r.ok) {
      for (double delta : cfg.deltas) {
        results.rows.push_back({"qcqp", std::to_string(r.m), std::to_string(r.seed),
                                fmt17(delta), "nan", "nan", "nan", "0", "nan", "nan", "nan",
                                "0", "0", "0", "error", "0", quoted(r.error)});
      }
      continue;
    }
    const auto& o = r.outcome;
    for (const auto& d : o.per_delta) {
      const bool have = !d.failed;
      results.rows.push_back(
          {"qcqp", std::to_string(r.m), std::to_string(r.seed), fmt17(d.delta),
           fmt17(o.oracle_opt), fmt17(o.sdr_orig), fmt17(o.sdr_random.value),
           flag(o.sdr_random_solved), have ? fmt17(d.ours_orig) : "nan",
           have ? fmt17(d.ours_random.value) : "nan",
           have ? fmt17(d.ours_project.value) : "nan", flag(d.orig_solved),
           flag(d.random_solved), flag(d.project_solved),
           have ? to_string(d.status) : "failed", std::to_string(d.starts_solved), ""});
    }
  }
  write_file(out / "results.csv", results.csv());
  if (std::find(cfg.formats.begin(), cfg.formats.end(), "json") != cfg.formats.end()) {
    write_file(out / "results.json", results.as_json().dump(1) + "\n");
  }

  Table summary;
  summary.header = {"m", "delta", "count", "sdr_random_solved", "ours_orig_solved",
                    "ours_random_solved", "ours_project_solved", "sdr_gap_min",
                    "sdr_gap_median", "sdr_gap_max", "project_gap_min", "project_gap_median",
                    "project_gap_max"};
  for (int m : cfg.sizes) {
    for (size_t di = 0; di < cfg.deltas.size(); ++di) {
      int count = 0, sdr = 0, orig = 0, rnd = 0, proj = 0;
      std::vector<double> sdr_gap, proj_gap;
      for (const auto& r : rep.qcqp) {
        if (r.m != m) continue;
        ++count;
        if (!r.ok) continue;
        const auto& o = r.outcome;
        const auto& d = o.per_delta[di];
        sdr += o.sdr_random_solved ? 1 : 0;
        orig += d.orig_solved ? 1 : 0;
        rnd += d.random_solved ? 1 : 0;
        proj += d.project_solved ? 1 : 0;
        sdr_gap.push_back(std::abs(o.sdr_random.value - o.oracle_opt));
        if (!d.failed) proj_gap.push_back(std::abs(d.ours_project.value - o.oracle_opt));
      }
      std::vector<std::string> cells{std::to_string(m),        fmt17(cfg.deltas[di]),
                                     std::to_string(count),    std::to_string(sdr),
                                     std::to_string(orig),     std::to_string(rnd),
                                     std::to_string(proj)};
      for (const auto* v : {&sdr_gap, &proj_gap}) {
        for (const auto& c : split(summary_triplet(*v), ',')) cells.push_back(c);
      }
      summary.rows.push_back(std::move(cells));
    }
  }
  write_file(out / "summary.csv", summary.csv());
}

// --- selftest ---------------------------------------------------------------

void run_selftest(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out) {
  auto add = [&](std::string name, double value, double tol) {
    rep.selftest.push_back(SelftestRow{std::move(name), value, tol, value <= tol});
    if (value > tol) rep.exit_code = 2;
  };
  const std::uint64_t seed = cfg.seeds.empty() ? 0 : cfg.seeds.front();
  try {
    const auto inst = apps::gen_sdp_instance(5, 5, seed);
    const BlockProblem problem = decompose(apps::build_gen_sdp_problem(inst));
    std::mt19937_64 rng(seed);
    const ManifoldPoint q = random_point(5, rng);
    Vector lam = Vector::LinSpaced(5, 3.0, -1.0);
    const BlockPoint z{q, lam};
    add("gradient_audit_gensdp", audit_gradients(problem, z, rng).max_rel_error, 1e-5);

    const PointEvaluation ev = evaluate_point(problem, z);
    const DirectionResult d = measure_kkt(ev, 1e-6);
    std::vector<BlockGradient> ineq;
    for (Eigen::Index j : d.active_set) {
      if (j < ev.jac_y_ineq.rows()) {
        ineq.push_back(BlockGradient{Matrix::Zero(5, 5), ev.jac_y_ineq.row(j).transpose()});
      } else {
        ineq.push_back(ev.grad_coupled[static_cast<size_t>(j - ev.jac_y_ineq.rows())]);
      }
    }
    add("direction_invariants_kkt",
        direction_invariant_violation(d, ev.grad_f, ev.grad_eq, ineq), 1e-8);

    const Matrix x = reconstruct(q, lam);
    const SpectralPoint p = eig_sorted(SymmetricMatrix(x));
    add("reconstruct_roundtrip", (reconstruct(p.q(), p.lam()) - x).norm(), 1e-9);

    apps::QcqpInstance ellipse;
    ellipse.m = 1;
    Matrix a(2, 2);
    a << 4, 0, 0, 1;
    ellipse.a.push_back(a);
    add("grid_oracle_ellipse", std::abs(apps::grid_oracle(ellipse).value - 0.25), 1e-12);
  } catch (const std::exception& e) {
    add(std::string("exception: ") + e.what(), 1.0, 0.0);
  }

  Table results;
  results.header = {"check", "value", "tolerance", "pass"};
  for (const auto& r : rep.selftest) {
    results.rows.push_back({r.check, fmt17(r.value), fmt17(r.tolerance), flag(r.pass)});
  }
  write_file(out / "results.csv", results.csv());
  if (std::find(cfg.formats.begin(), cfg.formats.end(), "json") != cfg.formats.end()) {
    write_file(out / "results.json", results.as_json().dump(1) + "\n");
  }
  int passed = 0;
  for (const auto& r : rep.selftest) passed += r.pass ? 1 : 0;
  Table summary;
  summary.header = {"checks", "passed"};
  summary.rows.push_back({std::to_string(rep.selftest.size()), std::to_string(passed)});
  write_file(out / "summary.csv", summary.csv());
}

}  // namespace

void ExperimentConfig::validate() const {
  if (experiment != "gensdp" && experiment != "qcqp" && experiment != "selftest") {
    throw ConfigError("unknown experiment '" + experiment +
                      "' (expected gensdp, qcqp or selftest)");
  }
  if (seeds.empty()) throw ConfigError("seed list is empty");
  if (experiment != "selftest") {
    if (sizes.empty()) throw ConfigError("size list is empty");
    for (int s : sizes) {
      if (experiment == "gensdp" && s < 2) throw ConfigError("gensdp needs n >= 2");
      if (experiment == "qcqp" && s < 1) throw ConfigError("qcqp needs m >= 1");
    }
  }
  if (experiment == "qcqp" && deltas.empty()) throw ConfigError("delta list is empty");
  for (double d : deltas) {
    if (!(d >= 0.0)) throw ConfigError("deltas must be nonnegative");
  }
  if (eps && !(*eps > 0.0)) throw ConfigError("eps must be positive");
  if (max_outer && *max_outer < 0) throw ConfigError("max_outer must be nonnegative");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (region_grid < 0) throw ConfigError("region grid must be >= 0");
  if (out_dir.empty()) throw ConfigError("output directory is empty");
  if (formats.empty()) throw ConfigError("format list is empty");
  for (const auto& f : formats) {
    if (f != "csv" && f != "json") throw ConfigError("unknown format '" + f + "'");
  }
}

SolverConfig ExperimentConfig::solver_config() const {
  SolverConfig sc;
  if (eps) {
    sc.eps_y = sc.eps_x = sc.eps_kkt = *eps;
    sc.delta1 = sc.delta2 = *eps;
  }
  if (max_outer) sc.max_outer = *max_outer;
  return sc;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : split(text, ',')) {
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      const long long v = parse_integer(tok);
      if (v < 0) throw ConfigError("seeds must be nonnegative");
      out.push_back(static_cast<std::uint64_t>(v));
      continue;
    }
    const long long lo = parse_integer(trim(tok.substr(0, dots)));
    const long long hi = parse_integer(trim(tok.substr(dots + 2)));
    if (lo < 0 || hi < lo) throw ConfigError("bad seed range '" + tok + "'");
    if (hi - lo > 1000000) throw ConfigError("seed range too large");
    for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& tok : split(text, ',')) out.push_back(static_cast<int>(parse_integer(tok)));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text, ',')) {
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw ConfigError("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  // Lists may be given as JSON arrays or in the flag syntax ("0..9").
  auto text_of = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += ',';
      s += e.is_string() ? e.get<std::string>() : e.dump();
    }
    return v.is_array() ? s : v.dump();
  };
  try {
    if (j.contains("experiment")) c.experiment = j["experiment"].get<std::string>();
    if (j.contains("n")) c.sizes = parse_int_list(text_of(j["n"]));
    if (j.contains("m")) c.sizes = parse_int_list(text_of(j["m"]));
    if (j.contains("seeds")) c.seeds = parse_seed_list(text_of(j["seeds"]));
    if (j.contains("delta")) c.deltas = parse_double_list(text_of(j["delta"]));
    if (j.contains("eps")) c.eps = j["eps"].get<double>();
    if (j.contains("max_outer")) c.max_outer = j["max_outer"].get<int>();
    if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
    if (j.contains("samples")) c.samples = j["samples"].get<int>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    if (j.contains("format")) {
      c.formats.clear();
      for (const auto& f : split(text_of(j["format"]), ',')) c.formats.push_back(f);
    }
    if (j.contains("trace")) c.trace = j["trace"].get<bool>();
    if (j.contains("region")) c.region_grid = j["region"].get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string format_summary_value(double v) {
  if (std::isfinite(v) && std::abs(v) < 1e-20) return "0";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::string region_csv(const apps::QcqpInstance& inst, const apps::QcqpOutcome& outcome,
                       int grid) {
  std::ostringstream os;
  os << "# classes: F feasible grid point, I infeasible grid point, L objective level "
        "set (level = ||x||^2), R SDR randomization, G ours randomization, P ours "
        "projection, S grid oracle\n";
  os << "x1,x2,class,level\n";
  auto emit = [&](double a, double b, char cls, double level) {
    os << fmt17(a) << ',' << fmt17(b) << ',' << cls << ',' << fmt17(level) << '\n';
  };
  double reach = outcome.oracle_opt;
  reach = std::max(reach, outcome.sdr_random.value);
  const double half = 1.5 * std::sqrt(reach);
  for (int i = 0; i < grid; ++i) {
    for (int k = 0; k < grid; ++k) {
      const double a = grid == 1 ? 0.0 : -half + 2.0 * half * i / (grid - 1);
      const double b = grid == 1 ? 0.0 : -half + 2.0 * half * k / (grid - 1);
      Vector x(2);
      x << a, b;
      const bool feasible = apps::qcqp_min_constraint(inst, x) >= 1.0;
      emit(a, b, feasible ? 'F' : 'I', x.squaredNorm());
    }
  }
  const double pi = 3.14159265358979323846;
  for (double scale : {1.0, 1.5, 2.0}) {
    const double level = scale * outcome.oracle_opt;
    for (int k = 0; k < grid; ++k) {
      const double th = 2.0 * pi * k / std::max(grid, 1);
      emit(std::sqrt(level) * std::cos(th), std::sqrt(level) * std::sin(th), 'L', level);
    }
  }
  emit(outcome.sdr_random.x(0), outcome.sdr_random.x(1), 'R', outcome.sdr_random.value);
  for (const auto& d : outcome.per_delta) {
    if (d.failed) continue;
    emit(d.ours_random.x(0), d.ours_random.x(1), 'G', d.ours_random.value);
    emit(d.ours_project.x(0), d.ours_project.x(1), 'P', d.ours_project.value);
  }
  emit(outcome.oracle_x(0), outcome.oracle_x(1), 'S', outcome.oracle_opt);
  return os.str();
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const fs::path out(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir);

  ExperimentReport rep;
  std::ofstream trace_file;
  if (cfg.trace) {
    trace_file.open(out / "trace.jsonl", std::ios::binary);
    if (!trace_file) throw ConfigError("cannot write trace.jsonl");
  }
  std::ostream* trace = cfg.trace ? &trace_file : nullptr;
  if (cfg.experiment == "gensdp") {
    run_gensdp(cfg, rep, out, trace);
  } else if (cfg.experiment == "qcqp") {
    run_qcqp(cfg, rep, out, trace);
  } else {
    run_selftest(cfg, rep, out);
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  int errors = 0;
  for (const auto& r : rep.gensdp) errors += r.ok ? 0 : 1;
  for (const auto& r : rep.qcqp) errors += r.ok ? 0 : 1;
  const json cj = config_json(cfg);
  json manifest;
  manifest["config"] = cj;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(cj.dump())));
  manifest["config_hash"] = hash;
  manifest["versions"] = {
      {"specopt", SPECOPT_VERSION},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                    "." + std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__},
      {"instance_schema", apps::kInstanceSchemaVersion}};
  manifest["timestamp"] = utc_timestamp();
  manifest["wall_seconds"] = rep.wall_seconds;
  manifest["instances"] = rep.gensdp.size() + rep.qcqp.size();
  manifest["instance_errors"] = errors;
  manifest["exit_code"] = rep.exit_code;
  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  return rep;
}

}  // namespace specopt::tools
