// Command-line front end: fit curves, inspect bounds, generate synthetic
// data, cross-check the solver against the brute-force oracle, and run
// parameter sweeps.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stepfit/clustering.hpp"
#include "stepfit/cost.hpp"
#include "stepfit/datagen.hpp"
#include "stepfit/errors.hpp"
#include "stepfit/isotonic.hpp"
#include "stepfit/oracle.hpp"
#include "stepfit/report.hpp"
#include "stepfit/solver.hpp"

namespace {

using namespace stepfit;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTimeLimit = 2;

CostModel parse_loss(const std::string& spec) {
  if (spec == "l2") return CostModel::l2();
  if (spec == "l1") return CostModel::l1();
  if (spec.rfind("quantile:", 0) == 0)
    return CostModel::quantile(std::stod(spec.substr(9)));
  throw InvalidConfig("unknown loss '" + spec + "' (use l2, l1 or quantile:TAU)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct FitOptions {
  std::string input;
  std::size_t k = 1;
  double step_min = 0.0;
  std::string loss = "l2";
  std::string strategy = "iso";
  bool no_ub = false;
  bool no_iso_lb = false;
  bool relaxed_lb = false;
  bool relaxed_mode = false;
  bool strict_last_block = false;
  bool merge_duplicates = false;
  double time_limit = 0.0;
  std::string out_path;
  std::string plot_path;
};

FitConfig build_config(const FitOptions& opt) {
  FitConfig cfg;
  cfg.k = opt.k;
  cfg.step_min = opt.step_min;
  cfg.model = parse_loss(opt.loss);
  cfg.strict_last_block = opt.strict_last_block;
  if (opt.strategy == "raw") {
    cfg.use_clustering_ub = false;
    cfg.use_isotonic_lb = false;
    cfg.use_relaxed_lb = false;
  } else if (opt.strategy != "iso" && opt.strategy != "rlx") {
    throw InvalidConfig("unknown strategy '" + opt.strategy + "'");
  }
  if (opt.no_ub) cfg.use_clustering_ub = false;
  if (opt.no_iso_lb) cfg.use_isotonic_lb = false;
  if (opt.relaxed_lb) cfg.use_relaxed_lb = true;
  if (opt.relaxed_mode) cfg.enforce_monotone = false;
  if (opt.time_limit > 0.0) cfg.time_limit_s = opt.time_limit;
  cfg.validate();
  return cfg;
}

int cmd_fit(const FitOptions& opt) {
  const std::string bytes = read_file(opt.input);
  std::istringstream stream(bytes);
  Dataset data = load_csv(stream, opt.merge_duplicates
                                      ? DuplicatePolicy::Merge
                                      : DuplicatePolicy::Reject);
  const FitConfig cfg = build_config(opt);

  FitReport report;
  report.input_path = opt.input;
  report.input_digest = fnv1a64_digest(bytes);
  report.input_points = data.size();
  report.strategy = opt.strategy;
  report.config = cfg;
  report.result = opt.strategy == "rlx" && cfg.enforce_monotone
                      ? try_relaxed_first(data, cfg)
                      : solve(data, cfg);

  const nlohmann::json j = report_to_json(report);
  if (opt.out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(opt.out_path);
    if (!out) throw Error("cannot write '" + opt.out_path + "'");
    out << j.dump(2) << '\n';
  }
  if (!opt.plot_path.empty()) {
    std::ofstream plot(opt.plot_path);
    if (!plot) throw Error("cannot write '" + opt.plot_path + "'");
    write_plot(plot, report.result.curve);
  }

  const BoundsReport& bounds = report.result.bounds;
  std::cerr << "status: "
            << (bounds.status == SolveStatus::Optimal ? "optimal" : "time limit")
            << "  objective: " << report.result.objective
            << "  blocks: " << report.result.curve.block_count()
            << "  wall: " << report.result.wall_time_s << "s\n";
  return bounds.status == SolveStatus::Optimal ? kExitOk : kExitTimeLimit;
}

struct BoundsOptions {
  std::string input;
  std::size_t k = 1;
  double step_min = 0.0;
  std::string loss = "l2";
  bool with_relaxed = false;
  bool strict_last_block = false;
  bool merge_duplicates = false;
};

int cmd_bounds(const BoundsOptions& opt) {
  Dataset data = load_csv_file(opt.input, opt.merge_duplicates
                                              ? DuplicatePolicy::Merge
                                              : DuplicatePolicy::Reject);
  FitConfig cfg;
  cfg.k = opt.k;
  cfg.step_min = opt.step_min;
  cfg.model = parse_loss(opt.loss);
  cfg.strict_last_block = opt.strict_last_block;
  cfg.validate();

  const auto ub = build_upper_bound(data, cfg);
  if (!ub) throw InfeasibleStepMin();
  const double lb_iso = cfg.model.is_l2() ? suffix_lb_table(data)[0] : 0.0;
  double lb_best = lb_iso;

  std::cout << "ub0 " << ub->cost << '\n';
  std::cout << "lb_iso " << lb_iso << '\n';
  if (opt.with_relaxed) {
    FitConfig relaxed = cfg;
    relaxed.enforce_monotone = false;
    const FitResult res = solve(data, relaxed);
    std::cout << "lb_relaxed " << res.objective << '\n';
    lb_best = std::max(lb_best, res.objective);
  }
  if (lb_best > 0.0)
    std::cout << "gap0_percent " << gap_percent(ub->cost, lb_best) << '\n';
  else
    std::cout << "gap0_percent undefined\n";
  return kExitOk;
}

struct GenOptions {
  std::size_t count = 1000;
  double sigma = 5.0;
  std::uint64_t seed = 0;
  std::string sampling = "grid";
  std::string out_path;
};

int cmd_gen(const GenOptions& opt) {
  datagen::GenConfig cfg;
  cfg.count = opt.count;
  cfg.sigma = opt.sigma;
  cfg.seed = opt.seed;
  if (opt.sampling == "grid")
    cfg.sampling = datagen::GenConfig::Sampling::Grid;
  else if (opt.sampling == "uniform")
    cfg.sampling = datagen::GenConfig::Sampling::Uniform;
  else
    throw InvalidConfig("unknown sampling '" + opt.sampling + "'");

  Dataset data = datagen::generate(cfg);
  if (opt.out_path.empty()) {
    write_csv(std::cout, data);
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw Error("cannot write '" + opt.out_path + "'");
    write_csv(out, data);
  }
  return kExitOk;
}

struct OracleOptions {
  int instances = 200;
  std::size_t max_i = 12;
  std::size_t max_k = 4;
  std::uint64_t seed = 1;
};

int cmd_oracle(const OracleOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  int mismatches = 0;
  for (int rep = 0; rep < opt.instances; ++rep) {
    const std::size_t n = 3 + rng() % (opt.max_i - 2);
    std::vector<DataPoint> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i].p = static_cast<double>(i + 1);
      rows[i].x = 10.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    Dataset data(std::move(rows), DuplicatePolicy::Reject);

    FitConfig cfg;
    cfg.k = 1 + rng() % opt.max_k;
    cfg.enforce_monotone = rep % 2 == 0;
    cfg.model = rep % 3 == 0 ? CostModel::l1() : CostModel::l2();
    cfg.step_min = rep % 4 == 0 ? 1.5 : 0.0;

    const double want = brute_force(data, cfg).objective;
    const double got = solve(data, cfg).objective;
    const double tol = 1e-9 * std::max({1.0, want, got});
    if (std::abs(want - got) > tol) {
      ++mismatches;
      std::cerr << "mismatch on instance " << rep << ": oracle " << want
                << " solver " << got << '\n';
    }
  }
  std::cout << opt.instances << " instances, " << mismatches << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitError;
}

struct BenchOptions {
  std::string sweep = "noise";
  std::size_t count = 1000;
  double sigma = 5.0;
  std::size_t k = 6;
  std::uint64_t seed = 0;
  std::string out_path;
};

struct BenchCell {
  std::string label;
  datagen::GenConfig gen;
  FitConfig cfg;
  FitResult result;
};

std::size_t bench_threads() {
  if (const char* env = std::getenv("STEPFIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

int cmd_bench(const BenchOptions& opt) {
  std::vector<BenchCell> cells;
  auto add_cell = [&](const std::string& label, std::size_t count, double sigma,
                      std::size_t k) {
    BenchCell cell;
    cell.label = label;
    cell.gen.count = count;
    cell.gen.sigma = sigma;
    cell.gen.seed = opt.seed;
    cell.cfg.k = k;
    cells.push_back(std::move(cell));
  };

  if (opt.sweep == "noise") {
    for (int s = 0; s <= 10; ++s)
      add_cell("sigma=" + std::to_string(s), opt.count,
               static_cast<double>(s), opt.k);
  } else if (opt.sweep == "size") {
    for (std::size_t n : {100, 200, 500, 1000, 2000})
      add_cell("i=" + std::to_string(n), n, opt.sigma, opt.k);
  } else if (opt.sweep == "k") {
    for (std::size_t k = 1; k <= opt.k; ++k)
      add_cell("k=" + std::to_string(k), opt.count, opt.sigma, k);
  } else {
    throw InvalidConfig("unknown sweep '" + opt.sweep + "'");
  }

  const std::size_t workers = std::min(bench_threads(), cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      const Dataset data = datagen::generate(cells[i].gen);
      cells[i].result = solve(data, cells[i].cfg);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::ostringstream table;
  table << "cell,objective,wall_time_s,labels_created,labels_dominated,"
           "labels_pruned,status\n";
  for (const BenchCell& cell : cells) {
    const FitResult& r = cell.result;
    table << cell.label << ',' << r.objective << ',' << r.wall_time_s << ','
          << r.counters.labels_created << ',' << r.counters.labels_dominated
          << ',' << r.counters.labels_pruned << ','
          << (r.bounds.status == SolveStatus::Optimal ? "optimal" : "time_limit")
          << '\n';
  }
  if (opt.out_path.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(opt.out_path);
    if (!out) throw Error("cannot write '" + opt.out_path + "'");
    out << table.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact fitting of bounded-step monotone step curves"};
  app.require_subcommand(1);

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a curve to CSV data");
  fit_cmd->add_option("input", fit.input, "input CSV (p,x rows)")->required();
  fit_cmd->add_option("--k", fit.k, "maximum number of steps")->required();
  fit_cmd->add_option("--step-min", fit.step_min, "minimum step length");
  fit_cmd->add_option("--loss", fit.loss, "l2 | l1 | quantile:TAU");
  fit_cmd->add_option("--strategy", fit.strategy, "iso | rlx | raw");
  fit_cmd->add_flag("--no-ub", fit.no_ub, "disable the clustering upper bound");
  fit_cmd->add_flag("--no-iso-lb", fit.no_iso_lb,
                    "disable the isotonic lower bound");
  fit_cmd->add_flag("--relaxed-lb", fit.relaxed_lb,
                    "enable the cardinality shortest-path lower bound");
  fit_cmd->add_flag("--relaxed", fit.relaxed_mode,
                    "drop the monotonicity constraint (lower-bound fit)");
  fit_cmd->add_flag("--strict-last-block", fit.strict_last_block,
                    "apply step-min to the final block as well");
  fit_cmd->add_flag("--merge-duplicates", fit.merge_duplicates,
                    "keep observations that share a price");
  fit_cmd->add_option("--time-limit", fit.time_limit, "seconds");
  fit_cmd->add_option("--out", fit.out_path, "write the JSON report here");
  fit_cmd->add_option("--plot", fit.plot_path, "write a two-column step trace");

  BoundsOptions bounds;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "report bounds without the exact search");
  bounds_cmd->add_option("input", bounds.input, "input CSV")->required();
  bounds_cmd->add_option("--k", bounds.k, "maximum number of steps")->required();
  bounds_cmd->add_option("--step-min", bounds.step_min, "minimum step length");
  bounds_cmd->add_option("--loss", bounds.loss, "l2 | l1 | quantile:TAU");
  bounds_cmd->add_flag("--with-relaxed", bounds.with_relaxed,
                       "also run the monotonicity-relaxed bound");
  bounds_cmd->add_flag("--strict-last-block", bounds.strict_last_block);
  bounds_cmd->add_flag("--merge-duplicates", bounds.merge_duplicates);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic CSV");
  gen_cmd->add_option("--i", gen.count, "number of observations");
  gen_cmd->add_option("--sigma", gen.sigma, "noise standard deviation");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--sampling", gen.sampling, "grid | uniform");
  gen_cmd->add_option("--out", gen.out_path, "output CSV path");

  OracleOptions oracle;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-check", "compare the solver against brute force");
  oracle_cmd->add_option("--instances", oracle.instances, "instance count");
  oracle_cmd->add_option("--max-i", oracle.max_i, "largest instance size");
  oracle_cmd->add_option("--max-k", oracle.max_k, "largest block budget");
  oracle_cmd->add_option("--seed", oracle.seed, "RNG seed");

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "sweep noise, size or k");
  bench_cmd->add_option("--sweep", bench.sweep, "noise | size | k");
  bench_cmd->add_option("--i", bench.count, "sample size");
  bench_cmd->add_option("--sigma", bench.sigma, "noise level");
  bench_cmd->add_option("--k", bench.k, "block budget (sweep upper end for k)");
  bench_cmd->add_option("--seed", bench.seed, "RNG seed");
  bench_cmd->add_option("--out", bench.out_path, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (bounds_cmd->parsed()) return cmd_bounds(bounds);
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle);
    if (bench_cmd->parsed()) return cmd_bench(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
