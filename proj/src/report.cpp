#include "stepfit/report.hpp"

#include <charconv>
#include <cstdint>
#include <ostream>

#include "stepfit/errors.hpp"

namespace stepfit {

using nlohmann::json;

namespace {

std::string loss_name(const CostModel& model) {
  switch (model.kind) {
    case CostModel::Kind::L2: return "l2";
    case CostModel::Kind::L1: return "l1";
    case CostModel::Kind::Quantile: return "quantile";
  }
  return "l2";
}

CostModel loss_from(const std::string& name, double tau) {
  if (name == "l2") return CostModel::l2();
  if (name == "l1") return CostModel::l1();
  if (name == "quantile") return CostModel::quantile(tau);
  throw ParseError("unknown loss '" + name + "'");
}

json curve_to_json(const StepCurve& curve) {
  return json{{"breakpoints", curve.breakpoints}, {"values", curve.values}};
}

StepCurve curve_from_json(const json& j) {
  StepCurve curve;
  curve.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  curve.values = j.at("values").get<std::vector<double>>();
  return curve;
}

json opt_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<double> opt_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

json report_to_json(const FitReport& report) {
  const FitConfig& cfg = report.config;
  const FitResult& res = report.result;

  json blocks = json::array();
  for (std::size_t k = 0; k < res.curve.block_count(); ++k)
    blocks.push_back({{"step", k + 1},
                      {"p_lo", res.curve.breakpoints[k]},
                      {"p_hi", res.curve.breakpoints[k + 1]},
                      {"value", res.curve.values[k]}});

  return json{
      {"schema", "stepfit/1"},
      {"input",
       {{"path", report.input_path},
        {"digest", report.input_digest},
        {"points", report.input_points}}},
      {"config",
       {{"k", cfg.k},
        {"step_min", cfg.step_min},
        {"loss", loss_name(cfg.model)},
        {"tau", cfg.model.kind == CostModel::Kind::Quantile
                    ? json(cfg.model.tau)
                    : json(nullptr)},
        {"monotone", cfg.enforce_monotone},
        {"use_isotonic_lb", cfg.use_isotonic_lb},
        {"use_relaxed_lb", cfg.use_relaxed_lb},
        {"use_clustering_ub", cfg.use_clustering_ub},
        {"strict_last_block", cfg.strict_last_block},
        {"time_limit_s", opt_to_json(cfg.time_limit_s)},
        {"strategy", report.strategy}}},
      {"status", res.bounds.status == SolveStatus::Optimal ? "optimal"
                                                           : "time_limit"},
      {"objective", res.objective},
      {"bounds",
       {{"ub0", opt_to_json(res.bounds.ub0)},
        {"lb0", res.bounds.lb0},
        {"gap0_percent", opt_to_json(res.bounds.gap0_percent)},
        {"best_lb_final", res.bounds.best_lb_final}}},
      {"counters",
       {{"labels_created", res.counters.labels_created},
        {"labels_dominated", res.counters.labels_dominated},
        {"labels_pruned", res.counters.labels_pruned}}},
      {"wall_time_s", res.wall_time_s},
      {"curve", curve_to_json(res.curve)},
      {"blocks", blocks}};
}

FitReport report_from_json(const json& j) {
  if (j.at("schema").get<std::string>() != "stepfit/1")
    throw ParseError("unsupported schema");

  FitReport report;
  const json& input = j.at("input");
  report.input_path = input.at("path").get<std::string>();
  report.input_digest = input.at("digest").get<std::string>();
  report.input_points = input.at("points").get<std::size_t>();

  const json& cfg = j.at("config");
  report.strategy = cfg.at("strategy").get<std::string>();
  report.config.k = cfg.at("k").get<std::size_t>();
  report.config.step_min = cfg.at("step_min").get<double>();
  const double tau =
      cfg.at("tau").is_null() ? 0.5 : cfg.at("tau").get<double>();
  report.config.model = loss_from(cfg.at("loss").get<std::string>(), tau);
  report.config.enforce_monotone = cfg.at("monotone").get<bool>();
  report.config.use_isotonic_lb = cfg.at("use_isotonic_lb").get<bool>();
  report.config.use_relaxed_lb = cfg.at("use_relaxed_lb").get<bool>();
  report.config.use_clustering_ub = cfg.at("use_clustering_ub").get<bool>();
  report.config.strict_last_block = cfg.at("strict_last_block").get<bool>();
  report.config.time_limit_s = opt_from_json(cfg.at("time_limit_s"));

  FitResult& res = report.result;
  res.objective = j.at("objective").get<double>();
  res.bounds.status = j.at("status").get<std::string>() == "optimal"
                          ? SolveStatus::Optimal
                          : SolveStatus::TimeLimit;
  const json& bounds = j.at("bounds");
  res.bounds.ub0 = opt_from_json(bounds.at("ub0"));
  res.bounds.lb0 = bounds.at("lb0").get<double>();
  res.bounds.gap0_percent = opt_from_json(bounds.at("gap0_percent"));
  res.bounds.best_lb_final = bounds.at("best_lb_final").get<double>();
  const json& counters = j.at("counters");
  res.counters.labels_created = counters.at("labels_created").get<std::uint64_t>();
  res.counters.labels_dominated =
      counters.at("labels_dominated").get<std::uint64_t>();
  res.counters.labels_pruned = counters.at("labels_pruned").get<std::uint64_t>();
  res.wall_time_s = j.at("wall_time_s").get<double>();
  res.curve = curve_from_json(j.at("curve"));
  return report;
}

std::string fnv1a64_digest(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[hash & 0xf];
    hash >>= 4;
  }
  buf[16] = '\0';
  return std::string("fnv1a64:") + buf;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_plot(std::ostream& out, const StepCurve& curve) {
  for (std::size_t k = 0; k < curve.block_count(); ++k) {
    out << format_double(curve.breakpoints[k]) << ' '
        << format_double(curve.values[k]) << '\n';
    out << format_double(curve.breakpoints[k + 1]) << ' '
        << format_double(curve.values[k]) << '\n';
  }
}

}  // namespace stepfit
