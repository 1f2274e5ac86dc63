#include "stepfit/solver.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "stepfit/clustering.hpp"
#include "stepfit/cost.hpp"
#include "stepfit/errors.hpp"
#include "stepfit/isotonic.hpp"

namespace stepfit {

bool dominates(const Label& a, const Label& b, bool compare_step_value) {
  if (a.cost > b.cost || a.arcs > b.arcs) return false;
  if (compare_step_value && a.step_value < b.step_value) return false;
  return a.cost < b.cost || a.arcs < b.arcs ||
         (compare_step_value && a.step_value > b.step_value);
}

double gap_percent(double ub, double lb) {
  if (!(lb > 0.0)) throw NonPositiveLB();
  return (ub - lb) / lb * 100.0;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Clock = std::chrono::steady_clock;

// Smallest interior destination vertex reachable from v under step_min
// (interior = before the sink). Returns coord_count() when none qualifies.
std::size_t first_interior_dest(const Dataset& data, std::size_t v,
                                double step_min) {
  const std::size_t m = data.coord_count();
  if (step_min <= 0.0) return v + 1;
  const double target = data.coord_p(v) + step_min;
  std::size_t lo = v + 1, hi = m;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (data.coord_p(mid) < target)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

bool completion_allowed(const Dataset& data, std::size_t v, double step_min,
                        bool strict_last_block) {
  if (!strict_last_block || step_min <= 0.0) return true;
  return data.points().back().p - data.coord_p(v) >= step_min;
}

}  // namespace

std::vector<std::vector<double>> cardinality_sp_lb(const Dataset& data,
                                                   std::size_t k,
                                                   double step_min,
                                                   const CostModel& model,
                                                   bool strict_last_block) {
  const std::size_t m = data.coord_count();
  const std::size_t n = data.size();
  CostTables tables(data);

  std::vector<std::vector<double>> table(k + 1, std::vector<double>(m + 1, kInf));
  for (std::size_t r = 0; r <= k; ++r) table[r][m] = 0.0;

  for (std::size_t r = 1; r <= k; ++r) {
    for (std::size_t v = 0; v < m; ++v) {
      double best = table[r - 1][v];
      if (completion_allowed(data, v, step_min, strict_last_block))
        best = std::min(best,
                        tables.block_error(data.coord_begin(v), n, model));
      for (std::size_t h = first_interior_dest(data, v, step_min); h < m; ++h) {
        if (table[r - 1][h] == kInf) continue;
        best = std::min(best, tables.block_error(data.coord_begin(v),
                                                 data.coord_begin(h), model) +
                                  table[r - 1][h]);
      }
      table[r][v] = best;
    }
  }
  if (table[k][0] == kInf) throw InfeasibleCardinality();
  return table;
}

namespace {

struct ArenaNode {
  Label lab;
  std::int32_t pred;    // arena index of the predecessor, -1 at the root
  std::int32_t vertex;  // 0-based coordinate index the label ends at
};

struct Seeds {
  bool incumbent_set = false;
  std::optional<UpperBoundFit> incumbent;
  double lb_floor = 0.0;
  bool hybrid_iso_prune = false;  // isotonic pruning inside a relaxed run
  std::optional<Clock::time_point> deadline;
};

StepCurve single_block_curve(const Dataset& data, const CostTables& tables,
                             const CostModel& model, double step_min) {
  StepCurve curve;
  curve.breakpoints = {data.coord_p(0), sink_breakpoint(data, step_min)};
  curve.values = {tables.block_value(0, data.size(), model)};
  return curve;
}

StepCurve reconstruct_curve(const Dataset& data, const CostTables& tables,
                            const CostModel& model, double step_min,
                            const std::vector<ArenaNode>& arena,
                            std::int32_t completing) {
  std::vector<std::size_t> path;  // vertices of the partial path, reversed
  for (std::int32_t id = completing; id >= 0; id = arena[id].pred)
    path.push_back(static_cast<std::size_t>(arena[id].vertex));
  std::reverse(path.begin(), path.end());
  path.push_back(data.coord_count());  // completion arc to the sink

  StepCurve curve;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    curve.breakpoints.push_back(data.coord_p(path[k]));
    curve.values.push_back(tables.block_value(data.coord_begin(path[k]),
                                              data.coord_begin(path[k + 1]),
                                              model));
  }
  curve.breakpoints.push_back(sink_breakpoint(data, step_min));
  return curve;
}

struct LayerSearch {
  const Dataset& data;
  const FitConfig& cfg;
  const Seeds& seeds;
  CostTables tables;
  std::size_t m;            // number of real vertices; sink = m
  std::size_t n;            // observations
  bool monotone;
  std::vector<double> suffix_iso;              // per-vertex isotonic SSE
  std::vector<std::vector<double>> card;       // cardinality LB, may be empty
  bool iso_prune = false;

  std::vector<ArenaNode> arena;
  std::vector<std::vector<std::uint32_t>> open;
  SearchCounters counters;

  double inc = kInf;
  std::int32_t opt_pred = -1;  // arena id whose completion realized inc
  // (origin vertex, prefix cost) of every incumbent-improving completion;
  // feeds the anytime certificate
  std::vector<std::pair<std::size_t, double>> completions;
  std::size_t stopped_layer = 0;  // first layer not fully processed
  bool timed_out = false;

  explicit LayerSearch(const Dataset& d, const FitConfig& c, const Seeds& s)
      : data(d), cfg(c), seeds(s), tables(d), m(d.coord_count()),
        n(d.size()), monotone(c.enforce_monotone) {}

  bool deadline_hit() const {
    return seeds.deadline && Clock::now() >= *seeds.deadline;
  }

  double arc_value(std::size_t a, std::size_t b) const {
    return tables.block_value(data.coord_begin(a),
                              b == m ? n : data.coord_begin(b), cfg.model);
  }
  double arc_error(std::size_t a, std::size_t b) const {
    return tables.block_error(data.coord_begin(a),
                              b == m ? n : data.coord_begin(b), cfg.model);
  }

  double lb_at(std::size_t h, int arcs_used) const {
    double lb = 0.0;
    if (iso_prune) lb = suffix_iso[h];
    if (!card.empty()) lb = std::max(lb, card[cfg.k - arcs_used][h]);
    return lb;
  }

  void try_insert(std::size_t h, const Label& cand, std::int32_t pred) {
    auto& store = open[h];
    const bool with_st = monotone;
    for (std::uint32_t sid : store) {
      const Label& s = arena[sid].lab;
      const bool identical = s.cost == cand.cost && s.arcs == cand.arcs &&
                             (!with_st || s.step_value == cand.step_value);
      if (identical || dominates(s, cand, with_st)) {
        ++counters.labels_dominated;
        return;
      }
    }
    std::size_t w = 0;
    for (std::size_t r = 0; r < store.size(); ++r) {
      if (dominates(cand, arena[store[r]].lab, with_st)) {
        ++counters.labels_dominated;
        continue;
      }
      store[w++] = store[r];
    }
    store.resize(w);
    arena.push_back({cand, pred, static_cast<std::int32_t>(h)});
    store.push_back(static_cast<std::uint32_t>(arena.size() - 1));
    ++counters.labels_created;
  }

  void run() {
    open.assign(m, {});
    arena.push_back({{0.0, 0, data.max_x() + 1.0}, -1, 0});
    open[0].push_back(0);
    counters.labels_created = 1;

    const int max_stored_arcs = static_cast<int>(cfg.k) - 1;
    std::vector<std::uint32_t> ids;
    for (std::size_t v = 0; v < m; ++v) {
      stopped_layer = v;
      if (deadline_hit()) {
        timed_out = true;
        return;
      }
      ids = std::move(open[v]);
      open[v].clear();
      std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
        const Label& la = arena[a].lab;
        const Label& lb = arena[b].lab;
        if (la.cost != lb.cost) return la.cost < lb.cost;
        if (la.step_value != lb.step_value) return la.step_value > lb.step_value;
        if (la.arcs != lb.arcs) return la.arcs < lb.arcs;
        return a < b;
      });

      for (std::size_t pos = 0; pos < ids.size(); ++pos) {
        if (deadline_hit()) {
          timed_out = true;
          return;
        }
        const ArenaNode node = arena[ids[pos]];
        if (node.lab.cost > inc) {  // the whole layer is hopeless
          counters.labels_pruned += ids.size() - pos;
          break;
        }
        if (completion_allowed(data, v, cfg.step_min, cfg.strict_last_block)) {
          const double total = node.lab.cost + arc_error(v, m);
          if (total < inc &&
              (!monotone || arc_value(v, m) < node.lab.step_value)) {
            inc = total;
            opt_pred = static_cast<std::int32_t>(ids[pos]);
            completions.emplace_back(v, node.lab.cost);
          }
        }
        if (node.lab.arcs >= max_stored_arcs) continue;
        for (std::size_t h = first_interior_dest(data, v, cfg.step_min); h < m;
             ++h) {
          const double av = arc_value(v, h);
          if (monotone && !(av < node.lab.step_value)) continue;
          const double cost = node.lab.cost + arc_error(v, h);
          if (!(cost + lb_at(h, node.lab.arcs + 1) < inc)) {
            ++counters.labels_pruned;
            continue;
          }
          assert(h > v);
          try_insert(h, {cost, node.lab.arcs + 1, av},
                     static_cast<std::int32_t>(ids[pos]));
        }
      }
    }
    stopped_layer = m;
  }

  /// Anytime certificate over the fully processed layers: per layer, the
  /// cheapest generated feasible path that reaches or crosses it, extended by
  /// the isotonic suffix bound, each clipped at the incumbent value.
  double anytime_lb() const {
    if (stopped_layer == 0) return -kInf;
    const std::size_t layers = stopped_layer;  // sweep layers [0, layers)
    std::vector<double> at_layer(layers, kInf);
    for (const ArenaNode& node : arena) {
      const auto v = static_cast<std::size_t>(node.vertex);
      if (v < layers) at_layer[v] = std::min(at_layer[v], node.lab.cost);
    }
    // arcs (j, h) span layers j+1..h-1 at the origin label's cost
    struct Event {
      std::size_t layer;
      double cost;
    };
    std::vector<Event> starts, ends;
    auto add_span = [&](std::size_t j, std::size_t h, double cost) {
      const std::size_t lo = j + 1;
      const std::size_t hi = std::min(h, layers) - 1;  // inclusive
      if (lo > hi || lo >= layers) return;
      starts.push_back({lo, cost});
      ends.push_back({hi, cost});
    };
    for (const ArenaNode& node : arena) {
      if (node.pred < 0) continue;
      const ArenaNode& parent = arena[node.pred];
      add_span(static_cast<std::size_t>(parent.vertex),
               static_cast<std::size_t>(node.vertex), parent.lab.cost);
    }
    for (const auto& [origin, cost] : completions) add_span(origin, m, cost);

    std::sort(starts.begin(), starts.end(),
              [](const Event& a, const Event& b) { return a.layer < b.layer; });
    std::sort(ends.begin(), ends.end(),
              [](const Event& a, const Event& b) { return a.layer < b.layer; });

    const bool iso_term = cfg.model.is_l2() && (monotone || iso_prune);
    std::multiset<double> active;
    std::size_t si = 0, ei = 0;
    double best = -kInf;
    for (std::size_t i = 0; i < layers; ++i) {
      while (si < starts.size() && starts[si].layer == i)
        active.insert(starts[si++].cost);
      double layer_min = at_layer[i];
      if (!active.empty()) layer_min = std::min(layer_min, *active.begin());
      double value;
      if (layer_min == kInf) {
        // no feasible path reaches this layer; only possible when pruning
        // already proved the incumbent optimal
        value = inc;
      } else {
        value = layer_min + (iso_term ? suffix_iso[i] : 0.0);
        value = std::min(value, inc);
      }
      if (value != kInf) best = std::max(best, value);
      while (ei < ends.size() && ends[ei].layer == i) {
        active.erase(active.find(ends[ei].cost));
        ++ei;
      }
    }
    return best;
  }
};

FitResult solve_impl(const Dataset& data, const FitConfig& cfg,
                     const Seeds& seeds) {
  cfg.validate();
  const auto t0 = Clock::now();

  if (cfg.strict_last_block && cfg.step_min > 0.0 &&
      data.points().back().p - data.points().front().p < cfg.step_min)
    throw InfeasibleStepMin();

  LayerSearch search(data, cfg, seeds);

  std::optional<UpperBoundFit> ub;
  if (seeds.incumbent_set)
    ub = seeds.incumbent;
  else if (cfg.use_clustering_ub)
    ub = build_upper_bound(data, cfg);

  // the suffix table also feeds the anytime certificate, so build it even
  // when pruning with it is off
  search.suffix_iso = suffix_lb_table(data);
  search.iso_prune = cfg.use_isotonic_lb && cfg.model.is_l2() &&
                     (cfg.enforce_monotone || seeds.hybrid_iso_prune);
  bool pre_timeout = search.deadline_hit();
  if (!pre_timeout && cfg.use_relaxed_lb) {
    search.card = cardinality_sp_lb(data, cfg.k, cfg.step_min, cfg.model,
                                    cfg.strict_last_block);
    pre_timeout = search.deadline_hit();
  }

  double lb0 = seeds.lb_floor;
  if (cfg.use_isotonic_lb && cfg.model.is_l2() && cfg.enforce_monotone)
    lb0 = std::max(lb0, search.suffix_iso[0]);
  if (!search.card.empty()) lb0 = std::max(lb0, search.card[cfg.k][0]);

  if (ub) search.inc = ub->cost;

  if (pre_timeout)
    search.timed_out = true;
  else
    search.run();

  FitResult out;
  out.counters = search.counters;
  out.bounds.ub0 = ub ? std::optional<double>(ub->cost) : std::nullopt;
  out.bounds.lb0 = lb0;
  out.bounds.status =
      search.timed_out ? SolveStatus::TimeLimit : SolveStatus::Optimal;

  if (search.opt_pred >= 0) {
    out.curve = reconstruct_curve(data, search.tables, cfg.model, cfg.step_min,
                                  search.arena, search.opt_pred);
    out.objective = search.inc;
  } else if (ub) {
    out.curve = ub->curve;
    out.objective = ub->cost;
  } else {
    // timed out before the first completion test with bounds disabled
    out.curve = single_block_curve(data, search.tables, cfg.model, cfg.step_min);
    out.objective = search.tables.block_error(0, data.size(), cfg.model);
  }

  if (out.bounds.status == SolveStatus::Optimal) {
    out.bounds.best_lb_final = out.objective;
  } else {
    out.bounds.best_lb_final = std::max(lb0, search.anytime_lb());
    if (out.bounds.best_lb_final == -kInf) out.bounds.best_lb_final = lb0;
  }
  if (out.bounds.ub0 && lb0 > 0.0)
    out.bounds.gap0_percent =
        std::max(0.0, gap_percent(*out.bounds.ub0, lb0));  // clamp cancellation

  out.wall_time_s =
      std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

}  // namespace

FitResult solve(const Dataset& data, const FitConfig& cfg) {
  Seeds seeds;
  if (cfg.time_limit_s)
    seeds.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(
                                            *cfg.time_limit_s));
  return solve_impl(data, cfg, seeds);
}

namespace {

// Pools the relaxed curve's blocks into a monotone curve (weighted isotonic
// fit over the block values); always feasible for the monotone problem.
std::optional<UpperBoundFit> monotone_repair(const Dataset& data,
                                             const StepCurve& relaxed,
                                             const FitConfig& cfg) {
  std::vector<double> per_obs(data.size());
  const auto pts = data.points();
  std::size_t a = 0;
  for (std::size_t k = 0; k < relaxed.block_count(); ++k) {
    std::size_t b = data.size();
    if (k + 1 < relaxed.block_count()) {
      const auto it = std::lower_bound(
          pts.begin() + static_cast<std::ptrdiff_t>(a), pts.end(),
          relaxed.breakpoints[k + 1],
          [](const DataPoint& pt, double bp) { return pt.p < bp; });
      b = static_cast<std::size_t>(it - pts.begin());
    }
    for (std::size_t i = a; i < b; ++i) per_obs[i] = relaxed.values[k];
    a = b;
  }
  const IsotonicFit pooled = pava_fit(per_obs);
  StepCurve curve;
  for (const IsotonicRun& run : pooled.blocks) {
    curve.breakpoints.push_back(data.p(run.start));
    curve.values.push_back(run.value);
  }
  curve.breakpoints.push_back(sink_breakpoint(data, cfg.step_min));
  UpperBoundFit fit;
  fit.cost = curve_error(data, curve, cfg.model);
  fit.clusters = curve.block_count();
  fit.curve = std::move(curve);
  return fit;
}

}  // namespace

FitResult try_relaxed_first(const Dataset& data, const FitConfig& cfg) {
  cfg.validate();
  if (!cfg.enforce_monotone) return solve(data, cfg);

  const auto t0 = Clock::now();
  Seeds base;
  if (cfg.time_limit_s)
    base.deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(*cfg.time_limit_s));

  if (cfg.strict_last_block && cfg.step_min > 0.0 &&
      data.points().back().p - data.points().front().p < cfg.step_min)
    throw InfeasibleStepMin();

  std::optional<UpperBoundFit> ub;
  if (cfg.use_clustering_ub) ub = build_upper_bound(data, cfg);

  FitConfig relaxed_cfg = cfg;
  relaxed_cfg.enforce_monotone = false;
  Seeds phase1 = base;
  phase1.incumbent_set = true;
  phase1.incumbent = ub;
  phase1.hybrid_iso_prune = cfg.use_isotonic_lb && cfg.model.is_l2();
  FitResult relaxed = solve_impl(data, relaxed_cfg, phase1);

  auto finish = [&](FitResult r) {
    r.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
  };

  if (relaxed.bounds.status == SolveStatus::TimeLimit) {
    // hand back a monotone-feasible incumbent with the relaxed certificate
    FitResult out = relaxed;
    if (!relaxed.curve.non_increasing()) {
      if (ub) {
        out.curve = ub->curve;
        out.objective = ub->cost;
      } else {
        CostTables tables(data);
        out.curve = single_block_curve(data, tables, cfg.model, cfg.step_min);
        out.objective = tables.block_error(0, data.size(), cfg.model);
      }
    }
    return finish(std::move(out));
  }

  if (relaxed.curve.non_increasing()) {
    // the relaxed optimum is feasible, hence optimal for the monotone problem
    FitResult out = relaxed;
    out.bounds.status = SolveStatus::Optimal;
    out.bounds.lb0 = std::max(out.bounds.lb0, relaxed.objective);
    out.bounds.best_lb_final = out.objective;
    if (out.bounds.ub0 && out.bounds.lb0 > 0.0)
      out.bounds.gap0_percent =
          std::max(0.0, gap_percent(*out.bounds.ub0, out.bounds.lb0));
    return finish(std::move(out));
  }

  std::optional<UpperBoundFit> seed = ub;
  if (auto repair = monotone_repair(data, relaxed.curve, cfg);
      repair && (!seed || repair->cost < seed->cost))
    seed = repair;

  Seeds phase2 = base;
  phase2.incumbent_set = true;
  phase2.incumbent = seed;
  phase2.lb_floor = relaxed.objective;
  FitResult out = solve_impl(data, cfg, phase2);

  out.counters.labels_created += relaxed.counters.labels_created;
  out.counters.labels_dominated += relaxed.counters.labels_dominated;
  out.counters.labels_pruned += relaxed.counters.labels_pruned;
  // report the clustering bound as ub0, matching how the initial gap is read
  if (ub) out.bounds.ub0 = ub->cost;
  if (out.bounds.ub0 && out.bounds.lb0 > 0.0)
    out.bounds.gap0_percent =
        std::max(0.0, gap_percent(*out.bounds.ub0, out.bounds.lb0));
  return finish(std::move(out));
}

}  // namespace stepfit
