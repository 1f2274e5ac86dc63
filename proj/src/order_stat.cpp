#include "stepfit/order_stat.hpp"

#include <algorithm>
#include <utility>

#include "stepfit/errors.hpp"

namespace stepfit {

OrderStatIndex::OrderStatIndex(std::span<const double> values)
    : n_(values.size()) {
  distinct_.assign(values.begin(), values.end());
  std::sort(distinct_.begin(), distinct_.end());
  distinct_.erase(std::unique(distinct_.begin(), distinct_.end()), distinct_.end());

  // Current layout: (rank, value) per position, plus the node boundaries
  // [node_lo_rank, node_hi_rank) each contiguous segment belongs to.
  struct Elem {
    std::uint32_t rank;
    double value;
  };
  std::vector<Elem> cur(n_), next(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    auto it = std::lower_bound(distinct_.begin(), distinct_.end(), values[i]);
    cur[i] = {static_cast<std::uint32_t>(it - distinct_.begin()), values[i]};
  }

  struct Node {
    std::size_t pos_lo, pos_hi;       // positional span
    std::uint32_t rank_lo, rank_hi;   // rank range [lo, hi)
  };
  std::vector<Node> nodes{{0, n_, 0, static_cast<std::uint32_t>(distinct_.size())}},
      child_nodes;

  while (true) {
    bool any_split = false;
    for (const Node& nd : nodes)
      if (nd.rank_hi - nd.rank_lo > 1) any_split = true;
    if (!any_split) break;

    std::vector<std::uint32_t> cnt(n_ + 1, 0);
    std::vector<double> sum(n_ + 1, 0.0);
    child_nodes.clear();
    for (const Node& nd : nodes) {
      if (nd.rank_hi - nd.rank_lo <= 1) {
        // leaf: elements stay in place, none go "left"
        for (std::size_t i = nd.pos_lo; i < nd.pos_hi; ++i) {
          cnt[i + 1] = 0;
          sum[i + 1] = 0.0;
          next[i] = cur[i];
        }
        child_nodes.push_back(nd);
        continue;
      }
      const std::uint32_t mid = nd.rank_lo + (nd.rank_hi - nd.rank_lo) / 2;
      std::size_t nl = nd.pos_lo;
      for (std::size_t i = nd.pos_lo; i < nd.pos_hi; ++i)
        if (cur[i].rank < mid) ++nl;
      std::size_t wl = nd.pos_lo, wr = nl;
      for (std::size_t i = nd.pos_lo; i < nd.pos_hi; ++i) {
        const bool left = cur[i].rank < mid;
        cnt[i + 1] = left ? 1 : 0;
        sum[i + 1] = left ? cur[i].value : 0.0;
        next[left ? wl++ : wr++] = cur[i];
      }
      child_nodes.push_back({nd.pos_lo, nl, nd.rank_lo, mid});
      child_nodes.push_back({nl, nd.pos_hi, mid, nd.rank_hi});
    }
    for (std::size_t i = 0; i < n_; ++i) {
      cnt[i + 1] += cnt[i];
      sum[i + 1] += sum[i];
    }
    left_cnt_.push_back(std::move(cnt));
    left_sum_.push_back(std::move(sum));
    cur.swap(next);
    nodes.swap(child_nodes);
  }
}

void OrderStatIndex::check_range(std::size_t lo, std::size_t hi) const {
  if (lo >= hi || hi > n_) throw IndexOutOfRange();
}

OrderStatIndex::Pick OrderStatIndex::select(std::size_t lo, std::size_t hi,
                                            std::size_t k) const {
  check_range(lo, hi);
  if (k < 1 || k > hi - lo) throw IndexOutOfRange("order statistic out of range");

  std::size_t node_lo = 0, node_hi = n_;
  std::size_t rank_lo = 0, rank_hi = distinct_.size();
  double acc = 0.0;
  for (std::size_t d = 0; rank_hi - rank_lo > 1; ++d) {
    const auto& cnt = left_cnt_[d];
    const auto& sum = left_sum_[d];
    const std::size_t in_left = cnt[hi] - cnt[lo];
    const std::size_t node_left = cnt[node_hi] - cnt[node_lo];
    const std::size_t mid = rank_lo + (rank_hi - rank_lo) / 2;
    if (k <= in_left) {
      lo = node_lo + (cnt[lo] - cnt[node_lo]);
      hi = node_lo + (cnt[hi] - cnt[node_lo]);
      node_hi = node_lo + node_left;
      rank_hi = mid;
    } else {
      acc += sum[hi] - sum[lo];
      k -= in_left;
      const std::size_t right_base = node_lo + node_left;
      lo = right_base + ((lo - node_lo) - (cnt[lo] - cnt[node_lo]));
      hi = right_base + ((hi - node_lo) - (cnt[hi] - cnt[node_lo]));
      node_lo = right_base;
      rank_lo = mid;
    }
  }
  const double v = distinct_[rank_lo];
  acc += static_cast<double>(k) * v;
  return {v, acc};
}

double OrderStatIndex::kth_smallest(std::size_t lo, std::size_t hi,
                                    std::size_t k) const {
  return select(lo, hi, k).value;
}

double OrderStatIndex::sum_smallest(std::size_t lo, std::size_t hi,
                                    std::size_t k) const {
  return select(lo, hi, k).sum;
}

std::pair<std::size_t, double> OrderStatIndex::below_rank(
    std::size_t lo, std::size_t hi, std::size_t rank_limit) const {
  check_range(lo, hi);
  if (rank_limit == 0) return {0, 0.0};
  if (rank_limit >= distinct_.size()) {
    // everything qualifies: sum over all levels' left parts plus leaf values;
    // easiest exact route is selecting all hi-lo elements
    Pick all = select(lo, hi, hi - lo);
    return {hi - lo, all.sum};
  }

  std::size_t node_lo = 0, node_hi = n_;
  std::size_t rank_lo = 0, rank_hi = distinct_.size();
  std::size_t count = 0;
  double acc = 0.0;
  for (std::size_t d = 0; rank_hi - rank_lo > 1; ++d) {
    const auto& cnt = left_cnt_[d];
    const auto& sum = left_sum_[d];
    const std::size_t node_left = cnt[node_hi] - cnt[node_lo];
    const std::size_t mid = rank_lo + (rank_hi - rank_lo) / 2;
    if (rank_limit <= mid) {
      lo = node_lo + (cnt[lo] - cnt[node_lo]);
      hi = node_lo + (cnt[hi] - cnt[node_lo]);
      node_hi = node_lo + node_left;
      rank_hi = mid;
    } else {
      count += cnt[hi] - cnt[lo];
      acc += sum[hi] - sum[lo];
      const std::size_t right_base = node_lo + node_left;
      lo = right_base + ((lo - node_lo) - (cnt[lo] - cnt[node_lo]));
      hi = right_base + ((hi - node_lo) - (cnt[hi] - cnt[node_lo]));
      node_lo = right_base;
      rank_lo = mid;
    }
    if (lo == hi) break;
  }
  if (lo < hi && rank_lo < rank_limit) {
    count += hi - lo;
    acc += static_cast<double>(hi - lo) * distinct_[rank_lo];
  }
  return {count, acc};
}

std::size_t OrderStatIndex::count_below(std::size_t lo, std::size_t hi,
                                        double v) const {
  const std::size_t r =
      std::lower_bound(distinct_.begin(), distinct_.end(), v) - distinct_.begin();
  return below_rank(lo, hi, r).first;
}

double OrderStatIndex::sum_below(std::size_t lo, std::size_t hi, double v) const {
  const std::size_t r =
      std::lower_bound(distinct_.begin(), distinct_.end(), v) - distinct_.begin();
  return below_rank(lo, hi, r).second;
}

std::size_t OrderStatIndex::count_at_most(std::size_t lo, std::size_t hi,
                                          double v) const {
  const std::size_t r =
      std::upper_bound(distinct_.begin(), distinct_.end(), v) - distinct_.begin();
  return below_rank(lo, hi, r).first;
}

double OrderStatIndex::sum_at_most(std::size_t lo, std::size_t hi, double v) const {
  const std::size_t r =
      std::upper_bound(distinct_.begin(), distinct_.end(), v) - distinct_.begin();
  return below_rank(lo, hi, r).second;
}

}  // namespace stepfit
