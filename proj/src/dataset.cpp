#include "stepfit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "stepfit/errors.hpp"

namespace stepfit {

Dataset::Dataset(std::vector<DataPoint> rows, DuplicatePolicy policy)
    : pts_(std::move(rows)) {
  if (pts_.empty()) throw EmptyInput("dataset needs at least one observation");
  for (const DataPoint& pt : pts_)
    if (!std::isfinite(pt.p) || !std::isfinite(pt.x)) throw NonFiniteValue();

  std::stable_sort(pts_.begin(), pts_.end(),
                   [](const DataPoint& a, const DataPoint& b) { return a.p < b.p; });

  coord_begin_.push_back(0);
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    if (pts_[i].p == pts_[i - 1].p) {
      if (policy == DuplicatePolicy::Reject) throw DuplicateP(pts_[i].p);
    } else {
      coord_begin_.push_back(i);
    }
  }
  coord_begin_.push_back(pts_.size());

  pref_x_.resize(pts_.size() + 1, 0.0);
  pref_x2_.resize(pts_.size() + 1, 0.0);
  max_x_ = pts_[0].x;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    pref_x_[i + 1] = pref_x_[i] + pts_[i].x;
    pref_x2_[i + 1] = pref_x2_[i] + pts_[i].x * pts_[i].x;
    max_x_ = std::max(max_x_, pts_[i].x);
  }

  std::vector<double> xs(pts_.size());
  for (std::size_t i = 0; i < pts_.size(); ++i) xs[i] = pts_[i].x;
  order_ = OrderStatIndex(xs);
}

Dataset load_dataset(std::vector<DataPoint> rows, DuplicatePolicy policy) {
  return Dataset(std::move(rows), policy);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

}  // namespace

Dataset load_csv(std::istream& in, DuplicatePolicy policy) {
  std::vector<DataPoint> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (lineno == 1 && sv.size() >= 3 && sv.substr(0, 3) == "\xEF\xBB\xBF")
      sv.remove_prefix(3);  // UTF-8 BOM
    sv = trim(sv);
    if (sv.empty()) continue;

    const std::size_t comma = sv.find(',');
    if (comma == std::string_view::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'p,x'");
    std::string_view f0 = sv.substr(0, comma);
    std::string_view f1 = sv.substr(comma + 1);
    if (f1.find(',') != std::string_view::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected exactly two fields");

    DataPoint pt;
    if (!parse_double(f0, pt.p)) {
      if (first_content_line) {  // header line
        first_content_line = false;
        continue;
      }
      throw ParseError("line " + std::to_string(lineno) + ": bad number '" +
                       std::string(f0) + "'");
    }
    if (!parse_double(f1, pt.x))
      throw ParseError("line " + std::to_string(lineno) + ": bad number '" +
                       std::string(f1) + "'");
    first_content_line = false;
    rows.push_back(pt);
  }
  return Dataset(std::move(rows), policy);
}

Dataset load_csv_file(const std::string& path, DuplicatePolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_csv(in, policy);
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_csv(std::ostream& out, const Dataset& data) {
  out << "p,x\n";
  for (const DataPoint& pt : data.points())
    out << format_double(pt.p) << ',' << format_double(pt.x) << '\n';
}

}  // namespace stepfit
