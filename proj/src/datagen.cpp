#include "stepfit/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace stepfit {
namespace datagen {

StepCurve true_curve() {
  StepCurve curve;
  curve.breakpoints = {0.0, 12.0, 30.0, 35.0, 45.0, 50.0, 60.0};
  curve.values = {100.0, 115.0, 102.0, 93.0, 72.0, 50.0};
  return curve;
}

namespace {

// Platform-independent draws on top of the standardized mt19937_64 stream.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : eng_(seed) {}

  // uniform on [0, 1), 53-bit resolution
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; the pair is drawn eagerly and the spare
  // cached, so exactly one or zero engine pairs are consumed per call
  double normal01() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

Dataset generate(const GenConfig& cfg) {
  PortableRng rng(cfg.seed);
  const StepCurve curve = true_curve();

  std::vector<double> ps(cfg.count);
  if (cfg.sampling == GenConfig::Sampling::Grid) {
    for (std::size_t i = 0; i < cfg.count; ++i)
      ps[i] = 60.0 * static_cast<double>(i) / static_cast<double>(cfg.count);
  } else {
    for (std::size_t i = 0; i < cfg.count; ++i) ps[i] = 60.0 * rng.uniform01();
    std::sort(ps.begin(), ps.end());
    for (std::size_t i = 1; i < cfg.count; ++i)
      while (ps[i] <= ps[i - 1])
        ps[i] = std::nextafter(ps[i - 1], std::numeric_limits<double>::infinity());
  }

  std::vector<DataPoint> rows(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    rows[i].p = ps[i];
    rows[i].x = curve.evaluate(ps[i]) + cfg.sigma * rng.normal01();
  }
  return Dataset(std::move(rows), DuplicatePolicy::Reject);
}

}  // namespace datagen
}  // namespace stepfit
