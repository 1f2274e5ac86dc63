#pragma once

#include <cstddef>
#include <cstdint>

#include "stepfit/curve.hpp"
#include "stepfit/dataset.hpp"

namespace stepfit {
namespace datagen {

/// Synthetic-instance settings. Prices cover [0, 60).
struct GenConfig {
  std::size_t count = 1000;  ///< number of observations
  double sigma = 5.0;        ///< Gaussian noise standard deviation
  std::uint64_t seed = 0;
  enum class Sampling { Grid, Uniform } sampling = Sampling::Grid;
};

/// The six-block reference curve the generator samples from:
/// [0,12) -> 100, [12,30) -> 115, [30,35) -> 102, [35,45) -> 93,
/// [45,50) -> 72, [50,60] -> 50.
StepCurve true_curve();

/// Draws count observations x = f(p) + sigma * z with f the reference curve.
///
/// Grid sampling places p_i = 60*i/count for i = 0..count-1; uniform sampling
/// draws i.i.d. prices on [0,60), sorts them and nudges duplicates up by one
/// ulp. Randomness comes from a seeded mt19937_64: uniform doubles take the
/// top 53 bits, normals use Box-Muller (both draws spelled out here so the
/// stream is identical on every platform). Prices are drawn first, then one
/// normal per observation in index order; with sigma = 0 the responses equal
/// the reference curve exactly.
Dataset generate(const GenConfig& cfg);

}  // namespace datagen
}  // namespace stepfit
