#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "freshx/types.hpp"

namespace freshx {

/// Labeled synthetic dataset with one informative and one noise kind.
struct TwoClass {
  Dataset dataset;
  TargetVector target;
};

/// Generates m entities (first half class 0, second half class 1) with
/// two series kinds of length n_t: "signal" follows an AR(1) process
/// s_nu = 0.5 s_{nu-1} + eps with a mean shift of `effect` added for
/// class 1, and "noise" is pure standard normal noise.  Fully determined
/// by the seed.
///
/// Throws InvalidSize unless m is even and positive, n_t >= 8, and
/// effect >= 0.
TwoClass gen_two_class(std::size_t m, std::size_t n_t, double effect,
                       std::uint64_t seed);

/// Unlabeled noise dataset with `kinds` series kinds of iid standard
/// normals; used by the benchmark command.
Dataset gen_noise_dataset(std::size_t m, std::size_t n_t, std::size_t kinds,
                          std::uint64_t seed);

/// Empirical feature-extraction error rate on pure noise: repeatedly
/// draws n_features independent standard-normal feature columns and a
/// random binary target for m samples, runs the tests plus the
/// Benjamini-Yekutieli selection at level q, and records the fraction of
/// selected features that are irrelevant (0/0 counts as 0, and every
/// selected feature here is irrelevant by construction).  Returns the
/// mean over the repetitions.
///
/// Throws InvalidSize when any count is zero, and propagates InvalidQ.
double fer_experiment(std::size_t n_features, std::size_t m, double q,
                      std::size_t repetitions, std::uint64_t seed);

enum class ScaleAxis { Length, Samples, Features };

struct ScalingRow {
  std::size_t value;
  double wall_seconds;
};

/// Times the pipeline along one scaling axis: extraction over series
/// length (m = 200 fixed) or sample count (n_t = 1000 fixed), or
/// significance testing plus selection over feature count (m = 1000
/// fixed).  Returns one row per grid value.
std::vector<ScalingRow> scaling_experiment(ScaleAxis axis,
                                           std::span<const std::size_t> grid,
                                           std::size_t jobs);

}  // namespace freshx
