// Copyright 2026 The maskfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "maskfuse/threshold.hpp"
#include "maskfuse/transforms.hpp"

namespace maskfuse
{

/// Seeded generator used for all synthetic data. The engine is std::mt19937_64, whose
/// output sequence is fixed by the standard; range mapping is done here rather than with
/// std distributions, which differ between standard libraries.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to base + stream; used to derive independent per-image seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

struct RosetteConfig
{
  Index width = 128;
  Index height = 128;
  int leaf_count = 8;
  /// Full leaf length and width in pixels, inclusive ranges.
  int leaf_length_min = 28;
  int leaf_length_max = 44;
  int leaf_width_min = 12;
  int leaf_width_max = 20;
  /// Plant centre offset from the image centre, per axis.
  int center_jitter = 4;
  std::uint64_t seed = 0;
  /// Each visible leaf must form a single component at this connectivity.
  int connectivity = 4;
};

void validate(const RosetteConfig & cfg);

/// Elliptical leaves radiating from a jittered centre, rasterized with integer arithmetic.
/// Later (shorter) leaves occlude earlier ones. Draws in which a leaf is fully hidden or
/// split by occlusion are rejected and redrawn from the same stream.
LabelMap generate_rosette(const RosetteConfig & cfg);

/// score = 1 - merge_penalty * merged - boundary_penalty * corruption + jitter * u,
/// u uniform in [-1, 1), clamped to [0, 1].
struct ScoreModel
{
  double merge_penalty = 0.3;
  double boundary_penalty = 0.2;
  double jitter = 0.05;
};

struct NoiseConfig
{
  double merge_prob = 0.0;
  double drop_prob = 0.0;
  /// Radius of the random erosion (negative draw) or dilation (positive draw).
  int boundary_noise = 0;
  ScoreModel score_model;
  std::uint64_t seed = 0;

  /// No corruption of any kind, including the score jitter.
  static NoiseConfig none();
};

void validate(const NoiseConfig & cfg);

/// Simulated detector output for a ground-truth map. Adjacent leaves merge pairwise with
/// merge_prob, units are dropped with drop_prob, then boundaries are eroded/dilated.
PredictionSet corrupt(const LabelMap & gt, const NoiseConfig & noise);

/// One corrupted prediction set per transform, in that transform's coordinates. The draw for
/// transforms[i] uses seed noise.seed + i. transforms must contain identity.
VersionMap simulate_versions(const LabelMap & gt, const NoiseConfig & noise, const std::vector<Transform> & transforms);

struct CorpusConfig
{
  std::size_t images = 10;
  RosetteConfig rosette;
  NoiseConfig noise;
  std::vector<Transform> transforms{all_transforms.begin(), all_transforms.end()};
  std::uint64_t seed = 0;
};

std::string image_id(std::size_t index);

/// Image i uses rosette seed derive_seed(seed, 2i) and noise seed derive_seed(seed, 2i+1).
std::vector<SweepItem> generate_corpus(const CorpusConfig & cfg, int threads = 1);

}  // namespace maskfuse
