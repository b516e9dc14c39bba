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

#include "maskfuse/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <set>
#include <utility>

#include "maskfuse/parallel.hpp"

namespace maskfuse
{

namespace
{

constexpr int kDirections = 64;
constexpr std::int64_t kFixed = 1024;

// round(1024 * sin(2 pi k / 64))
constexpr std::array<std::int64_t, kDirections> kSin = {
  0,     100,   200,   297,   392,   483,   569,   650,   724,   792,   851,   903,   946,
  980,   1004,  1019,  1024,  1019,  1004,  980,   946,   903,   851,   792,   724,   650,
  569,   483,   392,   297,   200,   100,   0,     -100,  -200,  -297,  -392,  -483,  -569,
  -650,  -724,  -792,  -851,  -903,  -946,  -980,  -1004, -1019, -1024, -1019, -1004, -980,
  -946,  -903,  -851,  -792,  -724,  -650,  -569,  -483,  -392,  -297,  -200,  -100};

std::int64_t sin_q(int dir)
{
  return kSin[static_cast<std::size_t>(((dir % kDirections) + kDirections) % kDirections)];
}

std::int64_t cos_q(int dir)
{
  return sin_q(dir + kDirections / 4);
}

constexpr int kMaxAttempts = 1000;

struct Leaf
{
  int direction = 0;
  std::int64_t length = 0;
  std::int64_t width = 0;
};

// Paints one ellipse with semi-axes (length/2, width/2) whose major axis points along
// `direction`; its centre sits 3/8 of the length out from the plant centre so the base
// overlaps the centre.
void paint_leaf(LabelMap & lm, std::int64_t pcx, std::int64_t pcy, const Leaf & leaf, std::int32_t id)
{
  const std::int64_t c = cos_q(leaf.direction);
  const std::int64_t s = sin_q(leaf.direction);
  // Doubled units so half-axes stay integral.
  const std::int64_t a2 = leaf.length;  // 2 * semi-major
  const std::int64_t b2 = leaf.width;   // 2 * semi-minor
  const std::int64_t dist = leaf.length * 3 / 8;
  // Leaf centre in 1/kFixed pixels.
  const std::int64_t cx = pcx * kFixed + dist * c;
  const std::int64_t cy = pcy * kFixed + dist * s;

  const std::int64_t reach = leaf.length / 2 + 1;
  const std::int64_t x_lo = std::max<std::int64_t>(0, cx / kFixed - reach);
  const std::int64_t x_hi = std::min<std::int64_t>(lm.cols() - 1, cx / kFixed + reach);
  const std::int64_t y_lo = std::max<std::int64_t>(0, cy / kFixed - reach);
  const std::int64_t y_hi = std::min<std::int64_t>(lm.rows() - 1, cy / kFixed + reach);

  // Inside iff (2p)^2 * (2b)^2 + (2q)^2 * (2a)^2 <= (2a)^2 (2b)^2, all in 1/kFixed units.
  const std::int64_t rhs = (a2 * b2 * kFixed) * (a2 * b2 * kFixed) / 4;
  for (std::int64_t y = y_lo; y <= y_hi; ++y) {
    for (std::int64_t x = x_lo; x <= x_hi; ++x) {
      const std::int64_t dx = x * kFixed - cx;
      const std::int64_t dy = y * kFixed - cy;
      const std::int64_t p = (dx * c + dy * s) / kFixed;
      const std::int64_t q = (-dx * s + dy * c) / kFixed;
      if (p * p * b2 * b2 + q * q * a2 * a2 <= rhs) {
        lm(y, x) = id;
      }
    }
  }
}

bool leaves_well_formed(const LabelMap & lm, int leaf_count, int connectivity)
{
  std::vector<Box> boxes(static_cast<std::size_t>(leaf_count) + 1, Box{lm.cols(), lm.rows(), -1, -1});
  for (Index y = 0; y < lm.rows(); ++y) {
    for (Index x = 0; x < lm.cols(); ++x) {
      if (const auto id = lm(y, x); id > 0) {
        auto & b = boxes[static_cast<std::size_t>(id)];
        b.x0 = std::min(b.x0, x);
        b.y0 = std::min(b.y0, y);
        b.x1 = std::max(b.x1, x);
        b.y1 = std::max(b.y1, y);
      }
    }
  }
  for (std::int32_t id = 1; id <= leaf_count; ++id) {
    const Box & b = boxes[static_cast<std::size_t>(id)];
    if (b.empty()) {
      return false;
    }
    const BinaryMask m = lm.block(b.y0, b.x0, b.y1 - b.y0 + 1, b.x1 - b.x0 + 1) == id;
    if (connected_components(m, connectivity).size() != 1) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
  if (hi < lo) {
    throw InvalidArgument("uniform_int: empty range");
  }
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) {
    return static_cast<std::int64_t>(next());
  }
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = next();
  while (x >= limit) {
    x = next();
  }
  return lo + static_cast<std::int64_t>(x % range);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
{
  std::uint64_t z = base + stream * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void validate(const RosetteConfig & cfg)
{
  if (cfg.width < 1 || cfg.height < 1) {
    throw InvalidArgument("rosette: image dimensions must be positive");
  }
  if (cfg.leaf_count < 1 || cfg.leaf_count > 65535) {
    throw InvalidArgument("rosette: leaf_count must be in [1, 65535]");
  }
  if (cfg.leaf_length_min < 1 || cfg.leaf_length_min > cfg.leaf_length_max) {
    throw InvalidArgument("rosette: invalid leaf length range");
  }
  if (cfg.leaf_width_min < 1 || cfg.leaf_width_min > cfg.leaf_width_max) {
    throw InvalidArgument("rosette: invalid leaf width range");
  }
  if (cfg.center_jitter < 0) {
    throw InvalidArgument("rosette: center_jitter must be non-negative");
  }
  if (2 * static_cast<Index>(cfg.leaf_length_max) > std::min(cfg.width, cfg.height) ||
      2 * static_cast<Index>(cfg.leaf_width_max) > std::min(cfg.width, cfg.height)) {
    throw InvalidArgument("rosette: leaf dimensions exceed half the image size");
  }
  if (cfg.connectivity != 4 && cfg.connectivity != 8) {
    throw InvalidArgument("rosette: connectivity must be 4 or 8");
  }
}

LabelMap generate_rosette(const RosetteConfig & cfg)
{
  validate(cfg);
  Rng rng(cfg.seed);
  std::vector<Leaf> leaves(static_cast<std::size_t>(cfg.leaf_count));

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::int64_t pcx = cfg.width / 2 + rng.uniform_int(-cfg.center_jitter, cfg.center_jitter);
    const std::int64_t pcy = cfg.height / 2 + rng.uniform_int(-cfg.center_jitter, cfg.center_jitter);
    const int base = static_cast<int>(rng.uniform_int(0, kDirections - 1));
    const int spread = std::max(1, kDirections / cfg.leaf_count / 4);

    for (int k = 0; k < cfg.leaf_count; ++k) {
      auto & leaf = leaves[static_cast<std::size_t>(k)];
      leaf.direction = base + k * kDirections / cfg.leaf_count +
                       static_cast<int>(rng.uniform_int(-spread, spread));
      leaf.length = rng.uniform_int(cfg.leaf_length_min, cfg.leaf_length_max);
      leaf.width = rng.uniform_int(cfg.leaf_width_min, cfg.leaf_width_max);
    }
    // Older, longer leaves lie underneath.
    std::stable_sort(leaves.begin(), leaves.end(), [](const Leaf & a, const Leaf & b) {
      return a.length > b.length;
    });

    LabelMap lm = LabelMap::Zero(cfg.height, cfg.width);
    for (int k = 0; k < cfg.leaf_count; ++k) {
      paint_leaf(lm, pcx, pcy, leaves[static_cast<std::size_t>(k)], k + 1);
    }
    if (leaves_well_formed(lm, cfg.leaf_count, cfg.connectivity)) {
      return lm;
    }
  }
  throw InvalidArgument("rosette: could not place all leaves visibly; reduce leaf_count or sizes");
}

NoiseConfig NoiseConfig::none()
{
  NoiseConfig cfg;
  cfg.score_model.jitter = 0.0;
  return cfg;
}

void validate(const NoiseConfig & cfg)
{
  auto prob = [](double p, const char * name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument(std::string("noise: ") + name + " must be in [0,1]");
    }
  };
  prob(cfg.merge_prob, "merge_prob");
  prob(cfg.drop_prob, "drop_prob");
  if (cfg.boundary_noise < 0) {
    throw InvalidArgument("noise: boundary_noise must be non-negative");
  }
  if (cfg.score_model.jitter < 0.0) {
    throw InvalidArgument("noise: score jitter must be non-negative");
  }
}

PredictionSet corrupt(const LabelMap & gt, const NoiseConfig & noise)
{
  validate(noise);
  const LabelMap canon = canonicalize(gt);
  const std::int32_t k = canon.size() == 0 ? 0 : canon.maxCoeff();
  Rng rng(noise.seed);

  // 4-neighbour adjacency between distinct leaves, as ordered (low, high) id pairs.
  std::set<std::pair<std::int32_t, std::int32_t>> adjacent;
  auto note = [&](std::int32_t a, std::int32_t b) {
    if (a > 0 && b > 0 && a != b) {
      adjacent.emplace(std::min(a, b), std::max(a, b));
    }
  };
  for (Index y = 0; y < canon.rows(); ++y) {
    for (Index x = 0; x < canon.cols(); ++x) {
      if (x + 1 < canon.cols()) {
        note(canon(y, x), canon(y, x + 1));
      }
      if (y + 1 < canon.rows()) {
        note(canon(y, x), canon(y + 1, x));
      }
    }
  }

  // partner[i] == j > 0: leaf j is merged into leaf i. partner[j] == -1: absorbed.
  std::vector<std::int32_t> partner(static_cast<std::size_t>(k) + 1, 0);
  for (const auto & [a, b] : adjacent) {
    const double u = rng.uniform01();
    if (partner[a] == 0 && partner[b] == 0 && u < noise.merge_prob) {
      partner[a] = b;
      partner[b] = -1;
    }
  }

  PredictionSet out;
  out.width = width(gt);
  out.height = height(gt);
  const int r = noise.boundary_noise;
  for (std::int32_t id = 1; id <= k; ++id) {
    if (partner[id] < 0) {
      continue;
    }
    const bool merged = partner[id] > 0;
    const BinaryMask original = merged ? BinaryMask((canon == id) || (canon == partner[id])) : BinaryMask(canon == id);

    const double drop_u = rng.uniform01();
    const auto steps = r > 0 ? rng.uniform_int(-r, r) : 0;
    const double score_u = rng.uniform01();
    if (drop_u < noise.drop_prob) {
      continue;
    }

    BinaryMask mask = original;
    const Index n = static_cast<Index>(steps < 0 ? -steps : steps);
    if (n > 0) {
      // Morphology cannot reach beyond n pixels of the unit, so work on a padded crop.
      const Box b = bounding_box(original);
      const Index x0 = std::max<Index>(0, b.x0 - n);
      const Index y0 = std::max<Index>(0, b.y0 - n);
      const Index x1 = std::min<Index>(out.width - 1, b.x1 + n);
      const Index y1 = std::min<Index>(out.height - 1, b.y1 + n);
      BinaryMask crop = original.block(y0, x0, y1 - y0 + 1, x1 - x0 + 1);
      for (Index s = 0; s < n; ++s) {
        crop = steps < 0 ? erode(crop) : dilate(crop);
      }
      mask.block(y0, x0, y1 - y0 + 1, x1 - x0 + 1) = crop;
    }
    if (!mask.any()) {
      continue;
    }
    const double changed = static_cast<double>((mask != original).count()) /
                           static_cast<double>(original.count());
    const auto & sm = noise.score_model;
    const double score = 1.0 - sm.merge_penalty * (merged ? 1.0 : 0.0) -
                         sm.boundary_penalty * std::min(1.0, changed) +
                         sm.jitter * (2.0 * score_u - 1.0);
    out.instances.push_back({std::move(mask), std::clamp(score, 0.0, 1.0), 0});
  }
  return out;
}

VersionMap simulate_versions(const LabelMap & gt, const NoiseConfig & noise, const std::vector<Transform> & transforms)
{
  if (std::find(transforms.begin(), transforms.end(), Transform::identity) == transforms.end()) {
    throw InvalidArgument("simulate_versions: identity transform is required");
  }
  VersionMap out;
  for (std::size_t i = 0; i < transforms.size(); ++i) {
    NoiseConfig draw = noise;
    draw.seed = noise.seed + i;
    if (!out.emplace(transforms[i], corrupt(apply(transforms[i], gt), draw)).second) {
      throw InvalidArgument("simulate_versions: duplicate transform " + to_string(transforms[i]));
    }
  }
  return out;
}

std::string image_id(std::size_t index)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "img_%04zu", index);
  return buf;
}

std::vector<SweepItem> generate_corpus(const CorpusConfig & cfg, int threads)
{
  validate(cfg.rosette);
  validate(cfg.noise);
  std::vector<SweepItem> items(cfg.images);
  parallel_for(cfg.images, threads, [&](std::size_t i) {
    RosetteConfig rc = cfg.rosette;
    rc.seed = derive_seed(cfg.seed, 2 * i);
    NoiseConfig nc = cfg.noise;
    nc.seed = derive_seed(cfg.seed, 2 * i + 1);
    auto gt = generate_rosette(rc);
    items[i] = {image_id(i), simulate_versions(gt, nc, cfg.transforms), std::move(gt)};
  });
  return items;
}

}  // namespace maskfuse
