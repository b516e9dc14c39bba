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

#include "maskfuse/tta_fusion.hpp"

#include <algorithm>
#include <string>

namespace maskfuse
{

namespace
{

struct InstanceStats
{
  Box box;
  Index area = 0;
};

std::vector<InstanceStats> stats_of(const PredictionSet & ps)
{
  std::vector<InstanceStats> out;
  out.reserve(ps.size());
  for (const auto & inst : ps.instances) {
    out.push_back({bounding_box(inst.mask), inst.mask.count()});
  }
  return out;
}

void check_versions(const std::vector<PredictionSet> & versions)
{
  if (versions.empty()) {
    throw InvalidArgument("no prediction versions given");
  }
  for (std::size_t v = 0; v < versions.size(); ++v) {
    if (versions[v].width != versions[0].width || versions[v].height != versions[0].height) {
      throw InvalidArgument(
        "version " + std::to_string(v) + ": dimensions differ from version 0");
    }
    validate(versions[v]);
  }
}

struct Candidate
{
  double iou;
  std::size_t ref;
  std::size_t other;
};

}  // namespace

void validate(const FusionConfig & cfg)
{
  if (!(cfg.match_threshold > 0.0 && cfg.match_threshold < 1.0)) {
    throw InvalidArgument("match_threshold must lie in (0,1)");
  }
  if (cfg.min_versions < 1) {
    throw InvalidArgument("min_versions must be >= 1");
  }
}

std::size_t select_reference(const std::vector<PredictionSet> & versions)
{
  if (versions.empty()) {
    throw InvalidArgument("select_reference: no versions");
  }
  std::size_t best = 0;
  for (std::size_t v = 1; v < versions.size(); ++v) {
    if (versions[v].size() > versions[best].size()) {
      best = v;
    }
  }
  return best;
}

std::vector<AlignedInstance> align(
  const std::vector<PredictionSet> & versions, std::size_t reference, const FusionConfig & cfg)
{
  check_versions(versions);
  validate(cfg);
  if (reference >= versions.size()) {
    throw InvalidArgument("align: reference index out of range");
  }

  const auto & ref = versions[reference];
  const auto ref_stats = stats_of(ref);
  std::vector<AlignedInstance> aligned(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    aligned[i].reference_index = i;
    aligned[i].members.push_back({reference, i, 1.0});
  }

  std::vector<Candidate> candidates;
  for (std::size_t v = 0; v < versions.size(); ++v) {
    if (v == reference) {
      continue;
    }
    const auto & other = versions[v];
    const auto other_stats = stats_of(other);

    candidates.clear();
    for (std::size_t i = 0; i < ref.size(); ++i) {
      for (std::size_t j = 0; j < other.size(); ++j) {
        const Index inter = intersection_area(
          ref.instances[i].mask, ref_stats[i].box, other.instances[j].mask, other_stats[j].box);
        if (inter == 0) {
          continue;
        }
        const double value = static_cast<double>(inter) /
                             static_cast<double>(ref_stats[i].area + other_stats[j].area - inter);
        if (value > cfg.match_threshold) {
          candidates.push_back({value, i, j});
        }
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate & a, const Candidate & b) {
      if (a.iou != b.iou) {
        return a.iou > b.iou;
      }
      return a.ref != b.ref ? a.ref < b.ref : a.other < b.other;
    });

    std::vector<bool> ref_used(ref.size(), false);
    std::vector<bool> other_used(other.size(), false);
    for (const auto & c : candidates) {
      if (ref_used[c.ref] || other_used[c.other]) {
        continue;
      }
      ref_used[c.ref] = true;
      other_used[c.other] = true;
      aligned[c.ref].members.push_back({v, c.other, c.iou});
    }
  }
  return aligned;
}

PredictionSet fuse(const std::vector<PredictionSet> & versions, const FusionConfig & cfg)
{
  const std::size_t reference = select_reference(versions);
  const auto aligned = align(versions, reference, cfg);

  PredictionSet out;
  out.width = versions[reference].width;
  out.height = versions[reference].height;

  for (const auto & group : aligned) {
    const auto n_members = static_cast<int>(group.members.size());
    if (n_members < cfg.min_versions) {
      continue;
    }
    const auto & ref_inst = versions[reference].instances[group.reference_index];
    const int n = cfg.denominator == VoteDenominator::matched
                    ? n_members
                    : static_cast<int>(versions.size());

    Grid<int> votes = Grid<int>::Zero(out.height, out.width);
    double score_offset = 0.0;
    for (const auto & m : group.members) {
      const auto & inst = versions[m.version].instances[m.instance];
      votes += inst.mask.cast<int>();
      score_offset += inst.score - ref_inst.score;
    }

    // Strict majority; an exact split is decided by the reference pixel.
    BinaryMask fused = (2 * votes > n) || ((2 * votes == n) && ref_inst.mask);
    if (!fused.any()) {
      continue;
    }
    // Mean written as ref + mean offset so equal member scores reproduce the reference exactly.
    const double score = std::clamp(ref_inst.score + score_offset / n_members, 0.0, 1.0);
    out.instances.push_back({std::move(fused), score, n_members});
  }
  return out;
}

PredictionSet tta_pipeline(const VersionMap & versions, const FusionConfig & cfg)
{
  const auto id = versions.find(Transform::identity);
  if (id == versions.end()) {
    throw InvalidArgument("tta_pipeline: identity entry is missing");
  }
  const Index w = id->second.width;
  const Index h = id->second.height;

  std::vector<PredictionSet> restored;
  restored.reserve(versions.size());
  restored.push_back(id->second);
  for (const auto & [t, ps] : versions) {
    if (t == Transform::identity) {
      continue;
    }
    const auto [ew, eh] = transformed_size(t, w, h);
    if (ps.width != ew || ps.height != eh) {
      throw InvalidArgument(
        "tta_pipeline: " + to_string(t) + " entry is " + std::to_string(ps.width) + "x" +
        std::to_string(ps.height) + ", expected " + std::to_string(ew) + "x" + std::to_string(eh));
    }
    validate(ps);
    restored.push_back(invert_set(t, ps));
  }
  return fuse(restored, cfg);
}

}  // namespace maskfuse
