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

#include <cstddef>
#include <map>
#include <vector>

#include "maskfuse/maskcore.hpp"
#include "maskfuse/transforms.hpp"

namespace maskfuse
{

/// Denominator of the per-pixel majority vote.
enum class VoteDenominator {
  matched,       ///< versions in which the instance was matched
  all_versions,  ///< every version, matched or not
};

struct FusionConfig
{
  /// Candidates need IoU strictly above this to join a reference instance.
  double match_threshold = 0.5;
  /// Fused instances backed by fewer members are dropped.
  int min_versions = 1;
  VoteDenominator denominator = VoteDenominator::matched;
};

void validate(const FusionConfig & cfg);

struct AlignedMember
{
  std::size_t version = 0;
  std::size_t instance = 0;
  double iou_with_reference = 1.0;
};

/// A reference instance and the instances from other versions matched to it.
/// members[0] is always the reference instance itself; the rest are ordered by version.
struct AlignedInstance
{
  std::size_t reference_index = 0;
  std::vector<AlignedMember> members;
};

/// Version with the most instances, lowest index on ties.
std::size_t select_reference(const std::vector<PredictionSet> & versions);

/// Greedy one-to-one matching of each version against the reference, in descending IoU.
std::vector<AlignedInstance> align(
  const std::vector<PredictionSet> & versions, std::size_t reference, const FusionConfig & cfg = {});

/// Majority vote of aligned member masks. Versions must already be in original coordinates.
PredictionSet fuse(const std::vector<PredictionSet> & versions, const FusionConfig & cfg = {});

using VersionMap = std::map<Transform, PredictionSet>;

/// Inverts each entry's transform, then aligns and fuses. Requires an identity entry.
PredictionSet tta_pipeline(const VersionMap & versions, const FusionConfig & cfg = {});

}  // namespace maskfuse
