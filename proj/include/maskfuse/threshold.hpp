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

#include <string>
#include <vector>

#include "maskfuse/metrics.hpp"
#include "maskfuse/tta_fusion.hpp"

namespace maskfuse
{

struct SweepConfig
{
  std::vector<double> taus = {0.5, 0.6, 0.7, 0.8, 0.9};
  /// Filter every version, then fuse; otherwise only the identity version is evaluated.
  bool apply_tta = false;
  FusionConfig fusion;
  OverlapRule overlap_rule = OverlapRule::score;
};

/// taus must be strictly increasing and inside [0,1].
void validate(const SweepConfig & cfg);

struct SweepRow
{
  double tau = 0.0;
  double mean_sbd = 0.0;
  double mean_dic = 0.0;
  double mean_abs_dic = 0.0;
  double mean_pred_count = 0.0;
  std::size_t n_images = 0;
};

using SweepTable = std::vector<SweepRow>;

struct SweepItem
{
  std::string image_id;
  VersionMap versions;
  LabelMap gt;
};

/// Keeps instances with score >= tau, in order.
PredictionSet filter_by_score(const PredictionSet & ps, double tau);

/// Filters, optionally fuses and evaluates the corpus at a single threshold.
EvalReport evaluate_at(const std::vector<SweepItem> & corpus, double tau, const SweepConfig & cfg, int threads = 1);

SweepTable sweep(const std::vector<SweepItem> & corpus, const SweepConfig & cfg, int threads = 1);

}  // namespace maskfuse
