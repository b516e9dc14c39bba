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

#include "maskfuse/maskcore.hpp"

namespace maskfuse
{

/// Leaf segmentation / counting metrics.
///
///   BD(a, b)  = 1/M * sum_i max_j 2|a_i & b_j| / (|a_i| + |b_j|)    (M = instances of a)
///   SBD(a, b) = min(BD(a, b), BD(b, a))
///   DiC       = #pred - #gt
///
/// Empty conventions: SBD of two empty maps is 1, SBD with exactly one empty side is 0,
/// BD against an empty opponent is 0.
struct EvalResult
{
  double sbd = 0.0;
  Index dic = 0;
  Index abs_dic = 0;
  Index pred_count = 0;
  Index gt_count = 0;
};

struct ImageResult
{
  std::string image_id;
  EvalResult result;
};

struct EvalReport
{
  std::vector<ImageResult> per_image;
  double mean_sbd = 0.0;
  double mean_dic = 0.0;
  double mean_abs_dic = 0.0;
  double mean_pred_count = 0.0;
  double mean_gt_count = 0.0;
  std::size_t n_images = 0;
};

/// Dense overlap table: counts(i, j) = pixels with id i in a and id j in b.
/// Both maps are canonicalized first; row/column 0 is background.
Grid<Index> contingency(const LabelMap & a, const LabelMap & b);

double best_dice(const LabelMap & a, const LabelMap & b);
double sbd(const LabelMap & pred, const LabelMap & gt);
Index dic(const LabelMap & pred, const LabelMap & gt);

EvalResult evaluate_maps(const LabelMap & pred, const LabelMap & gt);
EvalResult evaluate_pair(const PredictionSet & pred, const LabelMap & gt, OverlapRule rule = OverlapRule::score);

struct CorpusItem
{
  std::string image_id;
  PredictionSet pred;
  LabelMap gt;
};

/// Per-image results sorted by image id, plus arithmetic means. Errors are rethrown
/// with the offending image id prefixed.
EvalReport evaluate_corpus(
  const std::vector<CorpusItem> & items, OverlapRule rule = OverlapRule::score, int threads = 1);

/// Assembles a report from already computed per-image results (sorted by id here).
EvalReport summarize(std::vector<ImageResult> per_image);

}  // namespace maskfuse
