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

#include "maskfuse/metrics.hpp"

#include <algorithm>

#include "maskfuse/parallel.hpp"

namespace maskfuse
{

namespace
{

void require_same_shape(const LabelMap & a, const LabelMap & b, const char * op)
{
  if (!same_shape(a, b)) {
    throw InvalidArgument(
      std::string(op) + ": dimension mismatch (" + std::to_string(a.cols()) + "x" +
      std::to_string(a.rows()) + " vs " + std::to_string(b.cols()) + "x" + std::to_string(b.rows()) +
      ")");
  }
}

std::int32_t max_id(const LabelMap & lm)
{
  return lm.size() == 0 ? 0 : std::max(0, lm.maxCoeff());
}

// Best Dice of the rows of a contingency table against its columns.
double best_dice_rows(const Grid<Index> & table)
{
  const Index rows = table.rows() - 1;
  const Index cols = table.cols() - 1;
  if (rows <= 0) {
    throw InvalidArgument("best_dice: first map has no foreground instance");
  }
  if (cols <= 0) {
    return 0.0;
  }
  const Eigen::Array<Index, Eigen::Dynamic, 1> row_area = table.rowwise().sum();
  const Eigen::Array<Index, 1, Eigen::Dynamic> col_area = table.colwise().sum();
  double total = 0.0;
  for (Index i = 1; i <= rows; ++i) {
    double best = 0.0;
    for (Index j = 1; j <= cols; ++j) {
      if (table(i, j) == 0) {
        continue;
      }
      const double d = 2.0 * static_cast<double>(table(i, j)) /
                       static_cast<double>(row_area(i) + col_area(j));
      best = std::max(best, d);
    }
    total += best;
  }
  return total / static_cast<double>(rows);
}

}  // namespace

Grid<Index> contingency(const LabelMap & a, const LabelMap & b)
{
  require_same_shape(a, b, "contingency");
  const LabelMap ca = canonicalize(a);
  const LabelMap cb = canonicalize(b);
  Grid<Index> table = Grid<Index>::Zero(max_id(ca) + 1, max_id(cb) + 1);
  const auto * pa = ca.data();
  const auto * pb = cb.data();
  for (Index i = 0; i < ca.size(); ++i) {
    ++table(pa[i], pb[i]);
  }
  return table;
}

double best_dice(const LabelMap & a, const LabelMap & b)
{
  return best_dice_rows(contingency(a, b));
}

double sbd(const LabelMap & pred, const LabelMap & gt)
{
  require_same_shape(pred, gt, "sbd");
  const Grid<Index> table = contingency(pred, gt);
  const bool pred_empty = table.rows() == 1;
  const bool gt_empty = table.cols() == 1;
  if (pred_empty && gt_empty) {
    return 1.0;
  }
  if (pred_empty || gt_empty) {
    return 0.0;
  }
  const Grid<Index> transposed = table.transpose();
  return std::min(best_dice_rows(table), best_dice_rows(transposed));
}

Index dic(const LabelMap & pred, const LabelMap & gt)
{
  return instance_count(pred) - instance_count(gt);
}

EvalResult evaluate_maps(const LabelMap & pred, const LabelMap & gt)
{
  EvalResult r;
  r.sbd = sbd(pred, gt);
  r.pred_count = instance_count(pred);
  r.gt_count = instance_count(gt);
  r.dic = r.pred_count - r.gt_count;
  r.abs_dic = r.dic < 0 ? -r.dic : r.dic;
  return r;
}

EvalResult evaluate_pair(const PredictionSet & pred, const LabelMap & gt, OverlapRule rule)
{
  if (pred.width != width(gt) || pred.height != height(gt)) {
    throw InvalidArgument(
      "evaluate_pair: prediction is " + std::to_string(pred.width) + "x" + std::to_string(pred.height) +
      ", ground truth is " + std::to_string(width(gt)) + "x" + std::to_string(height(gt)));
  }
  return evaluate_maps(instances_to_label_map(pred, rule), gt);
}

EvalReport summarize(std::vector<ImageResult> per_image)
{
  std::stable_sort(per_image.begin(), per_image.end(), [](const auto & a, const auto & b) {
    return a.image_id < b.image_id;
  });
  EvalReport report;
  report.n_images = per_image.size();
  for (const auto & r : per_image) {
    report.mean_sbd += r.result.sbd;
    report.mean_dic += static_cast<double>(r.result.dic);
    report.mean_abs_dic += static_cast<double>(r.result.abs_dic);
    report.mean_pred_count += static_cast<double>(r.result.pred_count);
    report.mean_gt_count += static_cast<double>(r.result.gt_count);
  }
  if (report.n_images > 0) {
    const auto n = static_cast<double>(report.n_images);
    report.mean_sbd /= n;
    report.mean_dic /= n;
    report.mean_abs_dic /= n;
    report.mean_pred_count /= n;
    report.mean_gt_count /= n;
  }
  report.per_image = std::move(per_image);
  return report;
}

EvalReport evaluate_corpus(const std::vector<CorpusItem> & items, OverlapRule rule, int threads)
{
  std::vector<ImageResult> results(items.size());
  parallel_for(items.size(), threads, [&](std::size_t i) {
    const auto & item = items[i];
    try {
      results[i] = {item.image_id, evaluate_pair(item.pred, item.gt, rule)};
    } catch (const InputError & e) {
      throw InputError(item.image_id + ": " + e.what());
    } catch (const std::exception & e) {
      throw InvalidArgument(item.image_id + ": " + e.what());
    }
  });
  return summarize(std::move(results));
}

}  // namespace maskfuse
