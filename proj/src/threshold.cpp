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

#include "maskfuse/threshold.hpp"

#include "maskfuse/parallel.hpp"

namespace maskfuse
{

void validate(const SweepConfig & cfg)
{
  for (std::size_t i = 0; i < cfg.taus.size(); ++i) {
    const double tau = cfg.taus[i];
    if (!(tau >= 0.0 && tau <= 1.0)) {
      throw InvalidArgument("tau " + std::to_string(tau) + " outside [0,1]");
    }
    if (i > 0 && !(tau > cfg.taus[i - 1])) {
      throw InvalidArgument("taus must be strictly increasing");
    }
  }
  validate(cfg.fusion);
}

PredictionSet filter_by_score(const PredictionSet & ps, double tau)
{
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw InvalidArgument("filter_by_score: tau must be in [0, 1]");
  }
  PredictionSet out;
  out.width = ps.width;
  out.height = ps.height;
  for (const auto & inst : ps.instances) {
    if (inst.score >= tau) {
      out.instances.push_back(inst);
    }
  }
  return out;
}

EvalReport evaluate_at(const std::vector<SweepItem> & corpus, double tau, const SweepConfig & cfg, int threads)
{
  std::vector<ImageResult> results(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    const auto & item = corpus[i];
    try {
      PredictionSet pred;
      if (cfg.apply_tta) {
        VersionMap filtered;
        for (const auto & [t, ps] : item.versions) {
          filtered.emplace(t, filter_by_score(ps, tau));
        }
        pred = tta_pipeline(filtered, cfg.fusion);
      } else {
        const auto id = item.versions.find(Transform::identity);
        if (id == item.versions.end()) {
          throw InvalidArgument("identity version is missing");
        }
        pred = filter_by_score(id->second, tau);
      }
      results[i] = {item.image_id, evaluate_pair(pred, item.gt, cfg.overlap_rule)};
    } catch (const InputError & e) {
      throw InputError(item.image_id + ": " + e.what());
    } catch (const std::exception & e) {
      throw InvalidArgument(item.image_id + ": " + e.what());
    }
  });
  return summarize(std::move(results));
}

SweepTable sweep(const std::vector<SweepItem> & corpus, const SweepConfig & cfg, int threads)
{
  validate(cfg);
  SweepTable table;
  table.reserve(cfg.taus.size());
  for (const double tau : cfg.taus) {
    const EvalReport report = evaluate_at(corpus, tau, cfg, threads);
    table.push_back(
      {tau, report.mean_sbd, report.mean_dic, report.mean_abs_dic, report.mean_pred_count, report.n_images});
  }
  return table;
}

}  // namespace maskfuse
