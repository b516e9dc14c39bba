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

#include "maskfuse/maskcore.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

namespace maskfuse
{

namespace
{

void require_same_shape(const BinaryMask & a, const BinaryMask & b, const char * op)
{
  if (!same_shape(a, b)) {
    throw InvalidArgument(
      std::string(op) + ": dimension mismatch (" + std::to_string(a.cols()) + "x" +
      std::to_string(a.rows()) + " vs " + std::to_string(b.cols()) + "x" + std::to_string(b.rows()) +
      ")");
  }
}

void check_connectivity(int connectivity)
{
  if (connectivity != 4 && connectivity != 8) {
    throw InvalidArgument("connectivity must be 4 or 8, got " + std::to_string(connectivity));
  }
}

}  // namespace

void validate(const PredictionSet & ps)
{
  if (ps.width < 1 || ps.height < 1) {
    throw InvalidArgument("prediction set dimensions must be positive");
  }
  for (std::size_t i = 0; i < ps.instances.size(); ++i) {
    const auto & inst = ps.instances[i];
    const std::string where = "instance " + std::to_string(i);
    if (width(inst.mask) != ps.width || height(inst.mask) != ps.height) {
      throw InvalidArgument(where + ": mask dimensions differ from the set");
    }
    if (!(inst.score >= 0.0 && inst.score <= 1.0)) {
      throw InvalidArgument(where + ": score outside [0,1]");
    }
    if (!inst.mask.any()) {
      throw InvalidArgument(where + ": empty mask");
    }
  }
}

bool same_predictions(const PredictionSet & a, const PredictionSet & b)
{
  if (a.width != b.width || a.height != b.height || a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.instances[i].score != b.instances[i].score ||
        !identical(a.instances[i].mask, b.instances[i].mask)) {
      return false;
    }
  }
  return true;
}

std::string to_string(OverlapRule rule)
{
  return rule == OverlapRule::votes ? "votes" : "score";
}

OverlapRule parse_overlap_rule(const std::string & s)
{
  if (s == "score") {
    return OverlapRule::score;
  }
  if (s == "votes") {
    return OverlapRule::votes;
  }
  throw InvalidArgument("unknown overlap rule '" + s + "' (expected score|votes)");
}

Index intersection_area(const BinaryMask & a, const BinaryMask & b)
{
  require_same_shape(a, b, "intersection_area");
  return (a && b).count();
}

double iou(const BinaryMask & a, const BinaryMask & b)
{
  require_same_shape(a, b, "iou");
  const Index inter = (a && b).count();
  const Index uni = (a || b).count();
  if (uni == 0) {
    throw InvalidArgument("iou: both masks are empty");
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double dice(const BinaryMask & a, const BinaryMask & b)
{
  require_same_shape(a, b, "dice");
  const Index total = a.count() + b.count();
  if (total == 0) {
    throw InvalidArgument("dice: both masks are empty");
  }
  return 2.0 * static_cast<double>((a && b).count()) / static_cast<double>(total);
}

LabelMap canonicalize(const LabelMap & lm)
{
  std::map<std::int32_t, std::int32_t> remap;
  for (Index i = 0; i < lm.size(); ++i) {
    const auto v = lm.data()[i];
    if (v < 0) {
      throw InvalidArgument("label map contains a negative id");
    }
    if (v > 0) {
      remap.emplace(v, 0);
    }
  }
  std::int32_t next = 1;
  bool dense = true;
  for (auto & [from, to] : remap) {
    to = next++;
    dense = dense && from == to;
  }
  if (dense) {
    return lm;
  }
  LabelMap out(lm.rows(), lm.cols());
  for (Index i = 0; i < lm.size(); ++i) {
    const auto v = lm.data()[i];
    out.data()[i] = v == 0 ? 0 : remap.at(v);
  }
  return out;
}

Index instance_count(const LabelMap & lm)
{
  std::vector<std::int32_t> ids;
  ids.reserve(64);
  for (Index i = 0; i < lm.size(); ++i) {
    if (lm.data()[i] > 0) {
      ids.push_back(lm.data()[i]);
    }
  }
  std::sort(ids.begin(), ids.end());
  return static_cast<Index>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

PredictionSet label_map_to_instances(const LabelMap & lm)
{
  const LabelMap canon = canonicalize(lm);
  PredictionSet ps;
  ps.width = width(lm);
  ps.height = height(lm);
  const std::int32_t k = canon.size() == 0 ? 0 : canon.maxCoeff();
  ps.instances.reserve(static_cast<std::size_t>(k));
  for (std::int32_t id = 1; id <= k; ++id) {
    ps.instances.push_back({canon == id, 1.0, 0});
  }
  return ps;
}

LabelMap instances_to_label_map(const PredictionSet & ps, OverlapRule rule)
{
  LabelMap out = LabelMap::Zero(ps.height, ps.width);
  const auto & inst = ps.instances;
  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rule == OverlapRule::votes && inst[a].votes != inst[b].votes) {
      return inst[a].votes > inst[b].votes;
    }
    return inst[a].score > inst[b].score;
  });
  // Paint lowest priority first so higher-ranked instances overwrite contested pixels.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto & mask = inst[*it].mask;
    if (!same_shape(mask, out)) {
      throw InvalidArgument("instances_to_label_map: mask dimensions differ from the set");
    }
    out = mask.select(static_cast<std::int32_t>(*it + 1), out);
  }
  return canonicalize(out);
}

std::vector<BinaryMask> connected_components(const BinaryMask & mask, int connectivity)
{
  check_connectivity(connectivity);
  const Index h = mask.rows();
  const Index w = mask.cols();
  Grid<std::int32_t> comp = Grid<std::int32_t>::Constant(h, w, -1);
  std::vector<BinaryMask> out;
  std::vector<std::pair<Index, Index>> stack;

  static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};

  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      if (!mask(y, x) || comp(y, x) >= 0) {
        continue;
      }
      const auto id = static_cast<std::int32_t>(out.size());
      BinaryMask piece = empty_mask(w, h);
      comp(y, x) = id;
      stack.emplace_back(y, x);
      while (!stack.empty()) {
        const auto [cy, cx] = stack.back();
        stack.pop_back();
        piece(cy, cx) = true;
        for (int k = 0; k < connectivity; ++k) {
          const Index ny = cy + dy8[k];
          const Index nx = cx + dx8[k];
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) {
            continue;
          }
          if (mask(ny, nx) && comp(ny, nx) < 0) {
            comp(ny, nx) = id;
            stack.emplace_back(ny, nx);
          }
        }
      }
      out.push_back(std::move(piece));
    }
  }
  return out;
}

Box bounding_box(const BinaryMask & mask)
{
  Box b{mask.cols(), mask.rows(), -1, -1};
  for (Index y = 0; y < mask.rows(); ++y) {
    for (Index x = 0; x < mask.cols(); ++x) {
      if (mask(y, x)) {
        b.x0 = std::min(b.x0, x);
        b.x1 = std::max(b.x1, x);
        b.y0 = std::min(b.y0, y);
        b.y1 = std::max(b.y1, y);
      }
    }
  }
  return b;
}

Box intersect(const Box & a, const Box & b)
{
  return {std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
}

Index intersection_area(const BinaryMask & a, const Box & box_a, const BinaryMask & b, const Box & box_b)
{
  require_same_shape(a, b, "intersection_area");
  const Box r = intersect(box_a, box_b);
  if (r.empty()) {
    return 0;
  }
  const Index rows = r.y1 - r.y0 + 1;
  const Index cols = r.x1 - r.x0 + 1;
  return (a.block(r.y0, r.x0, rows, cols) && b.block(r.y0, r.x0, rows, cols)).count();
}

namespace
{

// OR (dilate) or AND (erode) over the neighbourhood, with out-of-grid pixels as background.
template <bool Dilate>
BinaryMask morph(const BinaryMask & m, int connectivity)
{
  check_connectivity(connectivity);
  const Index h = m.rows();
  const Index w = m.cols();
  BinaryMask padded = BinaryMask::Constant(h + 2, w + 2, false);
  padded.block(1, 1, h, w) = m;
  BinaryMask out = m;
  static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
  for (int k = 0; k < connectivity; ++k) {
    const auto shifted = padded.block(1 + dy8[k], 1 + dx8[k], h, w);
    if constexpr (Dilate) {
      out = out || shifted;
    } else {
      out = out && shifted;
    }
  }
  return out;
}

}  // namespace

BinaryMask dilate(const BinaryMask & mask, int connectivity)
{
  return morph<true>(mask, connectivity);
}

BinaryMask erode(const BinaryMask & mask, int connectivity)
{
  return morph<false>(mask, connectivity);
}

}  // namespace maskfuse
