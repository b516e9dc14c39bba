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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "maskfuse/error.hpp"

namespace maskfuse
{

using Index = Eigen::Index;

/// Row-major image grid: rows are y (downward), columns are x (rightward).
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One instance mask. width() == cols(), height() == rows().
using BinaryMask = Grid<bool>;

/// Instance ids per pixel, 0 is background.
using LabelMap = Grid<std::int32_t>;

template <typename Derived>
inline Index width(const Eigen::DenseBase<Derived> & g)
{
  return g.cols();
}

template <typename Derived>
inline Index height(const Eigen::DenseBase<Derived> & g)
{
  return g.rows();
}

inline BinaryMask empty_mask(Index width, Index height)
{
  return BinaryMask::Constant(height, width, false);
}

template <typename A, typename B>
inline bool same_shape(const Eigen::DenseBase<A> & a, const Eigen::DenseBase<B> & b)
{
  return a.rows() == b.rows() && a.cols() == b.cols();
}

/// Shape and element-wise equality.
template <typename A, typename B>
inline bool identical(const Eigen::DenseBase<A> & a, const Eigen::DenseBase<B> & b)
{
  return same_shape(a, b) && (a.derived().array() == b.derived().array()).all();
}

struct ScoredInstance
{
  BinaryMask mask;
  double score = 1.0;
  /// Number of versions that voted for this instance; 0 when not produced by fusion.
  int votes = 0;
};

struct PredictionSet
{
  Index width = 0;
  Index height = 0;
  std::vector<ScoredInstance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
};

/// Throws InvalidArgument if dimensions are < 1, any mask has the wrong shape,
/// a score is outside [0,1] or a mask is empty.
void validate(const PredictionSet & ps);

/// Same masks, scores and dimensions. Vote annotations are ignored.
bool same_predictions(const PredictionSet & a, const PredictionSet & b);

enum class OverlapRule { score, votes };

std::string to_string(OverlapRule rule);
OverlapRule parse_overlap_rule(const std::string & s);

template <typename Derived>
inline Index area(const Eigen::ArrayBase<Derived> & mask)
{
  return mask.template cast<bool>().count();
}

Index intersection_area(const BinaryMask & a, const BinaryMask & b);
double iou(const BinaryMask & a, const BinaryMask & b);
double dice(const BinaryMask & a, const BinaryMask & b);

/// Relabels positive ids to 1..K in ascending order of the original id.
LabelMap canonicalize(const LabelMap & lm);

/// Number of distinct positive ids.
Index instance_count(const LabelMap & lm);

/// One instance per positive id (ascending), score 1.0.
PredictionSet label_map_to_instances(const LabelMap & lm);

/// Flattens possibly overlapping instances. Contested pixels go to the instance ranked
/// first by: votes (OverlapRule::votes only), then score, then lowest index. Output ids
/// are canonical.
LabelMap instances_to_label_map(const PredictionSet & ps, OverlapRule rule = OverlapRule::score);

/// Components in scanline order of their first pixel. connectivity is 4 or 8.
std::vector<BinaryMask> connected_components(const BinaryMask & mask, int connectivity = 4);

/// Axis-aligned bounding box, inclusive bounds. Empty when x0 > x1.
struct Box
{
  Index x0 = 0;
  Index y0 = 0;
  Index x1 = -1;
  Index y1 = -1;

  bool empty() const { return x0 > x1 || y0 > y1; }
};

Box bounding_box(const BinaryMask & mask);
Box intersect(const Box & a, const Box & b);

/// intersection_area restricted to a's and b's box overlap.
Index intersection_area(const BinaryMask & a, const Box & box_a, const BinaryMask & b, const Box & box_b);

/// One step of 4- or 8-neighbour dilation / erosion; pixels outside the grid count as background.
BinaryMask dilate(const BinaryMask & mask, int connectivity = 4);
BinaryMask erode(const BinaryMask & mask, int connectivity = 4);

}  // namespace maskfuse
