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

#include <array>
#include <string>
#include <utility>

#include "maskfuse/maskcore.hpp"

namespace maskfuse
{

/// Test-time augmentations. Coordinates: x rightward, y downward.
///   hflip:    (x, y) -> (W-1-x, y)
///   vflip:    (x, y) -> (x, H-1-y)
///   rot90cw:  (x, y) -> (H-1-y, x)      output is H wide, W tall
///   rot90ccw: (x, y) -> (y, W-1-x)
enum class Transform { identity, hflip, vflip, rot90cw, rot90ccw };

inline constexpr std::array<Transform, 5> all_transforms = {
  Transform::identity, Transform::hflip, Transform::vflip, Transform::rot90cw, Transform::rot90ccw};

constexpr Transform inverse(Transform t)
{
  switch (t) {
    case Transform::rot90cw:
      return Transform::rot90ccw;
    case Transform::rot90ccw:
      return Transform::rot90cw;
    default:
      return t;
  }
}

constexpr bool swaps_axes(Transform t)
{
  return t == Transform::rot90cw || t == Transform::rot90ccw;
}

std::string to_string(Transform t);
Transform parse_transform(const std::string & s);

/// (width, height) after applying t to a width x height image.
inline std::pair<Index, Index> transformed_size(Transform t, Index w, Index h)
{
  return swaps_axes(t) ? std::pair{h, w} : std::pair{w, h};
}

template <typename Derived>
Grid<typename Derived::Scalar> apply(Transform t, const Eigen::DenseBase<Derived> & g)
{
  using Out = Grid<typename Derived::Scalar>;
  const auto & m = g.derived();
  switch (t) {
    case Transform::hflip:
      return Out(m.rowwise().reverse());
    case Transform::vflip:
      return Out(m.colwise().reverse());
    case Transform::rot90cw:
      return Out(m.transpose().rowwise().reverse());
    case Transform::rot90ccw:
      return Out(m.transpose().colwise().reverse());
    case Transform::identity:
    default:
      return Out(m);
  }
}

template <typename Derived>
Grid<typename Derived::Scalar> invert(Transform t, const Eigen::DenseBase<Derived> & g)
{
  return apply(inverse(t), g);
}

/// Transforms every mask; scores, votes and order are kept.
PredictionSet apply_set(Transform t, const PredictionSet & ps);
PredictionSet invert_set(Transform t, const PredictionSet & ps);

}  // namespace maskfuse
