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

#include "maskfuse/transforms.hpp"

namespace maskfuse
{

std::string to_string(Transform t)
{
  switch (t) {
    case Transform::identity:
      return "identity";
    case Transform::hflip:
      return "hflip";
    case Transform::vflip:
      return "vflip";
    case Transform::rot90cw:
      return "rot90cw";
    case Transform::rot90ccw:
      return "rot90ccw";
  }
  return "identity";
}

Transform parse_transform(const std::string & s)
{
  for (auto t : all_transforms) {
    if (to_string(t) == s) {
      return t;
    }
  }
  throw InvalidArgument("unknown transform '" + s + "'");
}

PredictionSet apply_set(Transform t, const PredictionSet & ps)
{
  PredictionSet out;
  std::tie(out.width, out.height) = transformed_size(t, ps.width, ps.height);
  out.instances.reserve(ps.size());
  for (const auto & inst : ps.instances) {
    out.instances.push_back({apply(t, inst.mask), inst.score, inst.votes});
  }
  return out;
}

PredictionSet invert_set(Transform t, const PredictionSet & ps)
{
  return apply_set(inverse(t), ps);
}

}  // namespace maskfuse
