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

#include <algorithm>

#include "maskfuse/io.hpp"

namespace maskfuse
{

std::vector<std::uint32_t> encode_rle(const BinaryMask & mask)
{
  std::vector<std::uint32_t> counts;
  bool current = false;
  std::uint32_t run = 0;
  const bool * p = mask.data();
  for (Index i = 0; i < mask.size(); ++i) {
    if (p[i] != current) {
      counts.push_back(run);
      run = 0;
      current = p[i];
    }
    ++run;
  }
  counts.push_back(run);
  return counts;
}

BinaryMask decode_rle(std::span<const std::uint32_t> counts, Index width, Index height)
{
  if (width < 1 || height < 1) {
    throw InputError("rle: dimensions must be positive");
  }
  std::uint64_t total = 0;
  for (auto c : counts) {
    total += c;
  }
  const auto expected = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  if (total != expected) {
    throw InputError(
      "rle: counts sum to " + std::to_string(total) + ", expected " + std::to_string(expected));
  }
  BinaryMask mask = empty_mask(width, height);
  bool * out = mask.data();
  bool value = false;
  std::uint64_t pos = 0;
  for (auto c : counts) {
    if (value) {
      std::fill(out + pos, out + pos + c, true);
    }
    pos += c;
    value = !value;
  }
  return mask;
}

}  // namespace maskfuse
