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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maskfuse/metrics.hpp"
#include "maskfuse/threshold.hpp"
#include "maskfuse/transforms.hpp"

namespace maskfuse
{

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Run-length encoding
//
// Row-major, alternating background/foreground runs starting with background
// (a mask whose first pixel is set starts with a 0 run). Counts sum to W*H.
// Note: many detection datasets use column-major runs instead; this is not that.
// ---------------------------------------------------------------------------

std::vector<std::uint32_t> encode_rle(const BinaryMask & mask);
BinaryMask decode_rle(std::span<const std::uint32_t> counts, Index width, Index height);

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

/// Grayscale (1-16 bit): value = id. Colour or palette: black = background, every other
/// colour one instance, ids assigned by scanline order of first occurrence. Alpha ignored.
LabelMap read_label_png(const fs::path & path);
LabelMap decode_label_png(std::span<const std::uint8_t> bytes);

/// 16-bit grayscale. Ids must lie in [0, 65535].
void write_label_png(const fs::path & path, const LabelMap & lm);
std::vector<std::uint8_t> encode_label_png(const LabelMap & lm);

/// Any non-zero label / colour is foreground.
BinaryMask read_mask_png(const fs::path & path);
/// 8-bit grayscale, 0 / 255.
void write_mask_png(const fs::path & path, const BinaryMask & mask);

// ---------------------------------------------------------------------------
// Prediction manifests (JSON)
//
//   {"image_id": "...", "transform": "hflip", "width": W, "height": H,
//    "instances": [{"score": 0.93, "rle": [...]}, {"score": 0.8, "mask": "a.png"}]}
//
// "transform" is optional (identity); "votes" is an optional per-instance integer.
// Mask paths are relative to the manifest's directory.
// ---------------------------------------------------------------------------

struct Manifest
{
  std::string image_id;
  Transform transform = Transform::identity;
  PredictionSet predictions;
};

Manifest read_manifest(const fs::path & path);
Manifest parse_manifest(std::string_view json_text, const fs::path & base_dir = {});
std::string format_manifest(const Manifest & manifest);
void write_manifest(const fs::path & path, const Manifest & manifest);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Columns image_id,sbd,dic,abs_dic,pred_count,gt_count; last row "MEAN".
std::string format_report_csv(const EvalReport & report);
std::string format_report_json(const EvalReport & report);

/// Header tau,mean_sbd,mean_dic,mean_abs_dic,mean_pred_count,n_images.
std::string format_sweep_csv(const SweepTable & table);
SweepTable parse_sweep_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const fs::path & path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const fs::path & path, std::string_view text);
std::vector<std::uint8_t> read_file(const fs::path & path);

/// File name without the extension and without `suffix` when it ends the stem.
std::string pairing_stem(const fs::path & path, std::string_view suffix = {});

}  // namespace maskfuse
