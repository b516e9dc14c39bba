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

#include <json.hpp>

#include "maskfuse/io.hpp"

namespace maskfuse
{

using json = nlohmann::ordered_json;

namespace
{

[[noreturn]] void bad_field(const std::string & field, const std::string & what)
{
  throw InputError("manifest field '" + field + "': " + what);
}

const json & require(const json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    bad_field(where + key, "missing");
  }
  return *it;
}

Index require_dimension(const json & obj, const char * key)
{
  const json & v = require(obj, key, "");
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    bad_field(key, "expected a positive integer");
  }
  return v.get<Index>();
}

}  // namespace

Manifest parse_manifest(std::string_view json_text, const fs::path & base_dir)
{
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error & e) {
    throw InputError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw InputError("manifest must be a JSON object");
  }

  Manifest m;
  const json & id = require(doc, "image_id", "");
  if (!id.is_string() || id.get<std::string>().empty()) {
    bad_field("image_id", "expected a non-empty string");
  }
  m.image_id = id.get<std::string>();

  if (const auto t = doc.find("transform"); t != doc.end()) {
    if (!t->is_string()) {
      bad_field("transform", "expected a string");
    }
    try {
      m.transform = parse_transform(t->get<std::string>());
    } catch (const InvalidArgument & e) {
      bad_field("transform", e.what());
    }
  }

  auto & ps = m.predictions;
  ps.width = require_dimension(doc, "width");
  ps.height = require_dimension(doc, "height");

  const json & instances = require(doc, "instances", "");
  if (!instances.is_array()) {
    bad_field("instances", "expected an array");
  }
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::string where = "instances[" + std::to_string(i) + "].";
    const json & inst = instances[i];
    if (!inst.is_object()) {
      bad_field(where.substr(0, where.size() - 1), "expected an object");
    }
    ScoredInstance si;
    const json & score = require(inst, "score", where);
    if (!score.is_number() || score.get<double>() < 0.0 || score.get<double>() > 1.0) {
      bad_field(where + "score", "expected a number in [0,1]");
    }
    si.score = score.get<double>();

    if (const auto v = inst.find("votes"); v != inst.end()) {
      if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
        bad_field(where + "votes", "expected a non-negative integer");
      }
      si.votes = v->get<int>();
    }

    const auto rle = inst.find("rle");
    const auto mask = inst.find("mask");
    if (rle != inst.end()) {
      if (!rle->is_array()) {
        bad_field(where + "rle", "expected an array of counts");
      }
      std::vector<std::uint32_t> counts;
      counts.reserve(rle->size());
      for (const auto & c : *rle) {
        if (!c.is_number_unsigned()) {
          bad_field(where + "rle", "counts must be non-negative integers");
        }
        counts.push_back(c.get<std::uint32_t>());
      }
      try {
        si.mask = decode_rle(counts, ps.width, ps.height);
      } catch (const InputError & e) {
        bad_field(where + "rle", e.what());
      }
    } else if (mask != inst.end()) {
      if (!mask->is_string()) {
        bad_field(where + "mask", "expected a file path");
      }
      const fs::path p = base_dir / mask->get<std::string>();
      try {
        si.mask = read_mask_png(p);
      } catch (const InputError & e) {
        bad_field(where + "mask", e.what());
      }
      if (width(si.mask) != ps.width || height(si.mask) != ps.height) {
        bad_field(where + "mask", "mask PNG dimensions differ from the manifest");
      }
    } else {
      bad_field(where + "rle", "instance needs either 'rle' or 'mask'");
    }
    if (!si.mask.any()) {
      bad_field(where.substr(0, where.size() - 1), "mask has no foreground pixel");
    }
    ps.instances.push_back(std::move(si));
  }
  return m;
}

Manifest read_manifest(const fs::path & path)
{
  const auto bytes = read_file(path);
  try {
    return parse_manifest(
      std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()), path.parent_path());
  } catch (const InputError & e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string format_manifest(const Manifest & manifest)
{
  json doc;
  doc["image_id"] = manifest.image_id;
  doc["transform"] = to_string(manifest.transform);
  doc["width"] = manifest.predictions.width;
  doc["height"] = manifest.predictions.height;
  json instances = json::array();
  for (const auto & inst : manifest.predictions.instances) {
    json entry;
    entry["score"] = inst.score;
    if (inst.votes > 0) {
      entry["votes"] = inst.votes;
    }
    entry["rle"] = encode_rle(inst.mask);
    instances.push_back(std::move(entry));
  }
  doc["instances"] = std::move(instances);
  return doc.dump() + "\n";
}

void write_manifest(const fs::path & path, const Manifest & manifest)
{
  write_file_atomic(path, format_manifest(manifest));
}

}  // namespace maskfuse
