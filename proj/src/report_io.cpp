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

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "maskfuse/io.hpp"

namespace maskfuse
{

using json = nlohmann::ordered_json;

std::string format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_report_csv(const EvalReport & report)
{
  std::ostringstream os;
  os << "image_id,sbd,dic,abs_dic,pred_count,gt_count\n";
  for (const auto & r : report.per_image) {
    os << r.image_id << ',' << format_double(r.result.sbd) << ',' << r.result.dic << ','
       << r.result.abs_dic << ',' << r.result.pred_count << ',' << r.result.gt_count << '\n';
  }
  os << "MEAN," << format_double(report.mean_sbd) << ',' << format_double(report.mean_dic) << ','
     << format_double(report.mean_abs_dic) << ',' << format_double(report.mean_pred_count) << ','
     << format_double(report.mean_gt_count) << '\n';
  return os.str();
}

std::string format_report_json(const EvalReport & report)
{
  json doc;
  json images = json::array();
  for (const auto & r : report.per_image) {
    images.push_back(
      {{"image_id", r.image_id},
       {"sbd", r.result.sbd},
       {"dic", r.result.dic},
       {"abs_dic", r.result.abs_dic},
       {"pred_count", r.result.pred_count},
       {"gt_count", r.result.gt_count}});
  }
  doc["images"] = std::move(images);
  doc["mean"] = {
    {"image_id", "MEAN"},
    {"sbd", report.mean_sbd},
    {"dic", report.mean_dic},
    {"abs_dic", report.mean_abs_dic},
    {"pred_count", report.mean_pred_count},
    {"gt_count", report.mean_gt_count},
    {"n_images", report.n_images}};
  return doc.dump(2) + "\n";
}

std::string format_sweep_csv(const SweepTable & table)
{
  std::ostringstream os;
  os << "tau,mean_sbd,mean_dic,mean_abs_dic,mean_pred_count,n_images\n";
  for (const auto & row : table) {
    os << format_double(row.tau) << ',' << format_double(row.mean_sbd) << ','
       << format_double(row.mean_dic) << ',' << format_double(row.mean_abs_dic) << ','
       << format_double(row.mean_pred_count) << ',' << row.n_images << '\n';
  }
  return os.str();
}

namespace
{

template <typename T>
T parse_number(std::string_view field, std::size_t line)
{
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw InputError(
      "sweep csv line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

SweepTable parse_sweep_csv(std::string_view text)
{
  static constexpr std::string_view header = "tau,mean_sbd,mean_dic,mean_abs_dic,mean_pred_count,n_images";
  SweepTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    ++line_no;
    if (line_no == 1) {
      if (line != header) {
        throw InputError("sweep csv: unexpected header '" + std::string(line) + "'");
      }
      continue;
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
    if (fields.size() != 6) {
      throw InputError("sweep csv line " + std::to_string(line_no) + ": expected 6 columns");
    }
    table.push_back(
      {parse_number<double>(fields[0], line_no), parse_number<double>(fields[1], line_no),
       parse_number<double>(fields[2], line_no), parse_number<double>(fields[3], line_no),
       parse_number<double>(fields[4], line_no), parse_number<std::size_t>(fields[5], line_no)});
  }
  if (line_no == 0) {
    throw InputError("sweep csv: empty input");
  }
  return table;
}

void write_file_atomic(const fs::path & path, std::span<const std::uint8_t> bytes)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InputError("cannot write " + tmp.string());
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw InputError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot move " + tmp.string() + " to " + path.string());
  }
}

void write_file_atomic(const fs::path & path, std::string_view text)
{
  write_file_atomic(
    path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot read " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string pairing_stem(const fs::path & path, std::string_view suffix)
{
  std::string stem = path.stem().string();
  if (!suffix.empty() && stem.size() > suffix.size() && stem.ends_with(suffix)) {
    stem.resize(stem.size() - suffix.size());
  }
  return stem;
}

}  // namespace maskfuse
