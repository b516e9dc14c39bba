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

#include <png.h>

#include <algorithm>
#include <cstring>
#include <map>

#include "maskfuse/io.hpp"

namespace maskfuse
{

namespace
{

// libpng reports errors through longjmp. The functions that call setjmp below keep every
// C++ object in the caller's frame so a longjmp never skips a destructor.

struct Decoded
{
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
};

struct ReadCursor
{
  const std::uint8_t * data;
  std::size_t size;
  std::size_t offset;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length)
{
  auto * cur = static_cast<ReadCursor *>(png_get_io_ptr(png));
  if (cur->offset + length > cur->size) {
    png_error(png, "unexpected end of data");
  }
  std::memcpy(out, cur->data + cur->offset, length);
  cur->offset += length;
}

void on_error(png_structp png, png_const_charp msg)
{
  auto * buf = static_cast<char *>(png_get_error_ptr(png));
  std::snprintf(buf, 256, "%s", msg);
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

// Returns false on a libpng error; the message is left in errbuf.
bool decode_png(ReadCursor * cursor, Decoded * out, char * errbuf)
{
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, errbuf, on_error, on_warning);
  if (png == nullptr) {
    std::snprintf(errbuf, 256, "out of memory");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, cursor, read_from_memory);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  }
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) {
    png_set_strip_alpha(png);
  }
  png_read_update_info(png, info);

  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  out->channels = png_get_channels(png, info);
  out->bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out->pixels.resize(stride * out->height);
  out->rows.resize(out->height);
  for (png_uint_32 y = 0; y < out->height; ++y) {
    out->rows[y] = out->pixels.data() + y * stride;
  }
  png_read_image(png, out->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

void write_to_memory(png_structp png, png_bytep data, png_size_t length)
{
  auto * buf = static_cast<std::vector<std::uint8_t> *>(png_get_io_ptr(png));
  buf->insert(buf->end(), data, data + length);
}

void flush_noop(png_structp) {}

bool encode_png(
  std::vector<std::uint8_t> * out, std::vector<png_bytep> * rows, png_uint_32 width, png_uint_32 height,
  int bit_depth, char * errbuf)
{
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, errbuf, on_error, on_warning);
  if (png == nullptr) {
    std::snprintf(errbuf, 256, "out of memory");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, out, write_to_memory, flush_noop);
  png_set_IHDR(
    png, info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
    PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

std::vector<std::uint8_t> encode_gray(const Grid<std::uint16_t> & values, int bit_depth)
{
  const auto w = static_cast<png_uint_32>(values.cols());
  const auto h = static_cast<png_uint_32>(values.rows());
  const std::size_t bytes_per_px = bit_depth == 16 ? 2 : 1;
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h * bytes_per_px);
  for (png_uint_32 y = 0; y < h; ++y) {
    for (png_uint_32 x = 0; x < w; ++x) {
      const std::uint16_t v = values(y, x);
      const std::size_t at = (static_cast<std::size_t>(y) * w + x) * bytes_per_px;
      if (bytes_per_px == 2) {
        pixels[at] = static_cast<std::uint8_t>(v >> 8);
        pixels[at + 1] = static_cast<std::uint8_t>(v & 0xff);
      } else {
        pixels[at] = static_cast<std::uint8_t>(v);
      }
    }
  }
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) {
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * bytes_per_px;
  }
  std::vector<std::uint8_t> out;
  char errbuf[256] = {0};
  if (!encode_png(&out, &rows, w, h, bit_depth, errbuf)) {
    throw InputError(std::string("png encode failed: ") + errbuf);
  }
  return out;
}

}  // namespace

LabelMap decode_label_png(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw InputError("not a PNG file");
  }
  ReadCursor cursor{bytes.data(), bytes.size(), 0};
  Decoded img;
  char errbuf[256] = {0};
  if (!decode_png(&cursor, &img, errbuf)) {
    throw InputError(std::string("png decode failed: ") + errbuf);
  }

  LabelMap lm(img.height, img.width);
  const std::size_t sample_bytes = img.bit_depth == 16 ? 2 : 1;
  auto sample = [&](const std::uint8_t * p) -> std::uint32_t {
    return sample_bytes == 2 ? (std::uint32_t{p[0]} << 8) | p[1] : p[0];
  };
  if (img.channels == 1) {
    for (png_uint_32 y = 0; y < img.height; ++y) {
      for (png_uint_32 x = 0; x < img.width; ++x) {
        lm(y, x) = static_cast<std::int32_t>(sample(img.rows[y] + x * sample_bytes));
      }
    }
    return lm;
  }

  std::map<std::uint64_t, std::int32_t> colour_ids;
  const std::size_t px_bytes = sample_bytes * static_cast<std::size_t>(img.channels);
  for (png_uint_32 y = 0; y < img.height; ++y) {
    for (png_uint_32 x = 0; x < img.width; ++x) {
      const std::uint8_t * p = img.rows[y] + x * px_bytes;
      const std::uint64_t key = (std::uint64_t{sample(p)} << 32) |
                                (std::uint64_t{sample(p + sample_bytes)} << 16) |
                                sample(p + 2 * sample_bytes);
      if (key == 0) {
        lm(y, x) = 0;
        continue;
      }
      auto [it, inserted] = colour_ids.emplace(key, static_cast<std::int32_t>(colour_ids.size() + 1));
      lm(y, x) = it->second;
    }
  }
  return lm;
}

LabelMap read_label_png(const fs::path & path)
{
  const auto bytes = read_file(path);
  try {
    return decode_label_png(bytes);
  } catch (const InputError & e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_label_png(const LabelMap & lm)
{
  if (lm.size() == 0) {
    throw InvalidArgument("cannot encode an empty label map");
  }
  if (lm.minCoeff() < 0 || lm.maxCoeff() > 65535) {
    throw InvalidArgument("label ids must lie in [0, 65535] for 16-bit PNG");
  }
  return encode_gray(lm.cast<std::uint16_t>(), 16);
}

void write_label_png(const fs::path & path, const LabelMap & lm)
{
  write_file_atomic(path, encode_label_png(lm));
}

BinaryMask read_mask_png(const fs::path & path)
{
  return read_label_png(path) != 0;
}

void write_mask_png(const fs::path & path, const BinaryMask & mask)
{
  const Grid<std::uint16_t> values = mask.cast<std::uint16_t>() * std::uint16_t{255};
  write_file_atomic(path, encode_gray(values, 8));
}

}  // namespace maskfuse
