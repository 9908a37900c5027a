// Copyright 2026 The lutaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lutaug/lut.h"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "lutaug/errors.h"

namespace lutaug {

LatticeWeights LookupWeights(int lut_size, const RgbColor& color) {
  if (lut_size < 2) throw std::invalid_argument("LUT size must be >= 2");
  const auto [i, fr] = internal::CellCoordinate(color[0], lut_size);
  const auto [j, fg] = internal::CellCoordinate(color[1], lut_size);
  const auto [k, fb] = internal::CellCoordinate(color[2], lut_size);
  const Eigen::Index s = lut_size;
  const Eigen::Index base = i + s * (j + s * k);
  const double wr[2] = {1.0 - fr, fr};
  const double wg[2] = {1.0 - fg, fg};
  const double wb[2] = {1.0 - fb, fb};
  LatticeWeights out;
  for (int dk = 0; dk < 2; ++dk) {
    for (int dj = 0; dj < 2; ++dj) {
      for (int di = 0; di < 2; ++di) {
        const double w = wr[di] * wg[dj] * wb[dk];
        if (w == 0.0) continue;
        out.index[out.count] = base + di + s * (dj + s * dk);
        out.weight[out.count] = w;
        ++out.count;
      }
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> Tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

double ParseNumber(std::string_view token, int line_number) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("non-numeric token '" + std::string(token) + "'",
                     line_number);
  }
  return value;
}

RgbColor ParseTriple(const std::vector<std::string_view>& tokens,
                     std::size_t first, int line_number) {
  if (tokens.size() != first + 3) {
    throw ParseError("expected 3 values, got " +
                         std::to_string(tokens.size() - first),
                     line_number);
  }
  return {ParseNumber(tokens[first], line_number),
          ParseNumber(tokens[first + 1], line_number),
          ParseNumber(tokens[first + 2], line_number)};
}

}  // namespace

CubeFile ParseCubeFile(std::string_view text) {
  CubeFile cube;
  int size = 0;
  Eigen::Index expected = 0;
  std::vector<double> data;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto tokens = Tokenize(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    const std::string_view keyword = tokens.front();
    if (keyword == "TITLE") {
      const std::size_t open = line.find('"');
      const std::size_t close = line.rfind('"');
      if (open == std::string_view::npos || close == open) {
        throw ParseError("TITLE must be quoted", line_number);
      }
      cube.title = std::string(line.substr(open + 1, close - open - 1));
    } else if (keyword == "LUT_3D_SIZE") {
      if (size != 0) throw ParseError("duplicate LUT_3D_SIZE", line_number);
      if (tokens.size() != 2) {
        throw ParseError("LUT_3D_SIZE takes one value", line_number);
      }
      int value = 0;
      const auto [ptr, ec] = std::from_chars(
          tokens[1].data(), tokens[1].data() + tokens[1].size(), value);
      if (ec != std::errc() || ptr != tokens[1].data() + tokens[1].size() ||
          value < 2) {
        throw ParseError("invalid LUT_3D_SIZE '" + std::string(tokens[1]) + "'",
                         line_number);
      }
      size = value;
      expected = Eigen::Index{size} * size * size;
      data.reserve(3 * expected);
    } else if (keyword == "DOMAIN_MIN") {
      cube.domain_min = ParseTriple(tokens, 1, line_number);
    } else if (keyword == "DOMAIN_MAX") {
      cube.domain_max = ParseTriple(tokens, 1, line_number);
    } else if (keyword == "LUT_1D_SIZE") {
      throw ParseError("1D LUTs are not supported", line_number);
    } else if (std::isalpha(static_cast<unsigned char>(keyword.front()))) {
      throw ParseError("unknown keyword '" + std::string(keyword) + "'",
                       line_number);
    } else {
      if (size == 0) {
        throw ParseError("data line before LUT_3D_SIZE", line_number);
      }
      if (static_cast<Eigen::Index>(data.size()) >= 3 * expected) {
        throw ParseError("more than " + std::to_string(expected) +
                             " data lines",
                         line_number);
      }
      const RgbColor value = ParseTriple(tokens, 0, line_number);
      data.insert(data.end(), value.data(), value.data() + 3);
    }
  }
  if (size == 0) throw ParseError("missing LUT_3D_SIZE", line_number);
  if (static_cast<Eigen::Index>(data.size()) != 3 * expected) {
    throw ParseError("expected " + std::to_string(expected) +
                         " data lines, got " + std::to_string(data.size() / 3),
                     line_number);
  }
  cube.lut = Lut3D(size, Eigen::Map<const Lut3D::EntryMatrix>(
                             data.data(), expected, 3));
  return cube;
}

std::string SerializeCube(const Lut3D& lut, const std::string& title) {
  std::string out;
  out.reserve(static_cast<std::size_t>(lut.num_entries()) * 28 + 64);
  if (!title.empty()) out += "TITLE \"" + title + "\"\n";
  out += "LUT_3D_SIZE " + std::to_string(lut.size()) + "\n";
  char buffer[96];
  for (Eigen::Index n = 0; n < lut.num_entries(); ++n) {
    const auto row = lut.entries().row(n);
    std::snprintf(buffer, sizeof(buffer), "%.6f %.6f %.6f\n", row[0], row[1],
                  row[2]);
    out += buffer;
  }
  return out;
}

Lut3D LoadCube(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseCube(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void SaveCube(const std::string& path, const Lut3D& lut,
              const std::string& title) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << SerializeCube(lut, title);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace lutaug
