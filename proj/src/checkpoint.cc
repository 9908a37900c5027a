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

#include "lutaug/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "lutaug/errors.h"

namespace lutaug {
namespace {

template <typename T>
void PutLittleEndian(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& source)
      : bytes_(bytes), source_(source) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i]))
               << (8 * i);
    }
    pos_ += sizeof(T);
    return value;
  }

  std::string GetBytes(uint64_t n) {
    Need(n);
    std::string out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

  [[noreturn]] void Fail(const std::string& what) const {
    throw IoError(source_ + ": " + what);
  }

 private:
  void Need(uint64_t n) const {
    if (n > bytes_.size() - pos_) Fail("truncated checkpoint");
  }

  const std::string& bytes_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string EncodeCheckpoint(const Checkpoint& checkpoint) {
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  PutLittleEndian<uint32_t>(out, kCheckpointVersion);
  const std::string manifest = checkpoint.manifest.dump();
  PutLittleEndian<uint64_t>(out, manifest.size());
  out += manifest;
  const auto& blocks = checkpoint.params.blocks();
  PutLittleEndian<uint32_t>(out, static_cast<uint32_t>(blocks.size()));
  for (const auto& [name, tensor] : blocks) {
    PutLittleEndian<uint32_t>(out, static_cast<uint32_t>(name.size()));
    out += name;
    PutLittleEndian<uint32_t>(out, static_cast<uint32_t>(tensor.shape().size()));
    for (int d : tensor.shape()) PutLittleEndian<int64_t>(out, d);
    for (Eigen::Index i = 0; i < tensor.size(); ++i) {
      PutLittleEndian<uint64_t>(out, std::bit_cast<uint64_t>(tensor.values()[i]));
    }
  }
  return out;
}

Checkpoint DecodeCheckpoint(const std::string& bytes,
                            const std::string& source) {
  Reader reader(bytes, source);
  if (reader.GetBytes(sizeof(kCheckpointMagic)) !=
      std::string(kCheckpointMagic, sizeof(kCheckpointMagic))) {
    reader.Fail("not a checkpoint (bad magic)");
  }
  const uint32_t version = reader.Get<uint32_t>();
  if (version != kCheckpointVersion) {
    reader.Fail("checkpoint version " + std::to_string(version) +
                " is not supported (expected " +
                std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint checkpoint;
  const std::string manifest = reader.GetBytes(reader.Get<uint64_t>());
  try {
    checkpoint.manifest = nlohmann::json::parse(manifest);
  } catch (const nlohmann::json::exception& e) {
    reader.Fail(std::string("corrupt manifest: ") + e.what());
  }
  const uint32_t count = reader.Get<uint32_t>();
  for (uint32_t b = 0; b < count; ++b) {
    const std::string name = reader.GetBytes(reader.Get<uint32_t>());
    const uint32_t rank = reader.Get<uint32_t>();
    if (rank > 16) reader.Fail("implausible rank for block '" + name + "'");
    std::vector<int> shape;
    uint64_t total = 1;
    for (uint32_t d = 0; d < rank; ++d) {
      const int64_t dim = reader.Get<int64_t>();
      if (dim < 0 || dim > (int64_t{1} << 31)) {
        reader.Fail("bad dimension in block '" + name + "'");
      }
      shape.push_back(static_cast<int>(dim));
      total *= static_cast<uint64_t>(dim);
      if (total > bytes.size()) reader.Fail("truncated checkpoint");
    }
    Eigen::VectorXd values(static_cast<Eigen::Index>(total));
    for (uint64_t i = 0; i < total; ++i) {
      values[static_cast<Eigen::Index>(i)] =
          std::bit_cast<double>(reader.Get<uint64_t>());
    }
    try {
      checkpoint.params.Add(name, Tensor(std::move(shape), std::move(values)));
    } catch (const std::invalid_argument& e) {
      reader.Fail(e.what());
    }
  }
  if (!reader.AtEnd()) reader.Fail("trailing bytes after last block");
  return checkpoint;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  const std::string bytes = EncodeCheckpoint(checkpoint);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return DecodeCheckpoint(bytes, path);
}

}  // namespace lutaug
