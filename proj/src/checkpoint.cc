// Copyright 2026 The SCST Authors.
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

#include "scst/checkpoint.h"

#include <bit>
#include <cstring>

#include "scst/corpus.h"
#include "scst/error.h"

namespace scst::nn {
namespace {

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::string Bytes(size_t n) {
    Need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(size_t n) {
    if (pos_ + n > bytes_.size()) throw ParseError("checkpoint truncated");
  }
  const std::string& bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::string SerializeCheckpoint(const ParamList& params) {
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  PutU32(out, kCheckpointVersion);
  PutU32(out, static_cast<uint32_t>(params.size()));
  for (const auto& [name, t] : params) {
    PutU32(out, static_cast<uint32_t>(name.size()));
    out += name;
    PutU32(out, static_cast<uint32_t>(t.rank()));
    for (int d : t.shape()) PutU32(out, static_cast<uint32_t>(d));
    for (double v : t.values()) {
      PutU32(out, std::bit_cast<uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

void DeserializeCheckpoint(const std::string& bytes, ParamList& params) {
  Reader in(bytes);
  if (in.Bytes(sizeof(kCheckpointMagic)) !=
      std::string(kCheckpointMagic, sizeof(kCheckpointMagic))) {
    throw ParseError("checkpoint: bad magic");
  }
  uint32_t version = in.U32();
  if (version != kCheckpointVersion) {
    throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  }
  uint32_t count = in.U32();
  if (count != params.size()) {
    throw ValidationError("checkpoint holds " + std::to_string(count) +
                          " tensors, model expects " +
                          std::to_string(params.size()));
  }
  for (auto& [name, t] : params) {
    std::string stored = in.Bytes(in.U32());
    if (stored != name) {
      throw ValidationError("checkpoint tensor '" + stored + "' where '" + name +
                            "' was expected");
    }
    Shape shape(in.U32());
    for (int& d : shape) d = static_cast<int>(in.U32());
    if (shape != t.shape()) {
      throw ValidationError("checkpoint tensor '" + name + "' has shape " +
                            ShapeString(shape) + ", model expects " +
                            ShapeString(t.shape()));
    }
    for (double& v : t.mutable_values()) {
      v = static_cast<double>(std::bit_cast<float>(in.U32()));
    }
  }
  if (!in.done()) throw ParseError("checkpoint: trailing bytes");
}

void SaveCheckpoint(const std::filesystem::path& path, const ParamList& params) {
  WriteFile(path, SerializeCheckpoint(params));
}

void LoadCheckpoint(const std::filesystem::path& path, ParamList& params) {
  DeserializeCheckpoint(ReadFile(path), params);
}

}  // namespace scst::nn
