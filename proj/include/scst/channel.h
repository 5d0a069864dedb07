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

#ifndef SCST_CHANNEL_H_
#define SCST_CHANNEL_H_

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "scst/nn.h"

namespace scst {

enum class ChannelKind { kAwgn, kRayleigh };

std::string_view ChannelKindName(ChannelKind kind);
ChannelKind ParseChannelKind(std::string_view name);

struct ChannelConfig {
  ChannelKind kind = ChannelKind::kAwgn;
  double snr_db = 10.0;
  int symbols_per_vector = 4;  // complex symbols per encoded vector
  uint64_t seed = 1;

  void Validate() const;
};

// Power-normalized complex symbols stored as interleaved (re, im) reals.
struct SymbolBlock {
  nn::Tensor symbols;  // shape (2c)
  double scale = 1.0;  // factor applied by the normalization

  int count() const { return static_cast<int>(symbols.size() / 2); }
  double MeanPower() const;
};

// Noise variance per complex symbol for a unit-power signal; each real
// component carries half of it. Returns 0 for +infinity.
double SnrToNoise(double snr_db);

// Rescales a nonzero block to unit mean symbol power.
SymbolBlock NormalizeBlock(const nn::Tensor& raw);

// Y = hS + n followed by perfect-CSI equalization, returned as S + n / h.
// AWGN uses h = 1; Rayleigh draws h ~ CN(0, 1) once per call. Gradients flow
// through as if h and n were constants. `gain_out` receives h when given.
nn::Tensor ApplyChannel(const nn::Tensor& symbols, ChannelKind kind,
                        double snr_db, std::mt19937_64& rng,
                        std::complex<double>* gain_out = nullptr);
SymbolBlock ApplyChannel(const SymbolBlock& block, const ChannelConfig& config,
                         std::mt19937_64& rng);

// Same channel on plain complex symbols, used by the classical chain.
std::vector<std::complex<double>> ApplyChannel(
    const std::vector<std::complex<double>>& symbols, ChannelKind kind,
    double snr_db, std::mt19937_64& rng);

// Dense channel encoder (d -> 2c reals) and decoder (2c -> d).
class ChannelCodec {
 public:
  ChannelCodec() = default;
  ChannelCodec(int dim, int symbols_per_vector, std::mt19937_64& rng);

  SymbolBlock Encode(const nn::Tensor& semantic) const;
  nn::Tensor Decode(const nn::Tensor& received) const;
  nn::Tensor Decode(const SymbolBlock& received) const {
    return Decode(received.symbols);
  }

  void AppendParams(const std::string& prefix, nn::ParamList* out) const;
  int dim() const { return encoder_.in(); }
  int symbols_per_vector() const { return encoder_.out() / 2; }

  nn::Linear& encoder() { return encoder_; }
  nn::Linear& decoder() { return decoder_; }

 private:
  nn::Linear encoder_;
  nn::Linear decoder_;
};

}  // namespace scst

#endif  // SCST_CHANNEL_H_
