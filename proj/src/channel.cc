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

#include "scst/channel.h"

#include <cmath>
#include <limits>

#include "scst/error.h"

namespace scst {
namespace {

struct Draw {
  std::complex<double> h{1.0, 0.0};
  std::vector<std::complex<double>> noise;
};

// Rayleigh gain first, then one complex noise sample per symbol.
Draw DrawChannel(size_t symbols, ChannelKind kind, double snr_db,
                 std::mt19937_64& rng) {
  Draw draw;
  std::normal_distribution<double> unit(0.0, 1.0);
  if (kind == ChannelKind::kRayleigh) {
    const double s = std::sqrt(0.5);
    const double re = s * unit(rng);
    const double im = s * unit(rng);
    draw.h = {re, im};
  }
  const double sigma = std::sqrt(SnrToNoise(snr_db) / 2.0);
  draw.noise.resize(symbols);
  for (auto& n : draw.noise) {
    const double re = sigma * unit(rng);
    const double im = sigma * unit(rng);
    n = {re, im};
  }
  return draw;
}

}  // namespace

std::string_view ChannelKindName(ChannelKind kind) {
  return kind == ChannelKind::kAwgn ? "awgn" : "rayleigh";
}

ChannelKind ParseChannelKind(std::string_view name) {
  if (name == "awgn") return ChannelKind::kAwgn;
  if (name == "rayleigh") return ChannelKind::kRayleigh;
  throw ValidationError("unknown channel kind '" + std::string(name) + "'");
}

void ChannelConfig::Validate() const {
  if (symbols_per_vector < 1) {
    throw ConfigError("symbols_per_vector must be >= 1");
  }
  if (std::isnan(snr_db)) throw ConfigError("snr_db is NaN");
}

double SymbolBlock::MeanPower() const {
  double energy = 0.0;
  for (double v : symbols.values()) energy += v * v;
  return energy / count();
}

double SnrToNoise(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

SymbolBlock NormalizeBlock(const nn::Tensor& raw) {
  double energy = 0.0;
  for (double v : raw.values()) energy += v * v;
  SymbolBlock block;
  block.symbols = nn::PowerNormalize(raw);
  block.scale = 1.0 / std::sqrt(energy / static_cast<double>(raw.size() / 2));
  return block;
}

nn::Tensor ApplyChannel(const nn::Tensor& symbols, ChannelKind kind,
                        double snr_db, std::mt19937_64& rng,
                        std::complex<double>* gain_out) {
  if (symbols.size() % 2 != 0) {
    throw ShapeError("channel input must hold (re, im) pairs, got " +
                     nn::ShapeString(symbols.shape()));
  }
  Draw draw = DrawChannel(symbols.size() / 2, kind, snr_db, rng);
  if (gain_out) *gain_out = draw.h;
  std::vector<double> out(symbols.values().begin(), symbols.values().end());
  for (size_t k = 0; k < draw.noise.size(); ++k) {
    const std::complex<double> e = draw.noise[k] / draw.h;
    out[2 * k] += e.real();
    out[2 * k + 1] += e.imag();
  }
  nn::AddFlops(4 * out.size());
  return nn::CustomOp(symbols.shape(), std::move(out), {symbols},
                      [](const std::vector<nn::Node*>& in, const nn::Node& o) {
                        for (size_t i = 0; i < o.grad.size(); ++i) {
                          in[0]->grad[i] += o.grad[i];
                        }
                      });
}

SymbolBlock ApplyChannel(const SymbolBlock& block, const ChannelConfig& config,
                         std::mt19937_64& rng) {
  SymbolBlock out;
  out.symbols = ApplyChannel(block.symbols, config.kind, config.snr_db, rng);
  out.scale = block.scale;
  return out;
}

std::vector<std::complex<double>> ApplyChannel(
    const std::vector<std::complex<double>>& symbols, ChannelKind kind,
    double snr_db, std::mt19937_64& rng) {
  Draw draw = DrawChannel(symbols.size(), kind, snr_db, rng);
  std::vector<std::complex<double>> out(symbols.size());
  for (size_t k = 0; k < symbols.size(); ++k) {
    out[k] = symbols[k] + draw.noise[k] / draw.h;
  }
  return out;
}

ChannelCodec::ChannelCodec(int dim, int symbols_per_vector,
                           std::mt19937_64& rng)
    : encoder_(dim, 2 * symbols_per_vector, rng),
      decoder_(2 * symbols_per_vector, dim, rng) {}

SymbolBlock ChannelCodec::Encode(const nn::Tensor& semantic) const {
  return NormalizeBlock(encoder_(semantic));
}

nn::Tensor ChannelCodec::Decode(const nn::Tensor& received) const {
  return decoder_(received);
}

void ChannelCodec::AppendParams(const std::string& prefix,
                                nn::ParamList* out) const {
  encoder_.AppendParams(prefix + ".encoder", out);
  decoder_.AppendParams(prefix + ".decoder", out);
}

}  // namespace scst
