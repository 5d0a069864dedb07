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

#ifndef SCST_CLASSICAL_H_
#define SCST_CLASSICAL_H_

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scst/channel.h"

namespace scst {

using Bits = std::vector<uint8_t>;  // one bit per entry, 0 or 1
using FrequencyTable = std::map<unsigned char, uint64_t>;

FrequencyTable CountCharacters(const std::vector<std::string>& texts);
std::string SerializeFrequencies(const FrequencyTable& table);
FrequencyTable ParseFrequencies(const std::string& content);

// Character-level Huffman code. Ties are broken by (count, smallest symbol
// in the subtree), so the same table always yields the same code. A single
// symbol alphabet gets the one-bit code "0".
class HuffmanCode {
 public:
  static HuffmanCode Build(const FrequencyTable& freqs);

  const std::map<unsigned char, Bits>& codes() const { return codes_; }
  bool Contains(unsigned char c) const { return codes_.count(c) > 0; }

  Bits Encode(const std::string& text) const;
  // Greedy walk; a trailing partial codeword is dropped.
  std::string Decode(const Bits& bits) const;

 private:
  struct TrieNode {
    int child[2] = {-1, -1};
    int symbol = -1;
  };

  std::map<unsigned char, Bits> codes_;
  std::vector<TrieNode> trie_;
};

// Arithmetic in GF(2^8) with primitive polynomial x^8+x^4+x^3+x^2+1.
namespace gf256 {
uint8_t Add(uint8_t a, uint8_t b);
uint8_t Mul(uint8_t a, uint8_t b);
uint8_t Div(uint8_t a, uint8_t b);
uint8_t Inverse(uint8_t a);
uint8_t Exp(int power);
int Log(uint8_t a);
}  // namespace gf256

struct RsDecodeResult {
  std::vector<uint8_t> message;
  int corrected = 0;
  bool ok = true;  // false when the decoder detected an uncorrectable word
};

// Systematic Reed-Solomon code over GF(256); codeword = message || parity.
class RsCode {
 public:
  RsCode(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int t() const { return (n_ - k_) / 2; }
  int parity() const { return n_ - k_; }

  std::vector<uint8_t> Encode(const std::vector<uint8_t>& message) const;
  RsDecodeResult Decode(const std::vector<uint8_t>& received) const;

  // Shortened use: messages of 1..k bytes are padded with virtual leading
  // zeros that are never transmitted.
  std::vector<uint8_t> EncodeShortened(const std::vector<uint8_t>& message) const;
  RsDecodeResult DecodeShortened(const std::vector<uint8_t>& received) const;

  const std::vector<uint8_t>& generator() const { return generator_; }

 private:
  int n_;
  int k_;
  std::vector<uint8_t> generator_;  // highest degree first, monic
};

// Gray-labelled 16-QAM on {+-1, +-3}^2 / sqrt(10).
namespace qam16 {
const std::vector<std::complex<double>>& Constellation();  // index = 4 bits
std::complex<double> MapNibble(int nibble);
int NearestNibble(std::complex<double> point);
// Pads with zero bits to a multiple of 4.
std::vector<std::complex<double>> Modulate(const Bits& bits);
Bits Demodulate(const std::vector<std::complex<double>>& symbols);
}  // namespace qam16

Bits BytesToBits(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> BitsToBytes(const Bits& bits);  // zero-pads the last byte

struct ClassicalCodes {
  HuffmanCode huffman;
  RsCode rs{255, 223};
};

struct ClassicalResult {
  std::string text;
  int64_t symbols = 0;
  int64_t byte_errors = 0;  // wrong payload bytes after RS decoding
  bool exact = false;
  int failed_blocks = 0;
};

inline constexpr int kClassicalHeaderBytes = 4;

// Frame = 4-byte uncoded bit-count header || RS blocks of the byte-packed
// Huffman stream. Every step is best effort at the receiver.
ClassicalResult ClassicalTransmit(const std::string& text,
                                  const ClassicalCodes& codes,
                                  ChannelKind kind, double snr_db,
                                  std::mt19937_64& rng);

// Bytes actually sent for `payload_bytes` of Huffman output (header included).
int64_t ClassicalFrameBytes(int64_t payload_bytes, const RsCode& rs);
int64_t ClassicalSymbolCount(const std::string& text, const ClassicalCodes& codes);

}  // namespace scst

#endif  // SCST_CLASSICAL_H_
