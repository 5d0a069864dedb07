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

#include "scst/classical.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <tuple>

#include "scst/error.h"

namespace scst {

FrequencyTable CountCharacters(const std::vector<std::string>& texts) {
  FrequencyTable table;
  for (const std::string& text : texts) {
    for (char c : text) ++table[static_cast<unsigned char>(c)];
  }
  return table;
}

namespace {

std::string EscapeSymbol(unsigned char c) {
  switch (c) {
    case '\t': return "\\t";
    case '\n': return "\\n";
    case '\r': return "\\r";
    case '\\': return "\\\\";
    default: return std::string(1, static_cast<char>(c));
  }
}

}  // namespace

std::string SerializeFrequencies(const FrequencyTable& table) {
  std::string out;
  for (const auto& [symbol, count] : table) {
    out += EscapeSymbol(symbol) + "\t" + std::to_string(count) + "\n";
  }
  return out;
}

FrequencyTable ParseFrequencies(const std::string& content) {
  FrequencyTable table;
  std::istringstream in(content);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const size_t tab = line.rfind('\t');
    const std::string where = "frequency table line " + std::to_string(line_no);
    if (tab == std::string::npos || tab == 0) throw ParseError(where + ": expected symbol<TAB>count");
    std::string sym = line.substr(0, tab);
    unsigned char c;
    if (sym == "\\t") c = '\t';
    else if (sym == "\\n") c = '\n';
    else if (sym == "\\r") c = '\r';
    else if (sym == "\\\\") c = '\\';
    else if (sym.size() == 1) c = static_cast<unsigned char>(sym[0]);
    else throw ParseError(where + ": bad symbol '" + sym + "'");
    uint64_t count;
    try {
      size_t used = 0;
      count = std::stoull(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(where + ": bad count");
    }
    if (table.count(c)) throw ValidationError(where + ": duplicate symbol");
    table[c] = count;
  }
  return table;
}

HuffmanCode HuffmanCode::Build(const FrequencyTable& freqs) {
  HuffmanCode code;
  // (count, smallest symbol below, node index); min-heap.
  using Item = std::tuple<uint64_t, int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (const auto& [symbol, count] : freqs) {
    if (count == 0) continue;
    TrieNode leaf;
    leaf.symbol = symbol;
    code.trie_.push_back(leaf);
    heap.emplace(count, symbol, static_cast<int>(code.trie_.size()) - 1);
  }
  if (heap.empty()) throw ValidationError("huffman: no symbol with a positive count");
  if (heap.size() == 1) {
    TrieNode root;
    root.child[0] = std::get<2>(heap.top());
    code.trie_.push_back(root);
  }
  while (heap.size() > 1) {
    auto [ca, sa, a] = heap.top();
    heap.pop();
    auto [cb, sb, b] = heap.top();
    heap.pop();
    TrieNode parent;
    parent.child[0] = a;
    parent.child[1] = b;
    code.trie_.push_back(parent);
    heap.emplace(ca + cb, std::min(sa, sb), static_cast<int>(code.trie_.size()) - 1);
  }
  // The root is always the last node created.
  std::vector<std::pair<int, Bits>> stack = {{static_cast<int>(code.trie_.size()) - 1, {}}};
  while (!stack.empty()) {
    auto [node, prefix] = std::move(stack.back());
    stack.pop_back();
    const TrieNode& n = code.trie_[node];
    if (n.symbol >= 0) {
      code.codes_[static_cast<unsigned char>(n.symbol)] = prefix;
      continue;
    }
    for (int bit = 0; bit < 2; ++bit) {
      if (n.child[bit] < 0) continue;
      Bits next = prefix;
      next.push_back(static_cast<uint8_t>(bit));
      stack.emplace_back(n.child[bit], std::move(next));
    }
  }
  return code;
}

Bits HuffmanCode::Encode(const std::string& text) const {
  Bits out;
  for (char ch : text) {
    auto it = codes_.find(static_cast<unsigned char>(ch));
    if (it == codes_.end()) {
      throw ValidationError("huffman: character '" + EscapeSymbol(ch) +
                            "' is not in the code alphabet");
    }
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

std::string HuffmanCode::Decode(const Bits& bits) const {
  std::string out;
  const int root = static_cast<int>(trie_.size()) - 1;
  int node = root;
  for (uint8_t bit : bits) {
    int next = trie_[node].child[bit & 1];
    if (next < 0) {  // only reachable for the one-symbol code
      node = root;
      continue;
    }
    node = next;
    if (trie_[node].symbol >= 0) {
      out.push_back(static_cast<char>(trie_[node].symbol));
      node = root;
    }
  }
  return out;
}

namespace gf256 {
namespace {

struct Tables {
  std::array<uint8_t, 512> exp{};
  std::array<int, 256> log{};
  Tables() {
    int x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<uint8_t>(x);
      log[x] = i;
      x <<= 1;
      if (x & 0x100) x ^= 0x11d;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    log[0] = -1;
  }
};

const Tables& T() {
  static const Tables tables;
  return tables;
}

}  // namespace

uint8_t Add(uint8_t a, uint8_t b) { return a ^ b; }

uint8_t Mul(uint8_t a, uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return T().exp[T().log[a] + T().log[b]];
}

uint8_t Div(uint8_t a, uint8_t b) {
  if (b == 0) throw std::domain_error("gf256 division by zero");
  if (a == 0) return 0;
  return T().exp[T().log[a] + 255 - T().log[b]];
}

uint8_t Inverse(uint8_t a) { return Div(1, a); }

uint8_t Exp(int power) {
  power %= 255;
  if (power < 0) power += 255;
  return T().exp[power];
}

int Log(uint8_t a) {
  if (a == 0) throw std::domain_error("gf256 log of zero");
  return T().log[a];
}

}  // namespace gf256

namespace {

using gf256::Mul;

// Polynomials below are stored lowest degree first.
uint8_t EvalLow(const std::vector<uint8_t>& p, uint8_t x) {
  uint8_t y = 0;
  for (size_t i = p.size(); i-- > 0;) y = Mul(y, x) ^ p[i];
  return y;
}

std::vector<uint8_t> Syndromes(const std::vector<uint8_t>& word, int count) {
  std::vector<uint8_t> s(count);
  for (int j = 0; j < count; ++j) {
    const uint8_t a = gf256::Exp(j);
    uint8_t acc = 0;
    for (uint8_t c : word) acc = Mul(acc, a) ^ c;  // word[0] is the top degree
    s[j] = acc;
  }
  return s;
}

std::vector<uint8_t> BerlekampMassey(const std::vector<uint8_t>& s) {
  std::vector<uint8_t> c = {1}, b = {1};
  int l = 0, m = 1;
  uint8_t last = 1;
  for (size_t n = 0; n < s.size(); ++n) {
    uint8_t d = s[n];
    for (int i = 1; i <= l && i < static_cast<int>(c.size()); ++i) {
      d ^= Mul(c[i], s[n - i]);
    }
    if (d == 0) {
      ++m;
      continue;
    }
    const uint8_t coef = gf256::Div(d, last);
    std::vector<uint8_t> prev = c;
    if (c.size() < b.size() + m) c.resize(b.size() + m, 0);
    for (size_t i = 0; i < b.size(); ++i) c[i + m] ^= Mul(coef, b[i]);
    if (2 * l <= static_cast<int>(n)) {
      l = static_cast<int>(n) + 1 - l;
      b = std::move(prev);
      last = d;
      m = 1;
    } else {
      ++m;
    }
  }
  c.resize(l + 1, 0);
  return c;
}

}  // namespace

RsCode::RsCode(int n, int k) : n_(n), k_(k) {
  if (!(0 < k && k < n && n <= 255) || (n - k) % 2 != 0) {
    throw ConfigError("invalid Reed-Solomon parameters (n=" + std::to_string(n) +
                      ", k=" + std::to_string(k) +
                      "): need 0 < k < n <= 255 and n - k even");
  }
  // g(x) = prod_{i < n-k} (x - a^i), highest degree first.
  generator_ = {1};
  for (int i = 0; i < n - k; ++i) {
    std::vector<uint8_t> next(generator_.size() + 1, 0);
    const uint8_t root = gf256::Exp(i);
    for (size_t j = 0; j < generator_.size(); ++j) {
      next[j] ^= generator_[j];
      next[j + 1] ^= Mul(generator_[j], root);
    }
    generator_ = std::move(next);
  }
}

std::vector<uint8_t> RsCode::Encode(const std::vector<uint8_t>& message) const {
  if (static_cast<int>(message.size()) != k_) {
    throw ValidationError("rs encode: message of " + std::to_string(message.size()) +
                          " bytes, expected " + std::to_string(k_));
  }
  const int p = parity();
  std::vector<uint8_t> remainder(p, 0);
  for (uint8_t byte : message) {
    const uint8_t feedback = byte ^ remainder[0];
    for (int j = 0; j + 1 < p; ++j) {
      remainder[j] = remainder[j + 1] ^ Mul(feedback, generator_[j + 1]);
    }
    remainder[p - 1] = Mul(feedback, generator_[p]);
  }
  std::vector<uint8_t> out = message;
  out.insert(out.end(), remainder.begin(), remainder.end());
  return out;
}

RsDecodeResult RsCode::Decode(const std::vector<uint8_t>& received) const {
  if (static_cast<int>(received.size()) != n_) {
    throw ValidationError("rs decode: word of " + std::to_string(received.size()) +
                          " bytes, expected " + std::to_string(n_));
  }
  RsDecodeResult result;
  result.message.assign(received.begin(), received.begin() + k_);
  const int p = parity();
  std::vector<uint8_t> s = Syndromes(received, p);
  if (std::all_of(s.begin(), s.end(), [](uint8_t v) { return v == 0; })) {
    return result;
  }
  std::vector<uint8_t> locator = BerlekampMassey(s);
  const int errors = static_cast<int>(locator.size()) - 1;
  if (errors > t()) {
    result.ok = false;
    return result;
  }
  // Omega(x) = S(x) Lambda(x) mod x^p.
  std::vector<uint8_t> omega(p, 0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j <= errors && i + j < p; ++j) omega[i + j] ^= Mul(s[i], locator[j]);
  }
  std::vector<uint8_t> derivative(std::max(errors, 1), 0);
  for (int i = 1; i <= errors; i += 2) derivative[i - 1] = locator[i];

  std::vector<uint8_t> word = received;
  int found = 0;
  for (int i = 0; i < n_; ++i) {
    const int power = n_ - 1 - i;
    const uint8_t x_inv = gf256::Exp(-power);
    if (EvalLow(locator, x_inv) != 0) continue;
    const uint8_t denom = EvalLow(derivative, x_inv);
    if (denom == 0) {
      result.ok = false;
      return result;
    }
    const uint8_t magnitude =
        Mul(gf256::Exp(power), gf256::Div(EvalLow(omega, x_inv), denom));
    word[i] ^= magnitude;
    ++found;
  }
  if (found != errors) {
    result.ok = false;
    return result;
  }
  std::vector<uint8_t> check = Syndromes(word, p);
  if (!std::all_of(check.begin(), check.end(), [](uint8_t v) { return v == 0; })) {
    result.ok = false;
    return result;
  }
  result.message.assign(word.begin(), word.begin() + k_);
  result.corrected = found;
  return result;
}

std::vector<uint8_t> RsCode::EncodeShortened(const std::vector<uint8_t>& message) const {
  if (message.empty() || static_cast<int>(message.size()) > k_) {
    throw ValidationError("rs encode: shortened message must hold 1.." +
                          std::to_string(k_) + " bytes");
  }
  const size_t pad = k_ - message.size();
  std::vector<uint8_t> full(pad, 0);
  full.insert(full.end(), message.begin(), message.end());
  std::vector<uint8_t> word = Encode(full);
  return std::vector<uint8_t>(word.begin() + pad, word.end());
}

RsDecodeResult RsCode::DecodeShortened(const std::vector<uint8_t>& received) const {
  const int p = parity();
  const int m = static_cast<int>(received.size()) - p;
  if (m < 1 || m > k_) {
    throw ValidationError("rs decode: shortened word of " +
                          std::to_string(received.size()) + " bytes");
  }
  const size_t pad = k_ - m;
  std::vector<uint8_t> full(pad, 0);
  full.insert(full.end(), received.begin(), received.end());
  RsDecodeResult r = Decode(full);
  const bool touched_pad =
      std::any_of(r.message.begin(), r.message.begin() + pad, [](uint8_t v) { return v != 0; });
  if (touched_pad) {
    r.ok = false;
    r.corrected = 0;
    r.message.assign(received.begin(), received.begin() + m);
    return r;
  }
  r.message.erase(r.message.begin(), r.message.begin() + pad);
  return r;
}

namespace qam16 {
namespace {

// Gray order along one axis: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
constexpr int kLevelOfPair[4] = {-3, -1, 3, 1};

int PairOfLevel(double x) {
  // Decision thresholds at -2, 0, 2 on the unscaled axis.
  if (x < -2.0) return 0b00;
  if (x < 0.0) return 0b01;
  if (x < 2.0) return 0b11;
  return 0b10;
}

}  // namespace

const std::vector<std::complex<double>>& Constellation() {
  static const std::vector<std::complex<double>> points = [] {
    std::vector<std::complex<double>> p(16);
    const double scale = 1.0 / std::sqrt(10.0);
    for (int nibble = 0; nibble < 16; ++nibble) {
      p[nibble] = {kLevelOfPair[nibble >> 2] * scale, kLevelOfPair[nibble & 3] * scale};
    }
    return p;
  }();
  return points;
}

std::complex<double> MapNibble(int nibble) { return Constellation().at(nibble & 15); }

int NearestNibble(std::complex<double> point) {
  const double s = std::sqrt(10.0);
  return (PairOfLevel(point.real() * s) << 2) | PairOfLevel(point.imag() * s);
}

std::vector<std::complex<double>> Modulate(const Bits& bits) {
  std::vector<std::complex<double>> out;
  out.reserve((bits.size() + 3) / 4);
  for (size_t i = 0; i < bits.size(); i += 4) {
    int nibble = 0;
    for (size_t j = 0; j < 4; ++j) {
      nibble = (nibble << 1) | (i + j < bits.size() ? (bits[i + j] & 1) : 0);
    }
    out.push_back(MapNibble(nibble));
  }
  return out;
}

Bits Demodulate(const std::vector<std::complex<double>>& symbols) {
  Bits out;
  out.reserve(symbols.size() * 4);
  for (const auto& s : symbols) {
    const int nibble = NearestNibble(s);
    for (int j = 3; j >= 0; --j) out.push_back(static_cast<uint8_t>((nibble >> j) & 1));
  }
  return out;
}

}  // namespace qam16

Bits BytesToBits(const std::vector<uint8_t>& bytes) {
  Bits out;
  out.reserve(bytes.size() * 8);
  for (uint8_t b : bytes) {
    for (int j = 7; j >= 0; --j) out.push_back(static_cast<uint8_t>((b >> j) & 1));
  }
  return out;
}

std::vector<uint8_t> BitsToBytes(const Bits& bits) {
  std::vector<uint8_t> out((bits.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1) out[i / 8] |= static_cast<uint8_t>(0x80 >> (i % 8));
  }
  return out;
}

int64_t ClassicalFrameBytes(int64_t payload_bytes, const RsCode& rs) {
  const int64_t full = payload_bytes / rs.k();
  const int64_t rem = payload_bytes % rs.k();
  return kClassicalHeaderBytes + full * rs.n() + (rem > 0 ? rem + rs.parity() : 0);
}

int64_t ClassicalSymbolCount(const std::string& text, const ClassicalCodes& codes) {
  const int64_t payload = (static_cast<int64_t>(codes.huffman.Encode(text).size()) + 7) / 8;
  return ClassicalFrameBytes(payload, codes.rs) * 2;  // 8 bits per byte, 4 per symbol
}

ClassicalResult ClassicalTransmit(const std::string& text, const ClassicalCodes& codes,
                                  ChannelKind kind, double snr_db, std::mt19937_64& rng) {
  const RsCode& rs = codes.rs;
  const Bits bits = codes.huffman.Encode(text);
  const std::vector<uint8_t> payload = BitsToBytes(bits);

  std::vector<uint8_t> frame(kClassicalHeaderBytes);
  const uint32_t bit_count = static_cast<uint32_t>(bits.size());
  for (int i = 0; i < kClassicalHeaderBytes; ++i) frame[i] = (bit_count >> (8 * i)) & 0xff;
  std::vector<int> block_sizes;
  for (size_t off = 0; off < payload.size(); off += rs.k()) {
    const size_t len = std::min<size_t>(rs.k(), payload.size() - off);
    std::vector<uint8_t> chunk(payload.begin() + off, payload.begin() + off + len);
    std::vector<uint8_t> coded = rs.EncodeShortened(chunk);
    block_sizes.push_back(static_cast<int>(coded.size()));
    frame.insert(frame.end(), coded.begin(), coded.end());
  }

  std::vector<std::complex<double>> symbols = qam16::Modulate(BytesToBits(frame));
  ClassicalResult result;
  result.symbols = static_cast<int64_t>(symbols.size());
  std::vector<uint8_t> received =
      BitsToBytes(qam16::Demodulate(ApplyChannel(symbols, kind, snr_db, rng)));
  received.resize(frame.size());

  uint32_t rx_bits = 0;
  for (int i = 0; i < kClassicalHeaderBytes; ++i) {
    rx_bits |= static_cast<uint32_t>(received[i]) << (8 * i);
  }
  std::vector<uint8_t> recovered;
  size_t off = kClassicalHeaderBytes;
  for (int size : block_sizes) {
    std::vector<uint8_t> word(received.begin() + off, received.begin() + off + size);
    off += size;
    RsDecodeResult r = rs.DecodeShortened(word);
    if (!r.ok) ++result.failed_blocks;
    recovered.insert(recovered.end(), r.message.begin(), r.message.end());
  }
  for (size_t i = 0; i < payload.size(); ++i) {
    if (recovered[i] != payload[i]) ++result.byte_errors;
  }
  Bits rx_stream = BytesToBits(recovered);
  rx_stream.resize(std::min<size_t>(rx_bits, rx_stream.size()));
  result.text = codes.huffman.Decode(rx_stream);
  result.exact = result.text == text;
  return result;
}

}  // namespace scst
