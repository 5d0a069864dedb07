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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "scst/classical.h"
#include "scst/config.h"
#include "scst/corpus.h"
#include "scst/datagen.h"
#include "scst/experiment.h"
#include "scst/extraction.h"
#include "scst/filtering.h"
#include "scst/semcodec.h"
#include "scst/stm.h"
#include "test_util.h"

namespace scst {
namespace {

namespace fs = std::filesystem;
using nn::Tensor;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const std::string& name, const Outcome& o) {
  std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id,
              name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void Run(int id, const std::string& name, const std::function<Outcome()>& fn) {
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  Report(id, name, o);
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Average ranks, ties sharing the mean of their positions.
std::vector<double> Ranks(const std::vector<double>& x) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    for (size_t k = i; k <= j; ++k) r[order[k]] = (i + j) / 2.0 + 1.0;
    i = j + 1;
  }
  return r;
}

double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> ra = Ranks(a), rb = Ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double QFunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Gray 16-QAM: two independent 4-PAM decisions with half spacing 1/sqrt(10).
double Qam16Ser(double es_n0_db) {
  const double snr = std::pow(10.0, es_n0_db / 10.0);
  const double p = 1.5 * QFunc(std::sqrt(snr / 5.0));
  return 1.0 - (1.0 - p) * (1.0 - p);
}

// Minimum total code length over all prefix codes, by exhaustive search of
// Kraft-feasible nondecreasing lengths against decreasing counts.
uint64_t BruteForceOptimal(std::vector<uint64_t> counts) {
  std::sort(counts.rbegin(), counts.rend());
  const int n = static_cast<int>(counts.size());
  if (n == 1) return counts[0];
  uint64_t best = std::numeric_limits<uint64_t>::max();
  auto rec = [&](auto&& self, int i, int min_len, double kraft,
                 uint64_t cost) -> void {
    if (cost >= best) return;
    if (i == n) {
      best = cost;
      return;
    }
    for (int l = min_len; l < n; ++l) {
      const double k = kraft + std::ldexp(1.0, -l);
      if (k > 1.0 + 1e-12) continue;
      self(self, i + 1, l, k, cost + counts[i] * l);
    }
  };
  rec(rec, 0, 1, 0.0, 0);
  return best;
}

Triplet Plain(const std::string& h, const std::string& r, const std::string& t) {
  Triplet x;
  x.head = EntitySpan::Plain(h);
  x.relation = r;
  x.relation_head_upos = "VERB";
  x.tail = EntitySpan::Plain(t);
  x.sent_id = "s1";
  return x;
}

std::vector<std::string> Strings(const std::vector<Triplet>& ts) {
  std::vector<std::string> out;
  for (const Triplet& t : ts) {
    out.push_back("(" + t.head.text + ", " + t.relation + ", " + t.tail.text +
                  ")");
  }
  return out;
}

Outcome GoldenFilter() {
  const std::vector<Triplet> input = {Plain("China", "capital city", "Beijing"),
                                      Plain("China", "contain", "Beijing"),
                                      Plain("Bob", "born in", "Beijing")};
  TaskSpec spec;
  spec.task = TaskKind::kQa;
  spec.entity_whitelist = {"china", "beijing"};
  const auto step1 = DedupEntityPairs(input);
  const auto step2 = TaskFilter(step1, spec);
  const auto [all, report] = FilterSemantics(input, spec);
  const std::vector<std::string> want1 = {"(China, capital city, Beijing)",
                                          "(Bob, born in, Beijing)"};
  const std::vector<std::string> want2 = {"(China, capital city, Beijing)"};
  const bool ok = Strings(step1) == want1 && Strings(step2) == want2 &&
                  Strings(all) == want2 && report.kept_count == 1;
  std::string got;
  for (const std::string& s : Strings(all)) got += s;
  return {ok, "output " + got};
}

Outcome RsThreshold() {
  RsCode rs(255, 223);
  std::mt19937_64 rng(2);
  auto trial = [&](int errors) {
    std::vector<uint8_t> msg(223);
    for (uint8_t& b : msg) b = static_cast<uint8_t>(rng());
    std::vector<uint8_t> word = rs.Encode(msg);
    std::vector<int> pos(255);
    std::iota(pos.begin(), pos.end(), 0);
    std::shuffle(pos.begin(), pos.end(), rng);
    for (int i = 0; i < errors; ++i) {
      word[pos[i]] ^= static_cast<uint8_t>(1 + rng() % 255);
    }
    RsDecodeResult r = rs.Decode(word);
    return r.ok && r.message == msg;
  };
  int fail16 = 0, fail17 = 0;
  for (int i = 0; i < 200; ++i) fail16 += !trial(16);
  for (int i = 0; i < 200; ++i) fail17 += !trial(17);
  return {fail16 == 0 && fail17 > 100,
          "16 errors: " + std::to_string(fail16) + "/200 failed; 17 errors: " +
              std::to_string(fail17) + "/200 failed or mis-corrected"};
}

Outcome QamFidelity() {
  std::mt19937_64 rng(3);
  const int n = 1000000;
  std::vector<int> sent(n);
  std::vector<std::complex<double>> symbols(n);
  for (int i = 0; i < n; ++i) {
    sent[i] = static_cast<int>(rng() % 16);
    symbols[i] = qam16::MapNibble(sent[i]);
  }
  bool ok = true;
  std::string detail;
  for (double db : {6.0, 10.0, 14.0}) {
    auto recv = ApplyChannel(symbols, ChannelKind::kAwgn, db, rng);
    int errors = 0;
    for (int i = 0; i < n; ++i) errors += qam16::NearestNibble(recv[i]) != sent[i];
    const double ser = static_cast<double>(errors) / n;
    const double want = Qam16Ser(db);
    const double rel = std::abs(ser - want) / want;
    ok = ok && rel <= 0.05;
    detail += Fmt("%.0f dB", db) + Fmt(" ser=%.5f", ser) +
              Fmt(" oracle=%.5f", want) + Fmt(" rel=%.3f; ", rel);
  }
  return {ok, detail};
}

Outcome HuffmanChecks(const fs::path& data) {
  std::vector<std::string> texts;
  for (const char* name : {"sentiment_train.conllu", "sentiment_test.conllu",
                           "qa_train.conllu", "qa_test.conllu"}) {
    for (const DepTree& tree : LoadConllu(data / name)) texts.push_back(tree.text());
  }
  HuffmanCode code = HuffmanCode::Build(CountCharacters(texts));
  size_t mismatches = 0;
  for (const std::string& t : texts) mismatches += code.Decode(code.Encode(t)) != t;

  std::mt19937_64 rng(4);
  int optimal = 0;
  for (int table = 0; table < 20; ++table) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    FrequencyTable f;
    std::vector<uint64_t> counts;
    for (int i = 0; i < n; ++i) {
      const uint64_t c = std::uniform_int_distribution<uint64_t>(1, 50)(rng);
      f[static_cast<unsigned char>('a' + i)] = c;
      counts.push_back(c);
    }
    HuffmanCode h = HuffmanCode::Build(f);
    uint64_t total = 0;
    for (auto [sym, count] : f) total += count * h.codes().at(sym).size();
    optimal += total == BruteForceOptimal(counts);
  }
  return {mismatches == 0 && optimal == 20,
          std::to_string(texts.size() - mismatches) + "/" +
              std::to_string(texts.size()) + " sentences round trip; " +
              std::to_string(optimal) + "/20 tables optimal"};
}

Outcome GradientIntegrity() {
  SentimentModelConfig sc;
  sc.dim = 8;
  sc.layers = 1;
  sc.heads = 2;
  sc.ffn_dim = 8;
  sc.max_len = 8;
  sc.mlp_hidden = 4;
  sc.dropout = 0.0;
  std::mt19937_64 rng(6), drop(0);
  SentimentModel m(sc, 7, rng);
  const std::vector<int> ids = {kClsId, 5, 6, 5, kSepId};
  const std::vector<int> segs(ids.size(), 0);
  const Tensor label = Tensor::FromVector({2}, {0.0, 1.0});
  std::vector<Tensor> params;
  for (auto& [name, t] : m.Parameters()) params.push_back(t);
  const double sentiment_err = testing::GradCheck(params, [&] {
    Tensor e = EmbedSequence(ids, segs, m.tables());
    Tensor p = m.DecodeSentiment(m.SemanticEncode(e, false, drop), false, drop);
    return nn::CrossEntropyBinary(p, label);
  });

  StmConfig c;
  c.d = 4;
  c.n_q = 2;
  c.n_r = 3;
  c.n_o = 2;
  StmParams p = StmParams::Create(c, 6, rng);
  StmState start = StmInit(c);
  std::vector<double> item(16), rel(32);
  std::normal_distribution<double> normal;
  for (double& x : item) x = 0.3 * normal(rng);
  for (double& x : rel) x = 0.3 * normal(rng);
  start.item = Tensor::FromVector({4, 4}, item);
  start.relational = Tensor::FromVector({2, 4, 4}, rel);
  const std::vector<int> stm_ids = {5, 2, 3};
  const std::vector<TokenRole> roles = {TokenRole::kHead, TokenRole::kRelation,
                                        TokenRole::kTail};
  std::vector<Tensor> stm_params;
  for (auto& [name, t] : p.Parameters()) stm_params.push_back(t);
  const double stm_err = testing::GradCheck(stm_params, [&] {
    Tensor e = EmbedTokens(stm_ids, roles, p);
    StmState next = StmStep(start, e, p, c);
    Tensor probs = nn::Softmax(AnswerReadout(next, p, c), -1);
    return nn::Add(nn::CrossEntropyCategorical(probs, label),
                   nn::Scale(nn::Sum(nn::Mul(next.item, next.item)), 0.01));
  });
  return {sentiment_err < 1e-4 && stm_err < 1e-4,
          "sentiment path max rel err " + Fmt("%.2e", sentiment_err) +
              ", STM step max rel err " + Fmt("%.2e", stm_err)};
}

// Everything trained once per task and shared by the task-level criteria.
struct TaskRun {
  ExperimentConfig config;
  TaskData data;
  std::vector<PreparedSample> scst_train, scst_test, full_train, full_test;
  TrainedModel scst, fulltext;
  double scst_seconds = 0.0, fulltext_seconds = 0.0;
  ClassicalCodes codes;
};

TaskRun TrainRun(const fs::path& config_path) {
  TaskRun run;
  run.config = ExperimentConfig::Load(config_path);
  run.data = LoadTaskData(run.config);
  const auto& answers = run.data.answers;
  run.scst_train = PrepareAll(run.data.train, Variant::kScst, run.config,
                              run.data.train_context, answers);
  run.scst_test = PrepareAll(run.data.test, Variant::kScst, run.config,
                             run.data.test_context, answers);
  run.full_train = PrepareAll(run.data.train, Variant::kFulltext, run.config,
                              run.data.train_context, answers);
  run.full_test = PrepareAll(run.data.test, Variant::kFulltext, run.config,
                             run.data.test_context, answers);
  auto start = Clock::now();
  run.scst = TrainTask(run.config, Variant::kScst, run.scst_train, answers);
  run.scst_seconds = Seconds(start);
  start = Clock::now();
  run.fulltext = TrainTask(run.config, Variant::kFulltext, run.full_train, answers);
  run.fulltext_seconds = Seconds(start);
  run.codes = BuildClassicalCodes(run.config, run.data.train);
  std::printf("info: %s trained (scst %.0f s, fulltext %.0f s)\n",
              std::string(TaskKindName(run.config.task)).c_str(),
              run.scst_seconds, run.fulltext_seconds);
  std::fflush(stdout);
  return run;
}

ChannelSetting Noiseless() { return ChannelSetting{}; }

ChannelSetting Noisy(ChannelKind kind, double snr_db) {
  return ChannelSetting{false, kind, snr_db};
}

double MeanAccuracy(const TaskRun& run, const ChannelSetting& channel, int seeds) {
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    sum += Evaluate(*run.scst.system, run.scst_test, channel, s);
  }
  return sum / seeds;
}

Outcome DeskQa(const TaskRun& run) {
  std::map<std::string, int> counts;
  for (const TaskSample& s : run.data.train) ++counts[s.answer];
  std::string majority;
  int best = -1;
  for (auto& [answer, n] : counts) {
    if (n > best) best = n, majority = answer;
  }
  int hits = 0;
  for (const TaskSample& s : run.data.test) hits += s.answer == majority;
  const double baseline = static_cast<double>(hits) / run.data.test.size();
  const double clean = Evaluate(*run.scst.system, run.scst_test, Noiseless(), 0);
  const double at18 = MeanAccuracy(run, Noisy(ChannelKind::kAwgn, 18.0), 3);
  const bool ok = clean >= baseline + 0.30 && std::abs(clean - at18) <= 0.05 &&
                  run.scst_seconds < 1200.0;
  return {ok, Fmt("noiseless %.3f", clean) + Fmt(", majority %.3f", baseline) +
                  Fmt(", 18 dB AWGN %.3f", at18) +
                  Fmt(", training %.0f s", run.scst_seconds)};
}

Outcome DeskSentiment(const TaskRun& run) {
  const double scst = Evaluate(*run.scst.system, run.scst_test, Noiseless(), 0);
  const double full =
      Evaluate(*run.fulltext.system, run.full_test, Noiseless(), 0);
  const double seconds = run.scst_seconds + run.fulltext_seconds;
  return {std::abs(scst - full) <= 0.05 && seconds < 1200.0,
          Fmt("triplet %.3f", scst) + Fmt(", full text %.3f", full) +
              Fmt(", training %.0f s", seconds)};
}

Outcome Monotonicity(const std::vector<const TaskRun*>& runs) {
  const std::vector<double> grid = {-6, -3, 0, 3, 6, 9, 12, 15, 18};
  bool ok = true;
  std::string detail;
  for (const TaskRun* run : runs) {
    for (ChannelKind kind : {ChannelKind::kAwgn, ChannelKind::kRayleigh}) {
      std::vector<std::vector<double>> per_seed(3);
      std::vector<double> mean;
      for (double db : grid) {
        double sum = 0.0;
        for (int s = 0; s < 3; ++s) {
          const double a =
              Evaluate(*run->scst.system, run->scst_test, Noisy(kind, db), s);
          per_seed[s].push_back(a);
          sum += a;
        }
        mean.push_back(sum / 3.0);
      }
      const double rho = Spearman(grid, mean);
      ok = ok && rho >= 0.8;
      detail += std::string(TaskKindName(run->config.task)) + "/" +
                std::string(ChannelKindName(kind)) + Fmt(" rho=%.3f (seeds", rho);
      for (const auto& acc : per_seed) detail += Fmt(" %.2f", Spearman(grid, acc));
      detail += "); ";
    }
  }
  return {ok, detail};
}

Outcome CliffEffect(const TaskRun& sentiment) {
  std::vector<PreparedSample> corpus(
      sentiment.full_test.begin(),
      sentiment.full_test.begin() +
          std::min<size_t>(100, sentiment.full_test.size()));
  double last_low = -1e9, first_high = 1e9;
  std::string curve;
  for (int i = 0; i <= 48; ++i) {
    const double db = 0.5 * i;
    const double rate = EvaluateClassical(nullptr, corpus, sentiment.codes,
                                          ChannelKind::kAwgn, db, 0)
                            .exact_recovery_rate;
    if (rate < 0.10) last_low = db;
    if (rate > 0.90 && first_high > 1e8) first_high = db;
    if (i % 4 == 0) curve += Fmt(" %.0f:", db) + Fmt("%.2f", rate);
  }
  const double window = first_high - last_low;
  const bool ok = last_low > -1e8 && first_high < 1e8 && window > 0 && window <= 6.0;
  return {ok, Fmt("<10%% up to %.1f dB", last_low) +
                  Fmt(", >90%% from %.1f dB", first_high) +
                  Fmt(", window %.1f dB; curve", window) + curve};
}

Outcome GainOrdering(const std::vector<const TaskRun*>& runs) {
  bool ok = true;
  std::string detail;
  for (const TaskRun* run : runs) {
    for (ChannelKind kind : {ChannelKind::kAwgn, ChannelKind::kRayleigh}) {
      double classical = 0.0;
      for (int s = 0; s < 3; ++s) {
        classical += EvaluateClassical(run->fulltext.system.get(), run->full_test,
                                       run->codes, kind, 5.0, s)
                         .accuracy;
      }
      classical /= 3.0;
      const double scst = MeanAccuracy(*run, Noisy(kind, 5.0), 3);
      ok = ok && scst > classical;
      detail += std::string(TaskKindName(run->config.task)) + "/" +
                std::string(ChannelKindName(kind)) + Fmt(" scst %.3f", scst) +
                Fmt(" classical %.3f; ", classical);
    }
  }
  return {ok, detail};
}

// Mean of the per-sentence filter reports over train and test, with each
// task's own knowledge base.
Outcome DataReduction(const std::vector<const TaskRun*>& runs) {
  bool ok = true;
  std::string detail;
  for (const TaskRun* run : runs) {
    double sum = 0.0, max = 0.0;
    int n = 0;
    auto add = [&](const std::vector<TaskSample>& samples,
                   const ExtractionContext& ctx) {
      static const std::vector<ExternalTriplet> kNone;
      for (const TaskSample& s : samples) {
        for (const DepTree& tree : s.text_trees) {
          auto it = ctx.external.find(tree.sent_id);
          auto triplets = ExtractSemantics(
              tree, it == ctx.external.end() ? kNone : it->second, ctx.refs);
          auto [kept, r] =
              FilterSemantics(triplets, run->config.knowledge_base, tree.size());
          sum += r.reduction_pct;
          max = std::max(max, r.reduction_pct);
          ++n;
        }
      }
    };
    add(run->data.train, run->data.train_context);
    add(run->data.test, run->data.test_context);
    const double mean = sum / n;
    double per_sample = 0.0;
    for (const PreparedSample& s : run->scst_test) per_sample += s.report.reduction_pct;
    per_sample /= run->scst_test.size();
    ok = ok && mean > 40.0;
    detail += std::string(TaskKindName(run->config.task)) +
              Fmt(" mean %.1f%%", mean) + Fmt(" max %.1f%%", max) +
              Fmt(" (per test sample %.1f%%); ", per_sample);
  }
  return {ok, detail};
}

Outcome SymbolOrdering(const std::vector<const TaskRun*>& runs,
                       const TaskRun& qa) {
  bool ok = true;
  std::string detail;
  for (const TaskRun* run : runs) {
    const int c = run->config.symbols_per_vector;
    size_t fewer = 0;
    for (size_t i = 0; i < run->scst_test.size(); ++i) {
      fewer += CountSymbols(run->scst_test[i], Variant::kScst, c, nullptr) <
               CountSymbols(run->full_test[i], Variant::kFulltext, c, nullptr);
    }
    const double share = static_cast<double>(fewer) / run->scst_test.size();
    ok = ok && share >= 0.95;
    detail += std::string(TaskKindName(run->config.task)) +
              Fmt(" scst<fulltext on %.1f%% of samples; ", 100.0 * share);
  }
  const uint64_t scst_flops = EstimateFlops(*qa.scst.system, qa.scst_test);
  const uint64_t full_flops = EstimateFlops(*qa.fulltext.system, qa.full_test);
  ok = ok && scst_flops < full_flops;
  detail += "qa flops scst " + std::to_string(scst_flops) + " fulltext " +
            std::to_string(full_flops);
  return {ok, detail};
}

Outcome Determinism(const fs::path& data, const fs::path& work) {
  nlohmann::json j = nlohmann::json::parse(ReadFile(data / "sentiment.json"));
  j["training"]["epochs"] = 1;
  j["training"]["max_train_samples"] = 64;
  j["variants"] = {"scst", "classical"};
  j["channel"]["snr_grid_db"] = {0.0, 10.0};
  j["eval_seeds"] = 2;
  WriteFile(data / "determinism.json", j.dump(2));
  const ExperimentConfig config = ExperimentConfig::Load(data / "determinism.json");
  std::vector<std::string> names;
  for (ChannelKind k : config.channels) {
    names.push_back("metrics_" + std::string(ChannelKindName(k)) + ".csv");
  }
  RunSweep(config, work / "sweep_a");
  RunSweep(config, work / "sweep_b");
  bool same = !names.empty();
  for (const std::string& name : names) {
    same = same && ReadFile(work / "sweep_a" / name) == ReadFile(work / "sweep_b" / name);
  }
  return {same, std::to_string(names.size()) + " metrics files compared"};
}

}  // namespace
}  // namespace scst

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  fs::path work = fs::temp_directory_path() / "scst_acceptance";
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--work-dir") work = argv[i + 1];
  }
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path data = work / "data";
  scst::GenerateDeskData(data, 1);

  using scst::Run;
  Run(1, "golden filtering", scst::GoldenFilter);
  Run(2, "RS threshold", scst::RsThreshold);
  Run(3, "16-QAM fidelity", scst::QamFidelity);
  Run(4, "Huffman", [&] { return scst::HuffmanChecks(data); });
  Run(5, "gradient integrity", scst::GradientIntegrity);

  scst::TaskRun sentiment, qa;
  bool trained = true;
  try {
    sentiment = scst::TrainRun(data / "sentiment.json");
    qa = scst::TrainRun(data / "qa.json");
  } catch (const std::exception& e) {
    std::printf("info: training failed: %s\n", e.what());
    trained = false;
  }
  const std::vector<const scst::TaskRun*> both = {&sentiment, &qa};
  auto guarded = [&](std::function<scst::Outcome()> fn) {
    return [trained, fn] {
      return trained ? fn() : scst::Outcome{false, "training failed"};
    };
  };
  Run(6, "desk QA", guarded([&] { return scst::DeskQa(qa); }));
  Run(7, "desk sentiment", guarded([&] { return scst::DeskSentiment(sentiment); }));
  Run(8, "monotonicity", guarded([&] { return scst::Monotonicity(both); }));
  Run(9, "cliff effect", guarded([&] { return scst::CliffEffect(sentiment); }));
  Run(10, "gain ordering at 5 dB", guarded([&] { return scst::GainOrdering(both); }));
  Run(11, "data reduction", guarded([&] { return scst::DataReduction(both); }));
  Run(12, "symbol ordering", guarded([&] { return scst::SymbolOrdering(both, qa); }));
  Run(13, "determinism", [&] { return scst::Determinism(data, work); });

  std::printf("%d of 13 criteria failed\n", scst::failures);
  return scst::failures == 0 ? 0 : 1;
}
