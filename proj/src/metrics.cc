// Copyright 2026 The lexstyle Authors.
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

#include "lexstyle/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <unordered_map>

#include "lexstyle/errors.h"

namespace lexstyle {

ContingencySets BuildContingency(std::span<const Document> source,
                                 std::span<const Document> transferred,
                                 std::span<const Prediction> before,
                                 std::span<const Prediction> after) {
  if (source.size() != transferred.size()) {
    throw ValidationError("source has " + std::to_string(source.size()) +
                              " documents, transferred has " + std::to_string(transferred.size()),
                          0);
  }
  if (before.size() != source.size() || after.size() != source.size()) {
    throw ContractError("prediction count does not match document count");
  }
  ContingencySets sets;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i].id != transferred[i].id) {
      throw ValidationError("document " + std::to_string(i) + ": id " + source[i].id +
                                " does not match transferred id " + transferred[i].id,
                            0);
    }
    if (source[i].label != transferred[i].label) {
      throw ValidationError("document " + source[i].id + " changed label during transfer", 0);
    }
    sets.ids.push_back(source[i].id);
    sets.labels.push_back(source[i].label);
    sets.before.push_back(before[i]);
    sets.after.push_back(after[i]);
    if (sets.correct_before(i)) {
      sets.right.push_back(i);
      if (!sets.correct_after(i)) ++sets.fooled;
    } else {
      sets.wrong.push_back(i);
      if (sets.correct_after(i)) ++sets.recovered;
    }
  }
  return sets;
}

ContingencySets BuildContingency(const DocumentClassifier& model,
                                 std::span<const Document> source,
                                 std::span<const Document> transferred) {
  if (source.size() != transferred.size()) {
    throw ValidationError("source and transferred corpora differ in size", 0);
  }
  const auto before = PredictAll(model, source);
  const auto after = PredictAll(model, transferred);
  return BuildContingency(source, transferred, before, after);
}

double TradeOff(std::size_t fooled, std::size_t recovered, std::size_t n) {
  if (n == 0) throw ContractError("trade-off needs at least one document");
  if (fooled > n || recovered > n) throw ContractError("trade-off counts exceed n");
  return (static_cast<double>(fooled) - static_cast<double>(recovered)) / static_cast<double>(n) *
         100.0;
}

double TradeOff(const ContingencySets& sets) {
  return TradeOff(sets.fooled, sets.recovered, sets.n());
}

// ---------------------------------------------------------------------------

namespace {

double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double step = d * c;
    h *= step;
    if (std::fabs(step - 1.0) < kEps) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

}  // namespace

double RegularizedIncompleteBeta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ContractError("incomplete beta needs a, b > 0");
  if (std::isnan(x)) throw ContractError("incomplete beta at NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * BetaContinuedFraction(a, b, x) / a;
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTTwoSided(double t, double df) {
  if (!(df > 0.0)) throw ContractError("degrees of freedom must be positive");
  if (std::isnan(t)) throw ContractError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  return RegularizedIncompleteBeta(df / (df + t * t), df / 2.0, 0.5);
}

TTestResult PairedTTest(std::span<const double> differences, double mu0) {
  const std::size_t n = differences.size();
  if (n < 2) throw ContractError("paired t-test needs at least two pairs");
  double sum = 0.0;
  for (double d : differences) {
    if (!std::isfinite(d)) throw ContractError("paired t-test input is not finite");
    sum += d;
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double d : differences) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) throw DomainError("differences have zero variance; t is undefined");

  TTestResult r;
  r.df = n - 1;
  r.t = (mean - mu0) / (sd / std::sqrt(static_cast<double>(n)));
  r.p_two_sided = StudentTTwoSided(r.t, static_cast<double>(r.df));
  return r;
}

TTestResult PairedTTest(std::span<const PairedSample> pairs, double mu0) {
  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& p : pairs) diffs.push_back(p.difference());
  return PairedTTest(diffs, mu0);
}

std::vector<PairedSample> ProbabilityPairs(const ContingencySets& sets) {
  std::vector<PairedSample> out;
  out.reserve(sets.n());
  for (std::size_t i = 0; i < sets.n(); ++i) {
    out.push_back({sets.before[i].ProbabilityOf(sets.labels[i]),
                   sets.after[i].ProbabilityOf(sets.labels[i])});
  }
  return out;
}

// ---------------------------------------------------------------------------

int AnnotationRecord::value(AnnotationFacet facet) const {
  switch (facet) {
    case AnnotationFacet::kFluency:
      return fluency;
    case AnnotationFacet::kSemantic:
      return semantic;
    case AnnotationFacet::kAdulteration:
      return adulteration;
  }
  return 0;
}

std::optional<AnnotationFacet> ParseFacet(std::string_view name) {
  if (name == "fluency") return AnnotationFacet::kFluency;
  if (name == "semantic") return AnnotationFacet::kSemantic;
  if (name == "adulteration") return AnnotationFacet::kAdulteration;
  return std::nullopt;
}

std::vector<AnnotationRecord> ParseAnnotations(std::istream& in) {
  std::vector<AnnotationRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line);
    }
    if (!j.is_object()) throw ParseError("annotation must be a JSON object", line);
    for (const auto& [key, _] : j.items()) {
      if (key != "doc_id" && key != "annotator" && key != "fluency" && key != "semantic" &&
          key != "adulteration") {
        throw ValidationError("unknown field \"" + key + "\"", line);
      }
    }
    auto require_int = [&](const char* key, int lo, int hi) {
      auto it = j.find(key);
      if (it == j.end()) throw ValidationError(std::string("missing field \"") + key + "\"", line);
      if (!it->is_number_integer()) {
        throw ValidationError(std::string("field \"") + key + "\" must be an integer", line);
      }
      const auto v = it->get<long long>();
      if (v < lo || v > hi) {
        throw ValidationError(std::string("field \"") + key + "\" out of range", line);
      }
      return static_cast<int>(v);
    };
    AnnotationRecord r;
    auto id = j.find("doc_id");
    if (id == j.end() || !id->is_string()) {
      throw ValidationError("field \"doc_id\" must be a string", line);
    }
    r.doc_id = id->get<std::string>();
    r.annotator = require_int("annotator", 1, 3);
    r.fluency = require_int("fluency", 0, 1);
    r.semantic = require_int("semantic", 0, 1);
    r.adulteration = require_int("adulteration", 0, 1);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AnnotationRecord> LoadAnnotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ParseAnnotations(in);
}

double Kappa(std::span<const AnnotationRecord> records, AnnotationFacet facet) {
  // doc -> mark per annotator, -1 when missing
  std::map<std::string, std::array<int, 3>> marks;
  for (const auto& r : records) {
    if (r.annotator < 1 || r.annotator > 3) {
      throw ValidationError("annotator must be 1, 2 or 3 (doc " + r.doc_id + ")", 0);
    }
    auto [it, inserted] = marks.try_emplace(r.doc_id, std::array<int, 3>{-1, -1, -1});
    int& slot = it->second[static_cast<std::size_t>(r.annotator - 1)];
    if (slot != -1) {
      throw ValidationError("doc " + r.doc_id + " has annotator " + std::to_string(r.annotator) +
                                " twice",
                            0);
    }
    slot = r.value(facet);
  }
  if (marks.empty()) throw ContractError("kappa needs at least one annotated document");

  std::size_t agreed = 0;
  std::array<std::size_t, 3> accepted{};
  for (const auto& [doc, m] : marks) {
    for (int v : m) {
      if (v == -1) throw ValidationError("doc " + doc + " lacks one of the three annotators", 0);
    }
    if (m[0] == m[1] && m[1] == m[2]) ++agreed;
    for (std::size_t a = 0; a < 3; ++a) accepted[a] += static_cast<std::size_t>(m[a]);
  }
  const double n = static_cast<double>(marks.size());
  const double p_agree = static_cast<double>(agreed) / n;
  double p_all_accept = 1.0;
  double p_all_reject = 1.0;
  for (std::size_t a = 0; a < 3; ++a) {
    p_all_accept *= static_cast<double>(accepted[a]) / n;
    p_all_reject *= (n - static_cast<double>(accepted[a])) / n;
  }
  const double p_chance = p_all_accept + p_all_reject;
  if (1.0 - p_chance <= 1e-12) {
    throw DomainError("chance agreement is 1; kappa is undefined");
  }
  return (p_agree - p_chance) / (1.0 - p_chance);
}

// ---------------------------------------------------------------------------

namespace {

using GramCounts = std::unordered_map<std::string, std::size_t>;

GramCounts CountGrams(std::span<const std::string> tokens, std::size_t order) {
  GramCounts counts;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < order; ++k) {
      if (k) key += '\x1f';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double Bleu(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  if (reference.empty() || hypothesis.empty()) throw ContractError("BLEU of an empty sequence");
  constexpr std::size_t kMaxOrder = 4;
  const std::size_t orders = std::min(kMaxOrder, hypothesis.size());
  double log_sum = 0.0;
  for (std::size_t order = 1; order <= orders; ++order) {
    const GramCounts hyp = CountGrams(hypothesis, order);
    const GramCounts ref = CountGrams(reference, order);
    std::size_t matched = 0;
    for (const auto& [gram, count] : hyp) {
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    const double total = static_cast<double>(hypothesis.size() - order + 1);
    const double hits = matched == 0 ? kBleuSmoothing : static_cast<double>(matched);
    log_sum += std::log(hits / total);
  }
  const double c = static_cast<double>(hypothesis.size());
  const double r = static_cast<double>(reference.size());
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * brevity * std::exp(log_sum / static_cast<double>(orders));
}

double MeanBleu(std::span<const Document> source, std::span<const Document> transferred) {
  if (source.size() != transferred.size()) {
    throw ValidationError("source and transferred corpora differ in size", 0);
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i].degenerate() || transferred[i].degenerate()) continue;
    sum += Bleu(source[i].tokens, transferred[i].tokens);
    ++count;
  }
  return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

double MeanPerplexity(const NGramTable& table, std::span<const Document> docs) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& doc : docs) {
    if (doc.degenerate()) continue;
    sum += Perplexity(table, doc);
    ++count;
  }
  return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------

namespace {

SubsetBreakdown Breakdown(const ContingencySets& sets, std::span<const std::size_t> members) {
  SubsetBreakdown b;
  for (std::size_t i : members) {
    const std::size_t gender = sets.labels[i] == GenderLabel::kMale ? 1 : 2;
    for (std::size_t slot : {std::size_t{0}, gender}) {
      ++b.source[slot].total;
      ++b.transferred[slot].total;
      if (sets.correct_before(i)) ++b.source[slot].correct;
      if (sets.correct_after(i)) ++b.transferred[slot].correct;
    }
  }
  return b;
}

nlohmann::ordered_json Accuracy(const SubsetCounts& c) {
  if (c.total == 0) return nullptr;
  return static_cast<double>(c.correct) / static_cast<double>(c.total);
}

nlohmann::ordered_json CountsJson(const SubsetCounts& c) {
  return {{"total", c.total}, {"correct", c.correct}, {"accuracy", Accuracy(c)}};
}

nlohmann::ordered_json SideJson(const std::array<SubsetCounts, 3>& side) {
  return {{"all", CountsJson(side[0])}, {"male", CountsJson(side[1])},
          {"female", CountsJson(side[2])}};
}

nlohmann::ordered_json NumberOrNull(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace

EvaluationReport MakeEvaluationReport(const ContingencySets& sets,
                                      std::span<const Document> source,
                                      std::span<const Document> transferred,
                                      const NGramTable* table) {
  EvaluationReport r;
  r.n = sets.n();
  r.fooled = sets.fooled;
  r.recovered = sets.recovered;
  r.trade_off = TradeOff(sets);
  std::vector<std::size_t> everyone(sets.n());
  for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = i;
  r.all = Breakdown(sets, everyone);
  r.right = Breakdown(sets, sets.right);
  r.wrong = Breakdown(sets, sets.wrong);
  r.bleu_mean = MeanBleu(source, transferred);
  if (table != nullptr) {
    r.perplexity_source = MeanPerplexity(*table, source);
    r.perplexity_transferred = MeanPerplexity(*table, transferred);
  }
  try {
    r.ttest = PairedTTest(ProbabilityPairs(sets));
  } catch (const ContractError&) {
  } catch (const DomainError&) {
  }
  for (const auto& doc : transferred) r.replacements += doc.replacements.size();
  return r;
}

nlohmann::ordered_json ToJson(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json(nullptr);
  j["n"] = r.n;
  j["fooled"] = r.fooled;
  j["recovered"] = r.recovered;
  j["trade_off"] = r.trade_off;
  j["accuracy"] = {{"source_all", Accuracy(r.all.source[0])},
                   {"source_right", Accuracy(r.right.source[0])},
                   {"source_wrong", Accuracy(r.wrong.source[0])},
                   {"transferred_all", Accuracy(r.all.transferred[0])},
                   {"transferred_right", Accuracy(r.right.transferred[0])},
                   {"transferred_wrong", Accuracy(r.wrong.transferred[0])}};
  j["breakdown"] = {
      {"all", {{"source", SideJson(r.all.source)}, {"transferred", SideJson(r.all.transferred)}}},
      {"right",
       {{"source", SideJson(r.right.source)}, {"transferred", SideJson(r.right.transferred)}}},
      {"wrong",
       {{"source", SideJson(r.wrong.source)}, {"transferred", SideJson(r.wrong.transferred)}}}};
  j["bleu_mean"] = NumberOrNull(r.bleu_mean);
  j["perplexity"] = {{"source", NumberOrNull(r.perplexity_source)},
                     {"transferred", NumberOrNull(r.perplexity_transferred)}};
  if (r.ttest) {
    j["ttest"] = {{"t", r.ttest->t}, {"p_two_sided", r.ttest->p_two_sided}, {"df", r.ttest->df}};
  } else {
    j["ttest"] = nullptr;
  }
  j["replacements"] = r.replacements;
  return j;
}

}  // namespace lexstyle
