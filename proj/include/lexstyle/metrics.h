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

#ifndef LEXSTYLE_METRICS_H_
#define LEXSTYLE_METRICS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexstyle/classifier.h"
#include "lexstyle/corpus.h"
#include "lexstyle/ngram.h"

namespace lexstyle {

// Per-document classifier outcomes on a source test set and its transferred
// image. "right" documents were classified correctly before transfer,
// "wrong" ones were not.
struct ContingencySets {
  std::vector<std::string> ids;  // source order
  std::vector<GenderLabel> labels;
  std::vector<Prediction> before;
  std::vector<Prediction> after;
  std::vector<std::size_t> right;  // indices into ids
  std::vector<std::size_t> wrong;
  std::size_t fooled = 0;     // right before, wrong after
  std::size_t recovered = 0;  // wrong before, right after

  std::size_t n() const { return ids.size(); }
  bool correct_before(std::size_t i) const { return before[i].label == labels[i]; }
  bool correct_after(std::size_t i) const { return after[i].label == labels[i]; }
};

// Throws ValidationError when the two lists are not id-aligned or a
// transferred document changed its label.
ContingencySets BuildContingency(std::span<const Document> source,
                                 std::span<const Document> transferred,
                                 std::span<const Prediction> before,
                                 std::span<const Prediction> after);
ContingencySets BuildContingency(const DocumentClassifier& model,
                                 std::span<const Document> source,
                                 std::span<const Document> transferred);

// (fooled - recovered) / n * 100. Throws ContractError when n is 0 or a
// count exceeds n.
double TradeOff(std::size_t fooled, std::size_t recovered, std::size_t n);
double TradeOff(const ContingencySets& sets);

// ---------------------------------------------------------------------------

struct PairedSample {
  double before = 0.0;
  double after = 0.0;
  double difference() const { return after - before; }
};

struct TTestResult {
  double t = 0.0;
  double p_two_sided = 1.0;
  std::size_t df = 0;
};

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double RegularizedIncompleteBeta(double x, double a, double b);
// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double StudentTTwoSided(double t, double df);

// Dependent-samples t-test on the differences against mu0. Throws
// ContractError for fewer than two pairs or non-finite values and
// DomainError when the differences have zero variance.
TTestResult PairedTTest(std::span<const PairedSample> pairs, double mu0 = 0.0);
TTestResult PairedTTest(std::span<const double> differences, double mu0 = 0.0);

// Before/after probability of each document's true label.
std::vector<PairedSample> ProbabilityPairs(const ContingencySets& sets);

// ---------------------------------------------------------------------------

enum class AnnotationFacet { kFluency, kSemantic, kAdulteration };

struct AnnotationRecord {
  std::string doc_id;
  int annotator = 1;  // 1, 2 or 3
  int fluency = 0;
  int semantic = 0;
  int adulteration = 0;

  int value(AnnotationFacet facet) const;
};

// {"doc_id","annotator","fluency","semantic","adulteration"} per line.
std::vector<AnnotationRecord> ParseAnnotations(std::istream& in);
std::vector<AnnotationRecord> LoadAnnotations(const std::filesystem::path& path);
std::optional<AnnotationFacet> ParseFacet(std::string_view name);

// Three-annotator agreement. A document counts as agreed when all three
// marks match; chance agreement is the product of the annotators' accept
// rates plus the product of their reject rates. Throws ValidationError
// unless every document has exactly annotators 1, 2 and 3, and DomainError
// when chance agreement is 1.
double Kappa(std::span<const AnnotationRecord> records, AnnotationFacet facet);

// ---------------------------------------------------------------------------

inline constexpr double kBleuSmoothing = 1e-9;

// Sentence BLEU-4 in [0, 100]: uniform weights over the orders the
// hypothesis is long enough to have, clipped precision, brevity penalty, and
// kBleuSmoothing in place of a zero match count. Throws ContractError on
// empty input.
double Bleu(std::span<const std::string> reference, std::span<const std::string> hypothesis);

// Mean BLEU of transferred against source, non-degenerate pairs only.
double MeanBleu(std::span<const Document> source, std::span<const Document> transferred);
// Mean perplexity over non-degenerate documents; NaN when there are none.
double MeanPerplexity(const NGramTable& table, std::span<const Document> docs);

// ---------------------------------------------------------------------------

struct SubsetCounts {
  std::size_t total = 0;
  std::size_t correct = 0;
};

// Accuracy of each subset before (source) and after (transferred) transfer,
// split by gender. Index order: [all, male, female].
struct SubsetBreakdown {
  std::array<SubsetCounts, 3> source;
  std::array<SubsetCounts, 3> transferred;
};

struct EvaluationReport {
  std::optional<std::uint64_t> seed;
  std::size_t n = 0;
  std::size_t fooled = 0;
  std::size_t recovered = 0;
  double trade_off = 0.0;
  SubsetBreakdown all, right, wrong;
  double bleu_mean = 0.0;
  std::optional<double> perplexity_source;
  std::optional<double> perplexity_transferred;
  std::optional<TTestResult> ttest;
  std::size_t replacements = 0;
};

EvaluationReport MakeEvaluationReport(const ContingencySets& sets,
                                      std::span<const Document> source,
                                      std::span<const Document> transferred,
                                      const NGramTable* table = nullptr);

// Key set documented in docs/report_format.md.
nlohmann::ordered_json ToJson(const EvaluationReport& report);

}  // namespace lexstyle

#endif  // LEXSTYLE_METRICS_H_
