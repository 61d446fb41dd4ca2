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

#include "lexstyle/transfer.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <unordered_set>

#include "lexstyle/errors.h"

namespace lexstyle {

double SuggestionGrid::path_count() const {
  double n = 1.0;
  for (const auto& row : rows) n *= static_cast<double>(row.size());
  return n;
}

void TransferConfig::Validate() const {
  if (top_n < 1) throw ContractError("top_n must be at least 1");
  if (beam_width < 1) throw ContractError("beam width must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ContractError("epsilon must be in (0, 1)");
}

double BeamScore(const NGramTable& table, std::span<const std::string> context,
                 const std::string& token, double similarity, double epsilon) {
  if (std::isnan(similarity)) throw ContractError("similarity is NaN");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ContractError("epsilon must be in (0, 1)");
  const double sim = std::clamp(similarity, 0.0, 1.0 - epsilon);

  if (context.size() > 3) context = context.subspan(context.size() - 3);
  std::vector<std::string> gram(context.begin(), context.end());
  gram.push_back(token);

  // Weight 1 for unigrams up to 4 for 4-grams.
  double numerator = 0.0;
  for (std::size_t order = 1; order <= gram.size(); ++order) {
    std::span<const std::string> tail(gram.data() + gram.size() - order, order);
    numerator += static_cast<double>(order) * table.NormalizedCount(tail);
  }
  return numerator / (40.0 * (1.0 - sim));
}

namespace {

bool BeamBefore(const Beam& a, const Beam& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.path < b.path;
}

std::vector<Beam> Advance(const std::vector<Beam>& beams, std::span<const Candidate> row,
                          const NGramTable& table, std::size_t width, double epsilon,
                          bool record_choice) {
  std::vector<Beam> next;
  next.reserve(beams.size() * row.size());
  for (const auto& beam : beams) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      Beam extended = beam;
      extended.score += BeamScore(table, beam.path, row[c].token, row[c].similarity, epsilon);
      extended.path.push_back(row[c].token);
      if (record_choice) extended.choices.push_back(c);
      next.push_back(std::move(extended));
    }
  }
  const std::size_t keep = std::min(width, next.size());
  std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(keep), next.end(),
                    BeamBefore);
  next.resize(keep);
  return next;
}

}  // namespace

std::vector<Beam> BeamSearch(const SuggestionGrid& grid, const NGramTable& table,
                             std::size_t beam_width, double epsilon) {
  if (grid.rows.empty()) throw ContractError("cannot decode an empty suggestion grid");
  if (beam_width < 1) throw ContractError("beam width must be at least 1");
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    if (grid.rows[i].empty()) {
      throw ContractError("suggestion row " + std::to_string(i) + " is empty");
    }
  }

  std::vector<Beam> beams(1);
  beams[0].path.emplace_back(kStartTag);
  for (const auto& row : grid.rows) {
    beams = Advance(beams, row, table, beam_width, epsilon, true);
  }
  const Candidate end{std::string(kEndTag), 0.0, false};
  return Advance(beams, std::span<const Candidate>(&end, 1), table, beam_width, epsilon, false);
}

void TransferEvents::Add(const TransferEvents& o) {
  documents += o.documents;
  transferred += o.transferred;
  passed_through += o.passed_through;
  degenerate += o.degenerate;
  oov_tokens += o.oov_tokens;
  replacements += o.replacements;
}

TransferEngine::TransferEngine(TransferResources resources, TransferConfig config)
    : res_(resources), config_(std::move(config)) {
  if (!res_.table || !res_.store || !res_.token_classifier || !res_.tagger || !res_.stemmer) {
    throw ContractError("transfer engine is missing a resource");
  }
  config_.Validate();
}

std::vector<Candidate> TransferEngine::SuggestRow(const std::string& token, PosTag tag,
                                                  GenderLabel target,
                                                  TransferEvents* events) const {
  const Candidate original{token, 1.0 - config_.epsilon, true};
  std::vector<Suggestion> neighbors;
  try {
    neighbors = res_.store->MostSimilar(token, config_.top_n);
  } catch (const OovError&) {
    if (events) ++events->oov_tokens;
    return {original};
  } catch (const DomainError&) {
    // Zero vector: no direction to compare against.
    if (events) ++events->oov_tokens;
    return {original};
  }

  std::vector<Candidate> row;
  std::unordered_set<std::string> seen = {token};
  for (const auto& s : neighbors) {
    if (res_.token_classifier->Classify(s.token).label != target) continue;
    std::string chosen = s.token;
    if (tag == PosTag::kVerb) {
      if (res_.stemmer->SameStem(s.token, token)) continue;
      chosen = res_.stemmer->Reinflect(s.token, token);
    }
    if (!seen.insert(chosen).second) continue;
    row.push_back({std::move(chosen), std::clamp(s.similarity, 0.0, 1.0 - config_.epsilon), false});
  }
  if (config_.fallback == FallbackPolicy::kAlways || row.empty()) row.push_back(original);
  return row;
}

SuggestionGrid TransferEngine::Suggest(const Document& doc, std::span<const PosTag> tags,
                                       GenderLabel target, TransferEvents* events) const {
  if (tags.size() != doc.tokens.size()) throw ContractError("tag count does not match tokens");
  SuggestionGrid grid;
  grid.rows.reserve(doc.tokens.size());
  for (const auto& token : doc.tokens) grid.rows.push_back({{token, 1.0 - config_.epsilon, true}});
  for (std::size_t pos : DetectRepresentatives(tags, config_.scope)) {
    grid.rows[pos] = SuggestRow(doc.tokens[pos], tags[pos], target, events);
  }
  return grid;
}

Document TransferEngine::Transfer(const Document& doc, GenderLabel target,
                                  TransferEvents* events) const {
  if (doc.style_state != StyleState::kSource) {
    throw ContractError("document " + doc.id + " has already been transferred");
  }
  if (events) ++events->documents;
  if (doc.degenerate()) {
    if (events) ++events->degenerate;
    return doc;
  }

  const auto tags = res_.tagger->Tag(doc.tokens);
  const SuggestionGrid grid = Suggest(doc, tags, target, events);
  const std::vector<Beam> beams = BeamSearch(grid, *res_.table, config_.beam_width, config_.epsilon);
  const Beam& best = beams.front();

  Document out = doc;
  out.style_state = StyleState::kTransferred;
  out.tokens.assign(best.path.begin() + 1, best.path.end() - 1);
  out.raw_text = JoinTokens(out.tokens);
  out.replacements.clear();
  for (std::size_t pos = 0; pos < grid.rows.size(); ++pos) {
    const Candidate& c = grid.rows[pos][best.choices[pos]];
    if (c.is_original) continue;
    out.replacements.push_back({pos, doc.tokens[pos], c.token, c.similarity});
  }
  if (events) {
    ++events->transferred;
    events->replacements += out.replacements.size();
  }
  return out;
}

Document TransferEngine::TransferOne(const Document& doc, std::optional<GenderLabel> target,
                                     TransferEvents* events) const {
  const GenderLabel goal = target.value_or(Opposite(doc.label));
  if (goal == doc.label) {
    if (events) {
      ++events->documents;
      ++events->passed_through;
    }
    return doc;
  }
  return Transfer(doc, goal, events);
}

std::vector<Document> TransferEngine::TransferCorpus(std::span<const Document> docs,
                                                     std::optional<GenderLabel> target,
                                                     TransferEvents* events) const {
  std::vector<Document> out(docs.size());
  std::vector<TransferEvents> per_doc(docs.size());
  std::vector<std::exception_ptr> errors(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = TransferOne(docs[k], target, &per_doc[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (events) {
    for (const auto& e : per_doc) events->Add(e);
  }
  return out;
}

std::vector<Document> TransferEngine::TransferCorpusSerial(std::span<const Document> docs,
                                                           std::optional<GenderLabel> target,
                                                           TransferEvents* events) const {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(TransferOne(doc, target, events));
  return out;
}

}  // namespace lexstyle
