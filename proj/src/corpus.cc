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

#include "lexstyle/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"
#include "lexstyle/errors.h"
#include "lexstyle/utf8.h"

namespace lexstyle {

namespace {

using json = nlohmann::ordered_json;

bool IsWordJoiner(char32_t cp) {
  return cp == U'\'' || cp == U'-' || cp == 0x2019 || cp == 0x200C;
}

bool AllPunct(std::string_view token) {
  const std::u32string cps = utf8::Decode(token);
  return !cps.empty() &&
         std::all_of(cps.begin(), cps.end(), [](char32_t cp) { return utf8::IsPunct(cp); });
}

std::string RequireString(const json& record, const char* key, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) {
    throw ParseError(std::string("missing field \"") + key + "\"", line);
  }
  if (!it->is_string()) {
    throw ParseError(std::string("field \"") + key + "\" must be a string", line);
  }
  return it->get<std::string>();
}

Document ParseRecord(const json& record, std::size_t line) {
  if (!record.is_object()) throw ParseError("record is not a JSON object", line);
  static const std::unordered_set<std::string> kAllowed = {
      "id", "text", "label", "split", "style_state", "replacements", "tokens", "seed"};
  for (const auto& [key, value] : record.items()) {
    if (!kAllowed.contains(key)) throw ValidationError("unknown field \"" + key + "\"", line);
  }

  Document doc;
  doc.id = RequireString(record, "id", line);
  doc.raw_text = RequireString(record, "text", line);
  const std::string label = RequireString(record, "label", line);
  const auto parsed_label = ParseGenderLabel(label);
  if (!parsed_label) throw ValidationError("unknown label \"" + label + "\"", line);
  doc.label = *parsed_label;
  const std::string split = RequireString(record, "split", line);
  const auto parsed_split = ParseSplit(split);
  if (!parsed_split) throw ValidationError("unknown split \"" + split + "\"", line);
  doc.split = *parsed_split;

  if (auto it = record.find("style_state"); it != record.end()) {
    if (*it == "transferred") {
      doc.style_state = StyleState::kTransferred;
    } else if (*it != "source") {
      throw ValidationError("unknown style_state", line);
    }
  }
  if (auto it = record.find("tokens"); it != record.end()) {
    if (!it->is_array()) throw ParseError("field \"tokens\" must be an array", line);
    for (const auto& tok : *it) {
      if (!tok.is_string()) throw ParseError("tokens must be strings", line);
      doc.tokens.push_back(tok.get<std::string>());
    }
  } else {
    doc.tokens = Tokenize(doc.raw_text);
  }
  if (auto it = record.find("replacements"); it != record.end()) {
    if (!it->is_array()) throw ParseError("field \"replacements\" must be an array", line);
    try {
      for (const auto& r : *it) {
        doc.replacements.push_back({r.at("position").get<std::size_t>(),
                                    r.at("original").get<std::string>(),
                                    r.at("chosen").get<std::string>(),
                                    r.at("similarity").get<double>()});
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad replacement entry: ") + e.what(), line);
    }
  }
  return doc;
}

}  // namespace

std::string_view ToString(GenderLabel label) {
  return label == GenderLabel::kMale ? "male" : "female";
}

std::string_view ToString(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "train";
}

std::string_view ToString(StyleState state) {
  return state == StyleState::kSource ? "source" : "transferred";
}

std::optional<GenderLabel> ParseGenderLabel(std::string_view text) {
  if (text == "male") return GenderLabel::kMale;
  if (text == "female") return GenderLabel::kFemale;
  return std::nullopt;
}

std::optional<Split> ParseSplit(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "dev") return Split::kDev;
  if (text == "test") return Split::kTest;
  return std::nullopt;
}

GenderLabel Opposite(GenderLabel label) {
  return label == GenderLabel::kMale ? GenderLabel::kFemale : GenderLabel::kMale;
}

std::size_t CorpusStats::total(GenderLabel label) const {
  const auto& row = counts[static_cast<int>(label)];
  return row[0] + row[1] + row[2];
}

CorpusStats ComputeStats(std::span<const Document> docs) {
  CorpusStats stats;
  for (const auto& d : docs) {
    ++stats.counts[static_cast<int>(d.label)][static_cast<int>(d.split)];
  }
  return stats;
}

std::vector<std::string> Tokenize(std::string_view text) {
  const std::u32string cps = utf8::Decode(text);
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (utf8::IsSpace(cp)) {
      flush();
    } else if (utf8::IsPunct(cp) || cp == 0x200C) {
      const bool joins = IsWordJoiner(cp) && !current.empty() && i + 1 < cps.size() &&
                         utf8::IsAlnum(cps[i + 1]);
      if (joins) {
        utf8::Append(current, cp);
      } else if (cp != 0x200C) {
        flush();
        std::string punct;
        utf8::Append(punct, cp);
        tokens.push_back(std::move(punct));
      } else {
        flush();
      }
    } else {
      utf8::Append(current, cp);
    }
  }
  flush();
  return tokens;
}

std::vector<Document> ParseJsonl(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_map<std::string, std::size_t> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line);
    }
    Document doc = ParseRecord(record, line);
    auto [it, inserted] = seen.emplace(doc.id, line);
    if (!inserted) {
      throw ValidationError("duplicate id \"" + doc.id + "\" (first seen on line " +
                                std::to_string(it->second) + ")",
                            line);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> LoadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return ParseJsonl(in);
}

std::string ToJsonLine(const Document& doc, std::optional<std::uint64_t> seed) {
  json record;
  record["id"] = doc.id;
  record["text"] = doc.raw_text;
  record["label"] = ToString(doc.label);
  record["split"] = ToString(doc.split);
  if (doc.style_state == StyleState::kTransferred) {
    record["style_state"] = "transferred";
    json reps = json::array();
    for (const auto& r : doc.replacements) {
      json entry;
      entry["position"] = r.position;
      entry["original"] = r.original;
      entry["chosen"] = r.chosen;
      entry["similarity"] = r.similarity;
      reps.push_back(std::move(entry));
    }
    record["replacements"] = std::move(reps);
  }
  if (doc.tokens != Tokenize(doc.raw_text)) record["tokens"] = doc.tokens;
  if (seed) record["seed"] = *seed;
  return record.dump(-1, ' ', false, json::error_handler_t::replace);
}

void WriteJsonl(std::ostream& out, std::span<const Document> docs,
                std::optional<std::uint64_t> seed) {
  for (const auto& d : docs) out << ToJsonLine(d, seed) << '\n';
}

StopwordSet ParseStopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t");
    words.insert(utf8::ToLower(line.substr(begin, end - begin + 1)));
  }
  return words;
}

StopwordSet LoadStopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file " + path.string());
  return ParseStopwords(in);
}

Document Preprocess(const Document& doc, const StopwordSet& stopwords) {
  Document out = doc;
  out.tokens.clear();
  for (const auto& tok : doc.tokens) {
    if (AllPunct(tok)) continue;
    std::string lowered = utf8::ToLower(tok);
    if (stopwords.contains(lowered)) continue;
    out.tokens.push_back(std::move(lowered));
  }
  return out;
}

std::vector<Document> SplitLongDocument(const Document& doc, std::size_t max_len) {
  if (max_len == 0) throw ContractError("max_len must be positive");
  std::vector<Document> parts;
  for (std::size_t begin = 0, ordinal = 0; begin < doc.tokens.size();
       begin += max_len, ++ordinal) {
    const std::size_t end = std::min(doc.tokens.size(), begin + max_len);
    Document part;
    part.id = doc.id + "#" + std::to_string(ordinal);
    part.tokens.assign(doc.tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                       doc.tokens.begin() + static_cast<std::ptrdiff_t>(end));
    part.raw_text = JoinTokens(part.tokens);
    part.label = doc.label;
    part.split = doc.split;
    part.style_state = doc.style_state;
    parts.push_back(std::move(part));
  }
  return parts;
}

std::vector<Document> FilterSplit(std::span<const Document> docs, Split split) {
  std::vector<Document> out;
  for (const auto& d : docs) {
    if (d.split == split) out.push_back(d);
  }
  return out;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> WithBoundaries(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size() + 2);
  if (tokens.empty() || tokens.front() != kStartTag) out.emplace_back(kStartTag);
  out.insert(out.end(), tokens.begin(), tokens.end());
  if (tokens.empty() || tokens.back() != kEndTag) out.emplace_back(kEndTag);
  return out;
}

}  // namespace lexstyle
