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

#include "cli.h"

#include <omp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexstyle/corpus.h"
#include "lexstyle/doc_classifier.h"
#include "lexstyle/embedding.h"
#include "lexstyle/errors.h"
#include "lexstyle/io.h"
#include "lexstyle/metrics.h"
#include "lexstyle/ngram.h"
#include "lexstyle/pos.h"
#include "lexstyle/stemmer.h"
#include "lexstyle/synthetic.h"
#include "lexstyle/token_classifier.h"
#include "lexstyle/transfer.h"

namespace lexstyle::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  bool desk_scale = false;
  int jobs = 0;
};

struct BuildLmOptions {
  std::string corpus, out, stopwords;
};

struct TrainDocOptions {
  std::string corpus, out, stopwords;
  std::optional<int> epochs;
};

struct TrainTokenOptions {
  std::string corpus, tokens, lexicon, out, stopwords;
  std::string tags = "adj,adv";
  std::optional<int> epochs;
};

struct TransferOptions {
  std::string input, embedding, lm, tokclf, lexicon, out, stopwords;
  std::string tags = "adj,adv,verb,noun";
  std::string target = "opposite";
  std::string fallback = "when-empty";
  std::string language = "en";
  std::size_t top_n = kDefaultTopN;
  std::size_t beam_width = 5;
};

struct EvalOptions {
  std::string source, transferred, docclf, lm, out, stopwords;
};

struct KappaOptions {
  std::string annotations;
  std::string facet = "all";
};

struct TTestOptions {
  std::string input;
  double mu0 = 0.0;
};

struct SynthOptions {
  std::string out;
};

std::vector<Document> LoadCorpus(const std::string& path, const std::string& stopwords_path) {
  auto docs = LoadJsonl(path);
  if (stopwords_path.empty()) return docs;
  const StopwordSet stopwords = LoadStopwords(stopwords_path);
  for (auto& doc : docs) doc = Preprocess(doc, stopwords);
  return docs;
}

std::vector<Document> TrainSplit(const std::vector<Document>& docs, const std::string& path) {
  auto train = FilterSplit(docs, Split::kTrain);
  if (train.empty()) throw DomainError(path + " has no train-split documents");
  return train;
}

void PrintLosses(std::ostream& out, const std::vector<double>& losses) {
  for (std::size_t e = 0; e < losses.size(); ++e) {
    out << "epoch " << (e + 1) << " loss " << std::setprecision(6) << losses[e] << '\n';
  }
}

int BuildLm(const GlobalOptions&, const BuildLmOptions& o, std::ostream& out) {
  const auto docs = LoadCorpus(o.corpus, o.stopwords);
  const NGramTable table = NGramTable::Build(TrainSplit(docs, o.corpus));
  WriteFileAtomically(o.out, [&](std::ostream& f) { table.WriteTsv(f); });
  out << "wrote " << o.out << ": " << table.distinct(1) << " unigrams, " << table.distinct(4)
      << " 4-grams\n";
  return kExitOk;
}

int TrainDoc(const GlobalOptions& g, const TrainDocOptions& o, std::ostream& out) {
  const auto docs = LoadCorpus(o.corpus, o.stopwords);
  nn::TrainConfig config = nn::TrainConfig::DocClassifier(g.desk_scale);
  config.seed = g.seed.value_or(kDefaultSeed);
  if (o.epochs) config.epochs = *o.epochs;
  const auto model = DocClassifierModel::Train(TrainSplit(docs, o.corpus), config);
  PrintLosses(out, model.epoch_losses());

  std::vector<Document> dev;
  for (const auto& d : FilterSplit(docs, Split::kDev)) {
    if (!d.degenerate()) dev.push_back(d);
  }
  if (!dev.empty()) out << "dev accuracy " << Evaluate(model, dev).accuracy << '\n';
  model.Save(o.out);
  return kExitOk;
}

int TrainToken(const GlobalOptions& g, const TrainTokenOptions& o, std::ostream& out) {
  TokenTrainingSet set;
  if (!o.tokens.empty()) {
    set = LoadTokenSet(o.tokens);
  } else {
    if (o.corpus.empty() || o.lexicon.empty()) {
      throw ContractError("train-token-clf needs --tokens, or --corpus with --lexicon");
    }
    const auto docs = LoadCorpus(o.corpus, o.stopwords);
    const LexiconTagger tagger = LexiconTagger::Load(o.lexicon);
    set = BuildTokenTrainingSet(TrainSplit(docs, o.corpus), tagger, TagScope::Parse(o.tags));
  }
  nn::TrainConfig config = nn::TrainConfig::TokenClassifier(g.desk_scale);
  config.seed = g.seed.value_or(kDefaultSeed);
  if (o.epochs) config.epochs = *o.epochs;
  const auto model = CharTokenModel::Train(set, config);
  PrintLosses(out, model.epoch_losses());
  model.Save(o.out);
  return kExitOk;
}

FallbackPolicy ParseFallback(const std::string& text) {
  if (text == "always") return FallbackPolicy::kAlways;
  if (text == "when-empty") return FallbackPolicy::kWhenEmpty;
  throw ContractError("unknown fallback policy \"" + text + "\"");
}

std::optional<GenderLabel> ParseTarget(const std::string& text) {
  if (text == "opposite") return std::nullopt;
  if (auto label = ParseGenderLabel(text)) return *label;
  throw ContractError("unknown target \"" + text + "\"");
}

int Transfer(const GlobalOptions& g, const TransferOptions& o, std::ostream& out) {
  const auto docs = LoadCorpus(o.input, o.stopwords);
  const NGramTable table = NGramTable::LoadTsv(o.lm);
  const EmbeddingStore store = EmbeddingStore::LoadVecText(o.embedding);
  const CharTokenModel token_model = CharTokenModel::Load(o.tokclf);
  const LexiconTagger tagger = LexiconTagger::Load(o.lexicon);
  const SuffixStemmer stemmer = SuffixStemmer::ForLanguage(o.language);

  TransferConfig config;
  config.top_n = o.top_n;
  config.beam_width = o.beam_width;
  config.scope = TagScope::Parse(o.tags);
  config.fallback = ParseFallback(o.fallback);
  const TransferEngine engine({&table, &store, &token_model, &tagger, &stemmer}, config);

  TransferEvents events;
  const auto transferred = engine.TransferCorpus(docs, ParseTarget(o.target), &events);
  const std::uint64_t seed = g.seed.value_or(kDefaultSeed);
  WriteFileAtomically(o.out, [&](std::ostream& f) { WriteJsonl(f, transferred, seed); });
  out << "documents " << events.documents << ", transferred " << events.transferred
      << ", passed through " << events.passed_through << ", degenerate " << events.degenerate
      << ", oov tokens " << events.oov_tokens << ", replacements " << events.replacements
      << '\n';
  return kExitOk;
}

int Eval(const GlobalOptions& g, const EvalOptions& o, std::ostream& out) {
  const auto source = LoadCorpus(o.source, o.stopwords);
  const auto transferred = LoadCorpus(o.transferred, o.stopwords);
  const DocClassifierModel model = DocClassifierModel::Load(o.docclf);

  if (source.size() != transferred.size()) {
    throw ValidationError(o.source + " and " + o.transferred + " differ in document count", 0);
  }
  std::vector<Document> src, dst;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i].degenerate() || transferred[i].degenerate()) continue;
    src.push_back(source[i]);
    dst.push_back(transferred[i]);
  }
  if (src.empty()) throw DomainError("no non-degenerate documents to evaluate");

  const ContingencySets sets = BuildContingency(model, src, dst);
  std::optional<NGramTable> table;
  if (!o.lm.empty()) table = NGramTable::LoadTsv(o.lm);
  EvaluationReport report = MakeEvaluationReport(sets, src, dst, table ? &*table : nullptr);
  report.seed = g.seed.value_or(kDefaultSeed);
  const std::string text = ToJson(report).dump(2) + "\n";
  WriteFileAtomically(o.out, [&](std::ostream& f) { f << text; });
  out << "trade-off " << report.trade_off << " (f=" << report.fooled
      << ", h=" << report.recovered << ", n=" << report.n << ")\n";
  return kExitOk;
}

int KappaCommand(const KappaOptions& o, std::ostream& out) {
  const auto records = LoadAnnotations(o.annotations);
  nlohmann::ordered_json result;
  if (o.facet == "all") {
    for (const char* name : {"fluency", "semantic", "adulteration"}) {
      try {
        result[name] = Kappa(records, *ParseFacet(name));
      } catch (const DomainError&) {
        result[name] = nullptr;
      }
    }
  } else {
    const auto facet = ParseFacet(o.facet);
    if (!facet) throw ContractError("unknown facet \"" + o.facet + "\"");
    result[o.facet] = Kappa(records, *facet);
  }
  out << result.dump() << '\n';
  return kExitOk;
}

// One pair per line: "before after", or a single difference.
std::vector<double> ReadDifferences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<double> diffs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<double> values;
    std::string field;
    while (fields >> field) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ParseError("non-numeric value \"" + field + "\"", line_no);
      }
      values.push_back(v);
    }
    if (values.size() == 1) {
      diffs.push_back(values[0]);
    } else if (values.size() == 2) {
      diffs.push_back(PairedSample{values[0], values[1]}.difference());
    } else {
      throw ParseError("expected one or two columns", line_no);
    }
  }
  return diffs;
}

int TTestCommand(const TTestOptions& o, std::ostream& out) {
  const auto diffs = ReadDifferences(o.input);
  const TTestResult r = PairedTTest(diffs, o.mu0);
  nlohmann::ordered_json j = {
      {"n", diffs.size()}, {"t", r.t}, {"df", r.df}, {"p_two_sided", r.p_two_sided}};
  out << j.dump() << '\n';
  return kExitOk;
}

int Synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out) {
  SyntheticConfig config;
  if (g.seed) config.seed = *g.seed;
  const SyntheticData data = GenerateSynthetic(config);
  WriteSynthetic(data, o.out);
  out << "wrote " << data.docs.size() << " documents and " << data.embeddings.size()
      << " vectors to " << o.out << '\n';
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lexical gender style transfer toolkit", "lexstyle"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed (default 42)")->envname("PGST_SEED");
  app.add_flag("--desk-scale", g.desk_scale, "Use the small hyperparameter profile");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);

  BuildLmOptions lm;
  auto* build_lm = app.add_subcommand("build-lm", "Count 1- to 4-grams of a training corpus");
  build_lm->add_option("--corpus", lm.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  build_lm->add_option("--out", lm.out, "Output TSV")->required();
  build_lm->add_option("--stopwords", lm.stopwords)->check(CLI::ExistingFile);

  TrainDocOptions td;
  auto* train_doc = app.add_subcommand("train-doc-clf", "Train the document gender classifier");
  train_doc->add_option("--corpus", td.corpus)->required()->check(CLI::ExistingFile);
  train_doc->add_option("--out", td.out)->required();
  train_doc->add_option("--stopwords", td.stopwords)->check(CLI::ExistingFile);
  train_doc->add_option("--epochs", td.epochs);

  TrainTokenOptions tt;
  auto* train_tok = app.add_subcommand("train-token-clf", "Train the character token classifier");
  train_tok->add_option("--corpus", tt.corpus)->check(CLI::ExistingFile);
  train_tok->add_option("--lexicon", tt.lexicon)->check(CLI::ExistingFile);
  train_tok->add_option("--tokens", tt.tokens, "token<TAB>label file")->check(CLI::ExistingFile);
  train_tok->add_option("--tags", tt.tags, "Tag scope, e.g. adj,adv");
  train_tok->add_option("--stopwords", tt.stopwords)->check(CLI::ExistingFile);
  train_tok->add_option("--out", tt.out)->required();
  train_tok->add_option("--epochs", tt.epochs);

  TransferOptions tr;
  auto* transfer = app.add_subcommand("transfer", "Rewrite documents toward a target style");
  transfer->add_option("--input", tr.input)->required()->check(CLI::ExistingFile);
  transfer->add_option("--embedding", tr.embedding)->required()->check(CLI::ExistingFile);
  transfer->add_option("--lm", tr.lm)->required()->check(CLI::ExistingFile);
  transfer->add_option("--tokclf", tr.tokclf)->required()->check(CLI::ExistingFile);
  transfer->add_option("--lexicon", tr.lexicon)->required()->check(CLI::ExistingFile);
  transfer->add_option("--stopwords", tr.stopwords)->check(CLI::ExistingFile);
  transfer->add_option("--tags", tr.tags);
  transfer->add_option("--topn", tr.top_n)->check(CLI::PositiveNumber);
  transfer->add_option("--beam-width", tr.beam_width)->check(CLI::PositiveNumber);
  transfer->add_option("--target", tr.target)
      ->check(CLI::IsMember({"male", "female", "opposite"}));
  transfer->add_option("--fallback", tr.fallback)->check(CLI::IsMember({"always", "when-empty"}));
  transfer->add_option("--language", tr.language)->check(CLI::IsMember({"en", "fa"}));
  transfer->add_option("--out", tr.out)->required();

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Score a transferred corpus against its source");
  eval->add_option("--source", ev.source)->required()->check(CLI::ExistingFile);
  eval->add_option("--transferred", ev.transferred)->required()->check(CLI::ExistingFile);
  eval->add_option("--docclf", ev.docclf)->required()->check(CLI::ExistingFile);
  eval->add_option("--lm", ev.lm)->check(CLI::ExistingFile);
  eval->add_option("--stopwords", ev.stopwords)->check(CLI::ExistingFile);
  eval->add_option("--out", ev.out)->required();

  KappaOptions ka;
  auto* kappa = app.add_subcommand("kappa", "Three-annotator agreement");
  kappa->add_option("--annotations", ka.annotations)->required()->check(CLI::ExistingFile);
  kappa->add_option("--facet", ka.facet)
      ->check(CLI::IsMember({"all", "fluency", "semantic", "adulteration"}));

  TTestOptions ts;
  auto* ttest = app.add_subcommand("ttest", "Paired t-test on before/after values");
  ttest->add_option("--input", ts.input)->required()->check(CLI::ExistingFile);
  ttest->add_option("--mu0", ts.mu0);

  SynthOptions sy;
  auto* synth = app.add_subcommand("synth", "Write the seeded synthetic corpus bundle");
  synth->add_option("--out", sy.out, "Output directory")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (g.jobs > 0) omp_set_num_threads(g.jobs);

  try {
    if (*build_lm) return BuildLm(g, lm, out);
    if (*train_doc) return TrainDoc(g, td, out);
    if (*train_tok) return TrainToken(g, tt, out);
    if (*transfer) return Transfer(g, tr, out);
    if (*eval) return Eval(g, ev, out);
    if (*kappa) return KappaCommand(ka, out);
    if (*ttest) return TTestCommand(ts, out);
    if (*synth) return Synth(g, sy, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace lexstyle::cli
