#include <algorithm>
#include <sstream>

#include "cnlwiki/ace/ace.hpp"
#include "cnlwiki/eval/eval.hpp"
#include "cnlwiki/semantics/mapper.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace cnlwiki::eval {

namespace {

// The meaning a reading contributes: its axiom or query, empty if none.
std::string meaning(const AbstractTree& t) {
  try {
    return "axiom " + semantics::treeToAxiom(t).str();
  } catch (const semantics::Unsupported&) {
  }
  try {
    return "query " + semantics::treeToQuery(t).str();
  } catch (const semantics::Unsupported&) {
  }
  return {};
}

bool harmless(const std::vector<AbstractTree>& trees) {
  std::string first = meaning(trees.front());
  if (first.empty()) return false;
  return std::all_of(trees.begin(), trees.end(), [&](const AbstractTree& t) { return meaning(t) == first; });
}

void countLengths(EvalReport& r, const std::vector<Tokens>& sentences) {
  r.sentences = sentences.size();
  for (const auto& s : sentences) ++r.sentenceCount[static_cast<int>(s.size())];
}

}  // namespace

EvalReport coverageReport(const CompiledGrammar& g, const std::string& lang, int maxTokens, int cap) {
  EvalReport r;
  r.language = lang;
  r.maxTokens = maxTokens;
  countLengths(r, enumerateSentences(g, lang, maxTokens, cap));
  return r;
}

EvalReport ambiguityReport(const CompiledGrammar& g, const std::string& lang, int maxTokens, int cap) {
  EvalReport r;
  r.language = lang;
  r.maxTokens = maxTokens;
  auto sentences = enumerateSentences(g, lang, maxTokens, cap);
  countLengths(r, sentences);

  std::vector<std::vector<AbstractTree>> parses(sentences.size());
  detail::parallelFor(sentences.size(), [&](std::size_t i) { parses[i] = grammar::parse(g, lang, sentences[i]); });

  std::size_t harmlessCount = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (parses[i].size() <= 1) continue;
    AmbiguousSentence a{sentences[i], parses[i], harmless(parses[i])};
    if (a.harmless) ++harmlessCount;
    r.ambiguousSentences.push_back(std::move(a));
  }
  r.ambiguous = r.ambiguousSentences.size();
  r.ambiguityRate = r.sentences ? static_cast<double>(r.ambiguous) / static_cast<double>(r.sentences) : 0.0;
  r.harmlessRate = r.ambiguous ? static_cast<double>(harmlessCount) / static_cast<double>(r.ambiguous) : 1.0;
  return r;
}

EvalReport roundTripCheck(const CompiledGrammar& g, const std::string& lang, int maxDepth) {
  if (maxDepth > kMaxRoundTripDepth) {
    throw CapExceeded("maxDepth " + std::to_string(maxDepth) + " exceeds the cap of " +
                      std::to_string(kMaxRoundTripDepth));
  }
  EvalReport r;
  r.language = lang;
  r.maxDepth = maxDepth;
  const auto& c = g.concrete(lang);

  std::vector<AbstractTree> trees;
  for (const auto& cat : g.abstract.startCategories()) {
    g.abstract.forEachTree(cat, maxDepth, [&](const AbstractTree& t) { trees.push_back(t); });
  }
  std::vector<char> failed(trees.size(), 0);
  std::vector<char> skipped(trees.size(), 0);
  detail::parallelFor(trees.size(), [&](std::size_t i) {
    const auto& t = trees[i];
    std::vector<Tokens> variants;
    try {
      variants = grammar::linearizeAll(g, lang, t);
    } catch (const grammar::MissingLinearization&) {
      skipped[i] = 1;
      return;
    }
    const std::string& term = c.terminators.at(g.abstract.typeOf(t));
    for (auto v : variants) {
      v.push_back(term);
      auto parses = grammar::parse(g, lang, v);
      if (std::find(parses.begin(), parses.end(), t) == parses.end()) {
        failed[i] = 1;
        return;
      }
    }
  });
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (skipped[i]) ++r.treesSkipped;
    else ++r.treesChecked;
    if (failed[i]) r.roundTripFailures.push_back(trees[i]);
  }
  return r;
}

std::string EvalReport::json() const {
  nlohmann::json j;
  j["language"] = language;
  if (maxTokens) j["maxTokens"] = maxTokens;
  if (maxDepth) j["maxDepth"] = maxDepth;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [len, n] : sentenceCount) counts[std::to_string(len)] = n;
  j["sentenceCount"] = counts;
  j["sentences"] = sentences;
  j["ambiguous"] = ambiguous;
  j["ambiguityRate"] = ambiguityRate;
  j["harmlessRate"] = harmlessRate;
  nlohmann::json amb = nlohmann::json::array();
  for (const auto& a : ambiguousSentences) {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : a.trees) trees.push_back(t.str());
    amb.push_back({{"sentence", ace::detokenize(a.tokens)}, {"trees", trees}, {"harmless", a.harmless}});
  }
  j["ambiguousSentences"] = amb;
  j["treesChecked"] = treesChecked;
  j["treesSkipped"] = treesSkipped;
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& t : roundTripFailures) failures.push_back(t.str());
  j["roundTripFailures"] = failures;
  return j.dump(2);
}

std::string EvalReport::summary() const {
  std::ostringstream out;
  out << "language " << language;
  if (maxTokens) out << ", up to " << maxTokens << " tokens";
  if (maxDepth) out << ", tree depth up to " << maxDepth;
  out << "\n";
  if (sentences || maxTokens) {
    out << "sentences: " << sentences << "\n";
    for (const auto& [len, n] : sentenceCount) out << "  length " << len << ": " << n << "\n";
    out << "ambiguous: " << ambiguous << " (rate " << ambiguityRate << ", harmless " << harmlessRate << ")\n";
    for (const auto& a : ambiguousSentences) {
      out << "  " << ace::detokenize(a.tokens) << " [" << a.trees.size() << " readings"
          << (a.harmless ? ", harmless" : "") << "]\n";
    }
  }
  if (maxDepth) {
    out << "trees checked: " << treesChecked << ", skipped: " << treesSkipped
        << ", round-trip failures: " << roundTripFailures.size() << "\n";
    for (const auto& t : roundTripFailures) out << "  " << t.str() << "\n";
  }
  return out.str();
}

}  // namespace cnlwiki::eval
