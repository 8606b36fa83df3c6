#include "cnlwiki/eval/eval.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace cnlwiki;
using testing::shipped;
using testing::toks;

namespace {

std::vector<grammar::ModuleText> withModule(const std::string& file, const std::string& text) {
  auto modules = ace::shippedModules();
  for (auto& m : modules) {
    if (m.name == file) m.text = text;
  }
  return modules;
}

std::vector<grammar::ModuleText> germanHomograph() {
  auto modules = ace::shippedModules();
  for (auto& m : modules) {
    if (m.name != "LexGer.gfs") continue;
    auto pos = m.text.find("lake_N = mkN \"See\" masculine ;");
    REQUIRE(pos != std::string::npos);
    m.text.replace(pos, std::string("lake_N = mkN \"See\" masculine ;").size(), "lake_N = mkN \"Land\" \"Länder\" neuter ;");
  }
  return modules;
}

}  // namespace

TEST_CASE("enumeration bounds") {
  CHECK(eval::enumerateSentences(shipped(), "ace", 0).empty());
  CHECK(eval::enumerateSentences(shipped(), "ace", 3).empty());
  CHECK_THROWS_AS(eval::enumerateSentences(shipped(), "ace", 11), eval::CapExceeded);
  CHECK_NOTHROW(eval::enumerateSentences(shipped(), "ace", 4, 4));
}

TEST_CASE("enumeration matches the tree-side oracle") {
  const auto& g = shipped();
  CHECK(eval::enumerateSentences(g, "ace", 5).size() == 450);
  for (const auto& lang : g.languageTags()) {
    INFO(lang);
    auto five = eval::enumerateSentences(g, lang, 5);
    auto oracle = testing::treeSideSentences(g, lang, 5);
    CHECK(std::set<grammar::Tokens>(five.begin(), five.end()) == oracle);
    CHECK(five.size() == oracle.size());
  }
}

TEST_CASE("enumeration is monotone in the bound") {
  const auto& g = shipped();
  for (const auto& lang : g.languageTags()) {
    auto prev = eval::enumerateSentences(g, lang, 4);
    for (int k = 5; k <= 8; ++k) {
      auto next = eval::enumerateSentences(g, lang, k);
      INFO(lang << " " << k);
      CHECK(std::includes(next.begin(), next.end(), prev.begin(), prev.end()));
      for (const auto& s : next) CHECK(static_cast<int>(s.size()) <= k);
      prev = std::move(next);
    }
  }
}

TEST_CASE("every enumerated sentence parses") {
  const auto& g = shipped();
  for (const auto& lang : g.languageTags()) {
    for (const auto& s : eval::enumerateSentences(g, lang, 8)) {
      if (grammar::parse(g, lang, s).empty()) FAIL(lang << ": " << ace::detokenize(s));
    }
  }
}

TEST_CASE("ACE has no ambiguous sentence up to 8 tokens") {
  auto r = eval::ambiguityReport(shipped(), "ace", 8);
  CHECK(r.sentences == 7941);
  CHECK(r.ambiguous == 0);
  CHECK(r.ambiguityRate == 0.0);
  CHECK(r.harmlessRate == 1.0);
}

TEST_CASE("a German homograph is detected as harmful ambiguity") {
  auto g = ace::compileModules(germanHomograph());
  auto r = eval::ambiguityReport(*g, "ger", 6);
  CHECK(r.ambiguous > 0);
  CHECK(r.ambiguityRate > 0.0);
  CHECK(r.ambiguityRate <= 1.0);
  CHECK(r.harmlessRate < 1.0);
  bool found = false;
  for (const auto& a : r.ambiguousSentences) {
    if (a.tokens == toks("jedes Land ist ein Land .")) {
      found = true;
      CHECK(a.trees.size() == 4);
      CHECK_FALSE(a.harmless);
    }
  }
  CHECK(found);
}

TEST_CASE("empty lexicons give no sentences") {
  auto modules = withModule("LexEng.gfs", "lexicon LexEng of AceEng ;\n");
  modules = [&] {
    for (auto& m : modules) {
      if (m.name == "LexGer.gfs") m.text = "lexicon LexGer of AceGer ;\n";
      if (m.name == "LexSpa.gfs") m.text = "lexicon LexSpa of AceSpa ;\n";
    }
    return modules;
  }();
  auto g = ace::compileModules(modules);
  CHECK_FALSE(g->warnings.empty());
  auto r = eval::ambiguityReport(*g, "ace", 8);
  CHECK(r.sentences == 0);
  CHECK(r.ambiguityRate == 0.0);
  CHECK(r.harmlessRate == 1.0);
}

TEST_CASE("round trip reports") {
  const auto& g = shipped();
  auto zero = eval::roundTripCheck(g, "ace", 0);
  CHECK(zero.treesChecked == 0);
  CHECK(zero.roundTripFailures.empty());
  for (const auto& lang : g.languageTags()) {
    auto r = eval::roundTripCheck(g, lang, 3);
    CHECK(r.treesChecked == 1056);
    CHECK(r.roundTripFailures.empty());
  }
  CHECK_THROWS_AS(eval::roundTripCheck(g, "ace", 6), eval::CapExceeded);
}

TEST_CASE("the asymmetry rule round-trips in every language") {
  const auto& g = shipped();
  auto t = grammar::AbstractTree::parse(testing::kAsymmetryTree);
  for (const auto& lang : g.languageTags()) {
    auto parses = grammar::parse(g, lang, grammar::linearizeSentence(g, lang, t));
    CHECK(std::find(parses.begin(), parses.end(), t) != parses.end());
  }
}

TEST_CASE("report serialization") {
  auto r = eval::coverageReport(shipped(), "ace", 5);
  auto j = nlohmann::json::parse(r.json());
  CHECK(j["language"] == "ace");
  CHECK(j["sentences"] == 450);
  CHECK(j["sentenceCount"]["4"] == 90);
  CHECK(j["sentenceCount"]["5"] == 360);
  CHECK(r.summary().find("sentences: 450") != std::string::npos);
}
