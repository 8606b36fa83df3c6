#include <algorithm>

#include "cnlwiki/eval/eval.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cnlwiki;
using grammar::AbstractTree;
using testing::shipped;
using testing::toks;

namespace {

std::vector<grammar::ModuleText> shippedWith(const std::string& file, const std::string& from, const std::string& to) {
  auto modules = ace::shippedModules();
  for (auto& m : modules) {
    if (m.name == file) {
      auto pos = m.text.find(from);
      REQUIRE(pos != std::string::npos);
      m.text.replace(pos, from.size(), to);
    }
  }
  return modules;
}

std::string allDiagnostics(const grammar::CompileError& e) {
  std::string out;
  for (const auto& d : e.diagnostics()) out += d.str() + "\n";
  return out;
}

const char* const kMiniAbstract = R"(abstract Mini = {
  flags startcat = S ;
  cat S ; NP ;
  fun
    pred : NP -> S ;
    a, b : NP ;
}
)";

const char* const kMiniConcrete = R"(concrete MiniEng of Mini = {
  flags lang = "eng" ;
  lincat S, NP = {s : Str} ;
  lin
    pred x = {s = x.s ++ ("runs" | "sprints")} ;
    a = {s = "Ann"} ;
    b = {s = "Bob"} ;
  punct S = "." ;
}
)";

grammar::GrammarPtr mini() { return ace::compileModules({{"Mini.gfs", kMiniAbstract}, {"MiniEng.gfs", kMiniConcrete}}); }

}  // namespace

TEST_CASE("shipped grammar compiles with three languages") {
  const auto& g = shipped();
  CHECK(g.languageTags() == std::vector<std::string>{"ace", "ger", "spa"});
  CHECK(g.warnings.empty());
  for (const auto& tag : g.languageTags()) {
    const auto& c = g.concrete(tag);
    for (std::size_t f = 0; f < g.abstract.functions().size(); ++f) {
      INFO(tag << " " << g.abstract.functions()[f].name);
      CHECK(c.hasProductions(static_cast<int>(f)));
    }
  }
}

TEST_CASE("German nouns carry 8 string fields and split on gender") {
  const auto& c = shipped().concrete("ger");
  const auto& ns = c.categoriesOf.at("N");
  CHECK(ns.size() == 3);
  for (int id : ns) {
    const auto& cat = c.categories[static_cast<std::size_t>(id)];
    CHECK(cat.fieldCount() == 8);
    REQUIRE(cat.inherent.size() == 1);
    CHECK(cat.inherent[0].first == "g");
  }
}

TEST_CASE("everyNP has one production per productive CN parameter combination") {
  // English CN splits on a/an; no shipped noun starts with a vowel, so the
  // An half is unproductive and pruned.
  const auto& g = shipped();
  int fun = g.abstract.index("everyNP");
  for (const auto& tag : g.languageTags()) {
    const auto& c = g.concrete(tag);
    auto productive = std::count_if(c.categoriesOf.at("CN").begin(), c.categoriesOf.at("CN").end(),
                                    [&](int id) { return !c.productionsOfCategory[static_cast<std::size_t>(id)].empty(); });
    INFO(tag);
    CHECK(c.productionsOfFunction[static_cast<std::size_t>(fun)].size() == static_cast<std::size_t>(productive));
  }
  CHECK(g.concrete("ace").categoriesOf.at("CN").size() == 2);
}

TEST_CASE("missing lin is a compile error naming the function") {
  auto modules = shippedWith("AceEng.gfs", "    v2VP v np = {pos = v.s3 ++ np.s ; neg = \"does not\" ++ v.inf ++ np.s} ;\n", "");
  try {
    ace::compileModules(modules);
    FAIL("expected a compile error");
  } catch (const grammar::CompileError& e) {
    CHECK(allDiagnostics(e).find("missing lin for v2VP") != std::string::npos);
  }
}

TEST_CASE("compile errors carry module and line") {
  auto modules = shippedWith("AceEng.gfs", "    noNP cn = {s = \"no\" ++ cn.s} ;", "    noNP cn = {s = \"no\" ++ cn.t} ;");
  try {
    ace::compileModules(modules);
    FAIL("expected a compile error");
  } catch (const grammar::CompileError& e) {
    REQUIRE_FALSE(e.diagnostics().empty());
    CHECK(e.diagnostics()[0].module == "AceEng");
    CHECK(e.diagnostics()[0].line == 18);
  }
}

TEST_CASE("non-exhaustive table is rejected") {
  auto modules = shippedWith("AceEng.gfs", "case cn.a of {A => \"a\" ; An => \"an\"} ++ cn.s} ;", "case cn.a of {A => \"a\"} ++ cn.s} ;");
  CHECK_THROWS_AS(ace::compileModules(modules), grammar::CompileError);
}

TEST_CASE("syntax error is rejected") {
  auto modules = shippedWith("AceEng.gfs", "{s = \"every\" ++ cn.s}", "{s = \"every\" ++ ++ cn.s}");
  CHECK_THROWS_AS(ace::compileModules(modules), grammar::CompileError);
}

TEST_CASE("asymmetry rule linearizations") {
  const auto& g = shipped();
  auto t = AbstractTree::parse(testing::kAsymmetryTree);
  CHECK(t.str() == testing::kAsymmetryTree);
  CHECK(grammar::linearize(g, "ace", t) == toks("if X contains Y then Y does not contain X"));
  CHECK(grammar::linearize(g, "ger", t) == toks("wenn X Y enthält , dann enthält Y X nicht"));
  CHECK(grammar::linearize(g, "spa", t) == toks("si X contiene Y entonces Y no contiene X"));
  CHECK(grammar::linearizeSentence(g, "ace", t).back() == ".");
}

TEST_CASE("the asymmetry rule parses to exactly its tree") {
  const auto& g = shipped();
  auto t = AbstractTree::parse(testing::kAsymmetryTree);
  for (const auto& [lang, text] : std::vector<std::pair<std::string, std::string>>{
           {"ace", "if X contains Y then Y does not contain X"},
           {"ger", "wenn X Y enthält , dann enthält Y X nicht"},
           {"spa", "si X contiene Y entonces Y no contiene X"}}) {
    INFO(lang);
    CHECK(grammar::parse(g, lang, toks(text)) == std::vector<AbstractTree>{t});
    CHECK(grammar::parse(g, lang, toks(text + " .")) == std::vector<AbstractTree>{t});
    CHECK(grammar::parse(g, lang, toks(text + " ?")).empty());
  }
}

TEST_CASE("ungrammatical and unknown tokens parse to nothing") {
  const auto& g = shipped();
  CHECK(grammar::parse(g, "ace", toks("contains X if")).empty());
  CHECK(grammar::parse(g, "ace", toks("Germany is a zebra .")).empty());
  CHECK(grammar::parse(g, "ace", {}).empty());
  CHECK(grammar::complete(g, "ace", toks("Germany is a zebra")).empty());
}

TEST_CASE("completion examples") {
  const auto& g = shipped();
  auto every = grammar::complete(g, "ace", toks("every"));
  CHECK(every == std::set<std::string>{"country", "lake", "person"});

  auto start = grammar::complete(g, "ace", {});
  for (const char* tok : {"every", "a", "no", "if", "Germany", "France", "John", "who", "which", "X", "Y"}) {
    INFO(tok);
    CHECK(start.count(tok) == 1);
  }
  CHECK(grammar::complete(g, "ace", toks("if X contains Y then Y does not contain X")) == std::set<std::string>{"."});
  CHECK(grammar::complete(g, "ace", toks("if X contains Y then Y does not contain X .")).empty());
}

TEST_CASE("longest viable prefix") {
  const auto& g = shipped();
  CHECK(grammar::longestViablePrefix(g, "ace", toks("Germany borders borders France .")) == 2);
  CHECK(grammar::longestViablePrefix(g, "ace", toks("Germany borders France .")) == 4);
  CHECK(grammar::longestViablePrefix(g, "ace", toks("zebra")) == 0);
}

TEST_CASE("translation") {
  const auto& g = shipped();
  CHECK(grammar::translate(g, "ace", "ger", toks("if X contains Y then Y does not contain X")) ==
        std::set<grammar::Tokens>{toks("wenn X Y enthält , dann enthält Y X nicht")});
  CHECK(grammar::translate(g, "ger", "ace", toks("wenn X Y enthält , dann enthält Y X nicht")) ==
        std::set<grammar::Tokens>{toks("if X contains Y then Y does not contain X")});
  auto s = toks("every country that borders France is bordered by a lake");
  CHECK(grammar::translate(g, "ace", "ace", s) == std::set<grammar::Tokens>{s});
  CHECK(grammar::translate(g, "ace", "spa", toks("borders Germany")).empty());
}

TEST_CASE("bracketed linearization") {
  const auto& g = shipped();
  auto t = AbstractTree::parse(testing::kAsymmetryTree);
  CHECK(grammar::linearizeBracketed(g, "ace", t) ==
        toks("if [ X ] [ contains [ Y ] ] then [ Y ] [ does not contain [ X ] ]"));
}

TEST_CASE("bracketing separates the trees of a structurally ambiguous sentence") {
  const auto& g = shipped();
  auto trees = grammar::parse(g, "ace", toks("Germany is a country that borders a lake that contains France ."));
  REQUIRE(trees.size() == 2);
  auto first = grammar::linearizeBracketed(g, "ace", trees[0]);
  auto second = grammar::linearizeBracketed(g, "ace", trees[1]);
  CHECK(first != second);
  CHECK(grammar::linearize(g, "ace", trees[0]) == grammar::linearize(g, "ace", trees[1]));
}

TEST_CASE("bracketing is injective over depth-3 trees sharing a plain linearization") {
  const auto& g = shipped();
  for (const auto& lang : g.languageTags()) {
    std::map<grammar::Tokens, std::set<grammar::Tokens>> bracketsByText;
    std::map<grammar::Tokens, int> treesByText;
    for (const auto& cat : g.abstract.startCategories()) {
      g.abstract.forEachTree(cat, 3, [&](const AbstractTree& t) {
        auto plain = grammar::linearize(g, lang, t);
        bracketsByText[plain].insert(grammar::linearizeBracketed(g, lang, t));
        ++treesByText[plain];
      });
    }
    for (const auto& [text, n] : treesByText) {
      INFO(lang << ": " << ace::detokenize(text));
      CHECK(bracketsByText[text].size() == static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("variants: first is canonical, all are parsed") {
  auto g = mini();
  AbstractTree t("pred", {AbstractTree("a")});
  CHECK(grammar::linearize(*g, "eng", t) == toks("Ann runs"));
  auto all = grammar::linearizeAll(*g, "eng", t);
  CHECK(all == std::vector<grammar::Tokens>{toks("Ann runs"), toks("Ann sprints")});
  CHECK(grammar::parse(*g, "eng", toks("Ann sprints .")) == std::vector<AbstractTree>{t});
  CHECK(grammar::complete(*g, "eng", toks("Bob")) == std::set<std::string>{"runs", "sprints"});
}

TEST_CASE("shipped grammars have no variants up to depth 3") {
  const auto& g = shipped();
  for (const auto& lang : g.languageTags()) {
    for (const auto& cat : g.abstract.startCategories()) {
      g.abstract.forEachTree(cat, 3, [&](const AbstractTree& t) {
        if (grammar::linearizeAll(g, lang, t).size() != 1) FAIL(lang << " " << t.str());
      });
    }
  }
}

TEST_CASE("parse soundness: every parse relinearizes to the input") {
  const auto& g = shipped();
  for (const auto& lang : g.languageTags()) {
    for (const auto& s : eval::enumerateSentences(g, lang, 7)) {
      auto trees = grammar::parse(g, lang, s);
      REQUIRE_FALSE(trees.empty());
      grammar::Tokens plain(s.begin(), s.end() - 1);
      for (const auto& t : trees) {
        auto all = grammar::linearizeAll(g, lang, t);
        CHECK(std::find(all.begin(), all.end(), plain) != all.end());
      }
    }
  }
}

TEST_CASE("round trip over depth-3 trees in all languages") {
  const auto& g = shipped();
  for (const auto& lang : g.languageTags()) {
    for (const auto& cat : g.abstract.startCategories()) {
      g.abstract.forEachTree(cat, 3, [&](const AbstractTree& t) {
        auto parses = grammar::parse(g, lang, grammar::linearizeSentence(g, lang, t));
        if (std::find(parses.begin(), parses.end(), t) == parses.end()) FAIL(lang << " " << t.str());
      });
    }
  }
}

TEST_CASE("completion agrees with brute force on every prefix of short sentences") {
  // The oracle bound is far above the prefix bound; the stability check
  // shows one token less would not change any expected set.
  const auto& g = shipped();
  for (const auto& lang : g.languageTags()) {
    auto big = eval::enumerateSentences(g, lang, 11, 11);
    auto smaller = eval::enumerateSentences(g, lang, 10);
    std::set<grammar::Tokens> oracle(big.begin(), big.end());
    std::set<grammar::Tokens> oracleSmaller(smaller.begin(), smaller.end());
    std::set<grammar::Tokens> prefixes;
    for (const auto& s : eval::enumerateSentences(g, lang, 6)) {
      for (std::size_t n = 0; n < s.size(); ++n) prefixes.insert(grammar::Tokens(s.begin(), s.begin() + static_cast<long>(n)));
    }
    for (const auto& p : prefixes) {
      INFO(lang << ": " << ace::detokenize(p));
      auto expected = testing::nextTokens(oracle, p);
      CHECK(expected == testing::nextTokens(oracleSmaller, p));
      CHECK(grammar::complete(g, lang, p) == expected);
    }
  }
}

TEST_CASE("linearize rejects stale and ill-typed trees") {
  const auto& g = shipped();
  CHECK_THROWS_AS(grammar::linearize(g, "ace", AbstractTree::parse("vpS (pnNP atlantis_PN) (isaVP (useN country_N))")),
                  grammar::IllTypedTree);
  CHECK_THROWS_AS(grammar::linearize(g, "ace", AbstractTree::parse("vpS (useN country_N) (isaVP (useN country_N))")),
                  grammar::IllTypedTree);
  CHECK_THROWS_AS(grammar::linearize(g, "xx", AbstractTree::parse(testing::kAsymmetryTree)), grammar::UnknownLanguage);
}

TEST_CASE("tree text round trip and syntax errors") {
  auto t = AbstractTree::parse(testing::kAsymmetryTree);
  CHECK(AbstractTree::parse(t.str()) == t);
  CHECK_THROWS_AS(AbstractTree::parse("vpS (pnNP"), grammar::TreeSyntaxError);
  CHECK_THROWS_AS(AbstractTree::parse(""), grammar::TreeSyntaxError);
}

TEST_CASE("linearize is deterministic") {
  const auto& g = shipped();
  auto t = AbstractTree::parse(testing::kAsymmetryTree);
  CHECK(grammar::linearize(g, "ger", t) == grammar::linearize(g, "ger", t));
  auto g2 = ace::compileShipped();
  CHECK(grammar::linearize(*g2, "ger", t) == grammar::linearize(g, "ger", t));
}
