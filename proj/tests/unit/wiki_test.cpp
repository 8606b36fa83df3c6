#include <doctest.h>

#include <algorithm>
#include <thread>

#include "cnlwiki/ace/ace.hpp"
#include "cnlwiki/wiki/wiki.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace cnlwiki;
using namespace cnlwiki::wiki;
using testing::TempDir;
using testing::toks;

namespace {

std::string shippedModule(const std::string& file) {
  for (const auto& m : ace::shippedModules()) {
    if (m.name == file) return m.text;
  }
  FAIL("no shipped module " << file);
  return {};
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::string dropLine(const std::string& text, const std::string& prefix) {
  auto at = text.find(prefix);
  REQUIRE(at != std::string::npos);
  auto end = text.find('\n', at);
  return text.substr(0, at) + text.substr(end + 1);
}

const Entry& entry(const Snapshot& s, const std::string& id) {
  const Entry* e = s.findEntry(id);
  REQUIRE(e != nullptr);
  return *e;
}

std::vector<std::string> idsWith(const RevalidationReport& r, EntryRevalidation::Outcome o) {
  std::vector<std::string> out;
  for (const auto& e : r.entries) {
    if (e.outcome == o) out.push_back(e.entryId);
  }
  return out;
}

}  // namespace

TEST_CASE("demo store") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), true);
  auto s = w->snapshot();
  const auto& geo = s->articles.at("geography");
  CHECK(geo.entries.size() == demoSentences().size());

  std::size_t lexical = 0;
  for (const auto& f : s->grammar->abstract.functions()) {
    if (!f.lexical) continue;
    ++lexical;
    REQUIRE(s->articles.count(f.name));
    CHECK(s->articles.at(f.name).kind == Article::Kind::Entity);
  }
  CHECK(lexical == 9);

  const auto& rule = entry(*s, "e4");
  REQUIRE(rule.trees.size() == 1);
  CHECK(rule.trees[0].str() == testing::kAsymmetryTree);
  CHECK(s->status.at("e4").kind == SemanticStatus::Kind::Included);
  CHECK(s->status.at("e4").axiom->str() == "Asymmetric(contain)");
  CHECK(s->kb.consistent == reasoner::Verdict::Yes);

  for (const auto& lang : {"ace", "ger", "spa"}) {
    auto r = renderArticle(*s, "geography", lang);
    CHECK(r.entries.size() == geo.entries.size());
  }
  CHECK(renderArticle(*s, "geography", "ger").entries[3].readings ==
        std::vector<std::string>{"wenn X Y enthält , dann enthält Y X nicht ."});
}

TEST_CASE("demo question is answered in every language") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), true);
  auto s = w->snapshot();
  const auto& q = entry(*s, "e6");
  CHECK(q.kind == EntryKind::Question);
  REQUIRE(s->kb.answers.count("e6"));
  CHECK(s->kb.answers.at("e6").individuals == std::set<std::string>{"germany"});
  CHECK(renderEntry(*s, q, "ace").answers == std::vector<std::string>{"Germany"});
  CHECK(renderEntry(*s, q, "ger").answers == std::vector<std::string>{"Deutschland"});
  CHECK(renderEntry(*s, q, "spa").answers == std::vector<std::string>{"Alemania"});
  CHECK(query(*s, "ger", toks("welches Land begrenzt Frankreich ?")) == std::set<std::string>{"germany"});
}

TEST_CASE("adding entries") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), false);

  auto e = w->addEntry("notes", "ger", toks("jedes Land ist ein Land ."));
  auto s = w->snapshot();
  CHECK(e.sourceLanguage == "ger");
  CHECK(s->status.at(e.id).kind == SemanticStatus::Kind::Included);
  CHECK(s->status.at(e.id).axiom->str() == "SubClassOf(country, country)");
  CHECK(renderEntry(*s, e, "ace").links == std::vector<std::string>{"country_N"});
  CHECK(renderEntry(*s, e, "ace").readings == std::vector<std::string>{"every country is a country ."});

  SUBCASE("rejected sentences carry the viable prefix and its completions") {
    try {
      w->addEntry("notes", "ace", toks("every country borders ."));
      FAIL("accepted");
    } catch (const ParseRejected& r) {
      CHECK(r.prefix() == Tokens{"every", "country", "borders"});
      CHECK(r.completions().count("France"));
      CHECK(r.completions().count("a"));
      CHECK_FALSE(r.completions().count("."));
    }
    CHECK(w->snapshot()->generation == s->generation);
  }
  SUBCASE("bad requests") {
    CHECK_THROWS_AS(w->addEntry("notes", "fra", toks("Germany is a country .")), BadRequest);
    CHECK_THROWS_AS(w->addEntry("../x", "ace", toks("Germany is a country .")), BadRequest);
    CHECK_THROWS_AS(w->addEntry("LexEng", "ace", toks("Germany is a country .")), BadRequest);
    CHECK_THROWS_AS(w->deleteEntry("e999"), NotFound);
    CHECK_THROWS_AS(w->disambiguate("e999", 0), NotFound);
    CHECK_THROWS_AS(w->disambiguate(e.id, 3), BadRequest);
  }
}

TEST_CASE("comments are kept verbatim and carry no semantics") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), false);
  auto c = w->addComment("notes", "Needs a source.");
  auto s = w->snapshot();
  CHECK(s->status.at(c.id).kind == SemanticStatus::Kind::Comment);
  CHECK(renderEntry(*s, c, "spa").readings == std::vector<std::string>{"Needs a source."});
  CHECK(s->kb.kb.axioms.empty());
  CHECK_THROWS_AS(w->disambiguate(c.id, 0), BadRequest);
}

TEST_CASE("asymmetry clash names exactly the conflicting entries") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), false);
  auto rule = w->addEntry("geo", "ace", toks("if X contains Y then Y does not contain X ."));
  auto a = w->addEntry("geo", "ace", toks("Germany contains France ."));
  w->addEntry("geo", "ace", toks("Germany is a country ."));
  CHECK(w->snapshot()->kb.consistent == reasoner::Verdict::Yes);
  auto b = w->addEntry("geo", "spa", toks("Francia contiene Alemania ."));

  auto s = w->snapshot();
  CHECK(s->kb.consistent == reasoner::Verdict::No);
  auto conflict = s->kb.conflict;
  std::sort(conflict.begin(), conflict.end());
  std::vector<std::string> expected{rule.id, a.id, b.id};
  std::sort(expected.begin(), expected.end());
  CHECK(conflict == expected);
  CHECK_FALSE(s->kb.taxonomy.has_value());

  w->deleteEntry(a.id);
  CHECK(w->snapshot()->kb.consistent == reasoner::Verdict::Yes);
  CHECK(w->snapshot()->kb.conflict.empty());
}

TEST_CASE("questions against an inconsistent knowledge base") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), false);
  w->addEntry("geo", "ace", toks("Germany does not border France ."));
  w->addEntry("geo", "ace", toks("Germany borders France ."));
  auto s = w->snapshot();
  CHECK(s->kb.consistent == reasoner::Verdict::No);
  CHECK_THROWS_AS(query(*s, "ace", toks("which country borders France ?")), KbInconsistent);
  CHECK_THROWS_AS(query(*s, "ace", toks("Germany borders France .")), BadRequest);
}

TEST_CASE("empty wiki") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), false);
  auto s = w->snapshot();
  CHECK(s->kb.kb.axioms.empty());
  CHECK(s->kb.consistent == reasoner::Verdict::Yes);
  REQUIRE(s->kb.taxonomy.has_value());
  CHECK(query(*s, "ace", toks("which country borders France ?")).empty());
}

TEST_CASE("homograph lexicon edit makes an entry ambiguous and excluded") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), false);
  auto e = w->addEntry("notes", "ger", toks("jedes Land ist ein Land ."));
  auto edit = replaced(shippedModule("LexGer.gfs"), "lake_N = mkN \"See\" masculine ;",
                       "lake_N = mkN \"Land\" \"Länder\" neuter ;");
  auto report = w->editLexicon("ger", edit);

  REQUIRE(report.entries.size() == 1);
  const auto& r = report.entries[0];
  CHECK(r.outcome == EntryRevalidation::Outcome::AmbiguityChanged);
  REQUIRE(r.ambiguity.size() == 1);
  CHECK(r.ambiguity[0].language == "ger");
  CHECK(r.ambiguity[0].before == 1);
  CHECK(r.ambiguity[0].after == 4);

  // The stored tree set is the one parsed at entry time; new sentences see
  // the homograph.
  auto s = w->snapshot();
  CHECK(entry(*s, e.id).trees.size() == 1);
  auto f = w->addEntry("notes", "ger", toks("jedes Land ist ein Land ."));
  s = w->snapshot();
  CHECK(entry(*s, f.id).trees.size() == 4);
  CHECK(s->status.at(f.id).kind == SemanticStatus::Kind::Excluded);
  CHECK(renderEntry(*s, entry(*s, f.id), "ger").ambiguous);
  CHECK(renderEntry(*s, entry(*s, f.id), "ace").readings.size() == 4);

  auto kept = w->disambiguate(f.id, 1);
  CHECK(kept.trees.size() == 1);
  CHECK(w->snapshot()->status.at(f.id).kind == SemanticStatus::Kind::Included);
}

TEST_CASE("additive lexicon edit invalidates nothing") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), true);
  auto edit = replaced(shippedModule("LexGer.gfs"), "mkPN \"Johann\"", "mkPN \"Hans\"");
  auto report = w->editLexicon("ger", edit);
  CHECK(idsWith(report, EntryRevalidation::Outcome::Invalidated).empty());
  CHECK(idsWith(report, EntryRevalidation::Outcome::Restored).empty());
  CHECK(renderEntry(*w->snapshot(), entry(*w->snapshot(), "e5"), "ger").readings ==
        std::vector<std::string>{"Hans ist eine Person ."});
}

TEST_CASE("removing a word invalidates exactly its entries and re-adding restores them") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), true);
  w->addEntry("lakes", "ace", toks("every lake contains France ."));
  auto before = testing::treeBytes(dir.path() / "articles");

  // A word stays in the vocabulary while any lexicon still defines it.
  auto eng = w->editLexicon("ace", dropLine(shippedModule("LexEng.gfs"), "contain_V2"));
  CHECK(idsWith(eng, EntryRevalidation::Outcome::Invalidated).empty());
  CHECK(renderEntry(*w->snapshot(), entry(*w->snapshot(), "e4"), "ace").note == "No ace word for contain_V2 yet.");
  CHECK(idsWith(w->editLexicon("ger", dropLine(shippedModule("LexGer.gfs"), "contain_V2")),
                EntryRevalidation::Outcome::Invalidated)
            .empty());

  auto removed = w->editLexicon("spa", dropLine(shippedModule("LexSpa.gfs"), "contain_V2"));
  auto invalid = idsWith(removed, EntryRevalidation::Outcome::Invalidated);
  CHECK(invalid == std::vector<std::string>{"e4", "e7"});
  auto s = w->snapshot();
  for (const auto& id : invalid) {
    CHECK(s->status.at(id).kind == SemanticStatus::Kind::Invalid);
    CHECK(s->status.at(id).missing == std::vector<std::string>{"contain_V2"});
    CHECK(renderEntry(*s, entry(*s, id), "ger").note.find("contain_V2") != std::string::npos);
  }
  CHECK(s->status.at("e3").kind == SemanticStatus::Kind::Included);
  CHECK(s->kb.kb.axioms.size() == 4);
  CHECK(testing::treeBytes(dir.path() / "articles") == before);

  auto restored = w->editLexicon("ger", shippedModule("LexGer.gfs"));
  CHECK(idsWith(restored, EntryRevalidation::Outcome::Restored) == invalid);
  CHECK(idsWith(restored, EntryRevalidation::Outcome::Invalidated).empty());
  s = w->snapshot();
  CHECK(s->status.at("e4").axiom->str() == "Asymmetric(contain)");
  CHECK(renderEntry(*s, entry(*s, "e4"), "ger").readings ==
        std::vector<std::string>{"wenn X Y enthält , dann enthält Y X nicht ."});
  CHECK(testing::treeBytes(dir.path() / "articles") == before);
}

TEST_CASE("rejected grammar edits leave the store byte-identical") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), true);
  auto before = testing::treeBytes(dir.path());
  auto generation = w->snapshot()->generation;

  auto broken = replaced(shippedModule("LexGer.gfs"), "mkN \"See\" masculine", "mkN \"See\" plural");
  CHECK_THROWS_AS(w->editLexicon("ger", broken), GrammarRejected);
  CHECK_THROWS_AS(w->editModule("Ace", shippedModule("Ace.gfs")), GrammarRejected);
  CHECK_THROWS_AS(w->editModule("LexGer", shippedModule("LexEng.gfs")), GrammarRejected);
  CHECK_THROWS_AS(w->editModule("AceGer", "concrete AceGer of Ace = { lincat S = ; }"), GrammarRejected);
  CHECK_THROWS_AS(w->editModule("Nope", "x"), NotFound);
  CHECK_THROWS_AS(w->editLexicon("fra", "x"), NotFound);

  CHECK(testing::treeBytes(dir.path()) == before);
  CHECK(w->snapshot()->generation == generation);
  try {
    w->editLexicon("ger", broken);
  } catch (const GrammarRejected& e) {
    REQUIRE_FALSE(e.diagnostics().empty());
    CHECK(e.diagnostics()[0].module == "LexGer");
  }
}

TEST_CASE("reopening a store preserves articles, ids and generation") {
  TempDir dir;
  long generation = 0;
  {
    auto w = Wiki::create(dir.path(), true);
    w->addComment("geography", "A comment.");
    w->deleteEntry("e2");
    generation = w->snapshot()->generation;
  }
  auto w = Wiki::open(dir.path());
  auto s = w->snapshot();
  CHECK(s->generation == generation);
  CHECK(s->findEntry("e2") == nullptr);
  CHECK(s->articles.at("geography").entries.size() == demoSentences().size());
  auto e = w->addEntry("geography", "ace", toks("France is a country ."));
  CHECK(e.id == "e8");
  CHECK_THROWS(Wiki::create(dir.path(), false));
  TempDir empty;
  CHECK_THROWS(Wiki::open(empty.path()));
}

TEST_CASE("stored articles hold trees, never surface text") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), true);
  w->addEntry("geography", "ger", toks("Johann mag Frankreich ."));
  for (const auto& [file, bytes] : testing::treeBytes(dir.path() / "articles")) {
    auto j = nlohmann::json::parse(bytes);
    for (const auto& e : j.at("entries")) {
      CHECK_FALSE(e.contains("text"));
      for (const auto& t : e.at("trees")) {
        // trees are made of function names only
        auto s = t.get<std::string>();
        CHECK(s.find("Frankreich") == std::string::npos);
        CHECK(s.find("France") == std::string::npos);
      }
    }
  }
}

TEST_CASE("entries are language-neutral") {
  // The same content typed in any language yields the same trees and status.
  TempDir dir;
  auto w = Wiki::create(dir.path(), false);
  auto a = w->addEntry("x", "ace", toks("every lake borders a country that contains John ."));
  auto s = w->snapshot();
  for (const auto& lang : {"ger", "spa"}) {
    auto text = renderEntry(*s, a, lang).readings.at(0);
    auto b = w->addEntry("x", lang, toks(text));
    auto now = w->snapshot();
    CHECK(b.trees == a.trees);
    CHECK(now->status.at(b.id).axiom->str() == now->status.at(a.id).axiom->str());
  }
}

TEST_CASE("links point at existing entity articles") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), true);
  auto s = w->snapshot();
  for (const auto& [name, a] : s->articles) {
    for (const auto& e : a.entries) {
      for (const auto& link : renderEntry(*s, e, "ace").links) {
        REQUIRE(s->articles.count(link));
        CHECK(s->articles.at(link).kind == Article::Kind::Entity);
      }
    }
  }
}

TEST_CASE("readers see whole snapshots while a writer publishes") {
  TempDir dir;
  auto w = Wiki::create(dir.path(), false);
  std::atomic<bool> done{false};
  std::atomic<int> torn{0};
  std::thread reader([&] {
    while (!done) {
      auto s = w->snapshot();
      std::size_t entries = 0;
      for (const auto& [name, a] : s->articles) entries += a.entries.size();
      if (entries != s->status.size()) ++torn;
      if (s->kb.kb.axioms.size() > entries) ++torn;
    }
  });
  for (int i = 0; i < 20; ++i) w->addEntry("geo", "ace", toks(i % 2 ? "Germany is a country ." : "John likes France ."));
  done = true;
  reader.join();
  CHECK(torn == 0);
  CHECK(w->snapshot()->generation == 20);
}
