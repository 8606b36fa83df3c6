#include <doctest.h>

#include "cnlwiki/ace/ace.hpp"
#include "oracles.hpp"
#include "server.hpp"

using namespace cnlwiki;
using nlohmann::json;
using testing::get;
using testing::post;
using testing::put;

namespace {

struct Fixture {
  testing::TempDir dir;
  std::unique_ptr<wiki::Wiki> w = wiki::Wiki::create(dir.path(), true);
  testing::LiveServer server{*w};
  httplib::Client c = server.client();
};

std::string lexicon(const std::string& file) {
  for (const auto& m : ace::shippedModules()) {
    if (m.name == file) return m.text;
  }
  return {};
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "languages") {
  auto r = get(c, "/languages");
  CHECK(r.status == 200);
  CHECK(r.body == json{"ace", "ger", "spa"});
}

TEST_CASE_FIXTURE(Fixture, "grammar endpoints") {
  auto p = post(c, "/parse", {{"lang", "spa"}, {"tokens", "si X contiene Y entonces Y no contiene X ."}});
  CHECK(p.status == 200);
  CHECK(p.body["trees"] == json{testing::kAsymmetryTree});

  auto l = post(c, "/linearize", {{"lang", "ger"}, {"tree", testing::kAsymmetryTree}});
  CHECK(l.status == 200);
  CHECK(l.body["text"] == "wenn X Y enthält , dann enthält Y X nicht");

  auto b = post(c, "/linearize", {{"lang", "ace"}, {"tree", "everyNP (useN country_N)"}, {"bracketed", true}});
  CHECK(b.status == 200);
  CHECK(b.body["tokens"] == json{"[", "every", "country", "]"});

  auto k = post(c, "/complete", {{"lang", "ace"}, {"prefix", json{"every"}}});
  CHECK(k.status == 200);
  CHECK(k.body["tokens"] == json{"country", "lake", "person"});

  auto t = post(c, "/translate", {{"from", "ace"}, {"to", "spa"}, {"tokens", "Germany borders France ."}});
  CHECK(t.status == 200);
  CHECK(t.body["translations"] == json{"Alemania bordea Francia"});
}

TEST_CASE_FIXTURE(Fixture, "bad input is 400") {
  CHECK(post(c, "/parse", {{"lang", "fra"}, {"tokens", "x"}}).status == 400);
  CHECK(post(c, "/parse", {{"tokens", "x"}}).status == 400);
  CHECK(post(c, "/parse", {{"lang", "ace"}, {"tokens", 3}}).status == 400);
  CHECK(testing::reply(c.Post("/parse", "{not json", "application/json")).status == 400);
  CHECK(post(c, "/linearize", {{"lang", "ace"}, {"tree", "(useN"}}).status == 400);
  CHECK(post(c, "/linearize", {{"lang", "ace"}, {"tree", "useN pizza_N"}}).status == 400);
  CHECK(get(c, "/articles/geography?lang=fra").status == 400);

  auto r = post(c, "/entries", {{"article", "x"}, {"lang", "ace"}, {"tokens", "every country borders ."}});
  CHECK(r.status == 400);
  CHECK(r.body["prefix"] == json{"every", "country", "borders"});
  CHECK(r.body["completions"].size() > 0);
}

TEST_CASE_FIXTURE(Fixture, "unknown things are 404") {
  CHECK(get(c, "/articles/nowhere").status == 404);
  CHECK(testing::reply(c.Delete("/entries/e999")).status == 404);
  CHECK(post(c, "/entries/e999/disambiguate", {{"index", 0}}).status == 404);
  CHECK(put(c, "/modules/Nope", {{"source", "x"}}).status == 404);
}

TEST_CASE_FIXTURE(Fixture, "articles render per request language") {
  auto list = get(c, "/articles");
  CHECK(list.status == 200);
  bool found = false;
  for (const auto& a : list.body["articles"]) found |= a["name"] == "geography" && a["kind"] == "free";
  CHECK(found);

  for (const auto& [lang, reading] : std::map<std::string, std::string>{
           {"ace", "Germany borders France ."},
           {"ger", "Deutschland begrenzt Frankreich ."},
           {"spa", "Alemania bordea Francia ."}}) {
    auto a = get(c, "/articles/geography?lang=" + lang);
    REQUIRE(a.status == 200);
    CHECK(a.body["language"] == lang);
    CHECK(a.body["entries"][2]["readings"] == json{reading});
    CHECK(a.body["entries"][2]["status"]["axiom"] == "RoleAssertion(border, germany, france)");
  }
  auto g = get(c, "/articles/geography?lang=ger");
  CHECK(g.body["entries"][5]["answers"] == json{"Deutschland"});

  auto m = get(c, "/articles/LexGer");
  CHECK(m.status == 200);
  CHECK(m.body["kind"] == "module");
  CHECK(m.body["source"] == lexicon("LexGer.gfs"));
}

TEST_CASE_FIXTURE(Fixture, "entry lifecycle") {
  auto e = post(c, "/entries", {{"article", "lakes"}, {"lang", "ger"}, {"tokens", "jeder See ist ein See ."}});
  REQUIRE(e.status == 201);
  CHECK(e.body["id"] == "e7");
  CHECK(e.body["status"]["kind"] == "included");
  CHECK(e.body["readings"] == json{"jeder See ist ein See ."});

  auto comment = post(c, "/comments", {{"article", "lakes"}, {"text", "Lakes are wet."}});
  CHECK(comment.status == 201);
  CHECK(comment.body["readings"] == json{"Lakes are wet."});

  auto d = testing::reply(c.Delete("/entries/e7"));
  CHECK(d.status == 200);
  CHECK(d.body["deleted"] == "e7");
  CHECK(get(c, "/articles/lakes").body["entries"].size() == 1);
}

TEST_CASE_FIXTURE(Fixture, "lexicon edits report revalidation or 422") {
  std::string src = lexicon("LexGer.gfs");
  auto at = src.find("mkN \"See\" masculine");
  REQUIRE(at != std::string::npos);

  auto broken = src;
  broken.replace(at, 19, "mkN \"See\" plural");
  auto bad = put(c, "/lexicon/ger", {{"source", broken}});
  CHECK(bad.status == 422);
  CHECK(bad.body["grammar"] == "rejected");
  CHECK(bad.body["diagnostics"][0]["module"] == "LexGer");
  CHECK(put(c, "/modules/Ace", {{"source", lexicon("Ace.gfs")}}).status == 422);
  CHECK(put(c, "/lexicon/fra", {{"source", src}}).status == 404);

  auto homograph = src;
  homograph.replace(at, 19, "mkN \"Land\" \"Länder\" neuter");
  auto ok = put(c, "/lexicon/ger", {{"source", homograph}});
  CHECK(ok.status == 200);
  CHECK(ok.body["grammar"] == "compiled");
  CHECK(ok.body["entries"].size() == 6);
}

TEST_CASE_FIXTURE(Fixture, "reasoner endpoints") {
  auto st = get(c, "/reasoner/status");
  CHECK(st.status == 200);
  CHECK(st.body["consistent"] == "yes");
  CHECK(st.body["axioms"].size() == 5);

  auto tax = get(c, "/reasoner/taxonomy?lang=spa");
  CHECK(tax.status == 200);
  bool labelled = false;
  for (const auto& n : tax.body["nodes"]) labelled |= n["class"] == "country" && n["label"] == "país";
  CHECK(labelled);

  auto q = post(c, "/reasoner/query", {{"lang", "spa"}, {"tokens", "qué país bordea Francia ?"}});
  CHECK(q.status == 200);
  CHECK(q.body["answers"] == json{"Alemania"});
  CHECK(q.body["individuals"] == json{"germany"});

  CHECK(post(c, "/entries", {{"article", "geo"}, {"lang", "ace"}, {"tokens", "France contains Germany ."}}).status == 201);
  CHECK(post(c, "/entries", {{"article", "geo"}, {"lang", "ace"}, {"tokens", "Germany contains France ."}}).status == 201);
  auto bad = get(c, "/reasoner/status");
  CHECK(bad.body["consistent"] == "no");
  CHECK(bad.body["conflict"] == json{"e4", "e7", "e8"});
  auto refused = post(c, "/reasoner/query", {{"lang", "ace"}, {"tokens", "which country borders France ?"}});
  CHECK(refused.status == 409);
  CHECK(refused.body["conflict"] == json{"e4", "e7", "e8"});
  CHECK(get(c, "/reasoner/taxonomy").status == 409);
}
