#include "doctest.h"
#include "oracles.hpp"

using namespace cnlwiki;
using testing::toks;

TEST_CASE("English nouns") {
  auto n = ace::mkN("ace", {"country"});
  CHECK(n.forms.at("s Sg") == "country");
  CHECK(n.forms.at("s Pl") == "countries");
  CHECK(ace::mkN("ace", {"lake"}).forms.at("s Pl") == "lakes");
  CHECK(ace::mkN("ace", {"box"}).forms.at("s Pl") == "boxes");
  CHECK(ace::mkN("ace", {"church"}).forms.at("s Pl") == "churches");
  CHECK(ace::mkN("ace", {"day"}).forms.at("s Pl") == "days");
  CHECK(ace::mkN("ace", {"person", "people"}).forms.at("s Pl") == "people");
  CHECK(ace::mkN("ace", {"island"}).params.at("a") == "An");
  CHECK(ace::mkN("ace", {"lake"}).params.at("a") == "A");
}

TEST_CASE("German nouns") {
  auto land = ace::mkN("ger", {"Land", "Länder"}, "neuter");
  CHECK(land.forms.at("s Sg Nom") == "Land");
  CHECK(land.forms.at("s Pl Nom") == "Länder");
  CHECK(land.forms.at("s Pl Dat") == "Ländern");
  CHECK(land.forms.at("s Sg Gen") == "Lands");
  CHECK(land.params.at("g") == "Neut");
  auto person = ace::mkN("ger", {"Person"}, "feminine");
  CHECK(person.forms.at("s Sg Gen") == "Person");
  CHECK(person.forms.at("s Pl Nom") == "Personen");
  CHECK(ace::mkN("ger", {"See"}, "masculine").params.at("g") == "Masc");
  CHECK(ace::mkN("ger", {"Zeitung"}).params.at("g") == "Fem");
  auto full = ace::mkN("ger", {"Haus", "Hauses", "Häuser", "Häusern"}, "neuter");
  CHECK(full.forms.at("s Sg Gen") == "Hauses");
  CHECK(full.forms.at("s Pl Dat") == "Häusern");
}

TEST_CASE("Spanish nouns") {
  CHECK(ace::mkN("spa", {"mujer"}).forms.at("s Pl") == "mujeres");
  CHECK(ace::mkN("spa", {"país"}, "masculine").forms.at("s Pl") == "países");
  CHECK(ace::mkN("spa", {"casa"}).forms.at("s Pl") == "casas");
  CHECK(ace::mkN("spa", {"casa"}).params.at("g") == "Fem");
  CHECK(ace::mkN("spa", {"lago"}).params.at("g") == "Masc");
}

TEST_CASE("transitive verbs") {
  auto contain = ace::mkV2("ace", {"contain"});
  CHECK(contain.forms.at("s3") == "contains");
  CHECK(contain.forms.at("pp") == "contained");
  CHECK(ace::mkV2("ace", {"like"}).forms.at("pp") == "liked");
  CHECK(ace::mkV2("ger", {"enthalten", "enthält", "enthalten"}).forms.at("s3") == "enthält");
  CHECK(ace::mkV2("ger", {"begrenzen"}).forms.at("s3") == "begrenzt");
  CHECK(ace::mkV2("spa", {"contener", "contiene", "contenido"}).forms.at("s3") == "contiene");
  auto bordear = ace::mkV2("spa", {"bordear"});
  CHECK(bordear.forms.at("s3") == "bordea");
  CHECK(bordear.forms.at("pp Masc") == "bordeado");
  CHECK(bordear.forms.at("pp Fem") == "bordeada");
}

TEST_CASE("paradigm errors") {
  CHECK_THROWS_AS(ace::mkN("ace", {}), grammar::ParadigmError);
  CHECK_THROWS_AS(ace::mkN("ace", {"a", "b", "c"}), grammar::ParadigmError);
  CHECK_THROWS_AS(ace::mkN("ace", {""}), grammar::ParadigmError);
  CHECK_THROWS_AS(ace::mkN("ger", {"Land"}, "plural"), grammar::ParadigmError);
  CHECK_THROWS_AS(ace::mkN("spa", {"casa"}, "neuter"), grammar::ParadigmError);
  CHECK_THROWS_AS(ace::mkV2("spa", {"ver", "ve"}), grammar::ParadigmError);
  CHECK_THROWS_AS(ace::mkV2("spa", {"xyz"}), grammar::ParadigmError);
}

TEST_CASE("tokenize and detokenize") {
  auto t = toks("if X contains Y then Y does not contain X.");
  CHECK(t.size() == 11);
  CHECK(t.back() == ".");
  auto ger = toks("wenn X Y enthält , dann enthält Y X nicht");
  CHECK(ger.size() == 10);
  CHECK(ger[4] == ",");
  CHECK(toks("wenn X Y enthält, dann") == toks("wenn X Y enthält , dann"));
  CHECK(toks("who borders France?").back() == "?");
  CHECK(toks("  ").empty());
  std::string normal = "wenn X Y enthält , dann enthält Y X nicht";
  CHECK(ace::detokenize(toks(normal)) == normal);
}

TEST_CASE("entity names") {
  CHECK(ace::entityName("country_N") == "country");
  CHECK(ace::entityName("germany_PN") == "germany");
  CHECK(ace::entityName("border_V2") == "border");
}

TEST_CASE("entity names are injective over the shipped lexicon") {
  std::map<std::string, std::string> seen;
  for (const auto& f : testing::shipped().abstract.functions()) {
    if (!f.lexical) continue;
    auto [it, inserted] = seen.emplace(ace::entityName(f.name), f.name);
    INFO(f.name << " vs " << it->second);
    CHECK(inserted);
  }
  CHECK(seen.size() == 9);
}

TEST_CASE("every lexical constant linearizes to nonempty fields in every language") {
  const auto& g = testing::shipped();
  for (const auto& tag : g.languageTags()) {
    const auto& c = g.concrete(tag);
    CHECK(c.missingLexical.empty());
    for (std::size_t f = 0; f < g.abstract.functions().size(); ++f) {
      if (!g.abstract.functions()[f].lexical) continue;
      for (int pid : c.productionsOfFunction[f]) {
        for (int seq : c.productions[static_cast<std::size_t>(pid)].fields) {
          INFO(tag << " " << g.abstract.functions()[f].name);
          CHECK_FALSE(c.sequences[static_cast<std::size_t>(seq)].empty());
        }
      }
    }
  }
}

TEST_CASE("German word order: verb-final after wenn, inversion after dann") {
  const auto& g = testing::shipped();
  auto t = grammar::AbstractTree::parse(
      "if_thenS (vpS (pnNP germany_PN) (v2VP border_V2 (pnNP france_PN))) "
      "(vpS (pnNP france_PN) (v2VP border_V2 (pnNP germany_PN)))");
  CHECK(grammar::linearize(g, "ger", t) ==
        toks("wenn Deutschland Frankreich begrenzt , dann begrenzt Frankreich Deutschland"));
}

TEST_CASE("passive agent takes the dative in German") {
  const auto& g = testing::shipped();
  auto t = grammar::AbstractTree::parse(
      "vpS (everyNP (useN country_N)) (v2_byVP border_V2 (aNP (useN country_N)))");
  CHECK(grammar::linearize(g, "ace", t) == toks("every country is bordered by a country"));
  CHECK(grammar::linearize(g, "ger", t) == toks("jedes Land wird von einem Land begrenzt"));
}
