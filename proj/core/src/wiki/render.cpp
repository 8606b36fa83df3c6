#include <algorithm>

#include "cnlwiki/ace/ace.hpp"
#include "cnlwiki/semantics/mapper.hpp"
#include "cnlwiki/wiki/wiki.hpp"
#include "derive.hpp"

namespace cnlwiki::wiki {

namespace {

std::string withTerminator(const grammar::CompiledGrammar& g, const std::string& lang, const AbstractTree& t,
                           Tokens tokens) {
  const auto& terms = g.concrete(lang).terminators;
  auto it = terms.find(g.abstract.typeOf(t));
  if (it != terms.end()) tokens.push_back(it->second);
  return ace::detokenize(tokens);
}

std::vector<std::string> linksOf(const Snapshot& s, const Entry& e) {
  std::set<std::string> out;
  for (const auto& t : e.trees) {
    std::vector<std::string> funs;
    t.collectFunctions(funs);
    for (const auto& f : funs) {
      const auto* sig = s.grammar->abstract.find(f);
      bool lexical = sig ? sig->lexical : grammar::lexicalCategory(f).has_value();
      if (lexical && s.articles.count(f)) out.insert(f);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace

std::string kindName(EntryKind k) {
  switch (k) {
    case EntryKind::Declarative:
      return "declarative";
    case EntryKind::Question:
      return "question";
    case EntryKind::Comment:
      return "comment";
  }
  return "comment";
}

std::string statusName(SemanticStatus::Kind k) {
  switch (k) {
    case SemanticStatus::Kind::Included:
      return "included";
    case SemanticStatus::Kind::Excluded:
      return "excluded";
    case SemanticStatus::Kind::Unsupported:
      return "unsupported";
    case SemanticStatus::Kind::Invalid:
      return "invalid";
    case SemanticStatus::Kind::Comment:
      return "comment";
  }
  return "comment";
}

std::string outcomeName(EntryRevalidation::Outcome o) {
  switch (o) {
    case EntryRevalidation::Outcome::Unchanged:
      return "unchanged";
    case EntryRevalidation::Outcome::Invalidated:
      return "invalidated";
    case EntryRevalidation::Outcome::Restored:
      return "restored";
    case EntryRevalidation::Outcome::AmbiguityChanged:
      return "ambiguity-changed";
  }
  return "unchanged";
}

std::string renderIndividual(const Snapshot& s, const std::string& entity, const std::string& lang) {
  try {
    return ace::detokenize(
        grammar::linearize(*s.grammar, lang, AbstractTree(semantics::lexicalFunction(entity, "PN"))));
  } catch (const grammar::MissingLinearization&) {
  } catch (const grammar::IllTypedTree&) {
  }
  return entity;
}

RenderedEntry renderEntry(const Snapshot& s, const Entry& e, const std::string& lang) {
  if (!s.grammar->hasLanguage(lang)) throw BadRequest("unknown language: " + lang);
  RenderedEntry r;
  r.id = e.id;
  r.kind = e.kind;
  r.sourceLanguage = e.sourceLanguage;
  auto st = s.status.find(e.id);
  if (st != s.status.end()) r.status = st->second;
  if (e.kind == EntryKind::Comment) {
    r.readings = {e.text};
    return r;
  }
  r.ambiguous = e.trees.size() > 1;
  for (const auto& t : e.trees) r.treeText.push_back(t.str());
  r.links = linksOf(s, e);

  if (r.status.kind == SemanticStatus::Kind::Invalid) {
    std::string missing;
    for (const auto& m : r.status.missing) missing += (missing.empty() ? "" : ", ") + m;
    r.note = missing.empty() ? "This entry no longer fits the grammar; please reformulate it."
                             : "This entry uses words that were removed from the grammar (" + missing +
                                   "); please reformulate it.";
    return r;
  }

  const auto& g = *s.grammar;
  std::vector<std::string> perTree;
  for (const auto& t : e.trees) {
    try {
      perTree.push_back(withTerminator(g, lang, t, grammar::linearize(g, lang, t)));
    } catch (const grammar::MissingLinearization& ex) {
      r.note = "No " + lang + " word for " + ex.function() + " yet.";
      r.readings.clear();
      return r;
    }
  }
  for (const auto& text : perTree) {
    if (std::find(r.readings.begin(), r.readings.end(), text) == r.readings.end()) r.readings.push_back(text);
  }
  if (r.ambiguous && r.readings.size() == 1) {
    for (const auto& t : e.trees) r.bracketed.push_back(withTerminator(g, lang, t, grammar::linearizeBracketed(g, lang, t)));
  }

  if (e.kind == EntryKind::Question) {
    auto a = s.kb.answers.find(e.id);
    if (a != s.kb.answers.end() && a->second.kind == QuestionAnswer::Kind::Answered) {
      std::vector<std::string> names;
      for (const auto& ind : a->second.individuals) names.push_back(renderIndividual(s, ind, lang));
      std::sort(names.begin(), names.end());
      r.answers = names;
    }
  }
  return r;
}

RenderedArticle renderArticle(const Snapshot& s, const std::string& name, const std::string& lang) {
  auto it = s.articles.find(name);
  if (it == s.articles.end()) throw NotFound("no article " + name);
  if (!s.grammar->hasLanguage(lang)) throw BadRequest("unknown language: " + lang);
  RenderedArticle out{name, lang, s.generation, {}};
  for (const auto& e : it->second.entries) out.entries.push_back(renderEntry(s, e, lang));
  return out;
}

std::set<std::string> query(const Snapshot& s, const std::string& lang, const Tokens& tokens) {
  const auto& g = *s.grammar;
  if (!g.hasLanguage(lang)) throw BadRequest("unknown language: " + lang);
  auto trees = grammar::parse(g, lang, tokens);
  if (trees.empty()) {
    std::size_t n = grammar::longestViablePrefix(g, lang, tokens);
    Tokens prefix(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(n));
    throw ParseRejected(prefix, grammar::complete(g, lang, prefix));
  }
  std::optional<semantics::ClassExpr> q;
  for (const auto& t : trees) {
    std::optional<semantics::ClassExpr> next;
    try {
      next = semantics::treeToQuery(t);
    } catch (const semantics::Unsupported& e) {
      throw BadRequest(std::string("not a supported question: ") + e.what());
    }
    if (q && !(*q == *next)) throw BadRequest("the question's readings ask different things");
    q = next;
  }
  if (s.kb.consistent == reasoner::Verdict::No) throw KbInconsistent(s.kb.conflict);
  if (s.kb.consistent == reasoner::Verdict::Unknown) throw reasoner::ResourceLimit();
  return reasoner::answerQuery(s.kb.kb, *q);
}

}  // namespace cnlwiki::wiki
