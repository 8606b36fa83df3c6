#include "derive.hpp"

#include <algorithm>

#include "cnlwiki/ace/ace.hpp"
#include "cnlwiki/semantics/mapper.hpp"

namespace cnlwiki::wiki::detail {

using reasoner::Verdict;

std::string entityOf(const std::string& lexicalFunction) { return ace::entityName(lexicalFunction); }

long entryNumber(const std::string& id) {
  if (id.size() < 2 || id[0] != 'e') return 0;
  try {
    return std::stol(id.substr(1));
  } catch (const std::exception&) {
    return 0;
  }
}

namespace {

SemanticStatus questionStatus(const std::vector<AbstractTree>& trees) {
  SemanticStatus st;
  for (const auto& t : trees) {
    std::optional<semantics::ClassExpr> q;
    try {
      q = semantics::treeToQuery(t);
    } catch (const semantics::Unsupported& e) {
      st.kind = SemanticStatus::Kind::Unsupported;
      st.reason = e.what();
      st.query.reset();
      return st;
    }
    if (!st.query) {
      st.query = q;
    } else if (!(*st.query == *q)) {
      st.kind = SemanticStatus::Kind::Excluded;
      st.reason = "readings map to different queries";
      st.query.reset();
      return st;
    }
  }
  st.kind = SemanticStatus::Kind::Included;
  return st;
}

}  // namespace

SemanticStatus computeStatus(const grammar::CompiledGrammar& g, const Entry& e) {
  SemanticStatus st;
  if (e.kind == EntryKind::Comment) return st;

  std::set<std::string> missing;
  for (const auto& t : e.trees) {
    auto u = g.abstract.unknownFunctions(t);
    missing.insert(u.begin(), u.end());
  }
  if (!missing.empty()) {
    st.kind = SemanticStatus::Kind::Invalid;
    st.missing.assign(missing.begin(), missing.end());
    return st;
  }
  for (const auto& t : e.trees) {
    if (!g.abstract.wellTyped(t)) {
      st.kind = SemanticStatus::Kind::Invalid;
      st.reason = "ill-typed tree " + t.str();
      return st;
    }
  }

  if (e.kind == EntryKind::Question) return questionStatus(e.trees);

  auto sem = semantics::entrySemantics(e.trees);
  switch (sem.kind) {
    case semantics::EntrySemantics::Kind::Included:
      st.kind = SemanticStatus::Kind::Included;
      st.axiom = sem.axiom;
      break;
    case semantics::EntrySemantics::Kind::Excluded:
      st.kind = SemanticStatus::Kind::Excluded;
      break;
    case semantics::EntrySemantics::Kind::Unsupported:
      st.kind = SemanticStatus::Kind::Unsupported;
      break;
  }
  st.reason = sem.reason;
  return st;
}

std::map<std::string, int> probeAmbiguity(const grammar::CompiledGrammar& g, const Entry& e) {
  std::map<std::string, int> out;
  if (e.kind == EntryKind::Comment || e.trees.empty()) return out;
  for (const auto& lang : g.languageTags()) {
    try {
      auto tokens = grammar::linearizeSentence(g, lang, e.trees.front());
      out[lang] = static_cast<int>(grammar::parse(g, lang, tokens).size());
    } catch (const grammar::MissingLinearization&) {
    } catch (const grammar::IllTypedTree&) {
    }
  }
  return out;
}

void recomputeEntries(Snapshot& s) {
  s.status.clear();
  s.parseCounts.clear();
  for (const auto& [name, article] : s.articles) {
    for (const auto& e : article.entries) {
      s.status[e.id] = computeStatus(*s.grammar, e);
      s.parseCounts[e.id] = probeAmbiguity(*s.grammar, e);
    }
  }
}

std::vector<std::string> ensureEntityArticles(Snapshot& s) {
  std::vector<std::string> created;
  for (const auto& f : s.grammar->abstract.functions()) {
    if (!f.lexical || s.articles.count(f.name)) continue;
    s.articles[f.name] = Article{f.name, Article::Kind::Entity, {}};
    created.push_back(f.name);
  }
  return created;
}

void rebuildKb(Snapshot& s) {
  KbState kb;
  for (const auto& f : s.grammar->abstract.functions()) {
    if (!f.lexical) continue;
    std::string entity = entityOf(f.name);
    if (f.result == "N") kb.kb.declared.classes.insert(entity);
    else if (f.result == "PN") kb.kb.declared.individuals.insert(entity);
    else if (f.result == "V2") kb.kb.declared.roles.insert(entity);
  }
  std::vector<std::pair<std::string, semantics::ClassExpr>> questions;
  for (const auto& [name, article] : s.articles) {
    for (const auto& e : article.entries) {
      const auto& st = s.status.at(e.id);
      if (st.kind != SemanticStatus::Kind::Included) continue;
      if (st.axiom) kb.kb.axioms.push_back({*st.axiom, e.id});
      if (st.query) questions.emplace_back(e.id, *st.query);
    }
  }
  kb.kb.generation = s.generation;

  auto report = reasoner::isConsistent(kb.kb);
  kb.consistent = report.consistent;
  kb.conflict = report.conflict;
  std::sort(kb.conflict.begin(), kb.conflict.end(),
            [](const auto& a, const auto& b) { return entryNumber(a) < entryNumber(b); });
  if (kb.consistent == Verdict::Unknown) {
    kb.warnings.push_back("consistency undecided within the reasoner budget");
  }
  for (const auto& [id, q] : questions) {
    QuestionAnswer a;
    if (kb.consistent == Verdict::No) {
      a.kind = QuestionAnswer::Kind::Inconsistent;
    } else if (kb.consistent == Verdict::Unknown) {
      a.kind = QuestionAnswer::Kind::Unknown;
    } else {
      try {
        a.individuals = reasoner::answerQuery(kb.kb, q);
        a.kind = QuestionAnswer::Kind::Answered;
      } catch (const reasoner::ResourceLimit&) {
        a.kind = QuestionAnswer::Kind::Unknown;
        kb.warnings.push_back("question " + id + " undecided within the reasoner budget");
      }
    }
    kb.answers[id] = std::move(a);
  }
  if (kb.consistent == Verdict::Yes) {
    try {
      kb.taxonomy = reasoner::classify(kb.kb);
    } catch (const reasoner::ResourceLimit&) {
      kb.warnings.push_back("classification undecided within the reasoner budget");
    }
  }
  s.kb = std::move(kb);
}

}  // namespace cnlwiki::wiki::detail
