#include "cnlwiki/wiki/wiki.hpp"

#include <algorithm>
#include <fstream>
#include <cctype>
#include <sstream>

#include "cnlwiki/ace/ace.hpp"
#include "json.hpp"
#include "derive.hpp"

namespace cnlwiki::wiki {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* kModuleSuffix = ".gfs";

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Write to a sibling temp file, then rename over the target.
void writeFile(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

std::string kindToken(EntryKind k) {
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

EntryKind kindFromToken(const std::string& s) {
  if (s == "declarative") return EntryKind::Declarative;
  if (s == "question") return EntryKind::Question;
  if (s == "comment") return EntryKind::Comment;
  throw std::runtime_error("unknown entry kind '" + s + "'");
}

json entryJson(const Entry& e) {
  json j{{"id", e.id}, {"kind", kindToken(e.kind)}};
  if (e.kind == EntryKind::Comment) {
    j["text"] = e.text;
  } else {
    json trees = json::array();
    for (const auto& t : e.trees) trees.push_back(t.str());
    j["trees"] = trees;
    j["sourceLanguage"] = e.sourceLanguage;
  }
  return j;
}

Entry entryFromJson(const json& j) {
  Entry e;
  e.id = j.at("id").get<std::string>();
  e.kind = kindFromToken(j.at("kind").get<std::string>());
  if (e.kind == EntryKind::Comment) {
    e.text = j.at("text").get<std::string>();
  } else {
    for (const auto& t : j.at("trees")) e.trees.push_back(AbstractTree::parse(t.get<std::string>()));
    if (e.trees.empty()) throw std::runtime_error("entry " + e.id + " has no trees");
    e.sourceLanguage = j.value("sourceLanguage", "");
  }
  return e;
}

bool validArticleName(const std::string& name) {
  return !name.empty() && name.size() <= 128 && name.front() != '.' &&
         std::all_of(name.begin(), name.end(), [](unsigned char c) {
           return std::isalnum(c) || c == '_' || c == '-' || c == '.';
         });
}

grammar::GrammarPtr compileStore(const std::map<std::string, std::string>& modules) {
  std::vector<grammar::ModuleText> texts;
  for (const auto& [name, text] : modules) texts.push_back({name + kModuleSuffix, text});
  return ace::compileModules(texts);
}

}  // namespace

GrammarRejected::GrammarRejected(std::vector<grammar::Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "grammar rejected";
        for (const auto& d : diagnostics) msg += "\n" + d.str();
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

const Entry* Snapshot::findEntry(const std::string& id, std::string* article) const {
  for (const auto& [name, a] : articles) {
    for (const auto& e : a.entries) {
      if (e.id == id) {
        if (article) *article = name;
        return &e;
      }
    }
  }
  return nullptr;
}

std::string Snapshot::lexiconModule(const std::string& lang) const {
  if (!grammar->hasLanguage(lang)) return {};
  const std::string& concreteName = grammar->concrete(lang).moduleName;
  for (const auto& [name, text] : modules) {
    try {
      auto m = grammar::source::parseModule(text, name);
      if (auto* lex = std::get_if<grammar::source::LexiconModule>(&m); lex && lex->concreteName == concreteName) {
        return name;
      }
    } catch (const grammar::CompileError&) {
    }
  }
  return {};
}

// ---- persistence ----

void Wiki::persistArticle(const Snapshot& s, const std::string& name) const {
  fs::path p = store_ / "articles" / (name + ".json");
  auto it = s.articles.find(name);
  if (it == s.articles.end()) {
    fs::remove(p);
    return;
  }
  json entries = json::array();
  for (const auto& e : it->second.entries) entries.push_back(entryJson(e));
  json j{{"name", name}, {"kind", it->second.kind == Article::Kind::Entity ? "entity" : "free"}, {"entries", entries}};
  writeFile(p, j.dump(2) + "\n");
}

void Wiki::persistMeta(const Snapshot& s) const {
  json j{{"generation", s.generation}, {"nextEntryId", s.nextEntryId}};
  writeFile(store_ / "meta.json", j.dump(2) + "\n");
}

std::unique_ptr<Wiki> Wiki::open(const fs::path& store) {
  if (!fs::exists(store / "meta.json")) throw std::runtime_error("not a wiki store: " + store.string());
  std::unique_ptr<Wiki> w(new Wiki(store));
  auto s = std::make_shared<Snapshot>();

  json meta = json::parse(readFile(store / "meta.json"));
  s->generation = meta.at("generation").get<long>();
  s->nextEntryId = meta.at("nextEntryId").get<long>();

  std::vector<fs::path> files;
  for (const auto& f : fs::directory_iterator(store / "grammar")) {
    if (f.path().extension() == kModuleSuffix) files.push_back(f.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) s->modules[f.stem().string()] = readFile(f);
  try {
    s->grammar = compileStore(s->modules);
  } catch (const grammar::CompileError& e) {
    throw GrammarRejected(e.diagnostics());
  }

  if (fs::exists(store / "articles")) {
    for (const auto& f : fs::directory_iterator(store / "articles")) {
      if (f.path().extension() != ".json") continue;
      json j = json::parse(readFile(f.path()));
      Article a;
      a.name = f.path().stem().string();
      a.kind = j.value("kind", "free") == "entity" ? Article::Kind::Entity : Article::Kind::Free;
      for (const auto& e : j.at("entries")) {
        a.entries.push_back(entryFromJson(e));
        s->nextEntryId = std::max(s->nextEntryId, detail::entryNumber(a.entries.back().id) + 1);
      }
      s->articles[a.name] = std::move(a);
    }
  }

  for (const auto& name : detail::ensureEntityArticles(*s)) w->persistArticle(*s, name);
  detail::recomputeEntries(*s);
  detail::rebuildKb(*s);
  w->current_ = std::move(s);
  return w;
}

std::unique_ptr<Wiki> Wiki::create(const fs::path& store, bool demo) {
  if (fs::exists(store / "meta.json")) throw std::runtime_error("store already exists: " + store.string());
  fs::create_directories(store / "grammar");
  fs::create_directories(store / "articles");
  for (const auto& m : ace::shippedModules()) writeFile(store / "grammar" / m.name, m.text);
  writeFile(store / "meta.json", json{{"generation", 0}, {"nextEntryId", 1}}.dump(2) + "\n");
  auto w = open(store);
  if (demo) {
    for (const auto& sentence : demoSentences()) w->addEntry("geography", "ace", ace::tokenize(sentence));
  }
  return w;
}

std::unique_ptr<Wiki> Wiki::openOrCreate(const fs::path& store, bool demo) {
  if (fs::exists(store / "meta.json")) return open(store);
  return create(store, demo);
}

SnapshotPtr Wiki::snapshot() const {
  std::lock_guard lock(pointer_);
  return current_;
}

void Wiki::publish(std::shared_ptr<Snapshot> next) {
  std::lock_guard lock(pointer_);
  current_ = std::move(next);
}

// ---- writes ----

Entry Wiki::addEntry(const std::string& article, const std::string& lang, const Tokens& tokens) {
  std::lock_guard lock(writer_);
  auto next = std::make_shared<Snapshot>(*snapshot());
  const auto& g = *next->grammar;
  if (!g.hasLanguage(lang)) throw BadRequest("unknown language: " + lang);
  if (!validArticleName(article)) throw BadRequest("invalid article name: " + article);
  if (next->isModule(article)) throw BadRequest(article + " is a grammar module");

  auto trees = grammar::parse(g, lang, tokens);
  if (trees.empty()) {
    std::size_t n = grammar::longestViablePrefix(g, lang, tokens);
    Tokens prefix(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(n));
    throw ParseRejected(prefix, grammar::complete(g, lang, prefix));
  }

  Entry e;
  e.id = "e" + std::to_string(next->nextEntryId++);
  e.kind = g.abstract.typeOf(trees.front()) == "Q" ? EntryKind::Question : EntryKind::Declarative;
  e.trees = std::move(trees);
  e.sourceLanguage = lang;

  auto& a = next->articles[article];
  if (a.name.empty()) a = Article{article, Article::Kind::Free, {}};
  a.entries.push_back(e);
  next->status[e.id] = detail::computeStatus(g, e);
  next->parseCounts[e.id] = detail::probeAmbiguity(g, e);
  ++next->generation;
  detail::rebuildKb(*next);

  persistArticle(*next, article);
  persistMeta(*next);
  publish(std::move(next));
  return e;
}

Entry Wiki::addComment(const std::string& article, const std::string& text) {
  std::lock_guard lock(writer_);
  auto next = std::make_shared<Snapshot>(*snapshot());
  if (!validArticleName(article)) throw BadRequest("invalid article name: " + article);
  if (next->isModule(article)) throw BadRequest(article + " is a grammar module");
  Entry e;
  e.id = "e" + std::to_string(next->nextEntryId++);
  e.kind = EntryKind::Comment;
  e.text = text;
  auto& a = next->articles[article];
  if (a.name.empty()) a = Article{article, Article::Kind::Free, {}};
  a.entries.push_back(e);
  next->status[e.id] = SemanticStatus{};
  ++next->generation;
  next->kb.kb.generation = next->generation;

  persistArticle(*next, article);
  persistMeta(*next);
  publish(std::move(next));
  return e;
}

void Wiki::deleteEntry(const std::string& id) {
  std::lock_guard lock(writer_);
  auto next = std::make_shared<Snapshot>(*snapshot());
  std::string article;
  if (!next->findEntry(id, &article)) throw NotFound("no entry " + id);
  auto& entries = next->articles[article].entries;
  entries.erase(std::remove_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.id == id; }),
                entries.end());
  next->status.erase(id);
  next->parseCounts.erase(id);
  ++next->generation;
  detail::rebuildKb(*next);

  persistArticle(*next, article);
  persistMeta(*next);
  publish(std::move(next));
}

Entry Wiki::disambiguate(const std::string& id, std::size_t index) {
  std::lock_guard lock(writer_);
  auto next = std::make_shared<Snapshot>(*snapshot());
  std::string article;
  if (!next->findEntry(id, &article)) throw NotFound("no entry " + id);
  Entry* e = nullptr;
  for (auto& candidate : next->articles[article].entries) {
    if (candidate.id == id) e = &candidate;
  }
  if (e->kind == EntryKind::Comment) throw BadRequest("comments have no readings");
  if (index >= e->trees.size()) {
    throw BadRequest("reading " + std::to_string(index) + " out of range (" + std::to_string(e->trees.size()) +
                     " readings)");
  }
  e->trees = {e->trees[index]};
  next->status[id] = detail::computeStatus(*next->grammar, *e);
  next->parseCounts[id] = detail::probeAmbiguity(*next->grammar, *e);
  ++next->generation;
  detail::rebuildKb(*next);
  Entry out = *e;

  persistArticle(*next, article);
  persistMeta(*next);
  publish(std::move(next));
  return out;
}

RevalidationReport Wiki::editLexicon(const std::string& lang, const std::string& source) {
  auto s = snapshot();
  if (!s->grammar->hasLanguage(lang)) throw NotFound("unknown language: " + lang);
  std::string name = s->lexiconModule(lang);
  if (name.empty()) throw NotFound("no lexicon module for " + lang);
  return editModule(name, source);
}

RevalidationReport Wiki::editModule(const std::string& name, const std::string& source) {
  std::lock_guard lock(writer_);
  auto prev = snapshot();
  if (!prev->isModule(name)) throw NotFound("no grammar module " + name);

  const std::string label = name + kModuleSuffix;
  try {
    auto parsed = grammar::source::parseModule(source, label);
    if (std::holds_alternative<grammar::source::AbstractModule>(parsed)) {
      throw GrammarRejected({{label, 0, "the abstract syntax is read-only"}});
    }
    if (grammar::source::moduleName(parsed) != name) {
      throw GrammarRejected(
          {{label, 0, "module is named " + grammar::source::moduleName(parsed) + ", expected " + name}});
    }
  } catch (const grammar::CompileError& e) {
    throw GrammarRejected(e.diagnostics());
  }

  auto next = std::make_shared<Snapshot>(*prev);
  next->modules[name] = source;
  try {
    next->grammar = compileStore(next->modules);
  } catch (const grammar::CompileError& e) {
    throw GrammarRejected(e.diagnostics());
  }

  auto created = detail::ensureEntityArticles(*next);
  detail::recomputeEntries(*next);
  ++next->generation;
  detail::rebuildKb(*next);

  RevalidationReport report;
  report.generation = next->generation;
  report.warnings = next->grammar->warnings;
  for (const auto& [article, a] : next->articles) {
    for (const auto& e : a.entries) {
      if (e.kind == EntryKind::Comment) continue;
      EntryRevalidation r;
      r.entryId = e.id;
      r.article = article;
      const auto& before = prev->status.at(e.id);
      const auto& after = next->status.at(e.id);
      bool wasInvalid = before.kind == SemanticStatus::Kind::Invalid;
      bool isInvalid = after.kind == SemanticStatus::Kind::Invalid;
      r.missing = after.missing;
      if (isInvalid && !wasInvalid) {
        r.outcome = EntryRevalidation::Outcome::Invalidated;
      } else if (wasInvalid && !isInvalid) {
        r.outcome = EntryRevalidation::Outcome::Restored;
      } else if (!isInvalid) {
        const auto& old = prev->parseCounts.at(e.id);
        const auto& now = next->parseCounts.at(e.id);
        for (const auto& [lang, count] : now) {
          auto it = old.find(lang);
          if (it != old.end() && it->second != count) r.ambiguity.push_back({lang, it->second, count});
        }
        if (!r.ambiguity.empty()) r.outcome = EntryRevalidation::Outcome::AmbiguityChanged;
      }
      report.entries.push_back(std::move(r));
    }
  }
  std::sort(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
    return detail::entryNumber(a.entryId) < detail::entryNumber(b.entryId);
  });

  writeFile(store_ / "grammar" / label, source);
  for (const auto& article : created) persistArticle(*next, article);
  persistMeta(*next);
  publish(std::move(next));
  return report;
}

const std::vector<std::string>& demoSentences() {
  static const std::vector<std::string> sentences = {
      "Germany is a country .",
      "France is a country .",
      "Germany borders France .",
      "if X contains Y then Y does not contain X .",
      "John is a person .",
      "which country borders France ?",
  };
  return sentences;
}

}  // namespace cnlwiki::wiki
