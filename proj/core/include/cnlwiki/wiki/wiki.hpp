#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnlwiki/grammar/compiler.hpp"
#include "cnlwiki/grammar/kernel.hpp"
#include "cnlwiki/reasoner/reasoner.hpp"

namespace cnlwiki::wiki {

using grammar::AbstractTree;
using grammar::Tokens;

enum class EntryKind { Declarative, Question, Comment };

struct SemanticStatus {
  enum class Kind { Included, Excluded, Unsupported, Invalid, Comment };
  Kind kind = Kind::Comment;
  std::optional<semantics::Axiom> axiom;     // Included declaratives
  std::optional<semantics::ClassExpr> query;  // Included questions
  std::vector<std::string> missing;          // Invalid: functions the grammar lost
  std::string reason;
};

/// What gets persisted: trees for sentences, raw text for comments.
struct Entry {
  std::string id;
  EntryKind kind = EntryKind::Declarative;
  std::vector<AbstractTree> trees;
  std::string text;  // comments only
  std::string sourceLanguage;
};

struct Article {
  enum class Kind { Entity, Free };
  std::string name;
  Kind kind = Kind::Free;
  std::vector<Entry> entries;
};

struct QuestionAnswer {
  enum class Kind { Answered, Unknown, Inconsistent, Unsupported };
  Kind kind = Kind::Unsupported;
  std::set<std::string> individuals;  // entity ids
};

struct KbState {
  reasoner::KnowledgeBase kb;
  reasoner::Verdict consistent = reasoner::Verdict::Yes;
  std::vector<std::string> conflict;  // entry ids
  std::optional<reasoner::Taxonomy> taxonomy;  // absent when inconsistent or undecided
  std::map<std::string, QuestionAnswer> answers;  // question entry id -> answer
  std::vector<std::string> warnings;
};

/// One consistent view of the wiki; never mutated after publication.
struct Snapshot {
  long generation = 0;
  long nextEntryId = 1;
  grammar::GrammarPtr grammar;
  std::map<std::string, std::string> modules;  // module name -> source
  std::map<std::string, Article> articles;
  std::map<std::string, SemanticStatus> status;          // entry id -> status
  std::map<std::string, std::map<std::string, int>> parseCounts;  // entry id -> lang -> parses of its rendering
  KbState kb;

  [[nodiscard]] const Entry* findEntry(const std::string& id, std::string* article = nullptr) const;
  /// Module name of the lexicon feeding `lang`, empty if none.
  [[nodiscard]] std::string lexiconModule(const std::string& lang) const;
  [[nodiscard]] bool isModule(const std::string& name) const { return modules.count(name) > 0; }
};

using SnapshotPtr = std::shared_ptr<const Snapshot>;

// ---- errors ----

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The tokens do not form a sentence of the language.
class ParseRejected : public std::runtime_error {
 public:
  ParseRejected(Tokens prefix, std::set<std::string> completions)
      : std::runtime_error("no parse"), prefix_(std::move(prefix)), completions_(std::move(completions)) {}
  [[nodiscard]] const Tokens& prefix() const { return prefix_; }
  [[nodiscard]] const std::set<std::string>& completions() const { return completions_; }

 private:
  Tokens prefix_;
  std::set<std::string> completions_;
};

/// A grammar edit that does not compile; the wiki is unchanged.
class GrammarRejected : public std::runtime_error {
 public:
  explicit GrammarRejected(std::vector<grammar::Diagnostic> diagnostics);
  [[nodiscard]] const std::vector<grammar::Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<grammar::Diagnostic> diagnostics_;
};

/// The knowledge base is inconsistent, so questions have no answer.
class KbInconsistent : public std::runtime_error {
 public:
  explicit KbInconsistent(std::vector<std::string> conflict)
      : std::runtime_error("knowledge base is inconsistent"), conflict_(std::move(conflict)) {}
  [[nodiscard]] const std::vector<std::string>& conflict() const { return conflict_; }

 private:
  std::vector<std::string> conflict_;
};

// ---- reports and views ----

struct AmbiguityChange {
  std::string language;
  int before = 0;
  int after = 0;
};

struct EntryRevalidation {
  enum class Outcome { Unchanged, Invalidated, Restored, AmbiguityChanged };
  std::string entryId;
  std::string article;
  Outcome outcome = Outcome::Unchanged;
  std::vector<std::string> missing;
  std::vector<AmbiguityChange> ambiguity;
};

struct RevalidationReport {
  long generation = 0;
  std::vector<EntryRevalidation> entries;  // sentence entries only, by id
  std::vector<grammar::Diagnostic> warnings;
};

struct RenderedEntry {
  std::string id;
  EntryKind kind = EntryKind::Declarative;
  std::string sourceLanguage;
  SemanticStatus status;
  std::vector<std::string> readings;   // distinct renderings, one per tree when they differ
  std::vector<std::string> bracketed;  // per tree, only when several trees render identically
  bool ambiguous = false;              // more than one tree
  std::vector<std::string> treeText;
  std::vector<std::string> links;      // entity articles named by the trees' lexical functions
  std::string note;                    // repair prompt or untranslatable explanation
  std::optional<std::vector<std::string>> answers;  // questions: rendered proper names
};

struct RenderedArticle {
  std::string name;
  std::string language;
  long generation = 0;
  std::vector<RenderedEntry> entries;
};

// ---- the wiki ----

/// Persistent wiki over a store directory:
///
///     grammar/<Module>.gfs
///     articles/<name>.json   {"entries":[{"id","kind","trees","sourceLanguage"}]}
///     meta.json              {"generation", "nextEntryId"}
///
/// All writes go through one mutex and publish a fresh Snapshot; readers
/// only copy the current snapshot pointer.
class Wiki {
 public:
  /// Opens an existing store. Throws std::runtime_error for unreadable content.
  static std::unique_ptr<Wiki> open(const std::filesystem::path& store);

  /// Creates a store with the shipped grammar, optionally with the demo
  /// geography article. Fails if the directory already holds a store.
  static std::unique_ptr<Wiki> create(const std::filesystem::path& store, bool demo);

  /// open() when the store exists, create() otherwise.
  static std::unique_ptr<Wiki> openOrCreate(const std::filesystem::path& store, bool demo);

  [[nodiscard]] SnapshotPtr snapshot() const;
  [[nodiscard]] const std::filesystem::path& store() const { return store_; }

  /// Parses `tokens` in `lang` and appends the full tree set as one entry.
  /// Creates the article when it does not exist yet.
  Entry addEntry(const std::string& article, const std::string& lang, const Tokens& tokens);
  Entry addComment(const std::string& article, const std::string& text);
  void deleteEntry(const std::string& id);
  /// Keeps only tree `index` of an ambiguous entry.
  Entry disambiguate(const std::string& id, std::size_t index);

  /// Replaces the lexicon module feeding `lang` and recompiles.
  RevalidationReport editLexicon(const std::string& lang, const std::string& source);
  /// Replaces any concrete or lexicon module. The abstract module is read-only.
  RevalidationReport editModule(const std::string& name, const std::string& source);

 private:
  explicit Wiki(std::filesystem::path store) : store_(std::move(store)) {}

  void publish(std::shared_ptr<Snapshot> next);
  void persistArticle(const Snapshot& s, const std::string& name) const;
  void persistMeta(const Snapshot& s) const;

  std::filesystem::path store_;
  std::mutex writer_;
  mutable std::mutex pointer_;
  SnapshotPtr current_;
};

/// Renders one article in `lang`. Throws NotFound.
RenderedArticle renderArticle(const Snapshot& s, const std::string& name, const std::string& lang);
RenderedEntry renderEntry(const Snapshot& s, const Entry& e, const std::string& lang);

/// The proper name of an entity in `lang`, or the entity id when the
/// language has no linearization for it.
std::string renderIndividual(const Snapshot& s, const std::string& entity, const std::string& lang);

/// Answers a question typed in `lang` against the current knowledge base.
/// Throws ParseRejected, BadRequest (not a supported question),
/// KbInconsistent and reasoner::ResourceLimit.
std::set<std::string> query(const Snapshot& s, const std::string& lang, const Tokens& tokens);

std::string kindName(EntryKind k);
std::string statusName(SemanticStatus::Kind k);
std::string outcomeName(EntryRevalidation::Outcome o);

/// ACE sentences of the demo geography article.
const std::vector<std::string>& demoSentences();

}  // namespace cnlwiki::wiki
