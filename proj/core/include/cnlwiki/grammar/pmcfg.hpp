#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "cnlwiki/grammar/abstract.hpp"
#include "cnlwiki/grammar/source.hpp"

namespace cnlwiki::grammar {

/// One element of a linearization sequence: a terminal token or a
/// reference to field `field` of argument `arg`.
struct Symbol {
  std::int32_t arg = -1;  // -1 marks a token
  std::int32_t value = 0;  // token id, or field index when arg >= 0

  static Symbol token(int id) { return {-1, id}; }
  static Symbol ref(int arg, int field) { return {arg, field}; }
  [[nodiscard]] bool isToken() const { return arg < 0; }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

using Sequence = std::vector<Symbol>;

/// Abstract category specialised to one assignment of its inherent
/// parameters. All string fields of the lincat become numbered fields.
struct ConcreteCategory {
  std::string abstractCat;
  std::vector<std::pair<std::string, std::string>> inherent;  // label -> parameter value
  std::vector<std::string> fieldLabels;                      // e.g. "s Sg Nom"
  [[nodiscard]] int fieldCount() const { return static_cast<int>(fieldLabels.size()); }
  [[nodiscard]] std::string str() const;
};

struct Production {
  int result = 0;
  int fun = 0;  // index into the abstract syntax, or kWrapFun for sentence wrappers
  std::vector<int> args;
  std::vector<int> fields;  // sequence ids, one per field of `result`
};

inline constexpr int kWrapFun = -1;

class TokenTable {
 public:
  int intern(const std::string& tok);
  [[nodiscard]] int find(const std::string& tok) const;  // -1 when absent
  [[nodiscard]] const std::string& str(int id) const { return toks_[static_cast<std::size_t>(id)]; }
  [[nodiscard]] std::size_t size() const { return toks_.size(); }

 private:
  std::vector<std::string> toks_;
  std::unordered_map<std::string, int> ids_;
};

/// PMCFG for one language.
struct ConcreteGrammar {
  std::string language;
  std::string moduleName;
  std::vector<ConcreteCategory> categories;
  std::map<std::string, std::vector<int>> categoriesOf;  // abstract cat -> concrete cats
  std::vector<Sequence> sequences;
  std::vector<Production> productions;
  std::vector<std::vector<int>> productionsOfCategory;
  std::vector<std::vector<int>> productionsOfFunction;  // indexed like AbstractSyntax::functions()
  TokenTable tokens;
  std::map<std::string, std::string> terminators;  // start cat -> final punctuation
  int utteranceCategory = -1;                      // wraps start fields + terminator
  std::vector<std::string> missingLexical;         // lexicon identifiers without a lin here

  [[nodiscard]] bool hasProductions(int fun) const {
    return fun >= 0 && static_cast<std::size_t>(fun) < productionsOfFunction.size() &&
           !productionsOfFunction[static_cast<std::size_t>(fun)].empty();
  }
};

/// Result of compiling every module of a wiki grammar. Immutable once built.
struct CompiledGrammar {
  AbstractSyntax abstract;
  std::map<std::string, ConcreteGrammar> languages;  // keyed by language tag
  std::vector<Diagnostic> warnings;

  [[nodiscard]] std::vector<std::string> languageTags() const;
  [[nodiscard]] const ConcreteGrammar& concrete(const std::string& lang) const;
  [[nodiscard]] bool hasLanguage(const std::string& lang) const { return languages.count(lang) > 0; }
};

using GrammarPtr = std::shared_ptr<const CompiledGrammar>;

class UnknownLanguage : public std::runtime_error {
 public:
  explicit UnknownLanguage(const std::string& lang) : std::runtime_error("unknown language: " + lang) {}
};

}  // namespace cnlwiki::grammar
