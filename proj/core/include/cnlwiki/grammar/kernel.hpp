#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnlwiki/grammar/pmcfg.hpp"
#include "cnlwiki/grammar/tree.hpp"

namespace cnlwiki::grammar {

using Tokens = std::vector<std::string>;

/// A lexical function the language has no lexicon line for.
class MissingLinearization : public std::runtime_error {
 public:
  MissingLinearization(const std::string& fun, const std::string& lang)
      : std::runtime_error("no linearization of " + fun + " in " + lang), fun_(fun) {}
  [[nodiscard]] const std::string& function() const { return fun_; }

 private:
  std::string fun_;
};

/// Start-field tokens of `t`, first variant everywhere. No final punctuation.
/// Throws IllTypedTree for stale or ill-typed trees.
Tokens linearize(const CompiledGrammar& g, const std::string& lang, const AbstractTree& t);

/// Every variant combination, duplicates removed, canonical first.
std::vector<Tokens> linearizeAll(const CompiledGrammar& g, const std::string& lang, const AbstractTree& t);

/// Canonical linearization with `[ ... ]` around every NP, VP and relative
/// clause constituent.
Tokens linearizeBracketed(const CompiledGrammar& g, const std::string& lang, const AbstractTree& t);

/// All S/Q trees whose linearization is `tokens`. A trailing terminator
/// (`.` for S, `?` for Q) is accepted and checked. Unknown tokens give ∅.
std::vector<AbstractTree> parse(const CompiledGrammar& g, const std::string& lang, const Tokens& tokens);

/// Tokens that extend `prefix` towards some complete, terminated sentence.
std::set<std::string> complete(const CompiledGrammar& g, const std::string& lang, const Tokens& prefix);

/// Longest prefix of `tokens` that can still be extended to a sentence.
std::size_t longestViablePrefix(const CompiledGrammar& g, const std::string& lang, const Tokens& tokens);

/// Canonical target linearizations of every source parse.
std::set<Tokens> translate(const CompiledGrammar& g, const std::string& from, const std::string& to,
                           const Tokens& tokens);

/// Convenience: `linearize` plus the start category's terminator.
Tokens linearizeSentence(const CompiledGrammar& g, const std::string& lang, const AbstractTree& t);

}  // namespace cnlwiki::grammar
