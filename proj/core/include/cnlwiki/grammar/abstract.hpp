#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnlwiki/grammar/tree.hpp"

namespace cnlwiki::grammar {

struct FunctionSig {
  std::string name;
  std::vector<std::string> args;
  std::string result;
  bool lexical = false;  // defined by lexicon modules rather than the abstract module
};

/// Raised for trees that do not fit the abstract syntax: unknown functions
/// (typically stale trees after a grammar change), wrong arity, or
/// ill-typed arguments.
class IllTypedTree : public std::runtime_error {
 public:
  IllTypedTree(const std::string& msg, std::vector<std::string> unknownFunctions = {})
      : std::runtime_error(msg), unknown_(std::move(unknownFunctions)) {}
  [[nodiscard]] const std::vector<std::string>& unknownFunctions() const noexcept { return unknown_; }

 private:
  std::vector<std::string> unknown_;
};

class AbstractSyntax {
 public:
  AbstractSyntax() = default;
  AbstractSyntax(std::string name, std::vector<std::string> cats, std::vector<FunctionSig> funs,
                 std::vector<std::string> startCats);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::vector<std::string>& categories() const { return cats_; }
  [[nodiscard]] const std::vector<FunctionSig>& functions() const { return funs_; }
  [[nodiscard]] const std::vector<std::string>& startCategories() const { return startCats_; }

  [[nodiscard]] bool hasCategory(const std::string& c) const { return catSet_.count(c) > 0; }
  [[nodiscard]] const FunctionSig* find(const std::string& fun) const;
  [[nodiscard]] int index(const std::string& fun) const;
  [[nodiscard]] bool isStart(const std::string& cat) const;

  /// Category of a well-typed tree; throws IllTypedTree otherwise.
  [[nodiscard]] std::string typeOf(const AbstractTree& t) const;
  [[nodiscard]] bool wellTyped(const AbstractTree& t) const;

  /// Function names in `t` that this syntax does not declare (sorted, unique).
  [[nodiscard]] std::vector<std::string> unknownFunctions(const AbstractTree& t) const;

  /// All well-typed trees of `cat` with depth <= maxDepth, smallest depth first.
  [[nodiscard]] std::vector<AbstractTree> treesUpTo(const std::string& cat, int maxDepth) const;

  /// Streams the same set as treesUpTo without materializing the top level.
  void forEachTree(const std::string& cat, int maxDepth,
                   const std::function<void(const AbstractTree&)>& visit) const;

 private:
  std::string name_;
  std::vector<std::string> cats_;
  std::set<std::string> catSet_;
  std::vector<FunctionSig> funs_;
  std::map<std::string, int> funIndex_;
  std::vector<std::string> startCats_;
};

/// Lexical identifiers carry their word class as suffix: `country_N`,
/// `germany_PN`, `border_V2`.
std::optional<std::string> lexicalCategory(const std::string& identifier);

}  // namespace cnlwiki::grammar
