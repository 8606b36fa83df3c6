#pragma once

#include <compare>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cnlwiki::grammar {

/// Immutable function-application tree over an abstract syntax.
///
/// Nodes are shared, so copying a tree is cheap and subtrees can be reused
/// freely by enumerators and the parser's tree extraction.
class AbstractTree {
 public:
  AbstractTree() = default;
  explicit AbstractTree(std::string fun, std::vector<AbstractTree> children = {});

  [[nodiscard]] bool empty() const noexcept { return node_ == nullptr; }
  [[nodiscard]] const std::string& fun() const;
  [[nodiscard]] const std::vector<AbstractTree>& children() const;
  [[nodiscard]] std::size_t arity() const { return children().size(); }

  /// Height with lexical leaves at depth 0.
  [[nodiscard]] int depth() const;
  [[nodiscard]] std::size_t size() const;

  /// Every function name used in the tree, in preorder, with repetitions.
  void collectFunctions(std::vector<std::string>& out) const;

  /// Parenthesized prefix form: `f (g a) b`.
  [[nodiscard]] std::string str() const;
  static AbstractTree parse(std::string_view text);

  friend bool operator==(const AbstractTree& a, const AbstractTree& b);
  friend std::strong_ordering operator<=>(const AbstractTree& a, const AbstractTree& b);

 private:
  struct Node {
    std::string fun;
    std::vector<AbstractTree> children;
  };
  std::shared_ptr<const Node> node_;
};

class TreeSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AbstractTreeHash {
  std::size_t operator()(const AbstractTree& t) const;
};

}  // namespace cnlwiki::grammar
