#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnlwiki/grammar/tree.hpp"
#include "cnlwiki/semantics/axiom.hpp"

namespace cnlwiki::semantics {

using grammar::AbstractTree;

/// Tree outside the fragment's semantic image.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axiom outside the image of treeToAxiom.
class NotVerbalizable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Axiom treeToAxiom(const AbstractTree& s);
ClassExpr treeToQuery(const AbstractTree& q);

struct EntrySemantics {
  enum class Kind { Included, Excluded, Unsupported };
  Kind kind;
  std::optional<Axiom> axiom;  // Included only
  std::string reason;          // Unsupported / Excluded explanation
};

/// One axiom for the whole tree set when all trees agree on it.
EntrySemantics entrySemantics(const std::vector<AbstractTree>& trees);

/// Canonical tree for an axiom; treeToAxiom(axiomToTree(a)) == a.
AbstractTree axiomToTree(const Axiom& a);

/// Lexical function for an entity id: ("country", "N") -> `country_N`.
std::string lexicalFunction(const std::string& entity, const std::string& wordClass);

}  // namespace cnlwiki::semantics
