#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnlwiki/semantics/axiom.hpp"

namespace cnlwiki::reasoner {

using semantics::Axiom;
using semantics::ClassExpr;
using semantics::RoleExpr;

struct Signature {
  std::set<std::string> classes;
  std::set<std::string> roles;
  std::set<std::string> individuals;

  void add(const Axiom& a);
  void add(const ClassExpr& c);
};

struct KbAxiom {
  Axiom axiom;
  std::string entryId;  // provenance; may be empty
};

struct KnowledgeBase {
  std::vector<KbAxiom> axioms;
  Signature declared;  // lexicon entities, whether or not any axiom uses them
  long generation = 0;

  [[nodiscard]] Signature signature() const;
  [[nodiscard]] std::vector<Axiom> plainAxioms() const;
};

enum class Verdict { Yes, No, Unknown };

/// The node budget ran out; the question stays open.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit() : std::runtime_error("reasoner node budget exhausted") {}
};

struct Options {
  long nodeBudget = 10000;
};

/// Tableau decision procedure for ALC with inverse roles, HasValue,
/// individuals, symmetric and asymmetric roles, with pairwise blocking.
class Tableau {
 public:
  explicit Tableau(Options opt = {}) : opt_(opt) {}

  /// Yes when the axioms (plus optional assertions on a fresh individual)
  /// have a model.
  [[nodiscard]] Verdict satisfiable(const std::vector<Axiom>& axioms,
                                    const std::vector<ClassExpr>& freshIndividual = {}) const;

 private:
  Options opt_;
};

struct ConsistencyReport {
  Verdict consistent = Verdict::Yes;
  std::vector<std::string> conflict;  // entry ids, set when inconsistent
};

struct TaxonomyNode {
  std::string cls;
  std::set<std::string> parents;      // direct named subsumers
  std::set<std::string> equivalents;  // other names for the same class
};

struct Taxonomy {
  std::vector<TaxonomyNode> nodes;     // one per equivalence class, by representative name
  std::set<std::string> unsatisfiable;
};

/// Greedy deletion: drops each axiom in turn and keeps it out when the rest
/// stays inconsistent. The result is inconsistent but not necessarily minimum.
ConsistencyReport isConsistent(const KnowledgeBase& kb, Options opt = {});

Verdict isSubsumedBy(const KnowledgeBase& kb, const ClassExpr& c, const ClassExpr& d, Options opt = {});

/// Throws ResourceLimit when any subsumption test is undecided.
Taxonomy classify(const KnowledgeBase& kb, Options opt = {});

/// Throws ResourceLimit when any instance check is undecided.
std::set<std::string> answerQuery(const KnowledgeBase& kb, const ClassExpr& q, Options opt = {});

// ---- bounded-model oracle ----

struct Interpretation {
  int domainSize = 0;
  std::map<std::string, std::set<int>> classes;
  std::map<std::string, std::set<std::pair<int, int>>> roles;
  std::map<std::string, int> individuals;

  [[nodiscard]] std::set<int> extension(const ClassExpr& c) const;
  [[nodiscard]] bool satisfies(const Axiom& a) const;
  [[nodiscard]] std::string str() const;
};

/// Calls `visit` for every interpretation of `sig` with domain 1..maxDomain
/// (individuals may share elements). Stops when `visit` returns false.
void forEachInterpretation(const Signature& sig, int maxDomain, const std::function<bool(const Interpretation&)>& visit);

/// Some interpretation of size <= maxDomain satisfying every axiom.
std::optional<Interpretation> boundedModel(const std::vector<Axiom>& axioms, int maxDomain,
                                           const Signature& extra = {});

struct BoundedResult {
  enum class Kind { Entailed, CounterModel, Unknown };
  Kind kind;
  std::optional<Interpretation> counterModel;
};

/// For each interpretation with domain 1..maxDomain over the universe's
/// signature, the bitmask of universe axioms it satisfies (distinct masks
/// only). A subset S of the universe has a bounded model iff some mask
/// contains S. At most 64 axioms.
std::vector<std::uint64_t> satisfactionProfiles(const std::vector<Axiom>& universe, int maxDomain);

/// Entailed means only "no counter-model up to maxDomain". Unknown when the
/// search space is too large to enumerate.
BoundedResult boundedEntails(const std::vector<Axiom>& kb, const Axiom& axiom, int maxDomain);

}  // namespace cnlwiki::reasoner
