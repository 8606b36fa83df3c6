#include <algorithm>

#include "cnlwiki/reasoner/reasoner.hpp"

namespace cnlwiki::reasoner {

ConsistencyReport isConsistent(const KnowledgeBase& kb, Options opt) {
  Tableau tableau(opt);
  auto all = kb.plainAxioms();
  Verdict v = tableau.satisfiable(all);
  if (v != Verdict::No) return {v, {}};

  std::vector<bool> kept(kb.axioms.size(), true);
  for (std::size_t i = 0; i < kb.axioms.size(); ++i) {
    kept[i] = false;
    std::vector<Axiom> rest;
    for (std::size_t j = 0; j < kb.axioms.size(); ++j) {
      if (kept[j]) rest.push_back(kb.axioms[j].axiom);
    }
    if (tableau.satisfiable(rest) != Verdict::No) kept[i] = true;
  }
  ConsistencyReport out{Verdict::No, {}};
  for (std::size_t i = 0; i < kb.axioms.size(); ++i) {
    const auto& id = kb.axioms[i].entryId;
    if (kept[i] && std::find(out.conflict.begin(), out.conflict.end(), id) == out.conflict.end()) {
      out.conflict.push_back(id);
    }
  }
  return out;
}

Verdict isSubsumedBy(const KnowledgeBase& kb, const ClassExpr& c, const ClassExpr& d, Options opt) {
  Verdict v = Tableau(opt).satisfiable(kb.plainAxioms(), {c, ClassExpr::complement(d)});
  if (v == Verdict::Unknown) return v;
  return v == Verdict::No ? Verdict::Yes : Verdict::No;
}

Taxonomy classify(const KnowledgeBase& kb, Options opt) {
  Tableau tableau(opt);
  auto axioms = kb.plainAxioms();
  const Signature sig = kb.signature();
  std::vector<std::string> classes(sig.classes.begin(), sig.classes.end());
  Taxonomy out;

  std::vector<std::string> live;
  for (const auto& c : classes) {
    Verdict v = tableau.satisfiable(axioms, {ClassExpr::named(c)});
    if (v == Verdict::Unknown) throw ResourceLimit();
    if (v == Verdict::No) out.unsatisfiable.insert(c);
    else live.push_back(c);
  }

  const std::size_t n = live.size();
  std::vector<std::vector<bool>> sub(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        sub[i][j] = true;
        continue;
      }
      Verdict v = tableau.satisfiable(axioms, {ClassExpr::named(live[i]), ClassExpr::complement(ClassExpr::named(live[j]))});
      if (v == Verdict::Unknown) throw ResourceLimit();
      sub[i][j] = v == Verdict::No;
    }
  }

  // representative = first (smallest) name of each equivalence class
  std::vector<std::size_t> rep(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep[i] = i;
    for (std::size_t j = 0; j < i; ++j) {
      if (sub[i][j] && sub[j][i]) {
        rep[i] = rep[j];
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rep[i] != i) continue;
    TaxonomyNode node{live[i], {}, {}};
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && rep[j] == i) node.equivalents.insert(live[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (rep[j] != j || j == i || !sub[i][j] || sub[j][i]) continue;
      bool direct = true;
      for (std::size_t k = 0; k < n && direct; ++k) {
        if (rep[k] != k || k == i || k == j) continue;
        if (sub[i][k] && !sub[k][i] && sub[k][j] && !sub[j][k]) direct = false;
      }
      if (direct) node.parents.insert(live[j]);
    }
    out.nodes.push_back(std::move(node));
  }
  return out;
}

std::set<std::string> answerQuery(const KnowledgeBase& kb, const ClassExpr& q, Options opt) {
  Tableau tableau(opt);
  auto axioms = kb.plainAxioms();
  Signature sig = kb.signature();
  sig.add(q);
  std::set<std::string> out;
  for (const auto& ind : sig.individuals) {
    auto test = axioms;
    test.push_back(Axiom::classAssertion(ClassExpr::complement(q), ind));
    Verdict v = tableau.satisfiable(test);
    if (v == Verdict::Unknown) throw ResourceLimit();
    if (v == Verdict::No) out.insert(ind);
  }
  return out;
}

}  // namespace cnlwiki::reasoner
