#include <algorithm>
#include <map>
#include <tuple>

#include "cnlwiki/reasoner/reasoner.hpp"

namespace cnlwiki::reasoner {

void Signature::add(const ClassExpr& c) {
  std::vector<std::string> cls, roles, inds;
  c.collectSignature(cls, roles, inds);
  classes.insert(cls.begin(), cls.end());
  this->roles.insert(roles.begin(), roles.end());
  individuals.insert(inds.begin(), inds.end());
}

void Signature::add(const Axiom& a) {
  std::vector<std::string> cls, rs, inds;
  a.collectSignature(cls, rs, inds);
  classes.insert(cls.begin(), cls.end());
  roles.insert(rs.begin(), rs.end());
  individuals.insert(inds.begin(), inds.end());
}

Signature KnowledgeBase::signature() const {
  Signature s = declared;
  for (const auto& a : axioms) s.add(a.axiom);
  return s;
}

std::vector<Axiom> KnowledgeBase::plainAxioms() const {
  std::vector<Axiom> out;
  out.reserve(axioms.size());
  for (const auto& a : axioms) out.push_back(a.axiom);
  return out;
}

namespace {

// Concepts in negation normal form, interned.
enum class CK { Atom, NotAtom, And, Or, Exists, Forall, HasValue, NotHasValue };

struct Concept {
  CK kind;
  int atom = -1;  // Atom/NotAtom: class id; HasValue/NotHasValue: individual node
  int role = -1;
  bool inverse = false;
  int a = -1;
  int b = -1;
  auto key() const { return std::make_tuple(static_cast<int>(kind), atom, role, inverse, a, b); }
};

struct Edge {
  int from;
  int to;
  int role;
};

struct Node {
  std::vector<int> label;  // sorted concept ids
  int parent = -1;         // anonymous nodes only
  bool individual = false;
};

struct Graph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

bool hasConcept(const Node& n, int c) { return std::binary_search(n.label.begin(), n.label.end(), c); }

class Problem {
 public:
  Problem(const std::vector<Axiom>& axioms, const std::vector<ClassExpr>& fresh, long budget) : budget_(budget) {
    Signature sig;
    for (const auto& a : axioms) sig.add(a);
    for (const auto& c : fresh) sig.add(c);
    for (const auto& ind : sig.individuals) individualNode(ind);
    for (const auto& a : axioms) addAxiom(a);
    for (auto& n : initial_.nodes) {
      for (int g : global_) addConcept(n.label, g);
    }
    // Domains are never empty, so a TBox alone still needs one element.
    if (!fresh.empty() || initial_.nodes.empty()) {
      int id = static_cast<int>(initial_.nodes.size());
      initial_.nodes.push_back({{}, -1, true});
      for (int g : global_) addConcept(initial_.nodes[static_cast<std::size_t>(id)].label, g);
      for (const auto& c : fresh) {
        int cid = nnf(c, false);
        addConcept(initial_.nodes[static_cast<std::size_t>(id)].label, cid);
      }
    }
  }

  Verdict solve() {
    return expand(initial_);
  }

 private:
  static bool addConcept(std::vector<int>& label, int c) {
    auto it = std::lower_bound(label.begin(), label.end(), c);
    if (it != label.end() && *it == c) return false;
    label.insert(it, c);
    return true;
  }

  int intern(Concept c) {
    auto [it, inserted] = conceptIndex_.emplace(c.key(), static_cast<int>(concepts_.size()));
    if (inserted) concepts_.push_back(c);
    return it->second;
  }

  int roleId(const std::string& name) {
    auto [it, inserted] = roleIndex_.emplace(name, static_cast<int>(symmetric_.size()));
    if (inserted) {
      symmetric_.push_back(false);
      asymmetric_.push_back(false);
    }
    return it->second;
  }

  int classId(const std::string& name) {
    auto [it, inserted] = classIndex_.emplace(name, static_cast<int>(classIndex_.size()));
    return it->second;
  }

  int individualNode(const std::string& name) {
    auto it = individuals_.find(name);
    if (it != individuals_.end()) return it->second;
    int id = static_cast<int>(initial_.nodes.size());
    initial_.nodes.push_back({{}, -1, true});
    individuals_.emplace(name, id);
    return id;
  }

  int nnf(const ClassExpr& c, bool neg) {
    using K = ClassExpr::Kind;
    switch (c.kind()) {
      case K::Named:
        return intern({neg ? CK::NotAtom : CK::Atom, classId(c.name())});
      case K::Complement:
        return nnf(c.operand(), !neg);
      case K::Intersection: {
        int a = nnf(c.operand(0), neg);
        int b = nnf(c.operand(1), neg);
        if (a > b) std::swap(a, b);
        return intern({neg ? CK::Or : CK::And, -1, -1, false, a, b});
      }
      case K::Exists: {
        int filler = nnf(c.operand(), neg);
        return intern({neg ? CK::Forall : CK::Exists, -1, roleId(c.role().name), c.role().inverse, filler});
      }
      case K::HasValue:
        return intern({neg ? CK::NotHasValue : CK::HasValue, individualNode(c.name()), roleId(c.role().name),
                       c.role().inverse});
    }
    return -1;
  }

  void addAxiom(const Axiom& a) {
    using K = Axiom::Kind;
    switch (a.kind) {
      case K::SubClassOf: {
        const ClassExpr& sub = a.classes[0];
        int sup = nnf(a.classes[1], false);
        if (sub.kind() == ClassExpr::Kind::Named) {
          unfold_[classId(sub.name())].push_back(sup);
        } else {
          int notSub = nnf(sub, true);
          global_.push_back(intern({CK::Or, -1, -1, false, std::min(notSub, sup), std::max(notSub, sup)}));
        }
        break;
      }
      case K::ClassAssertion: {
        int n = individualNode(a.individuals[0]);
        addConcept(initial_.nodes[static_cast<std::size_t>(n)].label, nnf(a.classes[0], false));
        break;
      }
      case K::RoleAssertion:
        initial_.edges.push_back(
            {individualNode(a.individuals[0]), individualNode(a.individuals[1]), roleId(a.role)});
        break;
      case K::NegRoleAssertion:
        negated_.push_back({individualNode(a.individuals[0]), individualNode(a.individuals[1]), roleId(a.role)});
        break;
      case K::Asymmetric:
        asymmetric_[static_cast<std::size_t>(roleId(a.role))] = true;
        break;
      case K::Symmetric:
        symmetric_[static_cast<std::size_t>(roleId(a.role))] = true;
        break;
    }
  }

  // ---- graph queries ----

  bool holds(const Graph& g, int role, int from, int to) const {
    bool sym = symmetric_[static_cast<std::size_t>(role)];
    for (const auto& e : g.edges) {
      if (e.role != role) continue;
      if (e.from == from && e.to == to) return true;
      if (sym && e.from == to && e.to == from) return true;
    }
    return false;
  }

  std::vector<int> neighbours(const Graph& g, int x, int role, bool inverse) const {
    std::vector<int> out;
    bool sym = symmetric_[static_cast<std::size_t>(role)];
    for (const auto& e : g.edges) {
      if (e.role != role) continue;
      if ((!inverse || sym) && e.from == x) out.push_back(e.to);
      if ((inverse || sym) && e.to == x) out.push_back(e.from);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void addEdge(Graph& g, int role, bool inverse, int x, int y) const {
    int from = inverse ? y : x;
    int to = inverse ? x : y;
    if (!holds(g, role, from, to)) g.edges.push_back({from, to, role});
  }

  bool clash(const Graph& g) const {
    for (std::size_t x = 0; x < g.nodes.size(); ++x) {
      for (int c : g.nodes[x].label) {
        const Concept& k = concepts_[static_cast<std::size_t>(c)];
        if (k.kind == CK::NotAtom && hasConcept(g.nodes[x], intern_const(CK::Atom, k.atom))) return true;
        if (k.kind == CK::NotHasValue) {
          auto ns = neighbours(g, static_cast<int>(x), k.role, k.inverse);
          if (std::binary_search(ns.begin(), ns.end(), k.atom)) return true;
        }
      }
    }
    for (const auto& e : g.edges) {
      if (asymmetric_[static_cast<std::size_t>(e.role)] && holds(g, e.role, e.to, e.from)) return true;
    }
    for (const auto& n : negated_) {
      if (holds(g, n.role, n.from, n.to)) return true;
    }
    return false;
  }

  // Atom ids for lookups that must not intern new concepts.
  int intern_const(CK kind, int atom) const {
    auto it = conceptIndex_.find(Concept{kind, atom}.key());
    return it == conceptIndex_.end() ? -1 : it->second;
  }

  std::vector<std::pair<int, bool>> edgeLabel(const Graph& g, int parent, int child) const {
    std::vector<std::pair<int, bool>> out;
    for (const auto& e : g.edges) {
      if (e.from == parent && e.to == child) out.emplace_back(e.role, false);
      if (e.from == child && e.to == parent) out.emplace_back(e.role, true);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // 0 = active, 1 = directly blocked, 2 = indirectly blocked
  std::vector<int> blocking(const Graph& g) const {
    std::vector<int> status(g.nodes.size(), 0);
    // parents precede children, so one forward pass sees ancestors first
    for (std::size_t x = 0; x < g.nodes.size(); ++x) {
      const Node& n = g.nodes[x];
      if (n.individual) continue;
      int p = n.parent;
      if (status[static_cast<std::size_t>(p)] != 0) {
        status[x] = 2;
        continue;
      }
      const Node& pn = g.nodes[static_cast<std::size_t>(p)];
      if (pn.individual) continue;
      auto label = edgeLabel(g, p, static_cast<int>(x));
      for (int y = pn.parent; y >= 0 && !g.nodes[static_cast<std::size_t>(y)].individual;
           y = g.nodes[static_cast<std::size_t>(y)].parent) {
        const Node& yn = g.nodes[static_cast<std::size_t>(y)];
        int yp = yn.parent;
        if (g.nodes[static_cast<std::size_t>(yp)].individual) break;
        if (yn.label == n.label && g.nodes[static_cast<std::size_t>(yp)].label == pn.label &&
            edgeLabel(g, yp, y) == label) {
          status[x] = 1;
          break;
        }
      }
    }
    return status;
  }

  // ---- rules ----

  // ⊓, unfolding, ∀ and HasValue until nothing changes.
  void deterministic(Graph& g) const {
    bool changed = true;
    while (changed) {
      changed = false;
      auto status = blocking(g);
      for (std::size_t x = 0; x < g.nodes.size(); ++x) {
        if (status[x] == 2) continue;
        for (std::size_t i = 0; i < g.nodes[x].label.size(); ++i) {
          int c = g.nodes[x].label[i];
          const Concept k = concepts_[static_cast<std::size_t>(c)];
          switch (k.kind) {
            case CK::And:
              changed |= addConcept(g.nodes[x].label, k.a);
              changed |= addConcept(g.nodes[x].label, k.b);
              break;
            case CK::Atom: {
              auto u = unfold_.find(k.atom);
              if (u != unfold_.end()) {
                for (int d : u->second) changed |= addConcept(g.nodes[x].label, d);
              }
              break;
            }
            case CK::Forall:
              for (int y : neighbours(g, static_cast<int>(x), k.role, k.inverse)) {
                changed |= addConcept(g.nodes[static_cast<std::size_t>(y)].label, k.a);
              }
              break;
            case CK::HasValue: {
              std::size_t before = g.edges.size();
              addEdge(g, k.role, k.inverse, static_cast<int>(x), k.atom);
              changed |= g.edges.size() != before;
              break;
            }
            default:
              break;
          }
        }
      }
    }
  }

  Verdict expand(Graph g) {
    while (true) {
      deterministic(g);
      if (clash(g)) return Verdict::No;
      auto status = blocking(g);

      for (std::size_t x = 0; x < g.nodes.size(); ++x) {
        if (status[x] == 2) continue;
        for (int c : g.nodes[x].label) {
          const Concept& k = concepts_[static_cast<std::size_t>(c)];
          if (k.kind != CK::Or || hasConcept(g.nodes[x], k.a) || hasConcept(g.nodes[x], k.b)) continue;
          bool unknown = false;
          for (int d : {k.a, k.b}) {
            Graph branch = g;
            addConcept(branch.nodes[x].label, d);
            Verdict v = expand(std::move(branch));
            if (v == Verdict::Yes) return Verdict::Yes;
            if (v == Verdict::Unknown) unknown = true;
          }
          return unknown ? Verdict::Unknown : Verdict::No;
        }
      }

      bool created = false;
      for (std::size_t x = 0; x < g.nodes.size() && !created; ++x) {
        if (status[x] != 0) continue;
        for (int c : g.nodes[x].label) {
          const Concept& k = concepts_[static_cast<std::size_t>(c)];
          if (k.kind != CK::Exists) continue;
          auto ns = neighbours(g, static_cast<int>(x), k.role, k.inverse);
          bool witnessed = std::any_of(ns.begin(), ns.end(), [&](int y) {
            return hasConcept(g.nodes[static_cast<std::size_t>(y)], k.a);
          });
          if (witnessed) continue;
          if (--budget_ < 0) return Verdict::Unknown;
          int y = static_cast<int>(g.nodes.size());
          Node fresh{{}, static_cast<int>(x), false};
          for (int gc : global_) addConcept(fresh.label, gc);
          addConcept(fresh.label, k.a);
          g.nodes.push_back(std::move(fresh));
          addEdge(g, k.role, k.inverse, static_cast<int>(x), y);
          created = true;
          break;
        }
      }
      if (!created) return Verdict::Yes;
    }
  }

  long budget_;
  Graph initial_;
  std::vector<Concept> concepts_;
  std::map<std::tuple<int, int, int, bool, int, int>, int> conceptIndex_;
  std::map<std::string, int> roleIndex_;
  std::map<std::string, int> classIndex_;
  std::map<std::string, int> individuals_;
  std::vector<bool> symmetric_;
  std::vector<bool> asymmetric_;
  std::map<int, std::vector<int>> unfold_;
  std::vector<int> global_;
  std::vector<Edge> negated_;
};

}  // namespace

Verdict Tableau::satisfiable(const std::vector<Axiom>& axioms, const std::vector<ClassExpr>& freshIndividual) const {
  Problem p(axioms, freshIndividual, opt_.nodeBudget);
  return p.solve();
}

}  // namespace cnlwiki::reasoner
