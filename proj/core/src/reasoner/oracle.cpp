#include <algorithm>
#include <stdexcept>
// Exhaustive finite-model search used as a test oracle for the tableau.
// Individuals may denote the same element (no unique-name assumption).

#include <sstream>
#include <unordered_set>

#include "cnlwiki/reasoner/reasoner.hpp"

namespace cnlwiki::reasoner {

namespace {

constexpr std::uint64_t kSearchCap = 1ULL << 27;

struct Names {
  std::vector<std::string> classes, roles, individuals;
  std::map<std::string, int> classIdx, roleIdx, indIdx;

  explicit Names(const Signature& sig) {
    for (const auto& c : sig.classes) {
      classIdx[c] = static_cast<int>(classes.size());
      classes.push_back(c);
    }
    for (const auto& r : sig.roles) {
      roleIdx[r] = static_cast<int>(roles.size());
      roles.push_back(r);
    }
    for (const auto& i : sig.individuals) {
      indIdx[i] = static_cast<int>(individuals.size());
      individuals.push_back(i);
    }
  }
};

struct FastExpr {
  ClassExpr::Kind kind = ClassExpr::Kind::Named;
  int id = -1;  // class or individual
  int role = -1;
  bool inverse = false;
  std::vector<FastExpr> kids;
};

struct FastAxiom {
  Axiom::Kind kind = Axiom::Kind::SubClassOf;
  std::vector<FastExpr> classes;
  int role = -1;
  std::vector<int> inds;
};

FastExpr compile(const ClassExpr& c, const Names& names) {
  FastExpr out;
  out.kind = c.kind();
  switch (c.kind()) {
    case ClassExpr::Kind::Named:
      out.id = names.classIdx.at(c.name());
      break;
    case ClassExpr::Kind::HasValue:
      out.id = names.indIdx.at(c.name());
      out.role = names.roleIdx.at(c.role().name);
      out.inverse = c.role().inverse;
      break;
    case ClassExpr::Kind::Exists:
      out.role = names.roleIdx.at(c.role().name);
      out.inverse = c.role().inverse;
      out.kids.push_back(compile(c.operand(), names));
      break;
    case ClassExpr::Kind::Complement:
      out.kids.push_back(compile(c.operand(), names));
      break;
    case ClassExpr::Kind::Intersection:
      out.kids.push_back(compile(c.operand(0), names));
      out.kids.push_back(compile(c.operand(1), names));
      break;
  }
  return out;
}

FastAxiom compile(const Axiom& a, const Names& names) {
  FastAxiom out;
  out.kind = a.kind;
  for (const auto& c : a.classes) out.classes.push_back(compile(c, names));
  if (!a.role.empty()) out.role = names.roleIdx.at(a.role);
  for (const auto& i : a.individuals) out.inds.push_back(names.indIdx.at(i));
  return out;
}

// Domain elements are bits of a 32-bit mask.
struct FastInterp {
  int n = 0;
  std::vector<std::uint32_t> cls;
  std::vector<std::vector<std::uint32_t>> succ;  // [role][x] -> successors
  std::vector<std::vector<std::uint32_t>> pred;
  std::vector<int> ind;

  [[nodiscard]] std::uint32_t full() const { return n >= 32 ? ~0u : (1u << n) - 1; }

  [[nodiscard]] std::uint32_t ext(const FastExpr& e) const {
    switch (e.kind) {
      case ClassExpr::Kind::Named:
        return cls[static_cast<std::size_t>(e.id)];
      case ClassExpr::Kind::Complement:
        return full() & ~ext(e.kids[0]);
      case ClassExpr::Kind::Intersection:
        return ext(e.kids[0]) & ext(e.kids[1]);
      case ClassExpr::Kind::Exists: {
        std::uint32_t filler = ext(e.kids[0]);
        const auto& rel = e.inverse ? pred[static_cast<std::size_t>(e.role)] : succ[static_cast<std::size_t>(e.role)];
        std::uint32_t out = 0;
        for (int x = 0; x < n; ++x) {
          if (rel[static_cast<std::size_t>(x)] & filler) out |= 1u << x;
        }
        return out;
      }
      case ClassExpr::Kind::HasValue: {
        std::uint32_t target = 1u << ind[static_cast<std::size_t>(e.id)];
        const auto& rel = e.inverse ? pred[static_cast<std::size_t>(e.role)] : succ[static_cast<std::size_t>(e.role)];
        std::uint32_t out = 0;
        for (int x = 0; x < n; ++x) {
          if (rel[static_cast<std::size_t>(x)] & target) out |= 1u << x;
        }
        return out;
      }
    }
    return 0;
  }

  [[nodiscard]] bool related(int role, int x, int y) const {
    return (succ[static_cast<std::size_t>(role)][static_cast<std::size_t>(x)] >> y) & 1u;
  }

  [[nodiscard]] bool satisfies(const FastAxiom& a) const {
    switch (a.kind) {
      case Axiom::Kind::SubClassOf:
        return (ext(a.classes[0]) & ~ext(a.classes[1])) == 0;
      case Axiom::Kind::ClassAssertion:
        return (ext(a.classes[0]) >> ind[static_cast<std::size_t>(a.inds[0])]) & 1u;
      case Axiom::Kind::RoleAssertion:
        return related(a.role, ind[static_cast<std::size_t>(a.inds[0])], ind[static_cast<std::size_t>(a.inds[1])]);
      case Axiom::Kind::NegRoleAssertion:
        return !related(a.role, ind[static_cast<std::size_t>(a.inds[0])], ind[static_cast<std::size_t>(a.inds[1])]);
      case Axiom::Kind::Asymmetric:
        for (int x = 0; x < n; ++x) {
          if (succ[static_cast<std::size_t>(a.role)][static_cast<std::size_t>(x)] &
              pred[static_cast<std::size_t>(a.role)][static_cast<std::size_t>(x)]) {
            return false;
          }
        }
        return true;
      case Axiom::Kind::Symmetric:
        for (int x = 0; x < n; ++x) {
          if (succ[static_cast<std::size_t>(a.role)][static_cast<std::size_t>(x)] !=
              pred[static_cast<std::size_t>(a.role)][static_cast<std::size_t>(x)]) {
            return false;
          }
        }
        return true;
    }
    return false;
  }

  [[nodiscard]] Interpretation materialize(const Names& names) const {
    Interpretation out;
    out.domainSize = n;
    for (std::size_t c = 0; c < names.classes.size(); ++c) {
      auto& s = out.classes[names.classes[c]];
      for (int x = 0; x < n; ++x) {
        if ((cls[c] >> x) & 1u) s.insert(x);
      }
    }
    for (std::size_t r = 0; r < names.roles.size(); ++r) {
      auto& s = out.roles[names.roles[r]];
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          if (related(static_cast<int>(r), x, y)) s.insert({x, y});
        }
      }
    }
    for (std::size_t i = 0; i < names.individuals.size(); ++i) out.individuals[names.individuals[i]] = ind[i];
    return out;
  }
};

std::uint64_t searchSize(const Names& names, int maxDomain) {
  std::uint64_t total = 0;
  for (int n = 1; n <= maxDomain; ++n) {
    std::size_t bits = names.classes.size() * static_cast<std::size_t>(n) +
                       names.roles.size() * static_cast<std::size_t>(n * n);
    if (bits >= 40) return ~0ULL;
    std::uint64_t count = 1ULL << bits;
    for (std::size_t i = 0; i < names.individuals.size(); ++i) {
      count *= static_cast<std::uint64_t>(n);
      if (count > kSearchCap * 16) return ~0ULL;
    }
    total += count;
  }
  return total;
}

// Visits every interpretation; `visit` returns false to stop.
template <typename Visit>
void enumerate(const Names& names, int maxDomain, Visit&& visit) {
  const std::size_t k = names.classes.size();
  const std::size_t m = names.roles.size();
  const std::size_t p = names.individuals.size();
  for (int n = 1; n <= maxDomain; ++n) {
    FastInterp I;
    I.n = n;
    I.cls.assign(k, 0);
    I.succ.assign(m, std::vector<std::uint32_t>(static_cast<std::size_t>(n), 0));
    I.pred.assign(m, std::vector<std::uint32_t>(static_cast<std::size_t>(n), 0));
    I.ind.assign(p, 0);
    const std::size_t classBits = k * static_cast<std::size_t>(n);
    const std::size_t roleBits = m * static_cast<std::size_t>(n * n);
    for (std::uint64_t cm = 0; cm < (1ULL << classBits); ++cm) {
      for (std::size_t c = 0; c < k; ++c) {
        I.cls[c] = static_cast<std::uint32_t>((cm >> (c * static_cast<std::size_t>(n))) & ((1ULL << n) - 1));
      }
      for (std::uint64_t rm = 0; rm < (1ULL << roleBits); ++rm) {
        for (std::size_t r = 0; r < m; ++r) {
          for (int x = 0; x < n; ++x) {
            I.succ[r][static_cast<std::size_t>(x)] = 0;
            I.pred[r][static_cast<std::size_t>(x)] = 0;
          }
          for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
              std::size_t bit = r * static_cast<std::size_t>(n * n) + static_cast<std::size_t>(x * n + y);
              if ((rm >> bit) & 1ULL) {
                I.succ[r][static_cast<std::size_t>(x)] |= 1u << y;
                I.pred[r][static_cast<std::size_t>(y)] |= 1u << x;
              }
            }
          }
        }
        std::fill(I.ind.begin(), I.ind.end(), 0);
        while (true) {
          if (!visit(I)) return;
          std::size_t i = 0;
          while (i < p && ++I.ind[i] == n) I.ind[i++] = 0;
          if (i == p) break;
        }
      }
    }
  }
}

std::set<int> extensionOf(const Interpretation& I, const ClassExpr& c) {
  std::set<int> out;
  auto related = [&](const RoleExpr& r, int x, int y) {
    auto it = I.roles.find(r.name);
    if (it == I.roles.end()) return false;
    return it->second.count(r.inverse ? std::make_pair(y, x) : std::make_pair(x, y)) > 0;
  };
  switch (c.kind()) {
    case ClassExpr::Kind::Named: {
      auto it = I.classes.find(c.name());
      if (it != I.classes.end()) out = it->second;
      break;
    }
    case ClassExpr::Kind::Complement: {
      auto inner = extensionOf(I, c.operand());
      for (int x = 0; x < I.domainSize; ++x) {
        if (!inner.count(x)) out.insert(x);
      }
      break;
    }
    case ClassExpr::Kind::Intersection: {
      auto a = extensionOf(I, c.operand(0));
      auto b = extensionOf(I, c.operand(1));
      for (int x : a) {
        if (b.count(x)) out.insert(x);
      }
      break;
    }
    case ClassExpr::Kind::Exists: {
      auto filler = extensionOf(I, c.operand());
      for (int x = 0; x < I.domainSize; ++x) {
        for (int y : filler) {
          if (related(c.role(), x, y)) out.insert(x);
        }
      }
      break;
    }
    case ClassExpr::Kind::HasValue: {
      auto it = I.individuals.find(c.name());
      if (it == I.individuals.end()) break;
      for (int x = 0; x < I.domainSize; ++x) {
        if (related(c.role(), x, it->second)) out.insert(x);
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::set<int> Interpretation::extension(const ClassExpr& c) const { return extensionOf(*this, c); }

bool Interpretation::satisfies(const Axiom& a) const {
  auto rel = [&](int x, int y) {
    auto it = roles.find(a.role);
    return it != roles.end() && it->second.count({x, y}) > 0;
  };
  auto indOf = [&](const std::string& i) { return individuals.at(i); };
  switch (a.kind) {
    case Axiom::Kind::SubClassOf: {
      auto sub = extension(a.classes[0]);
      auto sup = extension(a.classes[1]);
      return std::all_of(sub.begin(), sub.end(), [&](int x) { return sup.count(x) > 0; });
    }
    case Axiom::Kind::ClassAssertion:
      return extension(a.classes[0]).count(indOf(a.individuals[0])) > 0;
    case Axiom::Kind::RoleAssertion:
      return rel(indOf(a.individuals[0]), indOf(a.individuals[1]));
    case Axiom::Kind::NegRoleAssertion:
      return !rel(indOf(a.individuals[0]), indOf(a.individuals[1]));
    case Axiom::Kind::Asymmetric:
    case Axiom::Kind::Symmetric:
      for (int x = 0; x < domainSize; ++x) {
        for (int y = 0; y < domainSize; ++y) {
          if (!rel(x, y)) continue;
          if (a.kind == Axiom::Kind::Asymmetric && rel(y, x)) return false;
          if (a.kind == Axiom::Kind::Symmetric && !rel(y, x)) return false;
        }
      }
      return true;
  }
  return false;
}

std::string Interpretation::str() const {
  std::ostringstream out;
  out << "domain {0.." << domainSize - 1 << "}";
  for (const auto& [name, x] : individuals) out << "; " << name << "=" << x;
  for (const auto& [name, ext] : classes) {
    out << "; " << name << "={";
    bool first = true;
    for (int x : ext) {
      out << (first ? "" : ",") << x;
      first = false;
    }
    out << "}";
  }
  for (const auto& [name, ext] : roles) {
    out << "; " << name << "={";
    bool first = true;
    for (const auto& [x, y] : ext) {
      out << (first ? "" : ",") << "(" << x << "," << y << ")";
      first = false;
    }
    out << "}";
  }
  return out.str();
}

void forEachInterpretation(const Signature& sig, int maxDomain, const std::function<bool(const Interpretation&)>& visit) {
  Names names(sig);
  enumerate(names, maxDomain, [&](const FastInterp& I) { return visit(I.materialize(names)); });
}

std::optional<Interpretation> boundedModel(const std::vector<Axiom>& axioms, int maxDomain, const Signature& extra) {
  Signature sig = extra;
  for (const auto& a : axioms) sig.add(a);
  Names names(sig);
  std::vector<FastAxiom> compiled;
  for (const auto& a : axioms) compiled.push_back(compile(a, names));
  std::optional<Interpretation> found;
  enumerate(names, maxDomain, [&](const FastInterp& I) {
    for (const auto& a : compiled) {
      if (!I.satisfies(a)) return true;
    }
    found = I.materialize(names);
    return false;
  });
  return found;
}

std::vector<std::uint64_t> satisfactionProfiles(const std::vector<Axiom>& universe, int maxDomain) {
  if (universe.size() > 64) throw std::invalid_argument("satisfactionProfiles: more than 64 axioms");
  Signature sig;
  for (const auto& a : universe) sig.add(a);
  Names names(sig);
  std::vector<FastAxiom> compiled;
  for (const auto& a : universe) compiled.push_back(compile(a, names));
  std::unordered_set<std::uint64_t> seen;
  enumerate(names, maxDomain, [&](const FastInterp& I) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < compiled.size(); ++i) {
      if (I.satisfies(compiled[i])) mask |= 1ULL << i;
    }
    seen.insert(mask);
    return true;
  });
  return {seen.begin(), seen.end()};
}

BoundedResult boundedEntails(const std::vector<Axiom>& kb, const Axiom& axiom, int maxDomain) {
  Signature sig;
  for (const auto& a : kb) sig.add(a);
  sig.add(axiom);
  Names names(sig);
  if (searchSize(names, maxDomain) > kSearchCap) return {BoundedResult::Kind::Unknown, std::nullopt};
  std::vector<FastAxiom> compiled;
  for (const auto& a : kb) compiled.push_back(compile(a, names));
  FastAxiom goal = compile(axiom, names);
  std::optional<Interpretation> counter;
  enumerate(names, maxDomain, [&](const FastInterp& I) {
    for (const auto& a : compiled) {
      if (!I.satisfies(a)) return true;
    }
    if (I.satisfies(goal)) return true;
    counter = I.materialize(names);
    return false;
  });
  if (counter) return {BoundedResult::Kind::CounterModel, counter};
  return {BoundedResult::Kind::Entailed, std::nullopt};
}

}  // namespace cnlwiki::reasoner
