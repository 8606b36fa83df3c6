#include <algorithm>

#include "cnlwiki/grammar/kernel.hpp"

namespace cnlwiki::grammar {

namespace {

constexpr int kOpen = -2;
constexpr int kClose = -3;

struct Lin {
  int cat = -1;
  std::vector<std::vector<int>> fields;

  friend bool operator<(const Lin& a, const Lin& b) { return std::tie(a.cat, a.fields) < std::tie(b.cat, b.fields); }
  friend bool operator==(const Lin& a, const Lin& b) = default;
};

bool bracketed(const std::string& abstractCat) {
  return abstractCat == "NP" || abstractCat == "VP" || abstractCat == "RelCl";
}

class Linearizer {
 public:
  Linearizer(const CompiledGrammar& g, const std::string& lang, bool brackets)
      : g_(g), c_(g.concrete(lang)), brackets_(brackets) {}

  Lin canonical(const AbstractTree& t) {
    int fun = g_.abstract.index(t.fun());
    std::vector<Lin> kids;
    kids.reserve(t.arity());
    for (const auto& child : t.children()) kids.push_back(canonical(child));
    for (int p : productionsOf(fun, t)) {
      const auto& prod = c_.productions[static_cast<std::size_t>(p)];
      bool match = true;
      for (std::size_t i = 0; i < kids.size() && match; ++i) match = prod.args[i] == kids[i].cat;
      if (match) return apply(prod, kids);
    }
    throw IllTypedTree("no production of " + t.fun() + " accepts these arguments");
  }

  std::vector<Lin> all(const AbstractTree& t) {
    int fun = g_.abstract.index(t.fun());
    const auto& prods = productionsOf(fun, t);
    std::vector<std::vector<Lin>> kids;
    for (const auto& child : t.children()) kids.push_back(all(child));
    std::vector<Lin> out;
    std::set<Lin> seen;
    std::vector<std::size_t> idx(kids.size(), 0);
    std::vector<Lin> pick(kids.size());
    while (true) {
      for (std::size_t i = 0; i < kids.size(); ++i) pick[i] = kids[i][idx[i]];
      for (int p : prods) {
        const auto& prod = c_.productions[static_cast<std::size_t>(p)];
        bool match = true;
        for (std::size_t i = 0; i < pick.size() && match; ++i) match = prod.args[i] == pick[i].cat;
        if (!match) continue;
        Lin l = apply(prod, pick);
        if (seen.insert(l).second) out.push_back(std::move(l));
      }
      std::size_t k = kids.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (++idx[k] < kids[k].size()) {
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
    return out;
  }

  Tokens render(const Lin& l, const std::string& abstractCat) const {
    Tokens out;
    if (l.fields.empty()) return out;
    bool wrap = brackets_ && bracketed(abstractCat) && !l.fields[0].empty();
    if (wrap) out.emplace_back("[");
    for (int tok : l.fields[0]) {
      if (tok == kOpen) out.emplace_back("[");
      else if (tok == kClose) out.emplace_back("]");
      else out.push_back(c_.tokens.str(tok));
    }
    if (wrap) out.emplace_back("]");
    return out;
  }

 private:
  const std::vector<int>& productionsOf(int fun, const AbstractTree& t) const {
    if (!c_.hasProductions(fun)) throw MissingLinearization(t.fun(), c_.language);
    return c_.productionsOfFunction[static_cast<std::size_t>(fun)];
  }

  Lin apply(const Production& prod, const std::vector<Lin>& kids) const {
    Lin out;
    out.cat = prod.result;
    out.fields.resize(prod.fields.size());
    for (std::size_t f = 0; f < prod.fields.size(); ++f) {
      auto& dst = out.fields[f];
      for (const auto& sym : c_.sequences[static_cast<std::size_t>(prod.fields[f])]) {
        if (sym.isToken()) {
          dst.push_back(sym.value);
          continue;
        }
        const Lin& kid = kids[static_cast<std::size_t>(sym.arg)];
        const auto& src = kid.fields[static_cast<std::size_t>(sym.value)];
        bool wrap = brackets_ && !src.empty() &&
                    bracketed(c_.categories[static_cast<std::size_t>(kid.cat)].abstractCat);
        if (wrap) dst.push_back(kOpen);
        dst.insert(dst.end(), src.begin(), src.end());
        if (wrap) dst.push_back(kClose);
      }
    }
    return out;
  }

  const CompiledGrammar& g_;
  const ConcreteGrammar& c_;
  bool brackets_;
};

std::string checkedCategory(const CompiledGrammar& g, const AbstractTree& t) { return g.abstract.typeOf(t); }

}  // namespace

Tokens linearize(const CompiledGrammar& g, const std::string& lang, const AbstractTree& t) {
  auto cat = checkedCategory(g, t);
  Linearizer lin(g, lang, false);
  return lin.render(lin.canonical(t), cat);
}

std::vector<Tokens> linearizeAll(const CompiledGrammar& g, const std::string& lang, const AbstractTree& t) {
  auto cat = checkedCategory(g, t);
  Linearizer lin(g, lang, false);
  std::vector<Tokens> out;
  std::set<Tokens> seen;
  for (const auto& l : lin.all(t)) {
    auto toks = lin.render(l, cat);
    if (seen.insert(toks).second) out.push_back(std::move(toks));
  }
  return out;
}

Tokens linearizeBracketed(const CompiledGrammar& g, const std::string& lang, const AbstractTree& t) {
  auto cat = checkedCategory(g, t);
  Linearizer lin(g, lang, true);
  return lin.render(lin.canonical(t), cat);
}

Tokens linearizeSentence(const CompiledGrammar& g, const std::string& lang, const AbstractTree& t) {
  auto cat = checkedCategory(g, t);
  Linearizer lin(g, lang, false);
  auto out = lin.render(lin.canonical(t), cat);
  const auto& term = g.concrete(lang).terminators;
  auto it = term.find(cat);
  if (it != term.end()) out.push_back(it->second);
  return out;
}

}  // namespace cnlwiki::grammar
