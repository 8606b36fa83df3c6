// Incremental PMCFG parsing.
//
// Items are [rule, field, dot, start]. A rule is a production whose
// argument categories may have been replaced by fresh categories; a fresh
// category (cat, field, start, end) records the productions of `cat` that
// derived tokens start..end in `field`, so later fields of the same argument
// only see consistent derivations.

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "cnlwiki/grammar/kernel.hpp"

namespace cnlwiki::grammar {

namespace {

struct Rule {
  int prod;
  int result;
  std::vector<int> args;
};

struct Item {
  int rule;
  int field;
  int dot;
  int start;
  friend bool operator==(const Item&, const Item&) = default;
};

struct ItemHash {
  std::size_t operator()(const Item& i) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(i.rule) * 0x9E3779B97F4A7C15ULL;
    h ^= (static_cast<std::uint64_t>(i.field) << 40) ^ (static_cast<std::uint64_t>(i.dot) << 20) ^
         static_cast<std::uint64_t>(i.start);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
    return h;
  }
};

// (cat, field, position) packed into one key; categories and positions stay
// far below the bit budgets.
std::uint64_t key3(int cat, int field, int pos) {
  return (static_cast<std::uint64_t>(cat) << 32) | (static_cast<std::uint64_t>(field) << 20) |
         static_cast<std::uint64_t>(pos);
}

struct Completion {
  int end;
  int fresh;
};

class Chart {
 public:
  Chart(const ConcreteGrammar& c, const Tokens& tokens) : c_(c), n_(static_cast<int>(tokens.size())) {
    input_.reserve(tokens.size());
    for (const auto& t : tokens) input_.push_back(c.tokens.find(t));
    origRules_.assign(c.productions.size(), -1);
    sets_.resize(tokens.size() + 1);
    seen_.resize(tokens.size() + 1);
  }

  // Runs the chart over the whole input; false when some token cannot be
  // consumed. `reached` reports how many tokens were consumed.
  bool run(const std::vector<int>& rootCats, int& reached) {
    for (int cat : rootCats) predict(cat, 0, 0);
    for (int k = 0; k <= n_; ++k) {
      if (k > 0 && sets_[static_cast<std::size_t>(k)].empty()) {
        reached = k - 1;
        return false;
      }
      if (k < n_ && input_[static_cast<std::size_t>(k)] < 0) {
        // still close the set so completions at k are known
        process(k);
        reached = k;
        return false;
      }
      process(k);
    }
    reached = n_;
    return true;
  }

  std::set<int> nextTokens() const {
    std::set<int> out;
    for (const auto& it : sets_[static_cast<std::size_t>(n_)]) {
      const auto& seq = sequenceOf(it);
      if (static_cast<std::size_t>(it.dot) < seq.size() && seq[static_cast<std::size_t>(it.dot)].isToken()) {
        out.insert(seq[static_cast<std::size_t>(it.dot)].value);
      }
    }
    return out;
  }

  std::vector<AbstractTree> trees(const std::vector<int>& rootCats, const AbstractSyntax& abs) {
    std::vector<AbstractTree> out;
    for (int cat : rootCats) {
      auto it = fresh_.find(freshKey(cat, 0, 0, n_));
      if (it == fresh_.end()) continue;
      for (auto& t : treesOf(it->second, abs)) out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  const Sequence& sequenceOf(const Item& it) const {
    const auto& prod = c_.productions[static_cast<std::size_t>(rules_[static_cast<std::size_t>(it.rule)].prod)];
    return c_.sequences[static_cast<std::size_t>(prod.fields[static_cast<std::size_t>(it.field)])];
  }

  int internRule(int prod, int result, const std::vector<int>& args) {
    std::vector<int> key;
    key.reserve(args.size() + 2);
    key.push_back(prod);
    key.push_back(result);
    key.insert(key.end(), args.begin(), args.end());
    auto [it, inserted] = ruleIndex_.emplace(std::move(key), static_cast<int>(rules_.size()));
    if (inserted) rules_.push_back({prod, result, args});
    return it->second;
  }

  int origRule(int prod) {
    int& r = origRules_[static_cast<std::size_t>(prod)];
    if (r < 0) {
      const auto& p = c_.productions[static_cast<std::size_t>(prod)];
      r = internRule(prod, p.result, p.args);
    }
    return r;
  }

  bool isFresh(int cat) const { return cat >= static_cast<int>(c_.categories.size()); }

  std::vector<int>& freshRules(int cat) { return freshRules_[static_cast<std::size_t>(cat) - c_.categories.size()]; }

  void add(int k, const Item& it) {
    if (seen_[static_cast<std::size_t>(k)].insert(it).second) sets_[static_cast<std::size_t>(k)].push_back(it);
  }

  void predict(int cat, int field, int k) {
    if (!predicted_.insert(key3(cat, field, k)).second) return;
    if (isFresh(cat)) {
      predictedFields_[key3(cat, 0, k)].push_back(field);
      for (int r : freshRules(cat)) add(k, {r, field, 0, k});
    } else {
      for (int p : c_.productionsOfCategory[static_cast<std::size_t>(cat)]) add(k, {origRule(p), field, 0, k});
    }
  }

  void advance(const Item& it, int argIndex, int freshCat, int k) {
    const Rule& r = rules_[static_cast<std::size_t>(it.rule)];
    std::vector<int> args = r.args;
    args[static_cast<std::size_t>(argIndex)] = freshCat;
    int nr = internRule(r.prod, r.result, args);
    add(k, {nr, it.field, it.dot + 1, it.start});
  }

  static std::uint64_t freshKeyRaw(int cat, int field, int start, int end) {
    return (static_cast<std::uint64_t>(cat) << 36) ^ (static_cast<std::uint64_t>(field) << 28) ^
           (static_cast<std::uint64_t>(start) << 14) ^ static_cast<std::uint64_t>(end);
  }
  static std::uint64_t freshKey(int cat, int field, int start, int end) { return freshKeyRaw(cat, field, start, end); }

  void process(int k) {
    auto& set = sets_[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < set.size(); ++i) {
      Item it = set[i];
      const Rule& rule = rules_[static_cast<std::size_t>(it.rule)];
      const auto& seq = sequenceOf(it);
      if (static_cast<std::size_t>(it.dot) < seq.size()) {
        const Symbol sym = seq[static_cast<std::size_t>(it.dot)];
        if (sym.isToken()) {
          if (k < n_ && sym.value == input_[static_cast<std::size_t>(k)]) {
            add(k + 1, {it.rule, it.field, it.dot + 1, it.start});
          }
          continue;
        }
        int argCat = rule.args[static_cast<std::size_t>(sym.arg)];
        waiting_[key3(argCat, sym.value, k)].push_back(it);
        auto done = completed_.find(key3(argCat, sym.value, k));
        if (done != completed_.end()) {
          for (const auto& c : done->second) {
            if (c.end == k) advance(it, sym.arg, c.fresh, k);
          }
        }
        predict(argCat, sym.value, k);
        continue;
      }
      complete(it, k);
    }
  }

  void complete(const Item& it, int k) {
    const Rule rule = rules_[static_cast<std::size_t>(it.rule)];
    auto fk = freshKey(rule.result, it.field, it.start, k);
    auto found = fresh_.find(fk);
    bool isNew = found == fresh_.end();
    int cat;
    if (isNew) {
      cat = static_cast<int>(c_.categories.size() + freshRules_.size());
      freshRules_.emplace_back();
      fresh_.emplace(fk, cat);
    } else {
      cat = found->second;
    }
    int headed = internRule(rule.prod, cat, rule.args);
    auto& rules = freshRules(cat);
    if (std::find(rules.begin(), rules.end(), headed) != rules.end()) return;
    rules.push_back(headed);
    if (isNew) {
      completed_[key3(rule.result, it.field, it.start)].push_back({k, cat});
      auto w = waiting_.find(key3(rule.result, it.field, it.start));
      if (w != waiting_.end()) {
        // advance() may grow waiting_ lists; iterate over a copy
        auto items = w->second;
        for (const auto& wi : items) {
          const auto& seq = sequenceOf(wi);
          advance(wi, seq[static_cast<std::size_t>(wi.dot)].arg, cat, k);
        }
      }
    } else {
      auto pf = predictedFields_.find(key3(cat, 0, k));
      if (pf != predictedFields_.end()) {
        for (int field : pf->second) add(k, {headed, field, 0, k});
      }
    }
  }

  std::vector<AbstractTree> treesOf(int cat, const AbstractSyntax& abs) {
    auto memo = treeMemo_.find(cat);
    if (memo != treeMemo_.end()) return memo->second;
    if (!inProgress_.insert(cat).second) return {};
    std::vector<AbstractTree> out;
    for (int r : freshRules(cat)) {
      const Rule rule = rules_[static_cast<std::size_t>(r)];
      const auto& prod = c_.productions[static_cast<std::size_t>(rule.prod)];
      std::vector<std::vector<AbstractTree>> kids;
      bool ok = true;
      for (int a : rule.args) {
        if (!isFresh(a)) {
          ok = false;  // argument never consumed: no evidence for any subtree
          break;
        }
        kids.push_back(treesOf(a, abs));
        if (kids.back().empty()) ok = false;
      }
      if (!ok) continue;
      std::vector<std::size_t> idx(kids.size(), 0);
      while (true) {
        if (prod.fun == kWrapFun) {
          out.push_back(kids[0][idx[0]]);
        } else {
          std::vector<AbstractTree> children;
          for (std::size_t i = 0; i < kids.size(); ++i) children.push_back(kids[i][idx[i]]);
          out.emplace_back(abs.functions()[static_cast<std::size_t>(prod.fun)].name, std::move(children));
        }
        std::size_t j = kids.size();
        bool done = true;
        while (j > 0) {
          --j;
          if (++idx[j] < kids[j].size()) {
            done = false;
            break;
          }
          idx[j] = 0;
        }
        if (done) break;
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    inProgress_.erase(cat);
    treeMemo_[cat] = out;
    return out;
  }

  const ConcreteGrammar& c_;
  int n_;
  std::vector<int> input_;
  std::vector<Rule> rules_;
  std::unordered_map<std::vector<int>, int, VecHash> ruleIndex_;
  std::vector<int> origRules_;
  std::vector<std::vector<Item>> sets_;
  std::vector<std::unordered_set<Item, ItemHash>> seen_;
  std::unordered_set<std::uint64_t> predicted_;
  std::unordered_map<std::uint64_t, std::vector<int>> predictedFields_;
  std::unordered_map<std::uint64_t, std::vector<Item>> waiting_;
  std::unordered_map<std::uint64_t, std::vector<Completion>> completed_;
  std::unordered_map<std::uint64_t, int> fresh_;
  std::vector<std::vector<int>> freshRules_;
  std::map<int, std::vector<AbstractTree>> treeMemo_;
  std::set<int> inProgress_;
};

std::vector<int> startCategories(const CompiledGrammar& g, const ConcreteGrammar& c) {
  std::vector<int> out;
  for (const auto& s : g.abstract.startCategories()) {
    auto it = c.categoriesOf.find(s);
    if (it == c.categoriesOf.end()) continue;
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

bool endsWithTerminator(const ConcreteGrammar& c, const Tokens& tokens) {
  if (tokens.empty()) return false;
  for (const auto& [_, term] : c.terminators) {
    if (tokens.back() == term) return true;
  }
  return false;
}

}  // namespace

std::vector<AbstractTree> parse(const CompiledGrammar& g, const std::string& lang, const Tokens& tokens) {
  const auto& c = g.concrete(lang);
  if (tokens.empty()) return {};
  std::vector<int> roots =
      endsWithTerminator(c, tokens) ? std::vector<int>{c.utteranceCategory} : startCategories(g, c);
  Chart chart(c, tokens);
  int reached = 0;
  if (!chart.run(roots, reached)) return {};
  return chart.trees(roots, g.abstract);
}

std::set<std::string> complete(const CompiledGrammar& g, const std::string& lang, const Tokens& prefix) {
  const auto& c = g.concrete(lang);
  Chart chart(c, prefix);
  int reached = 0;
  if (!chart.run({c.utteranceCategory}, reached)) return {};
  std::set<std::string> out;
  for (int tok : chart.nextTokens()) out.insert(c.tokens.str(tok));
  return out;
}

std::size_t longestViablePrefix(const CompiledGrammar& g, const std::string& lang, const Tokens& tokens) {
  const auto& c = g.concrete(lang);
  Chart chart(c, tokens);
  int reached = 0;
  chart.run({c.utteranceCategory}, reached);
  return static_cast<std::size_t>(reached);
}

std::set<Tokens> translate(const CompiledGrammar& g, const std::string& from, const std::string& to,
                           const Tokens& tokens) {
  (void)g.concrete(to);
  std::set<Tokens> out;
  for (const auto& t : parse(g, from, tokens)) {
    try {
      out.insert(linearize(g, to, t));
    } catch (const MissingLinearization&) {
      // lexicon gap in the target language
    }
  }
  return out;
}

}  // namespace cnlwiki::grammar
