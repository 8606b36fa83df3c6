#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "cnlwiki/eval/eval.hpp"

namespace cnlwiki::eval {

namespace {

using Field = std::vector<int>;  // token ids; {kOver} when longer than the bound
using Tuple = std::vector<Field>;

constexpr int kOver = -1;

bool over(const Field& f) { return f.size() == 1 && f[0] == kOver; }

class Enumerator {
 public:
  Enumerator(const grammar::ConcreteGrammar& c, int maxTokens)
      : c_(c), max_(static_cast<std::size_t>(maxTokens)), items_(c.categories.size()), groups_(c.categories.size()) {
    for (const auto& p : c.productions) {
      std::vector<std::size_t> tokens;
      std::vector<std::vector<std::pair<int, int>>> refs;
      for (int seqId : p.fields) {
        std::size_t n = 0;
        refs.emplace_back();
        for (const auto& sym : c.sequences[static_cast<std::size_t>(seqId)]) {
          if (sym.isToken()) ++n;
          else refs.back().emplace_back(sym.arg, sym.value);
        }
        tokens.push_back(n);
      }
      tokenCounts_.push_back(std::move(tokens));
      refs_.push_back(std::move(refs));
    }
  }

  void saturate() {
    std::vector<std::size_t> oldEnd(items_.size(), 0);
    bool first = true;
    while (true) {
      std::vector<std::size_t> end(items_.size());
      for (std::size_t i = 0; i < items_.size(); ++i) end[i] = items_[i].list.size();
      regroup();
      for (const auto& p : c_.productions) {
        if (p.args.empty()) {
          if (first) add(p, {});
          continue;
        }
        // combinations with at least one argument from the previous round's
        // additions; `pivot` is the first such argument
        for (std::size_t pivot = 0; pivot < p.args.size(); ++pivot) {
          std::vector<const Tuple*> picked(p.args.size());
          combine(p, 0, pivot, oldEnd, end, picked, tokenCounts_[static_cast<std::size_t>(&p - c_.productions.data())]);
        }
      }
      bool grew = false;
      for (std::size_t i = 0; i < items_.size(); ++i) grew |= items_[i].list.size() != end[i];
      oldEnd = end;
      first = false;
      if (!grew) break;
    }
  }

  [[nodiscard]] std::vector<Tokens> sentences() const {
    std::set<Tokens> out;
    if (c_.utteranceCategory < 0) return {};
    for (const auto& t : items_[static_cast<std::size_t>(c_.utteranceCategory)].list) {
      if (t.empty() || over(t[0]) || t[0].empty()) continue;
      Tokens s;
      for (int id : t[0]) s.push_back(c_.tokens.str(id));
      out.insert(std::move(s));
    }
    return {out.begin(), out.end()};
  }

 private:
  struct Items {
    std::deque<Tuple> list;  // stable references while productions append
    std::set<Tuple> seen;
  };

  void combine(const grammar::Production& p, std::size_t i, std::size_t pivot, const std::vector<std::size_t>& oldEnd,
               const std::vector<std::size_t>& end, std::vector<const Tuple*>& picked, const std::vector<std::size_t>& bound) {
    if (i == p.args.size()) {
      add(p, picked);
      return;
    }
    auto cat = static_cast<std::size_t>(p.args[i]);
    std::size_t lo = i == pivot ? oldEnd[cat] : 0;
    std::size_t hi = i < pivot ? oldEnd[cat] : end[cat];
    if (lo >= hi) return;
    const auto& refs = refs_[static_cast<std::size_t>(&p - c_.productions.data())];
    const auto& item = items_[cat];

    // Items with equal field lengths are alive or dead together, so the
    // length check runs once per group.
    std::vector<std::size_t> next(bound.size());
    bool anyDead = false;
    for (const auto& [lengths, members] : groups_[cat]) {
      auto first = std::lower_bound(members.begin(), members.end(), lo);
      auto last = std::lower_bound(first, members.end(), hi);
      if (first == last) continue;
      bool live = false;
      for (std::size_t f = 0; f < bound.size(); ++f) {
        next[f] = bound[f];
        for (const auto& [arg, field] : refs[f]) {
          if (static_cast<std::size_t>(arg) == i) next[f] += lengths[static_cast<std::size_t>(field)];
        }
        live |= next[f] <= max_;
      }
      if (!live) {
        anyDead = true;
        continue;
      }
      const auto nextBound = next;
      for (auto k = first; k != last; ++k) {
        picked[i] = &item.list[*k];
        combine(p, i + 1, pivot, oldEnd, end, picked, nextBound);
      }
    }
    if (anyDead && laterArgsExist(p, i, pivot, oldEnd, end)) addAllOver(p.result);
  }

  bool laterArgsExist(const grammar::Production& p, std::size_t i, std::size_t pivot,
                      const std::vector<std::size_t>& oldEnd, const std::vector<std::size_t>& end) const {
    for (std::size_t j = i + 1; j < p.args.size(); ++j) {
      auto cat = static_cast<std::size_t>(p.args[j]);
      std::size_t lo = j == pivot ? oldEnd[cat] : 0;
      std::size_t hi = j < pivot ? oldEnd[cat] : end[cat];
      if (lo >= hi) return false;
    }
    return true;
  }

  // Items present at the start of the round, grouped by field lengths.
  void regroup() {
    for (std::size_t c = 0; c < items_.size(); ++c) {
      std::map<std::vector<std::size_t>, std::vector<std::size_t>> byLengths;
      const auto& list = items_[c].list;
      for (std::size_t k = 0; k < list.size(); ++k) {
        std::vector<std::size_t> lengths;
        for (const auto& f : list[k]) lengths.push_back(over(f) ? max_ + 1 : f.size());
        byLengths[lengths].push_back(k);
      }
      groups_[c].assign(byLengths.begin(), byLengths.end());
    }
  }

  void insert(int cat, Tuple t) {
    auto& store = items_[static_cast<std::size_t>(cat)];
    if (!store.seen.insert(t).second) return;
    store.list.push_back(std::move(t));
  }

  void addAllOver(int cat) {
    insert(cat, Tuple(static_cast<std::size_t>(c_.categories[static_cast<std::size_t>(cat)].fieldCount()), Field{kOver}));
  }

  void add(const grammar::Production& p, const std::vector<const Tuple*>& args) {
    Tuple t;
    t.reserve(p.fields.size());
    for (int seqId : p.fields) {
      Field f;
      for (const auto& sym : c_.sequences[static_cast<std::size_t>(seqId)]) {
        if (sym.isToken()) {
          f.push_back(sym.value);
        } else {
          const Field& sub = (*args[static_cast<std::size_t>(sym.arg)])[static_cast<std::size_t>(sym.value)];
          if (over(sub)) {
            f = {kOver};
            break;
          }
          f.insert(f.end(), sub.begin(), sub.end());
        }
        if (f.size() > max_) {
          f = {kOver};
          break;
        }
      }
      t.push_back(std::move(f));
    }
    insert(p.result, std::move(t));
  }

  const grammar::ConcreteGrammar& c_;
  std::size_t max_;
  std::vector<std::vector<std::size_t>> tokenCounts_;                  // per production, per field
  std::vector<std::vector<std::vector<std::pair<int, int>>>> refs_;  // per production, per field: (arg, field)
  std::vector<Items> items_;
  std::vector<std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>> groups_;
};

}  // namespace

std::vector<Tokens> enumerateSentences(const CompiledGrammar& g, const std::string& lang, int maxTokens, int cap) {
  if (maxTokens > cap) {
    throw CapExceeded("maxTokens " + std::to_string(maxTokens) + " exceeds the cap of " + std::to_string(cap));
  }
  if (maxTokens <= 0) return {};
  Enumerator e(g.concrete(lang), maxTokens);
  e.saturate();
  return e.sentences();
}

}  // namespace cnlwiki::eval
