#include "cnlwiki/grammar/abstract.hpp"

#include <algorithm>

namespace cnlwiki::grammar {

AbstractSyntax::AbstractSyntax(std::string name, std::vector<std::string> cats, std::vector<FunctionSig> funs,
                               std::vector<std::string> startCats)
    : name_(std::move(name)), cats_(std::move(cats)), funs_(std::move(funs)), startCats_(std::move(startCats)) {
  catSet_.insert(cats_.begin(), cats_.end());
  for (std::size_t i = 0; i < funs_.size(); ++i) funIndex_[funs_[i].name] = static_cast<int>(i);
}

const FunctionSig* AbstractSyntax::find(const std::string& fun) const {
  auto it = funIndex_.find(fun);
  return it == funIndex_.end() ? nullptr : &funs_[it->second];
}

int AbstractSyntax::index(const std::string& fun) const {
  auto it = funIndex_.find(fun);
  return it == funIndex_.end() ? -1 : it->second;
}

bool AbstractSyntax::isStart(const std::string& cat) const {
  return std::find(startCats_.begin(), startCats_.end(), cat) != startCats_.end();
}

std::string AbstractSyntax::typeOf(const AbstractTree& t) const {
  if (t.empty()) throw IllTypedTree("empty tree");
  const FunctionSig* sig = find(t.fun());
  if (!sig) throw IllTypedTree("unknown function " + t.fun(), unknownFunctions(t));
  if (sig->args.size() != t.arity()) {
    throw IllTypedTree(t.fun() + " expects " + std::to_string(sig->args.size()) + " arguments, got " +
                       std::to_string(t.arity()));
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    std::string c = typeOf(t.children()[i]);
    if (c != sig->args[i]) {
      throw IllTypedTree("argument " + std::to_string(i + 1) + " of " + t.fun() + " has category " + c +
                         ", expected " + sig->args[i]);
    }
  }
  return sig->result;
}

bool AbstractSyntax::wellTyped(const AbstractTree& t) const {
  try {
    (void)typeOf(t);
    return true;
  } catch (const IllTypedTree&) {
    return false;
  }
}

std::vector<std::string> AbstractSyntax::unknownFunctions(const AbstractTree& t) const {
  std::vector<std::string> funs;
  t.collectFunctions(funs);
  std::vector<std::string> out;
  for (auto& f : funs) {
    if (!find(f)) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Trees of every category, grouped by exact depth.
struct DepthLayers {
  // upTo[cat] lists trees of depth <= current, ordered by depth;
  // boundary[cat] is the index where the deepest layer starts.
  std::map<std::string, std::vector<AbstractTree>> upTo;
  std::map<std::string, std::size_t> boundary;
};

// Calls `emit` for every tree `fun(children...)` with children drawn from
// `layers` where at least one child comes from the deepest layer.
template <typename Emit>
void combineExact(const FunctionSig& f, const DepthLayers& layers, Emit&& emit) {
  const std::size_t n = f.args.size();
  std::vector<const std::vector<AbstractTree>*> pools(n);
  std::vector<std::size_t> bounds(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = layers.upTo.find(f.args[i]);
    if (it == layers.upTo.end() || it->second.empty()) return;
    pools[i] = &it->second;
    bounds[i] = layers.boundary.at(f.args[i]);
  }
  std::vector<std::size_t> idx(n, 0);
  std::vector<AbstractTree> kids(n);
  while (true) {
    bool deep = false;
    for (std::size_t i = 0; i < n; ++i) deep = deep || idx[i] >= bounds[i];
    if (deep) {
      for (std::size_t i = 0; i < n; ++i) kids[i] = (*pools[i])[idx[i]];
      emit(AbstractTree(f.name, kids));
    }
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < pools[k]->size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

DepthLayers buildLayers(const AbstractSyntax& abs, int maxDepth) {
  DepthLayers layers;
  for (const auto& c : abs.categories()) {
    layers.upTo[c];
    layers.boundary[c] = 0;
  }
  for (const auto& f : abs.functions()) {
    if (f.args.empty()) layers.upTo[f.result].emplace_back(f.name);
  }
  for (int d = 1; d <= maxDepth; ++d) {
    std::map<std::string, std::vector<AbstractTree>> fresh;
    for (const auto& f : abs.functions()) {
      if (f.args.empty()) continue;
      combineExact(f, layers, [&](AbstractTree t) { fresh[f.result].push_back(std::move(t)); });
    }
    for (auto& [cat, list] : layers.upTo) {
      layers.boundary[cat] = list.size();
      auto it = fresh.find(cat);
      if (it != fresh.end()) list.insert(list.end(), it->second.begin(), it->second.end());
    }
  }
  return layers;
}

}  // namespace

std::vector<AbstractTree> AbstractSyntax::treesUpTo(const std::string& cat, int maxDepth) const {
  if (maxDepth < 0) return {};
  auto layers = buildLayers(*this, maxDepth);
  return layers.upTo[cat];
}

void AbstractSyntax::forEachTree(const std::string& cat, int maxDepth,
                                 const std::function<void(const AbstractTree&)>& visit) const {
  if (maxDepth < 0) return;
  if (maxDepth == 0) {
    for (const auto& t : treesUpTo(cat, 0)) visit(t);
    return;
  }
  auto layers = buildLayers(*this, maxDepth - 1);
  for (const auto& t : layers.upTo[cat]) visit(t);
  for (const auto& f : funs_) {
    if (f.result != cat || f.args.empty()) continue;
    combineExact(f, layers, [&](const AbstractTree& t) { visit(t); });
  }
}

std::optional<std::string> lexicalCategory(const std::string& identifier) {
  for (const char* suffix : {"_PN", "_V2", "_N"}) {
    std::string s(suffix);
    if (identifier.size() > s.size() && identifier.compare(identifier.size() - s.size(), s.size(), s) == 0) {
      return s.substr(1);
    }
  }
  return std::nullopt;
}

}  // namespace cnlwiki::grammar
