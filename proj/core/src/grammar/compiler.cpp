#include "cnlwiki/grammar/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace cnlwiki::grammar {

std::string ConcreteCategory::str() const {
  std::string out = abstractCat;
  for (const auto& [label, value] : inherent) out += " " + label + "=" + value;
  return out;
}

int TokenTable::intern(const std::string& tok) {
  auto [it, inserted] = ids_.emplace(tok, static_cast<int>(toks_.size()));
  if (inserted) toks_.push_back(tok);
  return it->second;
}

int TokenTable::find(const std::string& tok) const {
  auto it = ids_.find(tok);
  return it == ids_.end() ? -1 : it->second;
}

std::vector<std::string> CompiledGrammar::languageTags() const {
  std::vector<std::string> out;
  for (const auto& [tag, _] : languages) out.push_back(tag);
  return out;
}

const ConcreteGrammar& CompiledGrammar::concrete(const std::string& lang) const {
  auto it = languages.find(lang);
  if (it == languages.end()) throw UnknownLanguage(lang);
  return it->second;
}

namespace {

using source::Expr;
using source::ExprPtr;
using source::TypeExpr;

struct ParamType {
  std::string name;
  std::vector<std::string> values;
};

struct LinType;
using LinTypePtr = std::shared_ptr<const LinType>;

struct LinType {
  enum class Kind { Str, Param, Table, Record };
  Kind kind = Kind::Str;
  int ptype = -1;  // Param, or Table argument
  LinTypePtr value;
  std::vector<std::pair<std::string, LinTypePtr>> fields;
};

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Value {
  enum class Kind { Str, Param, Table, Record };
  Kind kind = Kind::Str;
  Sequence syms;
  int ptype = -1;
  int pval = -1;
  std::vector<ValuePtr> items;      // table entries by parameter index, or record fields
  std::vector<std::string> labels;  // record labels
};

using Alternatives = std::vector<ValuePtr>;

class EvalError : public std::runtime_error {
 public:
  EvalError(int line, const std::string& msg) : std::runtime_error(msg), line_(line) {}
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

ValuePtr strValue(Sequence syms) {
  auto v = std::make_shared<Value>();
  v->kind = Value::Kind::Str;
  v->syms = std::move(syms);
  return v;
}

ValuePtr paramValue(int type, int val) {
  auto v = std::make_shared<Value>();
  v->kind = Value::Kind::Param;
  v->ptype = type;
  v->pval = val;
  return v;
}

// Every combination of one alternative per slot, first alternatives first.
template <typename Build>
Alternatives product(const std::vector<Alternatives>& slots, Build&& build) {
  Alternatives out;
  for (const auto& s : slots) {
    if (s.empty()) return out;
  }
  std::vector<std::size_t> idx(slots.size(), 0);
  std::vector<ValuePtr> pick(slots.size());
  while (true) {
    for (std::size_t i = 0; i < slots.size(); ++i) pick[i] = slots[i][idx[i]];
    out.push_back(build(pick));
    std::size_t k = slots.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < slots[k].size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) return out;
  }
}

struct InherentSlot {
  std::string label;
  int ptype;
};

class ConcreteCompiler {
 public:
  ConcreteCompiler(const source::ConcreteModule& mod, const AbstractSyntax& abs,
                   const std::vector<const source::LexiconModule*>& lexicons, const LexiconExpander& expand,
                   std::vector<Diagnostic>& errors, std::vector<Diagnostic>& warnings)
      : mod_(mod), abs_(abs), lexicons_(lexicons), expand_(expand), errors_(errors), warnings_(warnings) {}

  ConcreteGrammar run() {
    out_.language = mod_.language;
    out_.moduleName = mod_.name;
    declareParams();
    declareLincats();
    if (!ok_) return std::move(out_);
    buildCategories();
    out_.productionsOfFunction.assign(abs_.functions().size(), {});
    compileSyntacticLins();
    compileLexicon();
    pruneUnproductive();
    checkTotality();
    buildUtterance();
    return std::move(out_);
  }

  [[nodiscard]] bool ok() const { return ok_; }

 private:
  void error(int line, const std::string& msg) {
    ok_ = false;
    errors_.push_back({mod_.name, line, msg});
  }

  // ---- declarations ----
  void declareParams() {
    for (const auto& p : mod_.params) {
      if (paramIndex_.count(p.name)) {
        error(p.line, "duplicate parameter type " + p.name);
        continue;
      }
      int t = static_cast<int>(params_.size());
      paramIndex_[p.name] = t;
      params_.push_back({p.name, p.values});
      for (std::size_t v = 0; v < p.values.size(); ++v) {
        if (constructors_.count(p.values[v])) {
          error(p.line, "parameter value " + p.values[v] + " declared twice");
          continue;
        }
        constructors_[p.values[v]] = {t, static_cast<int>(v)};
      }
    }
  }

  LinTypePtr resolve(const TypeExpr& t, bool underTable) {
    auto out = std::make_shared<LinType>();
    switch (t.kind) {
      case TypeExpr::Kind::Str:
        out->kind = LinType::Kind::Str;
        break;
      case TypeExpr::Kind::Param: {
        auto it = paramIndex_.find(t.param);
        if (it == paramIndex_.end()) throw EvalError(t.line, "unknown parameter type " + t.param);
        if (underTable) throw EvalError(t.line, "tables of parameters are not supported");
        out->kind = LinType::Kind::Param;
        out->ptype = it->second;
        break;
      }
      case TypeExpr::Kind::Table: {
        auto it = paramIndex_.find(t.param);
        if (it == paramIndex_.end()) throw EvalError(t.line, "unknown parameter type " + t.param);
        out->kind = LinType::Kind::Table;
        out->ptype = it->second;
        out->value = resolve(*t.value, true);
        break;
      }
      case TypeExpr::Kind::Record:
        out->kind = LinType::Kind::Record;
        for (const auto& [label, ft] : t.fields) out->fields.emplace_back(label, resolve(*ft, underTable));
        break;
    }
    return out;
  }

  void declareLincats() {
    for (const auto& lc : mod_.lincats) {
      if (!abs_.hasCategory(lc.cat)) {
        error(lc.line, "lincat for unknown category " + lc.cat);
        continue;
      }
      if (lincats_.count(lc.cat)) {
        error(lc.line, "duplicate lincat for " + lc.cat);
        continue;
      }
      try {
        lincats_[lc.cat] = resolve(*lc.type, false);
      } catch (const EvalError& e) {
        error(e.line(), e.what());
      }
    }
    for (const auto& c : abs_.categories()) {
      if (!lincats_.count(c)) error(0, "missing lincat for " + c);
    }
  }

  // ---- concrete categories ----
  void collectShape(const LinType& t, const std::string& path, std::vector<std::string>& fields,
                    std::vector<InherentSlot>& slots) {
    switch (t.kind) {
      case LinType::Kind::Str:
        fields.push_back(path);
        break;
      case LinType::Kind::Param:
        slots.push_back({path, t.ptype});
        break;
      case LinType::Kind::Table:
        for (const auto& v : params_[static_cast<std::size_t>(t.ptype)].values) {
          collectShape(*t.value, path.empty() ? v : path + " " + v, fields, slots);
        }
        break;
      case LinType::Kind::Record:
        for (const auto& [label, ft] : t.fields) collectShape(*ft, path.empty() ? label : path + " " + label, fields, slots);
        break;
    }
  }

  void buildCategories() {
    for (const auto& c : abs_.categories()) {
      std::vector<std::string> fields;
      std::vector<InherentSlot> slots;
      collectShape(*lincats_[c], "", fields, slots);
      shapes_[c] = slots;
      std::vector<int> assignment(slots.size(), 0);
      while (true) {
        ConcreteCategory cc;
        cc.abstractCat = c;
        cc.fieldLabels = fields;
        for (std::size_t i = 0; i < slots.size(); ++i) {
          cc.inherent.emplace_back(slots[i].label,
                                   params_[static_cast<std::size_t>(slots[i].ptype)].values[static_cast<std::size_t>(assignment[i])]);
        }
        int id = static_cast<int>(out_.categories.size());
        out_.categories.push_back(std::move(cc));
        out_.categoriesOf[c].push_back(id);
        catByAssignment_[{c, assignment}] = id;
        std::size_t k = slots.size();
        bool done = true;
        while (k > 0) {
          --k;
          if (++assignment[k] < static_cast<int>(params_[static_cast<std::size_t>(slots[k].ptype)].values.size())) {
            done = false;
            break;
          }
          assignment[k] = 0;
        }
        if (done) break;
      }
    }
    out_.productionsOfCategory.assign(out_.categories.size(), {});
  }

  // Record of field references standing for argument `arg` of concrete category `cat`.
  ValuePtr argumentValue(const LinType& t, int arg, int& field, const std::vector<std::pair<std::string, std::string>>& inh,
                         std::size_t& slot) {
    auto v = std::make_shared<Value>();
    switch (t.kind) {
      case LinType::Kind::Str:
        v->kind = Value::Kind::Str;
        v->syms = {Symbol::ref(arg, field++)};
        break;
      case LinType::Kind::Param: {
        const auto& [ptype, pval] = constructors_.at(inh[slot++].second);
        v->kind = Value::Kind::Param;
        v->ptype = ptype;
        v->pval = pval;
        break;
      }
      case LinType::Kind::Table:
        v->kind = Value::Kind::Table;
        v->ptype = t.ptype;
        for (std::size_t i = 0; i < params_[static_cast<std::size_t>(t.ptype)].values.size(); ++i) {
          v->items.push_back(argumentValue(*t.value, arg, field, inh, slot));
        }
        break;
      case LinType::Kind::Record:
        v->kind = Value::Kind::Record;
        for (const auto& [label, ft] : t.fields) {
          v->labels.push_back(label);
          v->items.push_back(argumentValue(*ft, arg, field, inh, slot));
        }
        break;
    }
    return v;
  }

  // ---- evaluation ----
  using Env = std::vector<std::pair<std::string, ValuePtr>>;

  Alternatives eval(const Expr& e, Env& env, const LinType* expected) {
    switch (e.kind) {
      case Expr::Kind::Lit: {
        Sequence syms;
        std::istringstream words(e.text);
        std::string w;
        while (words >> w) syms.push_back(Symbol::token(out_.tokens.intern(w)));
        return {strValue(std::move(syms))};
      }
      case Expr::Kind::Empty:
        return {strValue({})};
      case Expr::Kind::Concat: {
        static const LinType kStr{};
        std::vector<Alternatives> slots{eval(*e.kids[0], env, &kStr), eval(*e.kids[1], env, &kStr)};
        return product(slots, [&](const std::vector<ValuePtr>& p) {
          for (const auto& x : p) {
            if (x->kind != Value::Kind::Str) throw EvalError(e.line, "type mismatch: ++ applied to a non-string");
          }
          Sequence s = p[0]->syms;
          s.insert(s.end(), p[1]->syms.begin(), p[1]->syms.end());
          return strValue(std::move(s));
        });
      }
      case Expr::Kind::Record: {
        std::vector<Alternatives> slots;
        std::vector<std::string> labels;
        for (const auto& [label, fe] : e.fields) {
          const LinType* ft = nullptr;
          if (expected && expected->kind == LinType::Kind::Record) {
            for (const auto& [l, t] : expected->fields) {
              if (l == label) ft = t.get();
            }
          }
          labels.push_back(label);
          slots.push_back(eval(*fe, env, ft));
        }
        return product(slots, [&](const std::vector<ValuePtr>& p) {
          auto v = std::make_shared<Value>();
          v->kind = Value::Kind::Record;
          v->labels = labels;
          v->items = p;
          return ValuePtr(v);
        });
      }
      case Expr::Kind::Proj: {
        Alternatives out;
        for (const auto& r : eval(*e.kids[0], env, nullptr)) {
          if (r->kind != Value::Kind::Record) throw EvalError(e.line, "type mismatch: ." + e.text + " on a non-record");
          bool found = false;
          for (std::size_t i = 0; i < r->labels.size(); ++i) {
            if (r->labels[i] == e.text) {
              out.push_back(r->items[i]);
              found = true;
            }
          }
          if (!found) throw EvalError(e.line, "type mismatch: record has no field " + e.text);
        }
        return out;
      }
      case Expr::Kind::Select: {
        std::vector<Alternatives> slots{eval(*e.kids[0], env, nullptr), eval(*e.kids[1], env, nullptr)};
        return product(slots, [&](const std::vector<ValuePtr>& p) {
          const auto& table = p[0];
          const auto& arg = p[1];
          if (table->kind != Value::Kind::Table) throw EvalError(e.line, "type mismatch: ! applied to a non-table");
          if (arg->kind != Value::Kind::Param || arg->ptype != table->ptype) {
            throw EvalError(e.line, "type mismatch: table over " + params_[static_cast<std::size_t>(table->ptype)].name +
                                        " selected with a wrong argument");
          }
          return table->items[static_cast<std::size_t>(arg->pval)];
        });
      }
      case Expr::Kind::TableLambda:
        return evalLambda(e, 0, env, expected);
      case Expr::Kind::TableCases: {
        int ptype = -1;
        if (expected && expected->kind == LinType::Kind::Table) ptype = expected->ptype;
        if (ptype < 0) ptype = inferCaseType(e);
        const LinType* valueType = expected && expected->kind == LinType::Kind::Table ? expected->value.get() : nullptr;
        const auto& values = params_[static_cast<std::size_t>(ptype)].values;
        std::vector<Alternatives> slots;
        for (std::size_t v = 0; v < values.size(); ++v) slots.push_back(evalCase(e, ptype, static_cast<int>(v), env, valueType));
        return product(slots, [&](const std::vector<ValuePtr>& p) {
          auto t = std::make_shared<Value>();
          t->kind = Value::Kind::Table;
          t->ptype = ptype;
          t->items = p;
          return ValuePtr(t);
        });
      }
      case Expr::Kind::Case: {
        Alternatives out;
        for (const auto& scrut : eval(*e.kids[0], env, nullptr)) {
          if (scrut->kind != Value::Kind::Param) throw EvalError(e.line, "type mismatch: case over a non-parameter");
          checkExhaustive(e, scrut->ptype);
          auto alts = evalCase(e, scrut->ptype, scrut->pval, env, expected);
          out.insert(out.end(), alts.begin(), alts.end());
        }
        return out;
      }
      case Expr::Kind::Variants: {
        Alternatives out;
        for (const auto& k : e.kids) {
          auto alts = eval(*k, env, expected);
          out.insert(out.end(), alts.begin(), alts.end());
        }
        return out;
      }
      case Expr::Kind::Var:
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
          if (it->first == e.text) return {it->second};
        }
        throw EvalError(e.line, "unknown variable " + e.text);
      case Expr::Kind::Con: {
        auto it = constructors_.find(e.text);
        if (it == constructors_.end()) throw EvalError(e.line, "unknown parameter value " + e.text);
        return {paramValue(it->second.first, it->second.second)};
      }
    }
    return {};
  }

  Alternatives evalLambda(const Expr& e, std::size_t varIndex, Env& env, const LinType* expected) {
    if (varIndex == e.vars.size()) return eval(*e.kids[0], env, expected);
    if (!expected || expected->kind != LinType::Kind::Table) {
      throw EvalError(e.line, "cannot infer the parameter type of table variable " + e.vars[varIndex]);
    }
    const auto& values = params_[static_cast<std::size_t>(expected->ptype)].values;
    std::vector<Alternatives> slots;
    for (std::size_t v = 0; v < values.size(); ++v) {
      env.emplace_back(e.vars[varIndex], paramValue(expected->ptype, static_cast<int>(v)));
      slots.push_back(evalLambda(e, varIndex + 1, env, expected->value.get()));
      env.pop_back();
    }
    int ptype = expected->ptype;
    return product(slots, [&](const std::vector<ValuePtr>& p) {
      auto t = std::make_shared<Value>();
      t->kind = Value::Kind::Table;
      t->ptype = ptype;
      t->items = p;
      return ValuePtr(t);
    });
  }

  int inferCaseType(const Expr& e) {
    for (const auto& [pat, _] : e.cases) {
      auto it = constructors_.find(pat);
      if (it != constructors_.end()) return it->second.first;
    }
    throw EvalError(e.line, "cannot infer the parameter type of table");
  }

  void checkExhaustive(const Expr& e, int ptype) {
    const auto& values = params_[static_cast<std::size_t>(ptype)].values;
    for (std::size_t v = 0; v < values.size(); ++v) {
      bool covered = false;
      for (const auto& [pat, _] : e.cases) {
        if (pat == "_" || std::islower(static_cast<unsigned char>(pat[0])) || pat == values[v]) covered = true;
      }
      if (!covered) throw EvalError(e.line, "non-exhaustive table: no case for " + values[v]);
    }
    for (const auto& [pat, _] : e.cases) {
      if (pat == "_" || std::islower(static_cast<unsigned char>(pat[0]))) continue;
      auto it = constructors_.find(pat);
      if (it == constructors_.end() || it->second.first != ptype) {
        throw EvalError(e.line, "pattern " + pat + " is not a value of " + params_[static_cast<std::size_t>(ptype)].name);
      }
    }
  }

  Alternatives evalCase(const Expr& e, int ptype, int pval, Env& env, const LinType* expected) {
    checkExhaustive(e, ptype);
    const std::string& name = params_[static_cast<std::size_t>(ptype)].values[static_cast<std::size_t>(pval)];
    for (const auto& [pat, body] : e.cases) {
      if (pat == name || pat == "_") return eval(*body, env, expected);
      if (std::islower(static_cast<unsigned char>(pat[0]))) {
        env.emplace_back(pat, paramValue(ptype, pval));
        auto out = eval(*body, env, expected);
        env.pop_back();
        return out;
      }
    }
    throw EvalError(e.line, "non-exhaustive table: no case for " + name);
  }

  // Checks `v` against `t` and returns it with record fields in lincat order.
  ValuePtr conform(const ValuePtr& v, const LinType& t, int line, const std::string& path) {
    auto where = path.empty() ? std::string() : " in field " + path;
    switch (t.kind) {
      case LinType::Kind::Str:
        if (v->kind != Value::Kind::Str) throw EvalError(line, "type mismatch: expected a string" + where);
        return v;
      case LinType::Kind::Param:
        if (v->kind != Value::Kind::Param || v->ptype != t.ptype) {
          throw EvalError(line, "type mismatch: expected a value of " + params_[static_cast<std::size_t>(t.ptype)].name + where);
        }
        return v;
      case LinType::Kind::Table: {
        if (v->kind != Value::Kind::Table || v->ptype != t.ptype) {
          throw EvalError(line, "type mismatch: expected a table over " + params_[static_cast<std::size_t>(t.ptype)].name + where);
        }
        auto out = std::make_shared<Value>(*v);
        for (auto& item : out->items) item = conform(item, *t.value, line, path);
        return out;
      }
      case LinType::Kind::Record: {
        if (v->kind != Value::Kind::Record) throw EvalError(line, "type mismatch: expected a record" + where);
        auto out = std::make_shared<Value>();
        out->kind = Value::Kind::Record;
        for (const auto& label : v->labels) {
          bool known = std::any_of(t.fields.begin(), t.fields.end(), [&](const auto& f) { return f.first == label; });
          if (!known) throw EvalError(line, "type mismatch: unexpected field " + label);
        }
        for (const auto& [label, ft] : t.fields) {
          auto it = std::find(v->labels.begin(), v->labels.end(), label);
          if (it == v->labels.end()) throw EvalError(line, "type mismatch: missing field " + label + where);
          out->labels.push_back(label);
          out->items.push_back(conform(v->items[static_cast<std::size_t>(it - v->labels.begin())], *ft, line, label));
        }
        return out;
      }
    }
    return v;
  }

  void flatten(const Value& v, std::vector<Sequence>& fields, std::vector<int>& assignment) {
    switch (v.kind) {
      case Value::Kind::Str:
        fields.push_back(v.syms);
        break;
      case Value::Kind::Param:
        assignment.push_back(v.pval);
        break;
      case Value::Kind::Table:
      case Value::Kind::Record:
        for (const auto& item : v.items) flatten(*item, fields, assignment);
        break;
    }
  }

  int internSequence(const Sequence& s) {
    auto it = seqIndex_.find(s);
    if (it != seqIndex_.end()) return it->second;
    int id = static_cast<int>(out_.sequences.size());
    out_.sequences.push_back(s);
    seqIndex_.emplace(s, id);
    return id;
  }

  void addProduction(int fun, const std::string& cat, const std::vector<int>& args, const Value& value) {
    std::vector<Sequence> fields;
    std::vector<int> assignment;
    flatten(value, fields, assignment);
    Production p;
    p.result = catByAssignment_.at({cat, assignment});
    p.fun = fun;
    p.args = args;
    for (const auto& f : fields) p.fields.push_back(internSequence(f));
    auto key = std::make_tuple(p.result, p.fun, p.args, p.fields);
    if (!seenProductions_.insert(key).second) return;  // variants that collapse
    out_.productions.push_back(std::move(p));
  }

  // ---- lins ----
  void compileSyntacticLins() {
    std::map<std::string, const source::LinDecl*> lins;
    for (const auto& l : mod_.lins) {
      const FunctionSig* sig = abs_.find(l.fun);
      if (!sig || sig->lexical) {
        error(l.line, sig ? "lin for lexicon function " + l.fun + " belongs in a lexicon module"
                          : "lin for unknown function " + l.fun);
        continue;
      }
      if (lins.count(l.fun)) {
        error(l.line, "duplicate lin for " + l.fun);
        continue;
      }
      if (l.vars.size() != sig->args.size()) {
        error(l.line, "lin " + l.fun + " binds " + std::to_string(l.vars.size()) + " arguments, function has " +
                          std::to_string(sig->args.size()));
        continue;
      }
      lins[l.fun] = &l;
    }
    for (std::size_t f = 0; f < abs_.functions().size(); ++f) {
      const auto& sig = abs_.functions()[f];
      if (sig.lexical) continue;
      auto it = lins.find(sig.name);
      if (it == lins.end()) {
        error(0, "missing lin for " + sig.name);
        continue;
      }
      try {
        compileLin(static_cast<int>(f), sig, *it->second);
      } catch (const EvalError& e) {
        error(e.line(), "lin " + sig.name + ": " + e.what());
      }
    }
  }

  void compileLin(int fun, const FunctionSig& sig, const source::LinDecl& lin) {
    const std::size_t n = sig.args.size();
    std::vector<const std::vector<int>*> choices(n);
    for (std::size_t i = 0; i < n; ++i) choices[i] = &out_.categoriesOf.at(sig.args[i]);
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      Env env;
      std::vector<int> args(n);
      for (std::size_t i = 0; i < n; ++i) {
        args[i] = (*choices[i])[idx[i]];
        const auto& cc = out_.categories[static_cast<std::size_t>(args[i])];
        int field = 0;
        std::size_t slot = 0;
        env.emplace_back(lin.vars[i], argumentValue(*lincats_.at(sig.args[i]), static_cast<int>(i), field, cc.inherent, slot));
      }
      const LinType& resultType = *lincats_.at(sig.result);
      for (const auto& v : eval(*lin.body, env, &resultType)) {
        auto value = conform(v, resultType, lin.line, "");
        std::vector<Sequence> fields;
        std::vector<int> assignment;
        flatten(*value, fields, assignment);
        std::vector<bool> used(n, false);
        for (const auto& f : fields) {
          for (const auto& s : f) {
            if (!s.isToken()) used[static_cast<std::size_t>(s.arg)] = true;
          }
        }
        for (std::size_t i = 0; i < n; ++i) {
          if (!used[i]) throw EvalError(lin.line, "argument " + lin.vars[i] + " is not used in any field");
        }
        addProduction(fun, sig.result, args, *value);
      }
      std::size_t k = n;
      bool done = true;
      while (k > 0) {
        --k;
        if (++idx[k] < choices[k]->size()) {
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
  }

  ValuePtr lexicalValue(const LinType& t, const std::string& path, const Inflection& infl) {
    auto v = std::make_shared<Value>();
    switch (t.kind) {
      case LinType::Kind::Str: {
        auto it = infl.forms.find(path);
        if (it == infl.forms.end()) throw ParadigmError("paradigm result lacks form '" + path + "'");
        v->kind = Value::Kind::Str;
        std::istringstream words(it->second);
        std::string w;
        while (words >> w) v->syms.push_back(Symbol::token(out_.tokens.intern(w)));
        if (v->syms.empty()) throw ParadigmError("empty form '" + path + "'");
        break;
      }
      case LinType::Kind::Param: {
        auto it = infl.params.find(path);
        if (it == infl.params.end()) throw ParadigmError("paradigm result lacks parameter '" + path + "'");
        auto c = constructors_.find(it->second);
        if (c == constructors_.end() || c->second.first != t.ptype) {
          throw ParadigmError("'" + it->second + "' is not a value of " + params_[static_cast<std::size_t>(t.ptype)].name);
        }
        v->kind = Value::Kind::Param;
        v->ptype = t.ptype;
        v->pval = c->second.second;
        break;
      }
      case LinType::Kind::Table:
        v->kind = Value::Kind::Table;
        v->ptype = t.ptype;
        for (const auto& val : params_[static_cast<std::size_t>(t.ptype)].values) {
          v->items.push_back(lexicalValue(*t.value, path.empty() ? val : path + " " + val, infl));
        }
        break;
      case LinType::Kind::Record:
        v->kind = Value::Kind::Record;
        for (const auto& [label, ft] : t.fields) {
          v->labels.push_back(label);
          v->items.push_back(lexicalValue(*ft, path.empty() ? label : path + " " + label, infl));
        }
        break;
    }
    return v;
  }

  void compileLexicon() {
    std::set<std::string> defined;
    for (const auto* lex : lexicons_) {
      for (const auto& entry : lex->entries) {
        const FunctionSig* sig = abs_.find(entry.id);
        if (!sig || !sig->lexical || !defined.insert(entry.id).second) continue;  // reported by the driver
        try {
          Inflection infl = expand_(mod_.language, sig->result, entry);
          auto value = lexicalValue(*lincats_.at(sig->result), "", infl);
          addProduction(abs_.index(entry.id), sig->result, {}, *value);
        } catch (const ParadigmError& e) {
          ok_ = false;
          errors_.push_back({lex->name, entry.line, entry.id + ": " + e.what()});
        }
      }
    }
    for (const auto& f : abs_.functions()) {
      if (f.lexical && !defined.count(f.name)) {
        out_.missingLexical.push_back(f.name);
        warnings_.push_back({mod_.name, 0, "no translation for " + f.name + " in language " + mod_.language});
      }
    }
  }

  void pruneUnproductive() {
    std::vector<bool> productive(out_.categories.size(), false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& p : out_.productions) {
        if (productive[static_cast<std::size_t>(p.result)]) continue;
        bool all = std::all_of(p.args.begin(), p.args.end(), [&](int a) { return productive[static_cast<std::size_t>(a)]; });
        if (all) {
          productive[static_cast<std::size_t>(p.result)] = true;
          changed = true;
        }
      }
    }
    std::vector<Production> kept;
    for (auto& p : out_.productions) {
      bool all = std::all_of(p.args.begin(), p.args.end(), [&](int a) { return productive[static_cast<std::size_t>(a)]; });
      if (all) kept.push_back(std::move(p));
    }
    out_.productions = std::move(kept);
    for (std::size_t i = 0; i < out_.productions.size(); ++i) {
      const auto& p = out_.productions[i];
      out_.productionsOfCategory[static_cast<std::size_t>(p.result)].push_back(static_cast<int>(i));
      out_.productionsOfFunction[static_cast<std::size_t>(p.fun)].push_back(static_cast<int>(i));
    }
  }

  void checkTotality() {
    for (std::size_t f = 0; f < abs_.functions().size(); ++f) {
      const auto& sig = abs_.functions()[f];
      if (sig.lexical || !out_.productionsOfFunction[f].empty()) continue;
      bool hadLin = std::any_of(mod_.lins.begin(), mod_.lins.end(), [&](const auto& l) { return l.fun == sig.name; });
      // A lexicon without nouns, say, starves functions above it; that is a
      // state of the wiki content, not a grammar bug.
      if (hadLin && ok_) warnings_.push_back({mod_.name, 0, "no productive derivation for " + sig.name});
    }
    for (const auto& [p, line] : puncts()) {
      if (!abs_.isStart(p.cat)) error(line, "punct declared for non-start category " + p.cat);
    }
  }

  std::vector<std::pair<source::PunctDecl, int>> puncts() const {
    std::vector<std::pair<source::PunctDecl, int>> out;
    for (const auto& p : mod_.puncts) out.emplace_back(p, p.line);
    return out;
  }

  void buildUtterance() {
    if (!ok_) return;
    for (const auto& p : mod_.puncts) out_.terminators[p.cat] = p.token;
    ConcreteCategory utt;
    utt.abstractCat = "";
    utt.fieldLabels = {"s"};
    out_.utteranceCategory = static_cast<int>(out_.categories.size());
    out_.categories.push_back(utt);
    out_.productionsOfCategory.emplace_back();
    for (const auto& start : abs_.startCategories()) {
      auto term = out_.terminators.find(start);
      for (int c : out_.categoriesOf.at(start)) {
        if (out_.categories[static_cast<std::size_t>(c)].fieldCount() == 0) {
          error(0, "start category " + start + " has no string field");
          return;
        }
        if (out_.productionsOfCategory[static_cast<std::size_t>(c)].empty()) continue;
        Sequence s{Symbol::ref(0, 0)};
        if (term != out_.terminators.end()) s.push_back(Symbol::token(out_.tokens.intern(term->second)));
        Production p;
        p.result = out_.utteranceCategory;
        p.fun = kWrapFun;
        p.args = {c};
        p.fields = {internSequence(s)};
        out_.productionsOfCategory[static_cast<std::size_t>(p.result)].push_back(static_cast<int>(out_.productions.size()));
        out_.productions.push_back(std::move(p));
      }
    }
  }

  const source::ConcreteModule& mod_;
  const AbstractSyntax& abs_;
  const std::vector<const source::LexiconModule*>& lexicons_;
  const LexiconExpander& expand_;
  std::vector<Diagnostic>& errors_;
  std::vector<Diagnostic>& warnings_;
  bool ok_ = true;

  ConcreteGrammar out_;
  std::vector<ParamType> params_;
  std::map<std::string, int> paramIndex_;
  std::map<std::string, std::pair<int, int>> constructors_;
  std::map<std::string, LinTypePtr> lincats_;
  std::map<std::string, std::vector<InherentSlot>> shapes_;
  std::map<std::pair<std::string, std::vector<int>>, int> catByAssignment_;
  std::map<Sequence, int, decltype([](const Sequence& a, const Sequence& b) {
             return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Symbol& x, const Symbol& y) {
               return std::tie(x.arg, x.value) < std::tie(y.arg, y.value);
             });
           })>
      seqIndex_;
  std::set<std::tuple<int, int, std::vector<int>, std::vector<int>>> seenProductions_;
};

}  // namespace

GrammarPtr compileGrammar(const std::vector<ModuleText>& modules, const LexiconExpander& expandLexicon) {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
  std::vector<source::AbstractModule> abstracts;
  std::vector<source::ConcreteModule> concretes;
  std::vector<source::LexiconModule> lexicons;

  for (const auto& m : modules) {
    try {
      auto parsed = source::parseModule(m.text, m.name);
      if (auto* a = std::get_if<source::AbstractModule>(&parsed)) abstracts.push_back(std::move(*a));
      if (auto* c = std::get_if<source::ConcreteModule>(&parsed)) concretes.push_back(std::move(*c));
      if (auto* l = std::get_if<source::LexiconModule>(&parsed)) lexicons.push_back(std::move(*l));
    } catch (const CompileError& e) {
      errors.insert(errors.end(), e.diagnostics().begin(), e.diagnostics().end());
    }
  }
  if (!errors.empty()) throw CompileError(errors);
  if (abstracts.size() != 1) {
    throw CompileError({{"grammar", 0, "expected exactly one abstract module, found " + std::to_string(abstracts.size())}});
  }
  const auto& absMod = abstracts.front();

  // Abstract syntax, extended with the identifiers defined by any lexicon.
  std::set<std::string> cats;
  std::vector<std::string> catList;
  for (const auto& c : absMod.cats) {
    if (!cats.insert(c.name).second) errors.push_back({absMod.name, c.line, "duplicate category " + c.name});
    else catList.push_back(c.name);
  }
  std::vector<FunctionSig> funs;
  std::set<std::string> funNames;
  for (const auto& f : absMod.funs) {
    if (!funNames.insert(f.name).second) {
      errors.push_back({absMod.name, f.line, "duplicate function " + f.name});
      continue;
    }
    for (const auto& c : f.args) {
      if (!cats.count(c)) errors.push_back({absMod.name, f.line, "unknown category " + c + " in type of " + f.name});
    }
    if (!cats.count(f.result)) errors.push_back({absMod.name, f.line, "unknown category " + f.result + " in type of " + f.name});
    funs.push_back({f.name, f.args, f.result, false});
  }
  std::map<std::string, std::string> lexicalIds;
  for (const auto& lex : lexicons) {
    std::set<std::string> local;
    bool targetKnown = std::any_of(concretes.begin(), concretes.end(), [&](const auto& c) { return c.name == lex.concreteName; });
    if (!targetKnown) errors.push_back({lex.name, 1, "lexicon for unknown concrete module " + lex.concreteName});
    for (const auto& e : lex.entries) {
      auto cat = lexicalCategory(e.id);
      if (!cat) {
        errors.push_back({lex.name, e.line, "identifier " + e.id + " lacks a word-class suffix (_N, _PN, _V2)"});
        continue;
      }
      if (!cats.count(*cat)) {
        errors.push_back({lex.name, e.line, "unknown category " + *cat + " for " + e.id});
        continue;
      }
      if (!local.insert(e.id).second) {
        errors.push_back({lex.name, e.line, "duplicate lexicon entry " + e.id});
        continue;
      }
      if (funNames.count(e.id)) {
        errors.push_back({lex.name, e.line, e.id + " clashes with a syntactic function"});
        continue;
      }
      lexicalIds.emplace(e.id, *cat);
    }
  }
  for (const auto& [id, cat] : lexicalIds) funs.push_back({id, {}, cat, true});

  std::vector<std::string> starts = absMod.startCats;
  if (starts.empty()) {
    for (const char* c : {"S", "Q"}) {
      if (cats.count(c)) starts.emplace_back(c);
    }
  }
  for (const auto& s : starts) {
    if (!cats.count(s)) errors.push_back({absMod.name, 0, "unknown start category " + s});
  }
  if (!errors.empty()) throw CompileError(errors);

  auto grammar = std::make_shared<CompiledGrammar>();
  grammar->abstract = AbstractSyntax(absMod.name, catList, funs, starts);

  for (const auto& conc : concretes) {
    if (conc.abstractName != absMod.name) {
      errors.push_back({conc.name, 1, "concrete module of unknown abstract " + conc.abstractName});
      continue;
    }
    if (conc.language.empty()) {
      errors.push_back({conc.name, 1, "missing 'flags lang = ...' declaration"});
      continue;
    }
    if (grammar->languages.count(conc.language)) {
      errors.push_back({conc.name, 1, "language " + conc.language + " defined twice"});
      continue;
    }
    std::vector<const source::LexiconModule*> mine;
    for (const auto& lex : lexicons) {
      if (lex.concreteName == conc.name) mine.push_back(&lex);
    }
    ConcreteCompiler cc(conc, grammar->abstract, mine, expandLexicon, errors, warnings);
    auto compiled = cc.run();
    if (cc.ok()) grammar->languages.emplace(conc.language, std::move(compiled));
  }
  if (!errors.empty()) throw CompileError(errors);
  if (grammar->languages.empty()) throw CompileError({{"grammar", 0, "no concrete syntax"}});
  grammar->warnings = std::move(warnings);
  return grammar;
}

}  // namespace cnlwiki::grammar
