#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cnlwiki::grammar {

struct Diagnostic {
  std::string module;
  int line = 0;
  std::string message;

  [[nodiscard]] std::string str() const;
};

/// Raised by module parsing and grammar compilation; carries every problem
/// found, not just the first.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(std::vector<Diagnostic> diagnostics);
  [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

namespace source {

struct TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

struct TypeExpr {
  enum class Kind { Str, Param, Table, Record };
  Kind kind = Kind::Str;
  std::string param;                                 // Param: type name; Table: argument type
  TypePtr value;                                     // Table: value type
  std::vector<std::pair<std::string, TypePtr>> fields;  // Record
  int line = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    Lit,          // "token"
    Empty,        // []
    Concat,       // a ++ b
    Record,       // {f = e ; ...}
    Proj,         // e.label
    Select,       // e ! e
    TableLambda,  // \\p,q => e
    TableCases,   // table {P => e ; _ => e}
    Case,         // case e of {P => e}
    Variants,     // (a | b)
    Var,          // bound variable (lin argument or table variable)
    Con,          // parameter constructor
  };
  Kind kind = Kind::Lit;
  std::string text;  // literal, label, variable or constructor name
  std::vector<ExprPtr> kids;
  std::vector<std::pair<std::string, ExprPtr>> fields;
  std::vector<std::string> vars;
  std::vector<std::pair<std::string, ExprPtr>> cases;  // pattern ("_" = wildcard) -> body
  int line = 0;
};

struct CatDecl {
  std::string name;
  int line = 0;
};

struct FunDecl {
  std::string name;
  std::vector<std::string> args;
  std::string result;
  int line = 0;
};

struct AbstractModule {
  std::string name;
  std::vector<CatDecl> cats;
  std::vector<FunDecl> funs;
  std::vector<std::string> startCats;
};

struct ParamDecl {
  std::string name;
  std::vector<std::string> values;
  int line = 0;
};

struct LincatDecl {
  std::string cat;
  TypePtr type;
  int line = 0;
};

struct LinDecl {
  std::string fun;
  std::vector<std::string> vars;
  ExprPtr body;
  int line = 0;
};

struct PunctDecl {
  std::string cat;
  std::string token;
  int line = 0;
};

struct ConcreteModule {
  std::string name;
  std::string abstractName;
  std::string language;
  std::vector<ParamDecl> params;
  std::vector<LincatDecl> lincats;
  std::vector<LinDecl> lins;
  std::vector<PunctDecl> puncts;
};

struct LexArg {
  bool quoted = false;
  std::string text;
};

struct LexEntry {
  std::string id;
  std::string op;
  std::vector<LexArg> args;
  int line = 0;
};

struct LexiconModule {
  std::string name;
  std::string concreteName;
  std::vector<LexEntry> entries;
};

using Module = std::variant<AbstractModule, ConcreteModule, LexiconModule>;

/// Parses one module. `moduleLabel` only tags diagnostics.
Module parseModule(std::string_view text, const std::string& moduleLabel);

std::string moduleName(const Module& m);

/// Renders lexicon entries back to source lines (`id = op "a" "b" gender ;`).
std::string renderLexiconEntry(const LexEntry& e);

}  // namespace source
}  // namespace cnlwiki::grammar
