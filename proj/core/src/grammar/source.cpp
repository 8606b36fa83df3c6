#include "cnlwiki/grammar/source.hpp"

#include <cctype>
#include <set>

namespace cnlwiki::grammar {

std::string Diagnostic::str() const {
  std::string out = module;
  if (line > 0) out += ":" + std::to_string(line);
  out += ": " + message;
  return out;
}

namespace {
std::string joinDiagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += d.str();
  }
  return out.empty() ? "grammar compilation failed" : out;
}
}  // namespace

CompileError::CompileError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(joinDiagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace source {

namespace {

struct Token {
  enum class Kind { Ident, String, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0;
};

bool identStart(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool identChar(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

class Lexer {
 public:
  Lexer(std::string_view text, std::string label) : text_(text), label_(std::move(label)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipSpaceAndComments();
      if (pos_ >= text_.size()) break;
      unsigned char c = text_[pos_];
      if (c == '"') {
        out.push_back(readString());
      } else if (identStart(c)) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && identChar(text_[pos_])) ++pos_;
        out.push_back({Token::Kind::Ident, std::string(text_.substr(start, pos_ - start)), line_});
      } else {
        out.push_back(readSymbol());
      }
    }
    out.push_back({Token::Kind::End, "<end of module>", line_});
    return out;
  }

 private:
  void skipSpaceAndComments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  Token readString() {
    int line = line_;
    ++pos_;
    std::string value;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\n') fail(line, "unterminated string literal");
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      value += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail(line, "unterminated string literal");
    ++pos_;
    return {Token::Kind::String, value, line};
  }

  Token readSymbol() {
    static const char* kTwo[] = {"=>", "->", "++", "\\\\"};
    for (const char* s : kTwo) {
      if (text_.substr(pos_, 2) == s) {
        pos_ += 2;
        return {Token::Kind::Symbol, s, line_};
      }
    }
    char c = text_[pos_];
    static const std::string kOne = "{}()[];:,=!.|\\";
    if (kOne.find(c) == std::string::npos) fail(line_, std::string("unexpected character '") + c + "'");
    ++pos_;
    if (c == '\\') return {Token::Kind::Symbol, "\\\\", line_};
    return {Token::Kind::Symbol, std::string(1, c), line_};
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw CompileError({{label_, line, msg}});
  }

  std::string_view text_;
  std::string label_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

const std::set<std::string> kSectionKeywords = {"cat", "fun", "flags", "param", "lincat", "lin", "punct", "oper"};

class ModuleParser {
 public:
  ModuleParser(std::vector<Token> toks, std::string label) : toks_(std::move(toks)), label_(std::move(label)) {}

  Module run() {
    const Token& head = peek();
    if (isIdent("abstract")) return abstractModule();
    if (isIdent("concrete")) return concreteModule();
    if (isIdent("lexicon")) return lexiconModule();
    fail(head.line, "expected 'abstract', 'concrete' or 'lexicon', found '" + head.text + "'");
  }

 private:
  // ---- abstract ----
  AbstractModule abstractModule() {
    AbstractModule m;
    next();
    m.name = ident("module name");
    optionalSymbol("=");
    optionalSymbol("{");
    bool braced = toks_[pos_ - 1].text == "{";
    while (!atModuleEnd(braced)) {
      const Token& kw = peek();
      if (kw.kind != Token::Kind::Ident || !kSectionKeywords.count(kw.text))
        fail(kw.line, "expected a section keyword, found '" + kw.text + "'");
      next();
      if (kw.text == "cat") {
        while (!atSectionEnd(braced)) {
          do {
            int line = peek().line;
            m.cats.push_back({ident("category name"), line});
          } while (optionalSymbol(","));
          symbol(";");
        }
      } else if (kw.text == "fun") {
        while (!atSectionEnd(braced)) {
          std::vector<std::pair<std::string, int>> names;
          do {
            int line = peek().line;
            names.emplace_back(ident("function name"), line);
          } while (optionalSymbol(","));
          symbol(":");
          std::vector<std::string> cats{ident("category")};
          while (optionalSymbol("->")) cats.push_back(ident("category"));
          symbol(";");
          std::string result = cats.back();
          cats.pop_back();
          for (auto& [n, line] : names) m.funs.push_back({n, cats, result, line});
        }
      } else if (kw.text == "flags") {
        while (!atSectionEnd(braced)) {
          std::string flag = ident("flag name");
          symbol("=");
          if (flag == "startcat") {
            do {
              m.startCats.push_back(ident("category"));
            } while (optionalSymbol(","));
          } else {
            next();
          }
          symbol(";");
        }
      } else {
        fail(kw.line, "section '" + kw.text + "' is not allowed in an abstract module");
      }
    }
    if (braced) symbol("}");
    expectEnd();
    return m;
  }

  // ---- concrete ----
  ConcreteModule concreteModule() {
    ConcreteModule m;
    next();
    m.name = ident("module name");
    expectIdent("of");
    m.abstractName = ident("abstract module name");
    optionalSymbol("=");
    optionalSymbol("{");
    bool braced = toks_[pos_ - 1].text == "{";
    while (!atModuleEnd(braced)) {
      const Token kw = peek();
      if (kw.kind != Token::Kind::Ident || !kSectionKeywords.count(kw.text))
        fail(kw.line, "expected a section keyword, found '" + kw.text + "'");
      next();
      while (!atSectionEnd(braced)) {
        if (kw.text == "flags") {
          std::string flag = ident("flag name");
          symbol("=");
          const Token& v = next();
          if (flag == "lang" || flag == "language") m.language = v.text;
          symbol(";");
        } else if (kw.text == "param") {
          ParamDecl p;
          p.line = peek().line;
          p.name = ident("parameter type name");
          symbol("=");
          do {
            p.values.push_back(ident("parameter value"));
          } while (optionalSymbol("|"));
          symbol(";");
          m.params.push_back(std::move(p));
        } else if (kw.text == "lincat") {
          std::vector<std::pair<std::string, int>> names;
          do {
            int line = peek().line;
            names.emplace_back(ident("category"), line);
          } while (optionalSymbol(","));
          symbol("=");
          TypePtr t = type();
          symbol(";");
          for (auto& [n, line] : names) m.lincats.push_back({n, t, line});
        } else if (kw.text == "lin") {
          LinDecl l;
          l.line = peek().line;
          l.fun = ident("function name");
          while (peek().kind == Token::Kind::Ident) l.vars.push_back(ident("variable"));
          symbol("=");
          l.body = expr();
          symbol(";");
          m.lins.push_back(std::move(l));
        } else if (kw.text == "punct") {
          PunctDecl p;
          p.line = peek().line;
          p.cat = ident("category");
          symbol("=");
          p.token = string("punctuation token");
          symbol(";");
          m.puncts.push_back(std::move(p));
        } else {
          fail(kw.line, "section '" + kw.text + "' is not supported in a concrete module");
        }
      }
    }
    if (braced) symbol("}");
    expectEnd();
    return m;
  }

  // ---- lexicon ----
  LexiconModule lexiconModule() {
    LexiconModule m;
    next();
    m.name = ident("module name");
    expectIdent("of");
    m.concreteName = ident("concrete module name");
    symbol(";");
    while (peek().kind != Token::Kind::End) {
      LexEntry e;
      e.line = peek().line;
      e.id = ident("lexicon identifier");
      symbol("=");
      e.op = ident("paradigm operator");
      while (!isSymbol(";")) {
        const Token& t = next();
        if (t.kind == Token::Kind::String) {
          e.args.push_back({true, t.text});
        } else if (t.kind == Token::Kind::Ident) {
          e.args.push_back({false, t.text});
        } else {
          fail(t.line, "unexpected '" + t.text + "' in lexicon entry " + e.id);
        }
      }
      symbol(";");
      m.entries.push_back(std::move(e));
    }
    return m;
  }

  // ---- types ----
  TypePtr type() {
    auto t = std::make_shared<TypeExpr>();
    t->line = peek().line;
    if (optionalSymbol("{")) {
      t->kind = TypeExpr::Kind::Record;
      while (!isSymbol("}")) {
        std::vector<std::string> labels{ident("field label")};
        while (optionalSymbol(",")) labels.push_back(ident("field label"));
        symbol(":");
        TypePtr ft = type();
        for (auto& l : labels) t->fields.emplace_back(l, ft);
        if (!optionalSymbol(";")) break;
      }
      symbol("}");
      return t;
    }
    std::string name = ident("type");
    if (name == "Str") {
      t->kind = TypeExpr::Kind::Str;
    } else if (optionalSymbol("=>")) {
      t->kind = TypeExpr::Kind::Table;
      t->param = name;
      t->value = type();
    } else {
      t->kind = TypeExpr::Kind::Param;
      t->param = name;
    }
    return t;
  }

  // ---- expressions ----
  ExprPtr expr() {
    int line = peek().line;
    ExprPtr first = concat();
    if (!isSymbol("|")) return first;
    auto v = make(Expr::Kind::Variants, line);
    v->kids.push_back(first);
    while (optionalSymbol("|")) v->kids.push_back(concat());
    return v;
  }

  ExprPtr concat() {
    int line = peek().line;
    ExprPtr left = select();
    while (optionalSymbol("++")) {
      auto c = make(Expr::Kind::Concat, line);
      c->kids = {left, select()};
      left = c;
    }
    return left;
  }

  ExprPtr select() {
    int line = peek().line;
    ExprPtr left = postfix();
    while (optionalSymbol("!")) {
      auto s = make(Expr::Kind::Select, line);
      s->kids = {left, postfix()};
      left = s;
    }
    return left;
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    while (isSymbol(".")) {
      int line = next().line;
      auto p = make(Expr::Kind::Proj, line);
      p->text = ident("field label");
      p->kids = {e};
      e = p;
    }
    return e;
  }

  ExprPtr atom() {
    const Token& t = peek();
    int line = t.line;
    if (t.kind == Token::Kind::String) {
      next();
      auto e = make(Expr::Kind::Lit, line);
      e->text = t.text;
      return e;
    }
    if (optionalSymbol("(")) {
      ExprPtr inner = expr();
      symbol(")");
      return inner;
    }
    if (optionalSymbol("[")) {
      symbol("]");
      return make(Expr::Kind::Empty, line);
    }
    if (optionalSymbol("{")) {
      auto r = make(Expr::Kind::Record, line);
      while (!isSymbol("}")) {
        std::string label = ident("field label");
        symbol("=");
        r->fields.emplace_back(label, expr());
        if (!optionalSymbol(";")) break;
      }
      symbol("}");
      return r;
    }
    if (optionalSymbol("\\\\")) {
      auto l = make(Expr::Kind::TableLambda, line);
      do {
        l->vars.push_back(ident("table variable"));
      } while (optionalSymbol(","));
      symbol("=>");
      l->kids = {expr()};
      return l;
    }
    if (isIdent("table")) {
      next();
      auto tc = make(Expr::Kind::TableCases, line);
      tc->cases = cases();
      return tc;
    }
    if (isIdent("case")) {
      next();
      auto c = make(Expr::Kind::Case, line);
      c->kids = {expr()};
      expectIdent("of");
      c->cases = cases();
      return c;
    }
    if (t.kind == Token::Kind::Ident) {
      next();
      // Constructors start upper-case; variables start lower-case.
      bool upper = std::isupper(static_cast<unsigned char>(t.text[0]));
      auto e = make(upper ? Expr::Kind::Con : Expr::Kind::Var, line);
      e->text = t.text;
      return e;
    }
    fail(line, "expected an expression, found '" + t.text + "'");
  }

  std::vector<std::pair<std::string, ExprPtr>> cases() {
    symbol("{");
    std::vector<std::pair<std::string, ExprPtr>> out;
    while (!isSymbol("}")) {
      std::vector<std::string> pats{ident("pattern")};
      while (optionalSymbol("|")) pats.push_back(ident("pattern"));
      symbol("=>");
      ExprPtr body = expr();
      for (auto& p : pats) out.emplace_back(p, body);
      if (!optionalSymbol(";")) break;
    }
    symbol("}");
    return out;
  }

  // ---- token helpers ----
  std::shared_ptr<Expr> make(Expr::Kind k, int line) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->line = line;
    return e;
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }
  bool isSymbol(std::string_view s) const { return peek().kind == Token::Kind::Symbol && peek().text == s; }
  bool isIdent(std::string_view s) const { return peek().kind == Token::Kind::Ident && peek().text == s; }

  bool optionalSymbol(std::string_view s) {
    if (!isSymbol(s)) return false;
    next();
    return true;
  }
  void symbol(std::string_view s) {
    if (!optionalSymbol(s)) fail(peek().line, "expected '" + std::string(s) + "', found '" + peek().text + "'");
  }
  void expectIdent(std::string_view s) {
    if (!isIdent(s)) fail(peek().line, "expected '" + std::string(s) + "', found '" + peek().text + "'");
    next();
  }
  std::string ident(const char* what) {
    if (peek().kind != Token::Kind::Ident) fail(peek().line, std::string("expected ") + what + ", found '" + peek().text + "'");
    return next().text;
  }
  std::string string(const char* what) {
    if (peek().kind != Token::Kind::String) fail(peek().line, std::string("expected ") + what + ", found '" + peek().text + "'");
    return next().text;
  }

  bool atModuleEnd(bool braced) const {
    return braced ? isSymbol("}") || peek().kind == Token::Kind::End : peek().kind == Token::Kind::End;
  }
  bool atSectionEnd(bool braced) const {
    return atModuleEnd(braced) || (peek().kind == Token::Kind::Ident && kSectionKeywords.count(peek().text));
  }
  void expectEnd() {
    if (peek().kind != Token::Kind::End) fail(peek().line, "unexpected '" + peek().text + "' after module end");
  }

  [[noreturn]] void fail(int line, const std::string& msg) const { throw CompileError({{label_, line, msg}}); }

  std::vector<Token> toks_;
  std::string label_;
  std::size_t pos_ = 0;
};

}  // namespace

Module parseModule(std::string_view text, const std::string& moduleLabel) {
  return ModuleParser(Lexer(text, moduleLabel).run(), moduleLabel).run();
}

std::string moduleName(const Module& m) {
  return std::visit([](const auto& mod) { return mod.name; }, m);
}

std::string renderLexiconEntry(const LexEntry& e) {
  std::string out = e.id + " = " + e.op;
  for (const auto& a : e.args) out += a.quoted ? " \"" + a.text + "\"" : " " + a.text;
  return out + " ;";
}

}  // namespace source
}  // namespace cnlwiki::grammar
