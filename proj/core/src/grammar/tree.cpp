#include "cnlwiki/grammar/tree.hpp"

#include <cctype>
#include <functional>

namespace cnlwiki::grammar {

namespace {

const std::vector<AbstractTree> kNoChildren;

bool isIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
         static_cast<unsigned char>(c) >= 0x80;
}

class TreeReader {
 public:
  explicit TreeReader(std::string_view text) : text_(text) {}

  AbstractTree readTop() {
    AbstractTree t = readApplication();
    skipSpace();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  // application := head atom*
  AbstractTree readApplication() {
    skipSpace();
    if (peek() == '(') {
      ++pos_;
      AbstractTree inner = readApplication();
      expect(')');
      return inner;
    }
    std::string head = readIdent();
    std::vector<AbstractTree> args;
    for (;;) {
      skipSpace();
      if (pos_ >= text_.size() || peek() == ')') break;
      if (peek() == '(') {
        ++pos_;
        args.push_back(readApplication());
        expect(')');
      } else {
        args.emplace_back(readIdent());
      }
    }
    return AbstractTree(std::move(head), std::move(args));
  }

  std::string readIdent() {
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() && isIdentChar(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected function name");
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skipSpace();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw TreeSyntaxError("tree text, column " + std::to_string(pos_ + 1) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void render(const AbstractTree& t, std::string& out, bool nested) {
  bool paren = nested && t.arity() > 0;
  if (paren) out += '(';
  out += t.fun();
  for (const auto& c : t.children()) {
    out += ' ';
    render(c, out, true);
  }
  if (paren) out += ')';
}

}  // namespace

AbstractTree::AbstractTree(std::string fun, std::vector<AbstractTree> children)
    : node_(std::make_shared<const Node>(Node{std::move(fun), std::move(children)})) {}

const std::string& AbstractTree::fun() const {
  static const std::string kEmpty;
  return node_ ? node_->fun : kEmpty;
}

const std::vector<AbstractTree>& AbstractTree::children() const {
  return node_ ? node_->children : kNoChildren;
}

int AbstractTree::depth() const {
  int d = 0;
  for (const auto& c : children()) d = std::max(d, c.depth() + 1);
  return d;
}

std::size_t AbstractTree::size() const {
  std::size_t n = node_ ? 1 : 0;
  for (const auto& c : children()) n += c.size();
  return n;
}

void AbstractTree::collectFunctions(std::vector<std::string>& out) const {
  if (!node_) return;
  out.push_back(node_->fun);
  for (const auto& c : node_->children) c.collectFunctions(out);
}

std::string AbstractTree::str() const {
  std::string out;
  render(*this, out, false);
  return out;
}

AbstractTree AbstractTree::parse(std::string_view text) { return TreeReader(text).readTop(); }

bool operator==(const AbstractTree& a, const AbstractTree& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->fun == b.node_->fun && a.node_->children == b.node_->children;
}

std::strong_ordering operator<=>(const AbstractTree& a, const AbstractTree& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.fun().compare(b.fun()); c != 0) return c <=> 0;
  const auto& ac = a.children();
  const auto& bc = b.children();
  for (std::size_t i = 0; i < ac.size() && i < bc.size(); ++i) {
    if (auto c = ac[i] <=> bc[i]; c != 0) return c;
  }
  return ac.size() <=> bc.size();
}

std::size_t AbstractTreeHash::operator()(const AbstractTree& t) const {
  std::size_t h = std::hash<std::string>{}(t.fun());
  for (const auto& c : t.children()) h = h * 1000003u ^ (*this)(c);
  return h;
}

}  // namespace cnlwiki::grammar
