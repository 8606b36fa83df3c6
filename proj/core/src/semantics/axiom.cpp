#include "cnlwiki/semantics/axiom.hpp"

#include <cctype>

namespace cnlwiki::semantics {

ClassExpr ClassExpr::named(std::string name) {
  return ClassExpr(std::make_shared<const Node>(Node{Kind::Named, std::move(name), {}, {}}));
}

ClassExpr ClassExpr::complement(ClassExpr c) {
  return ClassExpr(std::make_shared<const Node>(Node{Kind::Complement, {}, {}, {std::move(c)}}));
}

ClassExpr ClassExpr::intersection(ClassExpr a, ClassExpr b) {
  return ClassExpr(std::make_shared<const Node>(Node{Kind::Intersection, {}, {}, {std::move(a), std::move(b)}}));
}

ClassExpr ClassExpr::exists(RoleExpr r, ClassExpr filler) {
  return ClassExpr(std::make_shared<const Node>(Node{Kind::Exists, {}, std::move(r), {std::move(filler)}}));
}

ClassExpr ClassExpr::hasValue(RoleExpr r, std::string individual) {
  return ClassExpr(std::make_shared<const Node>(Node{Kind::HasValue, std::move(individual), std::move(r), {}}));
}

std::string ClassExpr::str() const {
  switch (kind()) {
    case Kind::Named:
      return name();
    case Kind::Complement:
      return "Complement(" + operand().str() + ")";
    case Kind::Intersection:
      return "Intersection(" + operand(0).str() + ", " + operand(1).str() + ")";
    case Kind::Exists:
      return "Exists(" + role().str() + ", " + operand().str() + ")";
    case Kind::HasValue:
      return "HasValue(" + role().str() + ", " + name() + ")";
  }
  return {};
}

void ClassExpr::collectSignature(std::vector<std::string>& classes, std::vector<std::string>& roles,
                                 std::vector<std::string>& individuals) const {
  switch (kind()) {
    case Kind::Named:
      classes.push_back(name());
      break;
    case Kind::HasValue:
      roles.push_back(role().name);
      individuals.push_back(name());
      break;
    case Kind::Exists:
      roles.push_back(role().name);
      break;
    default:
      break;
  }
  for (const auto& o : node_->operands) o.collectSignature(classes, roles, individuals);
}

bool operator==(const ClassExpr& a, const ClassExpr& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() && a.role() == b.role() && a.node_->operands == b.node_->operands;
}

std::strong_ordering operator<=>(const ClassExpr& a, const ClassExpr& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (auto c = a.role() <=> b.role(); c != 0) return c;
  return a.node_->operands <=> b.node_->operands;
}

Axiom Axiom::subClassOf(ClassExpr sub, ClassExpr super) { return {Kind::SubClassOf, {std::move(sub), std::move(super)}, {}, {}}; }
Axiom Axiom::classAssertion(ClassExpr c, std::string ind) { return {Kind::ClassAssertion, {std::move(c)}, {}, {std::move(ind)}}; }
Axiom Axiom::roleAssertion(std::string role, std::string a, std::string b) {
  return {Kind::RoleAssertion, {}, std::move(role), {std::move(a), std::move(b)}};
}
Axiom Axiom::negRoleAssertion(std::string role, std::string a, std::string b) {
  return {Kind::NegRoleAssertion, {}, std::move(role), {std::move(a), std::move(b)}};
}
Axiom Axiom::asymmetric(std::string role) { return {Kind::Asymmetric, {}, std::move(role), {}}; }
Axiom Axiom::symmetric(std::string role) { return {Kind::Symmetric, {}, std::move(role), {}}; }

std::string Axiom::str() const {
  switch (kind) {
    case Kind::SubClassOf:
      return "SubClassOf(" + classes[0].str() + ", " + classes[1].str() + ")";
    case Kind::ClassAssertion:
      return "ClassAssertion(" + classes[0].str() + ", " + individuals[0] + ")";
    case Kind::RoleAssertion:
      return "RoleAssertion(" + role + ", " + individuals[0] + ", " + individuals[1] + ")";
    case Kind::NegRoleAssertion:
      return "NegRoleAssertion(" + role + ", " + individuals[0] + ", " + individuals[1] + ")";
    case Kind::Asymmetric:
      return "Asymmetric(" + role + ")";
    case Kind::Symmetric:
      return "Symmetric(" + role + ")";
  }
  return {};
}

void Axiom::collectSignature(std::vector<std::string>& cls, std::vector<std::string>& roles,
                             std::vector<std::string>& inds) const {
  for (const auto& c : classes) c.collectSignature(cls, roles, inds);
  if (!role.empty()) roles.push_back(role);
  inds.insert(inds.end(), individuals.begin(), individuals.end());
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  std::string name() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                static_cast<unsigned char>(s_[pos_]) >= 0x80)) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void end() {
    skip();
    if (pos_ != s_.size()) fail("trailing input");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw AxiomSyntaxError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  RoleExpr role() {
    std::string n = name();
    if (n == "Inverse") {
      expect('(');
      RoleExpr r{name(), true};
      expect(')');
      return r;
    }
    return {n, false};
  }

  ClassExpr cls() {
    std::string n = name();
    if (!peek('(')) return ClassExpr::named(n);
    expect('(');
    ClassExpr out = ClassExpr::named("");
    if (n == "Complement") {
      out = ClassExpr::complement(cls());
    } else if (n == "Intersection") {
      ClassExpr a = cls();
      expect(',');
      out = ClassExpr::intersection(a, cls());
    } else if (n == "Exists") {
      RoleExpr r = role();
      expect(',');
      out = ClassExpr::exists(r, cls());
    } else if (n == "HasValue") {
      RoleExpr r = role();
      expect(',');
      out = ClassExpr::hasValue(r, name());
    } else {
      fail("unknown class constructor " + n);
    }
    expect(')');
    return out;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ClassExpr ClassExpr::parse(std::string_view text) {
  Reader r(text);
  ClassExpr c = r.cls();
  r.end();
  return c;
}

Axiom Axiom::parse(std::string_view text) {
  Reader r(text);
  std::string head = r.name();
  r.expect('(');
  Axiom out = Axiom::asymmetric("");
  if (head == "SubClassOf") {
    ClassExpr a = r.cls();
    r.expect(',');
    out = subClassOf(a, r.cls());
  } else if (head == "ClassAssertion") {
    ClassExpr c = r.cls();
    r.expect(',');
    out = classAssertion(c, r.name());
  } else if (head == "RoleAssertion" || head == "NegRoleAssertion") {
    std::string role = r.name();
    r.expect(',');
    std::string a = r.name();
    r.expect(',');
    std::string b = r.name();
    out = head == "RoleAssertion" ? roleAssertion(role, a, b) : negRoleAssertion(role, a, b);
  } else if (head == "Asymmetric") {
    out = asymmetric(r.name());
  } else if (head == "Symmetric") {
    out = symmetric(r.name());
  } else {
    r.fail("unknown axiom type " + head);
  }
  r.expect(')');
  r.end();
  return out;
}

}  // namespace cnlwiki::semantics
