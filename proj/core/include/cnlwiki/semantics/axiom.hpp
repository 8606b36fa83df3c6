#pragma once

#include <compare>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cnlwiki::semantics {

struct RoleExpr {
  std::string name;
  bool inverse = false;

  [[nodiscard]] RoleExpr inverted() const { return {name, !inverse}; }
  [[nodiscard]] std::string str() const { return inverse ? "Inverse(" + name + ")" : name; }
  friend auto operator<=>(const RoleExpr&, const RoleExpr&) = default;
  friend bool operator==(const RoleExpr&, const RoleExpr&) = default;
};

/// Immutable class expression.
class ClassExpr {
 public:
  enum class Kind { Named, Complement, Intersection, Exists, HasValue };

  static ClassExpr named(std::string name);
  static ClassExpr complement(ClassExpr c);
  static ClassExpr intersection(ClassExpr a, ClassExpr b);
  static ClassExpr exists(RoleExpr r, ClassExpr filler);
  static ClassExpr hasValue(RoleExpr r, std::string individual);

  [[nodiscard]] Kind kind() const { return node_->kind; }
  /// Class id (Named) or individual id (HasValue).
  [[nodiscard]] const std::string& name() const { return node_->name; }
  [[nodiscard]] const RoleExpr& role() const { return node_->role; }
  [[nodiscard]] const ClassExpr& operand(std::size_t i = 0) const { return node_->operands[i]; }

  [[nodiscard]] std::string str() const;
  /// Reads the functional syntax produced by str().
  static ClassExpr parse(std::string_view text);

  void collectSignature(std::vector<std::string>& classes, std::vector<std::string>& roles,
                        std::vector<std::string>& individuals) const;

  friend bool operator==(const ClassExpr& a, const ClassExpr& b);
  friend std::strong_ordering operator<=>(const ClassExpr& a, const ClassExpr& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    RoleExpr role;
    std::vector<ClassExpr> operands;
  };
  explicit ClassExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Axiom {
  enum class Kind { SubClassOf, ClassAssertion, RoleAssertion, NegRoleAssertion, Asymmetric, Symmetric };

  Kind kind;
  std::vector<ClassExpr> classes;        // SubClassOf: sub, super; ClassAssertion: class
  std::string role;                      // role axioms and assertions
  std::vector<std::string> individuals;  // assertions

  static Axiom subClassOf(ClassExpr sub, ClassExpr super);
  static Axiom classAssertion(ClassExpr c, std::string ind);
  static Axiom roleAssertion(std::string role, std::string a, std::string b);
  static Axiom negRoleAssertion(std::string role, std::string a, std::string b);
  static Axiom asymmetric(std::string role);
  static Axiom symmetric(std::string role);

  /// `SubClassOf(country, Exists(Inverse(border), country))`, `Asymmetric(contain)`.
  [[nodiscard]] std::string str() const;
  static Axiom parse(std::string_view text);

  void collectSignature(std::vector<std::string>& classes, std::vector<std::string>& roles,
                        std::vector<std::string>& individuals) const;

  friend bool operator==(const Axiom& a, const Axiom& b) { return a.str() == b.str(); }
  friend bool operator<(const Axiom& a, const Axiom& b) { return a.str() < b.str(); }
};

class AxiomSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cnlwiki::semantics
