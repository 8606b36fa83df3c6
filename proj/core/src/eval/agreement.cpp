#include <algorithm>
#include <sstream>

#include "cnlwiki/eval/eval.hpp"
#include "cnlwiki/reasoner/reasoner.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace cnlwiki::eval {

namespace {

using semantics::Axiom;

// Every subset of {0..n-1} with at most k elements, as bitmasks.
std::vector<std::uint64_t> subsets(std::size_t n, int k) {
  std::vector<std::uint64_t> out{0};
  std::vector<std::uint64_t> frontier{0};
  for (int size = 1; size <= k; ++size) {
    std::vector<std::uint64_t> next;
    for (auto m : frontier) {
      std::size_t start = m ? 64 - static_cast<std::size_t>(__builtin_clzll(m)) : 0;
      for (std::size_t i = start; i < n; ++i) next.push_back(m | (std::uint64_t{1} << i));
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::string describe(const std::vector<Axiom>& axioms) {
  std::string out;
  for (const auto& a : axioms) out += (out.empty() ? "" : "; ") + a.str();
  return "{" + out + "}";
}

}  // namespace

std::vector<Axiom> agreementUniverse() {
  static const char* const kAxioms[] = {
      "SubClassOf(A, B)",
      "SubClassOf(B, A)",
      "SubClassOf(A, Complement(B))",
      "SubClassOf(Complement(A), B)",
      "SubClassOf(A, Exists(r, B))",
      "SubClassOf(A, Exists(r, A))",
      "SubClassOf(B, Exists(Inverse(r), A))",
      "SubClassOf(Exists(r, A), Complement(B))",
      "SubClassOf(Exists(r, B), A)",
      "SubClassOf(A, Complement(Exists(r, A)))",
      "SubClassOf(Intersection(A, B), Complement(A))",
      "SubClassOf(Exists(Inverse(r), B), B)",
      "SubClassOf(A, HasValue(r, b))",
      "SubClassOf(B, HasValue(Inverse(r), a))",
      "SubClassOf(HasValue(r, a), Complement(A))",
      "ClassAssertion(A, a)",
      "ClassAssertion(B, a)",
      "ClassAssertion(Complement(B), a)",
      "ClassAssertion(A, b)",
      "ClassAssertion(B, b)",
      "ClassAssertion(Complement(A), b)",
      "ClassAssertion(Exists(r, A), b)",
      "ClassAssertion(HasValue(Inverse(r), a), b)",
      "ClassAssertion(Complement(Exists(r, B)), a)",
      "RoleAssertion(r, a, b)",
      "RoleAssertion(r, b, a)",
      "RoleAssertion(r, a, a)",
      "NegRoleAssertion(r, a, b)",
      "NegRoleAssertion(r, b, b)",
      "Asymmetric(r)",
      "Symmetric(r)",
      "ClassAssertion(Intersection(A, Complement(B)), a)",
  };
  std::vector<Axiom> out;
  for (const char* text : kAxioms) out.push_back(Axiom::parse(text));
  return out;
}

AgreementReport reasonerAgreement(int maxAxioms, int maxDomain) {
  AgreementReport r;
  r.maxAxioms = maxAxioms;
  r.maxDomain = maxDomain;
  const auto universe = agreementUniverse();
  r.universe = universe.size();
  const auto profiles = reasoner::satisfactionProfiles(universe, maxDomain);
  const auto pool = subsets(universe.size(), maxAxioms);
  r.kbs = pool.size();

  enum Outcome : char { kAgree, kUnconfirmed, kUnknownWithModel, kUnknownNoModel, kDisagree };
  std::vector<char> outcome(pool.size());
  std::vector<char> hasModel(pool.size());
  detail::parallelFor(pool.size(), [&](std::size_t k) {
    std::uint64_t mask = pool[k];
    bool model = std::any_of(profiles.begin(), profiles.end(), [&](std::uint64_t p) { return (p & mask) == mask; });
    std::vector<Axiom> kb;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (mask >> i & 1) kb.push_back(universe[i]);
    }
    auto v = reasoner::Tableau().satisfiable(kb);
    hasModel[k] = model;
    if (v == reasoner::Verdict::Unknown) outcome[k] = model ? kUnknownWithModel : kUnknownNoModel;
    else if (model) outcome[k] = v == reasoner::Verdict::Yes ? kAgree : kDisagree;
    else outcome[k] = v == reasoner::Verdict::Yes ? kUnconfirmed : kAgree;
  });
  for (std::size_t k = 0; k < pool.size(); ++k) {
    if (hasModel[k]) ++r.oracleModels;
    else ++r.oracleNoModel;
    if (outcome[k] == kUnknownWithModel || outcome[k] == kUnknownNoModel) ++r.tableauUnknown;
    if (outcome[k] == kUnconfirmed) ++r.unconfirmed;
    if (outcome[k] == kDisagree || outcome[k] == kUnknownWithModel) {
      std::vector<Axiom> kb;
      for (std::size_t i = 0; i < universe.size(); ++i) {
        if (pool[k] >> i & 1) kb.push_back(universe[i]);
      }
      r.disagreements.push_back(describe(kb));
    }
  }
  return r;
}

std::string AgreementReport::json() const {
  nlohmann::json j{{"maxAxioms", maxAxioms},         {"maxDomain", maxDomain},
                   {"universe", universe},           {"kbs", kbs},
                   {"oracleModels", oracleModels},   {"oracleNoModel", oracleNoModel},
                   {"tableauUnknown", tableauUnknown}, {"unconfirmed", unconfirmed},
                   {"disagreements", disagreements}};
  return j.dump(2);
}

std::string AgreementReport::summary() const {
  std::ostringstream out;
  out << "reasoner agreement, " << kbs << " knowledge bases of up to " << maxAxioms << " axioms from " << universe
      << ", oracle domain up to " << maxDomain << "\n";
  out << "oracle models: " << oracleModels << ", no model: " << oracleNoModel << "\n";
  out << "tableau undecided: " << tableauUnknown << ", consistent without small model: " << unconfirmed << "\n";
  out << "disagreements: " << disagreements.size() << "\n";
  for (const auto& d : disagreements) out << "  " << d << "\n";
  return out.str();
}

}  // namespace cnlwiki::eval
