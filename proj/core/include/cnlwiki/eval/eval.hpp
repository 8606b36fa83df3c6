#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnlwiki/grammar/kernel.hpp"
#include "cnlwiki/semantics/axiom.hpp"

namespace cnlwiki::eval {

using grammar::AbstractTree;
using grammar::CompiledGrammar;
using grammar::Tokens;

inline constexpr int kDefaultTokenCap = 10;
inline constexpr int kMaxRoundTripDepth = 5;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every terminated sentence of `lang` with at most `maxTokens` tokens
/// (the final `.` or `?` counts), each once, sorted. Works bottom-up over
/// the PMCFG: a category's field tuples are saturated with fields longer
/// than the bound collapsed to a single marker.
std::vector<Tokens> enumerateSentences(const CompiledGrammar& g, const std::string& lang, int maxTokens,
                                       int cap = kDefaultTokenCap);

struct AmbiguousSentence {
  Tokens tokens;
  std::vector<AbstractTree> trees;
  bool harmless = false;  // every reading has the same axiom (or query)
};

struct EvalReport {
  std::string language;
  int maxTokens = 0;
  int maxDepth = 0;
  std::map<int, std::size_t> sentenceCount;  // by token length
  std::size_t sentences = 0;
  std::size_t ambiguous = 0;
  double ambiguityRate = 0.0;
  double harmlessRate = 1.0;
  std::vector<AmbiguousSentence> ambiguousSentences;
  std::size_t treesChecked = 0;
  std::size_t treesSkipped = 0;  // no linearization in this language
  std::vector<AbstractTree> roundTripFailures;

  [[nodiscard]] std::string json() const;
  [[nodiscard]] std::string summary() const;
};

/// Sentence counts per length.
EvalReport coverageReport(const CompiledGrammar& g, const std::string& lang, int maxTokens,
                          int cap = kDefaultTokenCap);

/// Parses every enumerated sentence. ambiguityRate is 0 and harmlessRate 1
/// when there is nothing to measure.
EvalReport ambiguityReport(const CompiledGrammar& g, const std::string& lang, int maxTokens,
                           int cap = kDefaultTokenCap);

/// Linearizes every start-category tree up to `maxDepth` (all variants) and
/// records trees missing from the parse of any of their linearizations.
EvalReport roundTripCheck(const CompiledGrammar& g, const std::string& lang, int maxDepth);

/// Tableau against the bounded-model oracle over every knowledge base of at
/// most `maxAxioms` axioms drawn from agreementUniverse().
struct AgreementReport {
  int maxAxioms = 0;
  int maxDomain = 0;
  std::size_t universe = 0;
  std::size_t kbs = 0;
  std::size_t oracleModels = 0;    // a model of size <= maxDomain exists
  std::size_t oracleNoModel = 0;   // none up to maxDomain
  std::size_t tableauUnknown = 0;
  std::size_t unconfirmed = 0;     // tableau consistent, oracle found no small model
  std::vector<std::string> disagreements;  // oracle model, tableau inconsistent or undecided

  [[nodiscard]] bool agrees() const { return disagreements.empty(); }
  [[nodiscard]] std::string json() const;
  [[nodiscard]] std::string summary() const;
};

/// Axioms over classes A and B, role r and individuals a and b, covering
/// every axiom kind and class constructor.
std::vector<semantics::Axiom> agreementUniverse();

AgreementReport reasonerAgreement(int maxAxioms = 4, int maxDomain = 3);

}  // namespace cnlwiki::eval
