#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnlwiki/grammar/pmcfg.hpp"
#include "cnlwiki/grammar/source.hpp"

namespace cnlwiki::grammar {

struct ModuleText {
  std::string name;  // file or wiki page name, used in diagnostics
  std::string text;
};

/// Inflection table produced by a paradigm operator. Keys are field paths
/// written with the concrete syntax's own labels and parameter values:
/// `forms["s Pl Dat"] = "Ländern"`, `params["g"] = "Neut"`.
struct Inflection {
  std::map<std::string, std::string> forms;
  std::map<std::string, std::string> params;
};

/// Raised by paradigm operators for bad lexicon lines.
class ParadigmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expands one lexicon line for a language. `category` is the word class
/// derived from the identifier suffix.
using LexiconExpander =
    std::function<Inflection(const std::string& language, const std::string& category, const source::LexEntry&)>;

/// Compiles abstract, concrete and lexicon modules into per-language PMCFGs.
///
/// Parameter combinations and variants are expanded into separate
/// productions; the first listed variant always produces the first
/// production. Throws CompileError carrying every diagnostic found.
GrammarPtr compileGrammar(const std::vector<ModuleText>& modules, const LexiconExpander& expandLexicon);

}  // namespace cnlwiki::grammar
