#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cnlwiki/grammar/compiler.hpp"
#include "cnlwiki/grammar/kernel.hpp"

namespace cnlwiki::ace {

using grammar::Inflection;
using grammar::Tokens;

/// Smart paradigms. Forms are keyed with the field labels of the shipped
/// concrete syntaxes ("s Sg", "s Pl Dat", "pp Fem", ...). Throw
/// grammar::ParadigmError on bad arguments.
Inflection mkN(const std::string& lang, const std::vector<std::string>& forms, const std::string& gender = "");
Inflection mkPN(const std::string& lang, const std::vector<std::string>& forms, const std::string& gender = "");
Inflection mkV2(const std::string& lang, const std::vector<std::string>& forms);

/// Dispatches a lexicon line to the paradigm named by its operator.
Inflection expandLexiconEntry(const std::string& lang, const std::string& category,
                              const grammar::source::LexEntry& entry);

/// Whitespace split; `.`, `?` and `,` become tokens of their own.
Tokens tokenize(std::string_view text);
std::string detokenize(const Tokens& tokens);

/// File name -> source text of the grammar modules compiled into the binary.
std::vector<grammar::ModuleText> shippedModules();

grammar::GrammarPtr compileModules(const std::vector<grammar::ModuleText>& modules);
grammar::GrammarPtr compileShipped();

/// The wiki entity id behind a lexical function: `country_N` -> `country`.
std::string entityName(const std::string& lexicalId);

}  // namespace cnlwiki::ace
