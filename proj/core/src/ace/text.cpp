#include <cctype>

#include "cnlwiki/ace/ace.hpp"

namespace cnlwiki::ace {

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '.' || c == '?' || c == ',') {
      flush();
      out.emplace_back(1, c);
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

std::string detokenize(const Tokens& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

grammar::GrammarPtr compileModules(const std::vector<grammar::ModuleText>& modules) {
  return grammar::compileGrammar(modules, expandLexiconEntry);
}

grammar::GrammarPtr compileShipped() { return compileModules(shippedModules()); }

}  // namespace cnlwiki::ace
