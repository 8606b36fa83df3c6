#include <algorithm>

#include "cnlwiki/ace/ace.hpp"

namespace cnlwiki::ace {

using grammar::ParadigmError;

namespace {

bool endsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool isAsciiVowel(char c) {
  return std::string_view("aeiouAEIOU").find(c) != std::string_view::npos;
}

void requireForms(const std::vector<std::string>& forms, std::initializer_list<std::size_t> allowed, const char* op) {
  if (std::find(allowed.begin(), allowed.end(), forms.size()) == allowed.end()) {
    std::string counts;
    for (auto n : allowed) counts += (counts.empty() ? "" : " or ") + std::to_string(n);
    throw ParadigmError(std::string(op) + " takes " + counts + " forms, got " + std::to_string(forms.size()));
  }
  for (const auto& f : forms) {
    if (f.find_first_not_of(" \t") == std::string::npos) throw ParadigmError(std::string(op) + ": empty form");
  }
}

// ---- English ----

std::string englishPlural(const std::string& sg) {
  for (auto suf : {"s", "x", "ch", "sh"}) {
    if (endsWith(sg, suf)) return sg + "es";
  }
  if (sg.size() >= 2 && sg.back() == 'y' && !isAsciiVowel(sg[sg.size() - 2])) return sg.substr(0, sg.size() - 1) + "ies";
  return sg + "s";
}

std::string englishParticiple(const std::string& inf) { return endsWith(inf, "e") ? inf + "d" : inf + "ed"; }

// ---- German ----

std::string germanGender(const std::string& g) {
  if (g == "masculine") return "Masc";
  if (g == "feminine") return "Fem";
  if (g == "neuter") return "Neut";
  throw ParadigmError("unknown gender '" + g + "'");
}

std::string germanDefaultGender(const std::string& sg) {
  for (auto suf : {"e", "ung", "heit", "keit", "ion", "schaft"}) {
    if (endsWith(sg, suf)) return "Fem";
  }
  return "Masc";
}

std::string germanPlural(const std::string& sg, const std::string& gender) {
  if (endsWith(sg, "e")) return sg + "n";
  if (gender == "Fem") return endsWith(sg, "el") || endsWith(sg, "er") ? sg + "n" : sg + "en";
  if (endsWith(sg, "el") || endsWith(sg, "er") || endsWith(sg, "en")) return sg;
  return sg + "e";
}

std::string germanGenitive(const std::string& sg) {
  for (auto suf : {"s", "ß", "x", "z"}) {
    if (endsWith(sg, suf)) return sg + "es";
  }
  return sg + "s";
}

std::string germanStem(const std::string& inf) {
  if (endsWith(inf, "en")) return inf.substr(0, inf.size() - 2);
  if (endsWith(inf, "n")) return inf.substr(0, inf.size() - 1);
  throw ParadigmError("German infinitive '" + inf + "' does not end in -en or -n; give all three forms");
}

// ---- Spanish ----

std::string spanishGender(const std::string& g) {
  if (g == "masculine") return "Masc";
  if (g == "feminine") return "Fem";
  throw ParadigmError("Spanish nouns are masculine or feminine, not '" + g + "'");
}

std::string spanishPlural(const std::string& sg) {
  unsigned char last = static_cast<unsigned char>(sg.back());
  // a non-ASCII final byte belongs to an accented vowel in practice
  if (last >= 0x80 || isAsciiVowel(static_cast<char>(last))) return sg + "s";
  return sg + "es";
}

std::string feminineParticiple(const std::string& pp) {
  return endsWith(pp, "o") ? pp.substr(0, pp.size() - 1) + "a" : pp;
}

}  // namespace

Inflection mkN(const std::string& lang, const std::vector<std::string>& forms, const std::string& gender) {
  Inflection out;
  if (lang == "ace") {
    requireForms(forms, {1, 2}, "mkN");
    if (!gender.empty()) throw ParadigmError("mkN: English nouns take no gender");
    out.forms["s Sg"] = forms[0];
    out.forms["s Pl"] = forms.size() == 2 ? forms[1] : englishPlural(forms[0]);
    out.params["a"] = isAsciiVowel(forms[0][0]) ? "An" : "A";
    return out;
  }
  if (lang == "ger") {
    requireForms(forms, {1, 2, 4}, "mkN");
    std::string g = gender.empty() ? germanDefaultGender(forms[0]) : germanGender(gender);
    std::string sg = forms[0];
    std::string pl = forms.size() >= 2 ? forms[forms.size() == 4 ? 2 : 1] : germanPlural(sg, g);
    std::string genSg = forms.size() == 4 ? forms[1] : (g == "Fem" ? sg : germanGenitive(sg));
    std::string datPl = forms.size() == 4 ? forms[3] : (endsWith(pl, "n") || endsWith(pl, "s") ? pl : pl + "n");
    for (auto c : {"Nom", "Acc", "Dat"}) out.forms[std::string("s Sg ") + c] = sg;
    out.forms["s Sg Gen"] = genSg;
    for (auto c : {"Nom", "Acc", "Gen"}) out.forms[std::string("s Pl ") + c] = pl;
    out.forms["s Pl Dat"] = datPl;
    out.params["g"] = g;
    return out;
  }
  if (lang == "spa") {
    requireForms(forms, {1, 2}, "mkN");
    out.forms["s Sg"] = forms[0];
    out.forms["s Pl"] = forms.size() == 2 ? forms[1] : spanishPlural(forms[0]);
    out.params["g"] = gender.empty() ? (endsWith(forms[0], "a") ? "Fem" : "Masc") : spanishGender(gender);
    return out;
  }
  throw ParadigmError("mkN: no paradigm for language " + lang);
}

Inflection mkPN(const std::string& lang, const std::vector<std::string>& forms, const std::string& gender) {
  Inflection out;
  requireForms(forms, {1}, "mkPN");
  const std::string& name = forms[0];
  if (lang == "ace") {
    if (!gender.empty()) throw ParadigmError("mkPN: English names take no gender");
    out.forms["s"] = name;
    return out;
  }
  if (lang == "ger") {
    if (!gender.empty()) (void)germanGender(gender);
    for (auto c : {"Nom", "Acc", "Dat"}) out.forms[std::string("s ") + c] = name;
    out.forms["s Gen"] = endsWith(name, "s") ? name + "'" : name + "s";
    return out;
  }
  if (lang == "spa") {
    out.forms["s"] = name;
    out.params["g"] = gender.empty() ? (endsWith(name, "a") ? "Fem" : "Masc") : spanishGender(gender);
    return out;
  }
  throw ParadigmError("mkPN: no paradigm for language " + lang);
}

Inflection mkV2(const std::string& lang, const std::vector<std::string>& forms) {
  Inflection out;
  const std::string& inf = forms.empty() ? std::string() : forms[0];
  if (lang == "ace") {
    requireForms(forms, {1, 2, 3}, "mkV2");
    out.forms["inf"] = inf;
    out.forms["s3"] = forms.size() >= 2 ? forms[1] : inf + "s";
    out.forms["pp"] = forms.size() == 3 ? forms[2] : englishParticiple(inf);
    return out;
  }
  if (lang == "ger") {
    requireForms(forms, {1, 3}, "mkV2");
    out.forms["inf"] = inf;
    if (forms.size() == 3) {
      out.forms["s3"] = forms[1];
      out.forms["pp"] = forms[2];
      return out;
    }
    std::string stem = germanStem(inf);
    bool dental = endsWith(stem, "t") || endsWith(stem, "d");
    out.forms["s3"] = stem + (dental ? "et" : "t");
    bool unstressedPrefix = false;
    for (auto pre : {"be", "ge", "er", "ver", "zer", "ent", "emp", "miss"}) {
      if (inf.rfind(pre, 0) == 0) unstressedPrefix = true;
    }
    std::string pp = stem + (dental ? "et" : "t");
    out.forms["pp"] = unstressedPrefix || endsWith(inf, "ieren") ? pp : "ge" + pp;
    return out;
  }
  if (lang == "spa") {
    requireForms(forms, {1, 3}, "mkV2");
    out.forms["inf"] = inf;
    std::string pp;
    if (forms.size() == 3) {
      out.forms["s3"] = forms[1];
      pp = forms[2];
    } else {
      std::string stem = inf.substr(0, inf.size() >= 2 ? inf.size() - 2 : 0);
      if (endsWith(inf, "ar")) {
        out.forms["s3"] = stem + "a";
        pp = stem + "ado";
      } else if (endsWith(inf, "er") || endsWith(inf, "ir")) {
        out.forms["s3"] = stem + "e";
        pp = stem + "ido";
      } else {
        throw ParadigmError("Spanish infinitive '" + inf + "' does not end in -ar, -er or -ir; give all three forms");
      }
    }
    out.forms["pp Masc"] = pp;
    out.forms["pp Fem"] = feminineParticiple(pp);
    return out;
  }
  throw ParadigmError("mkV2: no paradigm for language " + lang);
}

Inflection expandLexiconEntry(const std::string& lang, const std::string& category,
                              const grammar::source::LexEntry& entry) {
  std::vector<std::string> forms;
  std::string gender;
  for (const auto& a : entry.args) {
    if (a.quoted) {
      if (!gender.empty()) throw ParadigmError("forms must precede the gender");
      forms.push_back(a.text);
    } else if (gender.empty()) {
      gender = a.text;
    } else {
      throw ParadigmError("more than one gender given");
    }
  }
  const std::string expected = entry.op == "mkN" ? "N" : entry.op == "mkPN" ? "PN" : entry.op == "mkV2" ? "V2" : "";
  if (expected.empty()) throw ParadigmError("unknown paradigm " + entry.op);
  if (expected != category) throw ParadigmError(entry.op + " builds " + expected + ", but the identifier is " + category);
  if (entry.op == "mkN") return mkN(lang, forms, gender);
  if (entry.op == "mkPN") return mkPN(lang, forms, gender);
  if (!gender.empty()) throw ParadigmError("mkV2 takes no gender");
  return mkV2(lang, forms);
}

std::string entityName(const std::string& lexicalId) {
  auto pos = lexicalId.rfind('_');
  std::string out = pos == std::string::npos ? lexicalId : lexicalId.substr(0, pos);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace cnlwiki::ace
