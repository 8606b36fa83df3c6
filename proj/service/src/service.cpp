#include "cnlwiki/service/service.hpp"

#include <httplib.h>

#include "cnlwiki/ace/ace.hpp"
#include "cnlwiki/semantics/mapper.hpp"
#include "json.hpp"

namespace cnlwiki::service {

using json = nlohmann::json;
using httplib::Request;
using httplib::Response;

namespace {

struct HttpError {
  int status;
  json body;
};

void send(Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

json parseBody(const Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw HttpError{400, {{"error", "request body must be a JSON object"}}};
    return j;
  } catch (const json::parse_error& e) {
    throw HttpError{400, {{"error", std::string("malformed JSON: ") + e.what()}}};
  }
}

std::string field(const json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end() || !it->is_string()) {
    throw HttpError{400, {{"error", std::string("missing string field '") + name + "'"}}};
  }
  return it->get<std::string>();
}

// Token sequences come as string arrays; a plain string is tokenized.
grammar::Tokens tokensField(const json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end()) throw HttpError{400, {{"error", std::string("missing field '") + name + "'"}}};
  if (it->is_string()) return ace::tokenize(it->get<std::string>());
  if (!it->is_array()) throw HttpError{400, {{"error", std::string("'") + name + "' must be a token array"}}};
  grammar::Tokens out;
  for (const auto& t : *it) {
    if (!t.is_string()) throw HttpError{400, {{"error", std::string("'") + name + "' must hold strings"}}};
    out.push_back(t.get<std::string>());
  }
  return out;
}

void requireLanguage(const wiki::Snapshot& s, const std::string& lang) {
  if (!s.grammar->hasLanguage(lang)) throw HttpError{400, {{"error", "unknown language: " + lang}}};
}

std::string queryLanguage(const Request& req, const wiki::Snapshot& s) {
  std::string lang = req.has_param("lang") ? req.get_param_value("lang") : "ace";
  requireLanguage(s, lang);
  return lang;
}

json diagnosticsJson(const std::vector<grammar::Diagnostic>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back({{"module", d.module}, {"line", d.line}, {"message", d.message}});
  return out;
}

const char* verdictName(reasoner::Verdict v) {
  switch (v) {
    case reasoner::Verdict::Yes:
      return "yes";
    case reasoner::Verdict::No:
      return "no";
    case reasoner::Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

json statusJson(const wiki::SemanticStatus& st) {
  json j{{"kind", wiki::statusName(st.kind)}};
  if (st.axiom) j["axiom"] = st.axiom->str();
  if (st.query) j["query"] = st.query->str();
  if (!st.missing.empty()) j["missing"] = st.missing;
  if (!st.reason.empty()) j["reason"] = st.reason;
  return j;
}

json renderedJson(const wiki::RenderedEntry& r) {
  json j{{"id", r.id},
         {"kind", wiki::kindName(r.kind)},
         {"status", statusJson(r.status)},
         {"readings", r.readings},
         {"ambiguous", r.ambiguous}};
  if (r.kind != wiki::EntryKind::Comment) {
    j["sourceLanguage"] = r.sourceLanguage;
    j["trees"] = r.treeText;
    j["links"] = r.links;
  }
  if (!r.bracketed.empty()) j["bracketed"] = r.bracketed;
  if (!r.note.empty()) j["note"] = r.note;
  if (r.answers) j["answers"] = *r.answers;
  return j;
}

json entrySummary(const wiki::Snapshot& s, const wiki::Entry& e, const std::string& lang) {
  json j = renderedJson(wiki::renderEntry(s, e, lang));
  j["generation"] = s.generation;
  return j;
}

json reportJson(const wiki::RevalidationReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json j{{"id", e.entryId}, {"article", e.article}, {"outcome", wiki::outcomeName(e.outcome)}};
    if (!e.missing.empty()) j["missing"] = e.missing;
    if (!e.ambiguity.empty()) {
      json changes = json::array();
      for (const auto& c : e.ambiguity) changes.push_back({{"language", c.language}, {"before", c.before}, {"after", c.after}});
      j["ambiguity"] = changes;
    }
    entries.push_back(j);
  }
  return {{"grammar", "compiled"},
          {"generation", r.generation},
          {"entries", entries},
          {"warnings", diagnosticsJson(r.warnings)}};
}

std::string renderClass(const wiki::Snapshot& s, const std::string& cls, const std::string& lang) {
  try {
    return ace::detokenize(
        grammar::linearize(*s.grammar, lang, grammar::AbstractTree(semantics::lexicalFunction(cls, "N"))));
  } catch (const std::exception&) {
    return cls;
  }
}

void requireConsistent(const wiki::Snapshot& s) {
  if (s.kb.consistent == reasoner::Verdict::No) {
    throw HttpError{409, {{"error", "knowledge base is inconsistent"}, {"conflict", s.kb.conflict}}};
  }
  if (s.kb.consistent == reasoner::Verdict::Unknown) {
    throw HttpError{503, {{"error", "reasoner budget exhausted"}, {"warnings", s.kb.warnings}}};
  }
}

using Handler = std::function<void(const Request&, Response&)>;

// Maps domain exceptions onto HTTP statuses.
Handler guarded(Handler h) {
  return [h = std::move(h)](const Request& req, Response& res) {
    try {
      h(req, res);
    } catch (const HttpError& e) {
      send(res, e.status, e.body);
    } catch (const wiki::ParseRejected& e) {
      send(res, 400, {{"error", "no parse"}, {"prefix", e.prefix()}, {"completions", e.completions()}});
    } catch (const wiki::BadRequest& e) {
      send(res, 400, {{"error", e.what()}});
    } catch (const wiki::NotFound& e) {
      send(res, 404, {{"error", e.what()}});
    } catch (const wiki::KbInconsistent& e) {
      send(res, 409, {{"error", e.what()}, {"conflict", e.conflict()}});
    } catch (const wiki::GrammarRejected& e) {
      send(res, 422, {{"error", "grammar rejected"}, {"grammar", "rejected"}, {"diagnostics", diagnosticsJson(e.diagnostics())}});
    } catch (const reasoner::ResourceLimit& e) {
      send(res, 503, {{"error", e.what()}});
    } catch (const grammar::TreeSyntaxError& e) {
      send(res, 400, {{"error", e.what()}});
    } catch (const grammar::IllTypedTree& e) {
      send(res, 400, {{"error", e.what()}, {"unknownFunctions", e.unknownFunctions()}});
    } catch (const grammar::MissingLinearization& e) {
      send(res, 422, {{"error", e.what()}, {"function", e.function()}});
    } catch (const std::exception& e) {
      send(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace

void mountRoutes(httplib::Server& server, wiki::Wiki& w) {
  server.Get("/languages", guarded([&w](const Request&, Response& res) {
    send(res, 200, w.snapshot()->grammar->languageTags());
  }));

  server.Post("/complete", guarded([&w](const Request& req, Response& res) {
    auto s = w.snapshot();
    json body = parseBody(req);
    std::string lang = field(body, "lang");
    requireLanguage(*s, lang);
    auto tokens = grammar::complete(*s->grammar, lang, tokensField(body, "prefix"));
    send(res, 200, {{"tokens", tokens}});
  }));

  server.Post("/parse", guarded([&w](const Request& req, Response& res) {
    auto s = w.snapshot();
    json body = parseBody(req);
    std::string lang = field(body, "lang");
    requireLanguage(*s, lang);
    json trees = json::array();
    for (const auto& t : grammar::parse(*s->grammar, lang, tokensField(body, "tokens"))) trees.push_back(t.str());
    send(res, 200, {{"trees", trees}});
  }));

  server.Post("/linearize", guarded([&w](const Request& req, Response& res) {
    auto s = w.snapshot();
    json body = parseBody(req);
    std::string lang = field(body, "lang");
    requireLanguage(*s, lang);
    auto tree = grammar::AbstractTree::parse(field(body, "tree"));
    bool bracketed = body.value("bracketed", false);
    auto tokens = bracketed ? grammar::linearizeBracketed(*s->grammar, lang, tree)
                            : grammar::linearize(*s->grammar, lang, tree);
    send(res, 200, {{"tokens", tokens}, {"text", ace::detokenize(tokens)}});
  }));

  server.Post("/translate", guarded([&w](const Request& req, Response& res) {
    auto s = w.snapshot();
    json body = parseBody(req);
    std::string from = field(body, "from");
    std::string to = field(body, "to");
    requireLanguage(*s, from);
    requireLanguage(*s, to);
    json out = json::array();
    for (const auto& t : grammar::translate(*s->grammar, from, to, tokensField(body, "tokens"))) {
      out.push_back(ace::detokenize(t));
    }
    send(res, 200, {{"translations", out}});
  }));

  server.Post("/entries", guarded([&w](const Request& req, Response& res) {
    json body = parseBody(req);
    std::string lang = field(body, "lang");
    requireLanguage(*w.snapshot(), lang);
    auto e = w.addEntry(field(body, "article"), lang, tokensField(body, "tokens"));
    send(res, 201, entrySummary(*w.snapshot(), e, lang));
  }));

  server.Delete(R"(/entries/([^/]+))", guarded([&w](const Request& req, Response& res) {
    w.deleteEntry(req.matches[1]);
    send(res, 200, {{"deleted", req.matches[1]}, {"generation", w.snapshot()->generation}});
  }));

  server.Post(R"(/entries/([^/]+)/disambiguate)", guarded([&w](const Request& req, Response& res) {
    json body = parseBody(req);
    auto it = body.find("index");
    if (it == body.end() || !it->is_number_unsigned()) throw HttpError{400, {{"error", "missing field 'index'"}}};
    auto e = w.disambiguate(req.matches[1], it->get<std::size_t>());
    auto s = w.snapshot();
    std::string lang = body.value("lang", e.sourceLanguage);
    requireLanguage(*s, lang);
    send(res, 200, entrySummary(*s, e, lang));
  }));

  server.Post("/comments", guarded([&w](const Request& req, Response& res) {
    json body = parseBody(req);
    auto e = w.addComment(field(body, "article"), field(body, "text"));
    send(res, 201, entrySummary(*w.snapshot(), e, "ace"));
  }));

  server.Get("/articles", guarded([&w](const Request&, Response& res) {
    auto s = w.snapshot();
    json out = json::array();
    for (const auto& [name, a] : s->articles) {
      out.push_back({{"name", name},
                     {"kind", a.kind == wiki::Article::Kind::Entity ? "entity" : "free"},
                     {"entries", a.entries.size()}});
    }
    for (const auto& [name, text] : s->modules) out.push_back({{"name", name}, {"kind", "module"}});
    send(res, 200, {{"generation", s->generation}, {"articles", out}});
  }));

  server.Get(R"(/articles/([^/]+))", guarded([&w](const Request& req, Response& res) {
    auto s = w.snapshot();
    std::string name = req.matches[1];
    if (s->isModule(name)) {
      send(res, 200, {{"name", name}, {"kind", "module"}, {"source", s->modules.at(name)}, {"generation", s->generation}});
      return;
    }
    if (!s->articles.count(name)) throw HttpError{404, {{"error", "no article " + name}}};
    std::string lang = queryLanguage(req, *s);
    auto a = wiki::renderArticle(*s, name, lang);
    json entries = json::array();
    for (const auto& e : a.entries) entries.push_back(renderedJson(e));
    send(res, 200,
         {{"name", name},
          {"kind", s->articles.at(name).kind == wiki::Article::Kind::Entity ? "entity" : "free"},
          {"language", lang},
          {"generation", a.generation},
          {"entries", entries}});
  }));

  server.Put(R"(/lexicon/([^/]+))", guarded([&w](const Request& req, Response& res) {
    json body = parseBody(req);
    send(res, 200, reportJson(w.editLexicon(req.matches[1], field(body, "source"))));
  }));

  server.Put(R"(/modules/([^/]+))", guarded([&w](const Request& req, Response& res) {
    json body = parseBody(req);
    send(res, 200, reportJson(w.editModule(req.matches[1], field(body, "source"))));
  }));

  server.Get("/reasoner/status", guarded([&w](const Request&, Response& res) {
    auto s = w.snapshot();
    json axioms = json::array();
    for (const auto& a : s->kb.kb.axioms) axioms.push_back({{"entry", a.entryId}, {"axiom", a.axiom.str()}});
    send(res, 200,
         {{"generation", s->generation},
          {"consistent", verdictName(s->kb.consistent)},
          {"conflict", s->kb.conflict},
          {"axioms", axioms},
          {"warnings", s->kb.warnings}});
  }));

  server.Get("/reasoner/taxonomy", guarded([&w](const Request& req, Response& res) {
    auto s = w.snapshot();
    std::string lang = queryLanguage(req, *s);
    requireConsistent(*s);
    if (!s->kb.taxonomy) throw HttpError{503, {{"error", "classification undecided"}, {"warnings", s->kb.warnings}}};
    json nodes = json::array();
    for (const auto& n : s->kb.taxonomy->nodes) {
      nodes.push_back({{"class", n.cls},
                       {"label", renderClass(*s, n.cls, lang)},
                       {"parents", n.parents},
                       {"equivalents", n.equivalents}});
    }
    send(res, 200,
         {{"generation", s->generation}, {"nodes", nodes}, {"unsatisfiable", s->kb.taxonomy->unsatisfiable}});
  }));

  server.Post("/reasoner/query", guarded([&w](const Request& req, Response& res) {
    auto s = w.snapshot();
    json body = parseBody(req);
    std::string lang = field(body, "lang");
    requireLanguage(*s, lang);
    auto individuals = wiki::query(*s, lang, tokensField(body, "tokens"));
    std::vector<std::string> names;
    for (const auto& i : individuals) names.push_back(wiki::renderIndividual(*s, i, lang));
    std::sort(names.begin(), names.end());
    send(res, 200, {{"generation", s->generation}, {"answers", names}, {"individuals", individuals}});
  }));
}

}  // namespace cnlwiki::service
