// Command-line entry point: HTTP server, grammar check, evaluation reports
// and axiom export.

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cnlwiki/ace/ace.hpp"
#include "cnlwiki/eval/eval.hpp"
#include "cnlwiki/service/service.hpp"
#include "cnlwiki/wiki/wiki.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace cnlwiki;

namespace {

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Every *.gfs file of `dir`, sorted by name.
std::vector<grammar::ModuleText> readModules(const fs::path& dir) {
  std::vector<grammar::ModuleText> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".gfs") {
      out.push_back({e.path().filename().string(), readFile(e.path())});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

int serve(const std::string& store, const std::string& host, int port, bool bare) {
  auto wiki = wiki::Wiki::openOrCreate(store, !bare);
  httplib::Server server;
  service::mountRoutes(server, *wiki);
  std::cerr << "serving " << store << " on http://" << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

int checkGrammar(const std::string& dir) {
  auto modules = readModules(dir);
  if (modules.empty()) {
    std::cerr << "no .gfs modules in " << dir << "\n";
    return 1;
  }
  try {
    auto g = ace::compileModules(modules);
    for (const auto& w : g->warnings) std::cout << "warning: " << w.str() << "\n";
    std::cout << "ok: " << modules.size() << " modules, languages";
    for (const auto& tag : g->languageTags()) std::cout << " " << tag;
    std::cout << "\n";
    return 0;
  } catch (const grammar::CompileError& e) {
    for (const auto& d : e.diagnostics()) std::cout << "error: " << d.str() << "\n";
    return 1;
  }
}

struct EvalOptions {
  std::string kind;
  std::vector<std::string> langs;
  std::string grammarDir;
  int maxTokens = 8;
  int maxDepth = 4;
  int maxAxioms = 4;
  int maxDomain = 3;
  bool json = false;
};

int runEval(const EvalOptions& o) {
  if (o.kind == "reasoner") {
    auto r = eval::reasonerAgreement(o.maxAxioms, o.maxDomain);
    std::cout << (o.json ? r.json() + "\n" : r.summary());
    return r.agrees() ? 0 : 1;
  }
  auto g = o.grammarDir.empty() ? ace::compileShipped() : ace::compileModules(readModules(o.grammarDir));
  auto langs = o.langs.empty() ? g->languageTags() : o.langs;
  nlohmann::json all = nlohmann::json::array();
  bool ok = true;
  for (const auto& lang : langs) {
    if (!g->hasLanguage(lang)) {
      std::cerr << "unknown language: " << lang << "\n";
      return 2;
    }
    eval::EvalReport r;
    if (o.kind == "coverage") {
      r = eval::coverageReport(*g, lang, o.maxTokens);
    } else if (o.kind == "ambiguity") {
      r = eval::ambiguityReport(*g, lang, o.maxTokens);
      ok &= r.harmlessRate == 1.0;
    } else {
      r = eval::roundTripCheck(*g, lang, o.maxDepth);
      ok &= r.roundTripFailures.empty();
    }
    if (o.json) all.push_back(nlohmann::json::parse(r.json()));
    else std::cout << r.summary();
  }
  if (o.json) std::cout << all.dump(2) << "\n";
  return ok ? 0 : 1;
}

int exportAxioms(const std::string& store) {
  auto w = wiki::Wiki::open(store);
  auto s = w->snapshot();
  for (const auto& a : s->kb.kb.axioms) std::cout << a.axiom.str() << "\t" << a.entryId << "\n";
  if (s->kb.consistent == reasoner::Verdict::No) {
    std::cerr << "knowledge base is inconsistent; conflicting entries:";
    for (const auto& id : s->kb.conflict) std::cerr << " " << id;
    std::cerr << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilingual controlled-natural-language wiki"};
  app.require_subcommand(1);

  const char* envStore = std::getenv("CNLWIKI_STORE");
  std::string store = envStore ? envStore : "";
  std::string host = "127.0.0.1";
  int port = 8080;
  bool bare = false;
  auto* serveCmd = app.add_subcommand("serve", "Run the HTTP API over a store (created when missing)");
  serveCmd->add_option("--store", store, "Store directory (default: $CNLWIKI_STORE)");
  serveCmd->add_option("--host", host, "Address to bind")->capture_default_str();
  serveCmd->add_option("--port", port, "Port")->capture_default_str();
  serveCmd->add_flag("--bare", bare, "Create new stores without the demo article");

  std::string grammarDir;
  auto* checkCmd = app.add_subcommand("check-grammar", "Compile the .gfs modules of a directory");
  checkCmd->add_option("dir", grammarDir, "Grammar directory")->required()->check(CLI::ExistingDirectory);

  EvalOptions eo;
  auto* evalCmd = app.add_subcommand("eval", "Evaluation reports");
  evalCmd->add_option("kind", eo.kind, "coverage, ambiguity, roundtrip or reasoner")
      ->required()
      ->check(CLI::IsMember({"coverage", "ambiguity", "roundtrip", "reasoner"}));
  evalCmd->add_option("--lang", eo.langs, "Language tags (default: all)");
  evalCmd->add_option("--grammar", eo.grammarDir, "Grammar directory (default: shipped grammar)")
      ->check(CLI::ExistingDirectory);
  evalCmd->add_option("--max-tokens", eo.maxTokens, "Sentence length bound, terminator included")
      ->capture_default_str();
  evalCmd->add_option("--max-depth", eo.maxDepth, "Tree depth bound for roundtrip")->capture_default_str();
  evalCmd->add_option("--max-axioms", eo.maxAxioms, "Knowledge base size bound for reasoner")
      ->capture_default_str();
  evalCmd->add_option("--max-domain", eo.maxDomain, "Oracle domain bound for reasoner")->capture_default_str();
  evalCmd->add_flag("--json", eo.json, "Print the JSON report instead of the summary");

  std::string exportStore;
  auto* exportCmd = app.add_subcommand("export-axioms", "Print the knowledge base of a store, one axiom per line");
  exportCmd->add_option("dir", exportStore, "Store directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serveCmd) {
      if (store.empty()) {
        std::cerr << "no store: pass --store or set CNLWIKI_STORE\n";
        return 2;
      }
      return serve(store, host, port, bare);
    }
    if (*checkCmd) return checkGrammar(grammarDir);
    if (*evalCmd) return runEval(eo);
    if (*exportCmd) return exportAxioms(exportStore);
  } catch (const eval::CapExceeded& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const grammar::CompileError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << d.str() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
