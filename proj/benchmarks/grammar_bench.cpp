#include <benchmark/benchmark.h>

#include "cnlwiki/ace/ace.hpp"
#include "cnlwiki/eval/eval.hpp"
#include "cnlwiki/grammar/kernel.hpp"

using namespace cnlwiki;

namespace {

const grammar::CompiledGrammar& shipped() {
  static auto g = ace::compileShipped();
  return *g;
}

const char* sentence(const std::string& lang) {
  if (lang == "ace") return "if X contains Y then Y does not contain X .";
  if (lang == "ger") return "wenn X Y enthält , dann enthält Y X nicht .";
  return "si X contiene Y entonces Y no contiene X .";
}

void BM_Compile(benchmark::State& state) {
  auto modules = ace::shippedModules();
  for (auto _ : state) benchmark::DoNotOptimize(ace::compileModules(modules));
}
BENCHMARK(BM_Compile)->Unit(benchmark::kMillisecond);

void BM_Parse(benchmark::State& state, const std::string& lang) {
  const auto& g = shipped();
  auto tokens = ace::tokenize(sentence(lang));
  for (auto _ : state) benchmark::DoNotOptimize(grammar::parse(g, lang, tokens));
}
BENCHMARK_CAPTURE(BM_Parse, ace, std::string("ace"));
BENCHMARK_CAPTURE(BM_Parse, ger, std::string("ger"));
BENCHMARK_CAPTURE(BM_Parse, spa, std::string("spa"));

// Completion after each prefix length of the conditional.
void BM_Complete(benchmark::State& state) {
  const auto& g = shipped();
  auto tokens = ace::tokenize(sentence("ace"));
  grammar::Tokens prefix(tokens.begin(), tokens.begin() + state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grammar::complete(g, "ace", prefix));
}
BENCHMARK(BM_Complete)->DenseRange(0, 10, 2);

void BM_Linearize(benchmark::State& state) {
  const auto& g = shipped();
  auto tree = grammar::parse(g, "ace", ace::tokenize(sentence("ace"))).front();
  for (auto _ : state) {
    for (const auto* lang : {"ace", "ger", "spa"}) benchmark::DoNotOptimize(grammar::linearize(g, lang, tree));
  }
}
BENCHMARK(BM_Linearize);

void BM_Enumerate(benchmark::State& state) {
  const auto& g = shipped();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::enumerateSentences(g, "ace", static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Enumerate)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace
