#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cnlwiki/reasoner/reasoner.hpp"

using namespace cnlwiki;

namespace {

// A chain of n countries, each bordering the next, plus the geography rules.
reasoner::KnowledgeBase chain(int n) {
  std::vector<std::string> text = {"Asymmetric(contain)", "Symmetric(border)",
                                   "SubClassOf(country, Complement(lake))"};
  for (int i = 0; i < n; ++i) {
    auto c = "c" + std::to_string(i);
    text.push_back("ClassAssertion(country, " + c + ")");
    if (i + 1 < n) text.push_back("RoleAssertion(border, " + c + ", c" + std::to_string(i + 1) + ")");
  }
  reasoner::KnowledgeBase kb;
  int id = 0;
  for (const auto& a : text) kb.axioms.push_back({semantics::Axiom::parse(a), "e" + std::to_string(++id)});
  return kb;
}

void BM_Consistency(benchmark::State& state) {
  auto kb = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reasoner::isConsistent(kb));
}
BENCHMARK(BM_Consistency)->RangeMultiplier(2)->Range(2, 32);

void BM_Classify(benchmark::State& state) {
  auto kb = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reasoner::classify(kb));
}
BENCHMARK(BM_Classify)->RangeMultiplier(2)->Range(2, 16);

}  // namespace

BENCHMARK_MAIN();
