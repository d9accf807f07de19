#include <random>

#include <benchmark/benchmark.h>

#include "annote/fact_file.hpp"
#include "annote/inference.hpp"
#include "annote/query.hpp"
#include "support/generators.hpp"

using namespace annote;

namespace {

const test::Vocabulary& vocab() {
  static const test::Vocabulary v(50, 500);
  return v;
}

KnowledgeBase kb_of(std::size_t objects) {
  test::KbShape shape;
  shape.objects = objects;
  return test::random_kb(7, vocab(), shape);
}

void BM_Insert(benchmark::State& state) {
  const auto source = kb_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    KnowledgeBase kb;
    for (const auto& [_, object] : source.objects()) kb.insert(object);
    benchmark::DoNotOptimize(kb.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Insert)->Arg(1000)->Arg(10000);

void BM_Eval(benchmark::State& state) {
  const auto kb = kb_of(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(1);
  std::vector<QueryExpr> queries;
  for (int i = 0; i < 64; ++i) queries.push_back(test::random_query(rng, vocab(), 5, &kb));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eval(kb, queries[i++ % queries.size()]));
}
BENCHMARK(BM_Eval)->Arg(1000)->Arg(10000);

void BM_InferAttributes(benchmark::State& state) {
  const auto kb = kb_of(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(infer_attributes(kb, {test::pick(rng, vocab().terms())}));
  }
}
BENCHMARK(BM_InferAttributes)->Arg(1000)->Arg(10000);

void BM_SearchConstrained(benchmark::State& state) {
  const auto kb = kb_of(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    const std::vector<Term> terms = {test::pick(rng, vocab().terms()), test::pick(rng, vocab().terms())};
    benchmark::DoNotOptimize(search_constrained(kb, terms, UnresolvedPolicy::Lenient));
  }
}
BENCHMARK(BM_SearchConstrained)->Arg(1000)->Arg(10000);

void BM_LoadFacts(benchmark::State& state) {
  const auto text = save_facts(kb_of(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(load_facts(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_LoadFacts)->Arg(1000)->Arg(10000);

void BM_SaveFacts(benchmark::State& state) {
  const auto kb = kb_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(save_facts(kb));
}
BENCHMARK(BM_SaveFacts)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
