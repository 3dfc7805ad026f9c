// Apache License, Version 2.0, refer to LICENSE.txt

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "rolemine/lexicon.hpp"
#include "rolemine/patterns.hpp"

namespace {

const rolemine::Lexicon& lexicon() {
  static const rolemine::Lexicon lex = rolemine::Lexicon::load(
      std::string(ROLEMINE_DATA_DIR) + "/lexicons/core.lex");
  return lex;
}

const rolemine::RuleSet& rules() {
  static const rolemine::RuleSet set = rolemine::RuleSet::load(
      std::string(ROLEMINE_DATA_DIR) + "/patterns/default.rules");
  return set;
}

const std::vector<std::string>& posts() {
  static const std::vector<std::string> kPosts = {
      "Please donate to the fundraiser and sign the petition before Friday.",
      "I really don't understand how the council voted for this.",
      "The market report covers the river district and the new bridge.",
      "You should join the rally downtown; contact us for details.",
      "They definitely must answer for the budget crisis this year.",
      "Fresh bread, morning coffee and a long walk by the water.",
  };
  return kPosts;
}

void BM_TokenizeAndTag(benchmark::State& state) {
  for (auto _ : state) {
    for (const std::string& text : posts())
      benchmark::DoNotOptimize(rolemine::tokenize_and_tag(text, lexicon()));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(posts().size()));
}
BENCHMARK(BM_TokenizeAndTag);

void BM_StrategyFlags(benchmark::State& state) {
  for (auto _ : state) {
    for (const std::string& text : posts())
      benchmark::DoNotOptimize(rolemine::strategy_flags(text, lexicon(), rules()));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(posts().size()));
}
BENCHMARK(BM_StrategyFlags);

void BM_CategoryProportion(benchmark::State& state) {
  for (auto _ : state) {
    for (const std::string& text : posts())
      benchmark::DoNotOptimize(
          rolemine::category_proportion(text, lexicon(), "anger"));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(posts().size()));
}
BENCHMARK(BM_CategoryProportion);

}  // namespace

BENCHMARK_MAIN();
