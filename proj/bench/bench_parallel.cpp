// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "census/classifier.hpp"
#include "census/navigator.hpp"
#include "census/sitegen.hpp"

using namespace census;

namespace {

struct Fixture {
  Corpus corpus;
  LabeledDataset data;
  std::vector<PageFeatures> rows;
  ForestModel model;
  MemorySource source;
  std::vector<Department> depts;
  ForestParams params;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    const auto pools = load_name_pools(default_data_dir());
    CorpusOptions opts;
    x.corpus = build_corpus(plan_corpus(opts, pools), pools);
    x.data = corpus_features(x.corpus, Lexicons::bundled());
    for (int rep = 0; rep < 20; ++rep)
      for (const auto& r : x.data.rows) x.rows.push_back(r.features);
    x.params.seed = 1;
    x.model = train_forest_serial(x.data, x.params);
    for (const auto& s : x.corpus.sites) {
      for (const auto& p : s.pages) x.source.add(p.url, p.html);
      x.depts.push_back({s.truth.institution, s.truth.homepage});
    }
    return x;
  }();
  return f;
}

CrawlOptions crawl_options() {
  CrawlOptions o;
  o.policy.min_delay_between_requests_per_host = std::chrono::milliseconds(0);
  return o;
}

void BM_train_forest_serial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(train_forest_serial(f.data, f.params));
}
void BM_train_forest(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(train_forest(f.data, f.params));
}
void BM_predict_batch_serial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(predict_batch_serial(f.model, f.rows));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * f.rows.size()));
}
void BM_predict_batch(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(predict_batch(f.model, f.rows));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * f.rows.size()));
}
void BM_crawl_corpus_serial(benchmark::State& st) {
  auto& f = const_cast<Fixture&>(fixture());
  for (auto _ : st)
    benchmark::DoNotOptimize(crawl_corpus_serial(f.depts, f.source, crawl_options(), Lexicons::bundled(), f.model));
}
void BM_crawl_corpus(benchmark::State& st) {
  auto& f = const_cast<Fixture&>(fixture());
  for (auto _ : st)
    benchmark::DoNotOptimize(crawl_corpus(f.depts, f.source, crawl_options(), Lexicons::bundled(), f.model));
}

}  // namespace

BENCHMARK(BM_train_forest_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_train_forest)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_predict_batch_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_batch)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_crawl_corpus_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_crawl_corpus)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
