#include <benchmark/benchmark.h>

#include <vector>

#include "footloco/compose.hpp"
#include "footloco/synthgen.hpp"

using namespace footloco;

namespace {

constexpr std::uint64_t kSeed = 2024;

const MotionDatabase& database(bool small) {
  static const MotionDatabase big = build_database(gen_database(default_database_spec(), kSeed));
  static const MotionDatabase little = build_database(gen_database(small_database_spec(), kSeed));
  return small ? little : big;
}

const TransitionGraphSet& graphs() {
  static const TransitionGraphSet set = [] {
    std::vector<LabeledSequence> seqs;
    std::uint64_t seed = kSeed;
    for (const GraphCorpusSpec& spec : default_graph_corpus()) {
      for (LabeledSequence& s : gen_graph_corpus(spec, ++seed)) seqs.push_back(std::move(s));
    }
    return build_graph_set(seqs);
  }();
  return set;
}

// Straight plan whose same-side travel is the sum of consecutive advances.
FootprintPlan plan_from_advances(const std::vector<double>& advances) {
  FootprintPlan p;
  p.footprints.push_back({Side::Left, Vec3(0.12, 0, 0), 0.0});
  p.footprints.push_back({Side::Right, Vec3(-0.12, 0, 0), 0.0});
  double z = 0.0;
  for (std::size_t i = 0; i < advances.size(); ++i) {
    z += advances[i];
    const Side s = i % 2 == 0 ? Side::Left : Side::Right;
    p.footprints.push_back({s, Vec3(s == Side::Left ? 0.12 : -0.12, 0, z), 0.0});
  }
  return p;
}

// 46 prints: walking, running and walking again.
FootprintPlan mixed_plan() {
  std::vector<double> a(10, 0.3);
  a.push_back(0.45);
  a.insert(a.end(), 11, 0.6);
  a.push_back(0.45);
  a.insert(a.end(), 21, 0.3);
  return plan_from_advances(a);
}

void BM_ComposePerStep(benchmark::State& state) {
  const MotionDatabase& db = database(state.range(0) == 200);
  const FootprintPlan plan = mixed_plan();
  std::size_t steps = 0;
  for (auto _ : state) {
    const Composition c = compose(db, graphs(), plan);
    steps += c.report.steps.size();
    benchmark::DoNotOptimize(c.motion.frames.data());
  }
  state.counters["steps"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate |
                                                                            benchmark::Counter::kInvert);
}
BENCHMARK(BM_ComposePerStep)->Arg(600)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SelectEnclosure(benchmark::State& state) {
  const MotionDatabase& db = database(false);
  const Footprint support{Side::Right, Vec3(-0.12, 0, 0), 0.0};
  const Footprint target{Side::Left, Vec3(0.1, 0, 0.3), 0.0};  // mid-band walking landing
  ExtractConfig cfg;
  cfg.k = static_cast<std::size_t>(state.range(0));
  const CandidateSet c = candidate_set(db, support, target, BehaviourLabel::walking(), db.base_velocity(Family::Walking), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(select_enclosure(c, target, db.toe_offset()));
}
BENCHMARK(BM_SelectEnclosure)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
