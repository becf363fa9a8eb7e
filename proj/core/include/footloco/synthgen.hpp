#pragma once

// Parametric step clips and labeled transition sequences whose ground truth is
// known by construction.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "footloco/database.hpp"
#include "footloco/io.hpp"
#include "footloco/transitions.hpp"
#include "footloco/types.hpp"

namespace footloco {

struct SynthBands {
  Range walk{0.3, 0.9};
  Range run{0.7, 1.6};
  Range jump{1.4, 2.6};
  Range stair{0.3, 0.6};
  Range rise{0.05, 0.2};
  Range lateral{0.12, 0.28};       // acting-foot offset from the support line
  Range jump_lateral{0.18, 0.34};  // inter-foot distance of simultaneous lifts and landings
  Range stagger{0.4, 0.6};         // fore-aft offset of staggered landings
  Range yaw{-0.25, 0.25};
  Range fwd_split{0.35, 0.65};  // share of the forward travel ahead of the support
  Range v_root_walk{0.9, 1.4};
  Range v_root_run{2.2, 3.2};
  Range v_root_jump{2.6, 3.8};
  Range v_root_stair{0.5, 0.9};

  const Range& travel(Family f) const;
  const Range& v_root(Family f) const;
};

inline constexpr double kRootHeight = 0.9;
inline constexpr double kMinStepSeconds = 0.3;

double swing_height(Family f, double rise);

struct StepSpec {
  std::string id;
  BehaviourLabel label;
  Side support_side = Side::Right;
  FootPose support;  // global; toe recomputed from yaw
  Vec3 start_foot = Vec3::Zero();  // support frame
  double start_yaw = 0.0;
  Vec3 end_foot = Vec3::Zero();
  double end_yaw = 0.0;
  // Support-frame landing of the support-side foot for jumps that move it.
  std::optional<Vec3> partner_end_foot;
  double partner_end_yaw = 0.0;
  double duration = 0.5;  // seconds
  double fps = 60.0;
  double toe_offset = 0.15;
};

// Raised-cosine swing; stationary feet outside their flight windows. Throws
// BandViolation when the travel exceeds the family band.
StepClip gen_step(const StepSpec& spec, const SynthBands& bands = {});

struct DatabaseSpec {
  std::array<int, 4> counts{100, 50, 100, 50};  // per Family before mirroring
  bool mirrored = true;
  double fps = 60.0;
  double toe_offset = 0.15;
  SynthBands bands;
};

DatabaseSpec default_database_spec();  // 600 clips
DatabaseSpec small_database_spec();    // 200 clips

std::vector<StepClip> gen_database(const DatabaseSpec& spec, std::uint64_t seed);

struct TransitionSpec {
  std::string id;
  Family from = Family::Walking;
  Family to = Family::Running;
  std::vector<double> ramp;
  int pre_steps = 0;
  int post_steps = 0;
  std::optional<double> pre_velocity;   // defaults to ramp.front()
  std::optional<double> post_velocity;  // defaults to ramp.back()
  double jitter = 0.0;                  // uniform +-jitter on every step velocity
  double fps = 60.0;
  double step_seconds = 0.5;
  double rise = 0.15;  // per-step climb after the change, stair targets only
};

// Root speed is constant between consecutive landings and equals the step's velocity.
LabeledSequence gen_transition_sequence(const TransitionSpec& spec, std::mt19937_64& rng);

// n samples of a raised-cosine ease from `from` to `to`, endpoints included.
std::vector<double> raised_cosine_ramp(double from, double to, std::size_t n);

struct GraphCorpusSpec {
  Family from = Family::Walking;
  Family to = Family::Running;
  std::vector<double> ramp;
  std::optional<double> post_velocity;
  int count = 12;
  double jitter = 0.02;
};

// The five default forward ramps.
std::vector<GraphCorpusSpec> default_graph_corpus();

// Pre- and post-step counts cycle through {0, 0, 1} so the trimmed window equals the ramp.
std::vector<LabeledSequence> gen_graph_corpus(const GraphCorpusSpec& spec, std::uint64_t seed);

struct SynthSpec {
  DatabaseSpec database;
  std::vector<GraphCorpusSpec> graphs;
};

SynthSpec default_synth_spec();
Json synth_spec_to_json(const SynthSpec& s);
SynthSpec synth_spec_from_json(const Json& j);

}  // namespace footloco
