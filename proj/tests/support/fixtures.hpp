#pragma once

// Shared corpora and plan builders for the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <vector>

#include "footloco/compose.hpp"
#include "footloco/database.hpp"
#include "footloco/synthgen.hpp"
#include "footloco/transitions.hpp"
#include "footloco/types.hpp"

namespace fltest {

using namespace footloco;

inline constexpr std::uint64_t kCorpusSeed = 2024;

// Built once per process.
const MotionDatabase& default_db();  // 600 clips
const MotionDatabase& small_db();    // 200 clips
const TransitionGraphSet& default_graphs();

Footprint print(Side side, double x, double y, double z, double yaw = 0.0);

// Footprints laid out by half-stride: each print advances `advance` past the
// previous print along the heading and sits half of `width` off the centre line.
struct PlanBuilder {
  double width = 0.24;
  Vec3 centre = Vec3::Zero();
  double heading = 0.0;
  double y = 0.0;
  FootprintPlan plan;

  PlanBuilder();  // stance: left then right, side by side at the origin
  // Appends the next print on the alternating side.
  PlanBuilder& step(double advance, double rise = 0.0, double turn = 0.0, double foot_yaw = 0.0);
  PlanBuilder& steps(int n, double advance, double rise = 0.0);
  Side next_side() const;
};

// Same-side travel of step i equals advance_i + advance_{i-1}.
FootprintPlan straight_plan(const std::vector<double>& advances, double width = 0.24);

// 46 footprints: walk, run, jump, walk and stairs.
FootprintPlan mixed_plan_46();

// Random plan of `steps` steps of one family, each target drawn from the
// interior of the family's reference-clip distribution.
FootprintPlan random_family_plan(Family f, int steps, std::mt19937_64& rng);

// Same-side travels per step from index 2 on; each side accumulates along +z.
FootprintPlan plan_from_travels(const std::vector<double>& travels, double width = 0.24);

// Walk-up of two prints then a jump from index 4 whose lift and landing
// geometry realise `kind`. The landing partner, when the pattern has one, is at 5.
FootprintPlan jump_pattern_plan(LabelKind kind, double width, double distance, double stagger, double heading);

// Rigid rotation of a plan about the origin.
FootprintPlan rotate_plan(const FootprintPlan& plan, double yaw);

double uniform(std::mt19937_64& rng, double lo, double hi);

}  // namespace fltest
