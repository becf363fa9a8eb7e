#include "fixtures.hpp"

#include <array>
#include <cmath>

namespace fltest {

const MotionDatabase& default_db() {
  static const MotionDatabase db = build_database(gen_database(default_database_spec(), kCorpusSeed));
  return db;
}

const MotionDatabase& small_db() {
  static const MotionDatabase db = build_database(gen_database(small_database_spec(), kCorpusSeed));
  return db;
}

const TransitionGraphSet& default_graphs() {
  static const TransitionGraphSet set = [] {
    std::vector<LabeledSequence> seqs;
    std::uint64_t seed = kCorpusSeed;
    for (const GraphCorpusSpec& spec : default_graph_corpus()) {
      for (LabeledSequence& s : gen_graph_corpus(spec, ++seed)) seqs.push_back(std::move(s));
    }
    return build_graph_set(seqs);
  }();
  return set;
}

Footprint print(Side side, double x, double y, double z, double yaw) {
  return Footprint{side, Vec3(x, y, z), yaw};
}

PlanBuilder::PlanBuilder() {
  plan.footprints.push_back(print(Side::Left, 0.5 * width, 0.0, 0.0));
  plan.footprints.push_back(print(Side::Right, -0.5 * width, 0.0, 0.0));
}

Side PlanBuilder::next_side() const { return opposite(plan.footprints.back().side); }

PlanBuilder& PlanBuilder::step(double advance, double rise, double turn, double foot_yaw) {
  const Side s = next_side();
  heading = normalize_angle(heading + turn);
  centre += rotate_yaw(Vec3(0.0, 0.0, advance), heading);
  y += rise;
  const double sigma = s == Side::Left ? 1.0 : -1.0;
  Vec3 pos = centre + rotate_yaw(Vec3(sigma * 0.5 * width, 0.0, 0.0), heading);
  pos.y() = y;
  plan.footprints.push_back(Footprint{s, pos, normalize_angle(heading + foot_yaw)});
  return *this;
}

PlanBuilder& PlanBuilder::steps(int n, double advance, double rise) {
  for (int i = 0; i < n; ++i) step(advance, rise);
  return *this;
}

FootprintPlan straight_plan(const std::vector<double>& advances, double width) {
  PlanBuilder b;
  b.width = width;
  b.plan.footprints[0].pos.x() = 0.5 * width;
  b.plan.footprints[1].pos.x() = -0.5 * width;
  for (double a : advances) b.step(a);
  return b.plan;
}

FootprintPlan mixed_plan_46() {
  PlanBuilder b;
  b.steps(10, 0.3);                   // walk, travel 0.6
  b.step(0.45).steps(11, 0.6);        // run, travel 1.2
  b.step(0.75).steps(7, 0.95);        // jump, travel 1.9
  b.step(0.6).step(0.45).steps(4, 0.3);  // back to walking
  b.steps(8, 0.25, 0.15);             // stairs
  return b.plan;
}

FootprintPlan plan_from_travels(const std::vector<double>& travels, double width) {
  PlanBuilder b;
  std::array<double, 2> z{0.0, 0.0};
  for (double t : travels) {
    const Side s = b.next_side();
    double& zs = z[static_cast<std::size_t>(s)];
    zs += t;
    b.plan.footprints.push_back(print(s, s == Side::Left ? 0.5 * width : -0.5 * width, 0.0, zs));
  }
  return b.plan;
}

FootprintPlan jump_pattern_plan(LabelKind kind, double width, double distance, double stagger, double heading) {
  const bool both_lift = kind == LabelKind::JumpBothLiftBothLand || kind == LabelKind::JumpBothLiftOneLand;
  const bool both_land = kind == LabelKind::JumpBothLiftBothLand || kind == LabelKind::JumpOneLiftBothLand;
  const double xl = 0.5 * width;
  FootprintPlan p;
  p.footprints.push_back(print(Side::Left, xl, 0.0, 0.0));
  p.footprints.push_back(print(Side::Right, -xl, 0.0, 0.0));
  const double zl = both_lift ? 0.5 : 0.3;
  const double zr = both_lift ? 0.5 : 0.3 + stagger;
  p.footprints.push_back(print(Side::Left, xl, 0.0, zl));
  p.footprints.push_back(print(Side::Right, -xl, 0.0, zr));
  const double land = zl + distance;
  p.footprints.push_back(print(Side::Left, xl, 0.0, land));
  p.footprints.push_back(print(Side::Right, -xl, 0.0, both_land ? land : land + stagger));
  return rotate_plan(p, heading);
}

FootprintPlan rotate_plan(const FootprintPlan& plan, double yaw) {
  FootprintPlan out = plan;
  for (Footprint& f : out.footprints) {
    f.pos = rotate_yaw(f.pos, yaw);
    f.yaw = normalize_angle(f.yaw + yaw);
  }
  return out;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

FootprintPlan random_family_plan(Family f, int steps, std::mt19937_64& rng) {
  PlanBuilder b;
  std::vector<double> lead_in;
  double lo = 0.22, hi = 0.38, rise_lo = 0.0, rise_hi = 0.0;
  switch (f) {
    case Family::Walking: break;
    case Family::Running:
      lead_in = {0.3, 0.45};
      lo = 0.5, hi = 0.72;
      break;
    case Family::Jumping:
      lead_in = {0.3, 0.45, 0.65};
      lo = 1.0, hi = 1.15;
      break;
    case Family::StairStep:
      lo = 0.2, hi = 0.27, rise_lo = 0.08, rise_hi = 0.17;
      break;
  }
  for (double a : lead_in) b.step(a);
  for (int i = static_cast<int>(lead_in.size()); i < steps; ++i) {
    b.width = uniform(rng, 0.21, 0.23);
    const double rise = rise_hi > 0.0 ? uniform(rng, rise_lo, rise_hi) : 0.0;
    b.step(uniform(rng, lo, hi), rise, uniform(rng, -0.02, 0.02), uniform(rng, -0.02, 0.02));
  }
  return b.plan;
}

}  // namespace fltest
