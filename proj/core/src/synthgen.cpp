#include "footloco/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>

#include "footloco/blend.hpp"

namespace footloco {
namespace {

double uniform(std::mt19937_64& rng, const Range& r) {
  return std::uniform_real_distribution<double>(r.min, r.max)(rng);
}

FootPose make_pose(const Vec3& foot, double yaw, double toe_offset) {
  const double y = normalize_angle(yaw);
  return FootPose{foot, y, foot + rotate_yaw(Vec3(0.0, 0.0, toe_offset), y)};
}

// Progress and lift height of a foot whose flight spans `w` at normalized time t.
struct SwingSample {
  double progress;
  double lift;
};

SwingSample swing(const FlightWindow& w, double t) {
  const double u = std::clamp((t - w.begin) / (w.end - w.begin), 0.0, 1.0);
  return {0.5 * (1.0 - std::cos(kPi * u)), 0.5 * (1.0 - std::cos(2.0 * kPi * u))};
}

FootPose swing_pose(const FootPose& a, const FootPose& b, const SwingSample& s, double peak, double toe_offset) {
  Vec3 foot = a.foot + s.progress * (b.foot - a.foot);
  foot.y() += peak * s.lift;
  return make_pose(foot, a.yaw + s.progress * normalize_angle(b.yaw - a.yaw), toe_offset);
}

double mean_yaw(double a, double b) { return normalize_angle(a + 0.5 * normalize_angle(b - a)); }

std::string clip_id(Family f, int k) {
  static const char* prefix[] = {"walk", "run", "jump", "stair"};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04d", prefix[static_cast<int>(f)], k);
  return buf;
}

// Travel values spread evenly over the band so both edges occur exactly.
std::vector<double> stratified(const Range& r, int n, std::mt19937_64& rng) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = n == 1 ? r.min : r.min + (r.max - r.min) * k / (n - 1);
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

// n points in the unit square on a near-square lattice whose outer nodes lie on
// the square's edges, each jittered by a quarter spacing and clamped inside.
// Any interior target is surrounded even in small groups.
std::vector<std::array<double, 2>> jittered_grid(int n, std::mt19937_64& rng) {
  const int cols = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
  const int rows = (n + cols - 1) / cols;
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  auto node = [&](int i, int count) {
    const double t = count == 1 ? 0.5 + u(rng) : (i + u(rng)) / (count - 1);
    return std::clamp(t, 0.0, 1.0);
  };
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < n; ++i) {
    const double x = node(i % cols, cols);
    pts.push_back({x, node(i / cols, rows)});
  }
  std::shuffle(pts.begin(), pts.end(), rng);
  return pts;
}

double lerp(const Range& r, double t) { return r.min + t * (r.max - r.min); }

constexpr LabelKind kJumpKinds[] = {LabelKind::JumpBothLiftBothLand, LabelKind::JumpOneLiftBothLand,
                                    LabelKind::JumpBothLiftOneLand, LabelKind::JumpOneLiftOneLand};

}  // namespace

const Range& SynthBands::travel(Family f) const {
  switch (f) {
    case Family::Walking: return walk;
    case Family::Running: return run;
    case Family::Jumping: return jump;
    case Family::StairStep: return stair;
  }
  return walk;
}

const Range& SynthBands::v_root(Family f) const {
  switch (f) {
    case Family::Walking: return v_root_walk;
    case Family::Running: return v_root_run;
    case Family::Jumping: return v_root_jump;
    case Family::StairStep: return v_root_stair;
  }
  return v_root_walk;
}

double swing_height(Family f, double rise) {
  switch (f) {
    case Family::Walking: return 0.06;
    case Family::Running: return 0.12;
    case Family::Jumping: return 0.35;
    case Family::StairStep: return 0.5 * rise + 0.08;
  }
  return 0.06;
}

StepClip gen_step(const StepSpec& spec, const SynthBands& bands) {
  const Family family = spec.label.family();
  const double travel = plane_distance(spec.start_foot, spec.end_foot);
  if (travel > bands.travel(family).max + 1e-9) {
    throw Error(ErrorCode::BandViolation, "clip '" + spec.id + "' travels " + std::to_string(travel) +
                                              " m, beyond the " + std::string(to_string(family)) + " band");
  }
  if (spec.duration <= 0.0 || spec.fps <= 0.0) throw Error(ErrorCode::InvalidInput, "duration and fps must be positive");

  const Side acting = opposite(spec.support_side);
  const FootPose support = make_pose(spec.support.foot, spec.support.yaw, spec.toe_offset);
  const FootPose start = to_global(make_pose(spec.start_foot, spec.start_yaw, spec.toe_offset), support);
  const FootPose end = to_global(make_pose(spec.end_foot, spec.end_yaw, spec.toe_offset), support);
  const StepTiming timing = step_timing(spec.label.kind());
  std::optional<FootPose> partner_end;
  if (timing.partner && spec.partner_end_foot) {
    partner_end = to_global(make_pose(*spec.partner_end_foot, spec.partner_end_yaw, spec.toe_offset), support);
  }
  const FootPose partner_final = partner_end.value_or(support);
  // A degenerate step (start equals end) keeps the acting foot planted.
  const bool moves = (end.foot - start.foot).norm() > 1e-12 || std::abs(normalize_angle(end.yaw - start.yaw)) > 1e-12;
  const double peak = moves ? swing_height(family, end.foot.y() - support.foot.y()) : 0.0;

  const Vec3 lift(0.0, kRootHeight, 0.0);
  const Vec3 root_a = 0.5 * (start.foot + support.foot) + lift;
  const Vec3 root_b = 0.5 * (end.foot + partner_final.foot) + lift;
  const double yaw_a = mean_yaw(start.yaw, support.yaw);
  const double yaw_b = mean_yaw(end.yaw, partner_final.yaw);

  const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(spec.duration * spec.fps)) + 1);
  StepClip clip;
  clip.id = spec.id;
  clip.support = support;
  clip.support_side = spec.support_side;
  clip.label = spec.label;
  clip.fps = spec.fps;
  clip.frames.reserve(n);
  for (std::size_t f = 0; f < n; ++f) {
    const double t = static_cast<double>(f) / static_cast<double>(n - 1);
    Frame fr;
    fr.root_pos = root_a + t * (root_b - root_a);
    fr.root_yaw = normalize_angle(yaw_a + t * normalize_angle(yaw_b - yaw_a));
    fr.foot(acting) = swing_pose(start, end, swing(timing.acting, t), peak, spec.toe_offset);
    fr.foot(spec.support_side) =
        partner_end ? swing_pose(support, *partner_end, swing(*timing.partner, t), peak, spec.toe_offset) : support;
    clip.frames.push_back(fr);
  }
  clip.frames.front().foot(acting) = start;
  clip.frames.back().foot(acting) = end;
  if (partner_end) clip.frames.back().foot(spec.support_side) = *partner_end;

  clip.start_local = to_local(start, support);
  clip.end_local = to_local(end, support);
  clip.v_root = plane_distance(root_a, root_b) / (static_cast<double>(n - 1) / spec.fps);
  return clip;
}

DatabaseSpec default_database_spec() { return DatabaseSpec{}; }

DatabaseSpec small_database_spec() {
  DatabaseSpec s;
  s.counts = {34, 16, 34, 16};  // default proportions, one third the size
  return s;
}

std::vector<StepClip> gen_database(const DatabaseSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SynthBands& b = spec.bands;
  std::vector<StepClip> clips;
  for (Family family : kAllFamilies) {
    const int n = spec.counts[static_cast<std::size_t>(family)];
    const Range& band = b.travel(family);
    const bool jumping = family == Family::Jumping;
    auto kind_of = [](int k) { return kJumpKinds[(k / 2) % 4]; };

    // End points: (lateral, reach ahead of the support), or (lateral, travel)
    // for side-by-side take-offs. Jump kinds are gridded separately since
    // extraction filters by kind.
    std::vector<std::array<double, 2>> cell(static_cast<std::size_t>(n));
    for (int g = 0; g < (jumping ? 4 : 1); ++g) {
      std::vector<int> members;
      for (int k = 0; k < n; ++k) {
        if (!jumping || kind_of(k) == kJumpKinds[g]) members.push_back(k);
      }
      const auto pts = jittered_grid(static_cast<int>(members.size()), rng);
      for (std::size_t i = 0; i < members.size(); ++i) cell[static_cast<std::size_t>(members[i])] = pts[i];
    }
    // The shortest and longest steps sit exactly on the band edges.
    int k_lo = 0;
    int k_hi = 0;
    for (int k = 1; k < n; ++k) {
      if (cell[static_cast<std::size_t>(k)][1] < cell[static_cast<std::size_t>(k_lo)][1]) k_lo = k;
      if (cell[static_cast<std::size_t>(k)][1] > cell[static_cast<std::size_t>(k_hi)][1]) k_hi = k;
    }
    const std::vector<double> rise = stratified(b.rise, n, rng);
    const std::vector<double> yaw = stratified(b.yaw, n, rng);
    const std::vector<double> mix = stratified(Range{0.0, 1.0}, n, rng);
    const Range ahead_range{b.fwd_split.min * band.min, b.fwd_split.max * band.max};

    for (int k = 0; k < n; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      StepSpec s;
      s.id = clip_id(family, k);
      s.support_side = k % 2 == 0 ? Side::Right : Side::Left;
      s.fps = spec.fps;
      s.toe_offset = spec.toe_offset;
      s.support = make_pose(Vec3::Zero(), 0.0, spec.toe_offset);
      const double sigma = s.support_side == Side::Right ? 1.0 : -1.0;  // acting foot's side in x
      s.start_yaw = uniform(rng, b.yaw);
      s.end_yaw = yaw[ku];
      const double lat_e = lerp(b.lateral, cell[ku][0]);
      const std::optional<double> forced = k == k_lo ? std::optional(band.min)
                                         : k == k_hi ? std::optional(band.max)
                                                     : std::nullopt;

      // Forward reach {fwd, ahead} of the acting foot for a (lateral) grid cell on the reach axis.
      auto reach = [&](double lat_s) -> std::array<double, 2> {
        const double dlat = lat_e - lat_s;
        const double fwd_min = std::sqrt(std::max(0.0, band.min * band.min - dlat * dlat));
        const double fwd_max = std::sqrt(std::max(0.0, band.max * band.max - dlat * dlat));
        double ahead = lerp(ahead_range, cell[ku][1]);
        if (forced) {
          const double fwd = std::sqrt(std::max(0.0, *forced * *forced - dlat * dlat));
          return {fwd, std::clamp(ahead, b.fwd_split.min * fwd, b.fwd_split.max * fwd)};
        }
        const double lo = std::max(ahead / b.fwd_split.max, fwd_min);
        const double hi = std::min(ahead / b.fwd_split.min, fwd_max);
        const double fwd = lo <= hi ? lo + mix[ku] * (hi - lo) : std::clamp(ahead / 0.5, fwd_min, fwd_max);
        return {fwd, std::min(ahead, fwd)};
      };

      if (!jumping) {
        s.label = BehaviourLabel::of_family(family);
        const double lat_s = uniform(rng, b.lateral);
        const auto [fwd, ahead] = reach(lat_s);
        s.start_foot = Vec3(sigma * lat_s, 0.0, -(fwd - ahead));
        s.end_foot = Vec3(sigma * lat_e, 0.0, ahead);
        if (family == Family::StairStep) {
          s.start_foot.y() = -uniform(rng, b.rise);
          s.end_foot.y() = rise[ku];
        }
      } else {
        const LabelKind kind = kind_of(k);
        const bool both_lift = kind == LabelKind::JumpBothLiftBothLand || kind == LabelKind::JumpBothLiftOneLand;
        const bool both_land = kind == LabelKind::JumpBothLiftBothLand || kind == LabelKind::JumpOneLiftBothLand;
        if (both_lift) {
          // Side-by-side take-off: the landing lies a full travel ahead.
          const double d = forced.value_or(lerp(band, cell[ku][1]));
          const double lat_s = uniform(rng, b.jump_lateral);
          const double z_s = uniform(rng, Range{-0.03, 0.03});
          const double dlat = lat_e - lat_s;
          s.start_foot = Vec3(sigma * lat_s, 0.0, z_s);
          s.end_foot = Vec3(sigma * lat_e, 0.0, z_s + std::sqrt(std::max(0.0, d * d - dlat * dlat)));
        } else {
          // Staggered take-off from behind the support, as in bounding.
          const double lat_s = uniform(rng, b.lateral);
          const auto [fwd, ahead] = reach(lat_s);
          s.start_foot = Vec3(sigma * lat_s, 0.0, -(fwd - ahead));
          s.end_foot = Vec3(sigma * lat_e, 0.0, ahead);
        }
        if (kind != LabelKind::JumpOneLiftOneLand) {
          const double fore = both_land ? uniform(rng, Range{-0.03, 0.03}) : uniform(rng, b.stagger);
          const double width = uniform(rng, b.jump_lateral);
          s.partner_end_foot = s.end_foot + rotate_yaw(Vec3(-sigma * width, 0.0, fore), s.end_yaw);
          s.partner_end_yaw = normalize_angle(s.end_yaw + uniform(rng, Range{-0.05, 0.05}));
        }
        const Side lead = both_lift ? opposite(s.support_side) : s.support_side;
        s.label = BehaviourLabel::jump(kind, lead);
      }
      const Vec3 root_travel = 0.5 * (s.end_foot + s.partner_end_foot.value_or(Vec3::Zero())) -
                               0.5 * (s.start_foot + Vec3::Zero());
      const double v = uniform(rng, b.v_root(family));
      s.duration = std::max(kMinStepSeconds, std::hypot(root_travel.x(), root_travel.z()) / v);
      clips.push_back(gen_step(s, b));
    }
  }
  if (spec.mirrored) {
    const std::size_t n = clips.size();
    for (std::size_t i = 0; i < n; ++i) clips.push_back(mirror(clips[i]));
  }
  return clips;
}

std::vector<double> raised_cosine_ramp(double from, double to, std::size_t n) {
  std::vector<double> out(n, from);
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = from + (to - from) * 0.5 * (1.0 - std::cos(kPi * u));
  }
  return out;
}

LabeledSequence gen_transition_sequence(const TransitionSpec& spec, std::mt19937_64& rng) {
  if (spec.ramp.size() < 2) throw Error(ErrorCode::InvalidInput, "a transition ramp needs at least two steps");
  std::vector<double> v;
  for (int i = 0; i < spec.pre_steps; ++i) v.push_back(spec.pre_velocity.value_or(spec.ramp.front()));
  v.insert(v.end(), spec.ramp.begin(), spec.ramp.end());
  for (int i = 0; i < spec.post_steps; ++i) v.push_back(spec.post_velocity.value_or(spec.ramp.back()));
  std::uniform_real_distribution<double> jitter(-spec.jitter, spec.jitter);
  if (spec.jitter > 0.0) {
    for (double& x : v) x += jitter(rng);
  }
  // Climbing starts with the first step that belongs to the target behaviour.
  const std::size_t climb_from = static_cast<std::size_t>(spec.pre_steps) + spec.ramp.size() - 1;
  const bool climbs = spec.to == Family::StairStep;

  const int period = std::max(6, static_cast<int>(std::lround(spec.step_seconds * spec.fps)));
  const int lift_delay = period / 5;
  const int tail = period / 2;
  const std::size_t m = v.size();
  const int total = static_cast<int>(m) * period + tail + 1;

  std::vector<double> root_z(static_cast<std::size_t>(total));
  for (int f = 1; f < total; ++f) {
    const std::size_t k = std::min(m - 1, static_cast<std::size_t>((f - 1) / period));
    root_z[static_cast<std::size_t>(f)] = root_z[static_cast<std::size_t>(f - 1)] + v[k] / spec.fps;
  }
  // Interval k lands prints[k + 2] at frame (k + 1) * period; prints 0 and 1 are the stance.
  auto mover = [](std::size_t k) { return k % 2 == 0 ? Side::Right : Side::Left; };
  const double half_width = 0.12;
  struct Print {
    Side side;
    Vec3 pos;
    int landed;
  };
  std::vector<Print> prints{{Side::Left, Vec3(half_width, 0.0, 0.0), 0}, {Side::Right, Vec3(-half_width, 0.0, 0.0), 0}};
  double level = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (climbs && k >= climb_from) level += spec.rise;
    const int landed = static_cast<int>(k + 1) * period;
    const double x = mover(k) == Side::Left ? half_width : -half_width;
    prints.push_back({mover(k), Vec3(x, level, root_z[static_cast<std::size_t>(landed)] + 0.1), landed});
  }

  LabeledSequence s;
  s.id = spec.id;
  s.from = spec.from;
  s.to = spec.to;
  s.fps = spec.fps;
  s.frames.resize(static_cast<std::size_t>(total));
  s.ground.resize(static_cast<std::size_t>(total));
  const double peak = swing_height(spec.to, climbs ? spec.rise : 0.0);
  const FlightWindow window{static_cast<double>(lift_delay) / period, 1.0};
  for (int f = 0; f < total; ++f) {
    const std::size_t k = static_cast<std::size_t>(f / period);
    const int local = f - static_cast<int>(k) * period;
    for (Side side : {Side::Left, Side::Right}) {
      std::size_t cur = 0;
      for (std::size_t i = 0; i < prints.size(); ++i) {
        if (prints[i].side == side && prints[i].landed <= f) cur = i;
      }
      const FootPose rest = make_pose(prints[cur].pos, 0.0, 0.15);
      FootPose pose = rest;
      if (k < m && mover(k) == side && local > 0) {
        const FootPose next = make_pose(prints[k + 2].pos, 0.0, 0.15);
        pose = swing_pose(rest, next, swing(window, static_cast<double>(local) / period), peak, 0.15);
      }
      s.frames[static_cast<std::size_t>(f)].foot(side) = pose;
      s.ground[static_cast<std::size_t>(f)][side == Side::Left ? 0 : 1] = prints[cur].pos.y();
    }
  }
  for (int f = 0; f < total; ++f) {
    Frame& fr = s.frames[static_cast<std::size_t>(f)];
    const double y = 0.5 * (fr.left.foot.y() + fr.right.foot.y());
    fr.root_pos = Vec3(0.0, kRootHeight + y, root_z[static_cast<std::size_t>(f)]);
    fr.root_yaw = 0.0;
  }
  return s;
}

std::vector<GraphCorpusSpec> default_graph_corpus() {
  std::vector<GraphCorpusSpec> out;
  out.push_back({Family::Walking, Family::Running, raised_cosine_ramp(1.1, 2.9, 4), 2.7, 12, 0.02});
  out.push_back({Family::Walking, Family::Jumping, {1.2, 1.5, 1.9, 2.4}, 2.2, 12, 0.02});
  out.push_back({Family::Running, Family::Jumping, {2.8, 3.0, 3.3, 3.6}, 3.4, 12, 0.02});
  out.push_back({Family::Walking, Family::StairStep, {1.2, 0.9, 0.6, 0.8}, 0.8, 12, 0.02});
  out.push_back({Family::Running, Family::StairStep, {2.8, 1.8, 1.0, 0.7}, 0.9, 12, 0.02});
  return out;
}

std::vector<LabeledSequence> gen_graph_corpus(const GraphCorpusSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  static constexpr int kExtra[] = {0, 0, 1};
  std::vector<LabeledSequence> out;
  for (int i = 0; i < spec.count; ++i) {
    TransitionSpec t;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-%s-%03d", std::string(to_string(spec.from)).c_str(),
                  std::string(to_string(spec.to)).c_str(), i);
    t.id = buf;
    t.from = spec.from;
    t.to = spec.to;
    t.ramp = spec.ramp;
    t.pre_steps = kExtra[i % 3];
    t.post_steps = kExtra[(i / 3) % 3];
    t.post_velocity = spec.post_velocity;
    t.jitter = spec.jitter;
    out.push_back(gen_transition_sequence(t, rng));
  }
  return out;
}

SynthSpec default_synth_spec() { return SynthSpec{default_database_spec(), default_graph_corpus()}; }

Json synth_spec_to_json(const SynthSpec& s) {
  Json counts;
  for (Family f : kAllFamilies) counts[std::string(to_string(f))] = s.database.counts[static_cast<std::size_t>(f)];
  Json graphs = Json::array();
  for (const GraphCorpusSpec& g : s.graphs) {
    Json j{{"from", std::string(to_string(g.from))},
           {"to", std::string(to_string(g.to))},
           {"ramp", g.ramp},
           {"count", g.count},
           {"jitter", g.jitter}};
    if (g.post_velocity) j["post_velocity"] = *g.post_velocity;
    graphs.push_back(std::move(j));
  }
  return Json{{"database",
               {{"counts", std::move(counts)},
                {"mirrored", s.database.mirrored},
                {"fps", s.database.fps},
                {"toe_offset", s.database.toe_offset}}},
              {"graphs", std::move(graphs)}};
}

SynthSpec synth_spec_from_json(const Json& j) {
  SynthSpec s = default_synth_spec();
  if (j.contains("database")) {
    const Json& d = j.at("database");
    if (d.contains("counts")) {
      for (auto it = d.at("counts").begin(); it != d.at("counts").end(); ++it) {
        s.database.counts[static_cast<std::size_t>(family_from_string(it.key()))] = it.value().get<int>();
      }
    }
    s.database.mirrored = d.value("mirrored", s.database.mirrored);
    s.database.fps = d.value("fps", s.database.fps);
    s.database.toe_offset = d.value("toe_offset", s.database.toe_offset);
  }
  if (j.contains("graphs")) {
    s.graphs.clear();
    for (const Json& g : j.at("graphs")) {
      GraphCorpusSpec c;
      c.from = family_from_string(g.at("from").get<std::string>());
      c.to = family_from_string(g.at("to").get<std::string>());
      c.ramp = g.at("ramp").get<std::vector<double>>();
      c.count = g.value("count", 12);
      c.jitter = g.value("jitter", 0.02);
      if (g.contains("post_velocity")) c.post_velocity = g.at("post_velocity").get<double>();
      s.graphs.push_back(std::move(c));
    }
  }
  return s;
}

}  // namespace footloco
