#include "footloco/blend.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace footloco {
namespace {

constexpr std::size_t kQuad = 4;

double lerp_angle(double a, double b, double t) { return normalize_angle(a + t * normalize_angle(b - a)); }

FootPose lerp_pose(const FootPose& a, const FootPose& b, double t) {
  return FootPose{a.foot + t * (b.foot - a.foot), lerp_angle(a.yaw, b.yaw, t), a.toe + t * (b.toe - a.toe)};
}

// Barycentric weights of p in triangle (a, b, c) on the x-z plane.
std::optional<std::array<double, 3>> barycentric(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
  const double det = (b.x() - a.x()) * (c.z() - a.z()) - (c.x() - a.x()) * (b.z() - a.z());
  if (std::abs(det) < 1e-14) return std::nullopt;
  const double l1 = ((p.x() - a.x()) * (c.z() - a.z()) - (c.x() - a.x()) * (p.z() - a.z())) / det;
  const double l2 = ((b.x() - a.x()) * (p.z() - a.z()) - (p.x() - a.x()) * (b.z() - a.z())) / det;
  return std::array<double, 3>{1.0 - l1 - l2, l1, l2};
}

struct AngleAccumulator {
  double s = 0.0;
  double c = 0.0;
  void add(double w, double angle) {
    s += w * std::sin(angle);
    c += w * std::cos(angle);
  }
  double mean() const { return std::atan2(s, c); }
};

Frame weighted_frame(std::span<const Frame* const> frames, std::span<const double> weights) {
  Frame out;
  out.root_pos.setZero();
  out.left.foot.setZero();
  out.left.toe.setZero();
  out.right.foot.setZero();
  out.right.toe.setZero();
  AngleAccumulator root, left, right;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const double w = weights[k];
    const Frame& f = *frames[k];
    out.root_pos += w * f.root_pos;
    out.left.foot += w * f.left.foot;
    out.left.toe += w * f.left.toe;
    out.right.foot += w * f.right.foot;
    out.right.toe += w * f.right.toe;
    root.add(w, f.root_yaw);
    left.add(w, f.left.yaw);
    right.add(w, f.right.yaw);
  }
  out.root_yaw = normalize_angle(root.mean());
  out.left.yaw = normalize_angle(left.mean());
  out.right.yaw = normalize_angle(right.mean());
  return out;
}

double ramp(const FlightWindow& w, double t) {
  if (t <= w.begin) return 0.0;
  if (t >= w.end) return 1.0;
  return smoothstep((t - w.begin) / (w.end - w.begin));
}

struct PoseDelta {
  Vec3 foot = Vec3::Zero();
  Vec3 toe = Vec3::Zero();
  double yaw = 0.0;
};

PoseDelta delta(const FootPose& goal, const FootPose& current) {
  return PoseDelta{goal.foot - current.foot, goal.toe - current.toe, normalize_angle(goal.yaw - current.yaw)};
}

void apply(FootPose& p, const PoseDelta& d, double scale) {
  p.foot += scale * d.foot;
  p.toe += scale * d.toe;
  p.yaw = normalize_angle(p.yaw + scale * d.yaw);
}

}  // namespace

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

std::array<double, 4> solve_position_weights(std::span<const Vec3, 4> vertices, const Vec3& target) {
  Eigen::Matrix<double, 3, 4> a;
  for (std::size_t i = 0; i < kQuad; ++i) {
    a(0, static_cast<Eigen::Index>(i)) = 1.0;
    a(1, static_cast<Eigen::Index>(i)) = vertices[i].x();
    a(2, static_cast<Eigen::Index>(i)) = vertices[i].z();
  }
  const Eigen::Vector3d b(1.0, target.x(), target.z());

  Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<double, 3, 4>> cod(a);
  cod.setThreshold(1e-10);
  if (cod.rank() < 3) throw Error(ErrorCode::DegenerateVertices, "polygon vertices are collinear in x-z");
  const Eigen::Vector4d w = cod.solve(b);

  std::array<double, 4> out{w(0), w(1), w(2), w(3)};
  if (*std::min_element(out.begin(), out.end()) >= kNegativeWeightFloor) return out;

  // Minimum-norm weights extrapolate too far; interpolate inside the most
  // central triangle that still contains the target.
  double best_min = -1.0;
  bool found = false;
  std::array<double, 4> best{};
  for (std::size_t skip = 0; skip < kQuad; ++skip) {
    std::array<std::size_t, 3> tri{};
    for (std::size_t i = 0, j = 0; i < kQuad; ++i) {
      if (i != skip) tri[j++] = i;
    }
    auto bc = barycentric(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]], target);
    if (!bc) continue;
    const double lo = std::min({(*bc)[0], (*bc)[1], (*bc)[2]});
    if (lo < -1e-12 || lo <= best_min) continue;
    best_min = lo;
    found = true;
    best.fill(0.0);
    for (std::size_t j = 0; j < 3; ++j) best[tri[j]] = (*bc)[j];
  }
  if (!found) return out;
  const double sum = best[0] + best[1] + best[2] + best[3];
  for (double& x : best) x /= sum;
  return best;
}

JointWeights solve_joint_weights(std::span<const Vec3> foot_rows, std::span<const Vec3> toe_rows,
                                 std::span<const Vec3> targets) {
  const std::size_t n = foot_rows.size();
  if (toe_rows.size() != n || targets.size() != n || n == 0) {
    throw Error(ErrorCode::InvalidInput, "joint weight rows must be non-empty and equally sized");
  }
  // v2 = 1 - v1 eliminates the affinity row: v1 * (foot - toe) ~ target - toe.
  Eigen::VectorXd diff(static_cast<Eigen::Index>(3 * n));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(3 * n));
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(3 * i);
    diff.segment<3>(r) = foot_rows[i] - toe_rows[i];
    rhs.segment<3>(r) = targets[i] - toe_rows[i];
    scale = std::max({scale, foot_rows[i].norm(), toe_rows[i].norm()});
  }
  if (diff.norm() <= 1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorCode::RankDeficient, "foot and toe columns are identical");
  }
  Eigen::MatrixXd column = diff;
  const Eigen::MatrixXd pinv = column.completeOrthogonalDecomposition().pseudoInverse();
  const double v1 = (pinv * rhs)(0);

  JointWeights out;
  out.v = {v1, 1.0 - v1};
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sq += (out.v[0] * foot_rows[i] + out.v[1] * toe_rows[i] - targets[i]).squaredNorm();
  }
  out.residual = std::sqrt(sq);
  return out;
}

JointRows joint_rows(const EnclosureSelection& sel) {
  JointRows rows;
  for (std::size_t i = 0; i < kQuad; ++i) {
    rows.foot.push_back(aligned_end(sel.foot_clips[i]).foot);
    rows.toe.push_back(aligned_end(sel.toe_clips[i]).foot);
    rows.targets.push_back(sel.foot_target);
  }
  for (std::size_t i = 0; i < kQuad; ++i) {
    rows.foot.push_back(aligned_end(sel.foot_clips[i]).toe);
    rows.toe.push_back(aligned_end(sel.toe_clips[i]).toe);
    rows.targets.push_back(sel.toe_target);
  }
  return rows;
}

BlendSolution solve_blend(const EnclosureSelection& sel) {
  BlendSolution s;
  s.w_foot = solve_position_weights(std::span<const Vec3, 4>(sel.foot_vertices), sel.foot_target);
  s.w_toe = solve_position_weights(std::span<const Vec3, 4>(sel.toe_vertices), sel.toe_target);
  const JointRows rows = joint_rows(sel);
  bool same_rows = true;
  for (std::size_t i = 0; i < rows.foot.size() && same_rows; ++i) same_rows = rows.foot[i] == rows.toe[i];
  if (same_rows) {
    // Both polygons use the same clips: every split fits equally, take the minimum-norm one.
    s.v = {0.5, 0.5};
    double sq = 0.0;
    for (std::size_t i = 0; i < rows.foot.size(); ++i) sq += (rows.foot[i] - rows.targets[i]).squaredNorm();
    s.residual = std::sqrt(sq);
    return s;
  }
  const JointWeights jw = solve_joint_weights(rows.foot, rows.toe, rows.targets);
  s.v = jw.v;
  s.residual = jw.residual;
  return s;
}

StepTiming step_timing(LabelKind kind) {
  switch (kind) {
    case LabelKind::JumpBothLiftBothLand: return {{0.0, 1.0}, FlightWindow{0.0, 1.0}};
    case LabelKind::JumpOneLiftBothLand: return {{0.0, 1.0}, FlightWindow{0.3, 1.0}};
    case LabelKind::JumpBothLiftOneLand: return {{0.0, 0.75}, FlightWindow{0.0, 1.0}};
    default: return {{0.0, 1.0}, std::nullopt};
  }
}

std::vector<Frame> resample(std::span<const Frame> frames, std::size_t count) {
  if (frames.empty() || count == 0) return {};
  if (frames.size() == count) return {frames.begin(), frames.end()};
  std::vector<Frame> out;
  out.reserve(count);
  const double last = static_cast<double>(frames.size() - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = count == 1 ? 0.0 : last * static_cast<double>(i) / static_cast<double>(count - 1);
    const auto lo = std::min(static_cast<std::size_t>(std::floor(u)), frames.size() - 1);
    const std::size_t hi = std::min(lo + 1, frames.size() - 1);
    const double t = u - static_cast<double>(lo);
    const Frame& a = frames[lo];
    const Frame& b = frames[hi];
    Frame f;
    f.root_pos = a.root_pos + t * (b.root_pos - a.root_pos);
    f.root_yaw = lerp_angle(a.root_yaw, b.root_yaw, t);
    f.left = lerp_pose(a.left, b.left, t);
    f.right = lerp_pose(a.right, b.right, t);
    out.push_back(f);
  }
  return out;
}

namespace {

struct Blended {
  std::vector<Frame> frames;
  double v_root = 0.0;
};

Blended blend_frames(const EnclosureSelection& sel, const BlendSolution& weights) {
  std::array<const StepClip*, 8> clips{};
  std::array<double, 8> w{};
  for (std::size_t i = 0; i < kQuad; ++i) {
    clips[i] = &sel.foot_clips[i];
    clips[i + kQuad] = &sel.toe_clips[i];
    w[i] = weights.v[0] * weights.w_foot[i];
    w[i + kQuad] = weights.v[1] * weights.w_toe[i];
  }
  std::array<std::size_t, 8> lengths{};
  for (std::size_t i = 0; i < clips.size(); ++i) lengths[i] = clips[i]->frames.size();
  std::sort(lengths.begin(), lengths.end());
  const std::size_t count = std::max<std::size_t>(2, (lengths[3] + lengths[4] + 1) / 2);

  std::array<std::vector<Frame>, 8> warped;
  Blended out;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    warped[i] = resample(clips[i]->frames, count);
    out.v_root += w[i] * clips[i]->v_root;
  }
  out.frames.reserve(count);
  std::array<const Frame*, 8> row{};
  for (std::size_t f = 0; f < count; ++f) {
    for (std::size_t i = 0; i < clips.size(); ++i) row[i] = &warped[i][f];
    out.frames.push_back(weighted_frame(row, w));
  }
  return out;
}

}  // namespace

EndError raw_blend_error(const EnclosureSelection& sel, const BlendSolution& weights) {
  const Blended b = blend_frames(sel, weights);
  const FootPose& end = b.frames.back().foot(sel.foot_clips[0].acting_side());
  return EndError{(end.foot - sel.foot_target).norm(), std::abs(normalize_angle(end.yaw - sel.target_yaw))};
}

StepClip blend_step(const EnclosureSelection& sel, const BlendSolution& weights) {
  StepPins pins;
  pins.acting_end = FootPose{sel.foot_target, sel.target_yaw, sel.toe_target};
  return blend_step(sel, weights, pins);
}

StepClip blend_step(const EnclosureSelection& sel, const BlendSolution& weights, const StepPins& pins) {
  const StepClip& ref = sel.foot_clips[0];
  const Side acting = ref.acting_side();
  const Side partner = ref.support_side;
  const BehaviourLabel label = pins.label.value_or(ref.label);
  const StepTiming timing = step_timing(label.kind());

  Blended b = blend_frames(sel, weights);
  std::vector<Frame>& frames = b.frames;

  const PoseDelta end_delta = delta(pins.acting_end, frames.back().foot(acting));
  const PoseDelta start_delta = pins.acting_start ? delta(*pins.acting_start, frames.front().foot(acting)) : PoseDelta{};
  PoseDelta partner_delta;
  if (pins.partner_end && timing.partner) partner_delta = delta(*pins.partner_end, frames.back().foot(partner));

  const double last = static_cast<double>(frames.size() - 1);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double t = static_cast<double>(i) / last;
    const double s = ramp(timing.acting, t);
    Frame& f = frames[i];
    PoseDelta act;
    act.foot = (1.0 - s) * start_delta.foot + s * end_delta.foot;
    act.toe = (1.0 - s) * start_delta.toe + s * end_delta.toe;
    act.yaw = (1.0 - s) * start_delta.yaw + s * end_delta.yaw;
    apply(f.foot(acting), act, 1.0);
    PoseDelta part;
    if (timing.partner) {
      const double sp = ramp(*timing.partner, t);
      part.foot = sp * partner_delta.foot;
      part.toe = sp * partner_delta.toe;
      part.yaw = sp * partner_delta.yaw;
      apply(f.foot(partner), part, 1.0);
    }
    f.root_pos += 0.5 * (act.foot + part.foot);
    f.root_yaw = normalize_angle(f.root_yaw + 0.5 * (act.yaw + part.yaw));
  }
  // Land exactly, free of accumulated rounding.
  frames.back().foot(acting) = pins.acting_end;
  if (pins.acting_start) frames.front().foot(acting) = *pins.acting_start;
  if (pins.partner_end && timing.partner) frames.back().foot(partner) = *pins.partner_end;

  StepClip out;
  out.id = "blend:" + sel.foot_clips[0].id;
  out.support = ref.support;
  out.support_side = partner;
  out.start_local = to_local(frames.front().foot(acting), ref.support);
  out.end_local = to_local(frames.back().foot(acting), ref.support);
  out.v_root = std::max(0.0, b.v_root);
  out.label = label;
  out.fps = ref.fps;
  out.frames = std::move(frames);
  return out;
}

MotionOutput cleanup_footskate(const MotionOutput& motion, std::span<const ContactPin> pins, double window_seconds) {
  const int n = static_cast<int>(motion.frames.size());
  for (const ContactPin& p : pins) {
    if (p.begin > p.end || p.begin < 0 || p.end >= n) {
      throw Error(ErrorCode::InvalidInput, "contact pin range outside the motion");
    }
  }
  for (std::size_t i = 0; i < pins.size(); ++i) {
    for (std::size_t j = i + 1; j < pins.size(); ++j) {
      if (pins[i].side == pins[j].side && pins[i].begin <= pins[j].end && pins[j].begin <= pins[i].end) {
        throw Error(ErrorCode::OverlappingPins, "two contact pins overlap on the " +
                                                    std::string(to_string(pins[i].side)) + " foot");
      }
    }
  }

  const int window = std::max(1, static_cast<int>(std::lround(window_seconds * motion.fps)));
  MotionOutput out = motion;
  for (Side side : {Side::Left, Side::Right}) {
    std::vector<PoseDelta> total(static_cast<std::size_t>(n));
    std::vector<const ContactPin*> inside(static_cast<std::size_t>(n), nullptr);
    for (const ContactPin& p : pins) {
      if (p.side != side) continue;
      const PoseDelta before = delta(p.pose, motion.frames[static_cast<std::size_t>(p.begin)].pose.foot(side));
      const PoseDelta after = delta(p.pose, motion.frames[static_cast<std::size_t>(p.end)].pose.foot(side));
      for (int f = std::max(0, p.begin - window); f < p.begin; ++f) {
        const double w = smoothstep(static_cast<double>(f - (p.begin - window)) / window);
        PoseDelta& d = total[static_cast<std::size_t>(f)];
        d.foot += w * before.foot;
        d.toe += w * before.toe;
        d.yaw += w * before.yaw;
      }
      for (int f = p.end + 1; f <= std::min(n - 1, p.end + window); ++f) {
        const double w = smoothstep(static_cast<double>(p.end + window - f) / window);
        PoseDelta& d = total[static_cast<std::size_t>(f)];
        d.foot += w * after.foot;
        d.toe += w * after.toe;
        d.yaw += w * after.yaw;
      }
      for (int f = p.begin; f <= p.end; ++f) inside[static_cast<std::size_t>(f)] = &p;
    }
    for (int f = 0; f < n; ++f) {
      FootPose& foot = out.frames[static_cast<std::size_t>(f)].pose.foot(side);
      if (const ContactPin* p = inside[static_cast<std::size_t>(f)]) {
        foot = p->pose;
        continue;
      }
      const PoseDelta& d = total[static_cast<std::size_t>(f)];
      if (d.foot.isZero(0.0) && d.toe.isZero(0.0) && d.yaw == 0.0) continue;
      apply(foot, d, 1.0);
    }
  }
  return out;
}

}  // namespace footloco
