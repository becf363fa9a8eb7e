#include "footloco/database.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace footloco {
namespace {

constexpr std::string_view kMirrorSuffix = "/m";
constexpr std::size_t kMinPerGroup = 4;

Vec3 mirror_vec(const Vec3& v) { return {-v.x(), v.y(), v.z()}; }

bool pose_near(const FootPose& a, const FootPose& b, double tol) {
  return (a.foot - b.foot).cwiseAbs().maxCoeff() <= tol &&
         (a.toe - b.toe).cwiseAbs().maxCoeff() <= tol &&
         std::abs(normalize_angle(a.yaw - b.yaw)) <= tol;
}

bool clip_geometry_near(const StepClip& a, const StepClip& b, double tol) {
  if (a.support_side != b.support_side || a.label != b.label || a.frames.size() != b.frames.size()) {
    return false;
  }
  if (!pose_near(a.support, b.support, tol) || !pose_near(a.start_local, b.start_local, tol) ||
      !pose_near(a.end_local, b.end_local, tol)) {
    return false;
  }
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    const Frame& fa = a.frames[i];
    const Frame& fb = b.frames[i];
    if ((fa.root_pos - fb.root_pos).cwiseAbs().maxCoeff() > tol) return false;
    if (!pose_near(fa.left, fb.left, tol) || !pose_near(fa.right, fb.right, tol)) return false;
  }
  return true;
}

}  // namespace

const StepClip& MotionDatabase::clip(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error(ErrorCode::InvalidInput, "unknown clip id '" + id + "'");
  return clips_[it->second];
}

std::span<const std::size_t> MotionDatabase::group(Family f, Side support) const {
  auto it = groups_.find({f, support});
  if (it == groups_.end()) return {};
  return it->second;
}

bool MotionDatabase::mirror_complete(double tol) const {
  for (const StepClip& c : clips_) {
    const StepClip m = mirror(c);
    bool found = false;
    if (auto it = by_id_.find(m.id); it != by_id_.end()) {
      found = clip_geometry_near(clips_[it->second], m, tol);
    }
    if (!found) {
      for (std::size_t idx : group(m.label.family(), m.support_side)) {
        if (clip_geometry_near(clips_[idx], m, tol)) {
          found = true;
          break;
        }
      }
    }
    if (!found) return false;
  }
  return true;
}

FootPose mirror_pose(const FootPose& p) {
  return FootPose{mirror_vec(p.foot), normalize_angle(-p.yaw), mirror_vec(p.toe)};
}

StepClip mirror(const StepClip& clip) {
  StepClip m;
  if (clip.id.ends_with(kMirrorSuffix)) {
    m.id = clip.id.substr(0, clip.id.size() - kMirrorSuffix.size());
  } else {
    m.id = clip.id + std::string(kMirrorSuffix);
  }
  m.support = mirror_pose(clip.support);
  m.support_side = opposite(clip.support_side);
  m.start_local = mirror_pose(clip.start_local);
  m.end_local = mirror_pose(clip.end_local);
  m.v_root = clip.v_root;
  m.label = clip.label.mirrored();
  m.fps = clip.fps;
  m.frames.reserve(clip.frames.size());
  for (const Frame& f : clip.frames) {
    Frame g;
    g.root_pos = mirror_vec(f.root_pos);
    g.root_yaw = normalize_angle(-f.root_yaw);
    g.left = mirror_pose(f.right);
    g.right = mirror_pose(f.left);
    m.frames.push_back(g);
  }
  return m;
}

StepClip align_support(const StepClip& clip, const Footprint& target) {
  if (clip.support_side != target.side) {
    throw Error(ErrorCode::SideMismatch, "clip '" + clip.id + "' supports on " +
                                             std::string(to_string(clip.support_side)) +
                                             ", footprint is " + std::string(to_string(target.side)));
  }
  const double dyaw = normalize_angle(target.yaw - clip.support.yaw);
  const Vec3 origin = clip.support.foot;
  const Vec3 dest = target.pos;
  auto map_point = [&](const Vec3& p) -> Vec3 { return dest + rotate_yaw(p - origin, dyaw); };
  auto map_pose = [&](const FootPose& p) {
    return FootPose{map_point(p.foot), normalize_angle(p.yaw + dyaw), map_point(p.toe)};
  };

  StepClip out = clip;
  out.support = map_pose(clip.support);
  out.support.foot = dest;
  for (Frame& f : out.frames) {
    f.root_pos = map_point(f.root_pos);
    f.root_yaw = normalize_angle(f.root_yaw + dyaw);
    f.left = map_pose(f.left);
    f.right = map_pose(f.right);
  }
  return out;
}

double interfoot_angle(const Vec3& from, double from_yaw, const Vec3& to) {
  const Vec3 local = rotate_yaw(to - from, -from_yaw);
  return std::atan2(local.z(), std::abs(local.x()));
}

JumpGeometry measure_jump(const StepClip& clip) {
  JumpGeometry g;
  const FootPose start = to_global(clip.start_local, clip.support);
  const FootPose end = to_global(clip.end_local, clip.support);
  g.theta_lift = interfoot_angle(clip.support.foot, clip.support.yaw, start.foot);
  g.feet_lift = plane_distance(clip.support.foot, start.foot);
  const FootPose& partner = clip.frames.back().foot(clip.support_side);
  g.theta_land = interfoot_angle(end.foot, end.yaw, partner.foot);
  g.feet_land = plane_distance(end.foot, partner.foot);
  return g;
}

FamilyRanges scan_raw_limits(std::span<const StepClip> clips) {
  FamilyRanges raw;
  std::array<bool, 4> seen{};
  for (const StepClip& c : clips) {
    const Family f = c.label.family();
    const double d = plane_distance(c.start_local.foot, c.end_local.foot);
    auto& r = raw[f];
    auto& s = seen[static_cast<std::size_t>(f)];
    if (!s) {
      r = Range{d, d};
      s = true;
    } else {
      r.min = std::min(r.min, d);
      r.max = std::max(r.max, d);
    }
  }
  return raw;
}

FamilyRanges stitch_limits(const FamilyRanges& raw) {
  const Range& walk = raw[Family::Walking];
  const Range& run = raw[Family::Running];
  const Range& jump = raw[Family::Jumping];
  if (walk.max >= run.max || run.max >= jump.max) {
    throw Error(ErrorCode::InvertedLimits,
                "family upper limits must increase: walking < running < jumping");
  }
  FamilyRanges out = raw;
  // Overlaps go to the lower family; gaps between disjoint ranges stay as scanned.
  out[Family::Running].min = std::max(run.min, walk.max);
  out[Family::Jumping].min = std::max(jump.min, run.max);
  return out;
}

MotionDatabase build_database(std::vector<StepClip> clips, const DatabaseConfig& cfg) {
  if (clips.empty()) throw Error(ErrorCode::EmptyFamily, "no clips supplied");
  MotionDatabase db;
  db.config_ = cfg;
  db.clips_ = std::move(clips);
  for (std::size_t i = 0; i < db.clips_.size(); ++i) {
    const StepClip& c = db.clips_[i];
    if (!db.by_id_.emplace(c.id, i).second) {
      throw Error(ErrorCode::InvalidInput, "duplicate clip id '" + c.id + "'");
    }
    db.groups_[{c.label.family(), c.support_side}].push_back(i);
  }
  for (Family f : kAllFamilies) {
    for (Side s : {Side::Left, Side::Right}) {
      if (db.group(f, s).size() < kMinPerGroup) {
        throw Error(ErrorCode::EmptyFamily, std::string(to_string(f)) + " has fewer than 4 clips on the " +
                                                std::string(to_string(s)) + " support side");
      }
    }
  }

  db.raw_ = scan_raw_limits(db.clips_);
  db.limits_.bands = stitch_limits(db.raw_);

  double stair_height = 0.0;
  double lift_sum = 0.0;
  double land_sum = 0.0;
  std::size_t jumps = 0;
  double feet_max = 0.0;
  bool any_simultaneous = false;
  std::array<double, 4> v_sum{};
  std::array<std::size_t, 4> v_count{};
  for (const StepClip& c : db.clips_) {
    const auto fi = static_cast<std::size_t>(c.label.family());
    v_sum[fi] += c.v_root;
    ++v_count[fi];
    if (c.label.family() == Family::StairStep) {
      stair_height = std::max(stair_height, c.end_local.foot.y());
    }
    if (!c.label.is_jump()) continue;
    const JumpGeometry g = measure_jump(c);
    lift_sum += std::abs(g.theta_lift);
    land_sum += std::abs(g.theta_land);
    ++jumps;
    const LabelKind k = c.label.kind();
    if (k == LabelKind::JumpBothLiftBothLand || k == LabelKind::JumpBothLiftOneLand) {
      feet_max = std::max(feet_max, g.feet_lift);
      any_simultaneous = true;
    }
    if (k == LabelKind::JumpBothLiftBothLand || k == LabelKind::JumpOneLiftBothLand) {
      feet_max = std::max(feet_max, g.feet_land);
      any_simultaneous = true;
    }
  }
  db.limits_.stair_height = stair_height;
  db.limits_.theta_lift = lift_sum / static_cast<double>(jumps);
  db.limits_.theta_land = land_sum / static_cast<double>(jumps);
  if (cfg.theta_override) {
    db.limits_.theta_lift = *cfg.theta_override;
    db.limits_.theta_land = *cfg.theta_override;
  }
  db.limits_.feet_max = any_simultaneous ? feet_max : 0.35;
  if (cfg.feet_max_override) db.limits_.feet_max = *cfg.feet_max_override;
  for (std::size_t i = 0; i < 4; ++i) {
    db.base_velocity_[i] = v_count[i] ? v_sum[i] / static_cast<double>(v_count[i]) : 0.0;
  }
  return db;
}

namespace {

Json range_json(const Range& r) { return Json::array({r.min, r.max}); }

Json ranges_json(const FamilyRanges& r) {
  Json j = Json::object();
  for (Family f : kAllFamilies) j[std::string(to_string(f))] = range_json(r[f]);
  return j;
}

}  // namespace

Json database_to_json(const MotionDatabase& db) {
  Json clips = Json::array();
  for (const StepClip& c : db.clips()) clips.push_back(clip_to_json(c));
  const BehaviourLimits& l = db.limits();
  Json j{{"toe_offset", db.toe_offset()},
         {"raw_limits", ranges_json(db.raw_limits())},
         {"limits",
          {{"bands", ranges_json(l.bands)},
           {"stair_height", l.stair_height},
           {"theta_lift", l.theta_lift},
           {"theta_land", l.theta_land},
           {"feet_max", l.feet_max}}},
         {"clips", std::move(clips)}};
  if (db.config().theta_override) j["theta_override"] = *db.config().theta_override;
  if (db.config().feet_max_override) j["feet_max_override"] = *db.config().feet_max_override;
  return j;
}

MotionDatabase database_from_json(const Json& j) {
  DatabaseConfig cfg;
  cfg.toe_offset = j.value("toe_offset", 0.15);
  if (j.contains("theta_override")) cfg.theta_override = j.at("theta_override").get<double>();
  if (j.contains("feet_max_override")) cfg.feet_max_override = j.at("feet_max_override").get<double>();
  std::vector<StepClip> clips;
  for (const Json& c : j.at("clips")) clips.push_back(clip_from_json(c));
  // Derived limits are always rescanned from the clips.
  return build_database(std::move(clips), cfg);
}

}  // namespace footloco
