#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "footloco/io.hpp"
#include "footloco/types.hpp"

namespace footloco {

struct Range {
  double min = 0.0;
  double max = 0.0;
  bool contains(double d) const { return d >= min && d <= max; }
  friend bool operator==(const Range&, const Range&) = default;
};

// Plane-distance bands per family, indexed by Family.
struct FamilyRanges {
  std::array<Range, 4> ranges{};
  Range& operator[](Family f) { return ranges[static_cast<std::size_t>(f)]; }
  const Range& operator[](Family f) const { return ranges[static_cast<std::size_t>(f)]; }
  friend bool operator==(const FamilyRanges&, const FamilyRanges&) = default;
};

struct BehaviourLimits {
  FamilyRanges bands;           // stitched
  double stair_height = 0.0;    // max per-step height gain of stair clips
  double theta_lift = 0.0;      // radians, simultaneity threshold at lift
  double theta_land = 0.0;      // radians, simultaneity threshold at landing
  double feet_max = 0.0;        // max inter-foot plane distance for simultaneity

  const Range& operator[](Family f) const { return bands[f]; }
  friend bool operator==(const BehaviourLimits&, const BehaviourLimits&) = default;
};

struct DatabaseConfig {
  double toe_offset = 0.15;
  // Overrides both jump angle thresholds when set.
  std::optional<double> theta_override;
  std::optional<double> feet_max_override;
};

// Acting-foot geometry of a jump clip at lift and at landing.
struct JumpGeometry {
  double theta_lift = 0.0;
  double theta_land = 0.0;
  double feet_lift = 0.0;
  double feet_land = 0.0;
};

class MotionDatabase {
 public:
  const std::vector<StepClip>& clips() const { return clips_; }
  const StepClip& clip(const std::string& id) const;
  bool contains(const std::string& id) const { return by_id_.contains(id); }

  // Indices into clips() for (family, support side).
  std::span<const std::size_t> group(Family f, Side support) const;

  const BehaviourLimits& limits() const { return limits_; }
  const FamilyRanges& raw_limits() const { return raw_; }
  double toe_offset() const { return config_.toe_offset; }
  const DatabaseConfig& config() const { return config_; }

  // Mean v_root of a family's clips.
  double base_velocity(Family f) const { return base_velocity_[static_cast<std::size_t>(f)]; }

  // True when every clip has its left/right mirror in the database.
  bool mirror_complete(double tol = 1e-9) const;

 private:
  friend MotionDatabase build_database(std::vector<StepClip> clips, const DatabaseConfig& cfg);

  std::vector<StepClip> clips_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::map<std::pair<Family, Side>, std::vector<std::size_t>> groups_;
  FamilyRanges raw_;
  BehaviourLimits limits_;
  std::array<double, 4> base_velocity_{};
  DatabaseConfig config_;
};

// Throws EmptyFamily when a family has fewer than 4 clips on either support side.
MotionDatabase build_database(std::vector<StepClip> clips, const DatabaseConfig& cfg = {});

FamilyRanges scan_raw_limits(std::span<const StepClip> clips);

// Running starts where walking ends, jumping starts where running ends.
FamilyRanges stitch_limits(const FamilyRanges& raw);

StepClip mirror(const StepClip& clip);
FootPose mirror_pose(const FootPose& p);

// Rigid y-rotation plus translation taking clip.support onto the footprint.
StepClip align_support(const StepClip& clip, const Footprint& target);

JumpGeometry measure_jump(const StepClip& clip);

// Fore-aft angle of the segment from `from` to `to`, in the facing frame of
// `from`: 0 when the feet are side by side.
double interfoot_angle(const Vec3& from, double from_yaw, const Vec3& to);

Json database_to_json(const MotionDatabase& db);
MotionDatabase database_from_json(const Json& j);

}  // namespace footloco
