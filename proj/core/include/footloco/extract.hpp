#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "footloco/database.hpp"
#include "footloco/types.hpp"

namespace footloco {

struct ExtractConfig {
  std::size_t k = 12;
  // Converts |v_root - v_target| (m/s) into meters of ranking score.
  double velocity_weight = 0.05;
  // Candidate counts tried in turn after NotEnclosed, while the pool still fills them.
  std::vector<std::size_t> retry_k{24, 48};
};

struct CandidateSet {
  std::vector<StepClip> clips;  // aligned to the support footprint, sorted by end yaw
  // True when at least one clip ends at or below the target yaw and one at or above.
  bool bracketed = false;
};

// Global acting-foot end pose of an aligned clip.
FootPose aligned_end(const StepClip& aligned);

// Clips of the behaviour's family (narrowed to the exact jump variant when the
// database holds at least four of them) aligned onto `support`. The two
// closest-yaw clips on each side of the target yaw are always kept; remaining
// slots go to the best pose+velocity score.
CandidateSet candidate_set(const MotionDatabase& db, const Footprint& support, const Footprint& target,
                           const BehaviourLabel& behaviour, double v_target, const ExtractConfig& cfg = {});

enum class Joint { Foot, Toe };
std::string_view to_string(Joint j);

struct JointEnclosure {
  std::array<std::size_t, 4> indices{};  // into the candidate list, ordered by bearing
  std::array<Vec3, 4> vertices{};
  double score = 0.0;  // sum of vertex-target plane distances
};

struct EnclosureSelection {
  std::array<StepClip, 4> foot_clips;
  std::array<StepClip, 4> toe_clips;
  std::array<Vec3, 4> foot_vertices{};
  std::array<Vec3, 4> toe_vertices{};
  double foot_polygon_score = 0.0;
  double toe_polygon_score = 0.0;
  Vec3 foot_target = Vec3::Zero();
  Vec3 toe_target = Vec3::Zero();
  double target_yaw = 0.0;
  bool bracketed = false;
};

// x-z containment of `target` by the quad whose vertices are sorted by bearing
// around it; boundary counts as inside, polygons below kMinQuadArea do not.
inline constexpr double kMinQuadArea = 1e-8;
bool quad_contains(std::span<const Vec3, 4> vertices, const Vec3& target);

// Signed yaw offsets of each vertex relative to the target yaw; used for the
// bracketing requirement. Empty span disables bracketing.
JointEnclosure find_enclosure(std::span<const Vec3> points, std::span<const std::string> ids,
                              std::span<const double> yaw_offsets, const Vec3& target, Joint joint);

EnclosureSelection select_enclosure(const CandidateSet& candidates, const Footprint& target, double toe_offset);

struct Extraction {
  EnclosureSelection selection;
  std::size_t candidate_count = 0;  // size of the set that enclosed
};

// candidate_set plus select_enclosure at cfg.k, then at each cfg.retry_k.
// NotEnclosed propagates once the pool cannot fill the next K.
Extraction extract_enclosure(const MotionDatabase& db, const Footprint& support, const Footprint& target,
                             const BehaviourLabel& behaviour, double v_target, const ExtractConfig& cfg = {});

Json selection_to_json(const EnclosureSelection& sel);

}  // namespace footloco
