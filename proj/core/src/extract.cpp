#include "footloco/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace footloco {
namespace {

constexpr std::size_t kQuad = 4;

struct Ranked {
  std::size_t db_index;
  double yaw_offset;
  double score;
  const std::string* id;
};

double bearing(const Vec3& from, const Vec3& to) { return std::atan2(to.x() - from.x(), to.z() - from.z()); }

double quad_area(const std::array<Vec3, 4>& v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < kQuad; ++i) {
    const Vec3& a = v[i];
    const Vec3& b = v[(i + 1) % kQuad];
    twice += a.x() * b.z() - b.x() * a.z();
  }
  return std::abs(twice) * 0.5;
}

// Orders the vertices by bearing around target, returning the permutation.
std::array<std::size_t, 4> bearing_order(std::span<const Vec3, 4> v, const Vec3& target) {
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::array<double, 4> b{};
  for (std::size_t i = 0; i < kQuad; ++i) b[i] = bearing(target, v[i]);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return b[x] < b[y]; });
  return order;
}

}  // namespace

std::string_view to_string(Joint j) { return j == Joint::Foot ? "foot" : "toe"; }

FootPose aligned_end(const StepClip& aligned) { return to_global(aligned.end_local, aligned.support); }

CandidateSet candidate_set(const MotionDatabase& db, const Footprint& support, const Footprint& target,
                           const BehaviourLabel& behaviour, double v_target, const ExtractConfig& cfg) {
  const Family family = behaviour.family();
  std::span<const std::size_t> group = db.group(family, support.side);
  std::vector<std::size_t> pool;
  if (behaviour.is_jump()) {
    for (std::size_t idx : group) {
      if (db.clips()[idx].label.kind() == behaviour.kind()) pool.push_back(idx);
    }
    if (pool.size() < kQuad) pool.clear();
  }
  if (pool.empty()) pool.assign(group.begin(), group.end());
  if (pool.size() < kQuad) {
    throw Error(ErrorCode::NoCandidates, "fewer than 4 " + std::string(to_string(family)) + " clips for " +
                                             std::string(to_string(support.side)) + " support");
  }

  // Rank in the support frame so no clip needs aligning until it is kept.
  const FootPose support_pose = footprint_pose(support, db.toe_offset());
  const FootPose target_local = to_local(footprint_pose(target, db.toe_offset()), support_pose);
  std::vector<Ranked> ranked;
  ranked.reserve(pool.size());
  for (std::size_t idx : pool) {
    const StepClip& c = db.clips()[idx];
    const double dyaw = normalize_angle(c.end_local.yaw - target_local.yaw);
    const double score = plane_distance(c.end_local.foot, target_local.foot) + db.toe_offset() * std::abs(dyaw) +
                         cfg.velocity_weight * std::abs(c.v_root - v_target);
    ranked.push_back({idx, dyaw, score, &c.id});
  }

  std::vector<bool> taken(ranked.size(), false);
  std::vector<std::size_t> chosen;
  auto take_closest = [&](bool below) {
    std::vector<std::size_t> side;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (below ? ranked[i].yaw_offset <= 0.0 : ranked[i].yaw_offset >= 0.0) side.push_back(i);
    }
    std::sort(side.begin(), side.end(), [&](std::size_t a, std::size_t b) {
      const double da = std::abs(ranked[a].yaw_offset);
      const double dbv = std::abs(ranked[b].yaw_offset);
      if (da != dbv) return da < dbv;
      return *ranked[a].id < *ranked[b].id;
    });
    std::size_t added = 0;
    for (std::size_t i : side) {
      if (added == 2) break;
      if (!taken[i]) {
        taken[i] = true;
        chosen.push_back(i);
      }
      ++added;
    }
    return !side.empty();
  };
  const bool has_below = take_closest(true);
  const bool has_above = take_closest(false);

  std::vector<std::size_t> order(ranked.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ranked[a].score != ranked[b].score) return ranked[a].score < ranked[b].score;
    return *ranked[a].id < *ranked[b].id;
  });
  const std::size_t k = std::max(cfg.k, kQuad);
  for (std::size_t i : order) {
    if (chosen.size() >= k) break;
    if (!taken[i]) {
      taken[i] = true;
      chosen.push_back(i);
    }
  }

  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    if (ranked[a].yaw_offset != ranked[b].yaw_offset) return ranked[a].yaw_offset < ranked[b].yaw_offset;
    return *ranked[a].id < *ranked[b].id;
  });
  CandidateSet out;
  out.bracketed = has_below && has_above;
  out.clips.reserve(chosen.size());
  for (std::size_t i : chosen) out.clips.push_back(align_support(db.clips()[ranked[i].db_index], support));
  return out;
}

bool quad_contains(std::span<const Vec3, 4> vertices, const Vec3& target) {
  const auto order = bearing_order(vertices, target);
  std::array<Vec3, 4> sorted;
  for (std::size_t i = 0; i < kQuad; ++i) sorted[i] = vertices[order[i]];
  if (quad_area(sorted) < kMinQuadArea) return false;
  for (const Vec3& v : sorted) {
    if (plane_distance(v, target) < 1e-12) return true;
  }
  std::array<double, 4> b{};
  for (std::size_t i = 0; i < kQuad; ++i) b[i] = bearing(target, sorted[i]);
  double max_gap = b[0] + 2.0 * kPi - b[3];
  for (std::size_t i = 1; i < kQuad; ++i) max_gap = std::max(max_gap, b[i] - b[i - 1]);
  return max_gap <= kPi + 1e-12;
}

JointEnclosure find_enclosure(std::span<const Vec3> points, std::span<const std::string> ids,
                              std::span<const double> yaw_offsets, const Vec3& target, Joint joint) {
  const std::size_t n = points.size();
  if (n < kQuad) throw Error(ErrorCode::NotEnclosed, "fewer than 4 candidates for the " + std::string(to_string(joint)));
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = plane_distance(points[i], target);

  auto sorted_ids = [&](const std::array<std::size_t, 4>& s) {
    std::array<const std::string*, 4> out{};
    for (std::size_t i = 0; i < kQuad; ++i) out[i] = &ids[s[i]];
    std::sort(out.begin(), out.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
    return out;
  };
  auto ids_less = [&](const std::array<std::size_t, 4>& a, const std::array<std::size_t, 4>& b) {
    const auto ia = sorted_ids(a);
    const auto ib = sorted_ids(b);
    for (std::size_t i = 0; i < kQuad; ++i) {
      if (*ia[i] != *ib[i]) return *ia[i] < *ib[i];
    }
    return false;
  };

  auto search = [&](bool bracket) -> std::optional<std::pair<std::array<std::size_t, 4>, double>> {
    std::optional<std::pair<std::array<std::size_t, 4>, double>> best;
    std::array<std::size_t, 4> s{};
    std::array<Vec3, 4> v;
    for (s[0] = 0; s[0] < n; ++s[0]) {
      for (s[1] = s[0] + 1; s[1] < n; ++s[1]) {
        for (s[2] = s[1] + 1; s[2] < n; ++s[2]) {
          for (s[3] = s[2] + 1; s[3] < n; ++s[3]) {
            const double score = dist[s[0]] + dist[s[1]] + dist[s[2]] + dist[s[3]];
            if (best && score > best->second) continue;
            if (bracket) {
              bool lo = false;
              bool hi = false;
              for (std::size_t i : s) {
                lo = lo || yaw_offsets[i] <= 0.0;
                hi = hi || yaw_offsets[i] >= 0.0;
              }
              if (!lo || !hi) continue;
            }
            for (std::size_t i = 0; i < kQuad; ++i) v[i] = points[s[i]];
            if (!quad_contains(std::span<const Vec3, 4>(v), target)) continue;
            if (!best || score < best->second || ids_less(s, best->first)) best = {{s, score}};
          }
        }
      }
    }
    return best;
  };

  auto best = yaw_offsets.empty() ? std::nullopt : search(true);
  if (!best) best = search(false);
  if (!best) {
    throw Error(ErrorCode::NotEnclosed, "no 4 candidates enclose the " + std::string(to_string(joint)) + " target");
  }

  JointEnclosure out;
  std::array<Vec3, 4> v;
  for (std::size_t i = 0; i < kQuad; ++i) v[i] = points[best->first[i]];
  const auto order = bearing_order(std::span<const Vec3, 4>(v), target);
  for (std::size_t i = 0; i < kQuad; ++i) {
    out.indices[i] = best->first[order[i]];
    out.vertices[i] = v[order[i]];
  }
  out.score = 0.0;
  for (const Vec3& p : out.vertices) out.score += plane_distance(p, target);
  return out;
}

EnclosureSelection select_enclosure(const CandidateSet& candidates, const Footprint& target, double toe_offset) {
  const FootPose goal = footprint_pose(target, toe_offset);
  const std::size_t n = candidates.clips.size();
  std::vector<Vec3> feet(n);
  std::vector<Vec3> toes(n);
  std::vector<std::string> ids(n);
  std::vector<double> yaw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FootPose end = aligned_end(candidates.clips[i]);
    feet[i] = end.foot;
    toes[i] = end.toe;
    ids[i] = candidates.clips[i].id;
    yaw[i] = normalize_angle(end.yaw - goal.yaw);
  }
  std::span<const double> offsets = candidates.bracketed ? std::span<const double>(yaw) : std::span<const double>();

  const JointEnclosure foot = find_enclosure(feet, ids, offsets, goal.foot, Joint::Foot);
  const JointEnclosure toe = find_enclosure(toes, ids, offsets, goal.toe, Joint::Toe);

  EnclosureSelection sel;
  for (std::size_t i = 0; i < kQuad; ++i) {
    sel.foot_clips[i] = candidates.clips[foot.indices[i]];
    sel.toe_clips[i] = candidates.clips[toe.indices[i]];
  }
  sel.foot_vertices = foot.vertices;
  sel.toe_vertices = toe.vertices;
  sel.foot_polygon_score = foot.score;
  sel.toe_polygon_score = toe.score;
  sel.foot_target = goal.foot;
  sel.toe_target = goal.toe;
  sel.target_yaw = goal.yaw;
  sel.bracketed = candidates.bracketed;
  return sel;
}

Extraction extract_enclosure(const MotionDatabase& db, const Footprint& support, const Footprint& target,
                             const BehaviourLabel& behaviour, double v_target, const ExtractConfig& cfg) {
  std::vector<std::size_t> ks{cfg.k};
  ks.insert(ks.end(), cfg.retry_k.begin(), cfg.retry_k.end());
  for (std::size_t attempt = 0;; ++attempt) {
    ExtractConfig ex = cfg;
    ex.k = ks[attempt];
    const CandidateSet cands = candidate_set(db, support, target, behaviour, v_target, ex);
    try {
      return {select_enclosure(cands, target, db.toe_offset()), cands.clips.size()};
    } catch (const Error& e) {
      const bool exhausted = attempt + 1 >= ks.size() || cands.clips.size() < ks[attempt];
      if (e.code() != ErrorCode::NotEnclosed || exhausted) throw;
    }
  }
}

Json selection_to_json(const EnclosureSelection& sel) {
  auto polygon = [](const std::array<StepClip, 4>& clips, const std::array<Vec3, 4>& verts, double score) {
    Json vs = Json::array();
    for (std::size_t i = 0; i < kQuad; ++i) {
      vs.push_back(Json{{"clip", clips[i].id}, {"position", vec_to_json(verts[i])}});
    }
    return Json{{"vertices", std::move(vs)}, {"score", score}};
  };
  return Json{{"foot", polygon(sel.foot_clips, sel.foot_vertices, sel.foot_polygon_score)},
              {"toe", polygon(sel.toe_clips, sel.toe_vertices, sel.toe_polygon_score)},
              {"foot_target", vec_to_json(sel.foot_target)},
              {"toe_target", vec_to_json(sel.toe_target)},
              {"target_yaw", sel.target_yaw},
              {"bracketed", sel.bracketed}};
}

}  // namespace footloco
