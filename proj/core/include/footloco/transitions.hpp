#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "footloco/io.hpp"
#include "footloco/patterns.hpp"
#include "footloco/types.hpp"

namespace footloco {

struct ContactEvent {
  Side foot = Side::Left;
  int frame_start = 0;
  int frame_end = 0;  // inclusive
  int step_index = 0;
  friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

inline constexpr double kContactSpeed = 0.15;   // m/s
inline constexpr double kContactHeight = 0.05;  // m
inline constexpr int kMinContactFrames = 3;

// Step indices follow contact start order; simultaneous starts list Left first.
// Heights are measured above `ground` (per frame: left, right) when given, else above y = 0.
std::vector<ContactEvent> detect_contacts(std::span<const Frame> frames, double fps, double v_thresh = kContactSpeed,
                                          double h_thresh = kContactHeight,
                                          std::span<const std::array<double, 2>> ground = {});

struct StepVelocity {
  int step = 0;
  double velocity = 0.0;
  friend bool operator==(const StepVelocity&, const StepVelocity&) = default;
};

struct StepVelocitySeries {
  std::vector<StepVelocity> pairs;
  int anchor = 0;  // position in pairs
};

// Mean root plane speed over the middle half of each inter-contact window.
StepVelocitySeries step_velocities(std::span<const Frame> frames, double fps, std::span<const ContactEvent> contacts);

enum class Characteristic { Max, Min };
std::string_view to_string(Characteristic c);

// Velocity characteristic of a forward pair, nullopt for pairs without a stored graph.
std::optional<Characteristic> table_characteristic(Family from, Family to);

// Position of the extremum in the series; the first occurrence wins. Throws UnknownPair.
int identify_transition(const StepVelocitySeries& series, Family from, Family to);

struct AlignedSeries {
  int first_offset = 0;  // common trimmed window, inclusive
  int last_offset = 0;
  std::vector<std::vector<std::pair<int, double>>> series;  // (offset, velocity) inside the window
};

// Anchors each series at offset 0 and trims to the mean (round half up) extents.
AlignedSeries align_and_trim(std::span<const StepVelocitySeries> series_list);

struct GraphStep {
  int offset = 0;
  double v_mean = 0.0;
  friend bool operator==(const GraphStep&, const GraphStep&) = default;
};

struct TransitionGraph {
  Family from = Family::Walking;
  Family to = Family::Running;
  Characteristic characteristic = Characteristic::Max;
  std::vector<GraphStep> steps;
  int source_count = 0;
  bool inverted = false;
  AlignedSeries sources;

  std::size_t step_count() const { return steps.size(); }
};

TransitionGraph build_graph(const AlignedSeries& aligned, Family from, Family to);

// Step-reversed copy serving the opposite behaviour change.
TransitionGraph invert(const TransitionGraph& g);

struct LabeledSequence {
  std::string id;
  Family from = Family::Walking;
  Family to = Family::Running;
  double fps = 60.0;
  std::vector<Frame> frames;
  std::vector<std::array<double, 2>> ground;  // optional terrain height under each foot
};

Json sequence_to_json(const LabeledSequence& s);
LabeledSequence sequence_from_json(const Json& j);

// Full graph pipeline for one labeled sequence up to the anchored series.
StepVelocitySeries sequence_series(const LabeledSequence& s);

class TransitionGraphSet {
 public:
  void add(TransitionGraph g);
  // Forward graph, else the inversion of the opposite pair, else nullopt.
  std::optional<TransitionGraph> find(Family from, Family to) const;
  const std::map<std::pair<Family, Family>, TransitionGraph>& forward() const { return forward_; }
  std::size_t window(Family from, Family to, std::size_t fallback = 4) const;

 private:
  std::map<std::pair<Family, Family>, TransitionGraph> forward_;
};

TransitionGraphSet build_graph_set(std::span<const LabeledSequence> sequences);

Json graph_to_json(const TransitionGraph& g);
TransitionGraph graph_from_json(const Json& j);
Json graph_set_to_json(const TransitionGraphSet& set);
TransitionGraphSet graph_set_from_json(const Json& j);
std::string graph_set_to_csv(const TransitionGraphSet& set);

inline constexpr std::size_t kDefaultTransitionSteps = 4;

struct Schedule {
  std::vector<double> velocity;  // one per step classification, stance entries included
  std::vector<std::pair<Family, Family>> missing;  // changes served by the linear fallback
};

Schedule schedule_velocities(std::span<const StepClassification> steps, const TransitionGraphSet& graphs,
                             const std::array<double, 4>& base_velocity);

}  // namespace footloco
