#include "footloco/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace footloco {
namespace {

// Measured velocities closer than this are ties.
constexpr double kTieTolerance = 1e-9;

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

std::optional<Characteristic> pair_characteristic(Family from, Family to) {
  if (auto c = table_characteristic(from, to)) return c;
  return table_characteristic(to, from);
}

}  // namespace

std::vector<ContactEvent> detect_contacts(std::span<const Frame> frames, double fps, double v_thresh,
                                          double h_thresh, std::span<const std::array<double, 2>> ground) {
  const std::size_t n = frames.size();
  if (n < 2) throw Error(ErrorCode::InvalidInput, "contact detection needs at least two frames");
  if (!ground.empty() && ground.size() != n) {
    throw Error(ErrorCode::InvalidInput, "ground heights must match the frame count");
  }
  std::vector<ContactEvent> events;
  for (Side side : {Side::Left, Side::Right}) {
    const std::size_t g = side == Side::Left ? 0 : 1;
    auto in_contact = [&](std::size_t f) {
      const Vec3& p = frames[f].foot(side).foot;
      double speed = std::numeric_limits<double>::infinity();
      if (f > 0) speed = std::min(speed, (p - frames[f - 1].foot(side).foot).norm() * fps);
      if (f + 1 < n) speed = std::min(speed, (frames[f + 1].foot(side).foot - p).norm() * fps);
      const double height = p.y() - (ground.empty() ? 0.0 : ground[f][g]);
      return speed < v_thresh && height < h_thresh;
    };
    std::size_t f = 0;
    while (f < n) {
      if (!in_contact(f)) {
        ++f;
        continue;
      }
      std::size_t end = f;
      while (end + 1 < n && in_contact(end + 1)) ++end;
      if (end - f + 1 >= static_cast<std::size_t>(kMinContactFrames)) {
        events.push_back({side, static_cast<int>(f), static_cast<int>(end), 0});
      }
      f = end + 1;
    }
  }
  std::stable_sort(events.begin(), events.end(), [](const ContactEvent& a, const ContactEvent& b) {
    if (a.frame_start != b.frame_start) return a.frame_start < b.frame_start;
    return a.foot == Side::Left && b.foot == Side::Right;
  });
  for (std::size_t i = 0; i < events.size(); ++i) events[i].step_index = static_cast<int>(i);
  return events;
}

StepVelocitySeries step_velocities(std::span<const Frame> frames, double fps, std::span<const ContactEvent> contacts) {
  StepVelocitySeries out;
  for (std::size_t k = 0; k + 1 < contacts.size(); ++k) {
    const int a = contacts[k].frame_start;
    const int b = contacts[k + 1].frame_start;
    const int lo = a + static_cast<int>(std::lround(0.25 * (b - a)));
    const int hi = a + static_cast<int>(std::lround(0.75 * (b - a)));
    if (hi <= lo || hi >= static_cast<int>(frames.size())) continue;
    double sum = 0.0;
    for (int f = lo; f < hi; ++f) {
      sum += plane_distance(frames[static_cast<std::size_t>(f + 1)].root_pos,
                            frames[static_cast<std::size_t>(f)].root_pos) * fps;
    }
    out.pairs.push_back({contacts[k].step_index, sum / (hi - lo)});
  }
  return out;
}

std::string_view to_string(Characteristic c) { return c == Characteristic::Max ? "max" : "min"; }

std::optional<Characteristic> table_characteristic(Family from, Family to) {
  using F = Family;
  if (from == F::Walking && (to == F::Running || to == F::Jumping)) return Characteristic::Max;
  if (from == F::Running && to == F::Jumping) return Characteristic::Max;
  if ((from == F::Walking || from == F::Running) && to == F::StairStep) return Characteristic::Min;
  return std::nullopt;
}

int identify_transition(const StepVelocitySeries& series, Family from, Family to) {
  const auto c = pair_characteristic(from, to);
  if (!c) {
    throw Error(ErrorCode::UnknownPair, "no velocity characteristic for " + std::string(to_string(from)) + " -> " +
                                            std::string(to_string(to)));
  }
  if (series.pairs.empty()) throw Error(ErrorCode::InvalidInput, "empty velocity series");
  std::size_t best = 0;
  for (std::size_t i = 1; i < series.pairs.size(); ++i) {
    const double v = series.pairs[i].velocity;
    const double b = series.pairs[best].velocity;
    if (*c == Characteristic::Max ? v > b + kTieTolerance : v < b - kTieTolerance) best = i;
  }
  return static_cast<int>(best);
}

AlignedSeries align_and_trim(std::span<const StepVelocitySeries> series_list) {
  AlignedSeries out;
  if (series_list.empty()) return out;
  double before = 0.0;
  double after = 0.0;
  for (const StepVelocitySeries& s : series_list) {
    before += s.anchor;
    after += static_cast<double>(s.pairs.size()) - 1.0 - s.anchor;
  }
  const double n = static_cast<double>(series_list.size());
  out.first_offset = -round_half_up(before / n);
  out.last_offset = round_half_up(after / n);
  for (const StepVelocitySeries& s : series_list) {
    std::vector<std::pair<int, double>> kept;
    for (std::size_t i = 0; i < s.pairs.size(); ++i) {
      const int offset = static_cast<int>(i) - s.anchor;
      if (offset >= out.first_offset && offset <= out.last_offset) kept.emplace_back(offset, s.pairs[i].velocity);
    }
    out.series.push_back(std::move(kept));
  }
  return out;
}

TransitionGraph build_graph(const AlignedSeries& aligned, Family from, Family to) {
  TransitionGraph g;
  g.from = from;
  g.to = to;
  g.characteristic = pair_characteristic(from, to).value_or(Characteristic::Max);
  g.source_count = static_cast<int>(aligned.series.size());
  g.sources = aligned;
  for (int o = aligned.first_offset; o <= aligned.last_offset; ++o) {
    double sum = 0.0;
    int count = 0;
    for (const auto& s : aligned.series) {
      for (const auto& [offset, v] : s) {
        if (offset == o) {
          sum += v;
          ++count;
        }
      }
    }
    if (count > 0) g.steps.push_back({o, sum / count});
  }
  return g;
}

TransitionGraph invert(const TransitionGraph& g) {
  TransitionGraph r = g;
  std::swap(r.from, r.to);
  r.inverted = !g.inverted;
  r.steps.clear();
  for (auto it = g.steps.rbegin(); it != g.steps.rend(); ++it) r.steps.push_back({-it->offset, it->v_mean});
  r.sources.first_offset = -g.sources.last_offset;
  r.sources.last_offset = -g.sources.first_offset;
  for (auto& s : r.sources.series) {
    std::reverse(s.begin(), s.end());
    for (auto& [offset, v] : s) offset = -offset;
  }
  return r;
}

Json sequence_to_json(const LabeledSequence& s) {
  Json frames = Json::array();
  for (const Frame& f : s.frames) frames.push_back(frame_to_json(f));
  Json j{{"id", s.id},
         {"from", std::string(to_string(s.from))},
         {"to", std::string(to_string(s.to))},
         {"fps", s.fps},
         {"frames", std::move(frames)}};
  if (!s.ground.empty()) {
    Json g = Json::array();
    for (const auto& h : s.ground) g.push_back(Json::array({h[0], h[1]}));
    j["ground"] = std::move(g);
  }
  return j;
}

LabeledSequence sequence_from_json(const Json& j) {
  LabeledSequence s;
  s.id = j.value("id", std::string());
  s.from = family_from_string(j.at("from").get<std::string>());
  s.to = family_from_string(j.at("to").get<std::string>());
  s.fps = j.value("fps", 60.0);
  for (const Json& f : j.at("frames")) s.frames.push_back(frame_from_json(f));
  if (j.contains("ground")) {
    for (const Json& g : j.at("ground")) s.ground.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
  }
  return s;
}

StepVelocitySeries sequence_series(const LabeledSequence& s) {
  const auto contacts = detect_contacts(s.frames, s.fps, kContactSpeed, kContactHeight, s.ground);
  StepVelocitySeries series = step_velocities(s.frames, s.fps, contacts);
  if (series.pairs.empty()) {
    throw Error(ErrorCode::InvalidInput, "sequence '" + s.id + "' has fewer than two contacts");
  }
  series.anchor = identify_transition(series, s.from, s.to);
  return series;
}

void TransitionGraphSet::add(TransitionGraph g) {
  if (g.inverted) g = invert(g);
  forward_[{g.from, g.to}] = std::move(g);
}

std::optional<TransitionGraph> TransitionGraphSet::find(Family from, Family to) const {
  if (auto it = forward_.find({from, to}); it != forward_.end()) return it->second;
  if (auto it = forward_.find({to, from}); it != forward_.end()) return invert(it->second);
  return std::nullopt;
}

std::size_t TransitionGraphSet::window(Family from, Family to, std::size_t fallback) const {
  const auto g = find(from, to);
  return g && !g->steps.empty() ? g->steps.size() : fallback;
}

TransitionGraphSet build_graph_set(std::span<const LabeledSequence> sequences) {
  std::map<std::pair<Family, Family>, std::vector<StepVelocitySeries>> grouped;
  for (const LabeledSequence& s : sequences) {
    if (!table_characteristic(s.from, s.to)) {
      throw Error(ErrorCode::UnknownPair, "sequence '" + s.id + "' is not a forward transition");
    }
    grouped[{s.from, s.to}].push_back(sequence_series(s));
  }
  TransitionGraphSet set;
  for (const auto& [pair, series] : grouped) set.add(build_graph(align_and_trim(series), pair.first, pair.second));
  return set;
}

Json graph_to_json(const TransitionGraph& g) {
  Json steps = Json::array();
  for (const GraphStep& s : g.steps) steps.push_back(Json{{"offset", s.offset}, {"v_mean", s.v_mean}});
  Json series = Json::array();
  for (const auto& s : g.sources.series) {
    Json one = Json::array();
    for (const auto& [o, v] : s) one.push_back(Json::array({o, v}));
    series.push_back(std::move(one));
  }
  return Json{{"from", std::string(to_string(g.from))},
              {"to", std::string(to_string(g.to))},
              {"characteristic", std::string(to_string(g.characteristic))},
              {"inverted", g.inverted},
              {"source_count", g.source_count},
              {"steps", std::move(steps)},
              {"sources",
               {{"first_offset", g.sources.first_offset},
                {"last_offset", g.sources.last_offset},
                {"series", std::move(series)}}}};
}

TransitionGraph graph_from_json(const Json& j) {
  TransitionGraph g;
  g.from = family_from_string(j.at("from").get<std::string>());
  g.to = family_from_string(j.at("to").get<std::string>());
  g.characteristic = j.at("characteristic").get<std::string>() == "min" ? Characteristic::Min : Characteristic::Max;
  g.inverted = j.value("inverted", false);
  g.source_count = j.value("source_count", 0);
  for (const Json& s : j.at("steps")) g.steps.push_back({s.at("offset").get<int>(), s.at("v_mean").get<double>()});
  if (j.contains("sources")) {
    const Json& src = j.at("sources");
    g.sources.first_offset = src.value("first_offset", 0);
    g.sources.last_offset = src.value("last_offset", 0);
    for (const Json& s : src.at("series")) {
      std::vector<std::pair<int, double>> one;
      for (const Json& p : s) one.emplace_back(p.at(0).get<int>(), p.at(1).get<double>());
      g.sources.series.push_back(std::move(one));
    }
  }
  return g;
}

Json graph_set_to_json(const TransitionGraphSet& set) {
  Json forward = Json::array();
  Json inverse = Json::array();
  for (const auto& [pair, g] : set.forward()) {
    forward.push_back(graph_to_json(g));
    if (!set.forward().contains({pair.second, pair.first})) inverse.push_back(graph_to_json(invert(g)));
  }
  return Json{{"graphs", std::move(forward)}, {"inverses", std::move(inverse)}};
}

TransitionGraphSet graph_set_from_json(const Json& j) {
  TransitionGraphSet set;
  for (const Json& g : j.at("graphs")) set.add(graph_from_json(g));
  return set;
}

std::string graph_set_to_csv(const TransitionGraphSet& set) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "from,to,inverted,offset,v_mean\n";
  auto rows = [&](const TransitionGraph& g) {
    for (const GraphStep& s : g.steps) {
      os << to_string(g.from) << ',' << to_string(g.to) << ',' << (g.inverted ? 1 : 0) << ',' << s.offset << ','
         << s.v_mean << '\n';
    }
  };
  for (const auto& [pair, g] : set.forward()) rows(g);
  for (const auto& [pair, g] : set.forward()) {
    if (!set.forward().contains({pair.second, pair.first})) rows(invert(g));
  }
  return os.str();
}

Schedule schedule_velocities(std::span<const StepClassification> steps, const TransitionGraphSet& graphs,
                             const std::array<double, 4>& base_velocity) {
  Schedule out;
  out.velocity.assign(steps.size(), 0.0);
  std::vector<std::size_t> moving;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!steps[i].flags.stance) moving.push_back(i);
  }
  auto base = [&](Family f) { return base_velocity[static_cast<std::size_t>(f)]; };
  const Family first = moving.empty() ? Family::Walking : steps[moving.front()].label.family();
  for (std::size_t i = 0; i < steps.size(); ++i) out.velocity[i] = base(steps[i].flags.stance ? first : steps[i].label.family());

  // Later changes overwrite earlier windows.
  for (std::size_t k = 1; k < moving.size(); ++k) {
    const Family a = steps[moving[k - 1]].label.family();
    const Family b = steps[moving[k]].label.family();
    if (a == b) continue;
    std::vector<double> ramp;
    if (const auto g = graphs.find(a, b); g && !g->steps.empty()) {
      for (const GraphStep& s : g->steps) ramp.push_back(s.v_mean);
    } else {
      out.missing.emplace_back(a, b);
      for (std::size_t t = 0; t < kDefaultTransitionSteps; ++t) {
        const double u = static_cast<double>(t + 1) / static_cast<double>(kDefaultTransitionSteps);
        ramp.push_back(base(a) + u * (base(b) - base(a)));
      }
    }
    const std::size_t n = ramp.size();
    for (std::size_t t = 0; t < n; ++t) {
      const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n) + 1 +
                                 static_cast<std::ptrdiff_t>(t);
      if (pos >= 0) out.velocity[moving[static_cast<std::size_t>(pos)]] = ramp[t];
    }
  }
  return out;
}

}  // namespace footloco
