#include "magnon/control.hpp"

namespace magnon {

const char* to_string(KickConvention convention) {
  switch (convention) {
    case KickConvention::kick_then_free: return "kick-then-free";
    case KickConvention::symmetric_half_step: return "symmetric-half-step";
  }
  return "unknown";
}

KickConvention kick_convention_from_string(const std::string& name) {
  if (name == "kick-then-free") return KickConvention::kick_then_free;
  if (name == "symmetric-half-step") return KickConvention::symmetric_half_step;
  throw ValidationError("unknown kick convention '" + name + "'");
}

namespace {

Capture make_capture(std::string label, double elapsed, long kick, ExcitationState<double> state,
                     const PacketDetection& detection) {
  Profile profile = probability_profile(state);
  PacketSummary summary = packet_summary(profile, detection);
  return Capture{std::move(label), elapsed, kick, std::move(state), std::move(profile),
                 std::move(summary)};
}

}  // namespace

RunRecord run_timeline(const KickedChain<double>& chain, const ExperimentTimeline& timeline,
                       const PacketDetection& detection) {
  detail::require_same_size(chain.sites(), timeline.initial.sites(), "run_timeline");
  ExcitationState<double> state = timeline.initial;
  double elapsed = 0;
  std::vector<Capture> captures;
  const double step = chain.config().dimensionless_period();

  for (const auto& segment : timeline.segments) {
    if (const auto* free = std::get_if<FreeSegment>(&segment)) {
      if (free->duration < 0) throw ValidationError("timeline: negative free duration");
      state = chain.evolve_dimensionless(state, free->duration);
      elapsed += free->duration;
    } else if (const auto* sched = std::get_if<ScheduleSegment>(&segment)) {
      auto run = run_schedule(chain, state, sched->schedule, std::span<const Index>(sched->capture_kicks));
      const double offset =
          sched->schedule.convention == KickConvention::symmetric_half_step ? 0.5 : 0.0;
      for (auto& [kick, snapshot] : run.captures) {
        const double at = elapsed + (double(kick - 1) + offset) * step;
        captures.push_back(make_capture(sched->label + "@" + std::to_string(kick), at, long(kick),
                                        std::move(snapshot), detection));
      }
      state = std::move(run.final_state);
      elapsed += double(sched->schedule.length()) * step;
    } else {
      const auto& cap = std::get<CaptureSegment>(segment);
      captures.push_back(make_capture(cap.label, elapsed, -1, state, detection));
    }
  }
  return RunRecord{std::move(captures), std::move(state), elapsed};
}

}  // namespace magnon
