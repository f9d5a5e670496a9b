// Kick schedules on the chain: the naive constant-kick stop, the
// nondestructive stop/relaunch sequence, J-sign reversal, and experiment
// timelines built from them.
//
// Timing. Under kick-then-free every schedule entry is one full period
// V(T0) U(C_j). A capture at kick j is taken right after U(C_j) is applied and
// before its free step, so it sees j kicks and j - 1 free periods. For the
// stop/relaunch sequence of 2M + 1 kicks the state after the last kick equals
// the pre-sequence state, and the whole schedule (with its trailing free
// period) equals V(T0) up to a global phase: residual free-step count s = 1.
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "magnon/analysis.hpp"
#include "magnon/chain.hpp"
#include "magnon/linalg.hpp"

namespace magnon {

enum class KickConvention {
  kick_then_free,       ///< V(T0) U(C_j) per entry
  symmetric_half_step,  ///< V(T0/2) U(C_j) V(T0/2) per entry
};

const char* to_string(KickConvention convention);
KickConvention kick_convention_from_string(const std::string& name);

template <class Real = double>
struct KickSchedule {
  std::vector<Real> entries;  ///< C_j, j = 1..L
  Index field_center = 1;     ///< n0
  Real period = 0;            ///< T0
  KickConvention convention = KickConvention::kick_then_free;

  Index length() const { return static_cast<Index>(entries.size()); }

  void validate() const {
    if (entries.empty()) throw ValidationError("schedule: needs at least one kick");
    if (field_center < 1) throw ValidationError("schedule: n0 must be a positive site index");
    if (!(period >= 0)) throw ValidationError("schedule: T0 must be >= 0");
  }
};

template <class Real = double>
struct StoppingParams {
  Real strength = 0;  ///< C
  Index half_length = 1;  ///< M; the sequence has 2M + 1 kicks

  /// C' = C + 4 pi, the equivalent strength of the first-half kicks.
  Real shifted_strength() const { return strength + 4 * pi_v<Real>; }

  /// |2 J T0 C| beyond the classical chaos border 0.97.
  bool beyond_kam_regime(Real two_j_t0) const { return std::abs(two_j_t0 * strength) > Real(0.97); }

  void validate() const {
    if (half_length < 1) throw ValidationError("stopping: M must be >= 1");
  }
};

/// [C/2 + 2 pi] ++ [C] x (M - 1) ++ [2 pi] ++ [-C] x (M - 1) ++ [-C/2]
template <class Real>
std::vector<Real> table1_entries(const StoppingParams<Real>& p) {
  p.validate();
  const Real two_pi = 2 * pi_v<Real>;
  std::vector<Real> e;
  e.reserve(static_cast<std::size_t>(2 * p.half_length + 1));
  e.push_back(p.strength / 2 + two_pi);
  for (Index j = 1; j < p.half_length; ++j) e.push_back(p.strength);
  e.push_back(two_pi);
  for (Index j = 1; j < p.half_length; ++j) e.push_back(-p.strength);
  e.push_back(-p.strength / 2);
  return e;
}

template <class Real>
KickSchedule<Real> table1_schedule(const StoppingParams<Real>& p, const ChainConfig<Real>& cfg) {
  return {table1_entries(p), cfg.field_center, cfg.period, KickConvention::kick_then_free};
}

template <class Real>
KickSchedule<Real> naive_schedule(Real strength, Index count, const ChainConfig<Real>& cfg) {
  if (count < 1) throw ValidationError("naive schedule: count must be >= 1");
  return {std::vector<Real>(static_cast<std::size_t>(count), strength), cfg.field_center,
          cfg.period, KickConvention::kick_then_free};
}

template <class Real = double>
struct ScheduleRun {
  ExcitationState<Real> final_state;
  std::vector<std::pair<Index, ExcitationState<Real>>> captures;  ///< (kick index, state)
  Real max_norm_drift = 0;
};

namespace detail {

template <class Real>
void require_matching_schedule(const KickedChain<Real>& chain, const KickSchedule<Real>& s) {
  s.validate();
  if (s.field_center != chain.config().field_center) {
    throw ValidationError("schedule: n0 differs from the chain's field center");
  }
  if (std::abs(s.period - chain.config().period) > Real(1e-12) * std::max(Real(1), s.period)) {
    throw ValidationError("schedule: T0 differs from the chain's kick period");
  }
}

}  // namespace detail

/// Applies the schedule entry by entry and snapshots the state after the
/// listed kicks (1-based). Throws NumericalAlarm if the norm drifts by more
/// than 1e-9.
template <class Real>
ScheduleRun<Real> run_schedule(const KickedChain<Real>& chain, const ExcitationState<Real>& state,
                               const KickSchedule<Real>& schedule,
                               std::span<const Index> capture_kicks = {}) {
  detail::require_matching_schedule(chain, schedule);
  detail::require_same_size(chain.sites(), state.sites(), "run_schedule");
  for (Index k : capture_kicks) {
    if (k < 1 || k > schedule.length()) throw ValidationError("run_schedule: capture index out of range");
  }
  const bool symmetric = schedule.convention == KickConvention::symmetric_half_step;
  const ComplexMatrix<Real> half = symmetric ? chain.propagator(chain.config().period / 2).matrix()
                                             : ComplexMatrix<Real>();
  const ComplexMatrix<Real>& full = chain.period_matrix();

  ScheduleRun<Real> out{state, {}, 0};
  ComplexVector<Real> psi = state.amplitudes();
  for (Index j = 1; j <= schedule.length(); ++j) {
    const ComplexVector<Real> kick = kick_phases(schedule.entries[std::size_t(j - 1)], chain.config());
    if (symmetric) psi = half * psi;
    psi = kick.cwiseProduct(psi);
    for (Index k : capture_kicks) {
      if (k == j) out.captures.emplace_back(j, ExcitationState<Real>::adopt(psi));
    }
    psi = symmetric ? ComplexVector<Real>(half * psi) : ComplexVector<Real>(full * psi);
    const Real drift = std::abs(psi.norm() - Real(1));
    out.max_norm_drift = std::max(out.max_norm_drift, drift);
    if (drift > Real(1e-9)) {
      throw NumericalAlarm("run_schedule: norm drift " + std::to_string(double(drift)) +
                           " after kick " + std::to_string(j));
    }
  }
  out.final_state = ExcitationState<Real>::adopt(std::move(psi));
  return out;
}

/// Ordered product of every period of the schedule.
template <class Real>
Propagator<Real> sequence_operator(const KickedChain<Real>& chain, const KickSchedule<Real>& schedule) {
  detail::require_matching_schedule(chain, schedule);
  const Index n = chain.sites();
  const bool symmetric = schedule.convention == KickConvention::symmetric_half_step;
  const ComplexMatrix<Real> free =
      symmetric ? chain.propagator(chain.config().period / 2).matrix() : chain.period_matrix();
  ComplexMatrix<Real> product = ComplexMatrix<Real>::Identity(n, n);
  for (Real c : schedule.entries) {
    const ComplexVector<Real> kick = kick_phases(c, chain.config());
    if (symmetric) product = free * product;
    product = kick.asDiagonal() * product;
    product = free * product;
  }
  return Propagator<Real>(std::move(product), PropagatorKind::product);
}

template <class Real = double>
struct SequenceIdentity {
  int residual_steps = 0;  ///< s such that the product matches V(T0)^s
  Real residual = 0;       ///< full-operator, phase aligned
  Real bulk_residual = 0;  ///< same, restricted to `bulk`
  SiteWindow bulk;
};

/// Compares the sequence operator with V(T0)^s, s in {0, 1}, and keeps the
/// better match. The bulk comparison aligns the phase on the bulk block.
template <class Real>
SequenceIdentity<Real> sequence_identity(const KickedChain<Real>& chain,
                                         const KickSchedule<Real>& schedule, SiteWindow bulk) {
  const Propagator<Real> product = sequence_operator(chain, schedule);
  const Index n = chain.sites();
  const Index first = bulk.first - 1;
  const Index count = bulk.last - bulk.first + 1;
  SequenceIdentity<Real> best;
  best.bulk = bulk;
  for (int s = 0; s <= 1; ++s) {
    const ComplexMatrix<Real> reference =
        s == 0 ? ComplexMatrix<Real>(ComplexMatrix<Real>::Identity(n, n)) : chain.period_matrix();
    const Real bulk_res =
        phase_aligned_max_deviation(product.matrix().block(first, first, count, count),
                                    reference.block(first, first, count, count));
    const Real full_res = phase_aligned_max_deviation(product.matrix(), reference);
    if (s == 0 || bulk_res < best.bulk_residual) {
      best.residual_steps = s;
      best.residual = full_res;
      best.bulk_residual = bulk_res;
    }
  }
  return best;
}

/// U(2 pi) V(T0) U(2 pi): V(-T0) in the bulk; the end-site diagonal does not
/// change sign under the staggering, so it is not exact near the chain ends.
template <class Real>
Propagator<Real> reversed_J_step(const KickedChain<Real>& chain) {
  const ComplexVector<Real> stagger = kick_phases(2 * pi_v<Real>, chain.config());
  return Propagator<Real>(stagger.asDiagonal() * chain.period_matrix() * stagger.asDiagonal(),
                          PropagatorKind::product);
}

// ---------------------------------------------------------------------------
// Timelines

struct FreeSegment {
  double duration = 0;  ///< dimensionless 2Jt
};

struct ScheduleSegment {
  KickSchedule<double> schedule;
  std::vector<Index> capture_kicks;
  std::string label;  ///< capture labels are "<label>@<kick>"
};

struct CaptureSegment {
  std::string label;
};

using TimelineSegment = std::variant<FreeSegment, ScheduleSegment, CaptureSegment>;

struct ExperimentTimeline {
  ExcitationState<double> initial;
  std::vector<TimelineSegment> segments;
};

/// Executes the segments in order and records a Capture at every capture
/// point. An empty timeline returns the initial state.
RunRecord run_timeline(const KickedChain<double>& chain, const ExperimentTimeline& timeline,
                       const PacketDetection& detection = {});

}  // namespace magnon
