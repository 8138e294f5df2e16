#pragma once

// Time integration of the dissipative system
//
//   i d_t u1 + 1/2 d_x^2 u1 = -i |u2|^2 u1
//   i d_t u2 + 1/2 d_x^2 u2 = -i |u1|^2 u2
//
// by Strang splitting: exact free half step, exact pointwise nonlinear step,
// exact free half step.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dnls/spectral.hpp"

namespace dnls {

class SystemState {
public:
  SystemState(double t, ComplexField u1, ComplexField u2);

  double t;
  ComplexField u1;
  ComplexField u2;

  const Grid& grid() const noexcept { return u1.grid(); }

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

struct ScheduleSpec {
  double dt = 0.01;
  double t_final = 400.0;
  double snapshot_ratio = 1.189207115002721;  // 2^{1/4}
  /// Time after which the step doubles at growth_start * 2^k; 0 keeps dt fixed.
  double growth_start = 10.0;
  /// Additional snapshot times, rounded to the step lattice.
  std::vector<double> extra_times;
};

/// Step lattice plus snapshot times. Time is counted in integer ticks of the
/// base step so that every snapshot lands exactly on a step boundary.
class Schedule {
public:
  explicit Schedule(const ScheduleSpec& spec);

  double base_dt() const noexcept { return dt_; }
  double t_final() const noexcept { return time_of(final_tick_); }
  double time_of(std::int64_t tick) const noexcept { return static_cast<double>(tick) * dt_; }

  /// Size in ticks of the step that starts at `tick`.
  std::int64_t step_ticks(std::int64_t tick) const noexcept;
  /// Size of the step starting at the lattice point nearest to t.
  double step_size_at(double t) const;
  /// Nearest lattice point to t, clamped to [0, t_final].
  std::int64_t nearest_tick(double t) const;

  std::int64_t final_tick() const noexcept { return final_tick_; }
  const std::vector<std::int64_t>& snapshot_ticks() const noexcept { return snapshot_ticks_; }
  std::vector<double> snapshot_times() const;

private:
  double dt_;
  std::int64_t growth_tick_;  // 0 disables growth
  std::int64_t final_tick_;
  std::vector<std::int64_t> snapshot_ticks_;
};

/// Exact flow of d_t u1 = -|u2|^2 u1, d_t u2 = -|u1|^2 u2 over dt at one point.
std::pair<Complex, Complex> nonlinear_substep(Complex u1, Complex u2, double dt);

SystemState strang_step(const SystemState& state, double dt);

double mass(const ComplexField& f);
/// -d/dt (M1 + M2) = 4 \int |u1|^2 |u2|^2 dx.
double dissipation_rate(const SystemState& state);

struct ObserverRecord {
  double t;
  double mass1;
  double mass2;
  double sup_norm;  // max over both components
  double j_norm;    // sqrt(||J u1||^2 + ||J u2||^2)
  double dissipation_rate;
};

ObserverRecord observe(const SystemState& state);

struct EvolveOptions {
  /// Called with every record as it is produced.
  std::function<void(const ObserverRecord&)> observer;
  /// Record every k-th step (snapshots are always recorded). 0 disables records.
  int observer_stride = 1;
  /// Abort if a component's mass grows by more than this fraction of M(0) in one step.
  double mass_tolerance = 1e-10;
};

struct EvolveResult {
  std::vector<SystemState> snapshots;
  std::vector<ObserverRecord> records;
  /// Largest single-step mass increase seen, relative to the initial total mass.
  double max_mass_increase = 0.0;
  std::int64_t steps = 0;
};

EvolveResult evolve(const SystemState& initial, const Schedule& schedule,
                    const EvolveOptions& options = {});

}  // namespace dnls
