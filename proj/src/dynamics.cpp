#include "dnls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "dnls/errors.hpp"

namespace dnls {

SystemState::SystemState(double time, ComplexField first, ComplexField second)
    : t(time), u1(std::move(first)), u2(std::move(second)) {
  if (!(u1.grid() == u2.grid())) throw InvalidArgument("state components live on different grids");
  if (u1.side() != Side::space || u2.side() != Side::space) {
    throw InvalidArgument("state components must be space-side fields");
  }
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("state time must be finite and >= 0");
}

// ---------------------------------------------------------------------------
// Schedule

Schedule::Schedule(const ScheduleSpec& spec) : dt_(spec.dt), growth_tick_(0), final_tick_(0) {
  if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) throw InvalidArgument("dt must be positive");
  if (!(spec.t_final >= 0.0) || !std::isfinite(spec.t_final)) {
    throw InvalidArgument("t_final must be finite and >= 0");
  }
  if (!(spec.snapshot_ratio > 1.0) || !std::isfinite(spec.snapshot_ratio)) {
    throw InvalidArgument("snapshot ratio must be > 1");
  }
  if (spec.growth_start < 0.0 || !std::isfinite(spec.growth_start)) {
    throw InvalidArgument("growth start must be finite and >= 0");
  }
  if (spec.t_final / spec.dt > 1e9) throw InvalidArgument("too many steps for t_final / dt");

  if (spec.growth_start > 0.0) {
    // Even so that the boundaries G 2^k are reachable with steps of 2^{k+1} ticks;
    // >= 40 so that the doubled step never exceeds 0.05 t.
    auto g = static_cast<std::int64_t>(std::llround(spec.growth_start / dt_));
    g += g % 2;
    if (g < 40) {
      throw InvalidArgument("growth start must be at least 40 base steps (dt <= 0.05 t)");
    }
    growth_tick_ = g;
  }

  final_tick_ = std::numeric_limits<std::int64_t>::max();
  final_tick_ = nearest_tick(spec.t_final);

  std::vector<std::int64_t> ticks{0};
  const double t_end = t_final();
  if (t_end >= 2.0) {
    for (double t = 2.0; t <= t_end * (1.0 + 1e-12); t *= spec.snapshot_ratio) {
      ticks.push_back(nearest_tick(t));
    }
  }
  ticks.push_back(final_tick_);
  for (double t : spec.extra_times) {
    if (!std::isfinite(t) || t < 0.0 || t > t_end * (1.0 + 1e-12) + dt_) {
      throw InvalidArgument("extra snapshot time " + std::to_string(t) + " outside [0, t_final]");
    }
    ticks.push_back(nearest_tick(t));
  }
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  snapshot_ticks_ = std::move(ticks);
}

std::int64_t Schedule::step_ticks(std::int64_t tick) const noexcept {
  if (growth_tick_ == 0 || tick < growth_tick_) return 1;
  std::int64_t boundary = growth_tick_;
  std::int64_t step = 2;
  while (tick >= 2 * boundary) {
    boundary *= 2;
    step *= 2;
  }
  return step;
}

std::int64_t Schedule::nearest_tick(double t) const {
  if (!std::isfinite(t)) throw InvalidArgument("non-finite time");
  const double raw = std::max(t, 0.0) / dt_;
  std::int64_t tick = 0;
  if (growth_tick_ == 0 || raw < static_cast<double>(growth_tick_)) {
    tick = std::llround(raw);
  } else {
    std::int64_t boundary = growth_tick_;
    std::int64_t step = 2;
    while (raw >= static_cast<double>(2 * boundary)) {
      boundary *= 2;
      step *= 2;
    }
    tick = boundary + step * std::llround((raw - static_cast<double>(boundary)) / static_cast<double>(step));
  }
  return std::min(tick, final_tick_);
}

double Schedule::step_size_at(double t) const {
  return static_cast<double>(step_ticks(nearest_tick(t))) * dt_;
}

std::vector<double> Schedule::snapshot_times() const {
  std::vector<double> out;
  out.reserve(snapshot_ticks_.size());
  for (auto k : snapshot_ticks_) out.push_back(time_of(k));
  return out;
}

// ---------------------------------------------------------------------------
// Nonlinear flow

namespace {

// New squared modulus of one component. With s = own |u|^2, o = other's, the
// difference c = s - o is conserved and s(t) = s c / (s - o e^{-2 c t}). The
// denominator is rewritten as c - o expm1(-2 c t), whose two terms share a sign.
double evolved_modulus_sq(double s, double o, double dt) {
  if (s == 0.0) return 0.0;
  const double c = s - o;
  if (std::abs(c) < 1e-12 * std::max(s, o)) return s / (1.0 + 2.0 * s * dt);
  return s * c / (c - o * std::expm1(-2.0 * c * dt));
}

inline Complex rescale(Complex u, double old_sq, double new_sq) {
  if (old_sq == 0.0) return Complex{};
  return u * std::sqrt(new_sq / old_sq);
}

void apply_nonlinear(std::span<Complex> u1, std::span<Complex> u2, double dt) {
  for (std::size_t k = 0; k < u1.size(); ++k) {
    const double a = std::norm(u1[k]);
    const double b = std::norm(u2[k]);
    u1[k] = rescale(u1[k], a, evolved_modulus_sq(a, b, dt));
    u2[k] = rescale(u2[k], b, evolved_modulus_sq(b, a, dt));
  }
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

std::pair<Complex, Complex> nonlinear_substep(Complex u1, Complex u2, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("nonlinear_substep: dt must be positive");
  if (!finite(u1) || !finite(u2)) throw InvalidArgument("nonlinear_substep: non-finite input");
  const double a = std::norm(u1);
  const double b = std::norm(u2);
  return {rescale(u1, a, evolved_modulus_sq(a, b, dt)), rescale(u2, b, evolved_modulus_sq(b, a, dt))};
}

SystemState strang_step(const SystemState& state, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("strang_step: dt must be positive");
  auto v1 = free_propagate(state.u1, 0.5 * dt);
  auto v2 = free_propagate(state.u2, 0.5 * dt);
  apply_nonlinear(v1.values(), v2.values(), dt);
  SystemState next(state.t + dt, free_propagate(v1, 0.5 * dt), free_propagate(v2, 0.5 * dt));
  next.u1.require_finite("strang_step");
  next.u2.require_finite("strang_step");
  return next;
}

double mass(const ComplexField& f) {
  const double n = l2_norm(f);
  return n * n;
}

double dissipation_rate(const SystemState& state) {
  double sum = 0.0;
  for (std::size_t k = 0; k < state.u1.size(); ++k) {
    sum += std::norm(state.u1[k]) * std::norm(state.u2[k]);
  }
  return 4.0 * sum * state.grid().dx();
}

ObserverRecord observe(const SystemState& state) {
  const double j1 = j_norm(state.u1, state.t);
  const double j2 = j_norm(state.u2, state.t);
  return ObserverRecord{state.t,
                        mass(state.u1),
                        mass(state.u2),
                        std::max(sup_norm(state.u1), sup_norm(state.u2)),
                        std::sqrt(j1 * j1 + j2 * j2),
                        dissipation_rate(state)};
}

// ---------------------------------------------------------------------------
// Time loop. Components are carried on the frequency side so that the two free
// half steps of consecutive Strang steps are plain multiplications.

namespace {

double spectral_mass(std::span<const Complex> s, double dxi) {
  double sum = 0.0;
  for (const auto& v : s) sum += std::norm(v);
  return sum * dxi;
}

// exp(i coeff dt xi^2) per distinct dt.
class PhaseCache {
public:
  PhaseCache(const Grid& grid, double coeff) : xi_(grid.xi()), coeff_(coeff) {}

  const std::vector<Complex>& get(double dt) {
    auto [it, inserted] = cache_.try_emplace(dt);
    if (inserted) {
      it->second.resize(xi_.size());
      for (std::size_t j = 0; j < xi_.size(); ++j) {
        it->second[j] = std::polar(1.0, coeff_ * dt * xi_[j] * xi_[j]);
      }
    }
    return it->second;
  }

private:
  std::span<const double> xi_;
  double coeff_;
  std::map<double, std::vector<Complex>> cache_;
};

}  // namespace

EvolveResult evolve(const SystemState& initial, const Schedule& schedule,
                    const EvolveOptions& options) {
  if (initial.t != 0.0) throw InvalidArgument("evolve: initial state must be at t = 0");
  initial.u1.require_finite("evolve");
  initial.u2.require_finite("evolve");

  const Grid& grid = initial.grid();
  const std::size_t n = grid.size();
  const double dxi = grid.dxi();

  std::vector<Complex> s1(n), s2(n), w1(n), w2(n);
  detail::forward_transform(grid, initial.u1.values(), s1);
  detail::forward_transform(grid, initial.u2.values(), s2);

  EvolveResult result;
  const double m0 = mass(initial.u1) + mass(initial.u2);
  const double tol = options.mass_tolerance * m0;
  const auto& snaps = schedule.snapshot_ticks();
  std::size_t next_snap = 0;

  // e^{+i t xi^2 / 2}, so that s_j * back_phase is the spectrum of U(-t) u_j.
  // Advanced multiplicatively and recomputed exactly every few hundred steps.
  std::vector<Complex> back_phase(n, Complex{1.0, 0.0});
  double phase_time = 0.0;
  std::vector<Complex> v(n);
  const auto xi = grid.xi();
  const auto x = grid.x();
  const double dx = grid.dx();

  auto x_moment = [&](const std::vector<Complex>& spec) {
    for (std::size_t j = 0; j < n; ++j) v[j] = spec[j] * back_phase[j];
    detail::inverse_transform(grid, v, v);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += x[k] * x[k] * std::norm(v[k]);
    return sum * dx;
  };
  // Record at the current time; w1/w2 must hold the space-side fields.
  auto emit = [&](double t) {
    ObserverRecord rec{t, 0.0, 0.0, 0.0, 0.0, 0.0};
    double sup = 0.0, m1 = 0.0, m2 = 0.0, cross = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double a = std::norm(w1[k]);
      const double b = std::norm(w2[k]);
      m1 += a;
      m2 += b;
      cross += a * b;
      sup = std::max(sup, std::max(a, b));
    }
    rec.mass1 = m1 * dx;
    rec.mass2 = m2 * dx;
    rec.sup_norm = std::sqrt(sup);
    rec.dissipation_rate = 4.0 * cross * dx;
    rec.j_norm = std::sqrt(x_moment(s1) + x_moment(s2));
    result.records.push_back(rec);
    if (options.observer) options.observer(rec);
  };

  std::copy(initial.u1.values().begin(), initial.u1.values().end(), w1.begin());
  std::copy(initial.u2.values().begin(), initial.u2.values().end(), w2.begin());
  if (options.observer_stride > 0) emit(0.0);
  if (next_snap < snaps.size() && snaps[next_snap] == 0) {
    result.snapshots.push_back(initial);
    ++next_snap;
  }

  PhaseCache half_steps(grid, -0.25);
  PhaseCache advance(grid, 0.5);
  int records_since_sync = 0;
  double mass1 = spectral_mass(s1, dxi);
  double mass2 = spectral_mass(s2, dxi);
  std::int64_t tick = 0;
  const std::int64_t final_tick = schedule.final_tick();

  while (tick < final_tick) {
    const std::int64_t step = schedule.step_ticks(tick);
    const double dt = static_cast<double>(step) * schedule.base_dt();
    const auto& half = half_steps.get(dt);

    for (std::size_t j = 0; j < n; ++j) {
      s1[j] *= half[j];
      s2[j] *= half[j];
    }
    detail::inverse_transform(grid, s1, w1);
    detail::inverse_transform(grid, s2, w2);
    apply_nonlinear(w1, w2, dt);
    detail::forward_transform(grid, w1, s1);
    detail::forward_transform(grid, w2, s2);
    for (std::size_t j = 0; j < n; ++j) {
      s1[j] *= half[j];
      s2[j] *= half[j];
    }
    tick += step;
    ++result.steps;
    const double t = schedule.time_of(tick);

    const double new1 = spectral_mass(s1, dxi);
    const double new2 = spectral_mass(s2, dxi);
    if (!std::isfinite(new1) || !std::isfinite(new2)) {
      throw SimulationError("evolve: non-finite field at t = " + std::to_string(t));
    }
    const double growth = std::max(new1 - mass1, new2 - mass2);
    if (m0 > 0.0) result.max_mass_increase = std::max(result.max_mass_increase, growth / m0);
    if (growth > tol && growth > 0.0) {
      throw SimulationError("evolve: mass increased by " + std::to_string(growth) +
                            " in one step at t = " + std::to_string(t));
    }
    mass1 = new1;
    mass2 = new2;

    const bool is_snapshot = next_snap < snaps.size() && snaps[next_snap] == tick;
    const bool is_record =
        options.observer_stride > 0 && (result.steps % options.observer_stride == 0 || is_snapshot);
    if (!is_snapshot && !is_record) continue;

    detail::inverse_transform(grid, s1, w1);
    detail::inverse_transform(grid, s2, w2);
    if (is_record) {
      if (++records_since_sync == 256) {
        for (std::size_t j = 0; j < n; ++j) back_phase[j] = std::polar(1.0, 0.5 * t * xi[j] * xi[j]);
        records_since_sync = 0;
      } else {
        const auto& lag = advance.get(t - phase_time);
        for (std::size_t j = 0; j < n; ++j) back_phase[j] *= lag[j];
      }
      phase_time = t;
      emit(t);
    }
    if (is_snapshot) {
      SystemState s(t, ComplexField(grid, Side::space, w1), ComplexField(grid, Side::space, w2));
      s.u1.require_finite("evolve");
      s.u2.require_finite("evolve");
      result.snapshots.push_back(std::move(s));
      ++next_snap;
    }
  }
  return result;
}

}  // namespace dnls
