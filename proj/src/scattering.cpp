#include "dnls/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dnls/errors.hpp"

namespace dnls {

namespace {

constexpr double kAnchorTime = 2.0;
constexpr double kTimeTol = 1e-9;

// Tail exponents at or below one are not integrable; the estimate then uses this floor.
constexpr double kMinTailExponent = 1.1;

std::vector<double> squared_difference(const SpectralSnapshot& s) {
  std::vector<double> out(s.alpha1.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::norm(s.alpha1[j]) - std::norm(s.alpha2[j]);
  return out;
}

ComplexField back_transform(const ComplexField& f, double t) {
  return forward_ft(free_propagate(f, -t));
}

std::size_t anchor_index(std::span<const SystemState> snapshots) {
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    if (std::abs(snapshots[i].t - kAnchorTime) < kTimeTol) return i;
  }
  throw InvalidArgument("m_integral: no snapshot at the anchor time t = 2");
}

std::vector<double> trapezoid(std::span<const double> times, const std::vector<std::vector<double>>& rho,
                              std::span<const std::size_t> nodes) {
  std::vector<double> out(rho.front().size(), 0.0);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const std::size_t a = nodes[k - 1];
    const std::size_t b = nodes[k];
    const double h = 0.5 * (times[b] - times[a]);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += h * (rho[a][j] + rho[b][j]);
  }
  return out;
}

}  // namespace

const char* to_string(MMethod method) noexcept {
  return method == MMethod::endpoint ? "endpoint" : "integral";
}

const char* to_string(SurvivalTag tag) noexcept {
  switch (tag) {
    case SurvivalTag::first_survives: return "first-survives";
    case SurvivalTag::second_survives: return "second-survives";
    case SurvivalTag::both_vanish: return "both-vanish";
  }
  return "?";
}

SpectralSnapshot modified_amplitudes(const SystemState& state) {
  return SpectralSnapshot{state.t, back_transform(state.u1, state.t), back_transform(state.u2, state.t)};
}

ComplexField rho(const SystemState& state) {
  if (!(state.t > 0.0)) throw InvalidArgument("rho: requires t > 0");
  const Grid& grid = state.grid();
  const std::size_t n = grid.size();

  ComplexField n1(grid, Side::space), n2(grid, Side::space);
  for (std::size_t k = 0; k < n; ++k) {
    n1[k] = std::norm(state.u2[k]) * state.u1[k];
    n2[k] = std::norm(state.u1[k]) * state.u2[k];
  }
  const auto a = modified_amplitudes(state);
  const auto g1 = back_transform(n1, state.t);
  const auto g2 = back_transform(n2, state.t);

  const double inv_t = 1.0 / state.t;
  ComplexField out(grid, Side::frequency);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a1 = a.alpha1[j];
    const Complex a2 = a.alpha2[j];
    const Complex r1 = inv_t * std::norm(a2) * a1 - g1[j];
    const Complex r2 = inv_t * std::norm(a1) * a2 - g2[j];
    out[j] = 2.0 * (std::conj(a1) * r1 - std::conj(a2) * r2).real();
  }
  out.require_finite("rho");
  return out;
}

MProfile m_integral(std::span<const SystemState> snapshots) {
  const std::size_t first = anchor_index(snapshots);
  const auto tail = snapshots.subspan(first);
  if (tail.size() < 3) throw InvalidArgument("m_integral: need at least 3 snapshots from t = 2");

  std::vector<double> times;
  std::vector<std::vector<double>> rho_values;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (i > 0 && !(tail[i].t > tail[i - 1].t)) throw InvalidArgument("m_integral: snapshots not ascending");
    times.push_back(tail[i].t);
    const auto r = rho(tail[i]);
    std::vector<double> re(r.size());
    for (std::size_t j = 0; j < re.size(); ++j) re[j] = r[j].real();
    rho_values.push_back(std::move(re));
  }

  std::vector<std::size_t> fine(times.size());
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = i;
  std::vector<std::size_t> coarse;
  for (std::size_t i = 0; i < fine.size(); i += 2) coarse.push_back(i);
  if (coarse.back() != fine.back()) coarse.push_back(fine.back());

  const auto integral = trapezoid(times, rho_values, fine);
  const auto rough = trapezoid(times, rho_values, coarse);

  MProfile out{tail.front().grid(), squared_difference(modified_amplitudes(tail.front())),
               MMethod::integral, kAnchorTime, times.back(), 0.0};
  double err = 0.0;
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    out.values[j] += integral[j];
    err = std::max(err, std::abs(integral[j] - rough[j]));
  }
  // Richardson estimate for a second-order rule.
  out.quadrature_error = err / 3.0;
  return out;
}

MProfile m_endpoint(const SpectralSnapshot& final_snapshot) {
  if (final_snapshot.t < kAnchorTime - kTimeTol) throw InvalidArgument("m_endpoint: requires T >= 2");
  return MProfile{final_snapshot.alpha1.grid(), squared_difference(final_snapshot), MMethod::endpoint,
                  kAnchorTime, final_snapshot.t, 0.0};
}

TailEstimate estimate_tail(std::span<const SystemState> snapshots) {
  if (snapshots.empty()) throw InvalidArgument("estimate_tail: no snapshots");
  const double t_end = snapshots.back().t;
  TailEstimate out;
  out.values.assign(snapshots.back().grid().size(), 0.0);
  if (!(t_end > 0.0)) return out;

  // log max|rho| against log t over the last decade.
  std::vector<double> lx, ly;
  for (const auto& s : snapshots) {
    if (s.t < std::max(kAnchorTime, 0.1 * t_end) - kTimeTol) continue;
    const auto r = rho(s);
    double peak = 0.0;
    for (const auto& v : r.values()) peak = std::max(peak, std::abs(v.real()));
    if (peak > 0.0) {
      lx.push_back(std::log(s.t));
      ly.push_back(std::log(peak));
    }
  }
  if (lx.size() < 2) return out;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return out;
  out.exponent = -sxy / sxx;

  const double p = std::max(out.exponent, kMinTailExponent);
  const auto last = rho(snapshots.back());
  const double factor = t_end / (p - 1.0);
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] = last[j].real() * factor;
  return out;
}

std::pair<ComplexField, ComplexField> scattering_state(const SpectralSnapshot& final_snapshot) {
  if (final_snapshot.t < kAnchorTime - kTimeTol) throw InvalidArgument("scattering_state: requires T >= 2");
  return {final_snapshot.alpha1, final_snapshot.alpha2};
}

double orthogonality_defect(const SpectralSnapshot& snapshot) {
  double best = 0.0;
  for (std::size_t j = 0; j < snapshot.alpha1.size(); ++j) {
    best = std::max(best, std::abs(snapshot.alpha1[j] * snapshot.alpha2[j]));
  }
  return best;
}

std::vector<SurvivalTag> classify(const MProfile& m, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("classify: threshold must be positive");
  std::vector<SurvivalTag> tags(m.values.size());
  for (std::size_t j = 0; j < tags.size(); ++j) {
    const double v = m.values[j];
    tags[j] = v > threshold    ? SurvivalTag::first_survives
              : v < -threshold ? SurvivalTag::second_survives
                               : SurvivalTag::both_vanish;
  }
  return tags;
}

double default_threshold(double quadrature_error, double epsilon) {
  return std::max({10.0 * quadrature_error, 1e-6 * epsilon * epsilon,
                   std::numeric_limits<double>::min()});
}

}  // namespace dnls
