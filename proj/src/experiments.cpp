#include "dnls/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "dnls/errors.hpp"

namespace dnls {

namespace {

constexpr double kTimeTol = 1e-9;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace

bool SweepRecord::same_values(const SweepRecord& o) const {
  return epsilon == o.epsilon && lemma_defect == o.lemma_defect && theorem_defect == o.theorem_defect &&
         tail_estimate == o.tail_estimate && quadrature_error == o.quadrature_error;
}

std::span<const SystemState> CaseResult::late_snapshots() const {
  const auto& snaps = run.snapshots;
  std::size_t first = 0;
  while (first < snaps.size() && snaps[first].t < 2.0 - kTimeTol) ++first;
  return std::span<const SystemState>(snaps).subspan(first);
}

const SpectralSnapshot& CaseResult::spectrum_at(double t) const {
  for (const auto& s : spectra) {
    if (std::abs(s.t - t) < kTimeTol) return s;
  }
  throw InvalidArgument("no snapshot at t = " + std::to_string(t));
}

SystemState initial_state(const RunConfig& config, double epsilon) {
  const Grid grid = config.grid();
  auto u1 = make_profile(grid, config.u1);
  auto u2 = make_profile(grid, config.u2);
  u1 *= epsilon;
  u2 *= epsilon;
  return SystemState(0.0, std::move(u1), std::move(u2));
}

CaseResult run_case(const RunConfig& config, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be finite and >= 0");
  const auto start = std::chrono::steady_clock::now();
  const Grid grid = config.grid();
  const Schedule schedule(config.schedule_spec());
  if (schedule.t_final() < 2.0) throw InvalidArgument("run_case: t_final must be >= 2");

  EvolveOptions options;
  options.observer_stride = config.observer_stride;
  auto run = evolve(initial_state(config, epsilon), schedule, options);

  std::vector<SpectralSnapshot> spectra;
  spectra.reserve(run.snapshots.size());
  for (const auto& s : run.snapshots) spectra.push_back(modified_amplitudes(s));

  auto psi_hat1 = forward_ft(make_profile(grid, config.u1));
  auto psi_hat2 = forward_ft(make_profile(grid, config.u2));
  auto m_end = m_endpoint(spectra.back());

  CaseResult result{epsilon,          std::move(psi_hat1), std::move(psi_hat2), std::move(run),
                    std::move(spectra), m_end,             m_end,               {},
                    0.0,              {}};
  const auto late = result.late_snapshots();
  result.m_int = m_integral(late);
  result.tail = estimate_tail(late);
  result.threshold = config.threshold > 0.0 ? config.threshold
                                            : default_threshold(result.m_int.quadrature_error, epsilon);

  const auto band = resolved_band(result.psi_hat1, result.psi_hat2, config.band_cut);
  auto& rec = result.record;
  rec.epsilon = epsilon;
  rec.lemma_defect = lemma_defect(result.spectrum_at(2.0), result.psi_hat1, result.psi_hat2, epsilon);
  rec.theorem_defect =
      theorem_defect(with_tail(result.m_end, result.tail), result.psi_hat1, result.psi_hat2, epsilon, band);
  for (std::size_t j = 0; j < band.size(); ++j) {
    if (band[j]) rec.tail_estimate = std::max(rec.tail_estimate, std::abs(result.tail.values[j]));
  }
  rec.quadrature_error = result.m_int.quadrature_error;
  rec.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::array<double, 2> lemma_defect(const SpectralSnapshot& snapshot, const ComplexField& psi_hat1,
                                   const ComplexField& psi_hat2, double epsilon) {
  if (std::abs(snapshot.t - 2.0) > kTimeTol) {
    throw InvalidArgument("lemma_defect: snapshot must be at t = 2, got t = " + std::to_string(snapshot.t));
  }
  std::array<double, 2> out{0.0, 0.0};
  for (std::size_t j = 0; j < psi_hat1.size(); ++j) {
    out[0] = std::max(out[0], std::abs(snapshot.alpha1[j] - epsilon * psi_hat1[j]));
    out[1] = std::max(out[1], std::abs(snapshot.alpha2[j] - epsilon * psi_hat2[j]));
  }
  return out;
}

std::vector<bool> resolved_band(const ComplexField& psi_hat1, const ComplexField& psi_hat2, double cut) {
  std::vector<bool> band(psi_hat1.size());
  for (std::size_t j = 0; j < band.size(); ++j) band[j] = std::abs(psi_hat1[j]) + std::abs(psi_hat2[j]) > cut;
  return band;
}

double theorem_defect(const MProfile& m, const ComplexField& psi_hat1, const ComplexField& psi_hat2,
                      double epsilon, const std::vector<bool>& band) {
  const double e2 = epsilon * epsilon;
  double worst = 0.0;
  for (std::size_t j = 0; j < m.values.size(); ++j) {
    if (!band.empty() && !band[j]) continue;
    const double leading = e2 * (std::norm(psi_hat1[j]) - std::norm(psi_hat2[j]));
    worst = std::max(worst, std::abs(m.values[j] - leading));
  }
  return worst;
}

MProfile with_tail(const MProfile& m, const TailEstimate& tail) {
  MProfile out = m;
  if (tail.values.size() != m.values.size()) return out;
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += tail.values[j];
  return out;
}

OrderFit fit_order(std::span<const double> epsilons, std::span<const double> defects) {
  if (epsilons.size() != defects.size()) throw InvalidArgument("fit_order: size mismatch");
  if (epsilons.size() < 4) throw InvalidArgument("fit_order: need at least 4 records");
  std::vector<double> sorted(epsilons.begin(), epsilons.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("fit_order: epsilon values must be distinct");
  }
  if (!(sorted.front() > 0.0)) throw InvalidArgument("fit_order: epsilon values must be positive");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(defects[i] > 0.0) || !std::isfinite(defects[i])) {
      throw InvalidArgument("fit_order: defects must be positive and finite");
    }
    lx.push_back(std::log(epsilons[i]));
    ly.push_back(std::log(defects[i]));
  }
  const auto fit = least_squares(lx, ly);
  return OrderFit{fit.slope, fit.intercept, fit.rms};
}

std::vector<CaseResult> run_cases(const RunConfig& config, unsigned max_workers) {
  const std::size_t jobs = config.epsilons.size();
  std::vector<std::optional<CaseResult>> slots(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        slots[i].emplace(run_case(config, config.epsilons[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned workers = max_workers != 0 ? max_workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<CaseResult> out;
  out.reserve(jobs);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

SweepResult sweep(const RunConfig& config, unsigned max_workers) {
  std::vector<SweepRecord> records;
  for (auto& c : run_cases(config, max_workers)) records.push_back(c.record);
  const std::size_t jobs = records.size();

  SweepResult out;
  out.records = std::move(records);
  if (jobs >= 4) {
    std::vector<double> eps, d1, d2, dt;
    for (const auto& r : out.records) {
      eps.push_back(r.epsilon);
      d1.push_back(r.lemma_defect[0]);
      d2.push_back(r.lemma_defect[1]);
      dt.push_back(r.theorem_defect);
    }
    out.lemma1 = fit_order(eps, d1);
    out.lemma2 = fit_order(eps, d2);
    out.theorem = fit_order(eps, dt);
  }
  return out;
}

AprioriReport apriori_diagnostics(std::span<const ObserverRecord> records, double epsilon) {
  AprioriReport out;
  if (!(epsilon > 0.0)) return out;
  std::vector<double> lx, ly;
  for (const auto& r : records) {
    const double scaled = r.sup_norm * std::sqrt(1.0 + r.t) / epsilon;
    if (scaled > out.c_inf) {
      out.c_inf = scaled;
      out.t_at_max = r.t;
    }
    const double weighted = std::sqrt(r.mass1 + r.mass2) + r.j_norm;
    if (r.t >= 10.0 && weighted > 0.0) {
      lx.push_back(std::log1p(r.t));
      ly.push_back(std::log(weighted));
    }
  }
  if (lx.size() >= 2 && lx.back() > lx.front()) out.growth_exponent = least_squares(lx, ly).slope;
  return out;
}

ScenarioReport scenario_report(const CaseResult& result, Scenario scenario) {
  ScenarioReport rep;
  rep.scenario = scenario;
  rep.epsilon = result.epsilon;
  rep.t_final = result.m_end.t_final;
  rep.threshold = result.threshold;

  const auto& p1 = result.psi_hat1;
  const auto& p2 = result.psi_hat2;
  const double dxi = p1.grid().dxi();
  const auto band = resolved_band(p1, p2, 1e-8);
  const auto tags = classify(result.m_end, result.threshold);
  double peak1 = 0.0;
  for (std::size_t j = 0; j < p1.size(); ++j) peak1 = std::max(peak1, std::norm(p1[j]));

  std::array<double, 2> dominant{0.0, 0.0};
  rep.m_positive_on_band = peak1 > 0.0;
  for (std::size_t j = 0; j < tags.size(); ++j) {
    if (band[j]) ++rep.tag_counts[static_cast<std::size_t>(tags[j])];
    const double a = std::norm(p1[j]);
    const double b = std::norm(p2[j]);
    if (a > b) dominant[0] += a;
    if (b > a) dominant[1] += b;
    if (a > 1e-3 * peak1 && !(result.m_end.values[j] > result.threshold)) rep.m_positive_on_band = false;
    rep.max_abs_m = std::max(rep.max_abs_m, std::abs(result.m_end.values[j]));
  }
  for (int c = 0; c < 2; ++c) rep.dominant_band_norm[c] = result.epsilon * std::sqrt(dominant[c] * dxi);

  const auto& fin = result.spectra.back();
  rep.alpha_norm_final = {l2_norm(fin.alpha1), l2_norm(fin.alpha2)};
  const auto& snaps = result.run.snapshots;
  const double m1_0 = mass(snaps.front().u1);
  const double m2_0 = mass(snaps.front().u2);
  rep.mass_ratio = {m1_0 > 0.0 ? mass(snaps.back().u1) / m1_0 : 0.0,
                    m2_0 > 0.0 ? mass(snaps.back().u2) / m2_0 : 0.0};

  rep.alpha_norm_decreasing = {true, true};
  rep.orthogonality_nonincreasing = true;
  const std::array<double, 6>* prev = nullptr;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto& sp = result.spectra[i];
    rep.history.push_back({sp.t, l2_norm(sp.alpha1), l2_norm(sp.alpha2), mass(snaps[i].u1), mass(snaps[i].u2),
                           orthogonality_defect(sp)});
    const auto& row = rep.history.back();
    if (row[0] >= 10.0 - kTimeTol) {
      if (prev != nullptr) {
        if (!(row[1] < (*prev)[1])) rep.alpha_norm_decreasing[0] = false;
        if (!(row[2] < (*prev)[2])) rep.alpha_norm_decreasing[1] = false;
        if (row[5] > (*prev)[5]) rep.orthogonality_nonincreasing = false;
      }
      prev = &row;
    }
  }
  return rep;
}

ScenarioReport corollary_scenario(Scenario scenario) {
  const auto config = scenario_config(scenario);
  return scenario_report(run_case(config, config.epsilons.front()), scenario);
}

}  // namespace dnls
