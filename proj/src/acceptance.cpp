#include "dnls/acceptance.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>

#include "dnls/config.hpp"
#include "dnls/errors.hpp"
#include "dnls/experiments.hpp"

namespace dnls {

namespace {

constexpr const char* kNames[] = {"decoupled case",
                                  "symmetric data",
                                  "mass ledger",
                                  "splitting order",
                                  "endpoint vs integral m",
                                  "rho identity",
                                  "alpha(2) expansion order",
                                  "m expansion order",
                                  "single-survivor scenario",
                                  "separated-packet scenario",
                                  "tail bound shape",
                                  "sup-norm decay"};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Runs shared between several criteria are computed once.
class Lab {
public:
  explicit Lab(unsigned workers) : workers_(workers) {}

  const CaseResult& symmetric() {
    if (!symmetric_) {
      const auto c = scenario_config(Scenario::symmetric);
      symmetric_.emplace(run_case(c, c.epsilons.front()));
    }
    return *symmetric_;
  }

  const std::vector<CaseResult>& generic_sweep() {
    if (!generic_) generic_.emplace(run_cases(scenario_config(Scenario::generic), workers_));
    return *generic_;
  }

  unsigned workers() const { return workers_; }

private:
  unsigned workers_;
  std::optional<CaseResult> symmetric_;
  std::optional<std::vector<CaseResult>> generic_;
};

CriterionResult decoupled_case(Lab&) {
  CriterionResult r{1, kNames[0], false, ""};
  const auto c = scenario_config(Scenario::decoupled);
  const double eps = c.epsilons.front();
  const auto res = run_case(c, eps);

  double u2_max = 0.0, drift = 0.0;
  const double n0 = l2_norm(res.run.snapshots.front().u1);
  for (const auto& s : res.run.snapshots) {
    u2_max = std::max(u2_max, l2_norm(s.u2));
    drift = std::max(drift, std::abs(l2_norm(s.u1) - n0) / n0);
  }
  double m_err = 0.0;
  for (std::size_t j = 0; j < res.m_end.values.size(); ++j) {
    m_err = std::max(m_err, std::abs(res.m_end.values[j] - eps * eps * std::norm(res.psi_hat1[j])));
  }
  r.pass = u2_max == 0.0 && drift <= 1e-10 && m_err <= 1e-10;
  r.detail = fmt("max||u2||=%.3g rel norm drift=%.3g max|m-eps^2|psi1^|^2|=%.3g", u2_max, drift, m_err);
  return r;
}

CriterionResult symmetry(Lab& lab) {
  CriterionResult r{2, kNames[1], false, ""};
  const auto& res = lab.symmetric();
  bool bitwise = true;
  for (const auto& s : res.run.snapshots) bitwise = bitwise && s.u1 == s.u2;
  double max_m = 0.0;
  for (double v : res.m_end.values) max_m = std::max(max_m, std::abs(v));
  bool decreasing = true;
  const auto& snaps = res.run.snapshots;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    decreasing = decreasing && mass(snaps[i].u1) < mass(snaps[i - 1].u1) &&
                 mass(snaps[i].u2) < mass(snaps[i - 1].u2);
  }
  r.pass = bitwise && max_m < res.threshold && decreasing;
  r.detail = fmt("bitwise=%s max|m|=%.3g tau=%.3g masses decreasing=%s", bitwise ? "yes" : "no", max_m,
                 res.threshold, decreasing ? "yes" : "no");
  return r;
}

CriterionResult mass_ledger(Lab&) {
  CriterionResult r{3, kNames[2], false, ""};
  auto c = scenario_config(Scenario::generic);
  c.t_final = 50.0;
  c.extra_snapshots.clear();
  const double eps = 0.2;
  const auto run = evolve(initial_state(c, eps), Schedule(c.schedule_spec()));
  const auto& rec = run.records;
  double dissipated = 0.0;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    dissipated += 0.5 * (rec[i].t - rec[i - 1].t) * (rec[i].dissipation_rate + rec[i - 1].dissipation_rate);
  }
  const double m0 = rec.front().mass1 + rec.front().mass2;
  const double mt = rec.back().mass1 + rec.back().mass2;
  const double rel = std::abs(mt + dissipated - m0) / m0;
  const double increase = run.max_mass_increase;
  r.pass = rel <= 1e-4 && increase <= 1e-10;
  r.detail = fmt("|M(T)+int D - M(0)|/M(0)=%.3g max step increase/M(0)=%.3g", rel, increase);
  return r;
}

CriterionResult splitting_order(Lab&) {
  CriterionResult r{4, kNames[3], false, ""};
  auto c = scenario_config(Scenario::generic);
  c.t_final = 5.0;
  c.dt_growth_start = 0.0;
  c.extra_snapshots.clear();
  const double eps = 0.2;
  auto final_state = [&](double dt) {
    auto cc = c;
    cc.dt = dt;
    return evolve(initial_state(cc, eps), Schedule(cc.schedule_spec())).snapshots.back();
  };
  const auto ref = final_state(0.00125);
  auto error = [&](double dt) {
    const auto s = final_state(dt);
    double sq = 0.0;
    for (std::size_t j = 0; j < s.u1.size(); ++j) {
      sq += std::norm(s.u1[j] - ref.u1[j]) + std::norm(s.u2[j] - ref.u2[j]);
    }
    return std::sqrt(sq * s.u1.grid().dx());
  };
  const double e1 = error(0.02);
  const double e2 = error(0.01);
  const double ratio = e1 / e2;
  r.pass = ratio >= 3.6 && ratio <= 4.4;
  r.detail = fmt("err(0.02)=%.3g err(0.01)=%.3g ratio=%.4f", e1, e2, ratio);
  return r;
}

CriterionResult cross_method(Lab&) {
  CriterionResult r{5, kNames[4], false, ""};
  const auto c = scenario_config(Scenario::B);
  const double eps = 0.1;
  const auto res = run_case(c, eps);
  const auto band = resolved_band(res.psi_hat1, res.psi_hat2, c.band_cut);
  double diff = 0.0;
  for (std::size_t j = 0; j < band.size(); ++j) {
    if (band[j]) diff = std::max(diff, std::abs(res.m_end.values[j] - res.m_int.values[j]));
  }
  r.pass = diff < 1e-2 * eps * eps;
  r.detail = fmt("max_band|m_end-m_int|=%.3g bound=%.3g", diff, 1e-2 * eps * eps);
  return r;
}

CriterionResult rho_identity(Lab&) {
  CriterionResult r{6, kNames[5], false, ""};
  auto c = scenario_config(Scenario::B);
  const double eps = 0.2;
  const double probes[] = {4.0, 16.0, 64.0};
  c.t_final = 64.0 + 1.0;
  const Schedule base(c.schedule_spec());
  std::vector<double> h;
  for (double t : probes) {
    h.push_back(base.step_size_at(t));
    c.extra_snapshots.push_back(t - h.back());
    c.extra_snapshots.push_back(t);
    c.extra_snapshots.push_back(t + h.back());
  }
  const auto run = evolve(initial_state(c, eps), Schedule(c.schedule_spec()));
  auto at = [&](double t) -> const SystemState& {
    for (const auto& s : run.snapshots) {
      if (std::abs(s.t - t) < 1e-9) return s;
    }
    throw SimulationError("missing snapshot");
  };
  double worst = 0.0;
  std::string detail;
  for (std::size_t k = 0; k < 3; ++k) {
    const double t = probes[k];
    const auto lo = modified_amplitudes(at(t - h[k]));
    const auto hi = modified_amplitudes(at(t + h[k]));
    const auto exact = rho(at(t));
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < exact.size(); ++j) {
      const double d_hi = std::norm(hi.alpha1[j]) - std::norm(hi.alpha2[j]);
      const double d_lo = std::norm(lo.alpha1[j]) - std::norm(lo.alpha2[j]);
      const double cd = (d_hi - d_lo) / (2.0 * h[k]);
      err = std::max(err, std::abs(cd - exact[j].real()));
      scale = std::max(scale, std::abs(exact[j].real()));
    }
    const double rel = err / scale;
    worst = std::max(worst, rel);
    detail += fmt("%st=%g: %.3g", k == 0 ? "" : " ", t, rel);
  }
  r.pass = worst <= 1e-3;
  r.detail = "rel err " + detail;
  return r;
}

std::vector<double> sweep_epsilons(const std::vector<CaseResult>& cases) {
  std::vector<double> eps;
  for (const auto& c : cases) eps.push_back(c.epsilon);
  return eps;
}

CriterionResult lemma_order(Lab& lab) {
  CriterionResult r{7, kNames[6], false, ""};
  const auto& cases = lab.generic_sweep();
  const auto eps = sweep_epsilons(cases);
  std::vector<double> d1, d2;
  for (const auto& c : cases) {
    d1.push_back(c.record.lemma_defect[0]);
    d2.push_back(c.record.lemma_defect[1]);
  }
  const auto f1 = fit_order(eps, d1);
  const auto f2 = fit_order(eps, d2);
  auto in = [](double s) { return s >= 2.7 && s <= 3.3; };
  r.pass = in(f1.slope) && in(f2.slope);
  r.detail = fmt("slope1=%.4f slope2=%.4f", f1.slope, f2.slope);
  return r;
}

CriterionResult theorem_order(Lab& lab) {
  CriterionResult r{8, kNames[7], false, ""};
  const auto& cases = lab.generic_sweep();
  const auto eps = sweep_epsilons(cases);
  std::vector<double> d;
  for (const auto& c : cases) d.push_back(c.record.theorem_defect);
  const auto fit = fit_order(eps, d);

  // Smallest epsilon: defect against 0.1 eps^2 max|Delta|.
  const auto smallest = std::min_element(cases.begin(), cases.end(),
                                         [](const auto& a, const auto& b) { return a.epsilon < b.epsilon; });
  double max_delta = 0.0;
  for (std::size_t j = 0; j < smallest->psi_hat1.size(); ++j) {
    max_delta = std::max(max_delta,
                         std::abs(std::norm(smallest->psi_hat1[j]) - std::norm(smallest->psi_hat2[j])));
  }
  const double e = smallest->epsilon;
  const double bound = 0.1 * e * e * max_delta;
  r.pass = fit.slope >= 3.5 && smallest->record.theorem_defect < bound;
  r.detail = fmt("slope=%.4f defect(eps=%g)=%.3g bound=%.3g", fit.slope, e, smallest->record.theorem_defect, bound);
  return r;
}

CriterionResult scenario_b(Lab&) {
  CriterionResult r{9, kNames[8], false, ""};
  const auto rep = corollary_scenario(Scenario::B);
  r.pass = rep.m_positive_on_band && rep.alpha_norm_decreasing[1] && rep.orthogonality_nonincreasing;
  r.detail = fmt("m>tau on band=%s ||alpha2|| decreasing=%s orthogonality non-increasing=%s",
                 rep.m_positive_on_band ? "yes" : "no", rep.alpha_norm_decreasing[1] ? "yes" : "no",
                 rep.orthogonality_nonincreasing ? "yes" : "no");
  return r;
}

CriterionResult scenario_a(Lab&) {
  CriterionResult r{10, kNames[9], false, ""};
  const auto rep = corollary_scenario(Scenario::A);
  const bool both_tags = rep.tag_counts[0] > 0 && rep.tag_counts[1] > 0;
  const bool survive = rep.alpha_norm_final[0] > 0.5 * rep.dominant_band_norm[0] &&
                       rep.alpha_norm_final[1] > 0.5 * rep.dominant_band_norm[1];
  r.pass = both_tags && survive;
  r.detail = fmt("tags first=%zu second=%zu ||alpha||=(%.4g, %.4g) dominant eps||psi^||=(%.4g, %.4g)",
                 rep.tag_counts[0], rep.tag_counts[1], rep.alpha_norm_final[0], rep.alpha_norm_final[1],
                 rep.dominant_band_norm[0], rep.dominant_band_norm[1]);
  return r;
}

// max over T in {50, 100, 200} and the band of |\int_T^{2T} rho| <xi>^2 / eps^4.
double tail_ratio(const CaseResult& c, double band_cut) {
  const auto band = resolved_band(c.psi_hat1, c.psi_hat2, band_cut);
  const auto& xi = c.psi_hat1.grid().xi();
  const double e4 = std::pow(c.epsilon, 4);
  double worst = 0.0;
  for (double t : {50.0, 100.0, 200.0}) {
    const auto& a = c.spectrum_at(t);
    const auto& b = c.spectrum_at(2.0 * t);
    for (std::size_t j = 0; j < band.size(); ++j) {
      if (!band[j]) continue;
      // \int_T^{2T} rho equals the change of |alpha1|^2 - |alpha2|^2.
      const double integral = (std::norm(b.alpha1[j]) - std::norm(b.alpha2[j])) -
                              (std::norm(a.alpha1[j]) - std::norm(a.alpha2[j]));
      worst = std::max(worst, std::abs(integral) * (1.0 + xi[j] * xi[j]) / e4);
    }
  }
  return worst;
}

CriterionResult tail_shape(Lab& lab) {
  CriterionResult r{11, kNames[10], false, ""};
  const auto& cases = lab.generic_sweep();
  const double cut = scenario_config(Scenario::generic).band_cut;
  const CaseResult* fit_case = nullptr;
  for (const auto& c : cases) {
    if (std::abs(c.epsilon - 0.1) < 1e-12) fit_case = &c;
  }
  if (fit_case == nullptr) throw InvalidArgument("tail shape: sweep lacks eps = 0.1");
  const double constant = tail_ratio(*fit_case, cut);
  double slack = 0.0;
  std::string detail = fmt("C=%.4g ratios:", constant);
  for (const auto& c : cases) {
    const double ratio = tail_ratio(c, cut) / constant;
    slack = std::max(slack, ratio);
    detail += fmt(" %g:%.3f", c.epsilon, ratio);
  }
  r.pass = std::isfinite(constant) && constant > 0.0 && slack <= 2.0;
  r.detail = detail;
  return r;
}

CriterionResult sup_decay(Lab& lab) {
  CriterionResult r{12, kNames[11], false, ""};
  const auto& res = lab.symmetric();
  const auto rep = apriori_diagnostics(res.run.records, res.epsilon);
  r.pass = std::isfinite(rep.c_inf) && rep.t_at_max <= 10.0;
  r.detail = fmt("max sup|u|(1+t)^1/2/eps=%.4g at t=%g", rep.c_inf, rep.t_at_max);
  return r;
}

}  // namespace


std::string format_result(const CriterionResult& result) {
  return fmt("[%s] %2d %s: %s", result.pass ? "PASS" : "FAIL", result.id, result.name.c_str(),
             result.detail.c_str());
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  using Check = CriterionResult (*)(Lab&);
  static constexpr Check checks[] = {decoupled_case, symmetry,     mass_ledger,   splitting_order,
                                     cross_method,   rho_identity, lemma_order,   theorem_order,
                                     scenario_b,     scenario_a,   tail_shape,    sup_decay};
  Lab lab(options.max_workers);
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 12; ++id) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
      continue;
    }
    CriterionResult result;
    try {
      result = checks[id - 1](lab);
    } catch (const std::exception& e) {
      result = CriterionResult{id, kNames[id - 1], false, std::string("error: ") + e.what()};
    }
    if (options.on_result) options.on_result(result);
    out.push_back(std::move(result));
  }
  return out;
}

}  // namespace dnls
