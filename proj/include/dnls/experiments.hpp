#pragma once

// Reproduction engine: epsilon sweeps for the small-amplitude expansions of
// alpha_j(2, xi) and m(xi), the decay / non-decay scenarios, and the
// a-priori-bound diagnostics.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "dnls/config.hpp"
#include "dnls/dynamics.hpp"
#include "dnls/scattering.hpp"

namespace dnls {

struct SweepRecord {
  double epsilon = 0.0;
  std::array<double, 2> lemma_defect{};  // sup_xi |alpha_j(2) - eps psi_j^|
  double theorem_defect = 0.0;           // sup_band |m + tail - eps^2 Delta|
  double tail_estimate = 0.0;            // sup_band |extrapolated tail|
  double quadrature_error = 0.0;
  double runtime_seconds = 0.0;

  /// Everything except the wall-clock runtime.
  bool same_values(const SweepRecord& other) const;
};

struct OrderFit {
  double slope = 0.0;
  double log_intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual in log space
};

/// Everything one (config, epsilon) run produces.
struct CaseResult {
  double epsilon = 0.0;
  ComplexField psi_hat1;
  ComplexField psi_hat2;
  EvolveResult run;
  std::vector<SpectralSnapshot> spectra;  // one per snapshot
  MProfile m_end;
  MProfile m_int;
  TailEstimate tail;
  double threshold = 0.0;
  SweepRecord record;

  /// Snapshots from t = 2 on.
  std::span<const SystemState> late_snapshots() const;
  const SpectralSnapshot& spectrum_at(double t) const;
};

SystemState initial_state(const RunConfig& config, double epsilon);

CaseResult run_case(const RunConfig& config, double epsilon);

/// Per-component sup_xi |alpha_j(2, xi) - eps psi_j^(xi)|. Throws unless snapshot.t == 2.
std::array<double, 2> lemma_defect(const SpectralSnapshot& snapshot, const ComplexField& psi_hat1,
                                   const ComplexField& psi_hat2, double epsilon);

/// Frequencies where |psi1^| + |psi2^| > cut.
std::vector<bool> resolved_band(const ComplexField& psi_hat1, const ComplexField& psi_hat2, double cut);

/// sup over the band of |m - eps^2 (|psi1^|^2 - |psi2^|^2)|. An empty band means all frequencies.
double theorem_defect(const MProfile& m, const ComplexField& psi_hat1, const ComplexField& psi_hat2,
                      double epsilon, const std::vector<bool>& band = {});

/// m + tail, tagged with m's method.
MProfile with_tail(const MProfile& m, const TailEstimate& tail);

/// Least-squares line through (log eps, log defect). Needs >= 4 distinct positive eps.
OrderFit fit_order(std::span<const double> epsilons, std::span<const double> defects);

struct SweepResult {
  std::vector<SweepRecord> records;
  OrderFit lemma1;
  OrderFit lemma2;
  OrderFit theorem;
};

/// One run per config epsilon on a small work pool; results keep epsilon order.
/// The first failing case's exception is rethrown after all workers finish.
std::vector<CaseResult> run_cases(const RunConfig& config, unsigned max_workers = 0);

/// run_cases reduced to SweepRecords plus the three order fits (fits need >= 4 epsilons).
SweepResult sweep(const RunConfig& config, unsigned max_workers = 0);

struct AprioriReport {
  double c_inf = 0.0;      // max_t sup|u| (1+t)^{1/2} / eps
  double t_at_max = 0.0;
  double growth_exponent = 0.0;  // fitted slope of log(||u|| + ||J u||) against log(1+t), t >= 10
};

AprioriReport apriori_diagnostics(std::span<const ObserverRecord> records, double epsilon);

struct ScenarioReport {
  Scenario scenario;
  double epsilon = 0.0;
  double t_final = 0.0;
  double threshold = 0.0;
  std::array<std::size_t, 3> tag_counts{};  // first, second, both (on the resolved band)
  std::array<double, 2> alpha_norm_final{};
  /// eps * ||psi_j^|| restricted to where |psi_j^| > |psi_other^|.
  std::array<double, 2> dominant_band_norm{};
  std::array<double, 2> mass_ratio{};  // M_j(T) / M_j(0)
  std::array<bool, 2> alpha_norm_decreasing{};  // strictly, over snapshots with T >= 10
  bool orthogonality_nonincreasing = false;   // over snapshots with T >= 10
  /// m > threshold wherever |psi1^|^2 > 1e-3 max |psi1^|^2.
  bool m_positive_on_band = false;
  double max_abs_m = 0.0;

  /// Per-snapshot rows: t, ||alpha1||, ||alpha2||, M1, M2, orthogonality defect.
  std::vector<std::array<double, 6>> history;
};

ScenarioReport scenario_report(const CaseResult& result, Scenario scenario);
ScenarioReport corollary_scenario(Scenario scenario);

}  // namespace dnls
