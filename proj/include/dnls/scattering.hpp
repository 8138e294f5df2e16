#pragma once

// Modified Fourier amplitudes alpha_j(t, xi) = F[U(-t) u_j(t)](xi) and the
// functional m(xi) whose sign decides which component survives at xi.

#include <span>
#include <utility>
#include <vector>

#include "dnls/dynamics.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

struct SpectralSnapshot {
  double t;
  ComplexField alpha1;
  ComplexField alpha2;
};

enum class MMethod { endpoint, integral };

const char* to_string(MMethod method) noexcept;

struct MProfile {
  Grid grid;
  std::vector<double> values;
  MMethod method;
  double t_anchor = 2.0;
  double t_final = 0.0;
  /// Trapezoid error estimate sup_xi |I_h - I_2h|; zero for the endpoint method.
  double quadrature_error = 0.0;
};

/// Extrapolated remainder \int_T^\infty rho, assuming |rho| ~ t^{-p} past the last snapshot.
struct TailEstimate {
  double exponent = 0.0;
  std::vector<double> values;
};

SpectralSnapshot modified_amplitudes(const SystemState& state);

/// rho(t, xi) = 2 Re[conj(alpha1) R1 - conj(alpha2) R2], real samples on the frequency side.
ComplexField rho(const SystemState& state);

/// |alpha1(2)|^2 - |alpha2(2)|^2 + trapezoid \int_2^T rho over the snapshots.
/// Snapshots before t = 2 are ignored; one must sit at t = 2.
MProfile m_integral(std::span<const SystemState> snapshots);

/// |alpha1(T)|^2 - |alpha2(T)|^2.
MProfile m_endpoint(const SpectralSnapshot& final_snapshot);

/// Tail beyond the last snapshot, fitted on the last decade of rho samples.
TailEstimate estimate_tail(std::span<const SystemState> snapshots);

/// Finite-T stand-ins for the scattering states' Fourier transforms.
std::pair<ComplexField, ComplexField> scattering_state(const SpectralSnapshot& final_snapshot);

/// max_xi |alpha1 alpha2|.
double orthogonality_defect(const SpectralSnapshot& snapshot);

enum class SurvivalTag { first_survives, second_survives, both_vanish };

const char* to_string(SurvivalTag tag) noexcept;

std::vector<SurvivalTag> classify(const MProfile& m, double threshold);

/// max(10 C_quad, 1e-6 eps^2).
double default_threshold(double quadrature_error, double epsilon);

}  // namespace dnls
