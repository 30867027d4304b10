#pragma once

// Peripheral-spectrum classification of channels.
//
// A channel is mixing iff its only peripheral eigenvalue is 1 and that
// eigenvalue is simple; it is ergodic iff the eigenvalue-1 cluster is simple.

#include <optional>
#include <string>
#include <vector>

#include "channellab/channel.hpp"

namespace channellab {

enum class Verdict { mixing, ergodic_not_mixing, not_ergodic };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct SpectralReport {
  int dim = 0;
  std::vector<Complex> spectrum;    // sorted by descending modulus, then angle in [0, 2 pi)
  std::vector<Complex> peripheral;  // |lambda| > 1 - tol::peripheral
  double kappa = 0.0;               // largest non-peripheral modulus, 0 if none
  int eigenvalue_one_multiplicity = 0;
  Verdict verdict = Verdict::not_ergodic;

  /// The unique fixed point when the eigenvalue-1 cluster is simple.
  std::optional<DensityMatrix> fixed_point;
  /// Hermitized basis of the fixed-point space (one entry per eigenvalue-1 direction).
  std::vector<ComplexMatrix> fixed_point_candidates;
  std::optional<double> fixed_point_purity;

  double eigensolver_residual = 0.0;
  /// Set when eigenvalues sit just outside the cluster or peripheral tolerance,
  /// where the verdict is sensitive to the tolerance choice.
  bool near_tolerance_boundary = false;
  std::vector<std::string> warnings;
};

struct AnalyzeOptions {
  double peripheral_tol = tol::peripheral;
  double cluster_tol = tol::cluster;
};

SpectralReport analyze(const Superoperator& s, const AnalyzeOptions& options = {});
SpectralReport analyze(const KrausChannel& c, const AnalyzeOptions& options = {});

/// cN * n^dim * kappa^n. Throws PreconditionError unless report.verdict is mixing.
double convergence_bound(const SpectralReport& report, long long n, double c_n);

/// cN such that the bound template matches `distance_at_one` at n = 1.
/// Returns +inf when kappa = 0 and the measured distance is positive.
double calibrate_bound_constant(const SpectralReport& report, double distance_at_one);

struct ConvergenceEstimate {
  double empirical_rate = 0.0;  // exp(slope of log distance vs n)
  double kappa = 0.0;
  int n_min = 0;
  int n_max = 0;
  bool window_shrunk = false;
};

/// Default fit window [max(5, 2 dim), 50].
std::pair<int, int> default_rate_window(int dim);

ConvergenceEstimate estimate_rate(const KrausChannel& c, const DensityMatrix& rho0, int n_min,
                                  int n_max);

struct ShortcutResult {
  Verdict implied = Verdict::mixing;
  bool consistent = true;  // spectral verdict agrees with the implied one
};

/// A pure unique fixed point forces mixing. Returns nullopt when the fixed point is
/// not pure. Throws PreconditionError for non-ergodic reports.
std::optional<ShortcutResult> purely_ergodic_shortcut(const SpectralReport& report);

struct PeripheralEigenvector {
  Complex eigenvalue;
  ComplexMatrix theta;  // devectorized eigenvector, Frobenius-normalized
  double normality_defect = 0.0;  // ||Theta Theta^dag - Theta^dag Theta||_max
};

/// Eigenoperators for every peripheral eigenvalue cluster. Requires an ergodic report.
std::vector<PeripheralEigenvector> peripheral_eigenvectors(const KrausChannel& c,
                                                           const SpectralReport& report);
std::vector<PeripheralEigenvector> peripheral_normality_check(const KrausChannel& c,
                                                              const SpectralReport& report);

struct PolarFixedPoints {
  DensityMatrix rho;    // sqrt(Theta Theta^dag) / g
  DensityMatrix sigma;  // sqrt(Theta^dag Theta) / g
  double rho_residual = 0.0;    // ||tau(rho) - rho||_1
  double sigma_residual = 0.0;
};

PolarFixedPoints polar_fixed_point(const KrausChannel& c, const ComplexMatrix& theta,
                                   Complex lambda);

}  // namespace channellab
