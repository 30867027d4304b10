#include "channellab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "channellab/errors.hpp"

namespace channellab {

namespace {

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

// Orthonormal Hermitian basis of the span of {X_k} assuming that span is closed
// under the adjoint (true for the fixed-point space of a positive map).
std::vector<ComplexMatrix> hermitian_basis(const ComplexMatrix& directions, int dim) {
  const int count = static_cast<int>(directions.cols());
  std::vector<ComplexMatrix> raw;
  for (int k = 0; k < count; ++k) {
    ComplexMatrix x = unvec(directions.col(k), dim);
    const Complex tr = x.trace();
    if (std::abs(tr) > 1e-8) x *= std::conj(tr) / std::abs(tr);
    raw.push_back(hermitize(x));
    raw.push_back(hermitize(Complex(0.0, 1.0) * x));
  }
  std::vector<ComplexMatrix> basis;
  for (ComplexMatrix h : raw) {
    for (int pass = 0; pass < 2; ++pass)
      for (const ComplexMatrix& b : basis) h -= real_inner(b, h) * b;
    const double n = h.norm();
    if (n > 1e-6) basis.push_back(h / n);
    if (static_cast<int>(basis.size()) == count) break;
  }
  return basis;
}

DensityMatrix normalize_fixed_point(const ComplexMatrix& candidate) {
  ComplexMatrix x = candidate;
  const double tr = x.trace().real();
  if (std::abs(tr) < 1e-12) {
    throw InconsistencyError("analyze: fixed-point eigenvector has zero trace");
  }
  x /= tr;
  const HermitianEigenSystem e = hermitian_eig(hermitize(x));
  if (e.eigenvalues(0) < -tol::fixed_point_psd) {
    throw InconsistencyError("analyze: unique fixed-point candidate is not positive (eigenvalue " +
                             std::to_string(e.eigenvalues(0)) + ")");
  }
  const RealVector clipped = e.eigenvalues.cwiseMax(0.0);
  ComplexMatrix rho = e.eigenvectors * clipped.cast<Complex>().asDiagonal() *
                      e.eigenvectors.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitize(rho));
}

// Angle in [0, 2 pi), with angles within 1e-12 of 2 pi folded to 0.
double phase_angle(Complex z) {
  constexpr double two_pi = 6.283185307179586;
  double a = std::arg(z);
  if (a < 0) a += two_pi;
  if (two_pi - a < 1e-12) a = 0.0;
  return a;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::mixing:
      return "mixing";
    case Verdict::ergodic_not_mixing:
      return "ergodic_not_mixing";
    case Verdict::not_ergodic:
      return "not_ergodic";
  }
  return "unknown";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "mixing") return Verdict::mixing;
  if (s == "ergodic_not_mixing") return Verdict::ergodic_not_mixing;
  if (s == "not_ergodic") return Verdict::not_ergodic;
  throw PreconditionError("unknown verdict '" + s + "'");
}

SpectralReport analyze(const Superoperator& s, const AnalyzeOptions& options) {
  const int n = s.dim * s.dim;
  if (s.matrix.rows() != n || s.matrix.cols() != n) {
    throw DimensionError("analyze: superoperator must be dim^2 x dim^2");
  }
  const EigenSystem eig = general_eig(s.matrix);

  SpectralReport report;
  report.dim = s.dim;
  report.eigensolver_residual = eig.residual;
  report.spectrum = eig.eigenvalues;
  for (Complex& z : report.spectrum) {
    // Clean signed zeros so sorting and serialization are stable.
    if (std::abs(z.imag()) < 1e-15) z = Complex(z.real(), 0.0);
    if (std::abs(z.real()) < 1e-15) z = Complex(0.0, z.imag());
  }
  std::sort(report.spectrum.begin(), report.spectrum.end(), [](Complex a, Complex b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12) return ma > mb;
    return phase_angle(a) < phase_angle(b);
  });

  const double boundary_factor = 100.0;
  for (const Complex& z : report.spectrum) {
    const double modulus = std::abs(z);
    const double to_one = std::abs(z - Complex(1.0, 0.0));
    if (modulus > 1.0 - options.peripheral_tol) {
      report.peripheral.push_back(z);
    } else {
      report.kappa = std::max(report.kappa, modulus);
      if (modulus > 1.0 - boundary_factor * options.peripheral_tol) {
        report.near_tolerance_boundary = true;
      }
    }
    if (to_one <= options.cluster_tol) {
      ++report.eigenvalue_one_multiplicity;
    } else if (to_one <= boundary_factor * options.cluster_tol) {
      report.near_tolerance_boundary = true;
    }
    if (modulus > 1.0 + tol::peripheral) {
      report.warnings.push_back("spectral radius exceeds 1: |lambda| = " + std::to_string(modulus));
    }
  }
  if (report.near_tolerance_boundary) {
    report.warnings.push_back(
        "eigenvalues lie close to the clustering or peripheral tolerance; verdict is "
        "tolerance-sensitive");
  }
  if (report.eigenvalue_one_multiplicity == 0) {
    throw NumericalError("analyze: no eigenvalue within tolerance of 1; input is not a channel");
  }

  const int mult = report.eigenvalue_one_multiplicity;
  if (mult == 1) {
    report.verdict =
        report.peripheral.size() == 1 ? Verdict::mixing : Verdict::ergodic_not_mixing;
  } else {
    report.verdict = Verdict::not_ergodic;
  }

  const ComplexMatrix shifted = s.matrix - ComplexMatrix::Identity(n, n);
  const ComplexMatrix directions = least_singular_subspace(shifted, mult);
  report.fixed_point_candidates = hermitian_basis(directions, s.dim);
  if (mult == 1) {
    report.fixed_point = normalize_fixed_point(report.fixed_point_candidates.front());
    report.fixed_point_purity = report.fixed_point->purity();
    report.fixed_point_candidates.front() = report.fixed_point->matrix();
  }
  return report;
}

SpectralReport analyze(const KrausChannel& c, const AnalyzeOptions& options) {
  return analyze(to_superoperator(c), options);
}

double convergence_bound(const SpectralReport& report, long long n, double c_n) {
  if (report.verdict != Verdict::mixing) {
    throw PreconditionError("convergence_bound: channel is not mixing");
  }
  if (n < 0) throw PreconditionError("convergence_bound: n must be non-negative");
  // n^dim vanishes at n = 0 and kappa^n vanishes for kappa = 0, n >= 1.
  if (n == 0 || report.kappa == 0.0) return 0.0;
  const double nd = static_cast<double>(n);
  // log-space keeps n^dim kappa^n finite for large n.
  return c_n * std::exp(report.dim * std::log(nd) + nd * std::log(report.kappa));
}

double calibrate_bound_constant(const SpectralReport& report, double distance_at_one) {
  if (report.verdict != Verdict::mixing) {
    throw PreconditionError("calibrate_bound_constant: channel is not mixing");
  }
  if (report.kappa == 0.0) {
    return distance_at_one > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return distance_at_one / report.kappa;
}

std::pair<int, int> default_rate_window(int dim) { return {std::max(5, 2 * dim), 50}; }

ConvergenceEstimate estimate_rate(const KrausChannel& c, const DensityMatrix& rho0, int n_min,
                                  int n_max) {
  if (n_min < 0 || n_max - n_min < 2) {
    throw PreconditionError("estimate_rate: window must contain at least 3 steps");
  }
  if (rho0.dim() != c.dim) throw DimensionError("estimate_rate: state dimension mismatch");
  const Superoperator s = to_superoperator(c);
  const SpectralReport report = analyze(s);
  if (report.verdict != Verdict::mixing || report.kappa <= 0.0) {
    throw PreconditionError("estimate_rate: requires a mixing channel with kappa > 0 (verdict " +
                            std::string(to_string(report.verdict)) + ")");
  }
  const ComplexMatrix& target = report.fixed_point->matrix();

  std::vector<double> xs;
  std::vector<double> ys;
  ComplexMatrix state = rho0.matrix();
  ConvergenceEstimate out;
  out.kappa = report.kappa;
  out.n_min = n_min;
  out.n_max = n_max;
  for (int k = 0; k <= n_max; ++k) {
    if (k >= n_min) {
      const double d = trace_distance(state, target);
      if (d < 1e-13) {
        out.n_max = k - 1;
        out.window_shrunk = true;
        break;
      }
      xs.push_back(k);
      ys.push_back(std::log(d));
    }
    state = apply_superoperator(s, state);
  }
  if (xs.size() < 3) {
    throw NumericalError("estimate_rate: distance to the fixed point fell below 1e-13 before n = " +
                         std::to_string(n_min + 3) + "; fit window is degenerate");
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.empirical_rate = std::exp(slope);
  return out;
}

std::optional<ShortcutResult> purely_ergodic_shortcut(const SpectralReport& report) {
  if (report.verdict == Verdict::not_ergodic || !report.fixed_point_purity) {
    throw PreconditionError("purely_ergodic_shortcut: requires an ergodic report");
  }
  if (*report.fixed_point_purity < 1.0 - 1e-9) return std::nullopt;
  return ShortcutResult{Verdict::mixing, report.verdict == Verdict::mixing};
}

std::vector<PeripheralEigenvector> peripheral_eigenvectors(const KrausChannel& c,
                                                           const SpectralReport& report) {
  const Superoperator s = to_superoperator(c);
  const int n = c.dim * c.dim;
  std::vector<PeripheralEigenvector> out;
  for (const std::vector<int>& cluster : cluster_values(report.peripheral)) {
    Complex center = 0.0;
    for (int idx : cluster) center += report.peripheral[idx];
    center /= static_cast<double>(cluster.size());
    const ComplexMatrix shifted = s.matrix - center * ComplexMatrix::Identity(n, n);
    const ComplexMatrix basis =
        least_singular_subspace(shifted, static_cast<int>(cluster.size()));
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
      PeripheralEigenvector pe;
      pe.eigenvalue = center;
      pe.theta = unvec(basis.col(k), c.dim);
      pe.normality_defect =
          max_abs(pe.theta * pe.theta.adjoint() - pe.theta.adjoint() * pe.theta);
      out.push_back(std::move(pe));
    }
  }
  return out;
}

std::vector<PeripheralEigenvector> peripheral_normality_check(const KrausChannel& c,
                                                              const SpectralReport& report) {
  if (report.verdict == Verdict::not_ergodic) {
    throw PreconditionError("peripheral_normality_check: channel is not ergodic");
  }
  return peripheral_eigenvectors(c, report);
}

PolarFixedPoints polar_fixed_point(const KrausChannel& c, const ComplexMatrix& theta,
                                   Complex lambda) {
  if (theta.rows() != c.dim || theta.cols() != c.dim) {
    throw DimensionError("polar_fixed_point: operator dimension mismatch");
  }
  if (std::abs(lambda) < 1.0 - tol::peripheral) {
    throw PreconditionError("polar_fixed_point: eigenvalue is not peripheral");
  }
  const ComplexMatrix image = apply_operator(c, theta);
  const double eig_residual = (image - lambda * theta).norm() / std::max(1.0, theta.norm());
  if (eig_residual > 1e-7) {
    throw PreconditionError("polar_fixed_point: operator is not an eigenvector (residual " +
                            std::to_string(eig_residual) + ")");
  }
  const double g = trace_norm(theta);
  if (g <= 1e-10) throw PreconditionError("polar_fixed_point: operator has zero trace norm");

  const PolarResult polar = polar_left(theta);
  const DensityMatrix rho(hermitize(polar.positive / g));
  const DensityMatrix sigma(hermitize(psd_sqrt(hermitize(theta.adjoint() * theta)) / g));
  return {rho, sigma, trace_distance(apply_operator(c, rho.matrix()), rho.matrix()),
          trace_distance(apply_operator(c, sigma.matrix()), sigma.matrix())};
}

}  // namespace channellab
