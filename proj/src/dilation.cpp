#include "channellab/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "channellab/errors.hpp"

namespace channellab {

namespace {

ComplexMatrix conserved_observable(const ConservedDilation& cd) {
  const int da = cd.dilation.dim_a;
  const int db = cd.dilation.dim_b;
  return kron(cd.m_a, ComplexMatrix::Identity(db, db)) +
         kron(ComplexMatrix::Identity(da, da), cd.m_b);
}

void check_shapes(const ConservedDilation& cd) {
  const StinespringDilation& d = cd.dilation;
  if (d.dim_a <= 0 || d.dim_b <= 0) throw DimensionError("dilation: dimensions must be positive");
  const int total = d.dim_a * d.dim_b;
  if (d.unitary.rows() != total || d.unitary.cols() != total) {
    throw DimensionError("dilation: unitary must be " + std::to_string(total) + "x" +
                         std::to_string(total));
  }
  if (d.bath_state.size() != d.dim_b) throw DimensionError("dilation: bath state length");
  if (cd.m_a.rows() != d.dim_a || cd.m_a.cols() != d.dim_a) {
    throw DimensionError("dilation: mA must be dimA x dimA");
  }
  if (cd.m_b.rows() != d.dim_b || cd.m_b.cols() != d.dim_b) {
    throw DimensionError("dilation: mB must be dimB x dimB");
  }
}

}  // namespace

const char* to_string(Extremal e) { return e == Extremal::max ? "max" : "min"; }

Extremal extremal_from_string(const std::string& s) {
  if (s == "max") return Extremal::max;
  if (s == "min") return Extremal::min;
  throw PreconditionError("extremal must be \"max\" or \"min\", got '" + s + "'");
}

ConservedValidationReport validate_conserved(const ConservedDilation& cd) {
  check_shapes(cd);
  const StinespringDilation& d = cd.dilation;
  const int total = d.dim_a * d.dim_b;
  ConservedValidationReport r;

  r.unitarity_defect =
      max_abs(d.unitary.adjoint() * d.unitary - ComplexMatrix::Identity(total, total));
  if (r.unitarity_defect > tol::unitarity) r.failed.emplace_back("unitarity");
  r.bath_norm_defect = std::abs(d.bath_state.norm() - 1.0);
  if (r.bath_norm_defect > tol::bath_norm) r.failed.emplace_back("bath_normalization");
  if (hermiticity_defect(cd.m_a) > tol::hermiticity ||
      hermiticity_defect(cd.m_b) > tol::hermiticity) {
    r.failed.emplace_back("hermiticity");
    return r;
  }

  const ComplexMatrix m_ab = conserved_observable(cd);
  r.commutator_norm = max_abs(m_ab * d.unitary - d.unitary * m_ab);
  if (r.commutator_norm > tol::commutator) r.failed.emplace_back("commutator");

  const ComplexVector& phi = d.bath_state;
  r.bath_expectation = phi.dot(cd.m_b * phi).real() / std::max(phi.squaredNorm(), 1e-300);
  r.bath_eigen_residual = (cd.m_b * phi - r.bath_expectation * phi).norm();
  if (r.bath_eigen_residual > tol::hermiticity) r.failed.emplace_back("bath_eigenvector");

  const RealVector ev = hermitian_eig(cd.m_b).eigenvalues;
  const Eigen::Index nb = ev.size();
  r.extremal_eigenvalue = cd.extremal == Extremal::max ? ev(nb - 1) : ev(0);
  if (nb == 1) {
    r.extremal_gap = std::numeric_limits<double>::infinity();
  } else {
    r.extremal_gap = cd.extremal == Extremal::max ? ev(nb - 1) - ev(nb - 2) : ev(1) - ev(0);
  }
  if (std::abs(r.bath_expectation - r.extremal_eigenvalue) > tol::cluster) {
    r.failed.emplace_back("extremal");
  }
  if (r.extremal_gap <= tol::cluster) r.failed.emplace_back("nondegenerate");
  return r;
}

FactorizingEigenstateReport find_factorizing_eigenstates(const ConservedDilation& cd) {
  const ConservedValidationReport validation = validate_conserved(cd);
  if (!validation.passed()) {
    std::string names;
    for (const std::string& f : validation.failed) names += (names.empty() ? "" : ", ") + f;
    throw PreconditionError("find_factorizing_eigenstates: hypotheses failed: " + names);
  }
  const StinespringDilation& d = cd.dilation;
  const int da = d.dim_a;
  const int db = d.dim_b;
  const int total = da * db;
  const ComplexVector& phi = d.bath_state;

  const EigenSystem eig = general_eig(d.unitary);
  FactorizingEigenstateReport report;
  for (const std::vector<int>& cluster : cluster_values(eig.eigenvalues, tol::cluster)) {
    Complex center = 0.0;
    for (int idx : cluster) center += eig.eigenvalues[idx];
    center /= static_cast<double>(cluster.size());
    if (cluster.size() > 1) report.degenerate_clusters.push_back(center);

    const int size = static_cast<int>(cluster.size());
    const ComplexMatrix eigenspace = least_singular_subspace(
        d.unitary - center * ComplexMatrix::Identity(total, total), size);

    // Component of each eigenspace direction along the slice H_A (x) |phi>.
    ComplexMatrix sliced = ComplexMatrix::Zero(da, size);
    for (int j = 0; j < size; ++j)
      for (int a = 0; a < da; ++a)
        for (int b = 0; b < db; ++b) sliced(a, j) += std::conj(phi(b)) * eigenspace(a * db + b, j);

    const SvdResult s = svd(sliced);
    for (Eigen::Index k = 0; k < s.singular_values.size(); ++k) {
      if (s.singular_values(k) <= 1.0 - tol::factorizing) continue;
      ComplexVector nu = sliced * s.v.col(k);
      nu.normalize();
      const ComplexVector product = kron(nu, phi);
      const Complex lambda = product.dot(d.unitary * product);
      if ((d.unitary * product - lambda * product).norm() > 1e-8) {
        throw InconsistencyError("find_factorizing_eigenstates: slice direction is not an eigenvector");
      }
      report.states.push_back(nu);
      report.unitary_eigenvalues.push_back(lambda);
    }
  }
  report.count = static_cast<int>(report.states.size());
  if (report.count == 0) {
    throw InconsistencyError(
        "find_factorizing_eigenstates: no factorizing eigenstate although a fixed point must exist");
  }
  report.verdict = report.count == 1 ? Verdict::mixing : Verdict::not_ergodic;
  return report;
}

ConsistencyReport cross_validate(const ConservedDilation& cd) {
  ConsistencyReport r;
  r.factorizing = find_factorizing_eigenstates(cd);
  const KrausChannel channel = from_stinespring(cd.dilation);
  r.spectral = analyze(channel);
  r.factorizing_verdict = r.factorizing.verdict;
  r.spectral_verdict = r.spectral.verdict;
  r.verdicts_agree = r.factorizing_verdict == r.spectral_verdict;

  for (const ComplexVector& nu : r.factorizing.states) {
    const ComplexMatrix proj = nu * nu.adjoint();
    r.max_factorizing_fixed_residual = std::max(
        r.max_factorizing_fixed_residual, trace_distance(apply_operator(channel, proj), proj));
  }
  if (r.factorizing_verdict == Verdict::mixing && r.spectral.fixed_point) {
    const ComplexVector& nu = r.factorizing.states.front();
    r.fixed_point_distance = trace_distance(r.spectral.fixed_point->matrix(), nu * nu.adjoint());
  }
  r.consistent = r.verdicts_agree && r.max_factorizing_fixed_residual <= 1e-8 &&
                 (!r.fixed_point_distance || *r.fixed_point_distance <= 1e-7);
  return r;
}

double bath_outflow(const ConservedDilation& cd, const DensityMatrix& rho) {
  check_shapes(cd);
  const StinespringDilation& d = cd.dilation;
  if (rho.dim() != d.dim_a) throw DimensionError("bath_outflow: state dimension mismatch");
  const ComplexMatrix bath = d.bath_state * d.bath_state.adjoint();
  const ComplexMatrix joint = d.unitary * kron(rho.matrix(), bath) * d.unitary.adjoint();
  const ComplexMatrix rho_b = partial_trace(joint, d.dim_a, d.dim_b, Subsystem::B);
  return (cd.m_b * rho_b).trace().real() - (cd.m_b * bath).trace().real();
}

double system_expectation(const ConservedDilation& cd, const DensityMatrix& rho) {
  if (rho.dim() != cd.m_a.rows()) throw DimensionError("system_expectation: dimension mismatch");
  return (cd.m_a * rho.matrix()).trace().real();
}

}  // namespace channellab
