#include "channellab/channel.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "channellab/errors.hpp"

namespace channellab {

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  require_square(m, "DensityMatrix");
  const double herm = hermiticity_defect(m);
  if (herm > tol::hermiticity) {
    throw PreconditionError("DensityMatrix: not Hermitian (defect " + std::to_string(herm) + ")");
  }
  const double trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_defect > tol::trace) {
    throw PreconditionError("DensityMatrix: trace differs from 1 by " +
                            std::to_string(trace_defect));
  }
  ComplexMatrix h = hermitize(m);
  const double min_eig = hermitian_eig(h).eigenvalues(0);
  if (min_eig < -tol::psd_clip) {
    throw PreconditionError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
  }
  matrix_ = std::move(h);
}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
  if (dim <= 0 || k < 0 || k >= dim) {
    throw PreconditionError("basis_state: index " + std::to_string(k) + " out of range for dim " +
                            std::to_string(dim));
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim <= 0) throw PreconditionError("maximally_mixed: dim must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (psi.size() == 0 || n == 0.0) throw PreconditionError("pure: zero vector");
  const ComplexVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

bool DensityMatrix::is_faithful(double support_tol) const {
  return hermitian_eig(matrix_).eigenvalues(0) > support_tol;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

KrausChannel::KrausChannel(int d, std::vector<ComplexMatrix> ops, std::string lbl)
    : dim(d), kraus_ops(std::move(ops)), label(std::move(lbl)) {
  if (dim <= 0) throw DimensionError("KrausChannel: dim must be positive");
  if (kraus_ops.empty()) throw DimensionError("KrausChannel: empty Kraus set");
  for (std::size_t i = 0; i < kraus_ops.size(); ++i) {
    const ComplexMatrix& k = kraus_ops[i];
    if (k.rows() != dim || k.cols() != dim) {
      throw DimensionError("KrausChannel: operator " + std::to_string(i) + " is " +
                           std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                           ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (!all_finite(k)) {
      throw PreconditionError("KrausChannel: operator " + std::to_string(i) +
                              " has a non-finite entry");
    }
  }
}

void StinespringDilation::validate() const {
  if (dim_a <= 0 || dim_b <= 0) throw DimensionError("StinespringDilation: bad dimensions");
  const int total = dim_a * dim_b;
  if (unitary.rows() != total || unitary.cols() != total) {
    throw DimensionError("StinespringDilation: unitary must be " + std::to_string(total) + "x" +
                         std::to_string(total));
  }
  if (bath_state.size() != dim_b) {
    throw DimensionError("StinespringDilation: bath state must have length " +
                         std::to_string(dim_b));
  }
  const double unitarity =
      max_abs(unitary.adjoint() * unitary - ComplexMatrix::Identity(total, total));
  if (unitarity > tol::unitarity) {
    throw PreconditionError("StinespringDilation: U^dag U differs from I by " +
                            std::to_string(unitarity));
  }
  const double norm_defect = std::abs(bath_state.norm() - 1.0);
  if (norm_defect > tol::bath_norm) {
    throw PreconditionError("StinespringDilation: bath state norm differs from 1 by " +
                            std::to_string(norm_defect));
  }
}

ComplexVector vec(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) v(i + j * m.rows()) = m(i, j);
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw DimensionError("unvec: vector length " + std::to_string(v.size()) +
                         " is not dim^2 for dim " + std::to_string(dim));
  }
  ComplexMatrix m(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) m(i, j) = v(i + j * dim);
  return m;
}

ComplexMatrix choi_matrix(const KrausChannel& c) {
  const int n = c.dim * c.dim;
  ComplexMatrix choi = ComplexMatrix::Zero(n, n);
  for (const ComplexMatrix& k : c.kraus_ops) {
    const ComplexVector v = vec(k);
    choi += v * v.adjoint();
  }
  return choi;
}

ValidationReport validate_cpt(const KrausChannel& c) {
  ValidationReport report;
  ComplexMatrix sum = ComplexMatrix::Zero(c.dim, c.dim);
  for (const ComplexMatrix& k : c.kraus_ops) sum += k.adjoint() * k;
  report.completeness_defect = max_abs(sum - ComplexMatrix::Identity(c.dim, c.dim));
  report.trace_preserving = report.completeness_defect <= tol::completeness;
  report.min_choi_eigenvalue = hermitian_eig(hermitize(choi_matrix(c))).eigenvalues(0);
  // Eigen returns exact zeros as tiny signed values; report them as 0.
  if (std::abs(report.min_choi_eigenvalue) < 1e-14) report.min_choi_eigenvalue = 0.0;
  report.completely_positive = report.min_choi_eigenvalue >= -tol::choi_psd;
  return report;
}

void require_cpt(const KrausChannel& c) {
  const ValidationReport r = validate_cpt(c);
  if (!r.passed()) {
    throw PreconditionError("channel '" + c.label + "' is not CPT (completeness defect " +
                            std::to_string(r.completeness_defect) + ", min Choi eigenvalue " +
                            std::to_string(r.min_choi_eigenvalue) + ")");
  }
}

ComplexMatrix apply_operator(const KrausChannel& c, const ComplexMatrix& x) {
  if (x.rows() != c.dim || x.cols() != c.dim) {
    throw DimensionError("apply: operator is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", channel dim is " + std::to_string(c.dim));
  }
  ComplexMatrix out = ComplexMatrix::Zero(c.dim, c.dim);
  for (const ComplexMatrix& k : c.kraus_ops) out += k * x * k.adjoint();
  return out;
}

namespace {

DensityMatrix to_state(ComplexMatrix out, const char* where) {
  const Complex tr = out.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol::trace) {
    throw NumericalError(std::string(where) + ": output trace " + std::to_string(tr.real()) +
                         " differs from 1 beyond tolerance");
  }
  out /= tr.real();
  return DensityMatrix(hermitize(out));
}

}  // namespace

DensityMatrix apply(const KrausChannel& c, const DensityMatrix& rho) {
  return to_state(apply_operator(c, rho.matrix()), "apply");
}

Superoperator to_superoperator(const KrausChannel& c) {
  const int n = c.dim * c.dim;
  Superoperator s{c.dim, ComplexMatrix::Zero(n, n)};
  for (const ComplexMatrix& k : c.kraus_ops) s.matrix += kron(k.conjugate(), k);
  return s;
}

ComplexMatrix apply_superoperator(const Superoperator& s, const ComplexMatrix& x) {
  if (x.rows() != s.dim || x.cols() != s.dim) {
    throw DimensionError("apply_superoperator: operator dimension mismatch");
  }
  return unvec(s.matrix * vec(x), s.dim);
}

DensityMatrix apply(const Superoperator& s, const DensityMatrix& rho) {
  return to_state(apply_superoperator(s, rho.matrix()), "apply");
}

KrausChannel from_stinespring(const StinespringDilation& d) {
  d.validate();
  std::vector<ComplexMatrix> ops;
  ops.reserve(d.dim_b);
  for (int n = 0; n < d.dim_b; ++n) {
    ComplexMatrix k = ComplexMatrix::Zero(d.dim_a, d.dim_a);
    for (int i = 0; i < d.dim_a; ++i)
      for (int j = 0; j < d.dim_a; ++j)
        for (int b = 0; b < d.dim_b; ++b)
          k(i, j) += d.unitary(i * d.dim_b + n, j * d.dim_b + b) * d.bath_state(b);
    ops.push_back(std::move(k));
  }
  return KrausChannel(d.dim_a, std::move(ops), "stinespring");
}

ComplexMatrix apply_dilation(const StinespringDilation& d, const ComplexMatrix& rho) {
  d.validate();
  const ComplexMatrix bath = d.bath_state * d.bath_state.adjoint();
  const ComplexMatrix joint = d.unitary * kron(rho, bath) * d.unitary.adjoint();
  return partial_trace(joint, d.dim_a, d.dim_b, Subsystem::A);
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  if (first.dim != second.dim) {
    throw DimensionError("compose: dimensions " + std::to_string(first.dim) + " and " +
                         std::to_string(second.dim) + " differ");
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(first.kraus_ops.size() * second.kraus_ops.size());
  for (const ComplexMatrix& k : first.kraus_ops)
    for (const ComplexMatrix& l : second.kraus_ops) ops.push_back(k * l);
  return KrausChannel(first.dim, std::move(ops), first.label + "*" + second.label);
}

Superoperator power(const Superoperator& s, long long n) {
  return {s.dim, matrix_power(s.matrix, n)};
}

Superoperator power(const KrausChannel& c, long long n) { return power(to_superoperator(c), n); }

bool is_unital(const KrausChannel& c, double tolerance) {
  const ComplexMatrix id = ComplexMatrix::Identity(c.dim, c.dim);
  return max_abs(apply_operator(c, id) - id) <= tolerance;
}

KrausChannel rotate_kraus_gauge(const KrausChannel& c, const ComplexMatrix& w) {
  const auto r = static_cast<Eigen::Index>(c.kraus_ops.size());
  if (w.cols() != r || w.rows() < r) {
    throw DimensionError("rotate_kraus_gauge: mixing matrix must be an isometry with " +
                         std::to_string(r) + " columns");
  }
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    ComplexMatrix k = ComplexMatrix::Zero(c.dim, c.dim);
    for (Eigen::Index j = 0; j < r; ++j) k += w(i, j) * c.kraus_ops[j];
    ops.push_back(std::move(k));
  }
  return KrausChannel(c.dim, std::move(ops), c.label);
}

}  // namespace channellab
