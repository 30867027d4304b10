#include "channellab/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "channellab/errors.hpp"

namespace channellab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_hermitian(const ComplexMatrix& m, const char* where) {
  require_square(m, where);
  const double defect = hermiticity_defect(m);
  if (defect > tol::hermiticity) {
    throw PreconditionError(std::string(where) + ": matrix is not Hermitian (defect " +
                            std::to_string(defect) + ")");
  }
}

// Reduces h to upper Hessenberg form in place, accumulating the unitary in q.
void reduce_to_hessenberg(ComplexMatrix& h, ComplexMatrix& q) {
  const Eigen::Index n = h.rows();
  q = ComplexMatrix::Identity(n, n);
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    ComplexVector v = h.block(k + 1, k, len, 1);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const Complex x0 = v(0);
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0, 0.0) : x0 / std::abs(x0);
    v(0) += phase * xnorm;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H <- (I - 2vv^dag) H (I - 2vv^dag) restricted to the trailing block.
    ComplexMatrix rows = h.bottomRows(len);
    rows -= 2.0 * v * (v.adjoint() * rows);
    h.bottomRows(len) = rows;
    ComplexMatrix cols = h.rightCols(len);
    cols -= 2.0 * (cols * v) * v.adjoint();
    h.rightCols(len) = cols;
    ComplexMatrix qcols = q.rightCols(len);
    qcols -= 2.0 * (qcols * v) * v.adjoint();
    q.rightCols(len) = qcols;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 2; i < n; ++i) h(i, j) = 0.0;
  }
}

struct Givens {
  double c;
  Complex s;
};

// G = [[c, s], [-conj(s), c]] maps (x, y) to (r, 0).
Givens make_givens(Complex x, Complex y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {1.0, Complex(0.0, 0.0)};
  if (ax == 0.0) return {0.0, Complex(1.0, 0.0)};
  const double nrm = std::hypot(ax, ay);
  return {ax / nrm, (x / ax) * std::conj(y) / nrm};
}

Complex wilkinson_shift(const ComplexMatrix& h, Eigen::Index hi) {
  const Complex a = h(hi - 1, hi - 1);
  const Complex b = h(hi - 1, hi);
  const Complex c = h(hi, hi - 1);
  const Complex d = h(hi, hi);
  const Complex half_diff = 0.5 * (a - d);
  const Complex disc = std::sqrt(half_diff * half_diff + b * c);
  const Complex mid = 0.5 * (a + d);
  const Complex mu1 = mid + disc;
  const Complex mu2 = mid - disc;
  return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

}  // namespace

void require_square(const ComplexMatrix& m, const char* where) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(where) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!all_finite(m)) throw PreconditionError(std::string(where) + ": non-finite entry");
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep) {
  if (dim_a <= 0 || dim_b <= 0) throw DimensionError("partial_trace: dimensions must be positive");
  const Eigen::Index total = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (m.rows() != total || m.cols() != total) {
    throw DimensionError("partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(total) +
                         "x" + std::to_string(total));
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k) out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return out;
}

HermitianEigenSystem hermitian_eig(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eig");
  const ComplexMatrix h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: solver did not converge");
  }
  HermitianEigenSystem out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const double r =
        (h * out.eigenvectors.col(k) - out.eigenvalues(k) * out.eigenvectors.col(k)).norm();
    out.residual = std::max(out.residual, r);
  }
  return out;
}

SchurForm complex_schur(const ComplexMatrix& m) {
  require_square(m, "general_eig");
  const Eigen::Index n = m.rows();
  SchurForm out;
  ComplexMatrix& h = out.triangular;
  ComplexMatrix& z = out.unitary;
  h = m;
  reduce_to_hessenberg(h, z);
  if (n == 1) return out;

  const double scale = std::max(max_abs(m), std::numeric_limits<double>::min());
  const int max_total_iterations = 100 * static_cast<int>(n);
  int iter_since_deflation = 0;
  Eigen::Index hi = n - 1;

  while (hi > 0) {
    Eigen::Index lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      double ref = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (ref == 0.0) ref = scale;
      if (sub <= kEps * ref) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      iter_since_deflation = 0;
      continue;
    }
    if (++out.iterations > max_total_iterations) {
      throw NumericalError("general_eig: QR iteration cap exceeded (" +
                           std::to_string(max_total_iterations) + ")");
    }
    ++iter_since_deflation;

    Complex mu;
    if (iter_since_deflation % 10 == 0) {
      // Exceptional shift breaks cycles of the standard shift.
      mu = std::abs(h(hi, hi - 1).real()) +
           (hi >= 2 ? std::abs(h(hi - 1, hi - 2).real()) : 0.0) + h(hi, hi);
    } else {
      mu = wilkinson_shift(h, hi);
    }

    for (Eigen::Index k = lo; k < hi; ++k) {
      Complex x;
      Complex y;
      if (k == lo) {
        x = h(lo, lo) - mu;
        y = h(lo + 1, lo);
      } else {
        x = h(k, k - 1);
        y = h(k + 1, k - 1);
      }
      const Givens g = make_givens(x, y);
      const Eigen::Index col_start = k == lo ? lo : k - 1;
      for (Eigen::Index j = col_start; j < n; ++j) {
        const Complex h1 = h(k, j);
        const Complex h2 = h(k + 1, j);
        h(k, j) = g.c * h1 + g.s * h2;
        h(k + 1, j) = -std::conj(g.s) * h1 + g.c * h2;
      }
      const Eigen::Index row_end = std::min<Eigen::Index>(k + 2, hi);
      for (Eigen::Index i = 0; i <= row_end; ++i) {
        const Complex h1 = h(i, k);
        const Complex h2 = h(i, k + 1);
        h(i, k) = g.c * h1 + std::conj(g.s) * h2;
        h(i, k + 1) = -g.s * h1 + g.c * h2;
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        const Complex z1 = z(i, k);
        const Complex z2 = z(i, k + 1);
        z(i, k) = g.c * z1 + std::conj(g.s) * z2;
        z(i, k + 1) = -g.s * z1 + g.c * z2;
      }
      if (k > lo) h(k + 1, k - 1) = 0.0;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) h(i, j) = 0.0;
  return out;
}

EigenSystem general_eig(const ComplexMatrix& m) {
  const SchurForm schur = complex_schur(m);
  const ComplexMatrix& t = schur.triangular;
  const Eigen::Index n = t.rows();
  const double small = kEps * std::max(max_abs(t), 1.0);

  EigenSystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.vector_residuals.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = t(k, k);
    ComplexVector y = ComplexVector::Zero(n);
    y(k) = 1.0;
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      Complex acc = 0.0;
      for (Eigen::Index c = j + 1; c <= k; ++c) acc += t(j, c) * y(c);
      Complex denom = t(j, j) - t(k, k);
      if (std::abs(denom) < small) denom = small;
      y(j) = -acc / denom;
      const double ymax = y.cwiseAbs().maxCoeff();
      if (ymax > 1e100) y /= ymax;
    }
    ComplexVector v = schur.unitary * y;
    v.normalize();
    out.eigenvectors.col(k) = v;
    out.vector_residuals[k] = (m * v - t(k, k) * v).norm();
    out.residual = std::max(out.residual, out.vector_residuals[k]);
  }
  return out;
}

SvdResult svd(const ComplexMatrix& m) {
  if (m.size() == 0) throw DimensionError("svd: empty matrix");
  if (!all_finite(m)) throw PreconditionError("svd: non-finite entry");
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out;
  out.u = solver.matrixU();
  out.v = solver.matrixV();
  out.singular_values = solver.singularValues();
  return out;
}

ComplexMatrix least_singular_subspace(const ComplexMatrix& m, int count) {
  if (count < 0 || count > m.cols()) {
    throw DimensionError("least_singular_subspace: requested " + std::to_string(count) +
                         " directions from " + std::to_string(m.cols()) + " columns");
  }
  const SvdResult s = svd(m);
  return s.v.rightCols(count);
}

double trace_norm(const ComplexMatrix& m) { return svd(m).singular_values.sum(); }

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("trace_distance: shape mismatch");
  }
  return trace_norm(a - b);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianEigenSystem e = hermitian_eig(m);
  if (e.eigenvalues(0) < -tol::psd_reject) {
    throw PreconditionError("psd_sqrt: matrix has a negative eigenvalue " +
                            std::to_string(e.eigenvalues(0)));
  }
  const RealVector roots = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return e.eigenvectors * roots.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
}

LogResult log_on_support(const ComplexMatrix& m, double support_tol) {
  const HermitianEigenSystem e = hermitian_eig(m);
  const Eigen::Index n = m.rows();
  ComplexVector logs = ComplexVector::Zero(n);
  ComplexVector mask = ComplexVector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (e.eigenvalues(k) > support_tol) {
      logs(k) = std::log(e.eigenvalues(k));
      mask(k) = 1.0;
    }
  }
  return {e.eigenvectors * logs.asDiagonal() * e.eigenvectors.adjoint(),
          e.eigenvectors * mask.asDiagonal() * e.eigenvectors.adjoint()};
}

PolarResult polar_left(const ComplexMatrix& m) {
  require_square(m, "polar_left");
  const Eigen::Index n = m.rows();
  const HermitianEigenSystem e = hermitian_eig(hermitize(m * m.adjoint()));
  const ComplexMatrix& w = e.eigenvectors;

  // W^dag m = Sigma V^dag. Rows with non-negligible weight give V^dag directly;
  // the remaining rows span the kernel of P and are completed orthonormally.
  const ComplexMatrix projected = w.adjoint() * m;
  const double threshold = 1e-7 * std::max(1.0, max_abs(m));
  ComplexMatrix vdag = ComplexMatrix::Zero(n, n);
  std::vector<bool> filled(n, false);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const double r = projected.row(i).norm();
    if (r > threshold) {
      ComplexVector row = projected.row(i).transpose();
      for (Eigen::Index p = 0; p < n; ++p) {
        if (filled[p]) {
          const ComplexVector prev = vdag.row(p).transpose();
          row -= prev.dot(row) * prev;
        }
      }
      vdag.row(i) = row.normalized().transpose();
      filled[i] = true;
    }
  }
  Eigen::Index candidate = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (filled[i]) continue;
    while (candidate < n) {
      ComplexVector row = ComplexVector::Unit(n, candidate++);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index p = 0; p < n; ++p) {
          if (filled[p]) {
            const ComplexVector prev = vdag.row(p).transpose();
            row -= prev.dot(row) * prev;
          }
        }
      }
      if (row.norm() > 1e-6) {
        vdag.row(i) = row.normalized().transpose();
        filled[i] = true;
        break;
      }
    }
  }
  const RealVector roots = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return {w * roots.cast<Complex>().asDiagonal() * w.adjoint(), w * vdag};
}

std::vector<std::vector<int>> cluster_values(const std::vector<Complex>& values,
                                             double tolerance) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= tolerance) parent[find(i)] = find(j);

  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, long long n) {
  require_square(m, "matrix_power");
  if (n < 0) throw PreconditionError("matrix_power: negative exponent");
  ComplexMatrix result = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix base = m;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace channellab
