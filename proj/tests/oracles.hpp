#pragma once

// Reference computations for tests. Each one avoids the library code path it
// is compared against: closed forms, explicit loops or Eigen's own solvers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat sigma(int k) {
  Mat s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, C(0, -1), C(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

inline Mat unit(int dim, int j, int k) {
  Mat e = Mat::Zero(dim, dim);
  e(j, k) = 1.0;
  return e;
}

inline Mat apply_kraus(const std::vector<Mat>& ks, const Mat& x) {
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (const Mat& k : ks) out += k * x * k.adjoint();
  return out;
}

// Superoperator assembled from the images of matrix units, with
// column stacking vec(X)[r + c*dim] = X(r, c).
inline Mat superoperator_by_units(const std::vector<Mat>& ks, int dim) {
  Mat s(dim * dim, dim * dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) {
      const Mat img = apply_kraus(ks, unit(dim, r, c));
      for (int cc = 0; cc < dim; ++cc)
        for (int rr = 0; rr < dim; ++rr) s(rr + cc * dim, r + c * dim) = img(rr, cc);
    }
  return s;
}

// R_ij = Tr(sigma_i tau(sigma_j)) / 2.
inline Eigen::Matrix4cd pauli_transfer(const std::vector<Mat>& ks) {
  Eigen::Matrix4cd r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = (sigma(i) * apply_kraus(ks, sigma(j))).trace() / 2.0;
  return r;
}

inline Mat partial_trace_loops(const Mat& m, int da, int db, bool keep_a) {
  if (keep_a) {
    Mat out = Mat::Zero(da, da);
    for (int a = 0; a < da; ++a)
      for (int a2 = 0; a2 < da; ++a2)
        for (int b = 0; b < db; ++b) out(a, a2) += m(a * db + b, a2 * db + b);
    return out;
  }
  Mat out = Mat::Zero(db, db);
  for (int b = 0; b < db; ++b)
    for (int b2 = 0; b2 < db; ++b2)
      for (int a = 0; a < da; ++a) out(b, b2) += m(a * db + b, a * db + b2);
  return out;
}

// Eigenvalues of a 3x3 Hermitian matrix from its characteristic cubic, ascending.
inline std::vector<double> hermitian3_eigenvalues(const Mat& a) {
  const double q = a.trace().real() / 3.0;
  const Mat shifted = a - q * Mat::Identity(3, 3);
  const double p2 = (shifted * shifted).trace().real() / 6.0;
  const double p = std::sqrt(std::max(p2, 0.0));
  if (p < 1e-15) return {q, q, q};
  const double r = std::clamp((shifted / p).determinant().real() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  std::vector<double> ev = {q + 2 * p * std::cos(phi),
                            q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3),
                            q + 2 * p * std::cos(phi + 4 * std::numbers::pi / 3)};
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline std::vector<C> complex_eigenvalues(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  std::vector<C> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  return out;
}

// Greedy matching distance between two eigenvalue multisets.
inline double multiset_distance(std::vector<C> a, std::vector<C> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const C& z : a) {
    auto best = std::min_element(b.begin(), b.end(), [&](C x, C y) {
      return std::abs(x - z) < std::abs(y - z);
    });
    worst = std::max(worst, std::abs(*best - z));
    b.erase(best);
  }
  return worst;
}

// Trace norm of a Hermitian matrix as the sum of |eigenvalues|.
inline double hermitian_trace_norm(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return es.eigenvalues().cwiseAbs().sum();
}

inline Vec bloch(const Mat& rho) {
  Vec r(3);
  for (int k = 1; k <= 3; ++k) r(k - 1) = (sigma(k) * rho).trace();
  return r;
}

// H(rho, I/2) for a qubit with Bloch radius r.
inline double bloch_relative_entropy_to_mixed(double r) {
  auto xlogx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
  return std::log(2.0) + xlogx((1 + r) / 2) + xlogx((1 - r) / 2);
}

inline double binary_entropy_nats(double p) {
  auto xlogx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
  return -xlogx(p) - xlogx(1 - p);
}

// Cesaro average of the period-2 orbit |0><0|, |1><1|, ... over l = 0..n.
inline Mat alternating_cesaro(int n) {
  const double zeros = std::floor(n / 2.0) + 1;
  Mat avg = Mat::Zero(2, 2);
  avg(0, 0) = zeros / (n + 1);
  avg(1, 1) = 1.0 - zeros / (n + 1);
  return avg;
}

// Fixed point by least squares: solve (S - I) vec(X) = 0 with Tr X = 1 appended.
inline Mat fixed_point_least_squares(const Mat& s, int dim) {
  const int n = dim * dim;
  Mat a(n + 1, n);
  a.topRows(n) = s - Mat::Identity(n, n);
  for (int k = 0; k < n; ++k) a(n, k) = (k % (dim + 1) == 0) ? 1.0 : 0.0;
  Vec b = Vec::Zero(n + 1);
  b(n) = 1.0;
  const Vec x = a.colPivHouseholderQr().solve(b);
  Mat out(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) out(r, c) = x(r + c * dim);
  return out;
}

// SWAP eigenbasis on two qubits: triplet (eigenvalue +1) and singlet (-1).
inline std::vector<Vec> swap_eigenbasis() {
  const double h = std::sqrt(0.5);
  Vec t0 = Vec::Zero(4), t1 = Vec::Zero(4), t2 = Vec::Zero(4), s = Vec::Zero(4);
  t0(0) = 1;
  t1(1) = h;
  t1(2) = h;
  t2(3) = 1;
  s(1) = h;
  s(2) = -h;
  return {t0, t1, t2, s};
}

}  // namespace oracle
