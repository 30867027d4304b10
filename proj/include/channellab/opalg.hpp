#pragma once

// Dense complex linear algebra used by the rest of the library.
//
// Matrices are Eigen::MatrixXcd. The non-Hermitian eigensolver (Hessenberg
// reduction followed by shifted QR to complex Schur form) is implemented
// here; Hermitian eigendecomposition and SVD delegate to Eigen.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "channellab/tolerances.hpp"

namespace channellab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Subsystem { A, B };

struct EigenSystem {
  std::vector<Complex> eigenvalues;
  ComplexMatrix eigenvectors;            // unit-norm columns, one per eigenvalue
  std::vector<double> vector_residuals;  // ||A v - lambda v||_2 per column
  double residual = 0.0;                 // max of vector_residuals
};

struct HermitianEigenSystem {
  RealVector eigenvalues;  // ascending
  ComplexMatrix eigenvectors;
  double residual = 0.0;
};

struct SchurForm {
  ComplexMatrix unitary;     // Z
  ComplexMatrix triangular;  // T, with A = Z T Z^dag
  int iterations = 0;
};

struct SvdResult {
  ComplexMatrix u;
  RealVector singular_values;  // descending
  ComplexMatrix v;             // m = u * diag(s) * v^dag
};

struct LogResult {
  ComplexMatrix log;
  ComplexMatrix support_projector;
};

struct PolarResult {
  ComplexMatrix positive;  // P = sqrt(m m^dag)
  ComplexMatrix unitary;   // m = P * U
};

/// Throws DimensionError if not square, PreconditionError on NaN/Inf.
void require_square(const ComplexMatrix& m, const char* where);
bool all_finite(const ComplexMatrix& m);

double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);
ComplexMatrix hermitize(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Partial trace of an operator on H_A (x) H_B, with basis index a * dim_b + b.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep);

HermitianEigenSystem hermitian_eig(const ComplexMatrix& m);

SchurForm complex_schur(const ComplexMatrix& m);

/// Full spectrum of a general square matrix via complex Schur form.
/// Eigenvectors come from triangular back-substitution and may be
/// ill-conditioned for defective matrices; per-vector residuals are reported.
EigenSystem general_eig(const ComplexMatrix& m);

SvdResult svd(const ComplexMatrix& m);

/// Orthonormal basis (columns) for the `count` least singular right directions of m.
ComplexMatrix least_singular_subspace(const ComplexMatrix& m, int count);

double trace_norm(const ComplexMatrix& m);
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix psd_sqrt(const ComplexMatrix& m);

LogResult log_on_support(const ComplexMatrix& m, double support_tol = tol::support);

PolarResult polar_left(const ComplexMatrix& m);

/// Groups values that lie within `tolerance` of each other (single linkage).
std::vector<std::vector<int>> cluster_values(const std::vector<Complex>& values,
                                             double tolerance = tol::cluster);

ComplexMatrix matrix_power(const ComplexMatrix& m, long long n);

}  // namespace channellab
