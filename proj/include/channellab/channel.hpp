#pragma once

// Quantum channel representations: Kraus sets, superoperators (column-stacking
// vectorization, vec(AXB) = (B^T (x) A) vec(X)), Choi matrices and Stinespring
// dilations.

#include <optional>
#include <string>
#include <vector>

#include "channellab/opalg.hpp"

namespace channellab {

/// Hermitian, positive semidefinite, unit-trace matrix. Validated on construction.
class DensityMatrix {
 public:
  /// Throws PreconditionError unless m is a state within the default tolerances.
  /// Tiny violations (below the tolerances) are projected away.
  explicit DensityMatrix(const ComplexMatrix& m);

  static DensityMatrix basis_state(int dim, int k);
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix pure(const ComplexVector& psi);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double purity() const;
  bool is_faithful(double support_tol = tol::support) const;

 private:
  ComplexMatrix matrix_;
};

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

struct KrausChannel {
  int dim = 0;
  std::vector<ComplexMatrix> kraus_ops;
  std::string label;

  /// Checks shapes only (nonempty, all dim x dim, finite). CPT is checked by validate_cpt.
  KrausChannel(int dim, std::vector<ComplexMatrix> ops, std::string label = {});
};

struct ValidationReport {
  double completeness_defect = 0.0;  // ||sum K^dag K - I||_max
  double min_choi_eigenvalue = 0.0;
  bool trace_preserving = false;
  bool completely_positive = false;

  bool passed() const { return trace_preserving && completely_positive; }
};

struct Superoperator {
  int dim = 0;
  ComplexMatrix matrix;  // dim^2 x dim^2
};

struct StinespringDilation {
  int dim_a = 0;
  int dim_b = 0;
  ComplexMatrix unitary;    // (dim_a*dim_b) square, basis index a * dim_b + b
  ComplexVector bath_state;  // length dim_b

  /// Throws PreconditionError if U is not unitary or the bath state is not normalized.
  void validate() const;
};

ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, int dim);

ComplexMatrix choi_matrix(const KrausChannel& c);
ValidationReport validate_cpt(const KrausChannel& c);

/// Throws PreconditionError when validate_cpt fails.
void require_cpt(const KrausChannel& c);

/// sum_n K_n rho K_n^dag on an arbitrary operator.
ComplexMatrix apply_operator(const KrausChannel& c, const ComplexMatrix& x);
DensityMatrix apply(const KrausChannel& c, const DensityMatrix& rho);

Superoperator to_superoperator(const KrausChannel& c);
ComplexMatrix apply_superoperator(const Superoperator& s, const ComplexMatrix& x);

/// Output of applying the superoperator to a state, trace-checked and renormalized.
DensityMatrix apply(const Superoperator& s, const DensityMatrix& rho);

KrausChannel from_stinespring(const StinespringDilation& d);

/// Tr_B[U (rho (x) |phi><phi|) U^dag], evaluated directly on the dilation.
ComplexMatrix apply_dilation(const StinespringDilation& d, const ComplexMatrix& rho);

/// first o second: Kraus set {K_i L_j} with K from `first`, L from `second`.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

Superoperator power(const KrausChannel& c, long long n);
Superoperator power(const Superoperator& s, long long n);

bool is_unital(const KrausChannel& c, double tolerance = 1e-9);

/// Mixes the Kraus index by a unitary: K'_i = sum_j w(i, j) K_j. Same channel.
KrausChannel rotate_kraus_gauge(const KrausChannel& c, const ComplexMatrix& w);

}  // namespace channellab
