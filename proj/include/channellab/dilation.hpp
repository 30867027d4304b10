#pragma once

// Channels tau(rho) = Tr_B[U (rho (x) |phi><phi|) U^dag] whose dilation unitary
// conserves an additive observable M_AB = M_A (x) I + I (x) M_B, with |phi> the
// eigenvector of a non-degenerate extremal eigenvalue of M_B. Such a channel is
// mixing iff U has exactly one eigenstate of the form |nu> (x) |phi>.

#include <optional>
#include <string>
#include <vector>

#include "channellab/channel.hpp"
#include "channellab/spectral.hpp"

namespace channellab {

enum class Extremal { max, min };

const char* to_string(Extremal e);
Extremal extremal_from_string(const std::string& s);

struct ConservedDilation {
  StinespringDilation dilation;
  ComplexMatrix m_a;  // Hermitian, dim_a
  ComplexMatrix m_b;  // Hermitian, dim_b
  Extremal extremal = Extremal::max;
};

struct ConservedValidationReport {
  double unitarity_defect = 0.0;
  double bath_norm_defect = 0.0;
  double commutator_norm = 0.0;        // ||[M_AB, U]||_max
  double bath_eigen_residual = 0.0;    // ||M_B phi - <phi|M_B|phi> phi||_2
  double bath_expectation = 0.0;       // <phi|M_B|phi>
  double extremal_eigenvalue = 0.0;    // max or min eigenvalue of M_B
  double extremal_gap = 0.0;           // distance to the nearest other eigenvalue
  std::vector<std::string> failed;     // names of failed hypotheses

  bool passed() const { return failed.empty(); }
};

ConservedValidationReport validate_conserved(const ConservedDilation& cd);

struct FactorizingEigenstateReport {
  int count = 0;
  std::vector<ComplexVector> states;          // |nu_k>, unit vectors in H_A
  std::vector<Complex> unitary_eigenvalues;   // eigenvalue of U for each state
  std::vector<Complex> degenerate_clusters;   // centers of U-eigenvalue clusters of size > 1
  Verdict verdict = Verdict::not_ergodic;     // mixing iff count == 1
};

/// Throws PreconditionError if the hypotheses fail, InconsistencyError if no
/// factorizing eigenstate exists.
FactorizingEigenstateReport find_factorizing_eigenstates(const ConservedDilation& cd);

struct ConsistencyReport {
  Verdict factorizing_verdict = Verdict::not_ergodic;
  Verdict spectral_verdict = Verdict::not_ergodic;
  bool verdicts_agree = false;
  std::optional<double> fixed_point_distance;  // ||rho_spectral - |nu><nu| ||_1 when mixing
  double max_factorizing_fixed_residual = 0.0;  // max_k ||tau(|nu_k><nu_k|) - |nu_k><nu_k| ||_1
  bool consistent = false;
  FactorizingEigenstateReport factorizing;
  SpectralReport spectral;
};

ConsistencyReport cross_validate(const ConservedDilation& cd);

/// Tr[M_B Tr_A(U (rho (x) phi phi^dag) U^dag)] - <phi|M_B|phi>. Its sign is fixed
/// by the extremal choice: <= 0 for max, >= 0 for min.
double bath_outflow(const ConservedDilation& cd, const DensityMatrix& rho);

/// Tr[M_A rho].
double system_expectation(const ConservedDilation& cd, const DensityMatrix& rho);

}  // namespace channellab
