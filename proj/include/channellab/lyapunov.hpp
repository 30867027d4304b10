#pragma once

// Orbits of channels and the functional mixing criteria: trivial Lyapunov
// function, relative entropy to the fixed point, von Neumann entropy for unital
// channels, asymptotic deformation, Cesaro averages and a brute-force orbit oracle.
//
// Functionals are checked in a single orientation: the "oriented" value is
// expected to be non-decreasing under the channel. Distances and relative
// entropies enter negated; the von Neumann entropy enters as is.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "channellab/channel.hpp"
#include "channellab/spectral.hpp"

namespace channellab {

enum class Functional { trivial_lyapunov, relative_entropy, von_neumann_entropy };

const char* to_string(Functional f);
/// Throws PreconditionError on an unknown name.
Functional functional_from_string(const std::string& name);

struct OrbitTrace {
  std::vector<DensityMatrix> states;  // rho, tau(rho), ..., tau^n(rho)
  std::map<std::string, std::vector<double>> functional_values;
  std::vector<double> distance_to_fixed_point;  // empty when the fixed point is not unique
  int n_steps = 0;
};

/// Generates n + 1 states. Functionals that need a reference state use
/// `fixed_point` or, when absent, the unique spectral fixed point.
OrbitTrace orbit(const KrausChannel& c, const DensityMatrix& rho0, int n,
                 const std::vector<Functional>& functionals = {},
                 const std::optional<DensityMatrix>& fixed_point = std::nullopt);

double trivial_lyapunov(const DensityMatrix& rho, const DensityMatrix& fixed_point);

/// Tr rho (ln rho - ln sigma) in nats; +inf when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

double von_neumann_entropy(const DensityMatrix& rho);

struct LyapunovStateResult {
  double initial_value = 0.0;  // raw functional values
  double horizon_value = 0.0;
  double monotone_defect = 0.0;  // max over steps of the oriented decrease
  double limit_gap = 0.0;        // |S(tau^n rho) - S(rho)|
  std::optional<int> n_strict;   // first step with |S(tau^N rho) - S(rho)| > tol::strict_change
  bool limit_stable = true;      // oriented values vary < tol::limit_gap over the last 10%
  bool is_fixed_point = false;
};

struct LyapunovVerdict {
  Functional functional = Functional::trivial_lyapunov;
  double monotone_defect = 0.0;   // worst over trial states
  double limit_gap = 0.0;         // smallest over non-fixed trial states
  std::optional<int> n_strict;    // largest per-state n_strict, present if all have one
  bool is_generalized_lyapunov_evidence = false;
  std::optional<std::string> hypothesis_violation;
  std::vector<LyapunovStateResult> per_state;
};

LyapunovVerdict verify_generalized_lyapunov(const KrausChannel& c, Functional functional,
                                            const std::vector<DensityMatrix>& trial_states,
                                            int n);

struct DeformationPair {
  double initial_distance = 0.0;
  double horizon_distance = 0.0;
};

struct DeformationEstimate {
  std::vector<DeformationPair> pairs;
  bool is_deformation_evidence = false;  // every pair moved by more than tol::limit_gap
};

DeformationEstimate asymptotic_deformation_estimate(
    const KrausChannel& c, const std::vector<std::pair<DensityMatrix, DensityMatrix>>& pairs,
    int n);

struct WeakContractionWitness {
  std::size_t pair_index = 0;
  double distance_before = 0.0;
  double distance_after = 0.0;
};

struct WeakContractionResult {
  bool is_violated = false;
  std::optional<WeakContractionWitness> witness;
};

WeakContractionResult weak_contraction_check(
    const KrausChannel& c, const std::vector<std::pair<DensityMatrix, DensityMatrix>>& pairs);

/// (1 / (n + 1)) sum_{l=0}^{n} tau^l(rho0).
DensityMatrix cesaro_average(const KrausChannel& c, const DensityMatrix& rho0, int n);

/// Cesaro averages at several checkpoints from one pass over the orbit.
std::vector<std::pair<int, DensityMatrix>> cesaro_checkpoints(const KrausChannel& c,
                                                              const DensityMatrix& rho0,
                                                              std::vector<int> checkpoints);

enum class OracleVerdict { mixing, not_mixing_within_horizon };
const char* to_string(OracleVerdict v);

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::not_mixing_within_horizon;
  double max_pairwise_distance = 0.0;   // at n_max
  double max_trailing_distance = 0.0;   // over the last 10% of steps
  int probe_count = 0;
};

/// Haar-random pure state from a normalized complex Gaussian vector.
DensityMatrix haar_random_pure(int dim, std::mt19937_64& rng);

/// Computational basis states, `random_count` Haar-random pure states and I / dim.
std::vector<DensityMatrix> probe_states(int dim, std::uint64_t seed, int random_count = 10);

/// All unordered pairs of distinct probe states.
std::vector<std::pair<DensityMatrix, DensityMatrix>> probe_pairs(int dim, std::uint64_t seed,
                                                                 int random_count = 10);

OracleResult orbit_oracle(const KrausChannel& c, int n_max, double tolerance,
                          std::uint64_t seed = 0);

}  // namespace channellab
