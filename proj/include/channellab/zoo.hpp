#pragma once

// Named channels used as fixtures: the two worked examples, standard
// parametric families, dilation-defined channels and seeded random channels.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "channellab/channel.hpp"
#include "channellab/dilation.hpp"
#include "channellab/spectral.hpp"

namespace channellab::zoo {

enum class Provenance { paper, derived, random };
const char* to_string(Provenance p);

struct ChannelSpec {
  std::string name;
  int dim = 2;
  std::map<std::string, double> parameters;
  std::optional<Verdict> expected_verdict;
  Provenance provenance = Provenance::derived;
};

struct CatalogEntry {
  std::string name;
  int dim;
  std::map<std::string, double> default_parameters;
  std::string description;
};

/// Every builder name known to build().
const std::vector<CatalogEntry>& catalog();

/// Throws PreconditionError for an unknown name or out-of-range parameters.
KrausChannel build(const ChannelSpec& spec);

/// Convenience: build by name with the catalog defaults overridden by `parameters`.
KrausChannel build(const std::string& name, const std::map<std::string, double>& parameters = {});

KrausChannel example_ergodic();
KrausChannel example_mixing();
KrausChannel depolarizing(double p, int dim = 2);
KrausChannel amplitude_damping(double gamma);
KrausChannel dephasing(double p);
KrausChannel unitary_channel(const ComplexMatrix& u, std::string label = "unitary");
/// exp(-i theta sigma_x / 2).
ComplexMatrix x_rotation(double theta);

/// cos(theta) I + i sin(theta) SWAP on two qubits.
ComplexMatrix partial_swap(double theta);
ComplexMatrix controlled_z();

/// Dilations conserving sigma_z (x) I + I (x) sigma_z with bath |0>, extremal max.
ConservedDilation partial_swap_dilation(double theta);
ConservedDilation cz_dilation();

/// Kraus operators are blocks of a Haar-random isometry H -> H (x) C^kraus_rank.
KrausChannel random_channel(int dim, int kraus_rank, std::uint64_t seed);

/// Haar-random unitary via QR of a complex Gaussian matrix with phase-fixed R.
ComplexMatrix haar_unitary(int dim, std::uint64_t seed);

/// The shared fixture set: paper examples, parametric instances with known
/// verdicts and seeded random channels.
std::vector<ChannelSpec> standard_fixtures();

}  // namespace channellab::zoo
