#include "channellab/zoo.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "channellab/errors.hpp"

namespace channellab::zoo {

namespace {

using std::numbers::pi;

ComplexMatrix ket_bra(int dim, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

void require_probability(const char* name, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw PreconditionError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

double param(const std::map<std::string, double>& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw PreconditionError("missing parameter '" + key + "'");
  return it->second;
}

int integer_param(const std::map<std::string, double>& params, const std::string& key) {
  const double v = param(params, key);
  if (v != std::floor(v) || v < 0) {
    throw PreconditionError("parameter '" + key + "' must be a non-negative integer");
  }
  return static_cast<int>(v);
}

ComplexMatrix sigma_z() {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

ConservedDilation z_conserving(ComplexMatrix u) {
  ConservedDilation cd;
  cd.dilation.dim_a = 2;
  cd.dilation.dim_b = 2;
  cd.dilation.unitary = std::move(u);
  cd.dilation.bath_state = ComplexVector::Unit(2, 0);
  cd.m_a = sigma_z();
  cd.m_b = sigma_z();
  cd.extremal = Extremal::max;
  return cd;
}

ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

// First `cols` columns of Q from QR(g), with R's diagonal made positive.
ComplexMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  const ComplexMatrix g = gaussian_matrix(rows, cols, seed);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  ComplexMatrix out = q;
  for (Eigen::Index k = 0; k < cols; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) out.col(k) *= d / std::abs(d);
  }
  return out;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::paper:
      return "paper";
    case Provenance::derived:
      return "derived";
    case Provenance::random:
      return "random";
  }
  return "unknown";
}

KrausChannel example_ergodic() {
  return KrausChannel(2, {ket_bra(2, 1, 0), ket_bra(2, 0, 1)}, "example-ergodic");
}

KrausChannel example_mixing() {
  return KrausChannel(3, {ket_bra(3, 1, 2), ket_bra(3, 0, 1), ket_bra(3, 0, 0)}, "example-mixing");
}

KrausChannel depolarizing(double p, int dim) {
  require_probability("depolarizing p", p);
  if (dim < 1) throw PreconditionError("depolarizing: dim must be positive");
  // rho -> (1 - p) rho + p I / dim, via the Weyl operators X^a Z^b.
  const double d = dim;
  ComplexMatrix shift = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix clock = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    shift((k + 1) % dim, k) = 1.0;
    clock(k, k) = std::polar(1.0, 2.0 * pi * k / d);
  }
  std::vector<ComplexMatrix> ops;
  ops.push_back(std::sqrt(1.0 - p + p / (d * d)) * ComplexMatrix::Identity(dim, dim));
  if (p > 0.0) {
    ComplexMatrix xa = ComplexMatrix::Identity(dim, dim);
    for (int a = 0; a < dim; ++a) {
      ComplexMatrix zb = ComplexMatrix::Identity(dim, dim);
      for (int b = 0; b < dim; ++b) {
        if (a != 0 || b != 0) ops.push_back(std::sqrt(p) / d * xa * zb);
        zb = zb * clock;
      }
      xa = xa * shift;
    }
  }
  return KrausChannel(dim, std::move(ops), "depolarizing");
}

KrausChannel amplitude_damping(double gamma) {
  require_probability("amplitude-damping gamma", gamma);
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel(2, {k0, k1}, "amplitude-damping");
}

KrausChannel dephasing(double p) {
  require_probability("dephasing p", p);
  // Coherences shrink by (1 - p); populations are untouched.
  return KrausChannel(2,
                      {std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2),
                       std::sqrt(p) * ket_bra(2, 0, 0), std::sqrt(p) * ket_bra(2, 1, 1)},
                      "dephasing");
}

KrausChannel unitary_channel(const ComplexMatrix& u, std::string label) {
  require_square(u, "unitary_channel");
  const double defect = max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
  if (defect > tol::unitarity) {
    throw PreconditionError("unitary_channel: matrix is not unitary (defect " +
                            std::to_string(defect) + ")");
  }
  return KrausChannel(static_cast<int>(u.rows()), {u}, std::move(label));
}

ComplexMatrix x_rotation(double theta) {
  ComplexMatrix u(2, 2);
  u << std::cos(theta / 2), Complex(0.0, -std::sin(theta / 2)), Complex(0.0, -std::sin(theta / 2)),
      std::cos(theta / 2);
  return u;
}

ComplexMatrix partial_swap(double theta) {
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) swap(b * 2 + a, a * 2 + b) = 1.0;
  return std::cos(theta) * ComplexMatrix::Identity(4, 4) + Complex(0.0, std::sin(theta)) * swap;
}

ComplexMatrix controlled_z() {
  ComplexMatrix cz = ComplexMatrix::Identity(4, 4);
  cz(3, 3) = -1.0;
  return cz;
}

ConservedDilation partial_swap_dilation(double theta) { return z_conserving(partial_swap(theta)); }

ConservedDilation cz_dilation() { return z_conserving(controlled_z()); }

ComplexMatrix haar_unitary(int dim, std::uint64_t seed) { return haar_isometry(dim, dim, seed); }

KrausChannel random_channel(int dim, int kraus_rank, std::uint64_t seed) {
  if (dim < 1) throw PreconditionError("random_channel: dim must be positive");
  if (kraus_rank < 1 || kraus_rank > dim * dim) {
    throw PreconditionError("random_channel: kraus_rank must lie in [1, dim^2]");
  }
  const ComplexMatrix v = haar_isometry(static_cast<Eigen::Index>(dim) * kraus_rank, dim, seed);
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < kraus_rank; ++k) ops.push_back(v.block(k * dim, 0, dim, dim));
  return KrausChannel(dim, std::move(ops),
                      "random(" + std::to_string(dim) + "," + std::to_string(kraus_rank) + "," +
                          std::to_string(seed) + ")");
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"example-ergodic", 2, {}, "completely dephasing qubit channel followed by a NOT gate"},
      {"example-mixing", 3, {}, "qutrit channel |2><2| -> |1><1| -> |0><0|, coherences erased"},
      {"depolarizing", 2, {{"p", 0.5}, {"dim", 2}}, "rho -> (1 - p) rho + p I / dim"},
      {"amplitude-damping", 2, {{"gamma", 0.3}}, "qubit decay |1> -> |0> with probability gamma"},
      {"dephasing", 2, {{"p", 0.5}}, "qubit coherences multiplied by (1 - p)"},
      {"unitary", 2, {{"theta", pi / 3}}, "conjugation by exp(-i theta sigma_x / 2)"},
      {"partial-swap-dilation", 2, {{"theta", pi / 4}},
       "Tr_B[U (rho x |0><0|) U^dag] with U = cos(theta) I + i sin(theta) SWAP"},
      {"cz-dilation", 2, {}, "Tr_B[CZ (rho x |0><0|) CZ]"},
      {"random", 2, {{"dim", 2}, {"rank", 4}, {"seed", 7}},
       "Kraus blocks of a seeded Haar-random isometry"},
  };
  return entries;
}

KrausChannel build(const ChannelSpec& spec) {
  const auto& p = spec.parameters;
  for (const CatalogEntry& e : catalog()) {
    if (e.name != spec.name) continue;
    for (const auto& [key, value] : p) {
      if (!e.default_parameters.count(key)) {
        throw PreconditionError("zoo channel '" + spec.name + "' has no parameter '" + key + "'");
      }
    }
  }
  KrausChannel c = [&]() -> KrausChannel {
    if (spec.name == "example-ergodic") return example_ergodic();
    if (spec.name == "example-mixing") return example_mixing();
    if (spec.name == "depolarizing") {
      return depolarizing(param(p, "p"), p.count("dim") ? integer_param(p, "dim") : 2);
    }
    if (spec.name == "amplitude-damping") return amplitude_damping(param(p, "gamma"));
    if (spec.name == "dephasing") return dephasing(param(p, "p"));
    if (spec.name == "unitary") return unitary_channel(x_rotation(param(p, "theta")));
    if (spec.name == "partial-swap-dilation") {
      return from_stinespring(partial_swap_dilation(param(p, "theta")).dilation);
    }
    if (spec.name == "cz-dilation") return from_stinespring(cz_dilation().dilation);
    if (spec.name == "random") {
      return random_channel(integer_param(p, "dim"), integer_param(p, "rank"),
                            static_cast<std::uint64_t>(integer_param(p, "seed")));
    }
    throw PreconditionError("unknown zoo channel '" + spec.name + "'");
  }();
  c.label = spec.name;
  require_cpt(c);
  return c;
}

KrausChannel build(const std::string& name, const std::map<std::string, double>& parameters) {
  ChannelSpec spec;
  spec.name = name;
  for (const CatalogEntry& e : catalog()) {
    if (e.name == name) {
      spec.dim = e.dim;
      spec.parameters = e.default_parameters;
    }
  }
  for (const auto& [k, v] : parameters) spec.parameters[k] = v;
  return build(spec);
}

std::vector<ChannelSpec> standard_fixtures() {
  using V = Verdict;
  using P = Provenance;
  return {
      {"example-ergodic", 2, {}, V::ergodic_not_mixing, P::paper},
      {"example-mixing", 3, {}, V::mixing, P::paper},
      {"depolarizing", 2, {{"p", 0.25}}, V::mixing, P::derived},
      {"depolarizing", 2, {{"p", 0.5}}, V::mixing, P::derived},
      {"depolarizing", 3, {{"p", 0.4}, {"dim", 3}}, V::mixing, P::derived},
      {"amplitude-damping", 2, {{"gamma", 0.3}}, V::mixing, P::derived},
      {"amplitude-damping", 2, {{"gamma", 0.7}}, V::mixing, P::derived},
      {"dephasing", 2, {{"p", 0.3}}, V::not_ergodic, P::derived},
      {"dephasing", 2, {{"p", 0.6}}, V::not_ergodic, P::derived},
      {"unitary", 2, {{"theta", pi / 3}}, V::not_ergodic, P::derived},
      {"unitary", 2, {{"theta", pi / 2}}, V::not_ergodic, P::derived},
      {"partial-swap-dilation", 2, {{"theta", pi / 4}}, V::mixing, P::derived},
      {"partial-swap-dilation", 2, {{"theta", pi / 2}}, V::mixing, P::derived},
      {"cz-dilation", 2, {}, V::not_ergodic, P::derived},
      {"random", 2, {{"dim", 2}, {"rank", 4}, {"seed", 7}}, std::nullopt, P::random},
      {"random", 3, {{"dim", 3}, {"rank", 2}, {"seed", 11}}, std::nullopt, P::random},
      {"random", 3, {{"dim", 3}, {"rank", 9}, {"seed", 5}}, std::nullopt, P::random},
      {"random", 4, {{"dim", 4}, {"rank", 3}, {"seed", 13}}, std::nullopt, P::random},
  };
}

}  // namespace channellab::zoo
