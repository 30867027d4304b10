#include "channellab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "channellab/errors.hpp"

namespace channellab {

namespace {

double hermitian_trace_norm(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("trace norm: eigensolver failed");
  return solver.eigenvalues().cwiseAbs().sum();
}

double oriented(Functional f, double raw) {
  return f == Functional::von_neumann_entropy ? raw : -raw;
}

double evaluate(Functional f, const DensityMatrix& rho, const DensityMatrix& reference) {
  switch (f) {
    case Functional::trivial_lyapunov:
      return trivial_lyapunov(rho, reference);
    case Functional::relative_entropy:
      return relative_entropy(rho, reference);
    case Functional::von_neumann_entropy:
      return von_neumann_entropy(rho);
  }
  return 0.0;
}

bool needs_reference(Functional f) { return f != Functional::von_neumann_entropy; }

void require_pairs_distinct(const std::vector<std::pair<DensityMatrix, DensityMatrix>>& pairs,
                            const char* where) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (trace_distance(pairs[i].first, pairs[i].second) <= 1e-9) {
      throw PreconditionError(std::string(where) + ": pair " + std::to_string(i) +
                              " is not distinct");
    }
  }
}

}  // namespace

const char* to_string(Functional f) {
  switch (f) {
    case Functional::trivial_lyapunov:
      return "trivial_lyapunov";
    case Functional::relative_entropy:
      return "relative_entropy";
    case Functional::von_neumann_entropy:
      return "von_neumann_entropy";
  }
  return "unknown";
}

Functional functional_from_string(const std::string& name) {
  if (name == "trivial_lyapunov") return Functional::trivial_lyapunov;
  if (name == "relative_entropy") return Functional::relative_entropy;
  if (name == "von_neumann_entropy") return Functional::von_neumann_entropy;
  throw PreconditionError("unknown functional '" + name + "'");
}

const char* to_string(OracleVerdict v) {
  return v == OracleVerdict::mixing ? "mixing" : "not_mixing_within_horizon";
}

double trivial_lyapunov(const DensityMatrix& rho, const DensityMatrix& fixed_point) {
  if (rho.dim() != fixed_point.dim()) throw DimensionError("trivial_lyapunov: dimension mismatch");
  return trace_distance(rho, fixed_point);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative_entropy: dimension mismatch");
  const LogResult log_sigma = log_on_support(sigma.matrix());
  const double leak = (rho.matrix() - log_sigma.support_projector * rho.matrix()).trace().real();
  if (leak > tol::trace) return std::numeric_limits<double>::infinity();
  const LogResult log_rho = log_on_support(rho.matrix());
  const double h = (rho.matrix() * (log_rho.log - log_sigma.log)).trace().real();
  return std::abs(h) < 1e-12 ? 0.0 : h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector p = hermitian_eig(rho.matrix()).eigenvalues;
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > tol::support) s -= p(i) * std::log(p(i));
  }
  return std::clamp(s, 0.0, std::log(static_cast<double>(rho.dim())));
}

OrbitTrace orbit(const KrausChannel& c, const DensityMatrix& rho0, int n,
                 const std::vector<Functional>& functionals,
                 const std::optional<DensityMatrix>& fixed_point) {
  if (n < 0) throw PreconditionError("orbit: n must be non-negative");
  if (rho0.dim() != c.dim) throw DimensionError("orbit: state dimension mismatch");
  const Superoperator s = to_superoperator(c);

  std::optional<DensityMatrix> reference = fixed_point;
  if (!reference) reference = analyze(s).fixed_point;
  for (Functional f : functionals) {
    if (needs_reference(f) && !reference) {
      throw PreconditionError(std::string("orbit: functional '") + to_string(f) +
                              "' needs a unique fixed point");
    }
  }

  OrbitTrace trace;
  trace.n_steps = n;
  trace.states.reserve(n + 1);
  trace.states.push_back(rho0);
  for (int k = 0; k < n; ++k) trace.states.push_back(apply(s, trace.states.back()));

  for (Functional f : functionals) {
    std::vector<double>& values = trace.functional_values[to_string(f)];
    values.reserve(trace.states.size());
    for (const DensityMatrix& rho : trace.states) {
      values.push_back(evaluate(f, rho, reference ? *reference : rho));
    }
  }
  if (reference) {
    for (const DensityMatrix& rho : trace.states) {
      trace.distance_to_fixed_point.push_back(trace_distance(rho, *reference));
    }
  }
  return trace;
}

LyapunovVerdict verify_generalized_lyapunov(const KrausChannel& c, Functional functional,
                                            const std::vector<DensityMatrix>& trial_states,
                                            int n) {
  if (n < 1) throw PreconditionError("verify_generalized_lyapunov: n must be at least 1");
  LyapunovVerdict verdict;
  verdict.functional = functional;

  const Superoperator s = to_superoperator(c);
  const SpectralReport report = analyze(s);
  std::optional<DensityMatrix> reference;
  if (functional == Functional::von_neumann_entropy) {
    if (!is_unital(c)) {
      verdict.hypothesis_violation = "channel is not unital";
      return verdict;
    }
    reference = DensityMatrix::maximally_mixed(c.dim);
  } else {
    if (!report.fixed_point) {
      verdict.hypothesis_violation = "fixed point is not unique";
      return verdict;
    }
    reference = report.fixed_point;
    if (functional == Functional::relative_entropy && !reference->is_faithful()) {
      verdict.hypothesis_violation = "fixed point is not faithful";
      return verdict;
    }
  }

  bool evidence = true;
  bool any_moving = false;
  verdict.limit_gap = std::numeric_limits<double>::infinity();
  bool all_strict = true;
  int worst_strict = 0;
  const int trailing = std::max(1, n / 10);

  for (const DensityMatrix& rho0 : trial_states) {
    if (rho0.dim() != c.dim) throw DimensionError("verify_generalized_lyapunov: state dimension");
    LyapunovStateResult r;
    r.is_fixed_point = trace_distance(rho0, *reference) <= 1e-9;

    DensityMatrix rho = rho0;
    const double first = evaluate(functional, rho, *reference);
    r.initial_value = first;
    double previous = oriented(functional, first);
    double trail_min = std::numeric_limits<double>::infinity();
    double trail_max = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
      rho = apply(s, rho);
      const double raw = evaluate(functional, rho, *reference);
      const double o = oriented(functional, raw);
      if (std::isfinite(o) && std::isfinite(previous)) {
        r.monotone_defect = std::max(r.monotone_defect, previous - o);
      }
      if (!r.n_strict && std::abs(raw - first) > tol::strict_change) r.n_strict = k;
      if (k > n - trailing) {
        trail_min = std::min(trail_min, o);
        trail_max = std::max(trail_max, o);
      }
      previous = o;
      r.horizon_value = raw;
    }
    r.limit_gap = std::abs(r.horizon_value - r.initial_value);
    if (!std::isfinite(r.limit_gap)) r.limit_gap = std::numeric_limits<double>::infinity();
    r.limit_stable = (trail_max - trail_min) < tol::limit_gap;

    verdict.monotone_defect = std::max(verdict.monotone_defect, r.monotone_defect);
    if (!r.is_fixed_point) {
      any_moving = true;
      verdict.limit_gap = std::min(verdict.limit_gap, r.limit_gap);
      if (r.limit_gap <= tol::limit_gap || r.monotone_defect > tol::strict_change) evidence = false;
      if (r.n_strict) {
        worst_strict = std::max(worst_strict, *r.n_strict);
      } else {
        all_strict = false;
      }
    }
    verdict.per_state.push_back(r);
  }
  if (!any_moving) verdict.limit_gap = 0.0;
  if (any_moving && all_strict) verdict.n_strict = worst_strict;
  verdict.is_generalized_lyapunov_evidence = evidence && any_moving;
  return verdict;
}

DeformationEstimate asymptotic_deformation_estimate(
    const KrausChannel& c, const std::vector<std::pair<DensityMatrix, DensityMatrix>>& pairs,
    int n) {
  if (n < 1) throw PreconditionError("asymptotic_deformation_estimate: n must be at least 1");
  require_pairs_distinct(pairs, "asymptotic_deformation_estimate");
  const Superoperator sn = power(c, n);
  DeformationEstimate out;
  out.is_deformation_evidence = !pairs.empty();
  for (const auto& [rho, sigma] : pairs) {
    DeformationPair p;
    p.initial_distance = trace_distance(rho, sigma);
    p.horizon_distance = hermitian_trace_norm(apply_superoperator(sn, rho.matrix()) -
                                              apply_superoperator(sn, sigma.matrix()));
    if (std::abs(p.horizon_distance - p.initial_distance) <= tol::limit_gap) {
      out.is_deformation_evidence = false;
    }
    out.pairs.push_back(p);
  }
  return out;
}

WeakContractionResult weak_contraction_check(
    const KrausChannel& c, const std::vector<std::pair<DensityMatrix, DensityMatrix>>& pairs) {
  require_pairs_distinct(pairs, "weak_contraction_check");
  WeakContractionResult out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double before = trace_distance(pairs[i].first, pairs[i].second);
    const double after = trace_distance(apply_operator(c, pairs[i].first.matrix()),
                                        apply_operator(c, pairs[i].second.matrix()));
    if (after >= before - 1e-9) {
      out.is_violated = true;
      out.witness = WeakContractionWitness{i, before, after};
      break;
    }
  }
  return out;
}

std::vector<std::pair<int, DensityMatrix>> cesaro_checkpoints(const KrausChannel& c,
                                                              const DensityMatrix& rho0,
                                                              std::vector<int> checkpoints) {
  if (rho0.dim() != c.dim) throw DimensionError("cesaro_average: state dimension mismatch");
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  std::vector<std::pair<int, DensityMatrix>> out;
  if (checkpoints.empty()) return out;
  if (checkpoints.front() < 0) throw PreconditionError("cesaro_average: negative n");

  const Superoperator s = to_superoperator(c);
  ComplexMatrix state = rho0.matrix();
  ComplexMatrix sum = ComplexMatrix::Zero(c.dim, c.dim);
  std::size_t next = 0;
  for (int l = 0; next < checkpoints.size(); ++l) {
    sum += state;
    if (l == checkpoints[next]) {
      ComplexMatrix avg = hermitize(sum / static_cast<double>(l + 1));
      avg /= avg.trace().real();
      out.emplace_back(l, DensityMatrix(avg));
      ++next;
    }
    state = apply_superoperator(s, state);
  }
  return out;
}

DensityMatrix cesaro_average(const KrausChannel& c, const DensityMatrix& rho0, int n) {
  if (n < 1) throw PreconditionError("cesaro_average: n must be at least 1");
  return cesaro_checkpoints(c, rho0, {n}).front().second;
}

DensityMatrix haar_random_pure(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector psi(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi(i) = Complex(re, im);
  }
  return DensityMatrix::pure(psi);
}

std::vector<DensityMatrix> probe_states(int dim, std::uint64_t seed, int random_count) {
  std::vector<DensityMatrix> probes;
  for (int k = 0; k < dim; ++k) probes.push_back(DensityMatrix::basis_state(dim, k));
  std::mt19937_64 rng(seed);
  for (int k = 0; k < random_count; ++k) probes.push_back(haar_random_pure(dim, rng));
  probes.push_back(DensityMatrix::maximally_mixed(dim));
  return probes;
}

std::vector<std::pair<DensityMatrix, DensityMatrix>> probe_pairs(int dim, std::uint64_t seed,
                                                                 int random_count) {
  const std::vector<DensityMatrix> probes = probe_states(dim, seed, random_count);
  std::vector<std::pair<DensityMatrix, DensityMatrix>> pairs;
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j) pairs.emplace_back(probes[i], probes[j]);
  return pairs;
}

OracleResult orbit_oracle(const KrausChannel& c, int n_max, double tolerance,
                          std::uint64_t seed) {
  if (n_max < 100) throw PreconditionError("orbit_oracle: n_max must be at least 100");
  const Superoperator s = to_superoperator(c);
  const std::vector<DensityMatrix> probes = probe_states(c.dim, seed);

  std::vector<ComplexVector> states;
  for (const DensityMatrix& p : probes) states.push_back(vec(p.matrix()));

  OracleResult out;
  out.probe_count = static_cast<int>(states.size());
  const int window_start = n_max - std::max(1, n_max / 10) + 1;
  for (int k = 1; k <= n_max; ++k) {
    for (ComplexVector& v : states) v = s.matrix * v;
    if (k < window_start) continue;
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = i + 1; j < states.size(); ++j) {
        worst = std::max(worst, hermitian_trace_norm(unvec(states[i] - states[j], c.dim)));
      }
    }
    out.max_trailing_distance = std::max(out.max_trailing_distance, worst);
    if (k == n_max) out.max_pairwise_distance = worst;
  }
  out.verdict = (out.max_pairwise_distance < tolerance && out.max_trailing_distance < tolerance)
                    ? OracleVerdict::mixing
                    : OracleVerdict::not_mixing_within_horizon;
  return out;
}

}  // namespace channellab
