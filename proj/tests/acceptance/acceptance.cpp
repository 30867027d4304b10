// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is non-zero when any criterion fails, except those listed in
// `known_unattainable`, which still print FAIL together with the reason.
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "channellab/channel.hpp"
#include "channellab/dilation.hpp"
#include "channellab/errors.hpp"
#include "channellab/lyapunov.hpp"
#include "channellab/spectral.hpp"
#include "channellab/zoo.hpp"

using namespace channellab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects sub-check results; the outcome passes only if every sub-check does.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_.push_back(what);
    }
  }
  void note(const std::string& s) { notes_.push_back(s); }
  Outcome outcome() const {
    std::ostringstream os;
    std::vector<std::string> items = pass_ ? notes_ : failures_;
    if (!pass_) items.insert(items.end(), notes_.begin(), notes_.end());
    for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "; " : "") << items[i];
    return {pass_, os.str()};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

DensityMatrix projector(int dim, int k) { return DensityMatrix::basis_state(dim, k); }

ComplexMatrix matrix_unit(int dim, int j, int k) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(j, k) = 1.0;
  return m;
}

std::string fixture_name(const zoo::ChannelSpec& s) {
  std::ostringstream os;
  os << s.name;
  for (const auto& [k, v] : s.parameters) os << ' ' << k << '=' << fmt(v);
  return os.str();
}

Outcome ergodic_example() {
  Checks c;
  const KrausChannel ch = zoo::example_ergodic();
  const SpectralReport r = analyze(ch);
  c.expect(r.verdict == Verdict::ergodic_not_mixing, std::string("verdict ") + to_string(r.verdict));
  const bool two = r.peripheral.size() == 2;
  c.expect(two, "peripheral size " + std::to_string(r.peripheral.size()));
  if (two) {
    const double err = std::max(std::abs(r.peripheral[0] - 1.0), std::abs(r.peripheral[1] + 1.0));
    c.expect(err <= 1e-8, "peripheral error " + fmt(err));
  }
  c.expect(r.fixed_point.has_value(), "no unique fixed point");
  if (r.fixed_point) {
    const double err = max_abs(r.fixed_point->matrix() - DensityMatrix::maximally_mixed(2).matrix());
    c.expect(err <= 1e-9, "fixed point error " + fmt(err));
  }
  const OrbitTrace t = orbit(ch, projector(2, 0), 100);
  bool exact = true;
  for (int n = 0; n <= 100; ++n) exact = exact && t.states[n].matrix() == projector(2, n % 2).matrix();
  c.expect(exact, "orbit is not an exact period-2 alternation");
  c.note("peripheral {1,-1}, fixed point I/2, exact period 2 over 100 steps");
  return c.outcome();
}

Outcome mixing_example() {
  Checks c;
  const KrausChannel ch = zoo::example_mixing();
  const SpectralReport r = analyze(ch);
  c.expect(r.verdict == Verdict::mixing, std::string("verdict ") + to_string(r.verdict));
  const Superoperator two = power(ch, 2);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      ComplexMatrix out = apply_superoperator(two, matrix_unit(3, j, k));
      out(0, 0) = 0.0;  // remove the component along |0><0|
      worst = std::max(worst, max_abs(out));
    }
  c.expect(worst <= 1e-12, "tau^2 off the |0><0| line by " + fmt(worst));
  const WeakContractionResult w = weak_contraction_check(ch, probe_pairs(3, 0));
  c.expect(w.is_violated && w.witness.has_value(), "no weak-contraction witness");
  if (w.witness) {
    const double err = std::max(std::abs(w.witness->distance_before - 2.0), std::abs(w.witness->distance_after - 2.0));
    c.expect(err <= 1e-12, "witness distances " + fmt(w.witness->distance_before) + ", " +
                               fmt(w.witness->distance_after));
  }
  c.note("mixing, tau^2 rank one (max off-line " + fmt(worst) + "), witness at distance 2");
  return c.outcome();
}

Outcome spectral_vs_oracle() {
  Checks c;
  int count = 0, paper = 0, random = 0, disagreements = 0;
  std::map<std::string, std::set<double>> parametric;
  for (const zoo::ChannelSpec& spec : zoo::standard_fixtures()) {
    const KrausChannel ch = zoo::build(spec);
    const SpectralReport r = analyze(ch);
    const OracleResult o = orbit_oracle(ch, 2000, 1e-8);
    ++count;
    if (spec.provenance == zoo::Provenance::paper) ++paper;
    if (spec.provenance == zoo::Provenance::random) ++random;
    if (spec.provenance == zoo::Provenance::derived && !spec.parameters.empty())
      parametric[spec.name].insert(spec.parameters.begin()->second);
    const bool agree = (o.verdict == OracleVerdict::mixing) == (r.verdict == Verdict::mixing);
    if (!agree) ++disagreements;
    c.expect(agree, "disagreement on " + fixture_name(spec));
    if (spec.expected_verdict)
      c.expect(r.verdict == *spec.expected_verdict, "unexpected verdict on " + fixture_name(spec));
  }
  int two_valued = 0;
  for (const auto& [name, values] : parametric) two_valued += values.size() >= 2;
  c.expect(count >= 12, "only " + std::to_string(count) + " fixtures");
  c.expect(paper == 2, std::to_string(paper) + " worked examples");
  c.expect(random >= 4, std::to_string(random) + " random fixtures");
  c.note(std::to_string(count) + " fixtures (" + std::to_string(paper) + " worked, " + std::to_string(two_valued) +
         " families at >= 2 values, " + std::to_string(random) + " random), " + std::to_string(disagreements) +
         " disagreements");
  return c.outcome();
}

Outcome rate_check() {
  Checks c;
  std::ostringstream notes;
  for (double p : {0.25, 0.5}) {
    const KrausChannel ch = zoo::depolarizing(p);
    const SpectralReport r = analyze(ch);
    const ConvergenceEstimate e = estimate_rate(ch, projector(2, 0), 5, 30);
    const double rel = std::abs(e.empirical_rate - r.kappa) / r.kappa;
    c.expect(rel <= 0.05, "p=" + fmt(p) + " rate off by " + fmt(rel));
    c.expect(std::abs(r.kappa - (1 - p)) <= 1e-9, "p=" + fmt(p) + " kappa " + fmt(r.kappa));
    int violations = 0;
    for (const DensityMatrix& rho : probe_states(2, 0)) {
      const OrbitTrace t = orbit(ch, rho, 100);
      const double c_n = calibrate_bound_constant(r, t.distance_to_fixed_point[1]);
      for (int n = 1; n <= 100; ++n) {
        const double bound = convergence_bound(r, n, c_n);
        // Equality holds at n = 1 by construction; allow for rounding there.
        if (t.distance_to_fixed_point[n] > bound * (1 + 1e-12) + 1e-15) ++violations;
      }
    }
    c.expect(violations == 0, "p=" + fmt(p) + " bound violated " + std::to_string(violations) + " times");
    notes << "p=" << p << " rate " << fmt(e.empirical_rate) << " vs " << fmt(r.kappa) << (p == 0.25 ? ", " : "");
  }
  c.note(notes.str() + "; bound dominates on [1,100]");
  return c.outcome();
}

Outcome relative_entropy_check() {
  Checks c;
  std::ostringstream notes;
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const std::vector<std::pair<std::string, KrausChannel>> channels = {
      {"depolarizing p=0.25", zoo::depolarizing(0.25)},
      {"depolarizing p=0.5", zoo::depolarizing(0.5)},
      {"dephasing p=0.3", zoo::dephasing(0.3)},
      {"dephasing p=0.6", zoo::dephasing(0.6)},
  };
  for (const auto& [name, ch] : channels) {
    double defect = 0.0, worst_final = 0.0;
    for (const DensityMatrix& rho : probe_states(2, 0)) {
      const OrbitTrace t = orbit(ch, rho, 100, {Functional::relative_entropy}, mixed);
      const std::vector<double>& h = t.functional_values.at("relative_entropy");
      for (int n = 0; n < 100; ++n) defect = std::max(defect, h[n + 1] - h[n]);
      worst_final = std::max(worst_final, h[100]);
    }
    c.expect(defect <= 1e-8, name + " monotonicity defect " + fmt(defect));
    c.expect(worst_final < 1e-6, name + " H at n=100 is " + fmt(worst_final) + " (populations are conserved)");
    notes << name << " max H(100)=" << fmt(worst_final) << "; ";
  }

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_state = [&](int dim) {
    // Full-rank mixture so every relative entropy stays finite.
    const double a = unit(rng), b = unit(rng), w = 0.05 + 0.9 * unit(rng);
    const ComplexMatrix m = w * (a * haar_random_pure(dim, rng).matrix() + (1 - a) * haar_random_pure(dim, rng).matrix()) +
                            (1 - w) * (b * haar_random_pure(dim, rng).matrix() +
                                       (1 - b) * DensityMatrix::maximally_mixed(dim).matrix());
    return DensityMatrix(m);
  };
  int dpi_violations = 0;
  double worst_gain = -INFINITY;
  for (int trial = 0; trial < 400; ++trial) {
    const int dim = 2 + trial % 3;
    const int rank = 1 + static_cast<int>(rng() % (dim * dim));
    const KrausChannel ch = zoo::random_channel(dim, rank, 1000 + trial);
    const DensityMatrix rho = random_state(dim), sigma = random_state(dim);
    const double before = relative_entropy(rho, sigma);
    const double after = relative_entropy(apply(ch, rho), apply(ch, sigma));
    worst_gain = std::max(worst_gain, after - before);
    if (after > before + 1e-10) ++dpi_violations;
  }
  c.expect(dpi_violations == 0, "data processing violated in " + std::to_string(dpi_violations) + " of 400 trials");
  notes << "data processing holds in 400 trials (max gain " << fmt(worst_gain) << ")";
  c.note(notes.str());
  return c.outcome();
}

Outcome unital_entropy_check() {
  Checks c;
  int unital = 0, mixing = 0;
  for (const zoo::ChannelSpec& spec : zoo::standard_fixtures()) {
    const KrausChannel ch = zoo::build(spec);
    if (!is_unital(ch)) continue;
    ++unital;
    const bool is_mixing = analyze(ch).verdict == Verdict::mixing;
    mixing += is_mixing;
    double defect = 0.0, gap = 0.0;
    for (const DensityMatrix& rho : probe_states(ch.dim, 0)) {
      const OrbitTrace t = orbit(ch, rho, 200, {Functional::von_neumann_entropy});
      const std::vector<double>& s = t.functional_values.at("von_neumann_entropy");
      for (int n = 0; n < 200; ++n) defect = std::max(defect, s[n] - s[n + 1]);
      gap = std::max(gap, std::abs(s[200] - std::log(static_cast<double>(ch.dim))));
    }
    c.expect(defect <= 1e-9, fixture_name(spec) + " entropy decreased by " + fmt(defect));
    if (is_mixing) c.expect(gap <= 1e-6, fixture_name(spec) + " final entropy off ln d by " + fmt(gap));
  }
  c.expect(unital > 0 && mixing > 0, "no unital fixtures");
  c.note(std::to_string(unital) + " unital fixtures, " + std::to_string(mixing) + " mixing reach ln d");
  return c.outcome();
}

Outcome amplitude_damping_check() {
  Checks c;
  for (double g : {0.3, 0.7}) {
    const SpectralReport r = analyze(zoo::amplitude_damping(g));
    const std::string tag = "gamma=" + fmt(g);
    c.expect(r.verdict == Verdict::mixing, tag + " verdict " + to_string(r.verdict));
    c.expect(r.fixed_point.has_value(), tag + " has no unique fixed point");
    if (!r.fixed_point) continue;
    const double err = max_abs(r.fixed_point->matrix() - projector(2, 0).matrix());
    c.expect(err <= 1e-9, tag + " fixed point off |0><0| by " + fmt(err));
    c.expect(r.fixed_point->purity() >= 1 - 1e-9, tag + " purity " + fmt(r.fixed_point->purity()));
    const auto shortcut = purely_ergodic_shortcut(r);
    c.expect(shortcut && shortcut->implied == Verdict::mixing && shortcut->consistent, tag + " shortcut disagrees");
  }
  c.note("gamma in {0.3, 0.7}: pure fixed point |0><0|, mixing");
  return c.outcome();
}

Outcome polar_check() {
  Checks c;
  const KrausChannel erg = zoo::example_ergodic();
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const PolarFixedPoints p = polar_fixed_point(erg, z, -1.0);
  const double err = max_abs(p.rho.matrix() - DensityMatrix::maximally_mixed(2).matrix());
  c.expect(err <= 1e-9, "sigma_z polar output off I/2 by " + fmt(err));
  c.expect(p.rho_residual <= 1e-9, "sigma_z polar residual " + fmt(p.rho_residual));

  int checked = 0;
  double worst = 0.0, worst_normality = 0.0;
  for (const zoo::ChannelSpec& spec : zoo::standard_fixtures()) {
    const KrausChannel ch = zoo::build(spec);
    const SpectralReport r = analyze(ch);
    if (r.verdict == Verdict::not_ergodic || !r.fixed_point) continue;
    for (const PeripheralEigenvector& v : peripheral_eigenvectors(ch, r)) {
      const PolarFixedPoints q = polar_fixed_point(ch, v.theta, v.eigenvalue);
      const double d = std::max(trace_distance(q.rho, *r.fixed_point), trace_distance(q.sigma, *r.fixed_point));
      worst = std::max(worst, d);
      worst_normality = std::max(worst_normality, v.normality_defect);
      c.expect(d <= 1e-7, fixture_name(spec) + " polar output off by " + fmt(d));
      c.expect(v.normality_defect <= 1e-7, fixture_name(spec) + " normality defect " + fmt(v.normality_defect));
      ++checked;
    }
  }
  c.note("sigma_z gives I/2 (residual " + fmt(p.rho_residual) + "); " + std::to_string(checked) +
         " peripheral eigenvectors, max distance " + fmt(worst) + ", max normality defect " + fmt(worst_normality));
  return c.outcome();
}

Outcome cesaro_check() {
  Checks c;
  std::ostringstream notes;
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  for (const auto& [n, avg] : cesaro_checkpoints(zoo::example_ergodic(), projector(2, 0), {99, 999, 9999})) {
    const double d = trace_distance(avg, mixed);
    c.expect(d <= 2.0 / (n + 1), "n=" + std::to_string(n) + " distance " + fmt(d));
    notes << "n=" << n << ": " << fmt(d) << (n < 9999 ? ", " : "");
  }
  c.note(notes.str());
  return c.outcome();
}

Outcome dilation_check() {
  Checks c;
  const ConsistencyReport ps = cross_validate(zoo::partial_swap_dilation(std::numbers::pi / 4));
  c.expect(ps.factorizing.count == 1, "partial swap count " + std::to_string(ps.factorizing.count));
  c.expect(ps.factorizing.verdict == Verdict::mixing, "partial swap factorizing verdict");
  c.expect(ps.spectral_verdict == Verdict::mixing && ps.consistent, "partial swap cross-check");
  c.expect(ps.fixed_point_distance && *ps.fixed_point_distance <= 1e-7, "partial swap fixed point distance");
  if (ps.spectral.fixed_point) {
    const double err = max_abs(ps.spectral.fixed_point->matrix() - projector(2, 0).matrix());
    c.expect(err <= 1e-7, "partial swap fixed point off |0><0| by " + fmt(err));
  }
  c.expect(ps.max_factorizing_fixed_residual <= 1e-8, "partial swap residual " + fmt(ps.max_factorizing_fixed_residual));

  const ConsistencyReport cz = cross_validate(zoo::cz_dilation());
  c.expect(cz.factorizing.count == 2, "CZ count " + std::to_string(cz.factorizing.count));
  c.expect(cz.factorizing.verdict == Verdict::not_ergodic, "CZ factorizing verdict");
  c.expect(cz.spectral_verdict == Verdict::not_ergodic && cz.consistent, "CZ cross-check");
  c.expect(cz.spectral.eigenvalue_one_multiplicity >= 2,
           "CZ multiplicity " + std::to_string(cz.spectral.eigenvalue_one_multiplicity));
  c.expect(cz.max_factorizing_fixed_residual <= 1e-8, "CZ residual " + fmt(cz.max_factorizing_fixed_residual));
  c.note("partial swap: 1 state, mixing, fixed point |0><0|; CZ: 2 states, not_ergodic, multiplicity " +
         std::to_string(cz.spectral.eigenvalue_one_multiplicity));
  return c.outcome();
}

Outcome deformation_check() {
  Checks c;
  int count = 0, unitary = 0;
  double worst_drift = 0.0;
  for (const zoo::ChannelSpec& spec : zoo::standard_fixtures()) {
    const KrausChannel ch = zoo::build(spec);
    const bool mixing = analyze(ch).verdict == Verdict::mixing;
    const auto pairs = probe_pairs(ch.dim, 0);
    const DeformationEstimate e = asymptotic_deformation_estimate(ch, pairs, 500);
    c.expect(e.is_deformation_evidence == mixing, "deformation evidence disagrees on " + fixture_name(spec));
    ++count;
    if (ch.kraus_ops.size() != 1) continue;
    ++unitary;
    const Superoperator s = to_superoperator(ch);
    for (const auto& [a, b] : pairs) {
      ComplexMatrix x = a.matrix(), y = b.matrix();
      const double d0 = trace_distance(x, y);
      for (int n = 1; n <= 500; ++n) {
        x = apply_superoperator(s, x);
        y = apply_superoperator(s, y);
        worst_drift = std::max(worst_drift, std::abs(trace_distance(x, y) - d0));
      }
    }
  }
  c.expect(unitary > 0, "no unitary fixtures");
  c.expect(worst_drift <= 1e-10, "unitary pairwise distance drift " + fmt(worst_drift));
  c.note(std::to_string(count) + " fixtures agree; " + std::to_string(unitary) + " unitary, max drift " +
         fmt(worst_drift));
  return c.outcome();
}

std::string capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  pclose(pipe);
  return out;
}

Outcome robustness_check() {
  Checks c;
  double worst = 0.0;
  std::uint64_t seed = 300;
  for (const zoo::ChannelSpec& spec : zoo::standard_fixtures()) {
    const KrausChannel ch = zoo::build(spec);
    const int rank = static_cast<int>(ch.kraus_ops.size());
    const KrausChannel rotated = rotate_kraus_gauge(ch, zoo::haar_unitary(rank, seed++));
    const SpectralReport a = analyze(ch), b = analyze(rotated);
    double d = 0.0;
    bool same_shape = a.verdict == b.verdict && a.spectrum.size() == b.spectrum.size() &&
                      a.peripheral.size() == b.peripheral.size() &&
                      a.eigenvalue_one_multiplicity == b.eigenvalue_one_multiplicity &&
                      a.fixed_point.has_value() == b.fixed_point.has_value();
    if (same_shape) {
      for (std::size_t k = 0; k < a.spectrum.size(); ++k) d = std::max(d, std::abs(a.spectrum[k] - b.spectrum[k]));
      d = std::max(d, std::abs(a.kappa - b.kappa));
      if (a.fixed_point) d = std::max(d, max_abs(a.fixed_point->matrix() - b.fixed_point->matrix()));
    }
    worst = std::max(worst, d);
    c.expect(same_shape && d <= 1e-8, "gauge rotation changed the report of " + fixture_name(spec));
  }

  const std::string tool = CHANNELLAB_TOOL;
  const std::string data = CHANNELLAB_DATA;
  int runs = 0;
  for (const std::string& args : {"classify " + data + "/depolarizing.json --oracle --seed 7",
                                  "classify " + data + "/example-ergodic.json --oracle --seed 7",
                                  "orbit " + data + "/example-mixing.json --n 30 --functionals trivial_lyapunov",
                                  "dilation " + data + "/partial-swap-instance.json"}) {
    const std::string first = capture(tool + " " + args + " 2>/dev/null");
    const std::string second = capture(tool + " " + args + " 2>/dev/null");
    c.expect(!first.empty() && first == second, "CLI output differs across runs: " + args);
    ++runs;
  }
  c.note("gauge rotation max change " + fmt(worst) + "; " + std::to_string(runs) +
         " CLI invocations byte-identical across two runs");
  return c.outcome();
}

}  // namespace

int main() {
  // Criterion 5 asks every probe state to reach H < 1e-6 under dephasing too. Dephasing
  // conserves populations, so H(tau^n |0><0|, I/2) = ln 2 for every n.
  const std::set<int> known_unattainable = {5};

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ergodic example golden values", ergodic_example},
      {"mixing example golden values", mixing_example},
      {"spectral verdict equals orbit oracle", spectral_vs_oracle},
      {"convergence rate and bound", rate_check},
      {"relative entropy decay and data processing", relative_entropy_check},
      {"von Neumann entropy for unital channels", unital_entropy_check},
      {"amplitude damping pure fixed point", amplitude_damping_check},
      {"polar decomposition of peripheral eigenvectors", polar_check},
      {"Cesaro average of the ergodic example", cesaro_check},
      {"conserved-observable dilations", dilation_check},
      {"asymptotic deformation", deformation_check},
      {"representation independence and CLI determinism", robustness_check},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known = known_unattainable.count(id) > 0;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << criteria[i].first << ": " << o.detail;
    if (!o.pass && known) std::cout << " [known unattainable]";
    std::cout << '\n';
    if (!o.pass && !known) ++unexpected;
  }
  std::cout << (unexpected == 0 ? "acceptance: no unexpected failures" : "acceptance: unexpected failures") << '\n';
  return unexpected == 0 ? 0 : 1;
}
