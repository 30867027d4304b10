#include <doctest.h>

#include <numbers>

#include "channellab/dilation.hpp"
#include "channellab/errors.hpp"
#include "channellab/lyapunov.hpp"
#include "channellab/zoo.hpp"
#include "oracles.hpp"

using namespace channellab;

namespace {

ConservedDilation with_unitary(const ComplexMatrix& u) {
  ConservedDilation cd = zoo::cz_dilation();
  cd.dilation.unitary = u;
  return cd;
}

bool has_failure(const ConservedValidationReport& r, const std::string& name) {
  return std::find(r.failed.begin(), r.failed.end(), name) != r.failed.end();
}

// |<a|b>| for unit vectors, insensitive to global phase.
double overlap(const ComplexVector& a, const ComplexVector& b) { return std::abs(a.dot(b)); }

}  // namespace

TEST_CASE("validate_conserved examples") {
  CHECK(validate_conserved(zoo::partial_swap_dilation(std::numbers::pi / 4)).passed());
  CHECK(validate_conserved(zoo::cz_dilation()).passed());
  const ConservedValidationReport r = validate_conserved(with_unitary(kron(oracle::sigma(1), oracle::sigma(0))));
  CHECK_FALSE(r.passed());
  CHECK(has_failure(r, "commutator"));
  CHECK(r.commutator_norm > 1.0);
}

TEST_CASE("partial swap eigenvectors come from the SWAP eigenbasis") {
  // cos(t) I + i sin(t) SWAP shares the SWAP eigenbasis; each vector commutes with Z (x) I + I (x) Z.
  const ComplexMatrix u = zoo::partial_swap(0.3);
  const std::complex<double> plus = std::exp(Complex(0.0, 0.3));
  const std::complex<double> minus = std::exp(Complex(0.0, -0.3));
  const auto basis = oracle::swap_eigenbasis();
  for (int k = 0; k < 3; ++k) CHECK((u * basis[k] - plus * basis[k]).norm() < 1e-14);
  CHECK((u * basis[3] - minus * basis[3]).norm() < 1e-14);
}

TEST_CASE("hypothesis failures are named") {
  SUBCASE("degenerate extremal bath eigenvalue") {
    ConservedDilation cd = zoo::cz_dilation();
    cd.m_b = ComplexMatrix::Identity(2, 2);
    cd.m_a = ComplexMatrix::Identity(2, 2);
    CHECK(has_failure(validate_conserved(cd), "nondegenerate"));
  }
  SUBCASE("bath state not an eigenvector") {
    ConservedDilation cd = zoo::cz_dilation();
    cd.dilation.bath_state = ComplexVector::Constant(2, std::sqrt(0.5));
    CHECK(has_failure(validate_conserved(cd), "bath_eigenvector"));
  }
  SUBCASE("bath state at the wrong extremum") {
    ConservedDilation cd = zoo::cz_dilation();
    cd.extremal = Extremal::min;
    CHECK(has_failure(validate_conserved(cd), "extremal"));
  }
  SUBCASE("non-unitary") {
    CHECK(has_failure(validate_conserved(with_unitary(2.0 * ComplexMatrix::Identity(4, 4))), "unitarity"));
  }
  SUBCASE("non-Hermitian observable") {
    ConservedDilation cd = zoo::cz_dilation();
    cd.m_a(0, 1) = 1.0;
    CHECK(has_failure(validate_conserved(cd), "hermiticity"));
  }
  SUBCASE("unnormalized bath") {
    ConservedDilation cd = zoo::cz_dilation();
    cd.dilation.bath_state *= 2.0;
    CHECK(has_failure(validate_conserved(cd), "bath_normalization"));
  }
  CHECK_THROWS_AS(find_factorizing_eigenstates(with_unitary(kron(oracle::sigma(1), oracle::sigma(0)))),
                  PreconditionError);
}

TEST_CASE("factorizing eigenstates: partial swap at pi/4") {
  const FactorizingEigenstateReport r = find_factorizing_eigenstates(zoo::partial_swap_dilation(std::numbers::pi / 4));
  CHECK(r.count == 1);
  CHECK(r.verdict == Verdict::mixing);
  CHECK(overlap(r.states[0], ComplexVector::Unit(2, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(r.degenerate_clusters.empty());  // the triplet is threefold degenerate
}

TEST_CASE("factorizing eigenstates: controlled-Z") {
  const FactorizingEigenstateReport r = find_factorizing_eigenstates(zoo::cz_dilation());
  CHECK(r.count == 2);
  CHECK(r.verdict == Verdict::not_ergodic);
  // CZ acts trivially on the slice B = |0>, so the two states span H_A.
  ComplexMatrix span(2, 2);
  span << r.states[0], r.states[1];
  CHECK(std::abs(std::abs(span.determinant()) - 1.0) < 1e-10);
}

TEST_CASE("factorizing eigenstates: identity unitary") {
  for (int da : {2, 3}) {
    ConservedDilation cd;
    cd.dilation = StinespringDilation{da, 2, ComplexMatrix::Identity(2 * da, 2 * da), ComplexVector::Unit(2, 0)};
    cd.m_a = ComplexMatrix::Zero(da, da);
    cd.m_b = oracle::sigma(3);
    const FactorizingEigenstateReport r = find_factorizing_eigenstates(cd);
    CHECK(r.count == da);
    CHECK(r.verdict == Verdict::not_ergodic);
  }
}

TEST_CASE("reported states are eigenvectors of U") {
  for (const ConservedDilation& cd : {zoo::partial_swap_dilation(std::numbers::pi / 4), zoo::cz_dilation(),
                                      zoo::partial_swap_dilation(std::numbers::pi / 2), zoo::partial_swap_dilation(1.1)}) {
    const FactorizingEigenstateReport r = find_factorizing_eigenstates(cd);
    for (int k = 0; k < r.count; ++k) {
      const ComplexVector product = kron(r.states[k], cd.dilation.bath_state);
      CHECK((cd.dilation.unitary * product - r.unitary_eigenvalues[k] * product).norm() <= 1e-8);
    }
  }
}

TEST_CASE("cross validation") {
  SUBCASE("partial swap") {
    const ConsistencyReport r = cross_validate(zoo::partial_swap_dilation(std::numbers::pi / 4));
    CHECK(r.consistent);
    CHECK(r.spectral_verdict == Verdict::mixing);
    REQUIRE(r.fixed_point_distance);
    CHECK(*r.fixed_point_distance <= 1e-7);
    CHECK(max_abs(r.spectral.fixed_point->matrix() - oracle::unit(2, 0, 0)) <= 1e-7);
  }
  SUBCASE("controlled-Z") {
    const ConsistencyReport r = cross_validate(zoo::cz_dilation());
    CHECK(r.consistent);
    CHECK(r.spectral_verdict == Verdict::not_ergodic);
    CHECK(r.spectral.eigenvalue_one_multiplicity >= 2);
    CHECK(r.max_factorizing_fixed_residual <= 1e-8);
  }
  SUBCASE("full swap") {
    const ConsistencyReport r = cross_validate(zoo::partial_swap_dilation(std::numbers::pi / 2));
    CHECK(r.consistent);
    CHECK(r.spectral_verdict == Verdict::mixing);
    CHECK(r.factorizing.count == 1);
  }
  SUBCASE("verdicts agree over a sweep of partial-swap angles") {
    for (double t = 0.1; t < 3.1; t += 0.2) {
      const ConsistencyReport r = cross_validate(zoo::partial_swap_dilation(t));
      INFO("theta=" << t);
      CHECK(r.verdicts_agree);
      CHECK(r.consistent);
    }
  }
}

TEST_CASE("conservation: bath outflow has the sign fixed by the extremum") {
  for (const ConservedDilation& cd : {zoo::partial_swap_dilation(std::numbers::pi / 4), zoo::cz_dilation(),
                                      zoo::partial_swap_dilation(0.4)}) {
    const KrausChannel c = from_stinespring(cd.dilation);
    for (const DensityMatrix& rho : probe_states(2, 5)) {
      CHECK(bath_outflow(cd, rho) <= 1e-12);
      // The system pays for what the bath gains: total M_AB is conserved.
      CHECK(system_expectation(cd, apply(c, rho)) - system_expectation(cd, rho) ==
            doctest::Approx(-bath_outflow(cd, rho)).epsilon(1e-10));
    }
  }
  SUBCASE("min extremum flips the sign") {
    ConservedDilation cd = zoo::partial_swap_dilation(std::numbers::pi / 4);
    cd.dilation.bath_state = ComplexVector::Unit(2, 1);
    cd.extremal = Extremal::min;
    REQUIRE(validate_conserved(cd).passed());
    for (const DensityMatrix& rho : probe_states(2, 6)) CHECK(bath_outflow(cd, rho) >= -1e-12);
  }
}

TEST_CASE("system expectation moves monotonically toward the fixed point value") {
  const ConservedDilation cd = zoo::partial_swap_dilation(std::numbers::pi / 4);
  const KrausChannel c = from_stinespring(cd.dilation);
  for (const DensityMatrix& rho : probe_states(2, 7)) {
    const OrbitTrace t = orbit(c, rho, 40);
    for (int n = 0; n < 40; ++n) {
      CHECK(system_expectation(cd, t.states[n + 1]) >= system_expectation(cd, t.states[n]) - 1e-12);
    }
    CHECK(system_expectation(cd, t.states[40]) == doctest::Approx(1.0).epsilon(1e-8));
  }
}
