#include <catch2/catch_amalgamated.hpp>

#include "entgeo/entgeo.hpp"
#include "support/naive.hpp"

using namespace entgeo;

TEST_CASE("validate_density accepts the maximally mixed two-qubit state") {
  const auto state = validate_density(cmatrix::Identity(4, 4) / 4.0, {2, 2});
  REQUIRE(state.party_count() == 2);
  REQUIRE(state.side() == 4);
}

TEST_CASE("validate_density reports the first violated invariant") {
  SECTION("unit-trace matrix with a negative eigenvalue fails as not PSD") {
    cmatrix m = cmatrix::Zero(4, 4);
    m(0, 0) = 0.5;
    m(1, 1) = 0.6;
    m(3, 3) = -0.1;  // trace is exactly 1, positivity is the violation
    try {
      validate_density(m, {2, 2});
      FAIL("expected validation_error");
    } catch (const validation_error& e) {
      REQUIRE(e.kind() == validation_error::code::not_psd);
    }
  }
  SECTION("trace failure precedes positivity failure") {
    cmatrix m = cmatrix::Zero(4, 4);
    m(0, 0) = 0.5;
    m(1, 1) = 0.7;
    m(3, 3) = -0.1;  // trace 1.1 and a negative eigenvalue: trace reported
    try {
      validate_density(m, {2, 2});
      FAIL("expected validation_error");
    } catch (const validation_error& e) {
      REQUIRE(e.kind() == validation_error::code::not_unit_trace);
    }
  }
  SECTION("matrix side must match the product of dims") {
    try {
      validate_density(cmatrix::Identity(3, 3) / 3.0, {2, 2});
      FAIL("expected validation_error");
    } catch (const validation_error& e) {
      REQUIRE(e.kind() == validation_error::code::dimension_mismatch);
    }
  }
  SECTION("non-Hermitian input") {
    cmatrix m = cmatrix::Identity(4, 4) / 4.0;
    m(0, 1) = cplx(0.1, 0.0);
    try {
      validate_density(m, {2, 2});
      FAIL("expected validation_error");
    } catch (const validation_error& e) {
      REQUIRE(e.kind() == validation_error::code::not_hermitian);
    }
  }
  SECTION("negative eigenvalue beyond tolerance") {
    cmatrix m = cmatrix::Zero(4, 4);
    m(0, 0) = 0.6;
    m(1, 1) = 0.5;
    m(3, 3) = -0.1;
    try {
      validate_density(m, {2, 2});
      FAIL("expected validation_error");
    } catch (const validation_error& e) {
      REQUIRE(e.kind() == validation_error::code::not_psd);
    }
  }
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
  const auto bell = bell_state();
  const auto reduced = partial_trace(bell, party_subset{0});
  REQUIRE(reduced.dims() == std::vector<int>{2});
  REQUIRE(max_abs(reduced.matrix() - cmatrix::Identity(2, 2) / 2.0) < 1e-14);
}

TEST_CASE("partial trace of a product recovers the factor") {
  const auto a = random_density_ginibre({2}, 2, 5);
  const auto b = random_density_ginibre({3}, 3, 6);
  const auto ab = compose(a, b);
  const auto back = partial_trace(ab, party_subset{0});
  REQUIRE(max_abs(back.matrix() - a.matrix()) < 1e-12);
  const auto back_b = partial_trace(ab, party_subset{1});
  REQUIRE(max_abs(back_b.matrix() - b.matrix()) < 1e-12);
}

TEST_CASE("partial trace preserves the trace and commutes over complements") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto state = random_density_ginibre({2, 2, 2}, 8, 100 + seed);
    const auto reduced = partial_trace(state, party_subset{0, 2});
    REQUIRE(std::abs(reduced.matrix().trace() - cplx(1.0, 0.0)) < 1e-12);

    // tracing out {1} then {2} equals tracing to {0} directly
    const auto step1 = partial_trace(state, party_subset{0, 2});
    const auto step2 = partial_trace(step1, party_subset{0});
    const auto direct = partial_trace(state, party_subset{0});
    REQUIRE(max_abs(step2.matrix() - direct.matrix()) <= 1e-12);
  }
}

TEST_CASE("partial trace matches the entrywise reference reduction") {
  const auto state = random_density_ginibre({2, 3, 2}, 12, 77);
  const auto lib = partial_trace(state, party_subset{1, 2});
  const auto ref =
      naive::partial_trace(state.matrix(), state.dims(), {1, 2});
  REQUIRE(max_abs(lib.matrix() - ref) < 1e-13);
}

TEST_CASE("partial trace rejects bad subsets") {
  const auto bell = bell_state();
  REQUIRE_THROWS_AS(partial_trace(bell, party_subset{2}), std::invalid_argument);
  REQUIRE_THROWS_AS(partial_trace(bell, party_subset{}), std::invalid_argument);
  REQUIRE_THROWS_AS((party_subset{0, 0}), std::invalid_argument);
}

TEST_CASE("hermitian eigenvalues come back descending") {
  SECTION("maximally mixed qubit") {
    const auto vals = hermitian_eigenvalues(cmatrix::Identity(2, 2) / 2.0);
    REQUIRE(vals == std::vector<double>{0.5, 0.5});
  }
  SECTION("diagonal case") {
    cmatrix m = cmatrix::Zero(2, 2);
    m(0, 0) = 0.3;
    m(1, 1) = 0.7;
    const auto vals = hermitian_eigenvalues(m);
    REQUIRE(vals[0] == Catch::Approx(0.7).margin(1e-14));
    REQUIRE(vals[1] == Catch::Approx(0.3).margin(1e-14));
  }
  SECTION("Bell projector is rank one") {
    const auto vals = hermitian_eigenvalues(bell_state().matrix());
    REQUIRE(vals[0] == Catch::Approx(1.0).margin(1e-12));
    for (std::size_t i = 1; i < vals.size(); ++i) {
      REQUIRE(std::abs(vals[i]) < 1e-12);
    }
  }
  SECTION("rejects non-square and non-Hermitian input") {
    REQUIRE_THROWS_AS(hermitian_eigenvalues(cmatrix::Zero(2, 3)),
                      std::invalid_argument);
    cmatrix m = cmatrix::Zero(2, 2);
    m(0, 1) = 0.5;
    REQUIRE_THROWS_AS(hermitian_eigenvalues(m), validation_error);
  }
}

TEST_CASE("eigensystem reconstructs the input within the residual contract") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto state = random_density_ginibre({2, 2, 2}, 8, 900 + seed);
    const auto es = hermitian_eigensystem(state.matrix());
    cmatrix rebuilt = cmatrix::Zero(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i) {
      rebuilt += es.values[static_cast<std::size_t>(i)] * es.vectors.col(i) *
                 es.vectors.col(i).adjoint();
    }
    const double scale = max_abs(state.matrix());
    REQUIRE(max_abs(rebuilt - state.matrix()) <= 1e-10 * scale);
    REQUIRE(std::is_sorted(es.values.rbegin(), es.values.rend()));
  }
}

TEST_CASE("eigenvalues of validated states sum to one and stay in range") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto state = random_density_ginibre({2, 2}, 4, 40 + seed);
    const auto vals = hermitian_eigenvalues(state.matrix());
    double sum = 0.0;
    for (double v : vals) {
      sum += v;
      REQUIRE(v >= -tol_psd);
      REQUIRE(v <= 1.0 + tol_psd);
    }
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("partial transpose factorizes over products") {
  const auto a = random_density_ginibre({2}, 2, 11);
  const auto b = random_density_ginibre({2}, 2, 12);
  const auto ab = compose(a, b);
  const cmatrix expected = kron(a.matrix(), b.matrix().transpose());
  REQUIRE(max_abs(partial_transpose(ab, party_subset{1}) - expected) < 1e-13);
}

TEST_CASE("partial transpose is an involution preserving trace and Hermiticity") {
  const auto state = random_density_ginibre({2, 2, 2}, 8, 13);
  const party_subset subset{0, 2};
  const cmatrix once = partial_transpose(state, subset);
  REQUIRE(hermiticity_defect(once) < 1e-14);
  REQUIRE(std::abs(once.trace() - cplx(1.0, 0.0)) < 1e-13);
  const auto once_state = multipartite_state::unchecked(once, state.dims());
  REQUIRE(max_abs(partial_transpose(once_state, subset) - state.matrix()) == 0.0);
}

TEST_CASE("partial transpose of a Bell projector has eigenvalue -1/2") {
  const cmatrix pt = partial_transpose(bell_state(), party_subset{1});
  const auto vals = hermitian_eigenvalues(pt);
  REQUIRE(vals.back() == Catch::Approx(-0.5).margin(1e-12));
}
