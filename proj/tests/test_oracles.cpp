#include <catch2/catch_amalgamated.hpp>

#include "entgeo/entgeo.hpp"

using namespace entgeo;

namespace {

multipartite_state werner(double p) {
  const cmatrix m =
      p * bell_state().matrix() + (1.0 - p) * cmatrix::Identity(4, 4) / 4.0;
  return validate_density(m, {2, 2});
}

multipartite_state random_two_qubit(std::uint64_t seed) {
  return random_density_ginibre({2, 2}, 4, seed);
}

// Convex mixture of product states: separable by construction.
multipartite_state separable_mixture(std::uint64_t seed, int terms = 4) {
  cmatrix m = cmatrix::Zero(4, 4);
  gaussian_prng prng(mix_seed(seed, 99));
  std::vector<double> weights;
  double total = 0.0;
  for (int t = 0; t < terms; ++t) {
    weights.push_back(0.25 + prng.uniform01());
    total += weights.back();
  }
  for (int t = 0; t < terms; ++t) {
    const auto a = random_density_ginibre({2}, 2, mix_seed(seed, 2 * static_cast<std::uint64_t>(t)));
    const auto b = random_density_ginibre({2}, 2, mix_seed(seed, 2 * static_cast<std::uint64_t>(t) + 1));
    m += (weights[static_cast<std::size_t>(t)] / total) * kron(a.matrix(), b.matrix());
  }
  return validate_density(m, {2, 2});
}

}  // namespace

TEST_CASE("concurrence of reference states") {
  REQUIRE(concurrence(bell_state()) == Catch::Approx(1.0).margin(1e-10));

  const auto prod = compose(random_density_ginibre({2}, 2, 1),
                            random_density_ginibre({2}, 2, 2));
  REQUIRE(concurrence(prod) == Catch::Approx(0.0).margin(1e-10));

  REQUIRE(concurrence(werner(0.9)) == Catch::Approx(0.85).margin(1e-9));
}

TEST_CASE("werner concurrence follows the closed form on a p grid") {
  for (int step = 0; step <= 5; ++step) {
    const double p = 0.2 * step;
    const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
    REQUIRE(concurrence(werner(p)) == Catch::Approx(expected).margin(1e-9));
  }
}

TEST_CASE("concurrence rejects anything but two qubits") {
  REQUIRE_THROWS_AS(concurrence(ghz_state(3)), std::invalid_argument);
}

TEST_CASE("concurrence is invariant under local unitaries") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto state = random_two_qubit(900 + seed);
    const auto rotated = apply_local_unitaries(
        state, {random_unitary(2, 2 * seed), random_unitary(2, 2 * seed + 1)});
    REQUIRE(std::abs(concurrence(state) - concurrence(rotated)) <= 1e-9);
  }
}

TEST_CASE("negativity of reference states") {
  REQUIRE(negativity(bell_state(), party_subset{0}) ==
          Catch::Approx(0.5).margin(1e-10));

  const auto prod = compose(random_density_ginibre({2}, 2, 3),
                            random_density_ginibre({2}, 2, 4));
  REQUIRE(negativity(prod, party_subset{0}) == Catch::Approx(0.0).margin(1e-10));

  const auto bb = compose(bell_state(), bell_state());
  REQUIRE(negativity(bb, party_subset{0, 1}) ==
          Catch::Approx(0.0).margin(1e-10));
  REQUIRE(negativity(bb, party_subset{0, 2}) > 0.4);
}

TEST_CASE("separable mixtures are PPT") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto state = separable_mixture(400 + seed);
    REQUIRE(negativity(state, party_subset{0}) <= 1e-10);
    REQUIRE(concurrence(state) <= 1e-8);
  }
}

TEST_CASE("concurrence and negativity vanish together on two qubits") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto state = random_two_qubit(1300 + seed);
    const double c = concurrence(state);
    const double n = negativity(state, party_subset{0});
    if (c <= 1e-10) {
      REQUIRE(n <= 1e-8);
    } else {
      REQUIRE(n > 0.0);
    }
    if (n <= 1e-10) REQUIRE(c <= 1e-8);
  }
}
