#pragma once

// Canonical and random state construction. All randomness flows through
// mt19937_64 plus an explicit Box-Muller transform, so a (spec, seed) pair
// fixes every generated matrix bit for bit, independent of platform
// library choices for std::normal_distribution.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "entgeo/state.hpp"

namespace entgeo {

inline constexpr Eigen::Index max_total_dimension = 1 << 16;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives the seed of sub-stream `stream` from a base seed. Used wherever
// one logical seed has to drive several independent draws.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1));
}

// Deterministic Gaussian source: mt19937_64 -> 53-bit uniforms ->
// Box-Muller pairs, consumed alternately.
class gaussian_prng {
 public:
  explicit gaussian_prng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double v = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * std::numbers::pi * v;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  cplx complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Declarative state description; see spec_io.hpp for the serialized form.
struct state_spec {
  enum class kind {
    bell,
    ghz,
    w,
    product_basis,
    random_mixed,
    random_pure,
    compose,
    literal,
  };

  kind k = kind::bell;
  int parties = 0;                    // ghz, w
  std::vector<int> dims;              // product_basis, random_*, literal
  std::vector<int> levels;            // product_basis (defaults to all 0)
  int rank = 0;                       // random_mixed; 0 means full rank
  std::optional<std::uint64_t> seed;  // mandatory for random kinds
  std::vector<state_spec> children;   // compose
  cmatrix literal;                    // literal
};

namespace detail {

inline void check_total_dimension(const std::vector<int>& dims) {
  Eigen::Index side = 1;
  for (int d : dims) {
    if (d < 2) {
      throw std::invalid_argument("state dims: local dimension must be >= 2");
    }
    side *= d;
    if (side > max_total_dimension) {
      throw std::invalid_argument("state dims: total dimension exceeds 2^16");
    }
  }
}

inline multipartite_state projector_state(const Eigen::VectorXcd& amplitudes,
                                          std::vector<int> dims) {
  cmatrix rho(amplitudes.size(), amplitudes.size());
  for (Eigen::Index r = 0; r < amplitudes.size(); ++r) {
    for (Eigen::Index c = 0; c < amplitudes.size(); ++c) {
      rho(r, c) = amplitudes(r) * std::conj(amplitudes(c));
    }
  }
  return validate_density(std::move(rho), std::move(dims));
}

}  // namespace detail

// (|0...0> + |1...1>)/sqrt(2) projector; the four corner entries are the
// exact rational 1/2, not a squared irrational amplitude.
inline multipartite_state ghz_state(int parties) {
  if (parties < 2) {
    throw std::invalid_argument("ghz_state: needs at least 2 parties");
  }
  std::vector<int> dims(static_cast<std::size_t>(parties), 2);
  detail::check_total_dimension(dims);
  const Eigen::Index side = total_dimension(dims);
  cmatrix rho = cmatrix::Zero(side, side);
  rho(0, 0) = rho(0, side - 1) = rho(side - 1, 0) = rho(side - 1, side - 1) = 0.5;
  return validate_density(std::move(rho), std::move(dims));
}

// |Phi+><Phi+| on two qubits: exactly 1/2 at the four corner entries.
inline multipartite_state bell_state() { return ghz_state(2); }

// Equal superposition of the single-excitation basis states; entries are
// the exact rational 1/n.
inline multipartite_state w_state(int parties) {
  if (parties < 2) {
    throw std::invalid_argument("w_state: needs at least 2 parties");
  }
  std::vector<int> dims(static_cast<std::size_t>(parties), 2);
  detail::check_total_dimension(dims);
  const Eigen::Index side = total_dimension(dims);
  cmatrix rho = cmatrix::Zero(side, side);
  const double entry = 1.0 / static_cast<double>(parties);
  for (int a = 0; a < parties; ++a) {
    for (int b = 0; b < parties; ++b) {
      rho(Eigen::Index{1} << (parties - 1 - a), Eigen::Index{1} << (parties - 1 - b)) =
          entry;
    }
  }
  return validate_density(std::move(rho), std::move(dims));
}

// Computational basis product state |l_1 ... l_n>.
inline multipartite_state basis_product_state(std::vector<int> dims,
                                              std::vector<int> levels = {}) {
  detail::check_total_dimension(dims);
  if (levels.empty()) {
    levels.assign(dims.size(), 0);
  }
  if (levels.size() != dims.size()) {
    throw std::invalid_argument("basis_product_state: levels/dims length mismatch");
  }
  Eigen::Index index = 0;
  for (std::size_t p = 0; p < dims.size(); ++p) {
    if (levels[p] < 0 || levels[p] >= dims[p]) {
      throw std::invalid_argument("basis_product_state: level out of range");
    }
    index = index * dims[p] + levels[p];
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(total_dimension(dims));
  v(index) = 1.0;
  return detail::projector_state(v, std::move(dims));
}

// Ginibre-ensemble density matrix: G a side x rank complex Gaussian
// matrix, rho = G G^dag / tr(G G^dag). Full rank samples the
// Hilbert-Schmidt measure.
inline multipartite_state random_density_ginibre(std::vector<int> dims, int rank,
                                                 std::uint64_t seed) {
  detail::check_total_dimension(dims);
  const Eigen::Index side = total_dimension(dims);
  if (rank < 1 || rank > side) {
    throw std::invalid_argument("random_density_ginibre: rank out of range");
  }
  gaussian_prng prng(seed);
  cmatrix g(side, rank);
  for (Eigen::Index r = 0; r < side; ++r) {
    for (Eigen::Index c = 0; c < rank; ++c) {
      g(r, c) = prng.complex_gaussian();
    }
  }
  cmatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return validate_density(std::move(rho), std::move(dims));
}

// Haar-random pure state projector from a normalized complex Gaussian
// amplitude vector.
inline multipartite_state random_pure(std::vector<int> dims, std::uint64_t seed) {
  detail::check_total_dimension(dims);
  gaussian_prng prng(seed);
  Eigen::VectorXcd v(total_dimension(dims));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = prng.complex_gaussian();
  }
  v /= v.norm();
  return detail::projector_state(v, std::move(dims));
}

// Haar-random unitary: QR of a complex Gaussian matrix with the phase fix
// that makes the distribution exactly Haar.
inline cmatrix random_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) {
    throw std::invalid_argument("random_unitary: dimension must be positive");
  }
  gaussian_prng prng(seed);
  cmatrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      g(r, c) = prng.complex_gaussian();
    }
  }
  Eigen::HouseholderQR<cmatrix> qr(g);
  cmatrix q = qr.householderQ();
  cmatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const cplx d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= (mag > 0.0) ? d / mag : cplx(1.0, 0.0);
  }
  return q;
}

// Kronecker composition; marginals of the result reproduce the factors.
inline multipartite_state compose(const multipartite_state& a,
                                  const multipartite_state& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  detail::check_total_dimension(dims);
  std::vector<std::string> labels;
  if (!a.labels().empty() && !b.labels().empty()) {
    labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  }
  return validate_density(kron(a.matrix(), b.matrix()), std::move(dims),
                          std::move(labels));
}

// Conjugates by a product of one unitary per party.
inline multipartite_state apply_local_unitaries(const multipartite_state& state,
                                                const std::vector<cmatrix>& us) {
  if (us.size() != state.dims().size()) {
    throw std::invalid_argument("apply_local_unitaries: one unitary per party");
  }
  cmatrix u = cmatrix::Identity(1, 1);
  for (std::size_t p = 0; p < us.size(); ++p) {
    if (us[p].rows() != state.dims()[p] || us[p].cols() != state.dims()[p]) {
      throw std::invalid_argument("apply_local_unitaries: unitary size mismatch");
    }
    u = kron(u, us[p]);
  }
  cmatrix rotated = u * state.matrix() * u.adjoint();
  return validate_density(std::move(rotated), state.dims(), state.labels());
}

inline multipartite_state build_state(const state_spec& spec) {
  using kind = state_spec::kind;
  switch (spec.k) {
    case kind::bell:
      return bell_state();
    case kind::ghz:
      return ghz_state(spec.parties);
    case kind::w:
      return w_state(spec.parties);
    case kind::product_basis:
      return basis_product_state(spec.dims, spec.levels);
    case kind::random_mixed: {
      if (!spec.seed) {
        throw std::invalid_argument("build_state: random-mixed requires a seed");
      }
      const int rank = spec.rank > 0
                           ? spec.rank
                           : static_cast<int>(total_dimension(spec.dims));
      return random_density_ginibre(spec.dims, rank, *spec.seed);
    }
    case kind::random_pure:
      if (!spec.seed) {
        throw std::invalid_argument("build_state: random-pure requires a seed");
      }
      return random_pure(spec.dims, *spec.seed);
    case kind::compose: {
      if (spec.children.size() < 2) {
        throw std::invalid_argument("build_state: compose needs >= 2 children");
      }
      multipartite_state acc = build_state(spec.children[0]);
      for (std::size_t i = 1; i < spec.children.size(); ++i) {
        acc = compose(acc, build_state(spec.children[i]));
      }
      return acc;
    }
    case kind::literal:
      return validate_density(spec.literal, spec.dims);
  }
  throw std::invalid_argument("build_state: unknown spec kind");
}

}  // namespace entgeo
