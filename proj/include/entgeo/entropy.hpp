#pragma once

// Von Neumann entropies over the 2^n subset lattice, memoized per state.
// All values are in bits (log base 2).

#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "entgeo/state.hpp"

namespace entgeo {

// -sum p log2 p over the clamped spectrum. Values in [-tol_psd, 0] count as
// exact zeros; anything below -tol_psd is a genuinely invalid state and is
// reported, not repaired.
inline double entropy_from_spectrum(const std::vector<double>& eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda < -tol_psd) {
      throw validation_error(validation_error::code::not_psd,
                             "entropy: eigenvalue " + std::to_string(lambda) +
                                 " below -tolerance");
    }
    if (lambda > 0.0) {
      s -= lambda * std::log2(lambda);
    }
  }
  return s;
}

inline double von_neumann_entropy(const multipartite_state& state) {
  return entropy_from_spectrum(hermitian_eigenvalues(state.matrix()));
}

// Memoized map subset -> S(subset). Internally synchronized: concurrent
// lookups trigger at most one computation per subset and results are
// immutable once stored.
class entropy_cache {
 public:
  static constexpr int max_parties = 16;

  explicit entropy_cache(multipartite_state state) : state_(std::move(state)) {
    const int n = state_.party_count();
    if (n > max_parties) {
      throw std::invalid_argument("entropy_cache: more than 16 parties");
    }
    const std::size_t slots = std::size_t{1} << n;
    values_.resize(slots, 0.0);
    flags_ = std::make_unique<std::once_flag[]>(slots);
  }

  const multipartite_state& state() const { return state_; }
  int party_count() const { return state_.party_count(); }

  double entropy(const party_subset& subset) const {
    return entropy_mask(subset.mask(party_count()));
  }

  double entropy_mask(std::uint32_t mask) const {
    if (mask == 0) return 0.0;  // S(empty) = 0 by convention
    std::call_once(flags_[mask], [&] { values_[mask] = compute(mask); });
    return values_[mask];
  }

 private:
  double compute(std::uint32_t mask) const {
    const std::uint32_t full = (std::uint32_t{1} << party_count()) - 1;
    if (mask == full) {
      return von_neumann_entropy(state_);
    }
    return von_neumann_entropy(partial_trace(state_, party_subset::from_mask(mask)));
  }

  multipartite_state state_;
  mutable std::vector<double> values_;
  std::unique_ptr<std::once_flag[]> flags_;
};

inline double subsystem_entropy(const entropy_cache& cache,
                                const party_subset& subset) {
  return cache.entropy(subset);
}

// S(x|y) = S(xy) - S(y). May be negative for entangled states.
inline double conditional_entropy(const entropy_cache& cache,
                                  const party_subset& x,
                                  const party_subset& y) {
  if (!x.disjoint_with(y)) {
    throw std::invalid_argument("conditional_entropy: subsets overlap");
  }
  return cache.entropy(x.unite(y)) - cache.entropy(y);
}

// I(a:b|c) = S(ac) + S(bc) - S(abc) - S(c). Nonnegative by strong
// subadditivity, up to eigensolver noise.
inline double conditional_mutual_information(const entropy_cache& cache,
                                             const party_subset& a,
                                             const party_subset& b,
                                             const party_subset& c) {
  if (!a.disjoint_with(b) || !a.disjoint_with(c) || !b.disjoint_with(c)) {
    throw std::invalid_argument(
        "conditional_mutual_information: subsets overlap");
  }
  return cache.entropy(a.unite(c)) + cache.entropy(b.unite(c)) -
         cache.entropy(a.unite(b).unite(c)) - cache.entropy(c);
}

}  // namespace entgeo
