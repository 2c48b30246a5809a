#pragma once

// Ensemble machinery for the mixed-state definitions: explicit ensemble
// averaging and a heuristic minimization over Schrodinger-HJW
// decompositions. The minimizer is an anytime UPPER bound on the
// decomposition infimum, never a certificate of it.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "entgeo/generators.hpp"
#include "entgeo/geometry.hpp"

namespace entgeo {

// Eigenvalues below this do not count toward the decomposition rank.
inline constexpr double roof_rank_cutoff = 1e-12;

struct weighted_member {
  double weight = 0.0;
  multipartite_state state;
};

// A weighted decomposition {p_j, rho_j} of a target density matrix.
class ensemble {
 public:
  static constexpr double weight_sum_tolerance = 1e-9;
  static constexpr double reconstruction_tolerance = 1e-8;

  // Validates the defining invariants: weights in (0,1] summing to one,
  // and the weighted member sum reconstructing the target.
  static ensemble checked(std::vector<weighted_member> members,
                          multipartite_state target) {
    if (members.empty()) {
      throw std::invalid_argument("ensemble: no members");
    }
    double sum = 0.0;
    cmatrix mix = cmatrix::Zero(target.side(), target.side());
    for (const auto& m : members) {
      if (!(m.weight > 0.0) || m.weight > 1.0 + weight_sum_tolerance) {
        throw std::invalid_argument("ensemble: member weight outside (0, 1]");
      }
      if (m.state.dims() != target.dims()) {
        throw std::invalid_argument("ensemble: member dims differ from target");
      }
      sum += m.weight;
      mix += m.weight * m.state.matrix();
    }
    if (std::abs(sum - 1.0) > weight_sum_tolerance) {
      throw std::invalid_argument("ensemble: weights sum to " +
                                  std::to_string(sum) + ", not 1");
    }
    if (max_abs(mix - target.matrix()) > reconstruction_tolerance) {
      throw std::invalid_argument("ensemble: members do not reconstruct target");
    }
    ensemble e;
    e.members_ = std::move(members);
    e.target_ = std::move(target);
    return e;
  }

  const std::vector<weighted_member>& members() const { return members_; }
  const multipartite_state& target() const { return target_; }

 private:
  ensemble() = default;
  std::vector<weighted_member> members_;
  multipartite_state target_;
};

// A named monotone with its party arguments, evaluated per member.
struct monotone_functional {
  enum class kind { pair_metric, area, volume, content };

  kind k = kind::pair_metric;
  party_subset parties;

  static monotone_functional pair(int i, int j) {
    return {kind::pair_metric, party_subset{i, j}};
  }
  static monotone_functional triple(int i, int j, int k) {
    return {kind::area, party_subset{i, j, k}};
  }
  static monotone_functional volume(party_subset subset) {
    return {kind::volume, std::move(subset)};
  }
  static monotone_functional content() { return {kind::content, {}}; }

  double operator()(const multipartite_state& state) const {
    entropy_cache cache(state);
    switch (k) {
      case kind::pair_metric:
        return convoluted_metric(cache, parties.indices()[0],
                                 parties.indices()[1]);
      case kind::area:
        return convoluted_area(cache, parties.indices()[0], parties.indices()[1],
                               parties.indices()[2]);
      case kind::volume:
        return convoluted_volume(cache, parties);
      case kind::content:
        return entanglement_content(cache, /*normalized=*/false);
    }
    throw std::invalid_argument("monotone_functional: unknown kind");
  }
};

inline double ensemble_average(const ensemble& ens,
                               const monotone_functional& f) {
  double total = 0.0;
  for (const auto& m : ens.members()) {
    total += m.weight * f(m.state);
  }
  return total;
}

namespace detail {

struct eigen_parts {
  std::vector<double> lambdas;  // rank-many, descending, > cutoff
  cmatrix vectors;              // matching columns
};

inline eigen_parts significant_spectrum(const multipartite_state& rho) {
  auto es = hermitian_eigensystem(rho.matrix());
  eigen_parts parts;
  for (std::size_t i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > roof_rank_cutoff) {
      parts.lambdas.push_back(es.values[i]);
    }
  }
  parts.vectors = es.vectors.leftCols(static_cast<Eigen::Index>(parts.lambdas.size()));
  return parts;
}

// k x k unitary as a product of phased Givens rotations, one (theta, phi)
// pair per index pair (p, q). Parameter order: (0,1), (0,2), ..., (k-2,k-1).
inline cmatrix givens_unitary(int k, std::span<const double> params) {
  cmatrix u = cmatrix::Identity(k, k);
  std::size_t at = 0;
  for (int p = 0; p < k; ++p) {
    for (int q = p + 1; q < k; ++q) {
      const double theta = params[at++];
      const double phi = params[at++];
      const cplx phase = std::polar(1.0, phi);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      // rotate rows p, q of u in place
      for (int col = 0; col < k; ++col) {
        const cplx up = u(p, col);
        const cplx uq = u(q, col);
        u(p, col) = c * up - phase * s * uq;
        u(q, col) = std::conj(phase) * s * up + c * uq;
      }
    }
  }
  return u;
}

}  // namespace detail

inline int decomposition_rank(const multipartite_state& rho) {
  return static_cast<int>(detail::significant_spectrum(rho).lambdas.size());
}

// Pure-state ensemble from the Schrodinger-HJW construction: a k-column
// isometry on the purifying register of the eigen-decomposition
// purification. params carries k(k-1) values, a (theta, phi) pair per
// Givens rotation; the all-zero vector reproduces the eigen-ensemble.
inline ensemble hjw_decomposition(const multipartite_state& rho, int k,
                                  std::span<const double> params) {
  const auto parts = detail::significant_spectrum(rho);
  const int rank = static_cast<int>(parts.lambdas.size());
  if (k < rank) {
    throw std::invalid_argument("hjw_decomposition: k below the state rank");
  }
  const std::size_t expected = static_cast<std::size_t>(k) *
                               static_cast<std::size_t>(k - 1);
  if (params.size() != expected) {
    throw std::invalid_argument("hjw_decomposition: expected " +
                                std::to_string(expected) + " parameters");
  }
  const cmatrix u = detail::givens_unitary(k, params);

  std::vector<weighted_member> members;
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(rho.side());
    for (int i = 0; i < rank; ++i) {
      psi += u(j, i) * std::sqrt(parts.lambdas[static_cast<std::size_t>(i)]) *
             parts.vectors.col(i);
    }
    const double p = psi.squaredNorm();
    if (p <= 1e-14) continue;  // zero-weight branch of the isometry
    psi /= std::sqrt(p);
    cmatrix proj(rho.side(), rho.side());
    for (Eigen::Index r = 0; r < rho.side(); ++r) {
      for (Eigen::Index c = 0; c < rho.side(); ++c) {
        proj(r, c) = psi(r) * std::conj(psi(c));
      }
    }
    members.push_back(
        {p, multipartite_state::unchecked(std::move(proj), rho.dims())});
  }
  return ensemble::checked(std::move(members), rho);
}

inline ensemble eigen_ensemble(const multipartite_state& rho) {
  const int rank = decomposition_rank(rho);
  std::vector<double> zeros(
      static_cast<std::size_t>(rank) * static_cast<std::size_t>(rank - 1), 0.0);
  return hjw_decomposition(rho, rank, zeros);
}

struct roof_result {
  double value = 0.0;
  ensemble best;
  int evaluations = 0;

  roof_result(double v, ensemble e, int n)
      : value(v), best(std::move(e)), evaluations(n) {}
};

// Heuristic upper bound on the decomposition infimum of the ensemble
// average: random-restart coordinate descent over the isometry
// parameters. Anytime contract: the result is the minimum over all
// ensembles visited, the eigen-ensemble is always visited first, and for
// a fixed seed the visit sequence does not depend on the budget, so the
// value is non-increasing in the budget.
inline roof_result roof_minimize(const multipartite_state& rho,
                                 const monotone_functional& f, int k,
                                 int budget, std::uint64_t seed) {
  if (budget < 1) {
    throw std::invalid_argument("roof_minimize: budget must be >= 1");
  }
  const int rank = decomposition_rank(rho);
  if (rank <= 1) {
    // Pure target: every decomposition is trivial.
    return roof_result(f(rho), eigen_ensemble(rho), 0);
  }
  if (k < rank) {
    throw std::invalid_argument("roof_minimize: k below the state rank");
  }
  k = std::min(k, rank + 4);  // larger registers add cost, not coverage
  const std::size_t param_count =
      static_cast<std::size_t>(k) * static_cast<std::size_t>(k - 1);

  gaussian_prng prng(seed);
  int evaluations = 0;
  double best_value = 0.0;
  std::optional<ensemble> best;

  const auto evaluate = [&](const std::vector<double>& params) {
    ensemble ens = hjw_decomposition(rho, k, params);
    const double value = ensemble_average(ens, f);
    ++evaluations;
    if (!best || value < best_value) {
      best_value = value;
      best = std::move(ens);
    }
    return value;
  };

  const auto random_params = [&](std::vector<double>& params) {
    for (std::size_t d = 0; d < param_count; ++d) {
      const double half =
          (d % 2 == 0) ? std::numbers::pi / 2.0 : std::numbers::pi;
      params[d] = (2.0 * prng.uniform01() - 1.0) * half;
    }
  };

  // Coordinate descent with step halving from `params`, spending at most
  // `allowance` evaluations. Descents on curved valleys zigzag, so each
  // gets a bounded share of the budget and the loop restarts elsewhere.
  const auto descend = [&](std::vector<double>& params, double current,
                           int allowance) {
    const int stop_at = std::min(budget, evaluations + allowance);
    double step = 0.5;
    while (step > 1e-6 && evaluations < stop_at && current > 1e-12) {
      bool improved_in_sweep = false;
      for (std::size_t d = 0; d < param_count && evaluations < stop_at; ++d) {
        for (double direction : {1.0, -1.0}) {
          if (evaluations >= stop_at) break;
          params[d] += direction * step;
          double trial = evaluate(params);
          if (trial < current) {
            current = trial;
            improved_in_sweep = true;
            while (evaluations < stop_at) {  // walk while the move pays
              params[d] += direction * step;
              trial = evaluate(params);
              if (trial < current) {
                current = trial;
              } else {
                params[d] -= direction * step;
                break;
              }
            }
            break;  // next coordinate
          }
          params[d] -= direction * step;
        }
      }
      if (!improved_in_sweep) step /= 2.0;
    }
  };

  std::vector<double> params(param_count, 0.0);
  double current = evaluate(params);  // eigen-ensemble first, always visited
  const int scatter = 2 * static_cast<int>(param_count) + 4;
  const int allowance = 24 + 16 * static_cast<int>(param_count);
  descend(params, current, allowance);

  std::vector<double> candidate(param_count, 0.0);
  while (evaluations < budget) {
    // scatter a handful of random starts, descend from the best of them
    random_params(params);
    current = evaluate(params);
    for (int s = 1; s < scatter && evaluations < budget; ++s) {
      random_params(candidate);
      const double value = evaluate(candidate);
      if (value < current) {
        current = value;
        params = candidate;
      }
    }
    if (evaluations >= budget) break;
    descend(params, current, allowance);
  }

  return roof_result(best_value, std::move(*best), evaluations);
}

}  // namespace entgeo
