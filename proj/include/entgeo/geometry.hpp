#pragma once

// Entropic-geometric entanglement monotones: pair metric M, triple area
// 2M, general (m-1)-volumes over m parties, the aggregate content E, and
// their applications (island filtering, categorization, the Ono triangle
// check for monogamy).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entgeo/entropy.hpp"

namespace entgeo {

// Monotone values at or below this threshold flag a subset as an island
// (separable from the rest within numerical noise).
inline constexpr double epsilon_island = 1e-8;

namespace detail {

inline void require_pair(const entropy_cache& cache, int i, int j,
                         const char* who) {
  const int n = cache.party_count();
  if (i == j) {
    throw std::invalid_argument(std::string(who) + ": parties must differ");
  }
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw std::invalid_argument(std::string(who) + ": party index out of range");
  }
}

inline std::uint32_t full_mask(const entropy_cache& cache) {
  return (std::uint32_t{1} << cache.party_count()) - 1;
}

// Elementary symmetric polynomial e_{m-1} of m values: sum over x of the
// product of all values except x.
inline double elementary_symmetric_all_but_one(const std::vector<double>& s) {
  double total = 0.0;
  for (std::size_t skip = 0; skip < s.size(); ++skip) {
    double prod = 1.0;
    for (std::size_t y = 0; y < s.size(); ++y) {
      if (y != skip) prod *= s[y];
    }
    total += prod;
  }
  return total;
}

// Conditional entropies of each selected party given the other selected
// parties (tilde = false) or given all n-1 others (tilde = true).
inline std::vector<double> selected_conditionals(const entropy_cache& cache,
                                                 const party_subset& subset,
                                                 bool tilde) {
  const std::uint32_t full = full_mask(cache);
  const std::uint32_t sel = subset.mask(cache.party_count());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(subset.size()));
  for (int p : subset.indices()) {
    const std::uint32_t self = std::uint32_t{1} << p;
    const std::uint32_t ctx = tilde ? full : sel;
    out.push_back(cache.entropy_mask(ctx) - cache.entropy_mask(ctx & ~self));
  }
  return out;
}

}  // namespace detail

// D_ij = S(i|j) + S(j|i) = 2 S(ij) - S(i) - S(j). Depends only on the
// pair's reduced state; can be negative. Exposed for inspection, not a
// monotone by itself.
inline double distance_d(const entropy_cache& cache, int i, int j) {
  detail::require_pair(cache, i, j, "distance_d");
  if (i > j) std::swap(i, j);  // symmetric by definition; keep it bit-exact
  const std::uint32_t mi = std::uint32_t{1} << i;
  const std::uint32_t mj = std::uint32_t{1} << j;
  return 2.0 * cache.entropy_mask(mi | mj) - cache.entropy_mask(mi) -
         cache.entropy_mask(mj);
}

// Dtilde_ij = S(i|rest) + S(j|rest) = 2 S(full) - S(full\i) - S(full\j).
inline double distance_d_tilde(const entropy_cache& cache, int i, int j) {
  detail::require_pair(cache, i, j, "distance_d_tilde");
  if (cache.party_count() < 3) {
    throw std::invalid_argument("distance_d_tilde: needs at least 3 parties");
  }
  if (i > j) std::swap(i, j);
  const std::uint32_t full = detail::full_mask(cache);
  return 2.0 * cache.entropy_mask(full) -
         cache.entropy_mask(full & ~(std::uint32_t{1} << i)) -
         cache.entropy_mask(full & ~(std::uint32_t{1} << j));
}

// Pair metric M_ij = D_ij - Dtilde_ij. Also equals I(j:R|i) + I(i:R|j)
// with R the remaining parties; both routes are evaluated and must agree.
inline double convoluted_metric(const entropy_cache& cache, int i, int j) {
  detail::require_pair(cache, i, j, "convoluted_metric");
  if (i > j) std::swap(i, j);
  const double diff = distance_d(cache, i, j) - distance_d_tilde(cache, i, j);

  const std::uint32_t full = detail::full_mask(cache);
  const std::uint32_t mi = std::uint32_t{1} << i;
  const std::uint32_t mj = std::uint32_t{1} << j;
  const double cmi_form =
      (cache.entropy_mask(mi | mj) + cache.entropy_mask(full & ~mj) -
       cache.entropy_mask(full) - cache.entropy_mask(mi)) +
      (cache.entropy_mask(mi | mj) + cache.entropy_mask(full & ~mi) -
       cache.entropy_mask(full) - cache.entropy_mask(mj));
  if (std::abs(diff - cmi_form) > 1e-9) {
    throw std::logic_error("convoluted_metric: distance and CMI forms disagree");
  }
  return diff;
}

// Triple area 2M_ijk = Area - tilde(Area), where Area is the negated sum
// over the three unordered pairs of products of within-triple conditional
// entropies, and the tilde version conditions each party on all n-1 others.
inline double convoluted_area(const entropy_cache& cache, int i, int j, int k) {
  if (i == j || i == k || j == k) {
    throw std::invalid_argument("convoluted_area: parties must be distinct");
  }
  if (cache.party_count() < 3) {
    throw std::invalid_argument("convoluted_area: needs at least 3 parties");
  }
  const party_subset triple{i, j, k};
  triple.check_range(cache.party_count());
  const auto s = detail::selected_conditionals(cache, triple, false);
  const auto st = detail::selected_conditionals(cache, triple, true);
  const auto pair_sum = [](const std::vector<double>& v) {
    return v[0] * v[1] + v[0] * v[2] + v[1] * v[2];
  };
  return -pair_sum(s) + pair_sum(st);
}

// (m-1)-volume monotone over an m-party subset, closed form:
//   V = (-1)^m ((m-1)!/2) e_{m-1}(s_1..s_m),
// s_x the conditional entropy of x given the other selected parties, and
// the tilde version conditioning on all n-1 others. Returns V - Vtilde.
// Agrees with the even-permutation sum (see the *_by_permutations route).
inline double convoluted_volume(const entropy_cache& cache,
                                const party_subset& subset) {
  const int m = subset.size();
  if (m < 3) {
    throw std::invalid_argument("convoluted_volume: subset must have >= 3 parties");
  }
  subset.check_range(cache.party_count());
  double coef = (m % 2 == 0) ? 0.5 : -0.5;
  for (int t = 2; t < m; ++t) coef *= t;  // (m-1)!/2 with the sign of (-1)^m
  const auto s = detail::selected_conditionals(cache, subset, false);
  const auto st = detail::selected_conditionals(cache, subset, true);
  return coef * (detail::elementary_symmetric_all_but_one(s) -
                 detail::elementary_symmetric_all_but_one(st));
}

// Direct even-permutation sum: V = (-1)^m sum over even permutations of
// the m labels of the product of the first m-1 conditional entropies.
// Cross-check route; factorial cost, capped at m <= 9.
inline double convoluted_volume_by_permutations(const entropy_cache& cache,
                                                const party_subset& subset) {
  const int m = subset.size();
  if (m < 3) {
    throw std::invalid_argument(
        "convoluted_volume_by_permutations: subset must have >= 3 parties");
  }
  if (m > 9) {
    throw std::invalid_argument(
        "convoluted_volume_by_permutations: permutation sum capped at 9 parties");
  }
  subset.check_range(cache.party_count());
  const auto s = detail::selected_conditionals(cache, subset, false);
  const auto st = detail::selected_conditionals(cache, subset, true);

  std::vector<int> perm(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) perm[static_cast<std::size_t>(t)] = t;
  double v = 0.0, vt = 0.0;
  do {
    int inversions = 0;
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        if (perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)]) {
          ++inversions;
        }
      }
    }
    if (inversions % 2 != 0) continue;  // even permutations only
    double prod = 1.0, prodt = 1.0;
    for (int t = 0; t + 1 < m; ++t) {
      prod *= s[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
      prodt *= st[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
    }
    v += prod;
    vt += prodt;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * (v - vt);
}

// The monotone matching a subset's size: M for pairs, 2M for triples,
// (m-1)M for larger subsets.
inline double subset_monotone(const entropy_cache& cache,
                              const party_subset& subset) {
  if (subset.size() < 2) {
    throw std::invalid_argument("subset_monotone: subset must have >= 2 parties");
  }
  if (subset.size() == 2) {
    return convoluted_metric(cache, subset.indices()[0], subset.indices()[1]);
  }
  return convoluted_volume(cache, subset);
}

// Raw aggregate content: sum of M over unordered pairs plus every
// (m-1)-volume over unordered subsets of size 3..n. The size-n term is
// identically zero but kept for completeness.
inline double entanglement_content_raw(const entropy_cache& cache) {
  const int n = cache.party_count();
  if (n < 3) {
    throw std::invalid_argument("entanglement_content: needs at least 3 parties");
  }
  double total = 0.0;
  const std::uint32_t full = detail::full_mask(cache);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    if (size < 2) continue;
    total += subset_monotone(cache, party_subset::from_mask(mask));
  }
  return total;
}

// E_raw(bell x bell) / 2: the scale that pins E(bell x bell) = 2.
// Computed once on the canonical two-Bell-pair state and cached.
inline double bell_pair_normalizer() {
  static const double value = [] {
    cmatrix bell = cmatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    entropy_cache cache(multipartite_state::unchecked(kron(bell, bell),
                                                      {2, 2, 2, 2}));
    return entanglement_content_raw(cache) / 2.0;
  }();
  return value;
}

inline double entanglement_content(const entropy_cache& cache, bool normalized) {
  const double raw = entanglement_content_raw(cache);
  return normalized ? raw / bell_pair_normalizer() : raw;
}

// Full geometric profile of one state.
struct geometry_report {
  int parties = 0;
  std::vector<int> dims;
  std::map<std::pair<int, int>, double> pair_metric;      // bits
  std::map<std::array<int, 3>, double> triple_area;       // bits^2
  std::map<std::vector<int>, double> volumes;             // size 4..n subsets
  double e_raw = 0.0;
  double e_normalized = 0.0;
};

inline geometry_report analyze_state(const multipartite_state& state) {
  entropy_cache cache(state);
  const int n = cache.party_count();
  if (n < 3) {
    throw std::invalid_argument("analyze_state: needs at least 3 parties");
  }
  geometry_report report;
  report.parties = n;
  report.dims = state.dims();
  double total = 0.0;
  const std::uint32_t full = detail::full_mask(cache);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    if (size < 2) continue;
    const auto subset = party_subset::from_mask(mask);
    const double value = subset_monotone(cache, subset);
    total += value;
    const auto& idx = subset.indices();
    if (size == 2) {
      report.pair_metric[{idx[0], idx[1]}] = value;
    } else if (size == 3) {
      report.triple_area[{idx[0], idx[1], idx[2]}] = value;
    } else {
      report.volumes[idx] = value;
    }
  }
  report.e_raw = total;
  report.e_normalized = total / bell_pair_normalizer();
  return report;
}

// Ono triangle check: 27 [a^2+b^2-c^2]^2 [a^2+c^2-b^2]^2 [c^2+b^2-a^2]^2
// <= (4 Area)^6 for acute or right triangles. With zero area the
// inequality forces a bracket to vanish; that is the monogamy mechanism.
struct ono_report {
  double a = 0.0, b = 0.0, c = 0.0;  // side lengths (bits)
  double area = 0.0;                 // triangle measure (bits^2)
  std::array<double, 3> brackets{};  // a2+b2-c2, a2+c2-b2, c2+b2-a2
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::vector<int> forced_zero_brackets;  // bracket indices within 1e-8 of 0
};

inline ono_report ono_check(double m_ab, double m_ac, double m_bc, double area) {
  if (m_ab < 0.0 || m_ac < 0.0 || m_bc < 0.0) {
    throw std::invalid_argument("ono_check: side lengths must be nonnegative");
  }
  ono_report r;
  r.a = m_ab;
  r.b = m_ac;
  r.c = m_bc;
  r.area = area;
  const double a2 = m_ab * m_ab, b2 = m_ac * m_ac, c2 = m_bc * m_bc;
  r.brackets = {a2 + b2 - c2, a2 + c2 - b2, c2 + b2 - a2};
  r.lhs = 27.0;
  for (double br : r.brackets) r.lhs *= br * br;
  r.rhs = std::pow(4.0 * area, 6);
  r.holds = r.lhs <= r.rhs + 1e-12;
  for (int idx = 0; idx < 3; ++idx) {
    if (std::abs(r.brackets[static_cast<std::size_t>(idx)]) <= 1e-8) {
      r.forced_zero_brackets.push_back(idx);
    }
  }
  return r;
}

// One island query, or the full partition when exhaustive search ran.
struct island_report {
  party_subset queried_subset;
  double monotone_value = 0.0;
  bool is_island = false;
  std::optional<std::vector<party_subset>> partition;
};

// Query mode: the single monotone over the queried group decides island
// status, with no pairwise sweep over the rest of the network.
inline island_report filter_islands(const multipartite_state& state,
                                    const party_subset& query,
                                    double epsilon = epsilon_island) {
  if (query.size() < 2) {
    throw std::invalid_argument("filter_islands: query must have >= 2 parties");
  }
  query.check_range(state.party_count());
  entropy_cache cache(state);
  island_report report;
  report.queried_subset = query;
  report.monotone_value = subset_monotone(cache, query);
  report.is_island = report.monotone_value <= epsilon;
  return report;
}

namespace detail {

inline bool mask_is_island(const entropy_cache& cache,
                           std::map<std::uint32_t, bool>& memo,
                           std::uint32_t mask, double epsilon) {
  // Singletons are tested through their complement's monotone.
  if (std::popcount(mask) == 1) {
    return mask_is_island(cache, memo, full_mask(cache) & ~mask, epsilon);
  }
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  const double value = subset_monotone(cache, party_subset::from_mask(mask));
  const bool island = value <= epsilon;
  memo.emplace(mask, island);
  return island;
}

inline void partition_block(const entropy_cache& cache,
                            std::map<std::uint32_t, bool>& memo,
                            std::uint32_t block, double epsilon,
                            std::vector<std::uint32_t>& out) {
  if (std::popcount(block) == 1) {
    out.push_back(block);
    return;
  }
  const std::uint32_t anchor = block & (~block + 1);  // lowest set bit
  // Enumerate proper sub-blocks containing the anchor, ascending.
  for (std::uint32_t left = anchor; left < block; left = ((left | ~block) + 1) & block) {
    if ((left & anchor) == 0 || left == block) continue;
    const std::uint32_t right = block & ~left;
    if (mask_is_island(cache, memo, left, epsilon) &&
        mask_is_island(cache, memo, right, epsilon)) {
      partition_block(cache, memo, left, epsilon, out);
      partition_block(cache, memo, right, epsilon, out);
      return;
    }
  }
  out.push_back(block);  // no clean split: an entangled block
}

}  // namespace detail

// Exhaustive mode: finest partition into islands by recursive bipartition
// testing. Exponential in the party count, so capped at 8 parties.
inline island_report filter_islands_exhaustive(const multipartite_state& state,
                                               double epsilon = epsilon_island) {
  const int n = state.party_count();
  if (n < 3) {
    throw std::invalid_argument("filter_islands_exhaustive: needs >= 3 parties");
  }
  if (n > 8) {
    throw std::invalid_argument(
        "filter_islands_exhaustive: limited to 8 parties");
  }
  entropy_cache cache(state);
  std::map<std::uint32_t, bool> memo;
  std::vector<std::uint32_t> blocks;
  detail::partition_block(cache, memo, detail::full_mask(cache), epsilon, blocks);
  std::sort(blocks.begin(), blocks.end(),
            [](std::uint32_t a, std::uint32_t b) {
              return (a & (~a + 1)) < (b & (~b + 1));  // by smallest member
            });

  island_report report;
  report.queried_subset = party_subset::full(n);
  report.monotone_value = 0.0;  // the n-party monotone vanishes identically
  report.is_island = true;
  std::vector<party_subset> partition;
  partition.reserve(blocks.size());
  for (std::uint32_t b : blocks) partition.push_back(party_subset::from_mask(b));
  report.partition = std::move(partition);
  return report;
}

// Vanishing pattern of M over pairs and 2M over triples; distinguishes
// e.g. two entangled pairs from a triple in a product with a singleton.
struct category_report {
  int parties = 0;
  std::map<std::pair<int, int>, double> pair_metric;
  std::map<std::array<int, 3>, double> triple_area;
  std::vector<std::pair<int, int>> vanishing_pairs;
  std::vector<std::array<int, 3>> vanishing_triples;
};

inline category_report categorize(const multipartite_state& state,
                                  double epsilon = epsilon_island) {
  const int n = state.party_count();
  if (n < 4) {
    throw std::invalid_argument("categorize: needs at least 4 parties");
  }
  entropy_cache cache(state);
  category_report report;
  report.parties = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double m = convoluted_metric(cache, i, j);
      report.pair_metric[{i, j}] = m;
      if (m <= epsilon) report.vanishing_pairs.push_back({i, j});
      for (int k = j + 1; k < n; ++k) {
        const double a = convoluted_area(cache, i, j, k);
        report.triple_area[{i, j, k}] = a;
        if (a <= epsilon) report.vanishing_triples.push_back({i, j, k});
      }
    }
  }
  return report;
}

}  // namespace entgeo
