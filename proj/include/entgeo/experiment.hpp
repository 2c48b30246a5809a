#pragma once

// The two-pair random-state experiment: draw rho_12 x rho_34 samples,
// compare the concurrence sum against the normalized aggregate content E,
// and emit CSV plus gnuplot-ready series data.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "entgeo/generators.hpp"
#include "entgeo/geometry.hpp"
#include "entgeo/oracles.hpp"

namespace entgeo {

// 12 significant digits, fixed scientific form; reparsing reproduces the
// printed value exactly.
inline std::string format_sig12(double value) {
  if (value == 0.0) value = 0.0;  // canonicalize -0.0
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.11e", value);
  return buffer;
}

struct fig2_row {
  int sample_id = 0;
  std::uint64_t seed = 0;
  double concurrence_sum = 0.0;
  double e_raw = 0.0;
  double e_normalized = 0.0;
};

struct fig2_config {
  int samples = 1000;
  std::uint64_t seed = 0;
  int rank = 4;  // per two-qubit factor
  std::string csv_path;   // empty: skip file
  std::string plot_path;  // empty: skip file
};

struct fig2_result {
  std::vector<fig2_row> rows;  // ascending by concurrence_sum, ties by id
  double spearman = 0.0;
};

// Spearman rank correlation with average ranks on ties; invariant under
// any common permutation of the two columns.
inline double spearman_rank_correlation(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("spearman: need two columns of equal size >= 2");
  }
  const auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

// One experiment row from a concrete pair of two-qubit factors.
inline fig2_row fig2_evaluate(const multipartite_state& rho12,
                              const multipartite_state& rho34, int sample_id,
                              std::uint64_t seed) {
  fig2_row row;
  row.sample_id = sample_id;
  row.seed = seed;
  row.concurrence_sum = concurrence(rho12) + concurrence(rho34);
  entropy_cache cache(compose(rho12, rho34));
  row.e_raw = entanglement_content_raw(cache);
  row.e_normalized = row.e_raw / bell_pair_normalizer();
  return row;
}

inline void write_fig2_csv(std::ostream& out, const std::vector<fig2_row>& rows) {
  out << "sample_id,seed,concurrence_sum,e_raw,e_normalized\n";
  for (const auto& r : rows) {
    out << r.sample_id << ',' << r.seed << ',' << format_sig12(r.concurrence_sum)
        << ',' << format_sig12(r.e_raw) << ',' << format_sig12(r.e_normalized)
        << '\n';
  }
}

inline std::vector<fig2_row> parse_fig2_csv(std::istream& in) {
  std::vector<fig2_row> rows;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("fig2 csv: missing header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    fig2_row row;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    if (!(fields >> row.sample_id >> row.seed >> row.concurrence_sum >>
          row.e_raw >> row.e_normalized)) {
      throw std::runtime_error("fig2 csv: malformed row '" + line + "'");
    }
    rows.push_back(row);
  }
  return rows;
}

// Two series over the rank index of the sorted rows.
inline void write_fig2_plot(std::ostream& out, const std::vector<fig2_row>& rows) {
  out << "# two-pair random-state experiment, rows sorted by concurrence sum\n";
  out << "# series 1: rank index vs concurrence_sum\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ' ' << format_sig12(rows[i].concurrence_sum) << '\n';
  }
  out << "\n\n# series 2: rank index vs e_normalized\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ' ' << format_sig12(rows[i].e_normalized) << '\n';
  }
}

// Runs the experiment: sample i uses seed ^ i, each sample drawing its two
// factors from sub-streams 0 and 1 of that value. Samples are evaluated
// concurrently; rows are assembled in sample order, so output does not
// depend on scheduling.
inline fig2_result run_fig2(const fig2_config& config) {
  if (config.samples < 1) {
    throw std::invalid_argument("run_fig2: samples must be >= 1");
  }
  fig2_result result;
  result.rows.resize(static_cast<std::size_t>(config.samples));

  const auto worker = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const std::uint64_t sample_seed = config.seed ^ static_cast<std::uint64_t>(i);
      const auto rho12 = random_density_ginibre({2, 2}, config.rank,
                                                mix_seed(sample_seed, 0));
      const auto rho34 = random_density_ginibre({2, 2}, config.rank,
                                                mix_seed(sample_seed, 1));
      result.rows[static_cast<std::size_t>(i)] =
          fig2_evaluate(rho12, rho34, i, sample_seed);
    }
  };

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int n_threads = std::clamp(std::min(hw, config.samples), 1, 16);
  if (n_threads <= 1) {
    worker(0, config.samples);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (config.samples + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(config.samples, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const fig2_row& a, const fig2_row& b) {
              if (a.concurrence_sum != b.concurrence_sum) {
                return a.concurrence_sum < b.concurrence_sum;
              }
              return a.sample_id < b.sample_id;
            });

  std::vector<double> cs, es;
  cs.reserve(result.rows.size());
  es.reserve(result.rows.size());
  for (const auto& r : result.rows) {
    cs.push_back(r.concurrence_sum);
    es.push_back(r.e_normalized);
  }
  result.spearman = result.rows.size() >= 2
                        ? spearman_rank_correlation(cs, es)
                        : 0.0;

  if (!config.csv_path.empty()) {
    std::ofstream out(config.csv_path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open '" + config.csv_path + "' for writing");
    }
    write_fig2_csv(out, result.rows);
  }
  if (!config.plot_path.empty()) {
    std::ofstream out(config.plot_path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open '" + config.plot_path + "' for writing");
    }
    write_fig2_plot(out, result.rows);
  }
  return result;
}

}  // namespace entgeo
