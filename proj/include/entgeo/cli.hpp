#pragma once

// Command-line surface. Subcommands: analyze, fig2, filter, categorize,
// monogamy, random. Exit codes: 0 success, 1 domain error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entgeo/experiment.hpp"
#include "entgeo/geometry.hpp"
#include "entgeo/spec_io.hpp"

namespace entgeo::cli {

namespace detail {

inline std::string subset_text(const party_subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.indices().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.indices()[i]);
  }
  return out + "}";
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::stoi(token));
  }
  return values;
}

inline party_subset parse_subset_arg(const std::string& text) {
  return party_subset(parse_int_list(text));
}

inline void print_geometry_report(std::ostream& out, const geometry_report& r) {
  out << "state: " << r.parties << " parties, dims";
  for (int d : r.dims) out << ' ' << d;
  out << '\n';
  out << "pair metric M (bits):\n";
  for (const auto& [key, value] : r.pair_metric) {
    out << "  M(" << key.first << "," << key.second << ") = "
        << format_sig12(value) << '\n';
  }
  if (!r.triple_area.empty()) {
    out << "triple area 2M (bits^2):\n";
    for (const auto& [key, value] : r.triple_area) {
      out << "  2M(" << key[0] << "," << key[1] << "," << key[2] << ") = "
          << format_sig12(value) << '\n';
    }
  }
  if (!r.volumes.empty()) {
    out << "higher volumes (m-1)M (bits^(m-1)):\n";
    std::vector<std::vector<int>> keys;
    for (const auto& [key, value] : r.volumes) keys.push_back(key);
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (const auto& key : keys) {
      out << "  " << key.size() - 1 << "M(";
      for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) out << ',';
        out << key[i];
      }
      out << ") = " << format_sig12(r.volumes.at(key)) << '\n';
    }
  }
  out << "E_raw        = " << format_sig12(r.e_raw) << '\n';
  out << "E_normalized = " << format_sig12(r.e_normalized) << '\n';
}

inline void print_ono_report(std::ostream& out, const ono_report& r,
                             const std::string& indent = "") {
  out << indent << "sides (a,b,c) = (" << format_sig12(r.a) << ", "
      << format_sig12(r.b) << ", " << format_sig12(r.c) << "), area = "
      << format_sig12(r.area) << '\n';
  out << indent << "brackets [a2+b2-c2, a2+c2-b2, c2+b2-a2] = ["
      << format_sig12(r.brackets[0]) << ", " << format_sig12(r.brackets[1])
      << ", " << format_sig12(r.brackets[2]) << "]\n";
  out << indent << "lhs = " << format_sig12(r.lhs)
      << ", rhs = " << format_sig12(r.rhs) << '\n';
  out << indent << "inequality holds: " << (r.holds ? "yes" : "no") << '\n';
  out << indent << "forced-zero brackets:";
  if (r.forced_zero_brackets.empty()) {
    out << " none";
  } else {
    for (int idx : r.forced_zero_brackets) out << ' ' << idx;
  }
  out << '\n';
}

struct output_target {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit output_target(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
      }
      stream = &file;
    }
  }
};

}  // namespace detail

// The near-maximal pair weakly coupled to a third party, in a product
// with a fourth: |psi> ~ |Phi+>_AB |0>_C + coupling |11>_AB |1>_C, then
// x |0>_D. The geometric sides of its ABC triangle feed the Ono check.
inline multipartite_state monogamy_probe_state(double coupling) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  v(0b0000) = inv_sqrt2;        // |00>_AB |0>_C |0>_D
  v(0b1100) = inv_sqrt2;        // |11>_AB |0>_C |0>_D
  v(0b1110) = coupling;         // |11>_AB |1>_C |0>_D
  v /= v.norm();
  cmatrix rho(16, 16);
  for (Eigen::Index r = 0; r < 16; ++r) {
    for (Eigen::Index c = 0; c < 16; ++c) {
      rho(r, c) = v(r) * std::conj(v(c));
    }
  }
  return validate_density(std::move(rho), {2, 2, 2, 2});
}

inline int dispatch(std::vector<std::string> args) {
  CLI::App app{"entropic-geometry entanglement monotones"};
  app.require_subcommand(1);

  // analyze
  std::string analyze_spec, analyze_out;
  auto* analyze = app.add_subcommand(
      "analyze", "full geometric report for a state spec file");
  analyze->add_option("--spec", analyze_spec, "state spec JSON file")->required();
  analyze->add_option("--out", analyze_out, "write report here instead of stdout");

  // fig2
  fig2_config fc;
  std::string fig2_plot;
  auto* fig2 = app.add_subcommand(
      "fig2", "two-pair random-state experiment (concurrence vs E)");
  fig2->add_option("--samples", fc.samples, "sample count")->default_val(1000);
  fig2->add_option("--seed", fc.seed, "base seed; sample i uses seed XOR i")
      ->default_val(0);
  fig2->add_option("--rank", fc.rank, "rank of each two-qubit factor")
      ->default_val(4);
  fig2->add_option("--out", fc.csv_path, "CSV output path")->required();
  fig2->add_option("--plot", fig2_plot, "gnuplot-ready series output path");

  // filter
  std::string filter_spec, filter_subset;
  bool filter_exhaustive = false;
  double filter_epsilon = epsilon_island;
  auto* filter = app.add_subcommand(
      "filter", "island test for a party group, or the full island partition");
  filter->add_option("--spec", filter_spec, "state spec JSON file")->required();
  auto* subset_opt =
      filter->add_option("--subset", filter_subset, "comma-separated parties");
  filter->add_flag("--exhaustive", filter_exhaustive,
                   "search the finest island partition");
  filter->add_option("--epsilon", filter_epsilon,
                     "island threshold on the monotone value")
      ->default_val(epsilon_island);
  subset_opt->excludes("--exhaustive");

  // categorize
  std::string cat_spec;
  auto* cat = app.add_subcommand(
      "categorize", "vanishing pattern of pair and triple monotones");
  cat->add_option("--spec", cat_spec, "state spec JSON file")->required();

  // monogamy
  double coupling = 0.2;
  auto* monogamy = app.add_subcommand(
      "monogamy", "Ono-inequality reading of pair monogamy on a probe state");
  monogamy->add_option("--coupling", coupling,
                       "amplitude coupling the near-maximal pair to party C")
      ->default_val(0.2);

  // random
  std::string rnd_dims = "2,2", rnd_out;
  int rnd_rank = 0;
  std::uint64_t rnd_seed = 0;
  bool rnd_pure = false;
  auto* rnd = app.add_subcommand(
      "random", "sample a random state and write it as a literal spec");
  rnd->add_option("--dims", rnd_dims, "comma-separated local dimensions")
      ->default_val("2,2");
  rnd->add_option("--rank", rnd_rank, "rank (0 = full)")->default_val(0);
  rnd->add_option("--seed", rnd_seed, "generator seed")->required();
  rnd->add_flag("--pure", rnd_pure, "draw a Haar-random pure state instead");
  rnd->add_option("--out", rnd_out, "spec output path")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) {
      const auto state = build_state(load_spec_file(analyze_spec));
      const auto report = analyze_state(state);
      detail::output_target target(analyze_out);
      detail::print_geometry_report(*target.stream, report);
    } else if (fig2->parsed()) {
      fc.plot_path =
          fig2_plot.empty()
              ? std::filesystem::path(fc.csv_path).replace_extension(".dat").string()
              : fig2_plot;
      const auto result = run_fig2(fc);
      std::cout << "samples   = " << result.rows.size() << '\n'
                << "seed      = " << fc.seed << '\n'
                << "spearman  = " << format_sig12(result.spearman) << '\n'
                << "csv       = " << fc.csv_path << '\n'
                << "plot      = " << fc.plot_path << '\n';
    } else if (filter->parsed()) {
      const auto state = build_state(load_spec_file(filter_spec));
      if (filter_exhaustive) {
        const auto report = filter_islands_exhaustive(state, filter_epsilon);
        std::cout << "islands:";
        for (const auto& block : *report.partition) {
          std::cout << ' ' << detail::subset_text(block);
        }
        std::cout << '\n';
      } else if (!filter_subset.empty()) {
        const auto query = detail::parse_subset_arg(filter_subset);
        const auto report = filter_islands(state, query, filter_epsilon);
        std::cout << "query " << detail::subset_text(report.queried_subset)
                  << ": monotone " << report.queried_subset.size() - 1
                  << "M = " << format_sig12(report.monotone_value)
                  << ", is_island = " << (report.is_island ? "true" : "false")
                  << '\n';
      } else {
        std::cerr << "filter: need --subset or --exhaustive\n";
        return 2;
      }
    } else if (cat->parsed()) {
      const auto state = build_state(load_spec_file(cat_spec));
      const auto report = categorize(state);
      std::cout << "pair metric M (bits):\n";
      for (const auto& [key, value] : report.pair_metric) {
        std::cout << "  M(" << key.first << "," << key.second << ") = "
                  << format_sig12(value) << '\n';
      }
      std::cout << "triple area 2M (bits^2):\n";
      for (const auto& [key, value] : report.triple_area) {
        std::cout << "  2M(" << key[0] << "," << key[1] << "," << key[2]
                  << ") = " << format_sig12(value) << '\n';
      }
      std::cout << "vanishing pairs:";
      if (report.vanishing_pairs.empty()) std::cout << " none";
      for (const auto& p : report.vanishing_pairs) {
        std::cout << " (" << p.first << "," << p.second << ")";
      }
      std::cout << "\nvanishing triples:";
      if (report.vanishing_triples.empty()) std::cout << " none";
      for (const auto& t : report.vanishing_triples) {
        std::cout << " (" << t[0] << "," << t[1] << "," << t[2] << ")";
      }
      std::cout << '\n';
    } else if (monogamy->parsed()) {
      const auto state = monogamy_probe_state(coupling);
      entropy_cache cache(state);
      const double m_ab = convoluted_metric(cache, 0, 1);
      const double m_ac = convoluted_metric(cache, 0, 2);
      const double m_bc = convoluted_metric(cache, 1, 2);
      const double area = convoluted_area(cache, 0, 1, 2);
      std::cout << "probe: near-maximal AB pair, coupling "
                << format_sig12(coupling) << " to C, product with D\n";
      std::cout << "M_AB = " << format_sig12(m_ab)
                << ", M_AC = " << format_sig12(m_ac)
                << ", M_BC = " << format_sig12(m_bc)
                << ", 2M_ABC = " << format_sig12(area) << '\n';
      std::cout << "ono check at the measured sides:\n";
      detail::print_ono_report(std::cout, ono_check(m_ab, m_ac, m_bc, area),
                               "  ");
      std::cout << "zero area forces the pair side to zero: forced M_AB = 0\n";
      std::cout << "ono check at the forced side:\n";
      detail::print_ono_report(std::cout, ono_check(0.0, m_ac, m_bc, area),
                               "  ");
    } else if (rnd->parsed()) {
      const std::vector<int> dims = detail::parse_int_list(rnd_dims);
      multipartite_state state =
          rnd_pure ? random_pure(dims, rnd_seed)
                   : random_density_ginibre(
                         dims,
                         rnd_rank > 0 ? rnd_rank
                                      : static_cast<int>(total_dimension(dims)),
                         rnd_seed);
      std::ofstream out(rnd_out, std::ios::binary);
      if (!out) {
        throw std::runtime_error("cannot open '" + rnd_out + "' for writing");
      }
      out << spec_to_json(make_literal_spec(state)) << '\n';
      const double purity = (state.matrix() * state.matrix()).trace().real();
      std::cout << "wrote " << rnd_out << " (side " << state.side()
                << ", purity " << format_sig12(purity) << ")\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace entgeo::cli
