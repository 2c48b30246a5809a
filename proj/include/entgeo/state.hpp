#pragma once

// Multipartite density matrices: subset indexing, validation, partial
// trace, partial transpose, and Hermitian eigendecomposition.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "entgeo/matrix.hpp"

namespace entgeo {

// Default tolerances, sized for double-precision eigensolver noise at
// side <= 64.
inline constexpr double tol_hermitian = 1e-9;
inline constexpr double tol_trace = 1e-9;
inline constexpr double tol_psd = 1e-9;

class validation_error : public std::runtime_error {
 public:
  enum class code {
    not_hermitian,
    not_unit_trace,
    not_psd,
    dimension_mismatch,
  };

  validation_error(code kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  code kind() const { return kind_; }

 private:
  code kind_;
};

// A set of party positions, kept strictly increasing. The empty subset is
// legal and carries entropy zero by convention.
class party_subset {
 public:
  party_subset() = default;

  party_subset(std::initializer_list<int> indices)
      : party_subset(std::vector<int>(indices)) {}

  explicit party_subset(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
      throw std::invalid_argument("party_subset: duplicate party index");
    }
    if (!indices_.empty() && indices_.front() < 0) {
      throw std::invalid_argument("party_subset: negative party index");
    }
  }

  static party_subset full(int n_parties) {
    std::vector<int> all(static_cast<std::size_t>(n_parties));
    std::iota(all.begin(), all.end(), 0);
    return party_subset(std::move(all));
  }

  static party_subset from_mask(std::uint32_t mask) {
    std::vector<int> idx;
    for (int p = 0; mask != 0; ++p, mask >>= 1) {
      if (mask & 1u) idx.push_back(p);
    }
    return party_subset(std::move(idx));
  }

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }

  bool contains(int p) const {
    return std::binary_search(indices_.begin(), indices_.end(), p);
  }

  bool disjoint_with(const party_subset& other) const {
    for (int p : other.indices_) {
      if (contains(p)) return false;
    }
    return true;
  }

  party_subset unite(const party_subset& other) const {
    std::vector<int> merged;
    std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                   other.indices_.end(), std::back_inserter(merged));
    party_subset out;
    out.indices_ = std::move(merged);
    return out;
  }

  party_subset complement(int n_parties) const {
    check_range(n_parties);
    std::vector<int> rest;
    for (int p = 0; p < n_parties; ++p) {
      if (!contains(p)) rest.push_back(p);
    }
    party_subset out;
    out.indices_ = std::move(rest);
    return out;
  }

  std::uint32_t mask(int n_parties) const {
    check_range(n_parties);
    std::uint32_t m = 0;
    for (int p : indices_) m |= (1u << p);
    return m;
  }

  void check_range(int n_parties) const {
    if (!indices_.empty() && indices_.back() >= n_parties) {
      throw std::invalid_argument("party_subset: index " +
                                  std::to_string(indices_.back()) +
                                  " out of range for " +
                                  std::to_string(n_parties) + " parties");
    }
  }

  friend bool operator==(const party_subset& a, const party_subset& b) {
    return a.indices_ == b.indices_;
  }
  friend bool operator<(const party_subset& a, const party_subset& b) {
    return a.indices_ < b.indices_;
  }

 private:
  std::vector<int> indices_;
};

// Validated density matrix over a list of local dimensions. The stored
// matrix stays bit-faithful to the input; eigenvalue noise is clamped only
// inside entropy evaluation.
class multipartite_state {
 public:
  multipartite_state() = default;

  const std::vector<int>& dims() const { return dims_; }
  const cmatrix& matrix() const { return matrix_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int party_count() const { return static_cast<int>(dims_.size()); }
  Eigen::Index side() const { return matrix_.rows(); }

  // For outputs of operations that preserve validity by construction
  // (partial trace, unitary conjugation of a validated state, ...).
  static multipartite_state unchecked(cmatrix m, std::vector<int> dims,
                                      std::vector<std::string> labels = {}) {
    multipartite_state st;
    st.matrix_ = std::move(m);
    st.dims_ = std::move(dims);
    st.labels_ = std::move(labels);
    return st;
  }

 private:
  cmatrix matrix_;
  std::vector<int> dims_;
  std::vector<std::string> labels_;
};

inline Eigen::Index total_dimension(const std::vector<int>& dims) {
  Eigen::Index side = 1;
  for (int d : dims) side *= d;
  return side;
}

namespace detail {

struct eigen_backend {
  // Complex Hermitian eigendecomposition, ascending order as Eigen gives it.
  static Eigen::SelfAdjointEigenSolver<cmatrix> solve(const cmatrix& m,
                                                      bool with_vectors) {
    Eigen::SelfAdjointEigenSolver<cmatrix> es;
    es.compute(m, with_vectors ? Eigen::ComputeEigenvectors
                               : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("hermitian eigendecomposition did not converge");
    }
    return es;
  }
};

inline void require_square_hermitian(const cmatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }
  double defect = hermiticity_defect(m);
  if (defect > tol_hermitian) {
    throw validation_error(validation_error::code::not_hermitian,
                           std::string(who) + ": Hermiticity defect " +
                               std::to_string(defect) + " exceeds tolerance");
  }
}

// Row offsets of every multi-index over the given parties, in the full
// matrix index space. Party p carries stride prod(dims[q], q > p).
inline std::vector<Eigen::Index> subset_offsets(const std::vector<int>& dims,
                                                const std::vector<int>& parties) {
  std::vector<Eigen::Index> strides(dims.size(), 1);
  for (int p = static_cast<int>(dims.size()) - 2; p >= 0; --p) {
    strides[p] = strides[p + 1] * dims[p + 1];
  }
  std::vector<Eigen::Index> offsets{0};
  for (int p : parties) {
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(dims[p]));
    for (Eigen::Index base : offsets) {
      for (int v = 0; v < dims[p]; ++v) {
        next.push_back(base + v * strides[p]);
      }
    }
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace detail

// Eigenvalues of a Hermitian matrix, descending.
inline std::vector<double> hermitian_eigenvalues(const cmatrix& m) {
  detail::require_square_hermitian(m, "hermitian_eigenvalues");
  auto es = detail::eigen_backend::solve(m, /*with_vectors=*/false);
  std::vector<double> vals(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::reverse(vals.begin(), vals.end());
  return vals;
}

struct hermitian_eigensystem_result {
  std::vector<double> values;  // descending
  cmatrix vectors;             // column i pairs with values[i]
};

inline hermitian_eigensystem_result hermitian_eigensystem(const cmatrix& m) {
  detail::require_square_hermitian(m, "hermitian_eigensystem");
  auto es = detail::eigen_backend::solve(m, /*with_vectors=*/true);
  const Eigen::Index n = m.rows();
  hermitian_eigensystem_result out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[static_cast<std::size_t>(i)] = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

// Validates m as a density matrix over dims. Error order: dimension
// mismatch, Hermiticity, unit trace, positivity.
inline multipartite_state validate_density(cmatrix m, std::vector<int> dims,
                                           std::vector<std::string> labels = {}) {
  if (dims.empty()) {
    throw validation_error(validation_error::code::dimension_mismatch,
                           "validate_density: empty dimension list");
  }
  for (int d : dims) {
    if (d < 2) {
      throw validation_error(validation_error::code::dimension_mismatch,
                             "validate_density: local dimension " +
                                 std::to_string(d) + " < 2");
    }
  }
  if (!labels.empty() && labels.size() != dims.size()) {
    throw validation_error(validation_error::code::dimension_mismatch,
                           "validate_density: label count differs from party count");
  }
  const Eigen::Index side = total_dimension(dims);
  if (m.rows() != m.cols() || m.rows() != side) {
    throw validation_error(
        validation_error::code::dimension_mismatch,
        "validate_density: matrix side " + std::to_string(m.rows()) + "x" +
            std::to_string(m.cols()) + " does not match product of dims " +
            std::to_string(side));
  }
  double defect = hermiticity_defect(m);
  if (defect > tol_hermitian) {
    throw validation_error(validation_error::code::not_hermitian,
                           "validate_density: Hermiticity defect " +
                               std::to_string(defect));
  }
  cplx tr = m.trace();
  if (std::abs(tr - cplx(1.0, 0.0)) > tol_trace) {
    throw validation_error(validation_error::code::not_unit_trace,
                           "validate_density: trace " + std::to_string(tr.real()) +
                               (tr.imag() >= 0 ? "+" : "") +
                               std::to_string(tr.imag()) + "i differs from 1");
  }
  auto vals = hermitian_eigenvalues(m);
  if (!vals.empty() && vals.back() < -tol_psd) {
    throw validation_error(validation_error::code::not_psd,
                           "validate_density: eigenvalue " +
                               std::to_string(vals.back()) +
                               " below -tolerance");
  }
  return multipartite_state::unchecked(std::move(m), std::move(dims),
                                       std::move(labels));
}

// Reduced state on the kept parties, relative order preserved.
inline multipartite_state partial_trace(const multipartite_state& state,
                                        const party_subset& keep) {
  const auto& dims = state.dims();
  const int n = state.party_count();
  keep.check_range(n);
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: keep subset must be nonempty");
  }
  const auto traced = keep.complement(n);

  const auto keep_off = detail::subset_offsets(dims, keep.indices());
  const auto trace_off = detail::subset_offsets(dims, traced.indices());
  const auto k = static_cast<Eigen::Index>(keep_off.size());

  cmatrix out = cmatrix::Zero(k, k);
  const cmatrix& in = state.matrix();
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      cplx acc(0.0, 0.0);
      for (Eigen::Index t : trace_off) {
        acc += in(keep_off[static_cast<std::size_t>(r)] + t,
                  keep_off[static_cast<std::size_t>(c)] + t);
      }
      out(r, c) = acc;
    }
  }

  std::vector<int> kept_dims;
  std::vector<std::string> kept_labels;
  for (int p : keep.indices()) {
    kept_dims.push_back(dims[static_cast<std::size_t>(p)]);
    if (!state.labels().empty()) {
      kept_labels.push_back(state.labels()[static_cast<std::size_t>(p)]);
    }
  }
  return multipartite_state::unchecked(std::move(out), std::move(kept_dims),
                                       std::move(kept_labels));
}

// Transposes the tensor indices of the selected parties only. Involutive.
inline cmatrix partial_transpose(const multipartite_state& state,
                                 const party_subset& subset) {
  const auto& dims = state.dims();
  const int n = state.party_count();
  subset.check_range(n);

  std::vector<Eigen::Index> strides(dims.size(), 1);
  for (int p = n - 2; p >= 0; --p) {
    strides[static_cast<std::size_t>(p)] =
        strides[static_cast<std::size_t>(p + 1)] * dims[static_cast<std::size_t>(p + 1)];
  }

  const Eigen::Index side = state.side();
  const cmatrix& in = state.matrix();
  cmatrix out(side, side);
  std::vector<int> rd(static_cast<std::size_t>(n)), cd(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < side; ++r) {
    Eigen::Index rr = r;
    for (int p = 0; p < n; ++p) {
      rd[static_cast<std::size_t>(p)] =
          static_cast<int>(rr / strides[static_cast<std::size_t>(p)]);
      rr %= strides[static_cast<std::size_t>(p)];
    }
    for (Eigen::Index c = 0; c < side; ++c) {
      Eigen::Index cc = c;
      for (int p = 0; p < n; ++p) {
        cd[static_cast<std::size_t>(p)] =
            static_cast<int>(cc / strides[static_cast<std::size_t>(p)]);
        cc %= strides[static_cast<std::size_t>(p)];
      }
      Eigen::Index mr = 0, mc = 0;
      for (int p = 0; p < n; ++p) {
        const bool swap = subset.contains(p);
        mr += (swap ? cd : rd)[static_cast<std::size_t>(p)] *
              strides[static_cast<std::size_t>(p)];
        mc += (swap ? rd : cd)[static_cast<std::size_t>(p)] *
              strides[static_cast<std::size_t>(p)];
      }
      out(mr, mc) = in(r, c);
    }
  }
  return out;
}

}  // namespace entgeo
