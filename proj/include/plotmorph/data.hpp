#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "plotmorph/error.hpp"

namespace plotmorph {

// Row-major n-dimensional array.
template <typename T>
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, T fill = T{})
      : shape(std::move(s)), data(element_count(shape), fill) {}
  Tensor(std::vector<std::size_t> s, std::vector<T> d)
      : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != element_count(shape)) {
      throw Error(ErrorCode::InvalidArgument, "tensor data does not match shape");
    }
  }

  static std::size_t element_count(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
  }

  std::size_t size() const { return data.size(); }

  T& at(std::size_t i, std::size_t j, std::size_t k) {
    return data[(i * shape[1] + j) * shape[2] + k];
  }
  const T& at(std::size_t i, std::size_t j, std::size_t k) const {
    return data[(i * shape[1] + j) * shape[2] + k];
  }

  bool operator==(const Tensor&) const = default;
};

using Image = std::variant<Tensor<std::uint8_t>, Tensor<std::uint16_t>, Tensor<float>>;
using LabelMask = Tensor<std::int32_t>;

struct DenseMatrix {
  std::vector<float> values;  // n_obs * n_var, row-major
};

struct CsrMatrix {
  std::vector<std::int64_t> row_ptr;  // n_obs + 1
  std::vector<std::int32_t> col_idx;
  std::vector<float> values;
};

struct CategoricalColumn {
  std::vector<std::int32_t> codes;
  std::vector<std::string> categories;
};

struct NumericColumn {
  std::vector<float> values;
};

using ObsColumn = std::variant<CategoricalColumn, NumericColumn>;

struct Embedding {
  std::size_t dims = 0;
  std::vector<float> values;  // n_obs * dims, row-major
};

// Observations x features expression values plus per-observation
// annotations and named low-dimensional embeddings.
struct AnnotatedMatrix {
  std::size_t n_obs = 0;
  std::size_t n_var = 0;
  std::variant<DenseMatrix, CsrMatrix> X;
  std::vector<std::string> obs_ids;
  std::vector<std::string> var_ids;
  std::map<std::string, ObsColumn> obs_columns;
  std::map<std::string, Embedding> embeddings;

  bool is_sparse() const { return std::holds_alternative<CsrMatrix>(X); }

  std::optional<std::size_t> feature_index(const std::string& id) const {
    for (std::size_t j = 0; j < var_ids.size(); ++j) {
      if (var_ids[j] == id) return j;
    }
    return std::nullopt;
  }

  const CategoricalColumn* categorical(const std::string& name) const {
    auto it = obs_columns.find(name);
    if (it == obs_columns.end()) return nullptr;
    return std::get_if<CategoricalColumn>(&it->second);
  }

  const NumericColumn* numeric(const std::string& name) const {
    auto it = obs_columns.find(name);
    if (it == obs_columns.end()) return nullptr;
    return std::get_if<NumericColumn>(&it->second);
  }

  // Writes row i densely into out (size n_var).
  void row(std::size_t i, std::span<float> out) const {
    if (const auto* dense = std::get_if<DenseMatrix>(&X)) {
      std::copy_n(dense->values.begin() + static_cast<std::ptrdiff_t>(i * n_var), n_var,
                  out.begin());
      return;
    }
    const auto& csr = std::get<CsrMatrix>(X);
    std::fill(out.begin(), out.end(), 0.0f);
    for (auto k = csr.row_ptr[i]; k < csr.row_ptr[i + 1]; ++k) {
      out[static_cast<std::size_t>(csr.col_idx[k])] = csr.values[k];
    }
  }

  float value(std::size_t i, std::size_t j) const {
    if (const auto* dense = std::get_if<DenseMatrix>(&X)) return dense->values[i * n_var + j];
    const auto& csr = std::get<CsrMatrix>(X);
    for (auto k = csr.row_ptr[i]; k < csr.row_ptr[i + 1]; ++k) {
      if (static_cast<std::size_t>(csr.col_idx[k]) == j) return csr.values[k];
    }
    return 0.0f;
  }

  // Throws InvalidArgument describing the first broken structural invariant.
  void check() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (obs_ids.size() != n_obs) fail("obs_ids length != n_obs");
    if (var_ids.size() != n_var) fail("var_ids length != n_var");
    if (std::set<std::string>(obs_ids.begin(), obs_ids.end()).size() != n_obs) fail("duplicate obs id");
    if (std::set<std::string>(var_ids.begin(), var_ids.end()).size() != n_var) fail("duplicate var id");
    if (const auto* dense = std::get_if<DenseMatrix>(&X)) {
      if (dense->values.size() != n_obs * n_var) fail("dense X size mismatch");
    } else {
      const auto& csr = std::get<CsrMatrix>(X);
      if (csr.row_ptr.size() != n_obs + 1 || csr.row_ptr.front() != 0) fail("bad CSR row pointers");
      if (csr.col_idx.size() != csr.values.size() ||
          static_cast<std::size_t>(csr.row_ptr.back()) != csr.values.size()) {
        fail("CSR nnz mismatch");
      }
      for (std::size_t i = 0; i < n_obs; ++i) {
        for (auto k = csr.row_ptr[i]; k < csr.row_ptr[i + 1]; ++k) {
          if (csr.col_idx[k] < 0 || static_cast<std::size_t>(csr.col_idx[k]) >= n_var) fail("CSR column out of range");
          if (k > csr.row_ptr[i] && csr.col_idx[k] <= csr.col_idx[k - 1]) fail("CSR columns not strictly increasing");
        }
      }
    }
    for (const auto& [name, column] : obs_columns) {
      if (const auto* cat = std::get_if<CategoricalColumn>(&column)) {
        if (cat->codes.size() != n_obs) fail("obs column '" + name + "' length != n_obs");
        for (auto code : cat->codes) {
          if (code < 0 || static_cast<std::size_t>(code) >= cat->categories.size()) {
            fail("obs column '" + name + "' code out of range");
          }
        }
      } else if (std::get<NumericColumn>(column).values.size() != n_obs) {
        fail("obs column '" + name + "' length != n_obs");
      }
    }
    for (const auto& [name, emb] : embeddings) {
      if (emb.values.size() != n_obs * emb.dims) fail("embedding '" + name + "' size mismatch");
    }
  }
};

// Densified copy, used by tests and the sparse/dense agreement checks.
inline AnnotatedMatrix densify(const AnnotatedMatrix& am) {
  AnnotatedMatrix out = am;
  DenseMatrix dense;
  dense.values.resize(am.n_obs * am.n_var);
  for (std::size_t i = 0; i < am.n_obs; ++i) {
    am.row(i, std::span<float>(dense.values).subspan(i * am.n_var, am.n_var));
  }
  out.X = std::move(dense);
  return out;
}

// Circular spots: x, y, radius per row.
struct Circles {
  std::vector<float> xyr;  // n * 3
  std::vector<std::string> ids;
  std::size_t size() const { return ids.size(); }
};

struct Points {
  std::vector<float> xy;  // n * 2
  std::vector<std::string> ids;
  std::size_t size() const { return ids.size(); }
};

// The four spatial element kinds plus the linked expression table, whose
// obs ids match the shape ids.
struct SpatialElements {
  std::map<std::string, Image> images;
  std::map<std::string, Circles> shapes;
  std::map<std::string, Points> points;
  std::map<std::string, LabelMask> labels;
  std::shared_ptr<const AnnotatedMatrix> table;
};

}  // namespace plotmorph
