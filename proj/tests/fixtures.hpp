#pragma once

// Deterministic synthetic datasets shared by the unit and acceptance suites.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "plotmorph/data.hpp"

namespace plotmorph::testing {

// Raw mt19937_64 output is fixed by the standard; distributions are not,
// so values are derived from it by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  float uniform(float lo, float hi) { return lo + static_cast<float>(uniform()) * (hi - lo); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 gen_;
};

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("plotmorph-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& child) const { return path_ / child; }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// n_obs x n_var dense matrix with roughly `zero_share` exact zeros and
// `n_groups` categories assigned at random.
inline AnnotatedMatrix random_matrix(std::size_t n_obs, std::size_t n_var, std::size_t n_groups, std::uint64_t seed,
                                     double zero_share = 0.4) {
  Rng rng(seed);
  AnnotatedMatrix am;
  am.n_obs = n_obs;
  am.n_var = n_var;
  am.obs_ids = numbered("cell_", n_obs);
  am.var_ids = numbered("gene_", n_var);
  DenseMatrix dense;
  for (std::size_t i = 0; i < n_obs * n_var; ++i) {
    dense.values.push_back(rng.uniform() < zero_share ? 0.0f : rng.uniform(0.0f, 10.0f));
  }
  am.X = std::move(dense);
  CategoricalColumn groups;
  groups.categories = numbered("g", n_groups);
  for (std::size_t i = 0; i < n_obs; ++i) groups.codes.push_back(static_cast<std::int32_t>(rng.below(n_groups)));
  am.obs_columns["group"] = std::move(groups);
  return am;
}

inline AnnotatedMatrix to_csr(const AnnotatedMatrix& dense_am) {
  AnnotatedMatrix out = dense_am;
  CsrMatrix csr;
  csr.row_ptr.push_back(0);
  for (std::size_t i = 0; i < dense_am.n_obs; ++i) {
    for (std::size_t j = 0; j < dense_am.n_var; ++j) {
      float v = dense_am.value(i, j);
      if (v != 0.0f) {
        csr.col_idx.push_back(static_cast<std::int32_t>(j));
        csr.values.push_back(v);
      }
    }
    csr.row_ptr.push_back(static_cast<std::int64_t>(csr.values.size()));
  }
  out.X = std::move(csr);
  return out;
}

// 100 cells in 3 clusters ("louvain"), PCA and UMAP embeddings, QC columns.
inline std::shared_ptr<const AnnotatedMatrix> clustered_cells(std::size_t n_obs = 100) {
  Rng rng(7);
  auto am = std::make_shared<AnnotatedMatrix>();
  am->n_obs = n_obs;
  am->var_ids = {"CD3E", "MS4A1", "LYZ", "NKG7", "FTL"};
  am->n_var = am->var_ids.size();
  am->obs_ids = numbered("cell_", n_obs);
  CategoricalColumn louvain{{}, {"0", "1", "2"}};
  DenseMatrix x;
  Embedding pca{2, {}}, umap{2, {}};
  NumericColumn n_counts, n_genes;
  for (std::size_t i = 0; i < n_obs; ++i) {
    const auto c = static_cast<std::int32_t>(i % 3);
    louvain.codes.push_back(c);
    for (std::size_t j = 0; j < am->n_var; ++j) {
      const bool marker = static_cast<std::size_t>(c) == j;
      x.values.push_back(marker ? rng.uniform(2.0f, 6.0f) : (rng.uniform() < 0.7 ? 0.0f : rng.uniform(0.0f, 1.0f)));
    }
    pca.values.push_back(static_cast<float>(c) * 5.0f + rng.uniform(-1.0f, 1.0f));
    pca.values.push_back(static_cast<float>(c % 2) * 5.0f + rng.uniform(-1.0f, 1.0f));
    umap.values.push_back(rng.uniform(-10.0f, 10.0f));
    umap.values.push_back(rng.uniform(-10.0f, 10.0f));
    n_counts.values.push_back(rng.uniform(500.0f, 5000.0f));
    n_genes.values.push_back(rng.uniform(200.0f, 2000.0f));
  }
  am->X = std::move(x);
  am->obs_columns["louvain"] = std::move(louvain);
  am->obs_columns["n_counts"] = std::move(n_counts);
  am->obs_columns["n_genes"] = std::move(n_genes);
  am->embeddings["X_pca"] = std::move(pca);
  am->embeddings["X_umap"] = std::move(umap);
  return am;
}

// A spot-based spatial dataset: one histology image, a grid of circular
// spots whose ids match the expression table, and a label mask.
inline std::shared_ptr<const SpatialElements> visium_like(std::size_t height = 600, std::size_t width = 400) {
  Rng rng(11);
  auto sd = std::make_shared<SpatialElements>();
  Tensor<std::uint8_t> image({3, height, width});
  for (auto& v : image.data) v = static_cast<std::uint8_t>(rng.below(256));
  sd->images["hires"] = std::move(image);

  Circles spots;
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      spots.ids.push_back("spot_" + std::to_string(r * 4 + c));
      spots.xyr.insert(spots.xyr.end(), {50.0f + 100.0f * static_cast<float>(c), 50.0f + 100.0f * static_cast<float>(r), 30.0f});
    }
  }
  sd->shapes["spots"] = spots;

  LabelMask labels({height, width}, 0);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) labels.data[y * width + x] = static_cast<std::int32_t>((y / 100) * 4 + x / 100 + 1) * ((x + y) % 3 == 0);
  }
  sd->labels["cells"] = std::move(labels);

  Points transcripts;
  for (std::size_t i = 0; i < 50; ++i) {
    transcripts.ids.push_back("tx_" + std::to_string(i));
    transcripts.xy.push_back(rng.uniform(0.0f, static_cast<float>(width)));
    transcripts.xy.push_back(rng.uniform(0.0f, static_cast<float>(height)));
  }
  sd->points["transcripts"] = std::move(transcripts);

  auto table = std::make_shared<AnnotatedMatrix>();
  table->n_obs = spots.size();
  table->obs_ids = spots.ids;
  table->var_ids = {"Fth1", "Mbp", "Plp1"};
  table->n_var = 3;
  DenseMatrix x;
  for (std::size_t i = 0; i < table->n_obs * table->n_var; ++i) x.values.push_back(rng.uniform(0.0f, 8.0f));
  table->X = std::move(x);
  CategoricalColumn region{{}, {"cortex", "striatum"}};
  for (std::size_t i = 0; i < table->n_obs; ++i) region.codes.push_back(i < 12 ? 0 : 1);
  table->obs_columns["region"] = std::move(region);
  sd->table = std::move(table);
  return sd;
}

}  // namespace plotmorph::testing
