#pragma once

// Group-wise summaries behind the dot plot, grouped heatmap and violin views.
// All functions are pure over read-only inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "plotmorph/data.hpp"
#include "plotmorph/error.hpp"

namespace plotmorph::stats {

namespace detail {

inline const CategoricalColumn& group_column(const AnnotatedMatrix& am, const std::string& name) {
  const auto* col = am.categorical(name);
  if (!col) throw Error(ErrorCode::UnknownGroupColumn, "'" + name + "' is not a categorical obs column");
  return *col;
}

inline std::vector<std::size_t> feature_indices(const AnnotatedMatrix& am,
                                                const std::vector<std::string>& features) {
  std::vector<std::size_t> idx;
  idx.reserve(features.size());
  for (const auto& f : features) {
    auto j = am.feature_index(f);
    if (!j) throw Error(ErrorCode::UnknownFeature, "unknown feature '" + f + "'");
    idx.push_back(*j);
  }
  return idx;
}

// Per category, per selected feature: member count, sum and count above
// threshold. Accumulates in cell order so dense and CSR inputs agree.
struct GroupAccumulator {
  std::vector<std::size_t> members;   // per category
  std::vector<double> sums;           // category x feature
  std::vector<std::size_t> above;     // category x feature
};

inline GroupAccumulator accumulate(const AnnotatedMatrix& am, const CategoricalColumn& groups,
                                   const std::vector<std::size_t>& features, float threshold) {
  const std::size_t n_cat = groups.categories.size();
  const std::size_t n_feat = features.size();
  GroupAccumulator acc{std::vector<std::size_t>(n_cat, 0), std::vector<double>(n_cat * n_feat, 0.0),
                       std::vector<std::size_t>(n_cat * n_feat, 0)};
  std::vector<float> row(am.n_var);
  for (std::size_t i = 0; i < am.n_obs; ++i) {
    const auto g = static_cast<std::size_t>(groups.codes[i]);
    am.row(i, row);
    ++acc.members[g];
    for (std::size_t f = 0; f < n_feat; ++f) {
      const float v = row[features[f]];
      acc.sums[g * n_feat + f] += static_cast<double>(v);
      if (v > threshold) ++acc.above[g * n_feat + f];
    }
  }
  return acc;
}

}  // namespace detail

struct DotplotTable {
  std::vector<std::string> groups;    // non-empty categories, label order
  std::vector<std::string> features;
  std::vector<std::size_t> group_sizes;
  std::vector<double> fraction;       // groups x features
  std::vector<double> mean;           // groups x features

  double fraction_at(std::size_t g, std::size_t f) const { return fraction[g * features.size() + f]; }
  double mean_at(std::size_t g, std::size_t f) const { return mean[g * features.size() + f]; }
};

// fraction = share of group members with value strictly above threshold;
// mean is taken over all members, zeros included. Empty groups are omitted.
inline DotplotTable dotplot_stats(const AnnotatedMatrix& am, const std::string& group_col,
                                  const std::vector<std::string>& features, float threshold = 0.0f) {
  const auto& groups = detail::group_column(am, group_col);
  const auto idx = detail::feature_indices(am, features);
  const auto acc = detail::accumulate(am, groups, idx, threshold);

  DotplotTable table;
  table.features = features;
  const std::size_t n_feat = features.size();
  for (std::size_t g = 0; g < groups.categories.size(); ++g) {
    const auto n = acc.members[g];
    if (n == 0) continue;
    table.groups.push_back(groups.categories[g]);
    table.group_sizes.push_back(n);
    for (std::size_t f = 0; f < n_feat; ++f) {
      table.fraction.push_back(static_cast<double>(acc.above[g * n_feat + f]) / static_cast<double>(n));
      table.mean.push_back(acc.sums[g * n_feat + f] / static_cast<double>(n));
    }
  }
  return table;
}

struct GroupMatrix {
  std::vector<std::string> groups;
  std::vector<std::string> features;
  std::vector<double> values;  // groups x features

  double at(std::size_t g, std::size_t f) const { return values[g * features.size() + f]; }
};

inline GroupMatrix aggregate_means(const AnnotatedMatrix& am, const std::string& group_col,
                                   const std::vector<std::string>& features) {
  const auto& groups = detail::group_column(am, group_col);
  const auto idx = detail::feature_indices(am, features);
  const auto acc = detail::accumulate(am, groups, idx, 0.0f);

  GroupMatrix out;
  out.features = features;
  const std::size_t n_feat = features.size();
  for (std::size_t g = 0; g < groups.categories.size(); ++g) {
    const auto n = acc.members[g];
    if (n == 0) continue;
    out.groups.push_back(groups.categories[g]);
    for (std::size_t f = 0; f < n_feat; ++f) {
      out.values.push_back(acc.sums[g * n_feat + f] / static_cast<double>(n));
    }
  }
  return out;
}

// Linear interpolation between order statistics at position (n - 1) * p.
// `sorted` must be ascending and non-empty.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

struct GroupSummary {
  std::string group;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  std::size_t n = 0;
};

inline std::vector<GroupSummary> group_summary(const AnnotatedMatrix& am, const std::string& group_col,
                                               const std::string& feature) {
  const auto& groups = detail::group_column(am, group_col);
  const auto j = detail::feature_indices(am, {feature}).front();

  std::vector<std::vector<double>> values(groups.categories.size());
  for (std::size_t i = 0; i < am.n_obs; ++i) {
    values[static_cast<std::size_t>(groups.codes[i])].push_back(static_cast<double>(am.value(i, j)));
  }

  std::vector<GroupSummary> out;
  for (std::size_t g = 0; g < values.size(); ++g) {
    auto& v = values[g];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    out.push_back({groups.categories[g], v.front(), quantile_sorted(v, 0.25), quantile_sorted(v, 0.5),
                   quantile_sorted(v, 0.75), v.back(), v.size()});
  }
  return out;
}

}  // namespace plotmorph::stats
