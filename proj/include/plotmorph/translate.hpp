#pragma once

// Compiles intercepted plot calls into a view configuration plus the list
// of arrays to export. Calls the translators cannot represent faithfully
// fall back to the original static function.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "plotmorph/data.hpp"
#include "plotmorph/error.hpp"
#include "plotmorph/host.hpp"
#include "plotmorph/viewmodel.hpp"

namespace plotmorph {

enum class ElementKind { Image, Shapes, Points, Labels };

inline constexpr std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Image: return "image";
    case ElementKind::Shapes: return "shapes";
    case ElementKind::Points: return "points";
    case ElementKind::Labels: return "labels";
  }
  return "";
}

struct LayerStyle {
  std::optional<std::string> color;  // feature id or categorical obs column
  std::optional<std::string> palette;
  double opacity = 1.0;
  bool operator==(const LayerStyle&) const = default;
};

struct SpatialLayer {
  ElementKind kind;
  std::string element;
  LayerStyle style;
  bool operator==(const SpatialLayer&) const = default;
};

// Accumulates chained render calls; bottom layer first.
struct SpatialLayerStack {
  std::shared_ptr<const SpatialElements> data;
  std::vector<SpatialLayer> layers;
};

namespace translate {

using viewmodel::ComponentKind;
using viewmodel::CoordinationType;
using viewmodel::FileKind;
using viewmodel::Json;
using viewmodel::ViewConfig;

// Parts of an annotated matrix to write into one store.
struct MatrixSource {
  bool include_x = false;
  std::optional<std::vector<std::string>> features;  // unset = all
  std::vector<std::string> embeddings;
  std::vector<std::string> obs_columns;
  // Synthetic 2-D embedding "scatter" built from two numeric obs columns.
  std::optional<std::pair<std::string, std::string>> scatter_axes;
  bool operator==(const MatrixSource&) const = default;
};

// Per-group five-number summaries of each key, grouped by a categorical column.
struct GroupSummarySource {
  std::vector<std::string> keys;
  std::string groupby;
  bool operator==(const GroupSummarySource&) const = default;
};

// Group-mean matrix (groups x features).
struct AggregateSource {
  std::vector<std::string> features;
  std::string groupby;
  bool operator==(const AggregateSource&) const = default;
};

struct ElementSource {
  ElementKind kind;
  std::string element;
  bool operator==(const ElementSource&) const = default;
};

using ExportSource = std::variant<MatrixSource, GroupSummarySource, AggregateSource, ElementSource>;

struct ExportEntry {
  std::string url;  // relative until materialized
  FileKind kind;
  std::string role;
  ExportSource source;
  bool operator==(const ExportEntry&) const = default;
};

struct TranslationResult {
  ViewConfig config;
  std::vector<ExportEntry> export_plan;
  std::vector<std::string> warnings;
};

struct PassThrough {
  std::optional<std::string> warning;
};

struct PlotCall {
  std::string function;
  host::DataHandle data;
  host::KwArgs args;  // bound by the host signature
};

using DispatchOutcome = std::variant<TranslationResult, std::shared_ptr<const SpatialLayerStack>, PassThrough>;

// Every config file url has exactly one export entry and vice versa.
inline bool export_plan_closed(const TranslationResult& r) {
  std::multiset<std::string> config_urls, plan_urls;
  for (const auto& d : r.config.datasets) {
    for (const auto& f : d.files) config_urls.insert(f.url);
  }
  for (const auto& e : r.export_plan) plan_urls.insert(e.url);
  if (config_urls != plan_urls) return false;
  for (const auto& u : config_urls) {
    if (config_urls.count(u) != 1) return false;
  }
  return true;
}

// "X_pca" -> "PCA"; unknown bases keep their name minus the "X_" prefix.
inline std::string embedding_type_for(const std::string& basis) {
  std::string name = basis.rfind("X_", 0) == 0 ? basis.substr(2) : basis;
  if (name == "pca" || name == "umap" || name == "tsne") {
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
  }
  return name;
}

namespace detail {

[[noreturn]] inline void unsupported(const std::string& what) { throw Error(ErrorCode::Unsupported, what); }

// Builds one translation: a single dataset, views, and the export plan.
class Builder {
 public:
  Builder(std::string config_name, std::string dataset_name)
      : dataset_name_(std::move(dataset_name)) {
    result_.config.name = std::move(config_name);
    uid_ = viewmodel::sequence_name(result_.config.datasets.size());
  }

  std::size_t view(ComponentKind kind) { return viewmodel::add_view(result_.config, kind); }

  void link(const std::vector<std::size_t>& views, CoordinationType type, Json value) {
    viewmodel::link_views(result_.config, views, type, std::move(value));
  }

  // Adds a file and its export entry; returns the file url.
  std::string file(const std::string& name, FileKind kind, Json options, ExportSource source) {
    auto url = uid_ + "/" + name;
    auto role = name.substr(0, name.find('.'));
    options["role"] = role;
    files_.push_back({url, kind, std::move(options)});
    result_.export_plan.push_back({url, kind, std::move(role), std::move(source)});
    return url;
  }

  void warn(std::string w) { result_.warnings.push_back(std::move(w)); }

  TranslationResult finish() {
    viewmodel::add_dataset(result_.config, dataset_name_, std::move(files_));
    std::vector<std::size_t> all(result_.config.layout.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    link(all, CoordinationType::Dataset, uid_);
    apply_layout();
    return std::move(result_);
  }

 private:
  static bool is_auxiliary(ComponentKind k) {
    return k == ComponentKind::LayerController || k == ComponentKind::ObsSetList || k == ComponentKind::FeatureList;
  }

  // Main view in columns 0-8, auxiliary views stacked top-down in columns 8-12.
  // A main view without auxiliaries takes the full width.
  void apply_layout() {
    auto& layout = result_.config.layout;
    static const ComponentKind kAuxOrder[] = {ComponentKind::LayerController, ComponentKind::ObsSetList,
                                              ComponentKind::FeatureList};
    std::vector<std::size_t> aux;
    for (auto kind : kAuxOrder) {
      for (std::size_t i = 0; i < layout.size(); ++i) {
        if (layout[i].kind == kind) aux.push_back(i);
      }
    }
    constexpr int kRows = 12;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (!is_auxiliary(layout[i].kind)) layout[i].grid = {0, 0, aux.empty() ? 12 : 8, kRows};
    }
    if (aux.empty()) return;
    const int h = kRows / static_cast<int>(aux.size());
    for (std::size_t k = 0; k < aux.size(); ++k) {
      const int y = static_cast<int>(k) * h;
      layout[aux[k]].grid = {8, y, 4, k + 1 == aux.size() ? kRows - y : h};
    }
  }

  std::string dataset_name_;
  std::string uid_;
  std::vector<viewmodel::FileDecl> files_;
  TranslationResult result_;
};

inline const AnnotatedMatrix& matrix_of(const host::DataHandle& data) {
  if (const auto* am = std::get_if<std::shared_ptr<const AnnotatedMatrix>>(&data); am && *am) return **am;
  unsupported("expected an annotated matrix as the data argument");
}

inline Json obs_set_selection(const CategoricalColumn& col, const std::string& name) {
  Json sel = Json::array();
  for (const auto& c : col.categories) sel.push_back(Json::array({name, c}));
  return sel;
}

inline const CategoricalColumn& require_group(const AnnotatedMatrix& am, const std::string& groupby) {
  const auto* col = am.categorical(groupby);
  if (!col) throw Error(ErrorCode::UnknownGroupColumn, "'" + groupby + "' is not a categorical obs column");
  return *col;
}

inline void require_features(const AnnotatedMatrix& am, const std::vector<std::string>& features) {
  if (features.empty()) throw Error(ErrorCode::UnknownFeature, "empty feature selection");
  for (const auto& f : features) {
    if (!am.feature_index(f)) throw Error(ErrorCode::UnknownFeature, "unknown feature '" + f + "'");
  }
}

enum class ColorSource { Categorical, Feature };

inline ColorSource classify_color(const AnnotatedMatrix& am, const std::string& color) {
  const bool is_obs = am.obs_columns.contains(color);
  const bool is_feature = am.feature_index(color).has_value();
  if (is_obs && is_feature) {
    throw Error(ErrorCode::AmbiguousColor, "'" + color + "' is both an obs column and a feature id");
  }
  if (is_feature) return ColorSource::Feature;
  if (am.categorical(color)) return ColorSource::Categorical;
  if (is_obs) unsupported("coloring by numeric obs column '" + color + "'");
  throw Error(ErrorCode::UnknownFeature, "'" + color + "' is neither an obs column nor a feature id");
}

// Adds the color side panel, scopes and export entry for `main`.
inline void add_color(Builder& b, const AnnotatedMatrix& am, std::size_t main, const std::string& color) {
  if (classify_color(am, color) == ColorSource::Categorical) {
    const auto& col = *am.categorical(color);
    auto sets = b.view(ComponentKind::ObsSetList);
    b.link({main, sets}, CoordinationType::ObsColorEncoding, "cellSetSelection");
    b.link({main, sets}, CoordinationType::ObsSetSelection, obs_set_selection(col, color));
    b.file("obsSets", FileKind::MatrixStore, Json{{"path", "obs/" + color}, {"name", color}},
           MatrixSource{false, std::nullopt, {}, {color}, std::nullopt});
  } else {
    auto features = b.view(ComponentKind::FeatureList);
    b.link({main, features}, CoordinationType::FeatureSelection, Json::array({color}));
    b.link({main, features}, CoordinationType::ObsColorEncoding, "geneSelection");
    b.file("obsFeatureMatrix", FileKind::MatrixStore, Json{{"path", "X"}},
           MatrixSource{true, std::nullopt, {}, {}, std::nullopt});
  }
}

inline std::string title_or(const host::KwArgs& args, const std::string& fallback) {
  return host::get<std::string>(args, "title").value_or(fallback);
}

}  // namespace detail

inline TranslationResult translate_embedding(const AnnotatedMatrix& am, const std::string& basis,
                                             const std::optional<std::string>& color, const host::KwArgs& args = {}) {
  auto it = am.embeddings.find(basis);
  if (it == am.embeddings.end()) throw Error(ErrorCode::UnknownBasis, "no embedding '" + basis + "'");
  if (it->second.dims < 2) throw Error(ErrorCode::UnknownBasis, "embedding '" + basis + "' has fewer than 2 dims");

  const auto type = embedding_type_for(basis);
  detail::Builder b(detail::title_or(args, "embedding " + type), "anndata");
  auto scatter = b.view(ComponentKind::Scatterplot);
  b.link({scatter}, CoordinationType::EmbeddingType, type);
  b.file("obsEmbedding", FileKind::MatrixStore, Json{{"path", "obsm/" + basis}, {"embeddingType", type}},
         MatrixSource{false, std::nullopt, {basis}, {}, std::nullopt});
  if (color) detail::add_color(b, am, scatter, *color);
  return b.finish();
}

inline TranslationResult translate_scatter(const AnnotatedMatrix& am, const std::string& x, const std::string& y,
                                           const std::optional<std::string>& color, const host::KwArgs& args = {}) {
  for (const auto& axis : {x, y}) {
    if (!am.numeric(axis)) throw Error(ErrorCode::UnknownColumn, "'" + axis + "' is not a numeric obs column");
  }
  const auto type = "scatter:" + x + ":" + y;
  detail::Builder b(detail::title_or(args, type), "anndata");
  auto scatter = b.view(ComponentKind::Scatterplot);
  b.link({scatter}, CoordinationType::EmbeddingType, type);
  b.file("obsEmbedding", FileKind::MatrixStore, Json{{"path", "obsm/scatter"}, {"embeddingType", type}},
         MatrixSource{false, std::nullopt, {}, {}, std::make_pair(x, y)});
  if (color) detail::add_color(b, am, scatter, *color);
  return b.finish();
}

inline TranslationResult translate_dotplot(const AnnotatedMatrix& am, const std::vector<std::string>& var_names,
                                           const std::string& groupby, const host::KwArgs& args = {}) {
  detail::require_features(am, var_names);
  const auto& groups = detail::require_group(am, groupby);
  detail::Builder b(detail::title_or(args, "dotplot " + groupby), "anndata");
  auto dot = b.view(ComponentKind::DotPlot);
  b.link({dot}, CoordinationType::FeatureSelection, var_names);
  b.link({dot}, CoordinationType::ObsSetSelection, detail::obs_set_selection(groups, groupby));
  b.file("obsFeatureMatrix", FileKind::MatrixStore, Json{{"path", "X"}},
         MatrixSource{true, std::nullopt, {}, {}, std::nullopt});
  b.file("obsSets", FileKind::MatrixStore, Json{{"path", "obs/" + groupby}, {"name", groupby}},
         MatrixSource{false, std::nullopt, {}, {groupby}, std::nullopt});
  return b.finish();
}

inline TranslationResult translate_heatmap(const AnnotatedMatrix& am, const std::vector<std::string>& var_names,
                                           const std::optional<std::string>& groupby, const host::KwArgs& args = {}) {
  detail::require_features(am, var_names);
  detail::Builder b(detail::title_or(args, "heatmap"), "anndata");
  auto heat = b.view(ComponentKind::Heatmap);
  b.link({heat}, CoordinationType::FeatureSelection, var_names);
  if (groupby) {
    const auto& groups = detail::require_group(am, *groupby);
    b.link({heat}, CoordinationType::ObsSetSelection, detail::obs_set_selection(groups, *groupby));
    b.file("aggregatedMatrix", FileKind::MatrixStore, Json{{"path", "X"}, {"groupby", *groupby}},
           AggregateSource{var_names, *groupby});
  } else {
    b.file("obsFeatureMatrix", FileKind::MatrixStore, Json{{"path", "X"}},
           MatrixSource{true, var_names, {}, {}, std::nullopt});
  }
  return b.finish();
}

inline TranslationResult translate_violin(const AnnotatedMatrix& am, const std::vector<std::string>& keys,
                                          const std::string& groupby, const host::KwArgs& args = {}) {
  for (const auto& k : keys) {
    if (!am.feature_index(k) && am.numeric(k)) detail::unsupported("violin of obs column '" + k + "'");
  }
  detail::require_features(am, keys);
  const auto& groups = detail::require_group(am, groupby);
  detail::Builder b(detail::title_or(args, "violin " + groupby), "anndata");
  auto violin = b.view(ComponentKind::Violin);
  b.link({violin}, CoordinationType::FeatureSelection, keys);
  b.link({violin}, CoordinationType::ObsSetSelection, detail::obs_set_selection(groups, groupby));
  b.file("groupSummary", FileKind::MatrixStore, Json{{"path", "summary"}, {"groupby", groupby}},
         GroupSummarySource{keys, groupby});
  return b.finish();
}

namespace detail {

inline bool has_element(const SpatialElements& data, ElementKind kind, const std::string& name) {
  switch (kind) {
    case ElementKind::Image: return data.images.contains(name);
    case ElementKind::Shapes: return data.shapes.contains(name);
    case ElementKind::Points: return data.points.contains(name);
    case ElementKind::Labels: return data.labels.contains(name);
  }
  return false;
}

inline std::optional<std::string> first_element(const SpatialElements& data, ElementKind kind) {
  auto first = [](const auto& m) -> std::optional<std::string> {
    if (m.empty()) return std::nullopt;
    return m.begin()->first;
  };
  switch (kind) {
    case ElementKind::Image: return first(data.images);
    case ElementKind::Shapes: return first(data.shapes);
    case ElementKind::Points: return first(data.points);
    case ElementKind::Labels: return first(data.labels);
  }
  return std::nullopt;
}

inline FileKind file_kind(ElementKind kind) {
  switch (kind) {
    case ElementKind::Image: return FileKind::ImagePyramid;
    case ElementKind::Shapes: return FileKind::Circles;
    case ElementKind::Points: return FileKind::Points;
    case ElementKind::Labels: return FileKind::Labels;
  }
  return FileKind::MatrixStore;
}

}  // namespace detail

// Appends a layer. An image may only be the bottom layer. `element` unset
// picks the first element of that kind.
inline SpatialLayerStack push_spatial_layer(SpatialLayerStack stack, ElementKind kind,
                                            const std::optional<std::string>& element, LayerStyle style) {
  if (!stack.data) throw Error(ErrorCode::InvalidArgument, "layer stack has no spatial data");
  const auto& data = *stack.data;
  auto name = element ? element : detail::first_element(data, kind);
  if (!name || !detail::has_element(data, kind, *name)) {
    throw Error(ErrorCode::UnknownElement,
                "no " + std::string(to_string(kind)) + " element '" + name.value_or("") + "'");
  }
  if (kind == ElementKind::Image && !stack.layers.empty()) {
    throw Error(ErrorCode::LayerOrder, "an image layer must be the bottom layer");
  }
  if (style.color) {
    if (kind == ElementKind::Image || kind == ElementKind::Labels) {
      detail::unsupported("color-by on " + std::string(to_string(kind)) + " layers");
    }
    if (!data.table) throw Error(ErrorCode::UnknownFeature, "no table to color '" + *style.color + "' from");
    detail::classify_color(*data.table, *style.color);
  }
  stack.layers.push_back({kind, *name, std::move(style)});
  return stack;
}

inline TranslationResult translate_spatial_show(const SpatialLayerStack& stack, const std::string& title = "spatial") {
  if (stack.layers.empty()) throw Error(ErrorCode::EmptyStack, "nothing to show");
  const auto& data = *stack.data;

  // Layer extent in level-0 pixels: image dims, else vector bounds, else label dims.
  double width = 0, height = 0;
  for (const auto& layer : stack.layers) {
    if (layer.kind == ElementKind::Image) {
      std::visit([&](const auto& t) {
        height = std::max(height, static_cast<double>(t.shape[1]));
        width = std::max(width, static_cast<double>(t.shape[2]));
      }, data.images.at(layer.element));
    } else if (layer.kind == ElementKind::Shapes) {
      const auto& c = data.shapes.at(layer.element);
      for (std::size_t i = 0; i < c.size(); ++i) {
        width = std::max(width, static_cast<double>(c.xyr[3 * i] + c.xyr[3 * i + 2]));
        height = std::max(height, static_cast<double>(c.xyr[3 * i + 1] + c.xyr[3 * i + 2]));
      }
    } else if (layer.kind == ElementKind::Points) {
      const auto& p = data.points.at(layer.element);
      for (std::size_t i = 0; i < p.size(); ++i) {
        width = std::max(width, static_cast<double>(p.xy[2 * i]));
        height = std::max(height, static_cast<double>(p.xy[2 * i + 1]));
      }
    } else {
      const auto& m = data.labels.at(layer.element);
      height = std::max(height, static_cast<double>(m.shape[0]));
      width = std::max(width, static_cast<double>(m.shape[1]));
    }
  }
  constexpr double kFramePixels = 512.0;
  const double extent = std::max(width, height);
  const double zoom = extent > kFramePixels ? kFramePixels / extent : 1.0;

  std::optional<std::string> color;
  for (const auto& layer : stack.layers) {
    if (!layer.style.color) continue;
    if (color && *color != *layer.style.color) detail::unsupported("layers colored by different keys");
    color = layer.style.color;
  }

  detail::Builder b(title, "spatialdata");
  auto spatial = b.view(ComponentKind::Spatial);
  auto controller = b.view(ComponentKind::LayerController);
  b.link({spatial, controller}, CoordinationType::SpatialZoom, zoom);
  b.link({spatial, controller}, CoordinationType::SpatialTargetX, width / 2);
  b.link({spatial, controller}, CoordinationType::SpatialTargetY, height / 2);

  Json layers = Json::array();
  std::map<std::pair<ElementKind, std::string>, std::string> exported;
  for (const auto& layer : stack.layers) {
    const auto key = std::make_pair(layer.kind, layer.element);
    if (!exported.contains(key)) {
      exported[key] = b.file(std::string(to_string(layer.kind)) + "." + layer.element, detail::file_kind(layer.kind),
                             Json{{"element", layer.element}}, ElementSource{layer.kind, layer.element});
    }
    Json entry = Json::object();
    entry["kind"] = to_string(layer.kind);
    entry["element"] = layer.element;
    entry["file"] = exported[key];
    entry["opacity"] = layer.style.opacity;
    entry["visible"] = true;
    if (layer.style.color) entry["color"] = *layer.style.color;
    if (layer.style.palette) entry["palette"] = *layer.style.palette;
    layers.push_back(std::move(entry));
  }
  b.link({spatial, controller}, CoordinationType::SpatialLayers, std::move(layers));

  if (color) detail::add_color(b, *data.table, spatial, *color);
  return b.finish();
}

// One registry entry per replaced host function.
struct TranslatorSpec {
  std::string function;
  std::string namespace_path;
  std::vector<std::string> params;  // supported arguments
  std::function<DispatchOutcome(const host::DataHandle&, const host::KwArgs&)> run;
};

namespace detail {

inline std::string required_string(const host::KwArgs& args, const std::string& name) {
  auto v = host::get<std::string>(args, name);
  if (!v) throw Error(ErrorCode::InvalidArgument, "missing required argument '" + name + "'");
  return *v;
}

inline std::vector<std::string> required_names(const host::KwArgs& args, const std::string& name) {
  auto v = host::get_names(args, name);
  if (!v) throw Error(ErrorCode::InvalidArgument, "missing required argument '" + name + "'");
  return *v;
}

inline TranslatorSpec embedding_wrapper(const std::string& function, const std::string& basis) {
  return {function, "sc.pl", {"color", "title", "show"},
          [basis](const host::DataHandle& d, const host::KwArgs& a) -> DispatchOutcome {
            return translate_embedding(matrix_of(d), basis, host::get<std::string>(a, "color"), a);
          }};
}

inline std::shared_ptr<const SpatialLayerStack> stack_of(const host::DataHandle& data) {
  if (const auto* s = std::get_if<std::shared_ptr<const SpatialLayerStack>>(&data); s && *s) return *s;
  if (const auto* e = std::get_if<std::shared_ptr<const SpatialElements>>(&data); e && *e) {
    return std::make_shared<const SpatialLayerStack>(SpatialLayerStack{*e, {}});
  }
  unsupported("expected spatial data as the data argument");
}

inline TranslatorSpec render_spec(const std::string& function, ElementKind kind, std::vector<std::string> params,
                                  std::string opacity_param) {
  return {function, "sdata.pl", std::move(params),
          [kind, opacity_param](const host::DataHandle& d, const host::KwArgs& a) -> DispatchOutcome {
            LayerStyle style;
            style.color = host::get<std::string>(a, "color");
            style.palette = host::get<std::string>(a, "palette");
            if (auto o = host::get<double>(a, opacity_param)) style.opacity = *o;
            auto next = push_spatial_layer(*stack_of(d), kind, host::get<std::string>(a, "element"), std::move(style));
            return std::make_shared<const SpatialLayerStack>(std::move(next));
          }};
}

}  // namespace detail

// The 13 supported functions: nine matrix plots and four spatial renders.
inline const std::vector<TranslatorSpec>& registry() {
  using namespace detail;
  static const std::vector<TranslatorSpec> specs = {
      {"embedding", "sc.pl", {"basis", "color", "title", "show"},
       [](const host::DataHandle& d, const host::KwArgs& a) -> DispatchOutcome {
         return translate_embedding(matrix_of(d), required_string(a, "basis"), host::get<std::string>(a, "color"), a);
       }},
      embedding_wrapper("pca", "X_pca"),
      embedding_wrapper("umap", "X_umap"),
      embedding_wrapper("tsne", "X_tsne"),
      {"scatter", "sc.pl", {"x", "y", "color", "title", "show"},
       [](const host::DataHandle& d, const host::KwArgs& a) -> DispatchOutcome {
         return translate_scatter(matrix_of(d), required_string(a, "x"), required_string(a, "y"),
                                  host::get<std::string>(a, "color"), a);
       }},
      embedding_wrapper("spatial", "spatial"),
      {"dotplot", "sc.pl", {"var_names", "groupby", "title", "show"},
       [](const host::DataHandle& d, const host::KwArgs& a) -> DispatchOutcome {
         return translate_dotplot(matrix_of(d), required_names(a, "var_names"), required_string(a, "groupby"), a);
       }},
      {"heatmap", "sc.pl", {"var_names", "groupby", "show"},
       [](const host::DataHandle& d, const host::KwArgs& a) -> DispatchOutcome {
         return translate_heatmap(matrix_of(d), required_names(a, "var_names"), host::get<std::string>(a, "groupby"), a);
       }},
      {"violin", "sc.pl", {"keys", "groupby", "show"},
       [](const host::DataHandle& d, const host::KwArgs& a) -> DispatchOutcome {
         return translate_violin(matrix_of(d), required_names(a, "keys"), required_string(a, "groupby"), a);
       }},
      render_spec("render_images", ElementKind::Image, {"element", "alpha"}, "alpha"),
      render_spec("render_shapes", ElementKind::Shapes, {"element", "color", "fill_alpha", "palette"}, "fill_alpha"),
      render_spec("render_points", ElementKind::Points, {"element", "color", "alpha", "palette"}, "alpha"),
      render_spec("render_labels", ElementKind::Labels, {"element", "fill_alpha"}, "fill_alpha"),
  };
  return specs;
}

inline const TranslatorSpec* find_translator(const std::string& function) {
  for (const auto& s : registry()) {
    if (s.function == function) return &s;
  }
  return nullptr;
}

// Registry miss: silent pass-through. Unsupported argument or feature:
// pass-through with one warning. Data errors propagate.
inline DispatchOutcome dispatch(const PlotCall& call) {
  const auto* spec = find_translator(call.function);
  if (!spec) return PassThrough{};
  for (const auto& [name, value] : call.args) {
    if (std::find(spec->params.begin(), spec->params.end(), name) == spec->params.end()) {
      return PassThrough{call.function + ": argument '" + name + "' is not supported interactively; using the static plot"};
    }
  }
  try {
    return spec->run(call.data, call.args);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unsupported) throw;
    return PassThrough{call.function + ": " + e.what() + "; using the static plot"};
  }
}

// Markdown table of the supported functions and their arguments.
inline std::string supported_markdown() {
  std::string out =
      "# Supported plotting functions\n\n"
      "Calls to these functions become interactive plots. A call that passes any\n"
      "argument outside the listed set runs the original static function and\n"
      "emits one warning naming the argument. All other host functions are left\n"
      "untouched.\n\n"
      "| function | supported arguments |\n"
      "|---|---|\n";
  for (const auto& s : registry()) {
    out += "| `" + s.namespace_path + "." + s.function + "` | ";
    for (std::size_t i = 0; i < s.params.size(); ++i) out += (i ? ", `" : "`") + s.params[i] + "`";
    out += " |\n";
  }
  return out;
}

}  // namespace translate
}  // namespace plotmorph
