#pragma once

// Turns a translation into something a user can look at: exports its data,
// serves it, and renders an inline frame (notebooks) or a url (terminals).

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <variant>

#include "plotmorph/data.hpp"
#include "plotmorph/error.hpp"
#include "plotmorph/serve.hpp"
#include "plotmorph/stats.hpp"
#include "plotmorph/store.hpp"
#include "plotmorph/translate.hpp"
#include "plotmorph/viewmodel.hpp"

namespace plotmorph {

// Return value of every interactive plot call.
struct InteractivePlotHandle {
  translate::TranslationResult result;  // relative urls, as translated
  viewmodel::ViewConfig config;         // absolute served urls
  std::string mount_uid;
  std::string base_url;
  std::string config_url;
  std::string viewer_url;
  std::filesystem::path dir;
};

namespace bridge {

namespace fs = std::filesystem;

struct DataSources {
  std::shared_ptr<const AnnotatedMatrix> matrix;
  std::shared_ptr<const SpatialElements> spatial;
};

inline DataSources sources_of(const host::DataHandle& data) {
  DataSources out;
  std::visit([&](const auto& p) {
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<T, std::shared_ptr<const AnnotatedMatrix>>) out.matrix = p;
    else if constexpr (std::is_same_v<T, std::shared_ptr<const SpatialElements>>) out.spatial = p;
    else if (p) out.spatial = p->data;
  }, data);
  if (!out.matrix && out.spatial) out.matrix = out.spatial->table;
  return out;
}

// Applies fn to every url-valued field: dataset file urls and the "file"
// entries of spatial layer lists.
inline void rewrite_urls(viewmodel::ViewConfig& cfg, const std::function<std::string(const std::string&)>& fn) {
  for (auto& d : cfg.datasets) {
    for (auto& f : d.files) f.url = fn(f.url);
  }
  auto it = cfg.coordination_space.find(viewmodel::CoordinationType::SpatialLayers);
  if (it == cfg.coordination_space.end()) return;
  for (auto& scope : it->second) {
    if (!scope.value.is_array()) continue;
    for (auto& layer : scope.value) {
      if (layer.is_object() && layer.contains("file") && layer["file"].is_string()) {
        layer["file"] = fn(layer["file"].get<std::string>());
      }
    }
  }
}

namespace detail {

inline const AnnotatedMatrix& need_matrix(const DataSources& s) {
  if (!s.matrix) throw Error(ErrorCode::InvalidArgument, "export plan needs an annotated matrix");
  return *s.matrix;
}

inline void export_entry(const translate::ExportEntry& entry, const DataSources& sources, const fs::path& dir) {
  using namespace translate;
  std::visit([&](const auto& src) {
    using T = std::decay_t<decltype(src)>;
    if constexpr (std::is_same_v<T, MatrixSource>) {
      const auto& am = need_matrix(sources);
      if (src.scatter_axes) {
        const auto* x = am.numeric(src.scatter_axes->first);
        const auto* y = am.numeric(src.scatter_axes->second);
        if (!x || !y) throw Error(ErrorCode::UnknownColumn, "scatter axes must be numeric obs columns");
        AnnotatedMatrix coords;
        coords.n_obs = am.n_obs;
        coords.obs_ids = am.obs_ids;
        Embedding e{2, std::vector<float>(2 * am.n_obs)};
        for (std::size_t i = 0; i < am.n_obs; ++i) {
          e.values[2 * i] = x->values[i];
          e.values[2 * i + 1] = y->values[i];
        }
        coords.embeddings["scatter"] = std::move(e);
        store::export_matrix(coords, dir, {false, std::nullopt, std::nullopt, std::nullopt});
        return;
      }
      store::MatrixExportOptions opts;
      opts.include_x = src.include_x;
      opts.features = src.features;
      opts.embeddings = src.embeddings;
      opts.obs_columns = src.obs_columns;
      store::export_matrix(am, dir, opts);
    } else if constexpr (std::is_same_v<T, GroupSummarySource>) {
      const auto& am = need_matrix(sources);
      store::StoreWriter writer(dir);
      for (const auto& key : src.keys) {
        const auto summary = stats::group_summary(am, src.groupby, key);
        std::vector<float> values;
        store::Json groups = store::Json::array();
        for (const auto& s : summary) {
          groups.push_back(s.group);
          for (double v : {s.min, s.q1, s.median, s.q3, s.max, static_cast<double>(s.n)}) {
            values.push_back(static_cast<float>(v));
          }
        }
        const auto path = "summary/" + key;
        writer.write<float>(path, {summary.size(), 6}, values, {summary.size(), 6});
        writer.set_attribute(path, store::Json{{"groups", groups},
                                               {"columns", {"min", "q1", "median", "q3", "max", "n"}}});
      }
      writer.finish();
    } else if constexpr (std::is_same_v<T, AggregateSource>) {
      const auto& am = need_matrix(sources);
      const auto means = stats::aggregate_means(am, src.groupby, src.features);
      std::vector<float> values(means.values.begin(), means.values.end());
      store::StoreWriter writer(dir);
      writer.write<float>("X", {means.groups.size(), means.features.size()}, values,
                          {std::min(means.groups.size(), store::kMatrixChunkRows), means.features.size()});
      writer.set_attribute("obs", store::Json{{"ids", means.groups}, {"groupby", src.groupby}});
      writer.set_attribute("var", store::Json{{"ids", means.features}});
      writer.finish();
    } else {
      if (!sources.spatial) throw Error(ErrorCode::InvalidArgument, "export plan needs spatial data");
      const auto& data = *sources.spatial;
      auto missing = [&] { return Error(ErrorCode::UnknownElement, "no element '" + src.element + "'"); };
      switch (src.kind) {
        case ElementKind::Image: {
          auto it = data.images.find(src.element);
          if (it == data.images.end()) throw missing();
          store::export_image_pyramid(it->second, dir);
          break;
        }
        case ElementKind::Shapes: {
          auto it = data.shapes.find(src.element);
          if (it == data.shapes.end()) throw missing();
          store::export_circles(it->second, dir);
          break;
        }
        case ElementKind::Points: {
          auto it = data.points.find(src.element);
          if (it == data.points.end()) throw missing();
          store::export_points(it->second, dir);
          break;
        }
        case ElementKind::Labels: {
          auto it = data.labels.find(src.element);
          if (it == data.labels.end()) throw missing();
          store::export_labels(it->second, dir);
          break;
        }
      }
    }
  }, entry.source);
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace detail

// Creates a fresh "plot-<n>" directory under work_root.
inline fs::path fresh_dir(const fs::path& work_root) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  fs::create_directories(work_root, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + work_root.string() + ": " + ec.message());
  while (true) {
    auto dir = work_root / ("plot-" + std::to_string(counter++));
    if (fs::create_directory(dir, ec)) return dir;
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  }
}

// Executes the export plan, serves the directory and writes config.json
// with absolute urls.
inline InteractivePlotHandle materialize(const translate::TranslationResult& result, const DataSources& sources,
                                         serve::Server& server, const fs::path& work_root) {
  const auto dir = fresh_dir(work_root);
  for (const auto& entry : result.export_plan) detail::export_entry(entry, sources, dir / entry.url);

  InteractivePlotHandle handle;
  handle.result = result;
  handle.dir = dir;
  handle.base_url = server.start();
  const auto prefix = server.register_dir(dir);
  handle.mount_uid = prefix.substr(handle.base_url.size() + 1, prefix.size() - handle.base_url.size() - 2);

  handle.config = result.config;
  rewrite_urls(handle.config, [&](const std::string& url) { return prefix + url; });
  detail::write_text(dir / "config.json", viewmodel::serialize(handle.config));
  handle.config_url = prefix + "config.json";
  handle.viewer_url = handle.base_url + "/viewer/index.html?config=" + handle.config_url;
  return handle;
}

enum class Environment { Notebook, Plain };

using DisplayHook = std::function<void(const std::string& html)>;

namespace detail {
struct HookSlot {
  std::mutex mu;
  DisplayHook hook;
};
inline HookSlot& hook_slot() {
  static HookSlot slot;
  return slot;
}
}  // namespace detail

// A notebook kernel integration registers here to receive inline HTML.
inline void set_display_hook(DisplayHook hook) {
  auto& slot = detail::hook_slot();
  std::lock_guard lock(slot.mu);
  slot.hook = std::move(hook);
}

inline DisplayHook display_hook() {
  auto& slot = detail::hook_slot();
  std::lock_guard lock(slot.mu);
  return slot.hook;
}

using EnvironmentProbe = std::function<Environment()>;

// NOTEBOOK when a display hook is installed, unless a probe is injected.
inline Environment detect_environment(const EnvironmentProbe& probe = {}) {
  if (probe) return probe();
  return display_hook() ? Environment::Notebook : Environment::Plain;
}

struct FrameSize {
  int width = 900;
  int height = 600;
};

inline std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string iframe_html(const std::string& url, FrameSize size) {
  return "<iframe src=\"" + html_escape(url) + "\" width=\"" + std::to_string(size.width) + "\" height=\"" +
         std::to_string(size.height) + "\" style=\"border: none;\"></iframe>";
}

// Stateless: the same handle always renders the same output.
inline std::string display(const InteractivePlotHandle& handle, Environment env, FrameSize size = {}) {
  if (env == Environment::Notebook) return iframe_html(handle.viewer_url, size);
  return handle.viewer_url;
}

inline std::string display(const InteractivePlotHandle& handle, const EnvironmentProbe& probe = {},
                           FrameSize size = {}) {
  return display(handle, detect_environment(probe), size);
}

inline bool is_absolute_url(const std::string& s) {
  static const std::regex kAbsolute(R"(^[A-Za-z][A-Za-z0-9+.\-]*://[^/\s]+(/\S*)?$)");
  return std::regex_match(s, kAbsolute);
}

// Writes the served config. With an override, the local base url prefix of
// every file url is replaced by it; suffixes are kept verbatim.
inline fs::path export_config(const InteractivePlotHandle& handle, const fs::path& path,
                              const std::optional<std::string>& base_url_override = std::nullopt) {
  auto cfg = handle.config;
  if (base_url_override) {
    if (!is_absolute_url(*base_url_override)) {
      throw Error(ErrorCode::InvalidOverride, "'" + *base_url_override + "' is not an absolute url");
    }
    auto base = *base_url_override;
    if (base.size() > 1 && base.back() == '/') base.pop_back();
    rewrite_urls(cfg, [&](const std::string& url) {
      if (url.rfind(handle.base_url, 0) == 0) return base + url.substr(handle.base_url.size());
      return url;
    });
  }
  detail::write_text(path, viewmodel::serialize(cfg));
  return path;
}

}  // namespace bridge
}  // namespace plotmorph
