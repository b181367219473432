#pragma once

// Declarative view configuration: datasets, coordination scopes and a grid
// layout of views. Serializes to canonical JSON.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plotmorph/error.hpp"

namespace plotmorph::viewmodel {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kConfigVersion = "0.1.0";
inline constexpr int kGridColumns = 12;

enum class FileKind { MatrixStore, ImagePyramid, Circles, Points, Labels };

enum class ComponentKind {
  Scatterplot,
  Spatial,
  DotPlot,
  Heatmap,
  Violin,
  FeatureList,
  ObsSetList,
  LayerController,
};

// Declaration order is the serialization order.
enum class CoordinationType {
  Dataset,
  EmbeddingType,
  FeatureSelection,
  ObsColorEncoding,
  ObsSetSelection,
  SpatialZoom,
  SpatialTargetX,
  SpatialTargetY,
  SpatialLayers,
};

inline constexpr std::string_view to_string(FileKind k) {
  switch (k) {
    case FileKind::MatrixStore: return "matrixStore";
    case FileKind::ImagePyramid: return "imagePyramid";
    case FileKind::Circles: return "circles";
    case FileKind::Points: return "points";
    case FileKind::Labels: return "labels";
  }
  return "";
}

inline constexpr std::string_view to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Scatterplot: return "scatterplot";
    case ComponentKind::Spatial: return "spatial";
    case ComponentKind::DotPlot: return "dotPlot";
    case ComponentKind::Heatmap: return "heatmap";
    case ComponentKind::Violin: return "violinPlot";
    case ComponentKind::FeatureList: return "featureList";
    case ComponentKind::ObsSetList: return "obsSets";
    case ComponentKind::LayerController: return "layerController";
  }
  return "";
}

inline constexpr std::string_view to_string(CoordinationType t) {
  switch (t) {
    case CoordinationType::Dataset: return "dataset";
    case CoordinationType::EmbeddingType: return "embeddingType";
    case CoordinationType::FeatureSelection: return "featureSelection";
    case CoordinationType::ObsColorEncoding: return "obsColorEncoding";
    case CoordinationType::ObsSetSelection: return "obsSetSelection";
    case CoordinationType::SpatialZoom: return "spatialZoom";
    case CoordinationType::SpatialTargetX: return "spatialTargetX";
    case CoordinationType::SpatialTargetY: return "spatialTargetY";
    case CoordinationType::SpatialLayers: return "spatialLayers";
  }
  return "";
}

namespace detail {
template <typename Enum, int N>
std::optional<Enum> parse_enum(std::string_view text) {
  for (int i = 0; i < N; ++i) {
    auto e = static_cast<Enum>(i);
    if (to_string(e) == text) return e;
  }
  return std::nullopt;
}
}  // namespace detail

inline std::optional<FileKind> parse_file_kind(std::string_view s) {
  return detail::parse_enum<FileKind, 5>(s);
}
inline std::optional<ComponentKind> parse_component_kind(std::string_view s) {
  return detail::parse_enum<ComponentKind, 8>(s);
}
inline std::optional<CoordinationType> parse_coordination_type(std::string_view s) {
  return detail::parse_enum<CoordinationType, 9>(s);
}

struct FileDecl {
  std::string url;
  FileKind kind = FileKind::MatrixStore;
  Json options = Json::object();
  bool operator==(const FileDecl&) const = default;
};

struct DatasetDecl {
  std::string uid;
  std::string name;
  std::vector<FileDecl> files;
  bool operator==(const DatasetDecl&) const = default;
};

struct GridRect {
  int x = 0, y = 0, w = 1, h = 1;
  bool operator==(const GridRect&) const = default;
};

struct View {
  ComponentKind kind = ComponentKind::Scatterplot;
  std::map<CoordinationType, std::string> coordination;
  GridRect grid;
  bool operator==(const View&) const = default;
};

struct Scope {
  std::string name;
  Json value;
  bool operator==(const Scope&) const = default;
};

struct ViewConfig {
  std::string version = std::string(kConfigVersion);
  std::string name;
  std::vector<DatasetDecl> datasets;
  std::map<CoordinationType, std::vector<Scope>> coordination_space;  // scopes in insertion order
  std::vector<View> layout;

  bool operator==(const ViewConfig&) const = default;

  const Scope* scope(CoordinationType type, const std::string& name) const {
    auto it = coordination_space.find(type);
    if (it == coordination_space.end()) return nullptr;
    for (const auto& s : it->second) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  // Value bound to `type` for view `index`, or nullptr.
  const Json* view_value(std::size_t index, CoordinationType type) const {
    const auto& c = layout.at(index).coordination;
    auto it = c.find(type);
    if (it == c.end()) return nullptr;
    const auto* s = scope(type, it->second);
    return s ? &s->value : nullptr;
  }

  std::vector<std::size_t> views_of(ComponentKind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (layout[i].kind == kind) out.push_back(i);
    }
    return out;
  }
};

// 0 -> "A", 25 -> "Z", 26 -> "AA", 27 -> "AB", ...
inline std::string sequence_name(std::size_t index) {
  std::string out;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    out.insert(out.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return out;
}

inline std::string add_dataset(ViewConfig& cfg, const std::string& name, std::vector<FileDecl> files) {
  if (files.empty()) throw Error(ErrorCode::InvalidArgument, "dataset '" + name + "' has no files");
  for (const auto& d : cfg.datasets) {
    if (d.name == name) throw Error(ErrorCode::DuplicateName, "dataset name '" + name + "' already used");
  }
  auto uid = sequence_name(cfg.datasets.size());
  cfg.datasets.push_back({uid, name, std::move(files)});
  return uid;
}

inline std::size_t add_view(ViewConfig& cfg, ComponentKind kind, GridRect grid = {}) {
  cfg.layout.push_back({kind, {}, grid});
  return cfg.layout.size() - 1;
}

// Creates the next scope of `type` holding `value` and points every listed
// view at it.
inline std::string link_views(ViewConfig& cfg, const std::vector<std::size_t>& views,
                              CoordinationType type, Json value) {
  for (auto v : views) {
    if (v >= cfg.layout.size()) {
      throw Error(ErrorCode::UnknownView, "view index " + std::to_string(v) + " is not in the layout");
    }
  }
  auto& scopes = cfg.coordination_space[type];
  auto name = sequence_name(scopes.size());
  scopes.push_back({name, std::move(value)});
  for (auto v : views) cfg.layout[v].coordination[type] = name;
  return name;
}

struct Violation {
  std::string path;
  std::string message;
  bool operator==(const Violation&) const = default;
};

inline std::vector<Violation> validate(const ViewConfig& cfg) {
  std::vector<Violation> out;

  std::set<std::string> uids;
  for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
    const auto& d = cfg.datasets[i];
    const auto path = "datasets[" + std::to_string(i) + "]";
    if (!uids.insert(d.uid).second) out.push_back({path + ".uid", "duplicate dataset uid '" + d.uid + "'"});
    if (d.files.empty()) out.push_back({path + ".files", "dataset has no files"});
  }

  for (const auto& [type, scopes] : cfg.coordination_space) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < scopes.size(); ++i) {
      const auto path = "coordinationSpace." + std::string(to_string(type)) + "." + scopes[i].name;
      if (!names.insert(scopes[i].name).second) out.push_back({path, "duplicate scope name"});
      if (type == CoordinationType::ObsColorEncoding) {
        const auto& v = scopes[i].value;
        if (!v.is_string() || (v != "cellSetSelection" && v != "geneSelection")) {
          out.push_back({path, "obsColorEncoding must be \"cellSetSelection\" or \"geneSelection\""});
        }
      }
      if (type == CoordinationType::Dataset) {
        const auto& v = scopes[i].value;
        if (!v.is_string() || !uids.contains(v.get<std::string>())) {
          out.push_back({path, "dataset scope does not name a declared dataset"});
        }
      }
    }
  }

  for (std::size_t i = 0; i < cfg.layout.size(); ++i) {
    const auto& v = cfg.layout[i];
    const auto path = "layout[" + std::to_string(i) + "]";
    for (const auto& [type, scope] : v.coordination) {
      if (!cfg.scope(type, scope)) {
        out.push_back({path + ".coordinationScopes." + std::string(to_string(type)),
                       "view " + std::to_string(i) + " (" + std::string(to_string(v.kind)) +
                           ") references missing scope '" + scope + "'"});
      }
    }
    const auto& g = v.grid;
    if (g.x < 0 || g.y < 0 || g.w < 1 || g.h < 1 || g.x + g.w > kGridColumns) {
      out.push_back({path + ".grid", "rectangle (x=" + std::to_string(g.x) + ", w=" + std::to_string(g.w) +
                                         ") outside the 12-column grid"});
    }
    auto require = [&](CoordinationType t) {
      if (!v.coordination.contains(t)) {
        out.push_back({path + ".coordinationScopes",
                       std::string(to_string(v.kind)) + " view requires a " + std::string(to_string(t)) + " scope"});
      }
    };
    if (v.kind == ComponentKind::Scatterplot) require(CoordinationType::EmbeddingType);
    if (v.kind == ComponentKind::Spatial) {
      require(CoordinationType::SpatialZoom);
      require(CoordinationType::SpatialTargetX);
      require(CoordinationType::SpatialTargetY);
    }
  }
  return out;
}

inline Json to_json(const ViewConfig& cfg) {
  Json j = Json::object();
  j["version"] = cfg.version;
  j["name"] = cfg.name;
  j["datasets"] = Json::array();
  for (const auto& d : cfg.datasets) {
    Json dj = Json::object();
    dj["uid"] = d.uid;
    dj["name"] = d.name;
    dj["files"] = Json::array();
    for (const auto& f : d.files) {
      Json fj = Json::object();
      fj["url"] = f.url;
      fj["kind"] = to_string(f.kind);
      fj["options"] = f.options;
      dj["files"].push_back(std::move(fj));
    }
    j["datasets"].push_back(std::move(dj));
  }
  j["coordinationSpace"] = Json::object();
  for (const auto& [type, scopes] : cfg.coordination_space) {
    Json sj = Json::object();
    for (const auto& s : scopes) sj[s.name] = s.value;
    j["coordinationSpace"][std::string(to_string(type))] = std::move(sj);
  }
  j["layout"] = Json::array();
  for (const auto& v : cfg.layout) {
    Json vj = Json::object();
    vj["component"] = to_string(v.kind);
    vj["coordinationScopes"] = Json::object();
    for (const auto& [type, scope] : v.coordination) vj["coordinationScopes"][std::string(to_string(type))] = scope;
    vj["x"] = v.grid.x;
    vj["y"] = v.grid.y;
    vj["w"] = v.grid.w;
    vj["h"] = v.grid.h;
    j["layout"].push_back(std::move(vj));
  }
  return j;
}

// Canonical text: two-space indented JSON, keys in schema order.
inline std::string serialize(const ViewConfig& cfg) {
  auto violations = validate(cfg);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidConfig, violations.front().path + ": " + violations.front().message);
  }
  return to_json(cfg).dump(2);
}

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "at " + where + ": " + what);
}

inline const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where, std::string("missing key '") + key + "'");
  return *it;
}

inline std::string string_member(const Json& obj, const char* key, const std::string& where) {
  const auto& v = member(obj, key, where);
  if (!v.is_string()) parse_fail(where + "/" + key, "expected a string");
  return v.get<std::string>();
}

inline int int_member(const Json& obj, const char* key, const std::string& where) {
  const auto& v = member(obj, key, where);
  if (!v.is_number_integer()) parse_fail(where + "/" + key, "expected an integer");
  return v.get<int>();
}

inline const Json& array_member(const Json& obj, const char* key, const std::string& where) {
  const auto& v = member(obj, key, where);
  if (!v.is_array()) parse_fail(where + "/" + key, "expected an array");
  return v;
}

}  // namespace detail

inline ViewConfig from_json(const Json& j) {
  using detail::parse_fail;
  if (!j.is_object()) parse_fail("/", "expected an object");
  static const std::vector<std::string> kTopLevel = {"version", "name", "datasets", "coordinationSpace",
                                                     "layout"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(kTopLevel.begin(), kTopLevel.end(), key) == kTopLevel.end()) {
      parse_fail("/" + key, "unexpected top-level key");
    }
  }

  ViewConfig cfg;
  cfg.version = detail::string_member(j, "version", "");
  cfg.name = detail::string_member(j, "name", "");

  const auto& datasets = detail::array_member(j, "datasets", "");
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const auto where = "/datasets/" + std::to_string(i);
    DatasetDecl d;
    d.uid = detail::string_member(datasets[i], "uid", where);
    d.name = detail::string_member(datasets[i], "name", where);
    const auto& files = detail::array_member(datasets[i], "files", where);
    for (std::size_t k = 0; k < files.size(); ++k) {
      const auto fwhere = where + "/files/" + std::to_string(k);
      FileDecl f;
      f.url = detail::string_member(files[k], "url", fwhere);
      auto kind = parse_file_kind(detail::string_member(files[k], "kind", fwhere));
      if (!kind) parse_fail(fwhere + "/kind", "unknown file kind");
      f.kind = *kind;
      f.options = detail::member(files[k], "options", fwhere);
      if (!f.options.is_object()) parse_fail(fwhere + "/options", "expected an object");
      d.files.push_back(std::move(f));
    }
    cfg.datasets.push_back(std::move(d));
  }

  const auto& space = detail::member(j, "coordinationSpace", "");
  if (!space.is_object()) parse_fail("/coordinationSpace", "expected an object");
  for (const auto& [type_name, scopes] : space.items()) {
    const auto where = "/coordinationSpace/" + type_name;
    auto type = parse_coordination_type(type_name);
    if (!type) parse_fail(where, "unknown coordination type");
    if (!scopes.is_object()) parse_fail(where, "expected an object");
    auto& list = cfg.coordination_space[*type];
    for (const auto& [scope_name, value] : scopes.items()) list.push_back({scope_name, value});
  }

  const auto& layout = detail::array_member(j, "layout", "");
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto where = "/layout/" + std::to_string(i);
    View v;
    auto kind = parse_component_kind(detail::string_member(layout[i], "component", where));
    if (!kind) parse_fail(where + "/component", "unknown component kind");
    v.kind = *kind;
    const auto& scopes = detail::member(layout[i], "coordinationScopes", where);
    if (!scopes.is_object()) parse_fail(where + "/coordinationScopes", "expected an object");
    for (const auto& [type_name, scope] : scopes.items()) {
      auto type = parse_coordination_type(type_name);
      if (!type) parse_fail(where + "/coordinationScopes/" + type_name, "unknown coordination type");
      if (!scope.is_string()) parse_fail(where + "/coordinationScopes/" + type_name, "expected a string");
      v.coordination[*type] = scope.get<std::string>();
    }
    v.grid = {detail::int_member(layout[i], "x", where), detail::int_member(layout[i], "y", where),
              detail::int_member(layout[i], "w", where), detail::int_member(layout[i], "h", where)};
    cfg.layout.push_back(std::move(v));
  }
  return cfg;
}

inline ViewConfig deserialize(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace plotmorph::viewmodel
