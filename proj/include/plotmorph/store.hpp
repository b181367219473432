#pragma once

// AVCS: a chunked on-disk array container. Layout:
//
//   <dir>/manifest.json
//   <dir>/<array path>/c<i0>_<i1>[_<i2>].bin
//
// Chunks are raw C-order little-endian values without compression. Edge
// chunks are truncated to the array extent.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "plotmorph/data.hpp"
#include "plotmorph/error.hpp"

namespace plotmorph::store {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "avcs-1";
inline constexpr std::size_t kMatrixChunkRows = 1000;
inline constexpr std::size_t kImageTile = 256;
inline constexpr std::size_t kMaxPyramidLevels = 8;

enum class DType { F32, I32, U16, U8 };

inline constexpr std::string_view to_string(DType d) {
  switch (d) {
    case DType::F32: return "f32";
    case DType::I32: return "i32";
    case DType::U16: return "u16";
    case DType::U8: return "u8";
  }
  return "";
}

inline std::optional<DType> parse_dtype(std::string_view s) {
  for (auto d : {DType::F32, DType::I32, DType::U16, DType::U8}) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

inline constexpr std::size_t dtype_size(DType d) {
  switch (d) {
    case DType::F32:
    case DType::I32: return 4;
    case DType::U16: return 2;
    case DType::U8: return 1;
  }
  return 0;
}

template <typename T>
constexpr DType dtype_of() {
  if constexpr (std::is_same_v<T, float>) return DType::F32;
  else if constexpr (std::is_same_v<T, std::int32_t>) return DType::I32;
  else if constexpr (std::is_same_v<T, std::uint16_t>) return DType::U16;
  else if constexpr (std::is_same_v<T, std::uint8_t>) return DType::U8;
  else static_assert(sizeof(T) == 0, "unsupported AVCS element type");
}

struct ArrayMeta {
  std::vector<std::size_t> shape;
  DType dtype = DType::F32;
  std::vector<std::size_t> chunk_shape;

  bool operator==(const ArrayMeta&) const = default;

  std::vector<std::size_t> grid() const {
    std::vector<std::size_t> g(shape.size());
    for (std::size_t d = 0; d < shape.size(); ++d) g[d] = (shape[d] + chunk_shape[d] - 1) / chunk_shape[d];
    return g;
  }

  std::size_t chunk_count() const {
    std::size_t n = 1;
    for (auto g : grid()) n *= g;
    return n;
  }
};

struct StoreManifest {
  std::string format_version = std::string(kFormatVersion);
  std::map<std::string, ArrayMeta> arrays;
  Json attributes = Json::object();

  bool operator==(const StoreManifest&) const = default;
};

inline Json to_json(const StoreManifest& m) {
  Json j = Json::object();
  j["format_version"] = m.format_version;
  j["arrays"] = Json::object();
  for (const auto& [path, meta] : m.arrays) {
    Json a = Json::object();
    a["shape"] = meta.shape;
    a["dtype"] = to_string(meta.dtype);
    a["chunk_shape"] = meta.chunk_shape;
    a["order"] = "C";
    j["arrays"][path] = std::move(a);
  }
  j["attributes"] = m.attributes;
  return j;
}

inline StoreManifest manifest_from_json(const Json& j) {
  try {
    StoreManifest m;
    m.format_version = j.at("format_version").get<std::string>();
    for (const auto& [path, a] : j.at("arrays").items()) {
      ArrayMeta meta;
      meta.shape = a.at("shape").get<std::vector<std::size_t>>();
      meta.chunk_shape = a.at("chunk_shape").get<std::vector<std::size_t>>();
      auto dtype = parse_dtype(a.at("dtype").get<std::string>());
      if (!dtype || a.at("order") != "C" || meta.shape.size() != meta.chunk_shape.size()) {
        throw Error(ErrorCode::CorruptChunk, "bad array entry '" + path + "' in manifest");
      }
      meta.dtype = *dtype;
      m.arrays[path] = std::move(meta);
    }
    m.attributes = j.at("attributes");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("malformed manifest: ") + e.what());
  }
}

inline StoreManifest read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + (dir / "manifest.json").string());
  try {
    return manifest_from_json(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::IoError, std::string("malformed manifest: ") + e.what());
  }
}

inline std::string chunk_name(std::span<const std::size_t> index) {
  std::string name = "c";
  for (std::size_t d = 0; d < index.size(); ++d) {
    if (d) name += '_';
    name += std::to_string(index[d]);
  }
  return name + ".bin";
}

// chunk_shape clamped to [1, shape] per dimension.
inline std::vector<std::size_t> clamp_chunks(const std::vector<std::size_t>& shape,
                                             std::vector<std::size_t> chunk) {
  for (std::size_t d = 0; d < shape.size(); ++d) chunk[d] = std::max<std::size_t>(1, std::min(chunk[d], shape[d]));
  return chunk;
}

namespace detail {

template <typename T>
void to_little_endian(std::span<T> values) {
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    for (auto& v : values) {
      auto* b = reinterpret_cast<unsigned char*>(&v);
      std::reverse(b, b + sizeof(T));
    }
  }
}

// Visits every chunk grid index in C order.
inline void for_each_index(const std::vector<std::size_t>& extent,
                           const std::function<void(const std::vector<std::size_t>&)>& fn) {
  for (auto e : extent) {
    if (e == 0) return;
  }
  std::vector<std::size_t> idx(extent.size(), 0);
  while (true) {
    fn(idx);
    std::size_t d = extent.size();
    while (d > 0) {
      --d;
      if (++idx[d] < extent[d]) break;
      idx[d] = 0;
      if (d == 0) return;
    }
    if (extent.empty()) return;
  }
}

struct ChunkBox {
  std::vector<std::size_t> origin;
  std::vector<std::size_t> extent;
};

inline ChunkBox chunk_box(const ArrayMeta& meta, const std::vector<std::size_t>& index) {
  ChunkBox box{std::vector<std::size_t>(index.size()), std::vector<std::size_t>(index.size())};
  for (std::size_t d = 0; d < index.size(); ++d) {
    box.origin[d] = index[d] * meta.chunk_shape[d];
    box.extent[d] = std::min(meta.chunk_shape[d], meta.shape[d] - box.origin[d]);
  }
  return box;
}

inline void write_file(const fs::path& path, const void* bytes, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(static_cast<const char*>(bytes), static_cast<std::streamsize>(size));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace detail

// Writes arrays into a fresh store directory and finally its manifest.
class StoreWriter {
 public:
  explicit StoreWriter(fs::path dir, bool overwrite = false) : dir_(std::move(dir)) {
    std::error_code ec;
    if (fs::exists(dir_, ec) && !fs::is_empty(dir_, ec)) {
      if (!overwrite) throw Error(ErrorCode::Overwrite, dir_.string() + " exists and is not empty");
      fs::remove_all(dir_, ec);
      if (ec) throw Error(ErrorCode::IoError, "cannot clear " + dir_.string() + ": " + ec.message());
    }
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
  }

  const fs::path& dir() const { return dir_; }
  StoreManifest& manifest() { return manifest_; }

  // Writes a whole in-memory array, cut along chunk_shape.
  template <typename T>
  void write(const std::string& path, const std::vector<std::size_t>& shape, std::span<const T> data,
             std::vector<std::size_t> chunk_shape) {
    if (Tensor<T>::element_count(shape) != data.size()) {
      throw Error(ErrorCode::InvalidArgument, "array '" + path + "' data does not match shape");
    }
    ArrayMeta meta{shape, dtype_of<T>(), clamp_chunks(shape, std::move(chunk_shape))};
    const auto array_dir = begin_array(path, meta);

    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t d = shape.size(); d-- > 1;) strides[d - 1] = strides[d] * shape[d];

    std::vector<T> buffer;
    detail::for_each_index(meta.grid(), [&](const std::vector<std::size_t>& index) {
      auto box = detail::chunk_box(meta, index);
      buffer.clear();
      // Iterate the chunk's elements in C order; copy contiguous last-dim runs.
      std::vector<std::size_t> outer(box.extent.begin(), box.extent.end() - 1);
      auto copy_run = [&](const std::vector<std::size_t>& o) {
        std::size_t offset = 0;
        for (std::size_t d = 0; d + 1 < shape.size(); ++d) offset += (box.origin[d] + o[d]) * strides[d];
        offset += box.origin.back();
        buffer.insert(buffer.end(), data.begin() + static_cast<std::ptrdiff_t>(offset),
                      data.begin() + static_cast<std::ptrdiff_t>(offset + box.extent.back()));
      };
      if (outer.empty()) copy_run({});
      else detail::for_each_index(outer, copy_run);
      put_chunk(array_dir, index, std::span<T>(buffer));
    });
  }

  // Writes a 2-D array chunked by rows only, filling each chunk on demand
  // through fill_row(row, out) so sparse sources never materialize fully.
  template <typename T>
  void write_rows(const std::string& path, std::size_t n_rows, std::size_t n_cols, std::size_t chunk_rows,
                  const std::function<void(std::size_t, std::span<T>)>& fill_row) {
    ArrayMeta meta{{n_rows, n_cols}, dtype_of<T>(), clamp_chunks({n_rows, n_cols}, {chunk_rows, n_cols})};
    const auto array_dir = begin_array(path, meta);
    std::vector<T> buffer;
    detail::for_each_index(meta.grid(), [&](const std::vector<std::size_t>& index) {
      auto box = detail::chunk_box(meta, index);
      buffer.assign(box.extent[0] * n_cols, T{});
      for (std::size_t r = 0; r < box.extent[0]; ++r) {
        fill_row(box.origin[0] + r, std::span<T>(buffer).subspan(r * n_cols, n_cols));
      }
      put_chunk(array_dir, index, std::span<T>(buffer));
    });
  }

  void set_attribute(const std::string& key, Json value) { manifest_.attributes[key] = std::move(value); }

  const StoreManifest& finish() {
    const auto text = to_json(manifest_).dump(2);
    detail::write_file(dir_ / "manifest.json", text.data(), text.size());
    return manifest_;
  }

 private:
  fs::path begin_array(const std::string& path, const ArrayMeta& meta) {
    if (path.empty() || path.front() == '/' || path.find("..") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "bad array path '" + path + "'");
    }
    if (manifest_.arrays.contains(path)) {
      throw Error(ErrorCode::InvalidArgument, "array '" + path + "' written twice");
    }
    manifest_.arrays[path] = meta;
    auto array_dir = dir_ / path;
    std::error_code ec;
    fs::create_directories(array_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + array_dir.string() + ": " + ec.message());
    return array_dir;
  }

  template <typename T>
  void put_chunk(const fs::path& array_dir, const std::vector<std::size_t>& index, std::span<T> values) {
    detail::to_little_endian(values);
    detail::write_file(array_dir / chunk_name(index), values.data(), values.size_bytes());
  }

  fs::path dir_;
  StoreManifest manifest_;
};

// Half-open [begin, end) per dimension.
using Region = std::vector<std::pair<std::size_t, std::size_t>>;

struct LoadedArray {
  std::vector<std::size_t> shape;
  DType dtype = DType::F32;
  std::vector<unsigned char> bytes;

  template <typename T>
  Tensor<T> as() const {
    if (dtype_of<T>() != dtype) throw Error(ErrorCode::InvalidArgument, "dtype mismatch");
    std::vector<T> values(bytes.size() / sizeof(T));
    std::memcpy(values.data(), bytes.data(), bytes.size());
    detail::to_little_endian(std::span<T>(values));  // symmetric swap
    return Tensor<T>(shape, std::move(values));
  }
};

// Reassembles an array, or the requested region of it. Only chunks that
// intersect the region are opened.
inline LoadedArray load_array(const fs::path& dir, const std::string& path,
                              const std::optional<Region>& region = std::nullopt) {
  const auto manifest = read_manifest(dir);
  auto it = manifest.arrays.find(path);
  if (it == manifest.arrays.end()) throw Error(ErrorCode::UnknownPath, "no array '" + path + "' in " + dir.string());
  const auto& meta = it->second;
  const std::size_t rank = meta.shape.size();
  const std::size_t elem = dtype_size(meta.dtype);

  Region want = region.value_or(Region{});
  if (!region) {
    for (auto s : meta.shape) want.emplace_back(0, s);
  }
  if (want.size() != rank) throw Error(ErrorCode::InvalidArgument, "region rank does not match array");
  for (std::size_t d = 0; d < rank; ++d) {
    if (want[d].first > want[d].second || want[d].second > meta.shape[d]) {
      throw Error(ErrorCode::InvalidArgument, "region outside array bounds");
    }
  }

  LoadedArray out;
  out.dtype = meta.dtype;
  for (const auto& [b, e] : want) out.shape.push_back(e - b);
  const std::size_t total = Tensor<char>::element_count(out.shape);
  out.bytes.assign(total * elem, 0);
  if (total == 0) return out;

  std::vector<std::size_t> out_strides(rank, 1);
  for (std::size_t d = rank; d-- > 1;) out_strides[d - 1] = out_strides[d] * out.shape[d];

  // Chunk index range covering the region.
  std::vector<std::size_t> first(rank), count(rank);
  for (std::size_t d = 0; d < rank; ++d) {
    first[d] = want[d].first / meta.chunk_shape[d];
    count[d] = (want[d].second - 1) / meta.chunk_shape[d] - first[d] + 1;
  }

  std::vector<unsigned char> chunk;
  detail::for_each_index(count, [&](const std::vector<std::size_t>& rel) {
    std::vector<std::size_t> index(rank);
    for (std::size_t d = 0; d < rank; ++d) index[d] = first[d] + rel[d];
    const auto box = detail::chunk_box(meta, index);
    const auto file = dir / path / chunk_name(index);

    const std::size_t expected = Tensor<char>::element_count(box.extent) * elem;
    std::error_code ec;
    const auto actual = fs::file_size(file, ec);
    if (ec || actual != expected) {
      throw Error(ErrorCode::CorruptChunk, file.string() + " has " + (ec ? std::string("no file") : std::to_string(actual) + " bytes") +
                                               ", expected " + std::to_string(expected));
    }
    chunk.resize(expected);
    std::ifstream in(file, std::ios::binary);
    in.read(reinterpret_cast<char*>(chunk.data()), static_cast<std::streamsize>(expected));
    if (!in) throw Error(ErrorCode::CorruptChunk, "cannot read " + file.string());

    // Intersection of chunk box and region, copied run by run along the last dim.
    std::vector<std::size_t> lo(rank), hi(rank);
    for (std::size_t d = 0; d < rank; ++d) {
      lo[d] = std::max(box.origin[d], want[d].first);
      hi[d] = std::min(box.origin[d] + box.extent[d], want[d].second);
    }
    std::vector<std::size_t> chunk_strides(rank, 1);
    for (std::size_t d = rank; d-- > 1;) chunk_strides[d - 1] = chunk_strides[d] * box.extent[d];

    std::vector<std::size_t> outer(rank - 1);
    for (std::size_t d = 0; d + 1 < rank; ++d) outer[d] = hi[d] - lo[d];
    auto copy_run = [&](const std::vector<std::size_t>& o) {
      std::size_t src = 0, dst = 0;
      for (std::size_t d = 0; d + 1 < rank; ++d) {
        src += (lo[d] + o[d] - box.origin[d]) * chunk_strides[d];
        dst += (lo[d] + o[d] - want[d].first) * out_strides[d];
      }
      src += lo.back() - box.origin.back();
      dst += lo.back() - want.back().first;
      std::memcpy(out.bytes.data() + dst * elem, chunk.data() + src * elem, (hi.back() - lo.back()) * elem);
    };
    if (outer.empty()) copy_run({});
    else detail::for_each_index(outer, copy_run);
  });
  return out;
}

// Which parts of an annotated matrix to write. Unset lists mean "all".
struct MatrixExportOptions {
  bool include_x = true;
  std::optional<std::vector<std::string>> features;
  std::optional<std::vector<std::string>> embeddings;
  std::optional<std::vector<std::string>> obs_columns;
  bool overwrite = false;
};

// Arrays: "X" (rows chunked by 1000, all columns), "obsm/<name>",
// "obs/<column>" (i32 codes or f32 values). Ids and category labels live in
// the attributes.
inline StoreManifest export_matrix(const AnnotatedMatrix& am, const fs::path& dir,
                                   const MatrixExportOptions& options = {}) {
  am.check();
  std::vector<std::size_t> cols;
  std::vector<std::string> var_ids;
  if (options.features) {
    for (const auto& f : *options.features) {
      auto j = am.feature_index(f);
      if (!j) throw Error(ErrorCode::UnknownFeature, "unknown feature '" + f + "'");
      cols.push_back(*j);
      var_ids.push_back(f);
    }
  } else {
    for (std::size_t j = 0; j < am.n_var; ++j) cols.push_back(j);
    var_ids = am.var_ids;
  }
  const std::size_t chunk_rows = std::min(am.n_obs, kMatrixChunkRows);

  StoreWriter writer(dir, options.overwrite);
  writer.set_attribute("obs", Json{{"ids", am.obs_ids}});

  if (options.include_x) {
    writer.set_attribute("var", Json{{"ids", var_ids}});
    std::vector<float> full(am.n_var);
    writer.write_rows<float>("X", am.n_obs, cols.size(), chunk_rows, [&](std::size_t i, std::span<float> out) {
      am.row(i, full);
      for (std::size_t k = 0; k < cols.size(); ++k) out[k] = full[cols[k]];
    });
  }

  std::vector<std::string> embeddings;
  if (options.embeddings) embeddings = *options.embeddings;
  else for (const auto& [name, e] : am.embeddings) embeddings.push_back(name);
  for (const auto& name : embeddings) {
    auto it = am.embeddings.find(name);
    if (it == am.embeddings.end()) throw Error(ErrorCode::UnknownBasis, "no embedding '" + name + "'");
    const auto& e = it->second;
    writer.write<float>("obsm/" + name, {am.n_obs, e.dims}, e.values, {chunk_rows, e.dims});
  }

  std::vector<std::string> columns;
  if (options.obs_columns) columns = *options.obs_columns;
  else for (const auto& [name, c] : am.obs_columns) columns.push_back(name);
  for (const auto& name : columns) {
    auto it = am.obs_columns.find(name);
    if (it == am.obs_columns.end()) throw Error(ErrorCode::UnknownColumn, "no obs column '" + name + "'");
    const auto path = "obs/" + name;
    if (const auto* cat = std::get_if<CategoricalColumn>(&it->second)) {
      writer.write<std::int32_t>(path, {am.n_obs}, cat->codes, {chunk_rows});
      writer.set_attribute(path, Json{{"kind", "categorical"}, {"categories", cat->categories}});
    } else {
      const auto& num = std::get<NumericColumn>(it->second);
      writer.write<float>(path, {am.n_obs}, num.values, {chunk_rows});
      writer.set_attribute(path, Json{{"kind", "numeric"}});
    }
  }
  return writer.finish();
}

// 2x2 mean pooling; a trailing odd row/column pools the partial block.
// Integer element types round half up.
template <typename T>
Tensor<T> downsample(const Tensor<T>& level) {
  const auto c = level.shape[0], y = level.shape[1], x = level.shape[2];
  const auto ny = (y + 1) / 2, nx = (x + 1) / 2;
  Tensor<T> out({c, ny, nx});
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t i = 0; i < ny; ++i) {
      for (std::size_t j = 0; j < nx; ++j) {
        double sum = 0;
        std::size_t n = 0;
        for (std::size_t di = 0; di < 2 && 2 * i + di < y; ++di) {
          for (std::size_t dj = 0; dj < 2 && 2 * j + dj < x; ++dj) {
            sum += static_cast<double>(level.at(ch, 2 * i + di, 2 * j + dj));
            ++n;
          }
        }
        const double mean = sum / static_cast<double>(n);
        if constexpr (std::is_floating_point_v<T>) out.at(ch, i, j) = static_cast<T>(mean);
        else out.at(ch, i, j) = static_cast<T>(std::floor(mean + 0.5));
      }
    }
  }
  return out;
}

// Level 0 is the input. Halves until max(y, x) <= min_dim, at most 8 levels.
template <typename T>
std::vector<Tensor<T>> build_pyramid(const Tensor<T>& image, std::size_t min_dim = 512) {
  if (image.shape.size() != 3 || image.shape[1] == 0 || image.shape[2] == 0 || image.shape[0] == 0) {
    throw Error(ErrorCode::InvalidArgument, "image must be c x y x with every dim >= 1");
  }
  std::vector<Tensor<T>> levels{image};
  while (levels.size() < kMaxPyramidLevels) {
    const auto& last = levels.back();
    if (std::max(last.shape[1], last.shape[2]) <= min_dim) break;
    levels.push_back(downsample(last));
  }
  return levels;
}

// Writes "image/<k>" arrays for every pyramid level.
template <typename T>
StoreManifest export_image_pyramid(const Tensor<T>& image, const fs::path& dir, std::size_t min_dim = 512,
                                   bool overwrite = false) {
  const auto levels = build_pyramid(image, min_dim);
  StoreWriter writer(dir, overwrite);
  Json shapes = Json::array();
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& level = levels[k];
    writer.write<T>("image/" + std::to_string(k), level.shape, level.data,
                    {1, std::min(level.shape[1], kImageTile), std::min(level.shape[2], kImageTile)});
    shapes.push_back(level.shape);
  }
  writer.set_attribute("image", Json{{"levels", levels.size()}, {"shapes", shapes}, {"min_dim", min_dim}});
  return writer.finish();
}

inline StoreManifest export_image_pyramid(const Image& image, const fs::path& dir, std::size_t min_dim = 512,
                                          bool overwrite = false) {
  return std::visit([&](const auto& t) { return export_image_pyramid(t, dir, min_dim, overwrite); }, image);
}

inline StoreManifest export_circles(const Circles& circles, const fs::path& dir, bool overwrite = false) {
  const auto n = circles.size();
  if (circles.xyr.size() != n * 3) throw Error(ErrorCode::InvalidArgument, "circles need x, y, r per id");
  StoreWriter writer(dir, overwrite);
  writer.write<float>("circles", {n, 3}, circles.xyr, {std::min(n, kMatrixChunkRows), 3});
  writer.set_attribute("circles", Json{{"ids", circles.ids}});
  return writer.finish();
}

inline StoreManifest export_points(const Points& points, const fs::path& dir, bool overwrite = false) {
  const auto n = points.size();
  if (points.xy.size() != n * 2) throw Error(ErrorCode::InvalidArgument, "points need x, y per id");
  StoreWriter writer(dir, overwrite);
  writer.write<float>("points", {n, 2}, points.xy, {std::min(n, kMatrixChunkRows), 2});
  writer.set_attribute("points", Json{{"ids", points.ids}});
  return writer.finish();
}

// Stored as a single-channel 1 x y x x image, no pyramid.
inline StoreManifest export_labels(const LabelMask& mask, const fs::path& dir, bool overwrite = false) {
  if (mask.shape.size() != 2) throw Error(ErrorCode::InvalidArgument, "label mask must be y x x");
  const auto y = mask.shape[0], x = mask.shape[1];
  StoreWriter writer(dir, overwrite);
  writer.write<std::int32_t>("labels", {1, y, x}, mask.data, {1, std::min(y, kImageTile), std::min(x, kImageTile)});
  std::vector<std::int32_t> ids(mask.data.begin(), mask.data.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::erase(ids, 0);
  writer.set_attribute("labels", Json{{"ids", ids}});
  return writer.finish();
}

}  // namespace plotmorph::store
