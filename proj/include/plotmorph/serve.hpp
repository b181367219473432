#pragma once

// Loopback HTTP server for exported stores, configs, viewer assets and the
// selection round-trip API.
//
//   GET  /m<k>/<relpath>          file under the k-th registered directory
//   GET  /viewer/<relpath>        viewer assets, when a viewer dir is set
//   GET  /api/selections/m<k>     JSON array of obs ids (default [])
//   POST /api/selections/m<k>     replace with a JSON array of strings; 204

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "plotmorph/error.hpp"

namespace plotmorph::serve {

namespace fs = std::filesystem;

inline std::string content_type_for(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".json") return "application/json";
  if (ext == ".bin") return "application/octet-stream";
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

inline bool is_loopback_host(const std::string& host) {
  return host == "localhost" || host == "::1" || host.rfind("127.", 0) == 0;
}

// Resolves relpath under root, refusing anything that climbs out of it.
inline std::optional<fs::path> safe_join(const fs::path& root, const std::string& relpath) {
  fs::path rel(relpath);
  if (rel.is_absolute()) return std::nullopt;
  for (const auto& part : rel) {
    if (part == "..") return std::nullopt;
  }
  auto full = root / rel;
  std::error_code ec;
  if (!fs::is_regular_file(full, ec)) return std::nullopt;
  return full;
}

inline std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

struct MountRegistry {
  std::vector<fs::path> roots;  // index k is mount "m<k>"
  std::map<std::string, std::shared_ptr<const std::vector<std::string>>> selections;
  std::string base_url;

  static std::string uid(std::size_t k) { return "m" + std::to_string(k); }

  // Accepts "m3" or "3".
  std::optional<std::size_t> index_of(const std::string& mount) const {
    std::string digits = (!mount.empty() && mount[0] == 'm') ? mount.substr(1) : mount;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    auto k = std::stoul(digits);
    if (k >= roots.size()) return std::nullopt;
    return k;
  }
};

class Server {
 public:
  Server() { routes(); }
  ~Server() { stop(); }
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds loopback. Port: explicit argument, else PLOTMORPH_PORT, else an
  // OS-assigned one. A second call returns the first base_url.
  std::string start(std::optional<int> port = std::nullopt) {
    std::lock_guard lock(mu_);
    if (!registry_.base_url.empty()) return registry_.base_url;

    const char* host_env = std::getenv("PLOTMORPH_HOST");
    host_ = host_env && *host_env ? host_env : "127.0.0.1";
    if (!is_loopback_host(host_)) {
      throw Error(ErrorCode::InvalidArgument, "refusing to bind non-loopback host " + host_);
    }
    if (!port) {
      if (const char* env = std::getenv("PLOTMORPH_PORT"); env && *env) port = std::atoi(env);
    }
    if (const char* viewer = std::getenv("PLOTMORPH_VIEWER_DIR"); viewer && *viewer && !viewer_dir_) {
      viewer_dir_ = fs::path(viewer);
    }

    int bound = -1;
    if (port && *port > 0) {
      if (!http_.bind_to_port(host_, *port)) {
        throw Error(ErrorCode::PortInUse, "cannot bind " + host_ + ":" + std::to_string(*port));
      }
      bound = *port;
    } else {
      bound = http_.bind_to_any_port(host_);
      if (bound <= 0) throw Error(ErrorCode::IoError, "cannot bind an ephemeral port on " + host_);
    }
    port_ = bound;
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();

    const auto shown = host_.find(':') != std::string::npos ? "[" + host_ + "]" : host_;
    registry_.base_url = "http://" + shown + ":" + std::to_string(bound);
    return registry_.base_url;
  }

  void stop() {
    if (thread_.joinable()) {
      http_.stop();
      thread_.join();
    }
  }

  bool started() const {
    std::lock_guard lock(mu_);
    return !registry_.base_url.empty();
  }

  std::string base_url() const {
    std::lock_guard lock(mu_);
    return registry_.base_url;
  }

  const std::string& bind_host() const { return host_; }
  int port() const { return port_; }

  // Returns "<base_url>/m<k>/". Registering the same directory again yields
  // the same prefix.
  std::string register_dir(const fs::path& dir) {
    std::lock_guard lock(mu_);
    if (registry_.base_url.empty()) throw Error(ErrorCode::NotStarted, "server not started");
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
    const auto canonical = fs::weakly_canonical(dir);
    for (std::size_t k = 0; k < registry_.roots.size(); ++k) {
      if (registry_.roots[k] == canonical) return registry_.base_url + "/" + MountRegistry::uid(k) + "/";
    }
    registry_.roots.push_back(canonical);
    const auto uid = MountRegistry::uid(registry_.roots.size() - 1);
    registry_.selections[uid] = std::make_shared<const std::vector<std::string>>();
    return registry_.base_url + "/" + uid + "/";
  }

  std::vector<std::string> get_selection(const std::string& mount_uid) const {
    std::shared_ptr<const std::vector<std::string>> current;
    {
      std::lock_guard lock(mu_);
      auto k = registry_.index_of(mount_uid);
      if (!k) throw Error(ErrorCode::UnknownMount, "unknown mount '" + mount_uid + "'");
      current = registry_.selections.at(MountRegistry::uid(*k));
    }
    return *current;
  }

  void set_selection(const std::string& mount_uid, std::vector<std::string> ids) {
    auto next = std::make_shared<const std::vector<std::string>>(std::move(ids));
    std::lock_guard lock(mu_);
    auto k = registry_.index_of(mount_uid);
    if (!k) throw Error(ErrorCode::UnknownMount, "unknown mount '" + mount_uid + "'");
    registry_.selections[MountRegistry::uid(*k)] = std::move(next);
  }

  // Directory holding the browser viewer build; unset means /viewer/ 404s.
  void set_viewer_dir(fs::path dir) {
    std::lock_guard lock(mu_);
    viewer_dir_ = std::move(dir);
  }

 private:
  std::optional<fs::path> mount_root(const std::string& mount) const {
    std::lock_guard lock(mu_);
    auto k = registry_.index_of(mount);
    if (!k) return std::nullopt;
    return registry_.roots[*k];
  }

  static void send_file(const std::optional<fs::path>& root, const std::string& relpath, httplib::Response& res) {
    if (!root) {
      res.status = 404;
      return;
    }
    auto file = safe_join(*root, relpath);
    auto body = file ? read_file(*file) : std::nullopt;
    if (!body) {
      res.status = 404;
      return;
    }
    res.set_content(std::move(*body), content_type_for(*file));
  }

  void routes() {
    // Only SO_REUSEADDR: SO_REUSEPORT would let a second server share a taken port.
    http_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    http_.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

    http_.Get(R"(/(m\d+)/(.*))", [this](const httplib::Request& req, httplib::Response& res) {
      send_file(mount_root(req.matches[1]), req.matches[2], res);
    });

    http_.Get(R"(/viewer/(.*))", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<fs::path> root;
      {
        std::lock_guard lock(mu_);
        root = viewer_dir_;
      }
      send_file(root, req.matches[1], res);
    });

    http_.Get(R"(/api/selections/(m?\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        nlohmann::json body = get_selection(req.matches[1]);
        res.set_content(body.dump(), "application/json");
      } catch (const Error&) {
        res.status = 404;
      }
    });

    http_.Post(R"(/api/selections/(m?\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (!mount_root(req.matches[1])) {
        res.status = 404;
        return;
      }
      auto body = nlohmann::json::parse(req.body, nullptr, /*allow_exceptions=*/false);
      if (!body.is_array() ||
          !std::all_of(body.begin(), body.end(), [](const auto& v) { return v.is_string(); })) {
        res.status = 400;
        res.set_content(R"({"error":"expected a JSON array of strings"})", "application/json");
        return;
      }
      set_selection(req.matches[1], body.get<std::vector<std::string>>());
      res.status = 204;
    });

    http_.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, Range");
      res.status = 204;
    });
  }

  httplib::Server http_;
  std::thread thread_;
  mutable std::mutex mu_;
  MountRegistry registry_;
  std::optional<fs::path> viewer_dir_;
  std::string host_ = "127.0.0.1";
  int port_ = 0;
};

// The single server shared by every plot in the process.
inline Server& default_server() {
  static Server server;
  return server;
}

}  // namespace plotmorph::serve
