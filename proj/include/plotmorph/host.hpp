#pragma once

// Dynamic call model for the host plotting API: namespaces of named
// callables that can be looked up and rebound at runtime.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "plotmorph/data.hpp"
#include "plotmorph/error.hpp"

namespace plotmorph {

struct SpatialLayerStack;
struct InteractivePlotHandle;

namespace host {

using ArgValue =
    std::variant<std::monostate, bool, std::int64_t, double, std::string, std::vector<std::string>>;
using KwArgs = std::map<std::string, ArgValue>;

using DataHandle = std::variant<std::shared_ptr<const AnnotatedMatrix>,
                                std::shared_ptr<const SpatialElements>,
                                std::shared_ptr<const SpatialLayerStack>>;

struct CallArgs {
  DataHandle data;
  std::vector<ArgValue> positional;
  KwArgs kwargs;
};

// What a static host function hands back.
struct StaticFigure {
  std::string function;
  KwArgs args;
};

using CallResult = std::variant<StaticFigure, std::shared_ptr<const InteractivePlotHandle>,
                                std::shared_ptr<const SpatialLayerStack>>;

// Parameter names after the leading data argument, in positional order.
struct Signature {
  std::vector<std::string> params;
  bool var_kwargs = false;

  // True when every call accepted by `other` is accepted by *this.
  bool accepts_all_of(const Signature& other) const {
    if (other.var_kwargs && !var_kwargs) return false;
    if (params.size() < other.params.size()) return false;
    for (std::size_t i = 0; i < other.params.size(); ++i) {
      if (params[i] != other.params[i]) return false;
    }
    return true;
  }

  // Maps positional arguments onto names and merges keywords.
  KwArgs bind(const CallArgs& args) const {
    KwArgs bound;
    if (args.positional.size() > params.size()) {
      throw Error(ErrorCode::InvalidArgument, "too many positional arguments");
    }
    for (std::size_t i = 0; i < args.positional.size(); ++i) bound[params[i]] = args.positional[i];
    for (const auto& [name, value] : args.kwargs) {
      bool known = std::find(params.begin(), params.end(), name) != params.end();
      if (!known && !var_kwargs) {
        throw Error(ErrorCode::InvalidArgument, "unexpected keyword argument '" + name + "'");
      }
      if (!bound.emplace(name, value).second) {
        throw Error(ErrorCode::InvalidArgument, "multiple values for argument '" + name + "'");
      }
    }
    return bound;
  }
};

struct HostFunction {
  std::string qualname;
  Signature signature;
  std::function<CallResult(const CallArgs&)> body;
};

// Identity of a callable is the identity of this pointer.
using Callable = std::shared_ptr<const HostFunction>;

inline Callable make_function(std::string qualname, Signature signature,
                              std::function<CallResult(const CallArgs&)> body) {
  return std::make_shared<const HostFunction>(
      HostFunction{std::move(qualname), std::move(signature), std::move(body)});
}

inline CallResult call(const Callable& fn, const CallArgs& args) {
  fn->signature.bind(args);  // reject calls the signature would reject
  return fn->body(args);
}

// A mutable attribute table, the analogue of a module object.
class Namespace {
 public:
  Callable get(const std::string& name) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : it->second;
  }

  void set(const std::string& name, Callable fn) {
    std::unique_lock lock(mu_);
    entries_[name] = std::move(fn);
  }

  bool erase(const std::string& name) {
    std::unique_lock lock(mu_);
    return entries_.erase(name) > 0;
  }

  std::vector<std::string> names() const {
    std::shared_lock lock(mu_);
    std::vector<std::string> out;
    for (const auto& [name, fn] : entries_) out.push_back(name);
    return out;
  }

  // Convenience for call sites: resolves then invokes.
  CallResult operator()(const std::string& name, CallArgs args) const {
    auto fn = get(name);
    if (!fn) throw Error(ErrorCode::InvalidArgument, "namespace has no attribute '" + name + "'");
    return call(fn, args);
  }

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, Callable> entries_;
};

// Dotted namespace path ("sc.pl") -> namespace handle.
using NamespaceMap = std::map<std::string, std::shared_ptr<Namespace>>;

// Splits "sc.pl.dotplot" into {"sc.pl", "dotplot"}.
inline std::pair<std::string, std::string> split_target(const std::string& target_path) {
  auto dot = target_path.rfind('.');
  if (dot == std::string::npos) return {"", target_path};
  return {target_path.substr(0, dot), target_path.substr(dot + 1)};
}

inline Callable resolve(const NamespaceMap& namespaces, const std::string& target_path) {
  auto [ns_path, name] = split_target(target_path);
  auto it = namespaces.find(ns_path);
  if (it == namespaces.end() || !it->second) return nullptr;
  return it->second->get(name);
}

// Typed argument access used by translators.
template <typename T>
std::optional<T> get(const KwArgs& args, const std::string& name) {
  auto it = args.find(name);
  if (it == args.end() || std::holds_alternative<std::monostate>(it->second)) return std::nullopt;
  if (const auto* v = std::get_if<T>(&it->second)) return *v;
  throw Error(ErrorCode::InvalidArgument, "argument '" + name + "' has the wrong type");
}

// Accepts either a single string or a list of strings.
inline std::optional<std::vector<std::string>> get_names(const KwArgs& args, const std::string& name) {
  auto it = args.find(name);
  if (it == args.end() || std::holds_alternative<std::monostate>(it->second)) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(&it->second)) return std::vector<std::string>{*s};
  if (const auto* v = std::get_if<std::vector<std::string>>(&it->second)) return *v;
  throw Error(ErrorCode::InvalidArgument, "argument '" + name + "' must be a name or list of names");
}

}  // namespace host
}  // namespace plotmorph
