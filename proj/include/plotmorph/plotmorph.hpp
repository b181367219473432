#pragma once

// Entry point. One call to install() against the host namespaces turns
// every supported plotting function interactive:
//
//   plotmorph::install(host.namespaces());
//   auto out = host.sc_pl()("dotplot", {adata, {}, {{"var_names", genes}, {"groupby", "louvain"}}});
//
// Set PLOTMORPH_DISABLED=1 to build the patches without applying them.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include <unistd.h>

#include "plotmorph/bridge.hpp"
#include "plotmorph/error.hpp"
#include "plotmorph/host.hpp"
#include "plotmorph/intercept.hpp"
#include "plotmorph/serve.hpp"
#include "plotmorph/translate.hpp"

namespace plotmorph {

namespace fs = std::filesystem;

using WarningHandler = std::function<void(const std::string&)>;

struct Runtime {
  std::recursive_mutex mu;
  intercept::PatchSet patches;
  bool installed = false;
  WarningHandler on_warning = [](const std::string& w) { std::cerr << "plotmorph: " << w << '\n'; };
  fs::path work_root = fs::temp_directory_path() / ("plotmorph-" + std::to_string(::getpid()));
  serve::Server* server = &serve::default_server();
  bridge::EnvironmentProbe probe;
};

inline Runtime& runtime() {
  static Runtime rt;
  return rt;
}

inline void warn(const std::string& message) {
  WarningHandler handler;
  {
    std::lock_guard lock(runtime().mu);
    handler = runtime().on_warning;
  }
  if (handler) handler(message);
}

inline void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(runtime().mu);
  runtime().on_warning = std::move(handler);
}

// Export plan -> served directory -> handle; also pushes the inline frame
// to the notebook display hook when one is installed.
inline std::shared_ptr<const InteractivePlotHandle> present(const translate::TranslationResult& result,
                                                            const bridge::DataSources& sources) {
  for (const auto& w : result.warnings) warn(w);
  serve::Server* server;
  fs::path work_root;
  bridge::EnvironmentProbe probe;
  {
    std::lock_guard lock(runtime().mu);
    server = runtime().server;
    work_root = runtime().work_root;
    probe = runtime().probe;
  }
  auto handle = std::make_shared<const InteractivePlotHandle>(bridge::materialize(result, sources, *server, work_root));
  if (bridge::detect_environment(probe) == bridge::Environment::Notebook) {
    if (auto hook = bridge::display_hook()) hook(bridge::display(*handle, bridge::Environment::Notebook));
  }
  return handle;
}

// Finishes a chain of spatial render calls.
inline std::shared_ptr<const InteractivePlotHandle> show(const SpatialLayerStack& stack,
                                                         const std::string& title = "spatial") {
  return present(translate::translate_spatial_show(stack, title), bridge::DataSources{stack.data->table, stack.data});
}

// Signature-identical substitute for `original`: translated calls return an
// InteractivePlotHandle (or a layer stack for spatial renders); everything
// else runs the original unchanged.
inline host::Callable make_interactive(const std::string& target_path, const host::Callable& original) {
  const auto function = host::split_target(target_path).second;
  return host::make_function(
      target_path, original->signature, [function, original](const host::CallArgs& args) -> host::CallResult {
        translate::PlotCall call{function, args.data, original->signature.bind(args)};
        auto outcome = translate::dispatch(call);
        if (auto* pass = std::get_if<translate::PassThrough>(&outcome)) {
          if (pass->warning) warn(*pass->warning);
          return original->body(args);
        }
        if (auto* stack = std::get_if<std::shared_ptr<const SpatialLayerStack>>(&outcome)) return *stack;
        return present(std::get<translate::TranslationResult>(outcome), bridge::sources_of(args.data));
      });
}

inline intercept::PatchSet build_default_patchset(const host::NamespaceMap& namespaces) {
  return intercept::build_patchset(namespaces, intercept::default_targets(), make_interactive);
}

inline bool disabled_by_env() {
  const char* v = std::getenv("PLOTMORPH_DISABLED");
  return v && std::string(v) == "1";
}

// The one line a user adds. Replaces any earlier installation (restoring
// its originals first). Returns the number of functions patched.
inline std::size_t install(const host::NamespaceMap& namespaces) {
  auto& rt = runtime();
  std::lock_guard lock(rt.mu);
  if (rt.installed) intercept::deactivate(rt.patches);
  rt.patches = build_default_patchset(namespaces);
  rt.installed = true;
  for (const auto& w : rt.patches.warnings()) warn(w);
  if (disabled_by_env()) return 0;
  auto result = intercept::activate(rt.patches);
  for (const auto& r : result.vanished) warn(r.message);
  return result.count;
}

inline std::size_t enable() {
  auto& rt = runtime();
  std::lock_guard lock(rt.mu);
  auto result = intercept::activate(rt.patches);
  for (const auto& r : result.vanished) warn(r.message);
  return result.count;
}

inline std::size_t disable() {
  auto& rt = runtime();
  std::lock_guard lock(rt.mu);
  auto result = intercept::deactivate(rt.patches);
  for (const auto& r : result.vanished) warn(r.message);
  return result.count;
}

inline bool is_enabled() {
  auto& rt = runtime();
  std::lock_guard lock(rt.mu);
  return rt.installed && !rt.patches.records().empty() && rt.patches.state() == intercept::PatchState::Active;
}

// Runs body against the original static functions. Main thread only.
template <typename Body>
auto run_static(Body&& body) {
  auto& rt = runtime();
  std::lock_guard lock(rt.mu);
  return intercept::run_static(rt.patches, std::forward<Body>(body));
}

}  // namespace plotmorph
