#pragma once

// Hermetic stand-in for the host plotting API: a matrix-plot namespace
// ("sc.pl") and a spatial-render namespace ("sdata.pl") whose functions
// only record that they ran and return a StaticFigure.

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "plotmorph/host.hpp"

namespace plotmorph::stub {

class StubHost {
 public:
  // Functions named in `omit` are left out, to model older host releases.
  explicit StubHost(const std::set<std::string>& omit = {}) {
    auto sc = std::make_shared<host::Namespace>();
    auto sd = std::make_shared<host::Namespace>();
    const std::vector<std::string> embed_tail = {"color", "title", "show", "ncols", "legend_loc", "size", "cmap"};

    add(*sc, "sc.pl", "embedding", {{"basis", "color", "title", "show", "ncols", "legend_loc", "size", "cmap"}, true}, omit);
    for (const auto* name : {"pca", "umap", "tsne"}) add(*sc, "sc.pl", name, {embed_tail, true}, omit);
    add(*sc, "sc.pl", "scatter", {{"x", "y", "color", "title", "show", "use_raw", "size"}, true}, omit);
    add(*sc, "sc.pl", "spatial", {{"color", "title", "show", "img_key", "spot_size", "basis"}, true}, omit);
    add(*sc, "sc.pl", "dotplot",
        {{"var_names", "groupby", "title", "show", "standard_scale", "dendrogram", "cmap"}, true}, omit);
    add(*sc, "sc.pl", "heatmap",
        {{"var_names", "groupby", "show", "standard_scale", "dendrogram", "swap_axes"}, true}, omit);
    add(*sc, "sc.pl", "violin", {{"keys", "groupby", "show", "stripplot", "log", "rotation"}, true}, omit);
    // Not supported interactively; must stay untouched.
    add(*sc, "sc.pl", "dendrogram", {{"groupby", "show"}, true}, omit);
    add(*sc, "sc.pl", "matrixplot", {{"var_names", "groupby", "show"}, true}, omit);

    add(*sd, "sdata.pl", "render_images", {{"element", "alpha", "cmap", "channel"}, false}, omit);
    add(*sd, "sdata.pl", "render_shapes", {{"element", "color", "fill_alpha", "palette", "outline"}, false}, omit);
    add(*sd, "sdata.pl", "render_points", {{"element", "color", "alpha", "palette", "size"}, false}, omit);
    add(*sd, "sdata.pl", "render_labels", {{"element", "fill_alpha", "color", "outline_alpha"}, false}, omit);

    namespaces_ = {{"sc.pl", sc}, {"sdata.pl", sd}};
  }

  const host::NamespaceMap& namespaces() const { return namespaces_; }
  host::Namespace& sc_pl() const { return *namespaces_.at("sc.pl"); }
  host::Namespace& sdata_pl() const { return *namespaces_.at("sdata.pl"); }

  // Number of times the original (static) function ran.
  int calls(const std::string& function) const {
    std::lock_guard lock(counts_->mu);
    auto it = counts_->by_name.find(function);
    return it == counts_->by_name.end() ? 0 : it->second;
  }

 private:
  struct Counts {
    std::mutex mu;
    std::map<std::string, int> by_name;
  };

  void add(host::Namespace& ns, const std::string& path, const std::string& name, host::Signature sig,
           const std::set<std::string>& omit) {
    if (omit.contains(name)) return;
    auto counts = counts_;
    auto signature = sig;
    ns.set(name, host::make_function(path + "." + name, std::move(sig),
                                     [counts, name, signature](const host::CallArgs& args) -> host::CallResult {
                                       {
                                         std::lock_guard lock(counts->mu);
                                         ++counts->by_name[name];
                                       }
                                       return host::StaticFigure{name, signature.bind(args)};
                                     }));
  }

  std::shared_ptr<Counts> counts_ = std::make_shared<Counts>();
  host::NamespaceMap namespaces_;
};

}  // namespace plotmorph::stub
