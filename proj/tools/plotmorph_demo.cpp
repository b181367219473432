// Runs a few plotting calls against the bundled stub host with plotmorph
// installed and prints the viewer URLs.
//
//   plotmorph-demo [--serve-seconds N] [--viewer-dir DIR]

#include <chrono>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "plotmorph/plotmorph.hpp"
#include "plotmorph/stub_host.hpp"

using namespace plotmorph;

namespace {

void report(const char* label, const host::CallResult& out) {
  if (auto* h = std::get_if<std::shared_ptr<const InteractivePlotHandle>>(&out)) {
    std::cout << label << ": " << (*h)->viewer_url << '\n';
  } else if (auto* s = std::get_if<host::StaticFigure>(&out)) {
    std::cout << label << ": static figure from " << s->function << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plotmorph demo against a stub host"};
  int serve_seconds = 0;
  std::string viewer_dir;
  app.add_option("--serve-seconds", serve_seconds, "Keep serving this long after the calls");
  app.add_option("--viewer-dir", viewer_dir, "Directory with the built viewer assets");
  CLI11_PARSE(app, argc, argv);

  stub::StubHost host;
  std::cout << "patched " << install(host.namespaces()) << " functions\n";
  if (!viewer_dir.empty()) serve::default_server().set_viewer_dir(viewer_dir);

  auto cells = testing::clustered_cells(300);
  host::DataHandle adata = cells;

  report("umap", host.sc_pl()("umap", {adata, {}, {{"color", std::string("louvain")}}}));
  report("dotplot", host.sc_pl()("dotplot", {adata, {}, {{"var_names", std::vector<std::string>{"CD3E", "MS4A1", "LYZ"}},
                                                          {"groupby", std::string("louvain")}}}));
  report("violin", host.sc_pl()("violin", {adata, {}, {{"keys", std::vector<std::string>{"NKG7"}},
                                                        {"groupby", std::string("louvain")}}}));
  report("dendrogram (not supported)", host.sc_pl()("dendrogram", {adata, {}, {{"groupby", std::string("louvain")}}}));

  host::DataHandle sdata = testing::visium_like();
  auto img = host.sdata_pl()("render_images", {sdata, {}, {{"element", std::string("hires")}}});
  auto stack = std::get<std::shared_ptr<const SpatialLayerStack>>(img);
  auto shapes = host.sdata_pl()("render_shapes", {stack, {}, {{"element", std::string("spots")}, {"color", std::string("Fth1")}}});
  report("spatial", show(*std::get<std::shared_ptr<const SpatialLayerStack>>(shapes), "Fth1"));

  if (serve_seconds > 0) {
    std::cout << "serving on " << serve::default_server().base_url() << " for " << serve_seconds << "s\n";
    std::this_thread::sleep_for(std::chrono::seconds(serve_seconds));
  }
  return 0;
}
