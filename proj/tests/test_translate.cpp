#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "golden_cases.hpp"
#include "plotmorph/translate.hpp"

namespace plotmorph::translate {
namespace {

using viewmodel::validate;

std::vector<std::string> names(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

void expect_well_formed(const TranslationResult& r) {
  EXPECT_TRUE(validate(r.config).empty()) << validate(r.config).front().message;
  EXPECT_TRUE(export_plan_closed(r));
}

std::size_t count(const ViewConfig& cfg, ComponentKind kind) { return cfg.views_of(kind).size(); }

std::shared_ptr<const AnnotatedMatrix> cells() {
  static const auto am = testing::clustered_cells(100);
  return am;
}

TEST(Registry, ThirteenEntries) {
  const auto& r = registry();
  EXPECT_EQ(r.size(), 13u);
  std::size_t sc = 0, sd = 0;
  for (const auto& s : r) {
    sc += s.namespace_path == "sc.pl";
    sd += s.namespace_path == "sdata.pl";
  }
  EXPECT_EQ(sc, 9u);
  EXPECT_EQ(sd, 4u);
  EXPECT_EQ(find_translator("dendrogram"), nullptr);
}

TEST(Registry, SupportedDocIsCurrent) {
  auto doc = testing::read_text(std::string(PLOTMORPH_DOCS_DIR) + "/supported.md");
  ASSERT_TRUE(doc.has_value());
  EXPECT_EQ(*doc, supported_markdown());
}

TEST(EmbeddingType, MappingRule) {
  EXPECT_EQ(embedding_type_for("X_pca"), "PCA");
  EXPECT_EQ(embedding_type_for("X_umap"), "UMAP");
  EXPECT_EQ(embedding_type_for("X_tsne"), "TSNE");
  EXPECT_EQ(embedding_type_for("X_custom7"), "custom7");
  EXPECT_EQ(embedding_type_for("spatial"), "spatial");
}

TEST(Dispatch, SupportedCallTranslates) {
  PlotCall call{"dotplot", cells(), {{"var_names", names({"CD3E", "LYZ", "NKG7"})}, {"groupby", std::string("louvain")}}};
  auto out = dispatch(call);
  ASSERT_TRUE(std::holds_alternative<TranslationResult>(out));
  expect_well_formed(std::get<TranslationResult>(out));
}

TEST(Dispatch, RegistryMissIsSilent) {
  auto out = dispatch({"dendrogram", cells(), {{"groupby", std::string("louvain")}}});
  ASSERT_TRUE(std::holds_alternative<PassThrough>(out));
  EXPECT_FALSE(std::get<PassThrough>(out).warning.has_value());
}

TEST(Dispatch, UnsupportedArgumentWarnsOnce) {
  auto out = dispatch({"embedding", cells(), {{"basis", std::string("X_pca")}, {"ncols", std::int64_t{3}}}});
  ASSERT_TRUE(std::holds_alternative<PassThrough>(out));
  const auto& w = std::get<PassThrough>(out).warning;
  ASSERT_TRUE(w.has_value());
  EXPECT_NE(w->find("ncols"), std::string::npos);
}

TEST(Dispatch, UnsupportedFeatureFallsBack) {
  auto out = dispatch({"umap", cells(), {{"color", std::string("n_counts")}}});
  ASSERT_TRUE(std::holds_alternative<PassThrough>(out));
  EXPECT_TRUE(std::get<PassThrough>(out).warning.has_value());
}

TEST(Dispatch, DataErrorsPropagate) {
  EXPECT_EQ(code_of([] { dispatch({"embedding", cells(), {{"basis", std::string("X_nope")}}}); }),
            ErrorCode::UnknownBasis);
}

TEST(Dispatch, Deterministic) {
  PlotCall call{"umap", cells(), {{"color", std::string("CD3E")}}};
  auto a = std::get<TranslationResult>(dispatch(call));
  auto b = std::get<TranslationResult>(dispatch(call));
  EXPECT_EQ(viewmodel::serialize(a.config), viewmodel::serialize(b.config));
  EXPECT_EQ(a.export_plan, b.export_plan);
}

TEST(Embedding, PcaLouvain) {
  auto r = translate_embedding(*cells(), "X_pca", std::string("louvain"));
  expect_well_formed(r);
  EXPECT_EQ(r.config.layout.size(), 2u);
  EXPECT_EQ(count(r.config, ComponentKind::Scatterplot), 1u);
  EXPECT_EQ(count(r.config, ComponentKind::ObsSetList), 1u);
  EXPECT_EQ(*r.config.view_value(0, CoordinationType::EmbeddingType), "PCA");
  EXPECT_EQ(*r.config.view_value(0, CoordinationType::ObsColorEncoding), "cellSetSelection");
  EXPECT_EQ(r.config.view_value(0, CoordinationType::ObsSetSelection)->size(), 3u);
}

TEST(Embedding, UmapWithoutColorTakesFullWidth) {
  auto r = translate_embedding(*cells(), "X_umap", std::nullopt);
  expect_well_formed(r);
  ASSERT_EQ(r.config.layout.size(), 1u);
  EXPECT_EQ(*r.config.view_value(0, CoordinationType::EmbeddingType), "UMAP");
  EXPECT_EQ(r.config.layout[0].grid, (viewmodel::GridRect{0, 0, 12, 12}));
  EXPECT_EQ(r.export_plan.size(), 1u);
}

TEST(Embedding, CustomBasisVerbatim) {
  auto am = *cells();
  am.embeddings["X_custom7"] = am.embeddings.at("X_pca");
  auto r = translate_embedding(am, "X_custom7", std::nullopt);
  EXPECT_EQ(*r.config.view_value(0, CoordinationType::EmbeddingType), "custom7");
}

TEST(Embedding, FeatureColor) {
  auto r = translate_embedding(*cells(), "X_umap", std::string("NKG7"));
  expect_well_formed(r);
  EXPECT_EQ(count(r.config, ComponentKind::FeatureList), 1u);
  EXPECT_EQ(*r.config.view_value(0, CoordinationType::FeatureSelection), Json::array({"NKG7"}));
  EXPECT_EQ(*r.config.view_value(0, CoordinationType::ObsColorEncoding), "geneSelection");
  bool has_matrix = false;
  for (const auto& e : r.export_plan) has_matrix |= e.role == "obsFeatureMatrix";
  EXPECT_TRUE(has_matrix);
}

TEST(Embedding, Errors) {
  auto am = *cells();
  EXPECT_EQ(code_of([&] { translate_embedding(am, "X_nope", std::nullopt); }), ErrorCode::UnknownBasis);
  am.obs_columns["CD3E"] = CategoricalColumn{std::vector<std::int32_t>(100, 0), {"x"}};
  EXPECT_EQ(code_of([&] { translate_embedding(am, "X_pca", std::string("CD3E")); }), ErrorCode::AmbiguousColor);
  EXPECT_EQ(code_of([&] { translate_embedding(am, "X_pca", std::string("nothing")); }), ErrorCode::UnknownFeature);
}

TEST(Dotplot, ThreeGenes) {
  auto r = translate_dotplot(*cells(), names({"CD3E", "MS4A1", "LYZ"}), "louvain");
  expect_well_formed(r);
  auto dots = r.config.views_of(ComponentKind::DotPlot);
  ASSERT_EQ(dots.size(), 1u);
  EXPECT_EQ(r.config.view_value(dots[0], CoordinationType::FeatureSelection)->size(), 3u);
  EXPECT_EQ(r.export_plan.size(), 2u);
}

TEST(Dotplot, Errors) {
  EXPECT_EQ(code_of([] { translate_dotplot(*cells(), {}, "louvain"); }), ErrorCode::UnknownFeature);
  EXPECT_EQ(code_of([] { translate_dotplot(*cells(), names({"CD3E"}), "n_counts"); }), ErrorCode::UnknownGroupColumn);
  EXPECT_EQ(code_of([] { translate_dotplot(*cells(), names({"XIST"}), "louvain"); }), ErrorCode::UnknownFeature);
}

TEST(Heatmap, UngroupedExportsSlice) {
  auto r = translate_heatmap(*cells(), names({"CD3E", "LYZ"}), std::nullopt);
  expect_well_formed(r);
  EXPECT_EQ(count(r.config, ComponentKind::Heatmap), 1u);
  ASSERT_EQ(r.export_plan.size(), 1u);
  const auto& src = std::get<MatrixSource>(r.export_plan[0].source);
  EXPECT_TRUE(src.include_x);
  EXPECT_EQ(src.features, names({"CD3E", "LYZ"}));
}

TEST(Heatmap, GroupedUsesAggregate) {
  auto r = translate_heatmap(*cells(), names({"CD3E", "LYZ"}), std::string("louvain"));
  expect_well_formed(r);
  ASSERT_EQ(r.export_plan.size(), 1u);
  EXPECT_EQ(std::get<AggregateSource>(r.export_plan[0].source).groupby, "louvain");
}

TEST(Violin, SummaryExport) {
  auto am = *cells();
  am.obs_columns["half"] = CategoricalColumn{{}, {"a", "b"}};
  for (std::size_t i = 0; i < 100; ++i) std::get<CategoricalColumn>(am.obs_columns["half"]).codes.push_back(i < 50 ? 0 : 1);
  auto r = translate_violin(am, names({"LYZ"}), "half");
  expect_well_formed(r);
  EXPECT_EQ(count(r.config, ComponentKind::Violin), 1u);
  ASSERT_EQ(r.export_plan.size(), 1u);
  EXPECT_EQ(std::get<GroupSummarySource>(r.export_plan[0].source).keys, names({"LYZ"}));
  EXPECT_EQ(code_of([&] { translate_violin(am, names({"n_counts"}), "half"); }), ErrorCode::Unsupported);
}

TEST(Scatter, ObsAxes) {
  auto r = translate_scatter(*cells(), "n_counts", "n_genes", std::nullopt);
  expect_well_formed(r);
  EXPECT_EQ(*r.config.view_value(0, CoordinationType::EmbeddingType), "scatter:n_counts:n_genes");
  EXPECT_EQ(code_of([] { translate_scatter(*cells(), "n_counts", "louvain", std::nullopt); }), ErrorCode::UnknownColumn);
}

SpatialLayerStack fresh_stack() { return {testing::visium_like(), {}}; }

TEST(Spatial, ImageAndFth1Spots) {
  auto r = testing::spatial_fth1();
  expect_well_formed(r);
  const auto& cfg = r.config;
  EXPECT_EQ(count(cfg, ComponentKind::Spatial), 1u);
  EXPECT_EQ(count(cfg, ComponentKind::LayerController), 1u);
  EXPECT_EQ(count(cfg, ComponentKind::FeatureList), 1u);
  auto sp = cfg.views_of(ComponentKind::Spatial)[0];
  EXPECT_EQ(*cfg.view_value(sp, CoordinationType::FeatureSelection), Json::array({"Fth1"}));
  const auto& layers = *cfg.view_value(sp, CoordinationType::SpatialLayers);
  ASSERT_EQ(layers.size(), 2u);
  EXPECT_EQ(layers[0]["kind"], "image");
  EXPECT_EQ(layers[1]["kind"], "shapes");
  EXPECT_EQ(layers[1]["color"], "Fth1");
  // 600 px tall image scaled into a 512 px frame, centred.
  EXPECT_DOUBLE_EQ(cfg.view_value(sp, CoordinationType::SpatialZoom)->get<double>(), 512.0 / 600.0);
  EXPECT_DOUBLE_EQ(cfg.view_value(sp, CoordinationType::SpatialTargetX)->get<double>(), 200.0);
  EXPECT_DOUBLE_EQ(cfg.view_value(sp, CoordinationType::SpatialTargetY)->get<double>(), 300.0);
  // Side panels: layer controller on top, then the feature list.
  auto lc = cfg.views_of(ComponentKind::LayerController)[0];
  auto fl = cfg.views_of(ComponentKind::FeatureList)[0];
  EXPECT_EQ(cfg.layout[sp].grid, (viewmodel::GridRect{0, 0, 8, 12}));
  EXPECT_EQ(cfg.layout[lc].grid, (viewmodel::GridRect{8, 0, 4, 6}));
  EXPECT_EQ(cfg.layout[fl].grid, (viewmodel::GridRect{8, 6, 4, 6}));
}

TEST(Spatial, LabelsOnly) {
  auto stack = push_spatial_layer(fresh_stack(), ElementKind::Labels, std::nullopt, {});
  auto r = translate_spatial_show(stack);
  expect_well_formed(r);
  EXPECT_EQ(r.config.layout.size(), 2u);
  EXPECT_EQ(count(r.config, ComponentKind::FeatureList), 0u);
  EXPECT_EQ(r.export_plan[0].kind, FileKind::Labels);
}

TEST(Spatial, SmallExtentKeepsUnitZoom) {
  SpatialLayerStack small{testing::visium_like(300, 200), {}};
  auto stack = push_spatial_layer(small, ElementKind::Points, std::string("transcripts"), {});
  auto r = translate_spatial_show(stack);
  EXPECT_EQ(*r.config.view_value(0, CoordinationType::SpatialZoom), 1.0);
}

TEST(Spatial, CategoricalColorAndSharedElement) {
  LayerStyle style;
  style.color = "region";
  auto stack = push_spatial_layer(fresh_stack(), ElementKind::Shapes, std::nullopt, style);
  stack = push_spatial_layer(stack, ElementKind::Shapes, std::string("spots"), {});
  auto r = translate_spatial_show(stack);
  expect_well_formed(r);
  EXPECT_EQ(count(r.config, ComponentKind::ObsSetList), 1u);
  EXPECT_EQ(r.export_plan.size(), 2u);  // spots once, plus the obs sets
}

TEST(Spatial, Errors) {
  EXPECT_EQ(code_of([] { translate_spatial_show(fresh_stack()); }), ErrorCode::EmptyStack);
  EXPECT_EQ(code_of([] { push_spatial_layer(fresh_stack(), ElementKind::Image, std::string("lowres"), {}); }),
            ErrorCode::UnknownElement);
  auto shapes = push_spatial_layer(fresh_stack(), ElementKind::Shapes, std::nullopt, {});
  EXPECT_EQ(code_of([&] { push_spatial_layer(shapes, ElementKind::Image, std::nullopt, {}); }), ErrorCode::LayerOrder);
  LayerStyle bad;
  bad.color = "Gfap";
  EXPECT_EQ(code_of([&] { push_spatial_layer(fresh_stack(), ElementKind::Shapes, std::nullopt, bad); }),
            ErrorCode::UnknownFeature);
}

TEST(Spatial, ChainedDispatchAccumulates) {
  host::DataHandle sd = testing::visium_like();
  auto first = dispatch({"render_images", sd, {{"element", std::string("hires")}}});
  auto stack = std::get<std::shared_ptr<const SpatialLayerStack>>(first);
  auto second = dispatch({"render_shapes", stack, {{"color", std::string("Fth1")}, {"fill_alpha", 0.5}}});
  auto out = std::get<std::shared_ptr<const SpatialLayerStack>>(second);
  ASSERT_EQ(out->layers.size(), 2u);
  EXPECT_EQ(out->layers[1].style.opacity, 0.5);
  EXPECT_EQ(stack->layers.size(), 1u);  // earlier stacks are not mutated
}

TEST(Golden, EmbeddingPcaLouvain) {
  auto r = testing::embedding_pca_louvain();
  EXPECT_TRUE(testing::matches_golden("embedding_pca_louvain.json", viewmodel::serialize(r.config)));
}

TEST(Golden, SpatialFth1) {
  auto r = testing::spatial_fth1();
  EXPECT_TRUE(testing::matches_golden("spatial_fth1.json", viewmodel::serialize(r.config)));
}

}  // namespace
}  // namespace plotmorph::translate
