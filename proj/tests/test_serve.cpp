#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include <httplib.h>

#include "fixtures.hpp"
#include "plotmorph/serve.hpp"

namespace plotmorph::serve {
namespace {

using testing::TempDir;

void write(const fs::path& p, const std::string& bytes) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << bytes;
}

// One started server with a single mounted directory.
class ServeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    base_ = server_.start();
    write(dir_ / "eight.bin", "01234567");
    write(dir_ / "A" / "config.json", R"({"version":"0.1.0"})");
    std::string blob;
    testing::Rng rng(1);
    for (int i = 0; i < 100000; ++i) blob.push_back(static_cast<char>(rng.below(256)));
    write(dir_ / "A" / "X" / "c0_0.bin", blob);
    prefix_ = server_.register_dir(dir_.path());
    client_ = std::make_unique<httplib::Client>(base_);
  }

  Server server_;
  TempDir dir_;
  std::string base_, prefix_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServeTest, MountPrefix) {
  EXPECT_EQ(prefix_, base_ + "/m0/");
  EXPECT_EQ(server_.register_dir(dir_.path()), prefix_);
  TempDir other;
  EXPECT_EQ(server_.register_dir(other.path()), base_ + "/m1/");
}

TEST_F(ServeTest, ServesExactBytes) {
  for (const auto* rel : {"eight.bin", "A/config.json", "A/X/c0_0.bin"}) {
    auto res = client_->Get(std::string("/m0/") + rel);
    ASSERT_TRUE(res) << rel;
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, *read_file(dir_ / rel)) << rel;
  }
  auto json = client_->Get("/m0/A/config.json");
  EXPECT_EQ(json->get_header_value("Content-Type"), "application/json");
}

TEST_F(ServeTest, UnknownPathsAre404) {
  for (const auto* path : {"/m0/missing.bin", "/m7/eight.bin", "/nothing", "/m0/../eight.bin", "/m0/A"}) {
    auto res = client_->Get(path);
    ASSERT_TRUE(res) << path;
    EXPECT_EQ(res->status, 404) << path;
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*") << path;
  }
}

TEST_F(ServeTest, ByteRange) {
  auto res = client_->Get("/m0/eight.bin", {{"Range", "bytes=0-3"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 206);
  EXPECT_EQ(res->body, "0123");
  EXPECT_EQ(res->get_header_value("Content-Range"), "bytes 0-3/8");
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");

  auto tail = client_->Get("/m0/eight.bin", {{"Range", "bytes=6-"}});
  EXPECT_EQ(tail->status, 206);
  EXPECT_EQ(tail->body, "67");

  auto bad = client_->Get("/m0/eight.bin", {{"Range", "bytes=20-30"}});
  EXPECT_EQ(bad->status, 416);
}

TEST_F(ServeTest, CorsOnEveryResponse) {
  auto ok = client_->Get("/m0/eight.bin");
  EXPECT_EQ(ok->get_header_value("Access-Control-Allow-Origin"), "*");
  auto sel = client_->Get("/api/selections/m0");
  EXPECT_EQ(sel->get_header_value("Access-Control-Allow-Origin"), "*");
  auto pre = client_->Options("/api/selections/m0");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
  EXPECT_EQ(pre->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_NE(pre->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);
}

TEST_F(ServeTest, SelectionRoundTrip) {
  auto empty = client_->Get("/api/selections/m0");
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->status, 200);
  EXPECT_EQ(empty->body, "[]");

  const std::string ids = R"(["cell_3","cell_1","cell_é"])";
  auto post = client_->Post("/api/selections/m0", ids, "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 204);
  auto back = client_->Get("/api/selections/m0");
  EXPECT_EQ(nlohmann::json::parse(back->body), nlohmann::json::parse(ids));
  EXPECT_EQ(server_.get_selection("m0"), (std::vector<std::string>{"cell_3", "cell_1", "cell_\xc3\xa9"}));

  server_.set_selection("m0", {"x"});
  EXPECT_EQ(client_->Get("/api/selections/0")->body, R"(["x"])");
}

TEST_F(ServeTest, SelectionErrors) {
  EXPECT_EQ(client_->Post("/api/selections/m0", "{\"a\":1}", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/selections/m0", "[1,2]", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/selections/m0", "[", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/selections/m9", "[]", "application/json")->status, 404);
  EXPECT_EQ(client_->Get("/api/selections/m9")->status, 404);
  try {
    server_.get_selection("m9");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownMount);
  }
}

TEST_F(ServeTest, StartIsIdempotent) {
  EXPECT_EQ(server_.start(), base_);
  EXPECT_TRUE(server_.started());
  EXPECT_EQ(server_.bind_host(), "127.0.0.1");
  EXPECT_EQ(base_, "http://127.0.0.1:" + std::to_string(server_.port()));
}

TEST_F(ServeTest, TakenPortIsReported) {
  Server second;
  try {
    second.start(server_.port());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PortInUse);
  }
}

TEST_F(ServeTest, ViewerAssets) {
  EXPECT_EQ(client_->Get("/viewer/index.html")->status, 404);
  TempDir viewer;
  write(viewer / "index.html", "<html></html>");
  server_.set_viewer_dir(viewer.path());
  auto res = client_->Get("/viewer/index.html?config=x");
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html></html>");
  EXPECT_EQ(res->get_header_value("Content-Type"), "text/html");
}

TEST(ServerLifecycle, RegisterBeforeStart) {
  Server s;
  TempDir d;
  try {
    s.register_dir(d.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStarted);
  }
  EXPECT_FALSE(s.started());
}

TEST(ServerLifecycle, RefusesNonLoopbackHost) {
  ::setenv("PLOTMORPH_HOST", "0.0.0.0", 1);
  Server s;
  EXPECT_THROW(s.start(), Error);
  ::unsetenv("PLOTMORPH_HOST");
  EXPECT_NO_THROW(s.start());
}

TEST(ServerLifecycle, PortFromEnvironment) {
  Server probe;
  probe.start();
  const int taken = probe.port();
  ::setenv("PLOTMORPH_PORT", std::to_string(taken).c_str(), 1);
  Server s;
  EXPECT_THROW(s.start(), Error);
  ::unsetenv("PLOTMORPH_PORT");
}

TEST(Helpers, SafeJoin) {
  TempDir root;
  write(root / "a" / "b.bin", "x");
  EXPECT_EQ(safe_join(root.path(), "a/b.bin"), root / "a" / "b.bin");
  EXPECT_FALSE(safe_join(root.path(), "a").has_value());
  EXPECT_FALSE(safe_join(root.path(), "a/../a/b.bin").has_value());
  EXPECT_FALSE(safe_join(root.path(), "../etc/passwd").has_value());
  EXPECT_FALSE(safe_join(root.path(), "/etc/passwd").has_value());
}

TEST(Helpers, Loopback) {
  EXPECT_TRUE(is_loopback_host("127.0.0.1"));
  EXPECT_TRUE(is_loopback_host("localhost"));
  EXPECT_TRUE(is_loopback_host("::1"));
  EXPECT_FALSE(is_loopback_host("0.0.0.0"));
  EXPECT_FALSE(is_loopback_host("192.168.1.4"));
}

}  // namespace
}  // namespace plotmorph::serve
