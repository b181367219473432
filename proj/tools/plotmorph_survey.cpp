// plotmorph-survey: count code-search matches for host plotting functions.
//
//   plotmorph-survey --functions dotplot,umap,violin --namespace sc.pl \
//       --format markdown --cache-dir .cache [--live | --mock counts.json]
//
// Without --live or --mock only cached responses are used.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "plotmorph/survey.hpp"

namespace {

using plotmorph::survey::HttpResponse;

// Answers from a JSON file: {"sc.pl.dotplot(": 50, ...} keyed by query, or by
// bare function name. An object value {"status": 429} simulates an error.
class MockTransport : public plotmorph::survey::Transport {
 public:
  MockTransport(nlohmann::json table, std::string namespace_path)
      : table_(std::move(table)), namespace_path_(std::move(namespace_path)) {}

  HttpResponse search(const std::string& query) override {
    auto entry = lookup(query);
    if (entry.is_number_integer()) {
      return {200, nlohmann::json{{"total_count", entry.get<long long>()}}.dump()};
    }
    if (entry.is_object() && entry.contains("status")) return {entry["status"].get<int>(), "{}"};
    return {404, "{}"};
  }

 private:
  nlohmann::json lookup(const std::string& query) const {
    if (table_.contains(query)) return table_[query];
    const auto prefix = namespace_path_ + ".";
    if (query.rfind(prefix, 0) == 0 && query.back() == '(') {
      auto fn = query.substr(prefix.size(), query.size() - prefix.size() - 1);
      if (table_.contains(fn)) return table_[fn];
    }
    return nullptr;
  }

  nlohmann::json table_;
  std::string namespace_path_;
};

class CacheOnlyTransport : public plotmorph::survey::Transport {
 public:
  HttpResponse search(const std::string& query) override {
    throw plotmorph::Error(plotmorph::ErrorCode::TransportError,
                           "'" + query + "' is not cached; rerun with --live or --mock");
  }
};

#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
// GitHub code search; the token comes from SURVEY_API_TOKEN.
class LiveTransport : public plotmorph::survey::Transport {
 public:
  LiveTransport() : client_("https://api.github.com") {
    client_.set_follow_location(true);
    httplib::Headers headers = {{"Accept", "application/vnd.github+json"}, {"User-Agent", "plotmorph-survey"}};
    if (const char* token = std::getenv("SURVEY_API_TOKEN"); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    client_.set_default_headers(headers);
  }

  HttpResponse search(const std::string& query) override {
    httplib::Params params = {{"q", "\"" + query + "\""}, {"per_page", "1"}};
    auto res = client_.Get("/search/code", params, httplib::Headers{});
    if (!res) {
      throw plotmorph::Error(plotmorph::ErrorCode::TransportError, "request failed: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
  }

 private:
  httplib::Client client_;
};
#endif

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Survey host plotting-function usage through a code-search API"};
  std::string functions, namespace_path = "sc.pl", format = "markdown", cache_dir = ".cache", mock_file;
  bool live = false;
  app.add_option("--functions", functions, "Comma-separated function names")->required();
  app.add_option("--namespace", namespace_path, "Namespace prefix used in the query")->capture_default_str();
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "markdown"}))->capture_default_str();
  app.add_option("--cache-dir", cache_dir, "Response cache directory")->capture_default_str();
  auto* live_flag = app.add_flag("--live", live, "Query the live API (token from SURVEY_API_TOKEN)");
  app.add_option("--mock", mock_file, "JSON file of canned counts instead of the network")->excludes(live_flag);
  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<plotmorph::survey::Transport> transport;
  if (!mock_file.empty()) {
    std::ifstream in(mock_file);
    auto table = nlohmann::json::parse(in, nullptr, false);
    if (!in || table.is_discarded() || !table.is_object()) {
      std::cerr << "error: cannot read mock table " << mock_file << '\n';
      return 1;
    }
    transport = std::make_unique<MockTransport>(std::move(table), namespace_path);
  } else if (live) {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
    transport = std::make_unique<LiveTransport>();
#else
    std::cerr << "error: built without TLS support; --live unavailable\n";
    return 1;
#endif
  } else {
    transport = std::make_unique<CacheOnlyTransport>();
  }

  plotmorph::survey::SurveyOptions options;
  options.namespace_path = namespace_path;
  options.cache_dir = cache_dir;
  if (!mock_file.empty()) options.sleep = nullptr;  // canned responses never recover by waiting

  try {
    auto result = plotmorph::survey::survey(split_csv(functions), *transport, options);
    std::cout << plotmorph::survey::render_report(
        result, format == "csv" ? plotmorph::survey::ReportFormat::Csv : plotmorph::survey::ReportFormat::Markdown);
    std::cerr << "match_count = total code matches per query; fetched " << result.fetched_at << "; "
              << result.cache_hits << " cache hits, " << result.transport_calls << " requests\n";
  } catch (const plotmorph::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == plotmorph::ErrorCode::RateLimited ? 2 : 1;
  }
  return 0;
}
