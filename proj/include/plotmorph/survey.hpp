#pragma once

// Usage survey of host plotting functions over a code-search API: one query
// per function, disk cache keyed by query hash, exponential backoff on
// rate limiting.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "plotmorph/error.hpp"

namespace plotmorph::survey {

namespace fs = std::filesystem;

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Runs one code search for `query` and returns the raw response. The body
// of a 200 response is a JSON object with a "total_count" field.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse search(const std::string& query) = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct SurveyOptions {
  std::string namespace_path = "sc.pl";
  fs::path cache_dir;  // empty disables caching
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{1000};
  Sleeper sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
};

struct SurveyRow {
  std::string function;
  std::uint64_t match_count = 0;
  std::string query;
  bool operator==(const SurveyRow&) const = default;
};

struct SurveyResult {
  std::vector<SurveyRow> rows;  // count descending, then name ascending
  std::string fetched_at;
  std::size_t cache_hits = 0;
  std::size_t transport_calls = 0;
};

inline std::string query_for(const std::string& namespace_path, const std::string& function) {
  return namespace_path + "." + function + "(";
}

// FNV-1a, stable across platforms and runs.
inline std::string cache_key(const std::string& query) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : query) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

inline std::uint64_t parse_total_count(const std::string& body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (!j.is_object() || !j.contains("total_count") || !j["total_count"].is_number_integer() ||
      j["total_count"].get<std::int64_t>() < 0) {
    throw Error(ErrorCode::TransportError, "response has no non-negative total_count");
  }
  return j["total_count"].get<std::uint64_t>();
}

namespace detail {

inline std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

inline bool read_cache(const fs::path& file, std::string& body) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  body = std::move(ss).str();
  return true;
}

// 403 and 429 are retried after 1x, 2x, 4x ... the initial backoff.
inline std::string fetch(Transport& transport, const std::string& query, const SurveyOptions& options,
                         std::size_t& calls) {
  auto delay = options.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    ++calls;
    auto response = transport.search(query);
    if (response.status == 200) return response.body;
    if (response.status != 403 && response.status != 429) {
      throw Error(ErrorCode::TransportError, "search for '" + query + "' returned HTTP " + std::to_string(response.status));
    }
    if (attempt >= options.max_retries) {
      throw Error(ErrorCode::RateLimited, "search for '" + query + "' still rate limited after " +
                                              std::to_string(options.max_retries) + " retries");
    }
    if (options.sleep) options.sleep(delay);
    delay *= 2;
  }
}

}  // namespace detail

inline SurveyResult survey(const std::vector<std::string>& functions, Transport& transport,
                           const SurveyOptions& options = {}) {
  if (functions.empty()) throw Error(ErrorCode::InvalidArgument, "no functions to survey");
  if (!options.cache_dir.empty()) {
    std::error_code ec;
    fs::create_directories(options.cache_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create cache dir " + options.cache_dir.string());
  }

  SurveyResult result;
  result.fetched_at = detail::utc_now();
  for (const auto& fn : functions) {
    const auto query = query_for(options.namespace_path, fn);
    const auto file = options.cache_dir.empty() ? fs::path{} : options.cache_dir / (cache_key(query) + ".json");
    std::string body;
    if (!file.empty() && detail::read_cache(file, body)) {
      ++result.cache_hits;
    } else {
      body = detail::fetch(transport, query, options, result.transport_calls);
      parse_total_count(body);  // never cache a body we cannot read
      if (!file.empty()) {
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        out << body;
      }
    }
    result.rows.push_back({fn, parse_total_count(body), query});
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const SurveyRow& a, const SurveyRow& b) {
    if (a.match_count != b.match_count) return a.match_count > b.match_count;
    return a.function < b.function;
  });
  return result;
}

enum class ReportFormat { Csv, Markdown };

inline std::string render_report(const SurveyResult& result, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Csv) {
    out = "function,match_count\n";
    for (const auto& r : result.rows) out += r.function + "," + std::to_string(r.match_count) + "\n";
  } else {
    out = "| function | match_count |\n|---|---:|\n";
    for (const auto& r : result.rows) out += "| " + r.function + " | " + std::to_string(r.match_count) + " |\n";
  }
  return out;
}

}  // namespace plotmorph::survey
