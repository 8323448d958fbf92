#include "facadex/dataset/fetch.hpp"

#include <curl/curl.h>

#include <cstdlib>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>

#include "facadex/error.hpp"
#include "facadex/rdf/term.hpp"
#include "facadex/util/strings.hpp"

namespace facadex::dataset {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int hi = hex_digit(s[i + 1]);
      int lo = hex_digit(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

FetchedResource read_file(std::string_view location, const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec))
    throw FetchError(std::string(location), "is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FetchError(std::string(location), "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FetchError(std::string(location), "read error on " + path.string());
  FetchedResource r;
  r.bytes = std::move(buf).str();
  r.effective_location = std::string(location);
  r.fetch_time = std::chrono::system_clock::now();
  return r;
}

size_t write_body(char* data, size_t size, size_t nmemb, void* userp) {
  static_cast<std::string*>(userp)->append(data, size * nmemb);
  return size * nmemb;
}

struct CurlDeleter {
  void operator()(CURL* c) const { curl_easy_cleanup(c); }
};

FetchedResource read_http(std::string_view location, const FetchOptions& options) {
  static std::once_flag init;
  std::call_once(init, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });

  std::unique_ptr<CURL, CurlDeleter> curl(curl_easy_init());
  if (!curl) throw FetchError(std::string(location), "cannot initialise HTTP client");
  std::string url(location);
  std::string body;
  char errbuf[CURL_ERROR_SIZE] = {0};
  CURL* c = curl.get();
  curl_easy_setopt(c, CURLOPT_URL, url.c_str());
  curl_easy_setopt(c, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(c, CURLOPT_MAXREDIRS, options.max_redirects);
  curl_easy_setopt(c, CURLOPT_TIMEOUT_MS, options.http_timeout_ms.value_or(http_timeout_from_env()));
  curl_easy_setopt(c, CURLOPT_NOSIGNAL, 1L);
  curl_easy_setopt(c, CURLOPT_WRITEFUNCTION, write_body);
  curl_easy_setopt(c, CURLOPT_WRITEDATA, &body);
  curl_easy_setopt(c, CURLOPT_ERRORBUFFER, errbuf);
  curl_easy_setopt(c, CURLOPT_USERAGENT, "facadex/1.0");

  CURLcode rc = curl_easy_perform(c);
  if (rc != CURLE_OK) {
    std::string cause = errbuf[0] != '\0' ? errbuf : curl_easy_strerror(rc);
    throw FetchError(std::string(location), cause);
  }
  long status = 0;
  curl_easy_getinfo(c, CURLINFO_RESPONSE_CODE, &status);
  if (status >= 400)
    throw FetchError(std::string(location), "HTTP status " + std::to_string(status), status);

  FetchedResource r;
  r.bytes = std::move(body);
  char* effective = nullptr;
  curl_easy_getinfo(c, CURLINFO_EFFECTIVE_URL, &effective);
  r.effective_location = effective != nullptr ? effective : url;
  char* content_type = nullptr;
  curl_easy_getinfo(c, CURLINFO_CONTENT_TYPE, &content_type);
  if (content_type != nullptr) r.declared_media_type = std::string(content_type);
  r.fetch_time = std::chrono::system_clock::now();
  return r;
}

}  // namespace

long http_timeout_from_env() {
  const char* v = std::getenv("SA_HTTP_TIMEOUT_MS");
  if (v == nullptr || *v == '\0') return 30000;
  char* end = nullptr;
  long ms = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || ms <= 0)
    throw ConfigError("SA_HTTP_TIMEOUT_MS must be a positive integer, got '" + std::string(v) + "'");
  return ms;
}

std::optional<std::filesystem::path> local_path(std::string_view location,
                                                const std::filesystem::path& base_directory) {
  std::filesystem::path path;
  if (rdf::has_scheme(location)) {
    if (!util::iequals(location.substr(0, 5), "file:")) return std::nullopt;
    std::string_view rest = location.substr(5);
    // file://host/path: only the empty host and localhost are meaningful.
    if (rest.starts_with("//")) {
      rest.remove_prefix(2);
      std::size_t slash = rest.find('/');
      std::string_view host = rest.substr(0, slash);
      if (!host.empty() && host != "localhost") return std::nullopt;
      rest = slash == std::string_view::npos ? std::string_view("/") : rest.substr(slash);
    }
    path = percent_decode(rest);
  } else {
    path = std::string(location);
  }
  if (path.is_relative() && !base_directory.empty()) path = base_directory / path;
  return path;
}

FetchedResource fetch(std::string_view location, const FetchOptions& options) {
  if (location.empty()) throw FetchError("", "empty location");
  if (auto path = local_path(location, options.base_directory)) return read_file(location, *path);
  std::string scheme = util::to_lower_ascii(location.substr(0, location.find(':')));
  if (scheme == "http" || scheme == "https") return read_http(location, options);
  throw FetchError(std::string(location), "unsupported scheme '" + scheme + "'");
}

Fetcher make_fetcher(FetchOptions options) {
  return [options = std::move(options)](std::string_view location) { return fetch(location, options); };
}

}  // namespace facadex::dataset
