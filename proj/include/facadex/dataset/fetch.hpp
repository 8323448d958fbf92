#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace facadex::dataset {

struct FetchedResource {
  std::string bytes;
  std::string effective_location;
  // Content-Type sent by the transport (HTTP only), parameters included.
  std::optional<std::string> declared_media_type;
  std::chrono::system_clock::time_point fetch_time;
};

struct FetchOptions {
  // Relative file locations resolve against this; empty means the process
  // working directory.
  std::filesystem::path base_directory;
  // Defaults to SA_HTTP_TIMEOUT_MS, or 30000 when unset.
  std::optional<long> http_timeout_ms;
  long max_redirects = 5;
};

using Fetcher = std::function<FetchedResource(std::string_view location)>;

long http_timeout_from_env();

// Filesystem path for a file: IRI or a bare path; nullopt for other schemes.
std::optional<std::filesystem::path> local_path(std::string_view location,
                                                const std::filesystem::path& base_directory = {});

// Reads file: IRIs and bare paths from disk, http(s) through libcurl.
// Throws FetchError carrying the location and cause.
FetchedResource fetch(std::string_view location, const FetchOptions& options = {});

Fetcher make_fetcher(FetchOptions options = {});

}  // namespace facadex::dataset
