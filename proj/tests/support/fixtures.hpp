#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace facadex::testing {

// Baseline JPEG of the given size (grey gradient) encoded with libjpeg. When
// `artist` is set, an EXIF APP1 segment carrying the Artist tag (written
// with libexif) follows the SOI marker.
std::string make_jpeg(int width, int height, std::optional<std::string> artist = std::nullopt);

// Reference base64 from OpenSSL.
std::string openssl_base64(std::string_view bytes);
std::string openssl_unbase64(std::string_view text);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, std::string_view bytes) const;

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);

// Random printable-ish identifier text drawn from [a-z0-9].
std::string random_word(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len);

}  // namespace facadex::testing
