#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facadex/facade/model.hpp"
#include "facadex/triplify/options.hpp"

namespace facadex::triplify {

using TriplifyFn = std::function<facade::FacadeTree(std::string_view bytes,
                                                    const TriplifierOptions& opts,
                                                    Warnings* warnings)>;

struct Triplifier {
  std::string name;
  TriplifyFn triplify;
};

// Media type -> triplifier, plus extension -> media type. Extensions and
// media types are matched case-insensitively.
class TriplifierRegistry {
 public:
  void add(std::string media_type, std::shared_ptr<const Triplifier> triplifier);
  void add_extension(std::string extension, std::string media_type);

  // nullptr when nothing is registered for the (parameter-free) media type.
  const Triplifier* find(std::string_view media_type) const;
  std::optional<std::string> media_type_for_extension(std::string_view extension) const;

  std::vector<std::string> media_types() const;
  std::vector<std::string> extensions() const;

 private:
  std::map<std::string, std::shared_ptr<const Triplifier>> by_media_type_;
  std::map<std::string, std::string> by_extension_;
};

// CSV, JSON, XML, text, and binary (images and octet streams).
const TriplifierRegistry& default_registry();

inline constexpr std::string_view kOctetStream = "application/octet-stream";

// "Application/JSON; charset=UTF-8" -> "application/json".
std::string media_type_essence(std::string_view media_type);

// Value of a charset parameter ("text/csv; charset=latin1" -> "latin1").
std::optional<std::string> media_type_charset(std::string_view media_type);

// Lowercase extension of the last path segment ("" if none). Query strings
// and fragments are ignored.
std::string extension_of(std::string_view location);

// The override (parameters stripped) if present, else the registry mapping
// of the location's extension, else application/octet-stream.
std::string guess_media_type(std::string_view location,
                             std::optional<std::string_view> override_type = std::nullopt,
                             const TriplifierRegistry& registry = default_registry());

bool is_image_media_type(std::string_view media_type);

}  // namespace facadex::triplify
