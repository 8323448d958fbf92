#include "facadex/triplify/registry.hpp"

#include "facadex/triplify/triplifiers.hpp"
#include "facadex/util/strings.hpp"

namespace facadex::triplify {

void TriplifierRegistry::add(std::string media_type, std::shared_ptr<const Triplifier> triplifier) {
  by_media_type_[media_type_essence(media_type)] = std::move(triplifier);
}

void TriplifierRegistry::add_extension(std::string extension, std::string media_type) {
  by_extension_[util::to_lower_ascii(extension)] = media_type_essence(media_type);
}

const Triplifier* TriplifierRegistry::find(std::string_view media_type) const {
  auto it = by_media_type_.find(media_type_essence(media_type));
  return it == by_media_type_.end() ? nullptr : it->second.get();
}

std::optional<std::string> TriplifierRegistry::media_type_for_extension(
    std::string_view extension) const {
  auto it = by_extension_.find(util::to_lower_ascii(extension));
  if (it == by_extension_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> TriplifierRegistry::media_types() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : by_media_type_) out.push_back(k);
  return out;
}

std::vector<std::string> TriplifierRegistry::extensions() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : by_extension_) out.push_back(k);
  return out;
}

const TriplifierRegistry& default_registry() {
  static const TriplifierRegistry registry = [] {
    TriplifierRegistry r;
    auto csv = std::make_shared<Triplifier>(Triplifier{"csv", triplify_csv});
    auto json = std::make_shared<Triplifier>(Triplifier{"json", triplify_json});
    auto xml = std::make_shared<Triplifier>(Triplifier{"xml", triplify_xml});
    auto text = std::make_shared<Triplifier>(Triplifier{"text", triplify_text});
    auto binary = std::make_shared<Triplifier>(Triplifier{"binary", triplify_binary});
    r.add("text/csv", csv);
    r.add("application/json", json);
    r.add("application/xml", xml);
    r.add("text/xml", xml);
    r.add("text/plain", text);
    r.add("image/jpeg", binary);
    r.add("image/png", binary);
    r.add(std::string(kOctetStream), binary);
    r.add_extension("csv", "text/csv");
    r.add_extension("json", "application/json");
    r.add_extension("xml", "application/xml");
    r.add_extension("txt", "text/plain");
    r.add_extension("jpg", "image/jpeg");
    r.add_extension("jpeg", "image/jpeg");
    r.add_extension("png", "image/png");
    return r;
  }();
  return registry;
}

std::string media_type_essence(std::string_view media_type) {
  std::size_t semi = media_type.find(';');
  return util::to_lower_ascii(util::trim(media_type.substr(0, semi)));
}

std::optional<std::string> media_type_charset(std::string_view media_type) {
  for (const std::string& part : util::split(media_type, ';')) {
    std::string_view p = util::trim(part);
    std::size_t eq = p.find('=');
    if (eq == std::string_view::npos || !util::iequals(util::trim(p.substr(0, eq)), "charset")) continue;
    std::string_view v = util::trim(p.substr(eq + 1));
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return std::string(v);
  }
  return std::nullopt;
}

std::string extension_of(std::string_view location) {
  std::size_t cut = location.find_first_of("?#");
  std::string_view path = location.substr(0, cut);
  std::size_t slash = path.find_last_of("/:\\");
  std::string_view segment = slash == std::string_view::npos ? path : path.substr(slash + 1);
  std::size_t dot = segment.rfind('.');
  if (dot == std::string_view::npos) return "";
  return util::to_lower_ascii(segment.substr(dot + 1));
}

std::string guess_media_type(std::string_view location, std::optional<std::string_view> override_type,
                             const TriplifierRegistry& registry) {
  if (override_type) {
    std::string essence = media_type_essence(*override_type);
    if (!essence.empty()) return essence;
  }
  if (auto mt = registry.media_type_for_extension(extension_of(location))) return *mt;
  return std::string(kOctetStream);
}

bool is_image_media_type(std::string_view media_type) {
  return media_type_essence(media_type).starts_with("image/");
}

}  // namespace facadex::triplify
