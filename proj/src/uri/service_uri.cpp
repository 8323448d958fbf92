#include "facadex/uri/service_uri.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "facadex/error.hpp"
#include "facadex/rdf/term.hpp"
#include "facadex/util/strings.hpp"

namespace facadex::uri {

namespace {

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("option " + std::string(key) + " must be true or false, got '" +
                    std::string(value) + "'");
}

void require_absolute(std::string_view key, std::string_view value) {
  if (!rdf::has_scheme(value))
    throw ConfigError("option " + std::string(key) + " must be an absolute IRI, got '" +
                      std::string(value) + "'");
}

// "application/json; charset=UTF-8" -> ("application/json", "UTF-8").
std::pair<std::string, std::optional<std::string>> split_charset(std::string_view media_type) {
  std::vector<std::string> kept;
  std::optional<std::string> charset;
  bool first = true;
  for (const std::string& part : util::split(media_type, ';')) {
    std::string_view p = util::trim(part);
    if (first) {
      kept.emplace_back(p);
      first = false;
      continue;
    }
    std::size_t eq = p.find('=');
    if (eq != std::string_view::npos && util::iequals(util::trim(p.substr(0, eq)), "charset")) {
      std::string_view v = util::trim(p.substr(eq + 1));
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
      charset = std::string(v);
    } else if (!p.empty()) {
      kept.emplace_back(p);
    }
  }
  std::string out;
  for (const std::string& k : kept) {
    if (!out.empty()) out += "; ";
    out += k;
  }
  return {out, charset};
}

void set_charset(ServiceSpec& spec, std::string value) {
  if (value.empty()) throw ConfigError("option charset must not be empty");
  spec.triplifier_options.charset = value;
  spec.charset = std::move(value);
}

void apply(ServiceSpec& spec, std::string_view key, std::string_view value) {
  if (key == "location" || key == "locator") {
    spec.location = value;
  } else if (key == "mime-type") {
    auto [type, charset] = split_charset(value);
    if (type.empty()) throw ConfigError("option mime-type must not be empty");
    spec.media_type_override = std::move(type);
    if (charset) set_charset(spec, std::move(*charset));
  } else if (key == "charset") {
    set_charset(spec, std::string(value));
  } else if (key == "namespace") {
    require_absolute(key, value);
    spec.namespace_iri = std::string(value);
  } else if (key == "root") {
    require_absolute(key, value);
    spec.root_iri = std::string(value);
  } else if (key == "metadata") {
    spec.metadata = parse_bool(key, value);
  } else if (key == "csv.headers") {
    spec.triplifier_options.csv_headers = parse_bool(key, value);
  } else if (key == "txt.regex") {
    spec.triplifier_options.text_tokenizer_pattern = value;
  } else {
    spec.triplifier_options.format_extras[std::string(key)] = value;
  }
}

}  // namespace

bool is_service_uri(std::string_view iri) {
  return iri.size() >= kScheme.size() && util::iequals(iri.substr(0, kScheme.size()), kScheme);
}

ServiceSpec parse_service_uri(std::string_view iri) {
  if (!is_service_uri(iri))
    throw ConfigError("not an " + std::string(kScheme) + " IRI: '" + std::string(iri) + "'");
  std::string_view rest = iri.substr(kScheme.size());
  if (rest.empty()) throw ConfigError("empty " + std::string(kScheme) + " IRI");

  ServiceSpec spec;
  std::string_view first = rest.substr(0, rest.find(','));
  std::size_t marker = first.find_first_of("=:/");
  if (marker == std::string_view::npos || first[marker] != '=') {
    spec.location = rest;
    return spec;
  }

  for (const std::string& segment : util::split(rest, ',')) {
    std::size_t eq = segment.find('=');
    if (eq == std::string::npos)
      throw ConfigError("option segment '" + segment + "' is not key=value in '" +
                        std::string(iri) + "'");
    std::string_view key(segment.data(), eq);
    if (key.empty()) throw ConfigError("empty option name in '" + std::string(iri) + "'");
    apply(spec, key, std::string_view(segment).substr(eq + 1));
  }
  if (spec.location.empty())
    throw ConfigError("no location in '" + std::string(iri) + "'");
  return spec;
}

std::string render_service_uri(const ServiceSpec& spec) {
  if (spec.location.empty()) throw PreconditionError("service spec without location");
  std::vector<std::pair<std::string, std::string>> options;
  if (spec.charset) options.emplace_back("charset", *spec.charset);
  if (spec.triplifier_options.csv_headers) options.emplace_back("csv.headers", "true");
  if (spec.metadata) options.emplace_back("metadata", "true");
  if (spec.media_type_override) options.emplace_back("mime-type", *spec.media_type_override);
  if (spec.namespace_iri) options.emplace_back("namespace", *spec.namespace_iri);
  if (spec.root_iri) options.emplace_back("root", *spec.root_iri);
  if (spec.triplifier_options.text_tokenizer_pattern != triplify::TriplifierOptions{}.text_tokenizer_pattern)
    options.emplace_back("txt.regex", spec.triplifier_options.text_tokenizer_pattern);
  for (const auto& [k, v] : spec.triplifier_options.format_extras) options.emplace_back(k, v);
  std::sort(options.begin(), options.end());

  std::string out(kScheme);
  for (const auto& [k, v] : options) {
    if (k.find_first_of(",=") != std::string::npos || v.find(',') != std::string::npos)
      throw PreconditionError("option " + k + " cannot be rendered: commas are not escapable");
    out += k;
    out += '=';
    out += v;
    out += ',';
  }
  if (spec.location.find(',') != std::string::npos)
    throw PreconditionError("location '" + spec.location + "' contains a comma");
  out += "location=";
  out += spec.location;
  return out;
}

}  // namespace facadex::uri
