#include "facadex/facade/model.hpp"

#include <cctype>
#include <unordered_set>

#include "facadex/util/strings.hpp"

namespace facadex::facade {

std::string FacadeKey::to_string() const {
  return is_string() ? text() : std::to_string(index());
}

std::string_view datatype_iri(ValueType t) {
  switch (t) {
    case ValueType::String: return rdf::vocab::kXsdString;
    case ValueType::Integer: return rdf::vocab::kXsdInteger;
    case ValueType::Decimal: return rdf::vocab::kXsdDecimal;
    case ValueType::Double: return rdf::vocab::kXsdDouble;
    case ValueType::Boolean: return rdf::vocab::kXsdBoolean;
    case ValueType::Base64Binary: return rdf::vocab::kXsdBase64Binary;
  }
  return rdf::vocab::kXsdString;
}

void FacadeContainer::add_value(FacadeKey key, FacadeValue value) {
  slots.push_back(FacadeSlot{std::move(key), nullptr, std::move(value)});
}

FacadeContainer& FacadeContainer::add_container(FacadeKey key) {
  auto child = std::make_shared<FacadeContainer>();
  FacadeContainer& ref = *child;
  slots.push_back(FacadeSlot{std::move(key), std::move(child), std::nullopt});
  return ref;
}

const FacadeSlot* FacadeContainer::find(const FacadeKey& key) const {
  for (const FacadeSlot& s : slots)
    if (s.key == key) return &s;
  return nullptr;
}

ValidationError::ValidationError(ValidationReport report)
    : Error([&] {
        std::string msg = "facade tree violates " + std::to_string(report.size()) + " axiom(s)";
        if (!report.empty()) msg += ": " + report.front().axiom + " at " + report.front().path;
        return msg;
      }()),
      report_(std::move(report)) {}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string_view strip_sign(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  return s;
}

bool valid_decimal(std::string_view s) {
  s = strip_sign(s);
  std::size_t dot = s.find('.');
  if (dot == std::string_view::npos) return all_digits(s);
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return false;
  return (whole.empty() || all_digits(whole)) && (frac.empty() || all_digits(frac));
}

bool valid_double(std::string_view s) {
  if (s == "INF" || s == "-INF" || s == "+INF" || s == "NaN") return true;
  std::size_t e = s.find_first_of("eE");
  if (e == std::string_view::npos) return valid_decimal(s);
  return valid_decimal(s.substr(0, e)) && all_digits(strip_sign(s.substr(e + 1)));
}

bool valid_base64(std::string_view s) {
  if (s.size() % 4 != 0) return false;
  std::size_t pad = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '=') {
      ++pad;
      if (i < s.size() - 2) return false;
      continue;
    }
    if (pad > 0) return false;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '/') return false;
  }
  return pad <= 2;
}

}  // namespace

bool valid_lexical(std::string_view lexical, ValueType type) {
  switch (type) {
    case ValueType::String: return util::valid_utf8(lexical);
    case ValueType::Integer: return all_digits(strip_sign(lexical));
    case ValueType::Decimal: return valid_decimal(lexical);
    case ValueType::Double: return valid_double(lexical);
    case ValueType::Boolean:
      return lexical == "true" || lexical == "false" || lexical == "1" || lexical == "0";
    case ValueType::Base64Binary: return valid_base64(lexical);
  }
  return false;
}

ValidationReport validate_tree(const FacadeTree& tree) {
  ValidationReport report;
  if (!tree.root) {
    report.push_back({std::string(axiom::kRootPresent), "/", "tree has no root container"});
    return report;
  }
  std::unordered_set<const FacadeContainer*> seen{tree.root.get()};
  struct Frame {
    const FacadeContainer* container;
    std::string path;
  };
  std::vector<Frame> stack{{tree.root.get(), ""}};
  auto add = [&](std::string_view ax, const std::string& path, std::string detail) {
    report.push_back({std::string(ax), path.empty() ? "/" : path, std::move(detail)});
  };
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    for (const std::string& t : f.container->types)
      if (t.empty()) add(axiom::kTypeLabelNonEmpty, f.path, "empty type label");

    std::unordered_set<std::string_view> string_keys;
    std::unordered_set<std::int64_t> number_keys;
    std::vector<Frame> children;
    for (const FacadeSlot& slot : f.container->slots) {
      std::string path = f.path + "/" + slot.key.to_string();
      if (slot.key.is_string() && slot.key.text().empty())
        add(axiom::kStringKeyNonEmpty, path, "empty string key");
      if (slot.key.is_number() && slot.key.index() < 1)
        add(axiom::kNumberKeyPositive, path, "number key " + slot.key.to_string() + " < 1");
      bool fresh = slot.key.is_string() ? string_keys.insert(slot.key.text()).second
                                        : number_keys.insert(slot.key.index()).second;
      if (!fresh) add(axiom::kSlotKeyUnique, path, "duplicate key '" + slot.key.to_string() + "'");
      if (slot.container && slot.value) {
        add(axiom::kSlotContentExclusive, path, "slot holds both a container and a value");
      } else if (!slot.container && !slot.value) {
        add(axiom::kSlotContentPresent, path, "slot holds neither container nor value");
      }
      if (slot.value && !valid_lexical(slot.value->lexical, slot.value->datatype)) {
        add(axiom::kValueLexical, path,
            "'" + slot.value->lexical + "' is not a valid " +
                std::string(datatype_iri(slot.value->datatype)));
      }
      if (slot.container) {
        if (!seen.insert(slot.container.get()).second) {
          add(axiom::kSingleParent, path, "container already has a parent");
        } else {
          children.push_back({slot.container.get(), path});
        }
      }
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
  }
  return report;
}

std::string mint_key_property(std::string_view key, const MintingConfig& config) {
  static const char* hex = "0123456789ABCDEF";
  std::string out = config.data_namespace;
  out.reserve(out.size() + key.size());
  for (unsigned char c : key) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

std::string membership_property(std::int64_t index) {
  if (index < 1)
    throw PreconditionError("membership index must be >= 1, got " + std::to_string(index));
  return std::string(rdf::vocab::kRdf) + "_" + std::to_string(index);
}

void check_config(const MintingConfig& config) {
  for (const std::string* ns : {&config.data_namespace, &config.ontology_namespace}) {
    if (!rdf::has_scheme(*ns) || ns->empty() || (ns->back() != '/' && ns->back() != '#'))
      throw ConfigError("namespace must be an absolute IRI ending in '/' or '#': '" + *ns + "'");
  }
  if (config.root_iri && !rdf::has_scheme(*config.root_iri))
    throw ConfigError("root must be an absolute IRI: '" + *config.root_iri + "'");
}

rdf::Graph tree_to_graph(const FacadeTree& tree, const MintingConfig& config,
                         std::string_view blank_prefix) {
  check_config(config);
  ValidationReport report = validate_tree(tree);
  if (!report.empty()) throw ValidationError(std::move(report));

  rdf::Graph graph;
  std::size_t counter = 0;
  auto fresh = [&] { return rdf::Term::blank(std::string(blank_prefix) + std::to_string(counter++)); };
  const rdf::Term rdf_type = rdf::Term::iri(std::string(rdf::vocab::kRdfType));

  rdf::Term root = config.root_iri ? rdf::Term::iri(*config.root_iri) : fresh();
  graph.add(root, rdf_type, rdf::Term::iri(std::string(rdf::vocab::kFxRoot)));

  MintingConfig type_config = config;
  type_config.data_namespace = config.ontology_namespace;

  struct Frame {
    const FacadeContainer* container;
    rdf::Term node;
  };
  std::vector<Frame> stack{{tree.root.get(), root}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    for (const std::string& t : f.container->types)
      graph.add(f.node, rdf_type, rdf::Term::iri(mint_key_property(t, type_config)));
    std::vector<Frame> children;
    for (const FacadeSlot& slot : f.container->slots) {
      rdf::Term predicate = rdf::Term::iri(slot.key.is_string()
                                               ? mint_key_property(slot.key.text(), config)
                                               : membership_property(slot.key.index()));
      if (slot.container) {
        rdf::Term child = fresh();
        graph.add(f.node, predicate, child);
        children.push_back({slot.container.get(), std::move(child)});
      } else {
        graph.add(f.node, std::move(predicate),
                  rdf::Term::literal(slot.value->lexical, datatype_iri(slot.value->datatype)));
      }
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
  }
  return graph;
}

}  // namespace facadex::facade
