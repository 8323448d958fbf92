#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "facadex/error.hpp"
#include "facadex/rdf/graph.hpp"

namespace facadex::facade {

struct StringKey {
  std::string text;
  friend bool operator==(const StringKey&, const StringKey&) = default;
};

struct NumberKey {
  std::int64_t index = 1;
  friend bool operator==(const NumberKey&, const NumberKey&) = default;
};

// A slot key is exactly one of a string key or a 1-based number key.
class FacadeKey {
 public:
  FacadeKey(StringKey k) : key_(std::move(k)) {}  // NOLINT(google-explicit-constructor)
  FacadeKey(NumberKey k) : key_(k) {}             // NOLINT(google-explicit-constructor)

  static FacadeKey string(std::string text) { return FacadeKey(StringKey{std::move(text)}); }
  static FacadeKey number(std::int64_t index) { return FacadeKey(NumberKey{index}); }

  bool is_string() const { return std::holds_alternative<StringKey>(key_); }
  bool is_number() const { return std::holds_alternative<NumberKey>(key_); }
  const std::string& text() const { return std::get<StringKey>(key_).text; }
  std::int64_t index() const { return std::get<NumberKey>(key_).index; }

  // "name" for string keys, "3" for number keys.
  std::string to_string() const;

  friend bool operator==(const FacadeKey&, const FacadeKey&) = default;

 private:
  std::variant<StringKey, NumberKey> key_;
};

enum class ValueType { String, Integer, Decimal, Double, Boolean, Base64Binary };

std::string_view datatype_iri(ValueType t);

struct FacadeValue {
  std::string lexical;
  ValueType datatype = ValueType::String;

  friend bool operator==(const FacadeValue&, const FacadeValue&) = default;
};

struct FacadeContainer;

// A slot carries a container or a value. Both members exist so that the
// validator can observe (and report) slots that break that rule.
struct FacadeSlot {
  FacadeKey key;
  std::shared_ptr<FacadeContainer> container;
  std::optional<FacadeValue> value;
};

struct FacadeContainer {
  std::vector<std::string> types;
  std::vector<FacadeSlot> slots;

  void add_value(FacadeKey key, FacadeValue value);
  // Appends a container slot and returns the new child.
  FacadeContainer& add_container(FacadeKey key);
  const FacadeSlot* find(const FacadeKey& key) const;
};

struct FacadeTree {
  std::shared_ptr<FacadeContainer> root = std::make_shared<FacadeContainer>();
  std::string source_name;
};

struct MintingConfig {
  std::string data_namespace = std::string(rdf::vocab::kDataNamespace);
  std::string ontology_namespace = std::string(rdf::vocab::kFxNamespace);
  // When set, the root container becomes this IRI instead of a blank node.
  std::optional<std::string> root_iri;
};

namespace axiom {
inline constexpr std::string_view kRootPresent = "root-present";
inline constexpr std::string_view kStringKeyNonEmpty = "string-key-nonempty";
inline constexpr std::string_view kNumberKeyPositive = "number-key-positive";
inline constexpr std::string_view kSlotKeyUnique = "slot-key-unique";
inline constexpr std::string_view kSlotContentExclusive = "slot-content-exclusive";
inline constexpr std::string_view kSlotContentPresent = "slot-content-present";
inline constexpr std::string_view kSingleParent = "container-single-parent";
inline constexpr std::string_view kValueLexical = "value-lexical-valid";
inline constexpr std::string_view kTypeLabelNonEmpty = "type-label-nonempty";
}  // namespace axiom

struct Violation {
  std::string axiom;  // one of the axiom:: identifiers
  std::string path;   // "/" for the root, "/places/1" for nested slots
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Checks every meta-model axiom; an empty report means the tree conforms.
ValidationReport validate_tree(const FacadeTree& tree);

// True if `lexical` is in the lexical space of `type`.
bool valid_lexical(std::string_view lexical, ValueType type);

// dataNamespace + key, with every octet outside [A-Za-z0-9._-] percent-encoded.
std::string mint_key_property(std::string_view key, const MintingConfig& config);

// rdf:_<index>; throws PreconditionError for index < 1.
std::string membership_property(std::int64_t index);

// Throws ConfigError unless both namespaces are absolute IRIs ending in / or #.
void check_config(const MintingConfig& config);

// Applies the six mapping rules. Containers become blank nodes labelled
// `<blank_prefix><n>` in traversal order, except the root when
// config.root_iri is set. Throws ValidationError if the tree is invalid.
rdf::Graph tree_to_graph(const FacadeTree& tree, const MintingConfig& config,
                         std::string_view blank_prefix = "b");

}  // namespace facadex::facade
