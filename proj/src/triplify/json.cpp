#include <json.hpp>

#include <deque>
#include <unordered_map>

#include "facadex/error.hpp"
#include "facadex/triplify/charset.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace facadex::triplify {

namespace {

using nlohmann::json;

// Builds a facade tree directly from SAX events so that raw number lexicals
// survive and duplicate keys can be resolved in place.
class TreeBuilder : public nlohmann::json_sax<json> {
 public:
  TreeBuilder(facade::FacadeTree& tree, Warnings* warnings) : tree_(tree), warnings_(warnings) {}

  bool null() override {
    if (stack_.empty()) return true;  // top-level null: empty root
    Frame& f = stack_.back();
    f.skip = false;
    if (!f.is_array && f.replace) {
      auto& slots = f.container->slots;
      slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(*f.replace));
      f.index.clear();
      for (std::size_t i = 0; i < slots.size(); ++i) f.index[slots[i].key.text()] = i;
    }
    f.replace.reset();
    return true;
  }
  bool boolean(bool val) override {
    return put_value({val ? "true" : "false", facade::ValueType::Boolean});
  }
  bool number_integer(number_integer_t val) override {
    return put_value({std::to_string(val), facade::ValueType::Integer});
  }
  bool number_unsigned(number_unsigned_t val) override {
    return put_value({std::to_string(val), facade::ValueType::Integer});
  }
  bool number_float(number_float_t /*val*/, const string_t& s) override {
    // Integers too large for 64 bits arrive here; keep them exact.
    bool integral = s.find_first_of(".eE") == std::string::npos;
    return put_value({s, integral ? facade::ValueType::Integer : facade::ValueType::Double});
  }
  bool string(string_t& val) override {
    return put_value({std::move(val), facade::ValueType::String});
  }
  bool binary(binary_t& /*val*/) override { return true; }

  bool start_object(std::size_t /*elements*/) override { return open(false); }
  bool end_object() override {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t /*elements*/) override { return open(true); }
  bool end_array() override {
    stack_.pop_back();
    return true;
  }

  bool key(string_t& val) override {
    Frame& f = stack_.back();
    f.key = val;
    f.replace.reset();
    if (val.empty()) {
      // An empty key cannot name a slot; the member is dropped.
      f.skip = true;
      if (warnings_) warnings_->push_back("JSON: member with empty key dropped");
      return true;
    }
    if (auto it = f.index.find(val); it != f.index.end()) {
      f.replace = it->second;
      if (warnings_) warnings_->push_back("JSON: duplicate key '" + val + "', last value wins");
    }
    return true;
  }

  bool parse_error(std::size_t position, const std::string& /*last_token*/,
                   const nlohmann::detail::exception& ex) override {
    error_offset_ = position;
    error_message_ = ex.what();
    return false;
  }

  std::optional<std::size_t> error_offset() const { return error_offset_; }
  const std::string& error_message() const { return error_message_; }

 private:
  struct Frame {
    facade::FacadeContainer* container;
    bool is_array;
    std::int64_t next_index = 1;
    std::string key;
    std::optional<std::size_t> replace;
    bool skip = false;
    std::unordered_map<std::string, std::size_t> index;  // object key -> slot
  };

  // Places a slot for the next member of the current container.
  facade::FacadeSlot& next_slot() {
    Frame& f = stack_.back();
    auto& slots = f.container->slots;
    if (f.is_array) {
      slots.push_back(facade::FacadeSlot{facade::FacadeKey::number(f.next_index++), nullptr, {}});
      return slots.back();
    }
    if (f.skip) {
      f.skip = false;
      discarded_.push_back(facade::FacadeSlot{facade::FacadeKey::number(1), nullptr, {}});
      return discarded_.back();
    }
    if (f.replace) {
      facade::FacadeSlot& s = slots[*f.replace];
      s.container.reset();
      s.value.reset();
      f.replace.reset();
      return s;
    }
    f.index[f.key] = slots.size();
    slots.push_back(facade::FacadeSlot{facade::FacadeKey::string(f.key), nullptr, {}});
    return slots.back();
  }

  bool put_value(facade::FacadeValue v) {
    if (stack_.empty()) {
      // A top-level scalar becomes slot 1 of an otherwise empty root.
      tree_.root->add_value(facade::FacadeKey::number(1), std::move(v));
      return true;
    }
    next_slot().value = std::move(v);
    return true;
  }

  bool open(bool is_array) {
    if (stack_.empty()) {
      stack_.push_back(Frame{tree_.root.get(), is_array, 1, {}, {}, false, {}});
      return true;
    }
    auto child = std::make_shared<facade::FacadeContainer>();
    facade::FacadeContainer* raw = child.get();
    next_slot().container = std::move(child);
    stack_.push_back(Frame{raw, is_array, 1, {}, {}, false, {}});
    return true;
  }

  facade::FacadeTree& tree_;
  Warnings* warnings_;
  std::deque<facade::FacadeSlot> discarded_;  // subtrees under dropped members
  std::vector<Frame> stack_;
  std::optional<std::size_t> error_offset_;
  std::string error_message_;
};

}  // namespace

facade::FacadeTree triplify_json(std::string_view bytes, const TriplifierOptions& opts,
                                 Warnings* warnings) {
  std::string text = decode_to_utf8(bytes, opts.charset);
  facade::FacadeTree tree;
  TreeBuilder builder(tree, warnings);
  bool ok = json::sax_parse(text.begin(), text.end(), &builder, json::input_format_t::json, true);
  if (!ok) {
    std::size_t offset = builder.error_offset().value_or(0);
    throw ParseError("JSON: " + builder.error_message(), std::nullopt, std::nullopt, offset);
  }
  return tree;
}

}  // namespace facadex::triplify
