#include <expat.h>

#include <memory>

#include "facadex/error.hpp"
#include "facadex/triplify/charset.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace facadex::triplify {

namespace {

struct Frame {
  facade::FacadeContainer* container;
  std::int64_t next_index = 1;
};

struct XmlState {
  facade::FacadeTree* tree;
  std::vector<Frame> stack;
  std::string text;  // character data since the last tag
};

bool blank(const std::string& s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return false;
  }
  return true;
}

void flush_text(XmlState& st) {
  if (!st.stack.empty() && !blank(st.text)) {
    Frame& f = st.stack.back();
    f.container->add_value(facade::FacadeKey::number(f.next_index++),
                           facade::FacadeValue{std::move(st.text)});
  }
  st.text.clear();
}

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** atts) {
  auto& st = *static_cast<XmlState*>(data);
  flush_text(st);
  facade::FacadeContainer* c;
  if (st.stack.empty()) {
    c = st.tree->root.get();
  } else {
    Frame& parent = st.stack.back();
    c = &parent.container->add_container(facade::FacadeKey::number(parent.next_index++));
  }
  c->types.emplace_back(name);
  for (std::size_t i = 0; atts[i] != nullptr; i += 2) {
    c->add_value(facade::FacadeKey::string(atts[i]), facade::FacadeValue{atts[i + 1]});
  }
  st.stack.push_back(Frame{c});
}

void XMLCALL on_end(void* data, const XML_Char* /*name*/) {
  auto& st = *static_cast<XmlState*>(data);
  flush_text(st);
  st.stack.pop_back();
}

void XMLCALL on_text(void* data, const XML_Char* s, int len) {
  auto& st = *static_cast<XmlState*>(data);
  // Text outside the document element is only whitespace in well-formed XML.
  if (!st.stack.empty()) st.text.append(s, static_cast<std::size_t>(len));
}

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

facade::FacadeTree triplify_xml(std::string_view bytes, const TriplifierOptions& opts,
                                Warnings* /*warnings*/) {
  // For UTF-8 (the default) expat reads the document's own declaration;
  // anything else is transcoded up front.
  std::string transcoded;
  const XML_Char* forced = nullptr;
  if (!is_utf8_charset(opts.charset)) {
    transcoded = decode_to_utf8(bytes, opts.charset);
    bytes = transcoded;
    forced = "UTF-8";
  }
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(
      XML_ParserCreate(forced));
  if (!parser) throw Error("XML: cannot allocate parser");

  facade::FacadeTree tree;
  XmlState st{&tree, {}, {}};
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);

  constexpr std::size_t kChunk = 1 << 20;
  std::size_t pos = 0;
  do {
    std::size_t len = std::min(kChunk, bytes.size() - pos);
    bool last = pos + len == bytes.size();
    if (XML_Parse(parser.get(), bytes.data() + pos, static_cast<int>(len), last) ==
        XML_STATUS_ERROR) {
      XML_Parser p = parser.get();
      std::size_t line = XML_GetCurrentLineNumber(p);
      std::size_t column = XML_GetCurrentColumnNumber(p) + 1;
      auto offset = static_cast<std::size_t>(XML_GetCurrentByteIndex(p));
      throw ParseError("XML: " + std::string(XML_ErrorString(XML_GetErrorCode(p))) +
                           " at line " + std::to_string(line) + ", column " +
                           std::to_string(column),
                       line, column, offset);
    }
    pos += len;
  } while (pos < bytes.size());
  return tree;
}

}  // namespace facadex::triplify
