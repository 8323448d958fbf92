#include <doctest.h>

#include "facadex/error.hpp"
#include "facadex/facade/model.hpp"
#include "facadex/triplify/registry.hpp"
#include "facadex/triplify/triplifiers.hpp"
#include "fixtures.hpp"

namespace fx = facadex::facade;
namespace tp = facadex::triplify;

namespace {

const fx::FacadeValue& value_at(const fx::FacadeContainer& c, const fx::FacadeKey& k) {
  const fx::FacadeSlot* s = c.find(k);
  REQUIRE(s != nullptr);
  REQUIRE(s->value.has_value());
  return *s->value;
}

const fx::FacadeContainer& child_at(const fx::FacadeContainer& c, const fx::FacadeKey& k) {
  const fx::FacadeSlot* s = c.find(k);
  REQUIRE(s != nullptr);
  REQUIRE(s->container != nullptr);
  return *s->container;
}

fx::FacadeKey S(std::string s) { return fx::FacadeKey::string(std::move(s)); }
fx::FacadeKey N(std::int64_t i) { return fx::FacadeKey::number(i); }

}  // namespace

TEST_CASE("media type guessing") {
  CHECK(tp::guess_media_type("file:./artwork_data.csv") == "text/csv");
  CHECK(tp::guess_media_type("http://x/y.bin", "application/json; charset=UTF-8") == "application/json");
  CHECK(tp::guess_media_type("file:./blob") == "application/octet-stream");
  CHECK(tp::guess_media_type("a.JSON") == "application/json");
  CHECK(tp::guess_media_type("a.xml") == "application/xml");
  CHECK(tp::guess_media_type("a.txt") == "text/plain");
  CHECK(tp::guess_media_type("a.jpeg") == "image/jpeg");
  CHECK(tp::guess_media_type("a.jpg?x=1#f") == "image/jpeg");
  CHECK(tp::guess_media_type("a.png") == "image/png");
  CHECK(tp::media_type_charset("text/csv; charset=latin1") == "latin1");
  CHECK(tp::media_type_essence("Application/JSON; charset=UTF-8") == "application/json");
  CHECK(tp::default_registry().find("text/csv") != nullptr);
  CHECK(tp::default_registry().find("application/x-unknown") == nullptr);
}

TEST_CASE("csv with headers") {
  tp::TriplifierOptions opts;
  opts.csv_headers = true;
  fx::FacadeTree t = tp::triplify_csv("id,artist\r\n1034,\"Blake, Robert\"\r\n1035,Blake Robert\r\n", opts);
  CHECK(fx::validate_tree(t).empty());
  REQUIRE(t.root->slots.size() == 2);
  const fx::FacadeContainer& row1 = child_at(*t.root, N(1));
  CHECK(value_at(row1, S("id")).lexical == "1034");
  CHECK(value_at(row1, S("id")).datatype == fx::ValueType::String);
  CHECK(value_at(row1, S("artist")).lexical == "Blake, Robert");
  CHECK(value_at(child_at(*t.root, N(2)), S("artist")).lexical == "Blake Robert");
}

TEST_CASE("csv without headers is positional") {
  fx::FacadeTree t = tp::triplify_csv("a,b\nc,d", {});
  const fx::FacadeContainer& row1 = child_at(*t.root, N(1));
  CHECK(value_at(row1, N(1)).lexical == "a");
  CHECK(value_at(row1, N(2)).lexical == "b");
  CHECK(value_at(child_at(*t.root, N(2)), N(2)).lexical == "d");
}

TEST_CASE("csv edge cases") {
  SUBCASE("empty cells and blank lines produce nothing") {
    fx::FacadeTree t = tp::triplify_csv("a,,c\n\nd,e,f\n", {});
    REQUIRE(t.root->slots.size() == 2);
    const fx::FacadeContainer& row1 = child_at(*t.root, N(1));
    CHECK(row1.slots.size() == 2);
    CHECK(value_at(row1, N(3)).lexical == "c");
  }
  SUBCASE("escaped quotes and embedded newline") {
    fx::FacadeTree t = tp::triplify_csv("\"say \"\"hi\"\"\",\"two\nlines\"\n", {});
    const fx::FacadeContainer& row1 = child_at(*t.root, N(1));
    CHECK(value_at(row1, N(1)).lexical == "say \"hi\"");
    CHECK(value_at(row1, N(2)).lexical == "two\nlines");
  }
  SUBCASE("unterminated quote") {
    CHECK_THROWS_AS(tp::triplify_csv("a,\"b\n", {}), facadex::ParseError);
  }
  SUBCASE("duplicate header") {
    tp::TriplifierOptions opts;
    opts.csv_headers = true;
    CHECK_THROWS_AS(tp::triplify_csv("a,a\n1,2\n", opts), facadex::ParseError);
  }
  SUBCASE("parse error carries a line") {
    try {
      tp::triplify_csv("a,b\nc,\"d\"x\n", {});
      FAIL("expected ParseError");
    } catch (const facadex::ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
}

TEST_CASE("csv triple counts") {
  tp::TriplifierOptions opts;
  opts.csv_headers = true;
  for (int r = 1; r <= 8; ++r)
    for (int c = 1; c <= 8; ++c) {
      std::string doc;
      for (int j = 0; j < c; ++j) doc += (j ? ",h" : "h") + std::to_string(j);
      doc += "\n";
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) doc += (j ? ",v" : "v") + std::to_string(i * c + j);
        doc += "\n";
      }
      CHECK(fx::tree_to_graph(tp::triplify_csv(doc, opts), {}).size() ==
            static_cast<std::size_t>(1 + r + r * c));
    }
}

TEST_CASE("json malevich") {
  fx::FacadeTree t = tp::triplify_json(R"({ "fc": "Kazimir Malevich", "id": 1561,
    "places": [ { "name": "Ukrayina", "type": "nation" },
                { "name": "Moskva, Rossiya", "type": "inhabited_place" } ],
    "url": "http://www.tate.org.uk/art/artists/kazimir-malevich-1561" })", {});
  CHECK(fx::validate_tree(t).empty());
  CHECK(value_at(*t.root, S("fc")).lexical == "Kazimir Malevich");
  CHECK(value_at(*t.root, S("id")) == fx::FacadeValue{"1561", fx::ValueType::Integer});
  const fx::FacadeContainer& places = child_at(*t.root, S("places"));
  CHECK(places.slots.size() == 2);
  CHECK(value_at(child_at(places, N(1)), S("name")).lexical == "Ukrayina");
  CHECK(value_at(child_at(places, N(2)), S("type")).lexical == "inhabited_place");
  CHECK(t.root->slots.size() == 4);
}

TEST_CASE("json typing and edge cases") {
  fx::FacadeTree t = tp::triplify_json(R"({"a": 1.5, "b": true, "c": null, "e": -3})", {});
  CHECK(value_at(*t.root, S("a")).datatype == fx::ValueType::Double);
  CHECK(value_at(*t.root, S("b")) == fx::FacadeValue{"true", fx::ValueType::Boolean});
  CHECK(t.root->find(S("c")) == nullptr);
  CHECK(value_at(*t.root, S("e")) == fx::FacadeValue{"-3", fx::ValueType::Integer});
  CHECK(fx::validate_tree(t).empty());

  // Out of double range: the parser refuses rather than inventing INF.
  CHECK_THROWS_AS(tp::triplify_json("[1e400]", {}), facadex::ParseError);

  fx::FacadeTree empty = tp::triplify_json("{}", {});
  CHECK(fx::tree_to_graph(empty, {}).size() == 1);

  fx::FacadeTree scalar = tp::triplify_json("\"x\"", {});
  CHECK(value_at(*scalar.root, N(1)).lexical == "x");

  fx::FacadeTree dup = tp::triplify_json(R"({"k": 1, "k": 2})", {});
  CHECK(dup.root->slots.size() == 1);
  CHECK(value_at(*dup.root, S("k")).lexical == "2");

  tp::Warnings w;
  fx::FacadeTree blank_key = tp::triplify_json(R"({"": {"x": 1}, "k": [1, {"": 2}]})", {}, &w);
  CHECK(fx::validate_tree(blank_key).empty());
  CHECK(blank_key.root->slots.size() == 1);
  CHECK(child_at(*blank_key.root, S("k")).slots.size() == 2);
  CHECK(w.size() == 2);

  CHECK_THROWS_AS(tp::triplify_json("{\"a\": }", {}), facadex::ParseError);
}

TEST_CASE("json array counts") {
  for (int n : {1, 10, 100})
    for (int m = 1; m <= 5; ++m) {
      std::string doc = "[";
      for (int i = 0; i < n; ++i) {
        doc += i ? ",{" : "{";
        for (int j = 0; j < m; ++j) doc += (j ? ",\"k" : "\"k") + std::to_string(j) + "\":" + std::to_string(i);
        doc += "}";
      }
      doc += "]";
      CHECK(fx::tree_to_graph(tp::triplify_json(doc, {}), {}).size() == static_cast<std::size_t>(1 + n + n * m));
    }
}

TEST_CASE("xml catalogue record") {
  fx::FacadeTree t = tp::triplify_xml(R"(<OGT hint="OGGETTO">
    <OGTD hint="Definizione">reperti antropologici</OGTD>
    <OGTT hint="Tipologia">reperto osteo-dentario</OGTT>
  </OGT>)", {});
  CHECK(fx::validate_tree(t).empty());
  CHECK(t.root->types == std::vector<std::string>{"OGT"});
  CHECK(value_at(*t.root, S("hint")).lexical == "OGGETTO");
  CHECK(child_at(*t.root, N(1)).types == std::vector<std::string>{"OGTD"});
  CHECK(child_at(*t.root, N(2)).types == std::vector<std::string>{"OGTT"});
  CHECK(value_at(child_at(*t.root, N(2)), N(1)).lexical == "reperto osteo-dentario");
}

TEST_CASE("xml small documents") {
  fx::FacadeTree a = tp::triplify_xml("<a/>", {});
  CHECK(fx::tree_to_graph(a, {}).size() == 2);

  fx::FacadeTree b = tp::triplify_xml(R"(<a x="1"><b/>t</a>)", {});
  CHECK(value_at(*b.root, S("x")).lexical == "1");
  CHECK(child_at(*b.root, N(1)).types == std::vector<std::string>{"b"});
  CHECK(value_at(*b.root, N(2)).lexical == "t");
  CHECK(b.root->slots.size() == 3);

  CHECK_THROWS_AS(tp::triplify_xml("<a><b></a>", {}), facadex::ParseError);
}

TEST_CASE("text splitting") {
  fx::FacadeTree t = tp::triplify_text("hello world", {});
  CHECK(value_at(*t.root, N(1)).lexical == "hello");
  CHECK(value_at(*t.root, N(2)).lexical == "world");

  tp::TriplifierOptions comma;
  comma.text_tokenizer_pattern = ",";
  fx::FacadeTree c = tp::triplify_text("a,b,,c", comma);
  REQUIRE(c.root->slots.size() == 3);
  CHECK(value_at(*c.root, N(3)).lexical == "c");

  CHECK(tp::triplify_text("", {}).root->slots.empty());

  tp::TriplifierOptions bad;
  bad.text_tokenizer_pattern = "(";
  CHECK_THROWS_AS(tp::triplify_text("x", bad), facadex::ConfigError);
}

TEST_CASE("text charset decoding") {
  tp::TriplifierOptions latin;
  latin.charset = "ISO-8859-1";
  fx::FacadeTree t = tp::triplify_text("caf\xE9", latin);
  CHECK(value_at(*t.root, N(1)).lexical == "caf\xC3\xA9");
  tp::TriplifierOptions unknown;
  unknown.charset = "no-such-charset";
  CHECK_THROWS_AS(tp::triplify_text("x", unknown), facadex::ConfigError);
}

TEST_CASE("binary embedding") {
  fx::FacadeTree t = tp::triplify_binary(std::string("\x4D\x61\x6E", 3), {});
  CHECK(value_at(*t.root, N(1)) == fx::FacadeValue{"TWFu", fx::ValueType::Base64Binary});
  CHECK(value_at(*tp::triplify_binary("", {}).root, N(1)).lexical.empty());
  std::string bytes(1000, '\0');
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<char>(i * 7);
  CHECK(value_at(*tp::triplify_binary(bytes, {}).root, N(1)).lexical == facadex::testing::openssl_base64(bytes));
}

TEST_CASE("image metadata") {
  std::string jpeg = facadex::testing::make_jpeg(2, 3, "X");
  fx::FacadeTree t = tp::extract_image_metadata(jpeg);
  CHECK(fx::validate_tree(t).empty());
  CHECK(value_at(*t.root, S("ImageWidth")).lexical == "2");
  CHECK(value_at(*t.root, S("ImageLength")).lexical == "3");
  CHECK(value_at(*t.root, S("Artist")).lexical == "X");

  fx::FacadeTree plain = tp::extract_image_metadata(facadex::testing::make_jpeg(5, 4));
  CHECK(value_at(*plain.root, S("ImageWidth")).lexical == "5");
  CHECK(plain.root->find(S("Artist")) == nullptr);

  CHECK_THROWS_AS(tp::extract_image_metadata("not an image"), facadex::MetadataError);
}

TEST_CASE("bundled thumbnails carry their artist") {
  std::string t2 = facadex::testing::read_file(std::string(FIXTURE_DIR) + "/guide/thumbnails/t2.jpg");
  fx::FacadeTree t = tp::extract_image_metadata(t2);
  CHECK(value_at(*t.root, S("Artist")).lexical == "Thumbnail artist 2");
  CHECK(value_at(*t.root, S("ImageWidth")).lexical == "9");
  CHECK(value_at(*t.root, S("ImageLength")).lexical == "7");
}

TEST_CASE("bundled artwork csv matches the published first rows") {
  tp::TriplifierOptions opts;
  opts.csv_headers = true;
  fx::FacadeTree t = tp::triplify_csv(facadex::testing::read_file(std::string(FIXTURE_DIR) + "/guide/artwork_data.csv"), opts);
  const fx::FacadeContainer& r1 = child_at(*t.root, N(1));
  CHECK(value_at(r1, S("id")).lexical == "1034");
  CHECK(value_at(r1, S("artist")).lexical == "Blake Robert");
  CHECK(value_at(r1, S("artistId")).lexical == "38");
  CHECK(value_at(child_at(*t.root, N(2)), S("id")).lexical == "16216");
  CHECK(value_at(child_at(*t.root, N(3)), S("artist")).lexical == "Pissarro Lucien");
  CHECK(t.root->slots.size() == 10);
}
