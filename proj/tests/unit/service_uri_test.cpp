#include <doctest.h>

#include "facadex/error.hpp"
#include "facadex/uri/service_uri.hpp"

namespace uri = facadex::uri;

TEST_CASE("guide query IRIs") {
  uri::ServiceSpec csv = uri::parse_service_uri("x-sparql-anything:csv.headers=true,location=file:./artwork_data.csv");
  CHECK(csv.location == "file:./artwork_data.csv");
  CHECK(csv.triplifier_options.csv_headers);
  CHECK_FALSE(csv.metadata);
  CHECK_FALSE(csv.media_type_override);

  uri::ServiceSpec json = uri::parse_service_uri("x-sparql-anything:mime-type=application/json; charset=UTF-8,location=f.x");
  CHECK(json.media_type_override == "application/json");
  CHECK(json.charset == "UTF-8");
  CHECK(json.triplifier_options.charset == "UTF-8");
  CHECK(json.location == "f.x");

  uri::ServiceSpec bare = uri::parse_service_uri("x-sparql-anything:file:./artworks/A00001");
  CHECK(bare.location == "file:./artworks/A00001");
  CHECK(bare == uri::ServiceSpec{.location = "file:./artworks/A00001"});
}

TEST_CASE("scheme detection") {
  CHECK(uri::is_service_uri("x-sparql-anything:location=a"));
  CHECK(uri::is_service_uri("X-SPARQL-Anything:a.csv"));
  CHECK_FALSE(uri::is_service_uri("http://example.org/sparql"));
}

TEST_CASE("options") {
  uri::ServiceSpec s = uri::parse_service_uri(
      "x-sparql-anything:location=a.txt,txt.regex=\\s+,namespace=http://e.org/,root=http://e.org/r,"
      "metadata=true,xml.path=/a");
  CHECK(s.triplifier_options.text_tokenizer_pattern == "\\s+");
  CHECK(s.namespace_iri == "http://e.org/");
  CHECK(s.root_iri == "http://e.org/r");
  CHECK(s.metadata);
  CHECK(s.triplifier_options.format_extras.at("xml.path") == "/a");
  CHECK(uri::parse_service_uri("x-sparql-anything:locator=a.txt").location == "a.txt");
}

TEST_CASE("malformed IRIs") {
  CHECK_THROWS_AS(uri::parse_service_uri("x-sparql-anything:"), facadex::ConfigError);
  CHECK_THROWS_AS(uri::parse_service_uri("x-sparql-anything:metadata=yes,location=a"), facadex::ConfigError);
  CHECK_THROWS_AS(uri::parse_service_uri("x-sparql-anything:csv.headers=1,location=a"), facadex::ConfigError);
  CHECK_THROWS_AS(uri::parse_service_uri("x-sparql-anything:csv.headers=true"), facadex::ConfigError);
  CHECK_THROWS_AS(uri::parse_service_uri("x-sparql-anything:location=a,junk"), facadex::ConfigError);
  CHECK_THROWS_AS(uri::parse_service_uri("http://x/y"), facadex::ConfigError);
}

TEST_CASE("canonical rendering") {
  CHECK(uri::render_service_uri({.location = "f.csv"}) == "x-sparql-anything:location=f.csv");
  uri::ServiceSpec s{.location = "f.csv"};
  s.triplifier_options.csv_headers = true;
  CHECK(uri::render_service_uri(s) == "x-sparql-anything:csv.headers=true,location=f.csv");
  s.metadata = true;
  s.media_type_override = "text/csv";
  CHECK(uri::render_service_uri(s) ==
        "x-sparql-anything:csv.headers=true,metadata=true,mime-type=text/csv,location=f.csv");
  CHECK_THROWS_AS(uri::render_service_uri({.location = "a,b"}), facadex::PreconditionError);
  CHECK_THROWS_AS(uri::render_service_uri({}), facadex::PreconditionError);
}

TEST_CASE("render then parse is identity") {
  uri::ServiceSpec s{.location = "http://example.org/data.json?x=1"};
  s.charset = "ISO-8859-1";
  s.triplifier_options.charset = "ISO-8859-1";
  s.root_iri = "http://example.org/root";
  s.triplifier_options.text_tokenizer_pattern = "[;]";
  CHECK(uri::parse_service_uri(uri::render_service_uri(s)) == s);
}
