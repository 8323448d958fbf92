#include <doctest.h>

#include <sstream>

#include "facadex/error.hpp"
#include "facadex/rdf/graph.hpp"
#include "facadex/rdf/isomorphism.hpp"
#include "facadex/rdf/iri.hpp"
#include "facadex/rdf/reader.hpp"
#include "facadex/rdf/writer.hpp"

namespace rdf = facadex::rdf;

TEST_CASE("graph indexing") {
  rdf::Graph g;
  rdf::Term a = rdf::Term::iri("http://e.org/a"), p = rdf::Term::iri("http://e.org/p");
  CHECK(g.add(a, p, rdf::Term::integer(1)));
  CHECK_FALSE(g.add(a, p, rdf::Term::integer(1)));
  CHECK(g.add(a, p, rdf::Term::literal("x")));
  CHECK(g.size() == 2);
  int n = 0;
  g.for_each_match(*g.lookup(a), rdf::kNoTerm, rdf::kNoTerm, [&](const rdf::IdTriple&) { return ++n, true; });
  CHECK(n == 2);
  CHECK_FALSE(g.lookup(rdf::Term::iri("http://e.org/none")));
}

TEST_CASE("turtle round trip") {
  const char* ttl = R"(@prefix ex: <http://e.org/> .
ex:a ex:p "x"@en, 3, 2.5, 1e2, true ;
     ex:q [ ex:r ( 1 2 ) ] .
_:b ex:p """multi
line""" .
)";
  rdf::Graph g = rdf::parse_turtle(ttl);
  // 5 objects of ex:p, ex:q, ex:r, two cells of two triples each, _:b.
  CHECK(g.size() == 12);
  std::ostringstream out;
  rdf::write_turtle(out, g);
  CHECK(rdf::isomorphic(rdf::parse_turtle(out.str()), g));
  std::ostringstream nt;
  rdf::write_ntriples(nt, g);
  CHECK(rdf::isomorphic(rdf::parse_turtle(nt.str()), g));
}

TEST_CASE("trig and nquads") {
  rdf::Dataset d = rdf::parse_trig(R"(@prefix ex: <http://e.org/> .
ex:a ex:p ex:b .
ex:g { ex:a ex:p "in g" . }
)");
  CHECK(d.default_graph->size() == 1);
  REQUIRE(d.named.size() == 1);
  CHECK(d.find(rdf::Term::iri("http://e.org/g"))->size() == 1);
  std::ostringstream nq;
  rdf::write_nquads(nq, d);
  CHECK(nq.str().find("<http://e.org/g> .") != std::string::npos);
}

TEST_CASE("turtle errors carry positions") {
  try {
    rdf::parse_turtle("<http://e.org/a> <http://e.org/p> .");
    FAIL("expected ParseError");
  } catch (const facadex::ParseError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("isomorphism ignores blank labels") {
  rdf::Graph a = rdf::parse_turtle("_:x <http://e.org/p> _:y . _:y <http://e.org/p> _:x .");
  rdf::Graph b = rdf::parse_turtle("_:m <http://e.org/p> _:n . _:n <http://e.org/p> _:m .");
  rdf::Graph c = rdf::parse_turtle("_:m <http://e.org/p> _:m . _:n <http://e.org/p> _:n .");
  CHECK(rdf::isomorphic(a, b));
  CHECK_FALSE(rdf::isomorphic(a, c));
}

TEST_CASE("iri resolution") {
  CHECK(rdf::resolve_iri("http://a/b/c/d;p?q", "g") == "http://a/b/c/g");
  CHECK(rdf::resolve_iri("http://a/b/c/d;p?q", "../g") == "http://a/b/g");
  CHECK(rdf::resolve_iri("http://a/b/c/d;p?q", "//g") == "http://g");
  CHECK(rdf::resolve_iri("http://a/b/c/d;p?q", "#s") == "http://a/b/c/d;p?q#s");
  CHECK(rdf::resolve_iri("http://a/b/c/d;p?q", "../../../g") == "http://a/g");
}

TEST_CASE("term rendering") {
  CHECK(rdf::Term::literal("a\"b\n").to_ntriples() == "\"a\\\"b\\n\"");
  CHECK(rdf::Term::lang_literal("x", "EN").to_ntriples() == "\"x\"@en");
  CHECK(rdf::Term::integer(5).to_ntriples() == "\"5\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  CHECK(rdf::Term::blank("b0").to_ntriples() == "_:b0");
}
