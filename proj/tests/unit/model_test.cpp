#include <doctest.h>

#include <algorithm>
#include <random>

#include "facadex/facade/model.hpp"
#include "facadex/rdf/term.hpp"

namespace fx = facadex::facade;
namespace rdf = facadex::rdf;

namespace {

const std::string kData = "http://sparql.xyz/facade-x/data/";
const std::string kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

fx::FacadeValue str(std::string s) { return {std::move(s), fx::ValueType::String}; }

// The Tate artist record used for the JSON mapping example.
fx::FacadeTree malevich() {
  fx::FacadeTree tree;
  fx::FacadeContainer& root = *tree.root;
  root.add_value(fx::FacadeKey::string("fc"), str("Kazimir Malevich"));
  root.add_value(fx::FacadeKey::string("id"), {"1561", fx::ValueType::Integer});
  fx::FacadeContainer& places = root.add_container(fx::FacadeKey::string("places"));
  fx::FacadeContainer& ukr = places.add_container(fx::FacadeKey::number(1));
  ukr.add_value(fx::FacadeKey::string("name"), str("Ukrayina"));
  ukr.add_value(fx::FacadeKey::string("type"), str("nation"));
  fx::FacadeContainer& mos = places.add_container(fx::FacadeKey::number(2));
  mos.add_value(fx::FacadeKey::string("name"), str("Moskva, Rossiya"));
  mos.add_value(fx::FacadeKey::string("type"), str("inhabited_place"));
  root.add_value(fx::FacadeKey::string("url"),
                 str("http://www.tate.org.uk/art/artists/kazimir-malevich-1561"));
  return tree;
}

bool has_axiom(const fx::ValidationReport& r, std::string_view axiom) {
  return std::any_of(r.begin(), r.end(), [&](const fx::Violation& v) { return v.axiom == axiom; });
}

// Subject of the single triple with this predicate and object.
rdf::Term subject_of(const rdf::Graph& g, const rdf::Term& p, const rdf::Term& o) {
  for (const rdf::Triple& t : g.triples())
    if (t.predicate == p && t.object == o) return t.subject;
  FAIL("no subject for " << p.value);
  return {};
}

rdf::Term object_of(const rdf::Graph& g, const rdf::Term& s, const rdf::Term& p) {
  for (const rdf::Triple& t : g.triples())
    if (t.subject == s && t.predicate == p) return t.object;
  FAIL("no object for " << p.value);
  return {};
}

}  // namespace

TEST_CASE("empty root validates and maps to one triple") {
  fx::FacadeTree tree;
  CHECK(fx::validate_tree(tree).empty());
  rdf::Graph g = fx::tree_to_graph(tree, {});
  REQUIRE(g.size() == 1);
  rdf::Triple t = g.triple(0);
  CHECK(t.subject.is_blank());
  CHECK(t.predicate.value == kRdf + "type");
  CHECK(t.object.value == "http://sparql.xyz/facade-x/ns/Root");
}

TEST_CASE("malevich tree conforms") { CHECK(fx::validate_tree(malevich()).empty()); }

TEST_CASE("duplicate key violates uniqueness") {
  fx::FacadeTree tree;
  tree.root->add_value(fx::FacadeKey::string("id"), str("1"));
  tree.root->add_value(fx::FacadeKey::string("id"), str("2"));
  fx::ValidationReport r = fx::validate_tree(tree);
  REQUIRE(r.size() == 1);
  CHECK(r[0].axiom == fx::axiom::kSlotKeyUnique);
  CHECK_THROWS_AS(fx::tree_to_graph(tree, {}), fx::ValidationError);
}

TEST_CASE("each axiom is detected") {
  SUBCASE("missing root") {
    fx::FacadeTree tree;
    tree.root.reset();
    CHECK(has_axiom(fx::validate_tree(tree), fx::axiom::kRootPresent));
  }
  SUBCASE("empty string key") {
    fx::FacadeTree tree;
    tree.root->add_value(fx::FacadeKey::string(""), str("x"));
    CHECK(has_axiom(fx::validate_tree(tree), fx::axiom::kStringKeyNonEmpty));
  }
  SUBCASE("number key zero") {
    fx::FacadeTree tree;
    tree.root->add_value(fx::FacadeKey::number(0), str("x"));
    CHECK(has_axiom(fx::validate_tree(tree), fx::axiom::kNumberKeyPositive));
  }
  SUBCASE("slot with both contents") {
    fx::FacadeTree tree;
    tree.root->slots.push_back({fx::FacadeKey::number(1), std::make_shared<fx::FacadeContainer>(), str("x")});
    CHECK(has_axiom(fx::validate_tree(tree), fx::axiom::kSlotContentExclusive));
  }
  SUBCASE("slot with no content") {
    fx::FacadeTree tree;
    tree.root->slots.push_back({fx::FacadeKey::number(1), nullptr, std::nullopt});
    CHECK(has_axiom(fx::validate_tree(tree), fx::axiom::kSlotContentPresent));
  }
  SUBCASE("shared child") {
    fx::FacadeTree tree;
    auto child = std::make_shared<fx::FacadeContainer>();
    tree.root->slots.push_back({fx::FacadeKey::number(1), child, std::nullopt});
    tree.root->slots.push_back({fx::FacadeKey::number(2), child, std::nullopt});
    CHECK(has_axiom(fx::validate_tree(tree), fx::axiom::kSingleParent));
  }
  SUBCASE("bad integer lexical") {
    fx::FacadeTree tree;
    tree.root->add_value(fx::FacadeKey::number(1), {"12a", fx::ValueType::Integer});
    CHECK(has_axiom(fx::validate_tree(tree), fx::axiom::kValueLexical));
  }
  SUBCASE("empty type label") {
    fx::FacadeTree tree;
    tree.root->types.push_back("");
    CHECK(has_axiom(fx::validate_tree(tree), fx::axiom::kTypeLabelNonEmpty));
  }
}

TEST_CASE("violation paths name the nested slot") {
  fx::FacadeTree tree;
  fx::FacadeContainer& places = tree.root->add_container(fx::FacadeKey::string("places"));
  places.add_value(fx::FacadeKey::number(0), str("x"));
  fx::ValidationReport r = fx::validate_tree(tree);
  REQUIRE(r.size() == 1);
  CHECK(r[0].path == "/places/0");
}

TEST_CASE("key properties") {
  fx::MintingConfig cfg;
  CHECK(fx::mint_key_property("artistId", cfg) == kData + "artistId");
  CHECK(fx::mint_key_property("id", cfg) == kData + "id");
  CHECK(fx::mint_key_property("a b", cfg) == kData + "a%20b");
  CHECK(fx::mint_key_property("x.y_z-1", cfg) == kData + "x.y_z-1");
  CHECK(fx::mint_key_property("\xC3\xA9", cfg) == kData + "%C3%A9");
  CHECK(fx::mint_key_property("a/b#c", cfg) == kData + "a%2Fb%23c");
}

TEST_CASE("membership properties") {
  CHECK(fx::membership_property(1) == kRdf + "_1");
  CHECK(fx::membership_property(2) == kRdf + "_2");
  CHECK_THROWS_AS(fx::membership_property(0), facadex::PreconditionError);
}

TEST_CASE("config checking") {
  fx::MintingConfig cfg;
  CHECK_NOTHROW(fx::check_config(cfg));
  cfg.data_namespace = "http://example.org/ns";
  CHECK_THROWS_AS(fx::check_config(cfg), facadex::ConfigError);
  cfg.data_namespace = "relative/";
  CHECK_THROWS_AS(fx::check_config(cfg), facadex::ConfigError);
  cfg.data_namespace = "http://example.org/ns#";
  CHECK_NOTHROW(fx::check_config(cfg));
}

TEST_CASE("malevich graph") {
  rdf::Graph g = fx::tree_to_graph(malevich(), {});
  auto p = [](const std::string& k) { return rdf::Term::iri(kData + k); };
  rdf::Term root = subject_of(g, rdf::Term::iri(kRdf + "type"),
                              rdf::Term::iri("http://sparql.xyz/facade-x/ns/Root"));
  CHECK(root.is_blank());
  CHECK(g.contains({root, p("fc"), rdf::Term::literal("Kazimir Malevich")}));
  CHECK(g.contains({root, p("id"), rdf::Term::literal("1561", rdf::vocab::kXsdInteger)}));
  rdf::Term places = object_of(g, root, p("places"));
  CHECK(places.is_blank());
  rdf::Term ukr = object_of(g, places, rdf::Term::iri(kRdf + "_1"));
  CHECK(g.contains({ukr, p("name"), rdf::Term::literal("Ukrayina")}));
  rdf::Term mos = object_of(g, places, rdf::Term::iri(kRdf + "_2"));
  CHECK(g.contains({mos, p("type"), rdf::Term::literal("inhabited_place")}));
  // 1 root type + 4 root slots + 2 place slots + 2 * 2 leaf values.
  CHECK(g.size() == 11);
}

TEST_CASE("root iri and custom namespace") {
  fx::FacadeTree tree;
  tree.root->add_value(fx::FacadeKey::string("k"), str("v"));
  fx::MintingConfig cfg;
  cfg.data_namespace = "http://example.org/d#";
  cfg.root_iri = "http://example.org/root";
  rdf::Graph g = fx::tree_to_graph(tree, cfg);
  CHECK(g.contains({rdf::Term::iri("http://example.org/root"), rdf::Term::iri("http://example.org/d#k"),
                    rdf::Term::literal("v")}));
}

TEST_CASE("type labels land in the ontology namespace") {
  fx::FacadeTree tree;
  tree.root->types.push_back("OGT");
  rdf::Graph g = fx::tree_to_graph(tree, {});
  CHECK(g.size() == 2);
  rdf::Term root = g.triple(0).subject;
  CHECK(g.contains({root, rdf::Term::iri(kRdf + "type"), rdf::Term::iri("http://sparql.xyz/facade-x/ns/OGT")}));
}

TEST_CASE("flat trees emit n+1 triples") {
  std::mt19937_64 rng(7);
  for (int n = 0; n <= 20; ++n) {
    fx::FacadeTree tree;
    for (int i = 0; i < n; ++i) tree.root->add_value(fx::FacadeKey::string("k" + std::to_string(i)), str("v"));
    CHECK(fx::tree_to_graph(tree, {}).size() == static_cast<std::size_t>(n + 1));
  }
}

TEST_CASE("blank labels follow the prefix") {
  fx::FacadeTree tree;
  tree.root->add_container(fx::FacadeKey::number(1));
  rdf::Graph g = fx::tree_to_graph(tree, {}, "m");
  for (const rdf::Triple& t : g.triples())
    if (t.subject.is_blank()) CHECK(t.subject.value.rfind("m", 0) == 0);
}

TEST_CASE("lexical validation") {
  CHECK(fx::valid_lexical("-12", fx::ValueType::Integer));
  CHECK_FALSE(fx::valid_lexical("1.5", fx::ValueType::Integer));
  CHECK(fx::valid_lexical("1.5", fx::ValueType::Decimal));
  CHECK(fx::valid_lexical("1.5E3", fx::ValueType::Double));
  CHECK(fx::valid_lexical("INF", fx::ValueType::Double));
  CHECK(fx::valid_lexical("true", fx::ValueType::Boolean));
  CHECK_FALSE(fx::valid_lexical("yes", fx::ValueType::Boolean));
  CHECK(fx::valid_lexical("TWFu", fx::ValueType::Base64Binary));
  CHECK(fx::valid_lexical("", fx::ValueType::Base64Binary));
  CHECK_FALSE(fx::valid_lexical("TWF", fx::ValueType::Base64Binary));
  CHECK(fx::valid_lexical("anything", fx::ValueType::String));
}
