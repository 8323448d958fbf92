#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "facadex/rdf/term.hpp"

namespace facadex::rdf {

using TermId = std::uint32_t;
inline constexpr TermId kNoTerm = std::numeric_limits<TermId>::max();

struct IdTriple {
  TermId s;
  TermId p;
  TermId o;
  friend bool operator==(const IdTriple&, const IdTriple&) = default;
};

// A set of triples with insertion order preserved. Terms are dictionary
// encoded per graph; subject, predicate and object positions are indexed so
// that any pattern with at least one bound position avoids a full scan.
class Graph {
 public:
  Graph() = default;

  // Returns false when the triple was already present.
  bool add(const Triple& t);
  bool add(Term s, Term p, Term o) { return add(Triple{std::move(s), std::move(p), std::move(o)}); }

  bool contains(const Triple& t) const;
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  std::optional<TermId> lookup(const Term& t) const;
  const Term& term(TermId id) const { return terms_[id]; }
  std::size_t term_count() const { return terms_.size(); }

  const std::vector<IdTriple>& id_triples() const { return triples_; }
  Triple triple(std::size_t i) const;
  std::vector<Triple> triples() const;

  // Calls fn(const IdTriple&) for every triple matching the pattern, where
  // kNoTerm is a wildcard. Iteration stops early if fn returns false.
  template <typename Fn>
  void for_each_match(TermId s, TermId p, TermId o, Fn&& fn) const {
    const std::vector<std::uint32_t>* best = nullptr;
    auto consider = [&](TermId id, const std::vector<std::vector<std::uint32_t>>& index) {
      const std::vector<std::uint32_t>& list = id < index.size() ? index[id] : kEmpty;
      if (best == nullptr || list.size() < best->size()) best = &list;
    };
    if (s != kNoTerm) consider(s, by_s_);
    if (p != kNoTerm) consider(p, by_p_);
    if (o != kNoTerm) consider(o, by_o_);
    auto matches = [&](const IdTriple& t) {
      return (s == kNoTerm || t.s == s) && (p == kNoTerm || t.p == p) &&
             (o == kNoTerm || t.o == o);
    };
    if (best == nullptr) {
      for (const IdTriple& t : triples_)
        if (!fn(t)) return;
      return;
    }
    for (std::uint32_t idx : *best) {
      const IdTriple& t = triples_[idx];
      if (matches(t) && !fn(t)) return;
    }
  }

  // Number of triples that a pattern would scan through its best index;
  // used for join ordering.
  std::size_t estimate(TermId s, TermId p, TermId o) const;

  // Every term occurring in subject or object position, in first-seen order.
  std::vector<TermId> nodes() const;

 private:
  struct IdTripleHash {
    std::size_t operator()(const IdTriple& t) const noexcept {
      std::uint64_t h = t.s;
      h = h * 0x9E3779B97F4A7C15ULL + t.p;
      h = h * 0x9E3779B97F4A7C15ULL + t.o;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  TermId intern(const Term& t);

  static const std::vector<std::uint32_t> kEmpty;

  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> ids_;
  std::vector<IdTriple> triples_;
  std::unordered_set<IdTriple, IdTripleHash> seen_;
  std::vector<std::vector<std::uint32_t>> by_s_;
  std::vector<std::vector<std::uint32_t>> by_p_;
  std::vector<std::vector<std::uint32_t>> by_o_;
};

struct NamedGraph {
  Term name;
  std::shared_ptr<const Graph> graph;
};

// An RDF dataset: one default graph plus any number of named graphs. Graphs
// are shared immutable values so the same graph can sit in several slots.
struct Dataset {
  std::shared_ptr<const Graph> default_graph = std::make_shared<Graph>();
  std::vector<NamedGraph> named;

  const Graph* find(const Term& name) const;
};

}  // namespace facadex::rdf
