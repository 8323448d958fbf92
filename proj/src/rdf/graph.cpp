#include "facadex/rdf/graph.hpp"

namespace facadex::rdf {

const std::vector<std::uint32_t> Graph::kEmpty;

TermId Graph::intern(const Term& t) {
  auto [it, inserted] = ids_.try_emplace(t, static_cast<TermId>(terms_.size()));
  if (inserted) terms_.push_back(t);
  return it->second;
}

bool Graph::add(const Triple& t) {
  IdTriple id{intern(t.subject), intern(t.predicate), intern(t.object)};
  if (!seen_.insert(id).second) return false;
  auto idx = static_cast<std::uint32_t>(triples_.size());
  triples_.push_back(id);
  if (by_s_.size() < terms_.size()) {
    by_s_.resize(terms_.size());
    by_p_.resize(terms_.size());
    by_o_.resize(terms_.size());
  }
  by_s_[id.s].push_back(idx);
  by_p_[id.p].push_back(idx);
  by_o_[id.o].push_back(idx);
  return true;
}

std::optional<TermId> Graph::lookup(const Term& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool Graph::contains(const Triple& t) const {
  auto s = lookup(t.subject);
  auto p = lookup(t.predicate);
  auto o = lookup(t.object);
  if (!s || !p || !o) return false;
  return seen_.count(IdTriple{*s, *p, *o}) > 0;
}

Triple Graph::triple(std::size_t i) const {
  const IdTriple& t = triples_[i];
  return Triple{terms_[t.s], terms_[t.p], terms_[t.o]};
}

std::vector<Triple> Graph::triples() const {
  std::vector<Triple> out;
  out.reserve(triples_.size());
  for (std::size_t i = 0; i < triples_.size(); ++i) out.push_back(triple(i));
  return out;
}

std::size_t Graph::estimate(TermId s, TermId p, TermId o) const {
  std::size_t best = triples_.size();
  auto consider = [&](TermId id, const std::vector<std::vector<std::uint32_t>>& index) {
    std::size_t n = id < index.size() ? index[id].size() : 0;
    if (n < best) best = n;
  };
  if (s != kNoTerm) consider(s, by_s_);
  if (p != kNoTerm) consider(p, by_p_);
  if (o != kNoTerm) consider(o, by_o_);
  return best;
}

std::vector<TermId> Graph::nodes() const {
  std::vector<TermId> out;
  std::vector<bool> seen(terms_.size(), false);
  for (const IdTriple& t : triples_) {
    if (!seen[t.s]) {
      seen[t.s] = true;
      out.push_back(t.s);
    }
    if (!seen[t.o]) {
      seen[t.o] = true;
      out.push_back(t.o);
    }
  }
  return out;
}

const Graph* Dataset::find(const Term& name) const {
  for (const NamedGraph& g : named)
    if (g.name == name) return g.graph.get();
  return nullptr;
}

}  // namespace facadex::rdf
