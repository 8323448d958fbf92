#include "facadex/rdf/isomorphism.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

namespace facadex::rdf {

namespace {

using Colors = std::unordered_map<std::string, std::size_t>;

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

// Iterated neighbourhood hashing (colour refinement) over blank nodes.
Colors refine(const std::vector<Triple>& triples) {
  Colors colors;
  for (const Triple& t : triples) {
    if (t.subject.is_blank()) colors[t.subject.value] = 1;
    if (t.object.is_blank()) colors[t.object.value] = 1;
  }
  TermHash th;
  auto term_color = [&](const Term& t, const Colors& c) {
    return t.is_blank() ? mix(0xb1a4c, c.at(t.value)) : th(t);
  };
  for (int round = 0; round < 6; ++round) {
    std::unordered_map<std::string, std::vector<std::size_t>> sigs;
    for (const Triple& t : triples) {
      std::size_t p = th(t.predicate);
      if (t.subject.is_blank())
        sigs[t.subject.value].push_back(mix(mix(1, p), term_color(t.object, colors)));
      if (t.object.is_blank())
        sigs[t.object.value].push_back(mix(mix(2, p), term_color(t.subject, colors)));
    }
    Colors next;
    for (auto& [label, list] : sigs) {
      std::sort(list.begin(), list.end());
      std::size_t h = colors.at(label);
      for (std::size_t v : list) h = mix(h, v);
      next[label] = h;
    }
    colors = std::move(next);
  }
  return colors;
}

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  std::vector<Triple> ta = a.triples();
  std::vector<Triple> tb = b.triples();

  auto ground = [](const Triple& t) { return !t.subject.is_blank() && !t.object.is_blank(); };
  std::size_t ground_a = 0;
  for (const Triple& t : ta) {
    if (ground(t)) {
      ++ground_a;
      if (!b.contains(t)) return false;
    }
  }
  std::size_t ground_b = static_cast<std::size_t>(std::count_if(tb.begin(), tb.end(), ground));
  if (ground_a != ground_b) return false;

  Colors ca = refine(ta);
  Colors cb = refine(tb);
  if (ca.size() != cb.size()) return false;

  std::map<std::size_t, std::vector<std::string>> class_b;
  for (const auto& [label, c] : cb) class_b[c].push_back(label);
  std::map<std::size_t, std::size_t> count_a;
  for (const auto& [label, c] : ca) ++count_a[c];
  for (const auto& [c, n] : count_a) {
    auto it = class_b.find(c);
    if (it == class_b.end() || it->second.size() != n) return false;
  }

  // Order A's blank nodes by class size so singleton classes are fixed first.
  std::vector<std::string> order;
  for (const auto& [label, c] : ca) order.push_back(label);
  std::sort(order.begin(), order.end(), [&](const std::string& x, const std::string& y) {
    std::size_t sx = count_a[ca[x]], sy = count_a[ca[y]];
    return sx != sy ? sx < sy : x < y;
  });

  // Triples of A indexed by the blank nodes they mention.
  std::unordered_map<std::string, std::vector<std::size_t>> touching;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].subject.is_blank()) touching[ta[i].subject.value].push_back(i);
    if (ta[i].object.is_blank() && ta[i].object != ta[i].subject)
      touching[ta[i].object.value].push_back(i);
  }

  std::unordered_map<std::string, std::string> mapping;
  std::unordered_map<std::string, bool> used;

  auto map_term = [&](const Term& t, bool& complete) -> Term {
    if (!t.is_blank()) return t;
    auto it = mapping.find(t.value);
    if (it == mapping.end()) {
      complete = false;
      return t;
    }
    return Term::blank(it->second);
  };

  auto consistent = [&](const std::string& label) {
    for (std::size_t idx : touching[label]) {
      bool complete = true;
      Triple m{map_term(ta[idx].subject, complete), ta[idx].predicate,
               map_term(ta[idx].object, complete)};
      if (complete && !b.contains(m)) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == order.size()) return true;
    const std::string& label = order[i];
    for (const std::string& cand : class_b[ca[label]]) {
      if (used[cand]) continue;
      mapping[label] = cand;
      used[cand] = true;
      if (consistent(label) && search(i + 1)) return true;
      used[cand] = false;
      mapping.erase(label);
    }
    return false;
  };
  return search(0);
}

}  // namespace facadex::rdf
