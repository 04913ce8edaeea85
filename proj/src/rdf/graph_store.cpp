#include "kgframe/rdf/graph_store.hpp"

#include <algorithm>

#include "kgframe/error.hpp"

namespace kgframe {

std::vector<std::string> TriplePattern::variables() const {
  std::vector<std::string> vars;
  for (const PatternTerm* p : positions()) {
    if (const auto* v = std::get_if<Variable>(p))
      if (std::find(vars.begin(), vars.end(), v->name) == vars.end()) vars.push_back(v->name);
  }
  return vars;
}

bool GraphStore::insert(const Triple& t) {
  if (!set_.insert(t).second) return false;
  std::size_t id = triples_.size();
  triples_.push_back(t);
  by_subject_[t.subject].push_back(id);
  by_predicate_[t.predicate].push_back(id);
  by_object_[t.object].push_back(id);
  return true;
}

void GraphStore::insert_all(std::span<const Triple> triples) {
  for (const auto& t : triples) insert(t);
}

std::vector<const Triple*> GraphStore::lookup(const std::optional<Term>& s, const std::optional<Term>& p,
                                              const std::optional<Term>& o) const {
  static const std::vector<std::size_t> kEmpty;
  const std::vector<std::size_t>* candidates = nullptr;
  auto consider = [&](const Index& index, const std::optional<Term>& key) {
    if (!key) return;
    auto it = index.find(*key);
    const auto& ids = it == index.end() ? kEmpty : it->second;
    if (!candidates || ids.size() < candidates->size()) candidates = &ids;
  };
  consider(by_subject_, s);
  consider(by_predicate_, p);
  consider(by_object_, o);

  std::vector<const Triple*> out;
  auto keep = [&](const Triple& t) {
    return (!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o);
  };
  if (!candidates) {
    out.reserve(triples_.size());
    for (const auto& t : triples_) out.push_back(&t);
    return out;
  }
  for (std::size_t id : *candidates)
    if (keep(triples_[id])) out.push_back(&triples_[id]);
  return out;
}

SolutionBag match_triples(const GraphStore& store, const TriplePattern& pattern) {
  auto ground = [](const PatternTerm& p) -> std::optional<Term> {
    if (const auto* t = std::get_if<Term>(&p)) return *t;
    return std::nullopt;
  };
  SolutionBag bag;
  for (const Triple* t : store.lookup(ground(pattern.subject), ground(pattern.predicate), ground(pattern.object))) {
    Mapping m;
    bool ok = true;
    const Term* values[3] = {&t->subject, &t->predicate, &t->object};
    auto positions = pattern.positions();
    for (std::size_t i = 0; i < 3 && ok; ++i) {
      const auto* var = std::get_if<Variable>(positions[i]);
      if (!var) continue;
      if (const Term* bound = m.find(var->name)) ok = *bound == *values[i];
      else m.bind(var->name, *values[i]);
    }
    if (ok) bag.add(m);
  }
  return bag;
}

GraphStore& Dataset::add_graph(const std::string& iri) {
  auto it = graphs_.find(iri);
  if (it == graphs_.end()) it = graphs_.emplace(iri, GraphStore(iri)).first;
  return it->second;
}

const GraphStore* Dataset::find(const std::string& iri) const {
  auto it = graphs_.find(iri);
  return it == graphs_.end() ? nullptr : &it->second;
}

const GraphStore& Dataset::get(const std::string& iri) const {
  if (const auto* g = find(iri)) return *g;
  throw Error("unknown graph: <" + iri + ">");
}

}  // namespace kgframe
