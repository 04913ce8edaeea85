#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgframe/rdf/solution.hpp"
#include "kgframe/rdf/term.hpp"

namespace kgframe {

// A triple pattern with per-position terms or variables.
struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;

  std::array<const PatternTerm*, 3> positions() const { return {&subject, &predicate, &object}; }
  // Variable names in s, p, o order without duplicates.
  std::vector<std::string> variables() const;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
  friend auto operator<=>(const TriplePattern&, const TriplePattern&) = default;
};

// The set of triples of one named graph with single-position indexes on
// subject, predicate and object. Immutable once loading is done; concurrent
// readers are safe.
class GraphStore {
 public:
  explicit GraphStore(std::string name = {}) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  // Set semantics: returns false when the triple was already present.
  bool insert(const Triple& t);
  void insert_all(std::span<const Triple> triples);

  bool contains(const Triple& t) const { return set_.count(t) != 0; }
  std::size_t size() const noexcept { return triples_.size(); }
  const std::vector<Triple>& triples() const noexcept { return triples_; }

  // Triples matching the bound positions (std::nullopt = wildcard), chosen
  // through the most selective index.
  std::vector<const Triple*> lookup(const std::optional<Term>& s, const std::optional<Term>& p,
                                    const std::optional<Term>& o) const;

 private:
  using Index = std::unordered_map<Term, std::vector<std::size_t>>;

  std::string name_;
  std::vector<Triple> triples_;
  std::unordered_set<Triple> set_;
  Index by_subject_;
  Index by_predicate_;
  Index by_object_;
};

// Evaluates a triple pattern: one mapping of multiplicity 1 per matching
// triple; a repeated variable must bind equal terms.
SolutionBag match_triples(const GraphStore& store, const TriplePattern& pattern);

// Named graphs keyed by graph IRI.
class Dataset {
 public:
  GraphStore& add_graph(const std::string& iri);
  const GraphStore* find(const std::string& iri) const;
  // Throws kgframe::Error for an unknown graph.
  const GraphStore& get(const std::string& iri) const;
  const std::map<std::string, GraphStore>& graphs() const noexcept { return graphs_; }

 private:
  std::map<std::string, GraphStore> graphs_;
};

}  // namespace kgframe
