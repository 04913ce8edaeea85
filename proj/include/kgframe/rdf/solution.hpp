#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kgframe/rdf/term.hpp"

namespace kgframe {

// A solution mapping: a partial function from variable names to terms.
// Bindings are kept sorted by variable name so equal mappings compare equal.
class Mapping {
 public:
  Mapping() = default;
  Mapping(std::initializer_list<std::pair<std::string, Term>> bindings);

  // Binds var to term; rebinding an existing variable replaces the value.
  void bind(const std::string& var, Term term);
  std::optional<Term> get(const std::string& var) const;
  const Term* find(const std::string& var) const;
  bool binds(const std::string& var) const { return find(var) != nullptr; }

  std::size_t size() const noexcept { return bindings_.size(); }
  bool empty() const noexcept { return bindings_.empty(); }
  std::set<std::string> domain() const;
  const std::vector<std::pair<std::string, Term>>& bindings() const noexcept { return bindings_; }

  // Restriction to the given variables.
  Mapping restrict_to(const std::set<std::string>& vars) const;

  friend bool operator==(const Mapping&, const Mapping&) = default;
  friend auto operator<=>(const Mapping&, const Mapping&) = default;

 private:
  std::vector<std::pair<std::string, Term>> bindings_;
};

// True iff every variable bound in both mappings is bound to the same term.
bool compatible(const Mapping& a, const Mapping& b);

// a ∪ b; requires compatible(a, b).
Mapping merge(const Mapping& a, const Mapping& b);

// A multiset of mappings: base set plus a positive multiplicity per element.
class SolutionBag {
 public:
  using Storage = std::map<Mapping, std::size_t>;

  void add(const Mapping& m, std::size_t multiplicity = 1);
  std::size_t multiplicity(const Mapping& m) const;

  // Number of distinct mappings in the base set.
  std::size_t distinct_size() const noexcept { return items_.size(); }
  // Sum of multiplicities.
  std::size_t total_size() const noexcept;
  bool empty() const noexcept { return items_.empty(); }

  // Union of the domains of all mappings.
  std::set<std::string> variables() const;

  Storage::const_iterator begin() const { return items_.begin(); }
  Storage::const_iterator end() const { return items_.end(); }

  friend bool operator==(const SolutionBag&, const SolutionBag&) = default;

 private:
  Storage items_;
};

// Bag union (⊎): multiplicities add.
SolutionBag bag_union(const SolutionBag& a, const SolutionBag& b);

}  // namespace kgframe
