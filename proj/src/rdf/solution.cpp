#include "kgframe/rdf/solution.hpp"

#include <algorithm>

namespace kgframe {

Mapping::Mapping(std::initializer_list<std::pair<std::string, Term>> bindings) {
  for (const auto& [var, term] : bindings) bind(var, term);
}

void Mapping::bind(const std::string& var, Term term) {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), var,
                             [](const auto& b, const std::string& v) { return b.first < v; });
  if (it != bindings_.end() && it->first == var) it->second = std::move(term);
  else bindings_.insert(it, {var, std::move(term)});
}

const Term* Mapping::find(const std::string& var) const {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), var,
                             [](const auto& b, const std::string& v) { return b.first < v; });
  if (it != bindings_.end() && it->first == var) return &it->second;
  return nullptr;
}

std::optional<Term> Mapping::get(const std::string& var) const {
  if (const Term* t = find(var)) return *t;
  return std::nullopt;
}

std::set<std::string> Mapping::domain() const {
  std::set<std::string> out;
  for (const auto& b : bindings_) out.insert(b.first);
  return out;
}

Mapping Mapping::restrict_to(const std::set<std::string>& vars) const {
  Mapping out;
  for (const auto& b : bindings_)
    if (vars.count(b.first)) out.bindings_.push_back(b);
  return out;
}

bool compatible(const Mapping& a, const Mapping& b) {
  const auto& x = a.bindings();
  const auto& y = b.bindings();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].first < y[j].first) ++i;
    else if (y[j].first < x[i].first) ++j;
    else {
      if (!(x[i].second == y[j].second)) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

Mapping merge(const Mapping& a, const Mapping& b) {
  Mapping out = a;
  for (const auto& [var, term] : b.bindings())
    if (!out.binds(var)) out.bind(var, term);
  return out;
}

void SolutionBag::add(const Mapping& m, std::size_t multiplicity) {
  if (multiplicity == 0) return;
  items_[m] += multiplicity;
}

std::size_t SolutionBag::multiplicity(const Mapping& m) const {
  auto it = items_.find(m);
  return it == items_.end() ? 0 : it->second;
}

std::size_t SolutionBag::total_size() const noexcept {
  std::size_t n = 0;
  for (const auto& [m, count] : items_) n += count;
  return n;
}

std::set<std::string> SolutionBag::variables() const {
  std::set<std::string> vars;
  for (const auto& [m, count] : items_)
    for (const auto& b : m.bindings()) vars.insert(b.first);
  return vars;
}

SolutionBag bag_union(const SolutionBag& a, const SolutionBag& b) {
  SolutionBag out = a;
  for (const auto& [m, count] : b) out.add(m, count);
  return out;
}

}  // namespace kgframe
