#include "checks.hpp"

#include <random>

#include "fuzz.hpp"
#include "kgframe/error.hpp"
#include "kgframe/oracle/algebra.hpp"
#include "kgframe/oracle/relational.hpp"
#include "kgframe/oracle/table.hpp"
#include "kgframe/query/generator.hpp"

namespace kgframe::testing {

std::optional<std::string> compilation_case(std::uint64_t seed, bool naive) {
  FuzzCase c = random_case(seed);
  try {
    ResultTable oracle = eval_frame_relational(c.frame, c.data);
    QueryModel m = naive ? naive_generate(c.frame) : generate(c.frame);
    validate(m);
    std::vector<std::string> cols = visible_vars(m);
    ResultTable got = solution_to_table(eval_pattern(*lower_model(m), c.data), &cols);
    if (auto d = bag_difference(oracle, got)) return "seed " + std::to_string(seed) + ": " + *d + "\n  " + c.trace;
    return std::nullopt;
  } catch (const Error& e) {
    return "seed " + std::to_string(seed) + ": " + e.what() + "\n  " + c.trace;
  }
}

namespace {

const char* kVars[] = {"a", "b", "c", "d"};

struct Pattern {
  NodePtr node;
  std::vector<std::string> vars;  // every variable that can be bound
};

std::string var(std::mt19937_64& rng) { return kVars[std::uniform_int_distribution<int>(0, 3)(rng)]; }

Term pred(std::mt19937_64& rng) {
  return Term::iri(std::string(kFuzzNs) + "p" + std::to_string(std::uniform_int_distribution<int>(0, 3)(rng)));
}

void add_vars(std::vector<std::string>& out, const std::vector<std::string>& vs) {
  for (const auto& v : vs)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

Pattern random_triple(std::mt19937_64& rng) {
  std::string s = var(rng), o;
  do o = var(rng);
  while (o == s);
  TriplePattern t{Variable{s}, pred(rng), Variable{o}};
  return {algebra::triple(t), {s, o}};
}

// A triple, or a triple with an optional extension so that nulls show up.
Pattern random_pattern(std::mt19937_64& rng) {
  Pattern p = random_triple(rng);
  if (std::bernoulli_distribution(0.4)(rng)) {
    Pattern q = random_triple(rng);
    p.node = algebra::left_join(p.node, q.node);
    add_vars(p.vars, q.vars);
  }
  return p;
}

ResultTable table_of(const SolutionBag& bag, const std::vector<std::string>& cols) {
  return solution_to_table(bag, &cols);
}

Condition random_condition(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0:
      return Condition::is_uri();
    case 1:
      return Condition::compare("!=", Term::iri(std::string(kFuzzNs) + "e1"));
    case 2:
      return Condition::regex("e[0-2]");
    default:
      return Condition::compare("<", Term::integer(3));
  }
}

std::optional<std::string> compare(const ResultTable& algebra_side, const ResultTable& relational_side) {
  return bag_difference(relational_side, algebra_side);
}

}  // namespace

std::array<std::optional<std::string>, 7> operator_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Dataset data = random_dataset(rng, 20);
  Pattern p1 = random_pattern(rng), p2 = random_pattern(rng);
  SolutionBag b1 = eval_pattern(*p1.node, data), b2 = eval_pattern(*p2.node, data);
  ResultTable t1 = table_of(b1, p1.vars), t2 = table_of(b2, p2.vars);
  std::vector<std::string> both = p1.vars;
  add_vars(both, p2.vars);

  std::array<std::optional<std::string>, 7> out;
  auto run = [&](std::size_t i, auto&& body) {
    try {
      out[i] = body();
    } catch (const Error& e) {
      out[i] = std::string("threw: ") + e.what();
    }
  };

  run(0, [&] {
    return compare(table_of(eval_pattern(*algebra::join(p1.node, p2.node), data), both),
                   relational::join(t1, t2, JoinType::kInner));
  });
  run(1, [&] {
    return compare(table_of(eval_pattern(*algebra::left_join(p1.node, p2.node), data), both),
                   relational::join(t1, t2, JoinType::kLeftOuter));
  });
  run(2, [&] {
    return compare(table_of(eval_pattern(*algebra::union_of(p1.node, p2.node), data), both),
                   relational::padded_union(t1, t2));
  });
  run(3, [&] {
    static const char* kExprs[] = {"bound(?b)", "str(?a)", "?a = ?c", "isIRI(?d)"};
    std::string text = kExprs[std::uniform_int_distribution<int>(0, 3)(rng)];
    ExprPtr e = parse_expression(text, {});
    std::vector<std::string> cols = p1.vars;
    cols.push_back("e_new");
    // relational side: a computed column, null where the expression errs
    ResultTable rel = t1;
    rel.columns.push_back("e_new");
    for (auto& r : rel.rows) {
      Bindings lookup = [&](const std::string& v) -> const Term* {
        auto i = t1.index_of(v);
        return i && r[*i] ? &*r[*i] : nullptr;
      };
      r.push_back(evaluate_expression(*e, lookup));
    }
    return compare(table_of(eval_pattern(*algebra::extend(p1.node, "e_new", e), data), cols), rel);
  });
  run(4, [&] {
    std::string v = p1.vars[std::uniform_int_distribution<std::size_t>(0, p1.vars.size() - 1)(rng)];
    Condition c = random_condition(rng);
    return compare(table_of(eval_pattern(*algebra::filter(p1.node, {{v, c}}), data), p1.vars),
                   relational::select(t1, {{v, {c}}}));
  });
  run(5, [&] {
    std::vector<std::string> keep = p1.vars;
    std::shuffle(keep.begin(), keep.end(), rng);
    keep.resize(std::uniform_int_distribution<std::size_t>(1, keep.size())(rng));
    return compare(table_of(eval_pattern(*algebra::project(p1.node, keep), data), keep),
                   relational::project(t1, keep));
  });
  run(6, [&] {
    std::vector<std::string> keys;
    if (std::bernoulli_distribution(0.7)(rng)) keys.push_back(p1.vars[0]);
    auto fn = static_cast<AggFn>(std::uniform_int_distribution<int>(0, 5)(rng));
    std::string src = p1.vars.back();
    std::vector<Aggregation> aggs{{fn, src, "g_new", std::bernoulli_distribution(0.5)(rng)}};
    std::vector<std::string> cols = keys;
    cols.push_back("g_new");
    return compare(table_of(eval_pattern(*algebra::group_agg(p1.node, keys, aggs), data), cols),
                   relational::group(t1, keys, aggs));
  });
  return out;
}

}  // namespace kgframe::testing
