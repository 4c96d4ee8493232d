#include "galois/satisfaction.hpp"

#include <algorithm>

namespace galois {

namespace {

void check_domains(const FunctionTable& f, const Constraint& c)
{
  if (f.dom_size() != c.a_size() || f.cod_size() != c.b_size()) {
    throw MismatchError("function A/B sizes (" + std::to_string(f.dom_size()) + ", " +
                        std::to_string(f.cod_size()) + ") do not match constraint (" +
                        std::to_string(c.a_size()) + ", " + std::to_string(c.b_size()) + ")");
  }
}

// Visits the rank of f(a^1 ... a^n) for every choice of rows; stops early
// when the visitor returns false. Returns false iff stopped early.
template<typename Visit>
bool for_each_image(const FunctionTable& f, const std::vector<Tuple>& rows, std::uint32_t m,
                    Visit&& visit)
{
  if (rows.empty()) {
    return true;
  }
  const auto n = f.arity();
  const auto a = f.dom_size();
  const auto b = f.cod_size();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Rank out = 0;
    for (std::uint32_t c = 0; c < m; ++c) {
      Rank arg = 0;
      for (std::uint32_t k = 0; k < n; ++k) {
        arg = arg * a + rows[idx[k]][c];
      }
      out = out * b + f.at(arg);
    }
    if (!visit(out)) {
      return false;
    }
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < rows.size()) {
        break;
      }
      idx[k] = 0;
      if (k == 0) {
        return true;
      }
    }
  }
}

// Calls fn(subset) for every subset of [0, universe) of size 1..max_size,
// as ascending rank lists.
template<typename Fn>
void for_each_small_subset(std::uint64_t universe, std::uint32_t max_size, Fn&& fn)
{
  std::vector<Rank> current;
  auto rec = [&](auto&& self, Rank start) -> void {
    for (Rank r = start; r < universe; ++r) {
      current.push_back(r);
      fn(current);
      if (current.size() < max_size) {
        self(self, r + 1);
      }
      current.pop_back();
    }
  };
  rec(rec, 0);
}

} // namespace

Relation image(const FunctionTable& f, const Relation& r)
{
  if (f.dom_size() != r.domain_size()) {
    throw MismatchError("image: function domain size " + std::to_string(f.dom_size()) +
                        " differs from relation domain size " + std::to_string(r.domain_size()));
  }
  Relation out(f.cod_size(), r.arity());
  const auto rows = r.tuples();
  for_each_image(f, rows, r.arity(), [&](Rank t) {
    out.insert(t);
    return true;
  });
  return out;
}

bool satisfies(const FunctionTable& f, const Constraint& c)
{
  check_domains(f, c);
  const auto rows = c.antecedent().tuples();
  const auto& s = c.consequent();
  return for_each_image(f, rows, c.arity(), [&](Rank t) { return s.contains(t); });
}

bool preserves(const FunctionTable& f, const Relation& r)
{
  if (f.dom_size() != f.cod_size()) {
    throw MismatchError("preserves requires an operation (dom = cod)");
  }
  return satisfies(f, Constraint(r, r));
}

SatisfactionTest::SatisfactionTest(const Constraint& c)
: constraint_(c), rows_(c.antecedent().tuples())
{}

bool SatisfactionTest::operator()(const FunctionTable& f) const
{
  check_domains(f, constraint_);
  const auto& s = constraint_.consequent();
  return for_each_image(f, rows_, constraint_.arity(), [&](Rank t) { return s.contains(t); });
}

FunctionClass compose_classes(const FunctionClass& outer, const FunctionClass& inner,
                              std::uint32_t cap, const Budget& budget)
{
  if (outer.dom_size() != inner.cod_size()) {
    throw MismatchError("composition: outer class domain size " + std::to_string(outer.dom_size()) +
                        " differs from inner class codomain size " + std::to_string(inner.cod_size()));
  }
  FunctionClass out(inner.dom_size(), outer.cod_size(), cap);
  for (std::uint32_t m = 1; m <= cap; ++m) {
    const auto& gs_set = inner.at_arity(m);
    if (gs_set.empty()) {
      continue;
    }
    const std::vector<FunctionTable> gs(gs_set.begin(), gs_set.end());
    const auto points = tuple_space(inner.dom_size(), m);
    for (const auto& [n, fs] : outer.by_arity()) {
      const auto combos = checked_pow(gs.size(), n);
      if (!combos || *combos * fs.size() > budget.max_functions) {
        throw BudgetExceeded("composition at arity " + std::to_string(m),
                             pow_string(gs.size(), n), std::to_string(budget.max_functions));
      }
      std::vector<std::size_t> idx(n, 0);
      std::vector<Element> table(points);
      for (const auto& f : fs) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
          for (Rank p = 0; p < points; ++p) {
            Rank arg = 0;
            for (std::uint32_t k = 0; k < n; ++k) {
              arg = arg * f.dom_size() + gs[idx[k]].at(p);
            }
            table[p] = f.at(arg);
          }
          out.insert(FunctionTable(inner.dom_size(), outer.cod_size(), m, table));
          std::size_t k = n;
          bool done = true;
          while (k > 0) {
            --k;
            if (++idx[k] < gs.size()) {
              done = false;
              break;
            }
            idx[k] = 0;
          }
          if (done) {
            break;
          }
        }
      }
    }
  }
  return out;
}

FunctionClass fsc_n(const ConstraintSet& t, std::uint32_t n, const Budget& budget)
{
  FunctionEnumerator all(t.a_size(), t.b_size(), n, budget);
  std::vector<SatisfactionTest> tests;
  for (const auto& c : t.members()) {
    tests.emplace_back(c);
  }
  // Small antecedents reject faster.
  std::stable_sort(tests.begin(), tests.end(), [](const auto& x, const auto& y) {
    return x.constraint().antecedent().size() < y.constraint().antecedent().size();
  });
  FunctionClass out(t.a_size(), t.b_size());
  for (const auto& f : all) {
    if (std::all_of(tests.begin(), tests.end(), [&](const auto& test) { return test(f); })) {
      out.insert(f);
    }
  }
  return out;
}

FunctionClass fsc(const ConstraintSet& t, std::uint32_t cap, const Budget& budget)
{
  FunctionClass out(t.a_size(), t.b_size(), cap);
  for (std::uint32_t n = 1; n <= cap; ++n) {
    out.insert_all(fsc_n(t, n, budget));
  }
  return out;
}

ConstraintSet csf_m(const FunctionClass& k, std::uint32_t m, const Budget& budget)
{
  const ConstraintSpace space(k.dom_size(), k.cod_size(), m, budget);
  const auto members = k.members();
  const std::uint64_t full_b =
    space.b_points() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << space.b_points()) - 1;

  ConstraintSet out(k.dom_size(), k.cod_size());
  for (std::uint64_t ant = 0; ant < space.antecedent_count(); ++ant) {
    const auto r = Relation::from_mask(k.dom_size(), m, ant);
    const auto rows = r.tuples();
    std::uint64_t needed = 0;
    for (const auto& f : members) {
      for_each_image(f, rows, m, [&](Rank t) {
        needed |= std::uint64_t{1} << t;
        return true;
      });
      if (needed == full_b) {
        break;
      }
    }
    // Every consequent containing the union of images is satisfied.
    const std::uint64_t free = full_b & ~needed;
    std::uint64_t sub = free;
    while (true) {
      out.insert(space.at(space.rank(ant, needed | sub)));
      if (sub == 0) {
        break;
      }
      sub = (sub - 1) & free;
    }
  }
  return out;
}

ConstraintSet csf_m(const FunctionClass& k, const ConstraintSet& candidates)
{
  if (k.dom_size() != candidates.a_size() || k.cod_size() != candidates.b_size()) {
    throw MismatchError("csf: class and candidate set have different domains");
  }
  const auto members = k.members();
  ConstraintSet out(candidates.a_size(), candidates.b_size());
  for (const auto& c : candidates.members()) {
    const SatisfactionTest test(c);
    if (std::all_of(members.begin(), members.end(), [&](const auto& f) { return test(f); })) {
      out.insert(c);
    }
  }
  return out;
}

ConstraintSet csf(const FunctionClass& k, std::uint32_t cap, const Budget& budget)
{
  ConstraintSet out(k.dom_size(), k.cod_size(), cap);
  for (std::uint32_t m = 1; m <= cap; ++m) {
    out.insert_all(csf_m(k, m, budget));
  }
  return out;
}

Relation induced_consequent(const FunctionClass& k, const Relation& antecedent)
{
  if (k.dom_size() != antecedent.domain_size()) {
    throw MismatchError("induced consequent: class and antecedent domains differ");
  }
  Relation out(k.cod_size(), antecedent.arity());
  const auto rows = antecedent.tuples();
  for (const auto& [n, fs] : k.by_arity()) {
    for (const auto& f : fs) {
      for_each_image(f, rows, antecedent.arity(), [&](Rank t) {
        out.insert(t);
        return true;
      });
    }
  }
  return out;
}

Constraint trace_constraint(const FunctionClass& k_n, std::span<const Tuple> columns)
{
  if (columns.empty()) {
    throw MismatchError("trace constraint needs at least one column");
  }
  const auto m = static_cast<std::uint32_t>(columns.front().size());
  for (const auto& col : columns) {
    if (col.size() != m) {
      throw MismatchError("trace constraint columns have mixed arities");
    }
  }
  const auto n = static_cast<std::uint32_t>(columns.size());
  for (const auto arity : k_n.arities()) {
    if (arity != n) {
      throw MismatchError("trace constraint: class member of arity " + std::to_string(arity) + " for " +
                          std::to_string(n) + " columns");
    }
  }
  Relation ant(k_n.dom_size(), m);
  for (const auto& col : columns) {
    ant.insert(col);
  }
  Relation cons(k_n.cod_size(), m);
  Tuple args(n);
  Tuple value(m);
  for (const auto& f : k_n.at_arity(n)) {
    for (std::uint32_t i = 0; i < m; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        args[j] = columns[j][i];
      }
      value[i] = f(args);
    }
    cons.insert(value);
  }
  return {std::move(ant), std::move(cons)};
}

FunctionClass fsc_n_of_csf_m(const FunctionClass& k, std::uint32_t n, std::uint32_t m,
                             const Budget& budget)
{
  FunctionEnumerator all(k.dom_size(), k.cod_size(), n, budget);
  const auto points = tuple_space(k.dom_size(), m);

  // Antecedents spanned by n columns: every non-empty subset of A^m with at
  // most n members. Larger antecedents add nothing, since gR is the union
  // of gF over the subsets F of R with |F| <= n.
  std::vector<SatisfactionTest> tests;
  std::uint64_t visited = 0;
  for_each_small_subset(points, n, [&](const std::vector<Rank>& subset) {
    if (++visited > budget.max_constraints) {
      throw BudgetExceeded("trace antecedents in A^" + std::to_string(m), "> " + std::to_string(visited),
                           std::to_string(budget.max_constraints));
    }
    Relation ant(k.dom_size(), m);
    for (const auto r : subset) {
      ant.insert(r);
    }
    auto cons = induced_consequent(k, ant);
    if (cons.size() < cons.universe()) {
      tests.emplace_back(Constraint(std::move(ant), std::move(cons)));
    }
  });
  std::stable_sort(tests.begin(), tests.end(), [](const auto& x, const auto& y) {
    return x.constraint().consequent().size() < y.constraint().consequent().size();
  });

  FunctionClass out(k.dom_size(), k.cod_size());
  for (const auto& g : all) {
    if (std::all_of(tests.begin(), tests.end(), [&](const auto& test) { return test(g); })) {
      out.insert(g);
    }
  }
  return out;
}

FunctionClass run_query(const GaloisQuery& query, const ConstraintSet& t)
{
  if (query.side != GaloisQuery::Side::functions_from_constraints) {
    throw MismatchError("query side expects a function class");
  }
  if (query.arity == 0) {
    throw RangeError("query arity must be positive");
  }
  return query.selector == GaloisQuery::Selector::single ? fsc_n(t, query.arity, query.budget)
                                                         : fsc(t, query.arity, query.budget);
}

ConstraintSet run_query(const GaloisQuery& query, const FunctionClass& k)
{
  if (query.side != GaloisQuery::Side::constraints_from_functions) {
    throw MismatchError("query side expects a constraint set");
  }
  if (query.arity == 0) {
    throw RangeError("query arity must be positive");
  }
  return query.selector == GaloisQuery::Selector::single ? csf_m(k, query.arity, query.budget)
                                                         : csf(k, query.arity, query.budget);
}

} // namespace galois
