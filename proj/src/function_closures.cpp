#include "galois/function_closures.hpp"

#include <unordered_set>

namespace galois {

SubstitutionMap::SubstitutionMap(std::uint32_t target_arity_, std::vector<std::uint32_t> assignment_)
: source_arity(static_cast<std::uint32_t>(assignment_.size())), target_arity(target_arity_),
  assignment(std::move(assignment_))
{
  if (source_arity == 0 || target_arity == 0) {
    throw RangeError("substitution arities must be positive");
  }
  for (const auto s : assignment) {
    if (s < 1 || s > target_arity) {
      throw RangeError("substitution coordinate " + std::to_string(s) + " outside 1.." +
                       std::to_string(target_arity));
    }
  }
}

SubstitutionMap SubstitutionMap::identity(std::uint32_t n)
{
  std::vector<std::uint32_t> a(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    a[i] = i + 1;
  }
  return {n, std::move(a)};
}

FunctionTable substitute(const FunctionTable& f, const SubstitutionMap& s)
{
  if (s.source_arity != f.arity()) {
    throw MismatchError("substitution of source arity " + std::to_string(s.source_arity) +
                        " applied to function of arity " + std::to_string(f.arity()));
  }
  const auto a = f.dom_size();
  const auto points = tuple_space(a, s.target_arity);
  std::vector<Element> table(points);
  for (Rank r = 0; r < points; ++r) {
    const auto x = unrank_tuple(r, a, s.target_arity);
    Rank arg = 0;
    for (const auto coord : s.assignment) {
      arg = arg * a + x[coord - 1];
    }
    table[r] = f.at(arg);
  }
  return {a, f.cod_size(), s.target_arity, std::move(table)};
}

std::vector<SubstitutionMap> all_substitution_maps(std::uint32_t source_arity,
                                                   std::uint32_t target_arity)
{
  std::vector<SubstitutionMap> out;
  std::vector<std::uint32_t> a(source_arity, 1);
  while (true) {
    out.emplace_back(target_arity, a);
    std::size_t k = source_arity;
    while (k > 0) {
      --k;
      if (++a[k] <= target_arity) {
        break;
      }
      a[k] = 1;
      if (k == 0) {
        return out;
      }
    }
  }
}

FunctionClass vs_n_closure(const FunctionClass& k_n)
{
  FunctionClass out(k_n.dom_size(), k_n.cod_size());
  const auto arities = k_n.arities();
  if (arities.empty()) {
    return out;
  }
  if (arities.size() > 1) {
    throw MismatchError("vs_n closure expects a single-arity class");
  }
  const auto n = arities.front();
  const auto maps = all_substitution_maps(n, n);
  for (const auto& f : k_n.at_arity(n)) {
    for (const auto& s : maps) {
      out.insert(substitute(f, s));
    }
  }
  return out;
}

FunctionClass vs_closure(const FunctionClass& k, std::uint32_t cap)
{
  if (cap == 0) {
    throw RangeError("vs closure cap must be positive");
  }
  FunctionClass out(k.dom_size(), k.cod_size(), cap);
  for (const auto& [n, fs] : k.by_arity()) {
    for (std::uint32_t t = 1; t <= cap; ++t) {
      const auto maps = all_substitution_maps(n, t);
      for (const auto& f : fs) {
        for (const auto& s : maps) {
          out.insert(substitute(f, s));
        }
      }
    }
  }
  return out;
}

namespace {

// Calls fn(points) for every subset of [0, universe) of exactly `size`
// elements, in lexicographic order.
template<typename Fn>
void for_each_combination(std::uint64_t universe, std::uint32_t size, Fn&& fn)
{
  std::vector<Rank> c(size);
  for (std::uint32_t i = 0; i < size; ++i) {
    c[i] = i;
  }
  while (true) {
    fn(c);
    std::size_t i = size;
    while (i > 0 && c[i - 1] == universe - size + (i - 1)) {
      --i;
    }
    if (i == 0) {
      return;
    }
    ++c[i - 1];
    for (std::size_t j = i; j < size; ++j) {
      c[j] = c[j - 1] + 1;
    }
  }
}

std::uint64_t pattern(const FunctionTable& f, const std::vector<Rank>& points)
{
  std::uint64_t p = 0;
  for (const auto x : points) {
    p = p * f.cod_size() + f.at(x);
  }
  return p;
}

} // namespace

FunctionClass lo_m_closure(const FunctionClass& k, std::uint32_t m, const Budget& budget)
{
  if (m == 0) {
    throw RangeError("local closure parameter must be positive");
  }
  FunctionClass out(k.dom_size(), k.cod_size(), k.arity_cap());
  for (const auto& [n, members] : k.by_arity()) {
    if (members.empty()) {
      continue;
    }
    const auto points = tuple_space(k.dom_size(), n);
    const auto d = static_cast<std::uint32_t>(std::min<std::uint64_t>(m, points));
    if (!checked_pow(k.cod_size(), d)) {
      throw BudgetExceeded("restriction patterns on " + std::to_string(d) + " points",
                           pow_string(k.cod_size(), d), "2^64");
    }
    std::vector<FunctionTable> alive;
    for (const auto& g : FunctionEnumerator(k.dom_size(), k.cod_size(), n, budget)) {
      alive.push_back(g);
    }
    // Agreement on every d-subset implies agreement on every smaller one.
    std::unordered_set<std::uint64_t> seen;
    for_each_combination(points, d, [&](const std::vector<Rank>& subset) {
      seen.clear();
      for (const auto& f : members) {
        seen.insert(pattern(f, subset));
      }
      std::erase_if(alive, [&](const FunctionTable& g) { return !seen.contains(pattern(g, subset)); });
    });
    for (auto& g : alive) {
      out.insert(std::move(g));
    }
  }
  return out;
}

FunctionClass lo_closure(const FunctionClass& k, const Budget& budget)
{
  std::uint64_t m = 1;
  for (const auto n : k.arities()) {
    m = std::max(m, tuple_space(k.dom_size(), n));
  }
  auto out = lo_m_closure(k, static_cast<std::uint32_t>(m), budget);
  if (!(out == k)) {
    throw std::logic_error("local closure changed a class over a finite domain");
  }
  return out;
}

} // namespace galois
