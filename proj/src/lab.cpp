#include "galois/lab.hpp"

#include "galois/constraint_closures.hpp"
#include "galois/function_closures.hpp"
#include "galois/satisfaction.hpp"

#include <algorithm>
#include <tuple>

namespace galois {

namespace {

using Clock = std::chrono::steady_clock;

std::pair<std::uint32_t, std::uint32_t> sizes(const FunctionClass& k)
{
  return {k.dom_size(), k.cod_size()};
}

std::pair<std::uint32_t, std::uint32_t> sizes(const ConstraintSet& t)
{
  return {t.a_size(), t.b_size()};
}

template<typename Set>
std::optional<Witness> first_missing(const Set& source, const Set& target)
{
  for (const auto& x : source.members()) {
    if (!target.contains(x)) {
      return Witness{x};
    }
  }
  return std::nullopt;
}

template<typename Set>
void compare_impl(ClosureReport& report, const Set& lhs, const Set& rhs, std::size_t max_witnesses)
{
  report.lhs_size = lhs.size();
  report.rhs_size = rhs.size();
  report.symmetric_difference.clear();
  report.difference_count = 0;
  bool lhs_only = false;
  bool rhs_only = false;
  auto scan = [&](const Set& from, const Set& other, bool& flag) {
    for (const auto& x : from.members()) {
      if (!other.contains(x)) {
        flag = true;
        ++report.difference_count;
        if (report.symmetric_difference.size() < max_witnesses) {
          report.symmetric_difference.emplace_back(x);
        }
      }
    }
  };
  scan(lhs, rhs, lhs_only);
  scan(rhs, lhs, rhs_only);
  report.verdict = !lhs_only && !rhs_only ? Verdict::equal
                   : !lhs_only            ? Verdict::lhs_strict
                   : !rhs_only            ? Verdict::rhs_strict
                                          : Verdict::incomparable;
}

template<typename Set>
ClosureReport laws_impl(const ClosureOperator<Set>& op, std::span<const std::pair<Set, Set>> samples,
                        std::size_t max_witnesses)
{
  const auto start = Clock::now();
  ClosureReport report;
  report.identity_name = "laws:" + op.name;
  std::size_t violations = 0;
  auto violation = [&](std::size_t i, const std::string& law, std::optional<Witness> w) {
    ++violations;
    if (report.symmetric_difference.size() < max_witnesses) {
      report.notes.push_back(law + " violated on sample " + std::to_string(i));
      report.symmetric_difference.push_back(w ? *w : Witness{law});
    }
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [x, y] = samples[i];
    if (!x.is_subset_of(y)) {
      throw MismatchError("law sample " + std::to_string(i) + " is not an inclusion pair");
    }
    const auto cx = op.apply(x);
    const auto cy = op.apply(y);
    if (!x.is_subset_of(cx)) {
      violation(i, "extensive", first_missing(x, cx));
    }
    if (!y.is_subset_of(cy)) {
      violation(i, "extensive", first_missing(y, cy));
    }
    if (!cx.is_subset_of(cy)) {
      violation(i, "monotone", first_missing(cx, cy));
    }
    const auto ccx = op.apply(cx);
    if (!(ccx == cx)) {
      violation(i, "idempotent", first_missing(ccx, cx));
    }
    const auto ccy = op.apply(cy);
    if (!(ccy == cy)) {
      violation(i, "idempotent", first_missing(ccy, cy));
    }
  }
  if (!samples.empty()) {
    std::tie(report.parameters.a_size, report.parameters.b_size) = sizes(samples.front().first);
  }
  report.lhs_size = samples.size();
  report.rhs_size = violations;
  report.difference_count = violations;
  report.verdict = violations == 0 ? Verdict::equal : Verdict::incomparable;
  report.runtime = Clock::now() - start;
  return report;
}

} // namespace

std::string to_string(Verdict v)
{
  switch (v) {
  case Verdict::equal:
    return "equal";
  case Verdict::lhs_strict:
    return "lhs_strict";
  case Verdict::rhs_strict:
    return "rhs_strict";
  case Verdict::incomparable:
    return "incomparable";
  }
  return "?";
}

void compare_into(ClosureReport& report, const FunctionClass& lhs, const FunctionClass& rhs,
                  std::size_t max_witnesses)
{
  compare_impl(report, lhs, rhs, max_witnesses);
}

void compare_into(ClosureReport& report, const ConstraintSet& lhs, const ConstraintSet& rhs,
                  std::size_t max_witnesses)
{
  compare_impl(report, lhs, rhs, max_witnesses);
}

ClosureReport check_closure_laws(const ClosureOperator<FunctionClass>& op,
                                 std::span<const std::pair<FunctionClass, FunctionClass>> samples,
                                 std::size_t max_witnesses)
{
  return laws_impl(op, samples, max_witnesses);
}

ClosureReport check_closure_laws(const ClosureOperator<ConstraintSet>& op,
                                 std::span<const std::pair<ConstraintSet, ConstraintSet>> samples,
                                 std::size_t max_witnesses)
{
  return laws_impl(op, samples, max_witnesses);
}

ClosureReport check_galois_axioms(const FunctionClass& k, const ConstraintSet& t, std::uint32_t n_cap,
                                  std::uint32_t m_cap, const LabOptions& options)
{
  const auto start = Clock::now();
  for (const auto n : k.arities()) {
    if (n > n_cap) {
      throw RangeError("class member of arity " + std::to_string(n) + " above cap " + std::to_string(n_cap));
    }
  }
  for (const auto m : t.arities()) {
    if (m > m_cap) {
      throw RangeError("constraint of arity " + std::to_string(m) + " above cap " + std::to_string(m_cap));
    }
  }
  const auto& budget = options.budget;
  auto fsc_ = [&](const ConstraintSet& x) { return fsc(x, n_cap, budget); };
  auto csf_ = [&](const FunctionClass& x) { return csf(x, m_cap, budget); };

  ClosureReport report;
  report.identity_name = "galois-axioms";
  report.parameters = {n_cap, m_cap, k.dom_size(), k.cod_size()};
  std::size_t checks = 0;
  std::size_t violations = 0;
  auto record = [&](bool ok, const std::string& axiom, std::optional<Witness> w) {
    ++checks;
    if (ok) {
      return;
    }
    ++violations;
    report.notes.push_back(axiom + " violated");
    if (report.symmetric_difference.size() < options.max_witnesses) {
      report.symmetric_difference.push_back(w ? *w : Witness{axiom});
    }
  };

  const auto csf_k = csf_(k);
  const auto fsc_t = fsc_(t);

  // Order reversal against a one-smaller subset.
  if (!k.empty()) {
    auto members = k.members();
    FunctionClass sub(k.dom_size(), k.cod_size(), k.arity_cap());
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      sub.insert(members[i]);
    }
    const auto csf_sub = csf_(sub);
    record(csf_k.is_subset_of(csf_sub), "order reversal on functions", first_missing(csf_k, csf_sub));
  }
  if (!t.empty()) {
    auto members = t.members();
    ConstraintSet sub(t.a_size(), t.b_size(), t.arity_cap());
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      sub.insert(members[i]);
    }
    const auto fsc_sub = fsc_(sub);
    record(fsc_t.is_subset_of(fsc_sub), "order reversal on constraints", first_missing(fsc_t, fsc_sub));
  }

  const auto fsc_csf_k = fsc_(csf_k);
  record(k.is_subset_of(fsc_csf_k), "extensivity of FSC o CSF", first_missing(k, fsc_csf_k));
  const auto csf_fsc_t = csf_(fsc_t);
  record(t.is_subset_of(csf_fsc_t), "extensivity of CSF o FSC", first_missing(t, csf_fsc_t));

  const auto triple_f = fsc_(csf_fsc_t);
  record(triple_f == fsc_t, "FSC o CSF o FSC = FSC",
         triple_f.is_subset_of(fsc_t) ? first_missing(fsc_t, triple_f) : first_missing(triple_f, fsc_t));
  const auto triple_c = csf_(fsc_csf_k);
  record(triple_c == csf_k, "CSF o FSC o CSF = CSF",
         triple_c.is_subset_of(csf_k) ? first_missing(csf_k, triple_c) : first_missing(triple_c, csf_k));

  report.lhs_size = checks;
  report.rhs_size = violations;
  report.difference_count = violations;
  report.verdict = violations == 0 ? Verdict::equal : Verdict::incomparable;
  report.runtime = Clock::now() - start;
  return report;
}

std::string to_string(Identity id)
{
  switch (id) {
  case Identity::t15_i:
    return "T15.i";
  case Identity::t15_ii:
    return "T15.ii";
  case Identity::t8_ii:
    return "T8.ii";
  case Identity::t12_ii:
    return "T12.ii";
  case Identity::t4_finite:
    return "T4.finite";
  }
  return "?";
}

std::optional<Identity> parse_identity(std::string_view name)
{
  if (name == "t15i") {
    return Identity::t15_i;
  }
  if (name == "t15ii") {
    return Identity::t15_ii;
  }
  if (name == "t8") {
    return Identity::t8_ii;
  }
  if (name == "t12") {
    return Identity::t12_ii;
  }
  if (name == "t4") {
    return Identity::t4_finite;
  }
  return std::nullopt;
}

namespace {

std::uint32_t single_arity_or(const FunctionClass& k, std::uint32_t fallback, const char* what)
{
  const auto arities = k.arities();
  if (arities.size() > 1) {
    throw MismatchError(std::string(what) + " expects a single-arity class");
  }
  return arities.empty() ? fallback : arities.front();
}

std::uint32_t single_arity_or(const ConstraintSet& t, std::uint32_t fallback, const char* what)
{
  const auto arities = t.arities();
  if (arities.size() > 1) {
    throw MismatchError(std::string(what) + " expects a single-arity constraint set");
  }
  return arities.empty() ? fallback : arities.front();
}

template<typename Set>
const Set& expect(const Instance& instance, const char* what)
{
  if (const auto* p = std::get_if<Set>(&instance)) {
    return *p;
  }
  throw MismatchError(std::string(what) + (std::is_same_v<Set, FunctionClass> ? " expects a function class"
                                                                               : " expects a constraint set"));
}

void check_arity(std::uint32_t actual, std::uint32_t expected, const char* what, const char* param)
{
  if (actual != expected) {
    throw MismatchError(std::string(what) + ": instance arity " + std::to_string(actual) + " differs from " +
                        param + " = " + std::to_string(expected));
  }
}

std::uint32_t stabilization(std::uint32_t a, std::uint32_t arity)
{
  const auto s = tuple_space(a, arity);
  if (s > 64) {
    throw BudgetExceeded("stabilization arity |A|^" + std::to_string(arity), std::to_string(s), "64");
  }
  return static_cast<std::uint32_t>(s);
}

void note_convergence(ClosureReport& report, const CmResult& cm)
{
  report.notes.push_back("cm iterations=" + std::to_string(cm.iterations) +
                         (cm.converged ? "" : " (not converged)"));
}

} // namespace

ClosureReport verify_factorization(Identity id, const Instance& instance, std::uint32_t n, std::uint32_t m,
                                   const LabOptions& options)
{
  const auto start = Clock::now();
  if (n == 0 || m == 0) {
    throw RangeError("identity parameters must be positive");
  }
  ClosureReport report;
  report.identity_name = to_string(id);
  const auto& budget = options.budget;
  const auto name = report.identity_name.c_str();

  switch (id) {
  case Identity::t15_i: {
    const auto& k = expect<FunctionClass>(instance, name);
    check_arity(single_arity_or(k, n, name), n, name, "n");
    report.parameters = {n, m, k.dom_size(), k.cod_size()};
    const auto lhs = fsc_n_of_csf_m(k, n, m, budget);
    const auto rhs = lo_m_closure(vs_n_closure(k), m, budget);
    compare_into(report, lhs, rhs, options.max_witnesses);
    break;
  }
  case Identity::t15_ii: {
    const auto& t = expect<ConstraintSet>(instance, name);
    check_arity(single_arity_or(t, m, name), m, name, "m");
    report.parameters = {n, m, t.a_size(), t.b_size()};
    const auto lhs = csf_m(fsc_n(t, n, budget), m, budget);
    const auto cm = cm_m_closure(t, m, options.bounds, budget);
    note_convergence(report, cm);
    const auto rhs = lo_n_closure(cm.members, n, budget);
    compare_into(report, lhs, rhs, options.max_witnesses);
    break;
  }
  case Identity::t8_ii: {
    const auto& t = expect<ConstraintSet>(instance, name);
    report.parameters = {n, m, t.a_size(), t.b_size()};
    const auto lhs = csf(fsc_n(t, n, budget), m, budget);
    const auto cm = cm_closure(t, m, options.bounds, budget);
    note_convergence(report, cm);
    const auto rhs = lo_n_closure(cm.members, n, budget);
    compare_into(report, lhs, rhs, options.max_witnesses);
    break;
  }
  case Identity::t12_ii: {
    const auto& t = expect<ConstraintSet>(instance, name);
    check_arity(single_arity_or(t, m, name), m, name, "m");
    const auto n_star = stabilization(t.a_size(), m);
    report.parameters = {n_star, m, t.a_size(), t.b_size()};
    const auto lhs = csf_m(fsc_n(t, n_star, budget), m, budget);
    const auto cm = cm_m_closure(t, m, options.bounds, budget);
    note_convergence(report, cm);
    const auto rhs = lo_constraints_closure(cm.members, budget);
    compare_into(report, lhs, rhs, options.max_witnesses);
    break;
  }
  case Identity::t4_finite: {
    const auto& k = expect<FunctionClass>(instance, name);
    for (const auto arity : k.arities()) {
      if (arity > n) {
        throw RangeError("class member of arity " + std::to_string(arity) + " above cap n = " + std::to_string(n));
      }
    }
    report.parameters = {n, stabilization(k.dom_size(), n), k.dom_size(), k.cod_size()};
    FunctionClass lhs(k.dom_size(), k.cod_size(), n);
    for (std::uint32_t t = 1; t <= n; ++t) {
      lhs.insert_all(fsc_n_of_csf_m(k, t, stabilization(k.dom_size(), t), budget));
    }
    const auto rhs = lo_closure(vs_closure(k, n), budget);
    compare_into(report, lhs, rhs, options.max_witnesses);
    break;
  }
  }
  report.runtime = Clock::now() - start;
  return report;
}

std::string to_string(Definability side)
{
  switch (side) {
  case Definability::thm5:
    return "Thm5";
  case Definability::thm6:
    return "Thm6";
  case Definability::thm13:
    return "Thm13";
  case Definability::thm14:
    return "Thm14";
  case Definability::cor1:
    return "Cor1";
  case Definability::cor2:
    return "Cor2";
  }
  return "?";
}

std::optional<Definability> parse_definability(std::string_view name)
{
  static const std::pair<std::string_view, Definability> names[] = {
    {"thm5", Definability::thm5},   {"thm6", Definability::thm6}, {"thm13", Definability::thm13},
    {"thm14", Definability::thm14}, {"cor1", Definability::cor1}, {"cor2", Definability::cor2},
  };
  for (const auto& [key, value] : names) {
    if (key == name) {
      return value;
    }
  }
  return std::nullopt;
}

ClosureReport verify_definability(Definability side, const Instance& instance, std::uint32_t n, std::uint32_t m,
                                  const LabOptions& options)
{
  const auto start = Clock::now();
  if (n == 0 || m == 0) {
    throw RangeError("definability parameters must be positive");
  }
  ClosureReport report;
  report.identity_name = to_string(side);
  const auto& budget = options.budget;
  const auto name = report.identity_name.c_str();
  bool predicate = false;
  bool fixed_point = false;
  ClosureReport diff;

  auto function_side = [&](const FunctionClass& k, std::uint32_t arity, std::uint32_t width, bool with_lo) {
    report.parameters = {arity, width, k.dom_size(), k.cod_size()};
    predicate = vs_n_closure(k) == k && lo_closure(k, budget) == k;
    if (with_lo) {
      predicate = predicate && lo_m_closure(k, width, budget) == k;
    }
    const auto closure = fsc_n_of_csf_m(k, arity, width, budget);
    fixed_point = closure == k;
    compare_into(diff, k, closure, options.max_witnesses);
  };

  switch (side) {
  case Definability::thm5: {
    const auto& k = expect<FunctionClass>(instance, name);
    const auto arity = single_arity_or(k, n, name);
    function_side(k, arity, stabilization(k.dom_size(), arity), false);
    break;
  }
  case Definability::thm13: {
    const auto& k = expect<FunctionClass>(instance, name);
    function_side(k, single_arity_or(k, n, name), m, true);
    break;
  }
  case Definability::cor1: {
    const auto& k = expect<FunctionClass>(instance, name);
    check_arity(single_arity_or(k, 1, name), 1, name, "arity");
    function_side(k, 1, stabilization(k.dom_size(), 1), false);
    break;
  }
  case Definability::thm6: {
    const auto& t = expect<ConstraintSet>(instance, name);
    report.parameters = {n, m, t.a_size(), t.b_size()};
    const auto cm = cm_closure(t, m, options.bounds, budget);
    note_convergence(report, cm);
    predicate = cm.members == t && lo_n_closure(t, n, budget) == t;
    const auto closure = csf(fsc_n(t, n, budget), m, budget);
    fixed_point = closure == t;
    compare_into(diff, t, closure, options.max_witnesses);
    break;
  }
  case Definability::thm14:
  case Definability::cor2: {
    const auto& t = expect<ConstraintSet>(instance, name);
    const auto arity = single_arity_or(t, m, name);
    const auto fn_arity = side == Definability::cor2 ? 1u : n;
    report.parameters = {fn_arity, arity, t.a_size(), t.b_size()};
    const auto cm = cm_m_closure(t, arity, options.bounds, budget);
    note_convergence(report, cm);
    if (side == Definability::thm14) {
      predicate = cm.members == t && lo_n_closure(t, n, budget) == t;
    } else {
      predicate = t.contains(canonical_constraint(CanonicalKind::equality, arity, t.a_size(), t.b_size())) &&
                  t.contains(canonical_constraint(CanonicalKind::empty, arity, t.a_size(), t.b_size())) &&
                  union_closure_check(t).closed && cm.members == t;
    }
    const auto closure = csf_m(fsc_n(t, fn_arity, budget), arity, budget);
    fixed_point = closure == t;
    compare_into(diff, t, closure, options.max_witnesses);
    break;
  }
  }

  report.lhs_size = diff.lhs_size;
  report.rhs_size = diff.rhs_size;
  report.notes.push_back(std::string("predicate=") + (predicate ? "holds" : "fails"));
  report.notes.push_back(std::string("fixed_point=") + (fixed_point ? "holds" : "fails"));
  if (predicate == fixed_point) {
    report.verdict = Verdict::equal;
  } else {
    // The witnesses separate the instance from its Galois closure.
    report.verdict = Verdict::incomparable;
    report.symmetric_difference = diff.symmetric_difference;
    report.difference_count = diff.difference_count;
    if (report.symmetric_difference.empty()) {
      report.symmetric_difference.emplace_back(std::string("closure condition fails on a fixed point"));
      report.difference_count = 1;
    }
  }
  report.runtime = Clock::now() - start;
  return report;
}

FunctionClass random_function_class(std::uint32_t a, std::uint32_t b, std::uint32_t n, std::size_t count,
                                    std::mt19937_64& rng)
{
  const auto total = checked_pow(b, tuple_space(a, n));
  if (!total) {
    throw BudgetExceeded("function tables B^(A^" + std::to_string(n) + ")", pow_string(b, tuple_space(a, n)),
                         "2^64");
  }
  FunctionClass out(a, b);
  if (count >= *total) {
    for (Rank r = 0; r < *total; ++r) {
      out.insert(FunctionTable::from_rank(a, b, n, r));
    }
    return out;
  }
  while (out.size() < count) {
    out.insert(FunctionTable::from_rank(a, b, n, rng() % *total));
  }
  return out;
}

ConstraintSet random_constraint_set(std::uint32_t a, std::uint32_t b, std::uint32_t m, std::size_t count,
                                    std::mt19937_64& rng)
{
  const ConstraintSpace space(a, b, m);
  ConstraintSet out(a, b);
  if (count >= space.size()) {
    return space.all();
  }
  while (out.size() < count) {
    out.insert(space.at(rng() % space.size()));
  }
  return out;
}

FunctionClass random_superset(const FunctionClass& x, std::size_t extra, std::mt19937_64& rng)
{
  auto out = x;
  const auto arities = x.arities();
  if (arities.empty()) {
    return out;
  }
  for (std::size_t i = 0; i < extra; ++i) {
    const auto n = arities[rng() % arities.size()];
    const auto total = *checked_pow(x.cod_size(), tuple_space(x.dom_size(), n));
    out.insert(FunctionTable::from_rank(x.dom_size(), x.cod_size(), n, rng() % total));
  }
  return out;
}

ConstraintSet random_superset(const ConstraintSet& x, std::size_t extra, std::mt19937_64& rng)
{
  auto out = x;
  const auto arities = x.arities();
  if (arities.empty()) {
    return out;
  }
  for (std::size_t i = 0; i < extra; ++i) {
    const ConstraintSpace space(x.a_size(), x.b_size(), arities[rng() % arities.size()]);
    out.insert(space.at(rng() % space.size()));
  }
  return out;
}

std::vector<std::pair<std::string, ConstraintSet>> structured_t2_battery()
{
  auto rel = [](std::initializer_list<std::pair<Element, Element>> pairs) {
    Relation r(2, 2);
    for (const auto& [x, y] : pairs) {
      const Element t[] = {x, y};
      r.insert(t);
    }
    return r;
  };
  const auto leq = rel({{0, 0}, {0, 1}, {1, 1}});
  const auto geq = rel({{0, 0}, {1, 0}, {1, 1}});
  const auto eq = rel({{0, 0}, {1, 1}});
  const auto neq = rel({{0, 1}, {1, 0}});
  const auto lt = rel({{0, 1}});
  const auto full = Relation::full(2, 2);
  const auto graph_const0 = rel({{0, 0}, {1, 0}});
  const auto graph_const1 = rel({{0, 1}, {1, 1}});
  const auto zero = rel({{0, 0}});
  const auto one = rel({{1, 1}});

  auto set = [](std::initializer_list<std::pair<Relation, Relation>> cs) {
    ConstraintSet t(2, 2);
    for (const auto& [r, s] : cs) {
      t.insert({r, s});
    }
    return t;
  };

  return {
    {"leq", set({{leq, leq}})},
    {"eq", set({{eq, eq}})},
    {"neq", set({{neq, neq}})},
    {"leq+geq", set({{leq, leq}, {geq, geq}})},
    {"antitone", set({{leq, geq}})},
    {"graph-id", set({{eq, eq}, {leq, leq}, {geq, geq}})},
    {"graph-neg", set({{neq, neq}, {eq, eq}})},
    {"graph-const0", set({{graph_const0, graph_const0}})},
    {"graph-const1", set({{graph_const1, graph_const1}})},
    {"strict", set({{lt, lt}})},
    {"leq-to-lt", set({{leq, lt}})},
    {"full-to-leq", set({{full, leq}})},
    {"full-to-eq", set({{full, eq}})},
    {"neq-to-eq", set({{neq, eq}})},
    {"eq-to-leq", set({{eq, leq}})},
    {"neq-to-leq", set({{neq, leq}})},
    {"monotone-selfdual", set({{leq, leq}, {neq, neq}})},
    {"keeps-zero", set({{zero, zero}})},
    {"keeps-one", set({{one, one}})},
    {"keeps-both", set({{zero, zero}, {one, one}})},
    {"const0-to-leq", set({{graph_const0, leq}})},
    {"empty-set", ConstraintSet(2, 2)},
  };
}

} // namespace galois
