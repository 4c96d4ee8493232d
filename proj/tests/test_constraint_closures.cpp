#include "helpers.hpp"

#include "galois/constraint_closures.hpp"
#include "galois/lab.hpp"
#include "galois/satisfaction.hpp"

#include <doctest.h>

#include <random>

using namespace galois;
using namespace testing;

namespace {

// Every relaxation-closed subset of Q_1 over Boolean A and B.
std::vector<ConstraintSet> relaxation_closed_q1()
{
  const ConstraintSpace q(2, 2, 1);
  const auto all = q.all().members();
  std::vector<ConstraintSet> out;
  for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
    ConstraintSet t(2, 2);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if ((mask >> i) & 1u) {
        t.insert(all[i]);
      }
    }
    if (relaxation_closure(t) == t) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

} // namespace

TEST_CASE("cm closure examples")
{
  const auto r = cm_m_closure(cset({{leq(), leq()}}), 2);
  CHECK(r.converged);
  CHECK(r.members.contains({geq(), geq()}));
  CHECK(r.members.contains(canonical_constraint(CanonicalKind::equality, 2, 2, 2)));
  CHECK(r.members.size() == 48);

  const auto e = cm_m_closure(ConstraintSet(2, 2), 2);
  for (std::uint64_t s = 0; s < 16; ++s) {
    CHECK(e.members.contains({Relation(2, 2), Relation::from_mask(2, 2, s)}));
  }
  CHECK(e.members.size() == 40);

  const auto both = cm_m_closure(cset({{leq(), leq()}, {geq(), geq()}}), 2);
  CHECK(both.members.contains({eq2(), eq2()}));

  CHECK_THROWS_AS(cm_m_closure(cset({{leq(), leq()}}), 1), MismatchError);
}

TEST_CASE("cm oracle examples")
{
  const auto unsat = cset({{Relation::full(2, 1), Relation(2, 1)}});
  CHECK(cm_m_oracle(unsat, 1).size() == 16);
  CHECK(cm_m_oracle(ConstraintSet(2, 2), 1).size() == 7);
  CHECK(cm_m_oracle(cset({{leq(), leq()}}), 2).size() == 48);
  CHECK(cm_m_closure(unsat, 1).members.size() == 16);
}

TEST_CASE("engine, audit and witnesses agree with the oracle on the battery")
{
  for (const auto& [name, t] : structured_t2_battery()) {
    CAPTURE(name);
    const auto c = certified_cm_m(t, 2);
    REQUIRE(c.sound);
    REQUIRE(c.agrees);
    REQUIRE_FALSE(audit_cm_fixpoint(c.result, 256));
    REQUIRE_FALSE(certify_witnesses(c.result, t));
  }
}

TEST_CASE("cm closure across arities")
{
  const auto r = cm_closure(cset({{leq(), leq()}}), 2);
  CHECK(r.members.restricted_to(2) == cm_m_closure(cset({{leq(), leq()}}), 2).members);
  CHECK(r.members.contains(canonical_constraint(CanonicalKind::equality, 1, 2, 2)));
  // Every member is satisfied by every monotone function.
  const auto mono = fsc_n(cset({{leq(), leq()}}), 2);
  for (const auto& c : r.members.members()) {
    for (const auto& f : mono.members()) {
      REQUIRE(satisfies(f, c));
    }
  }
}

TEST_CASE("cm budget refusal")
{
  CHECK_THROWS_AS(cm_m_closure(ConstraintSet(2, 2), 4), BudgetExceeded);
}

TEST_CASE("lo_n examples")
{
  // The single-tuple relaxations of (A^1, A^1) are present but not it.
  const auto full = Relation::full(2, 1);
  const auto zero = rel(2, 1, {{0}});
  const auto one = rel(2, 1, {{1}});
  auto t = cset({{Relation(2, 1), full}, {zero, full}, {one, full}});
  CHECK(lo_n_closure(t, 1).contains({full, full}));
  CHECK_FALSE(lo_n_closure(t, 2).contains({full, full}));
  CHECK(lo_n_closure(t, 2) == t);
  CHECK_THROWS_AS(lo_n_closure(t, 0), RangeError);
  CHECK(lo_constraints_closure(t) == t);
}

TEST_CASE("union closure check")
{
  const auto zero = rel(2, 1, {{0}});
  const auto one = rel(2, 1, {{1}});
  const auto t = cset({{zero, zero}, {one, one}});
  const auto u = union_closure_check(t);
  CHECK_FALSE(u.closed);
  REQUIRE(u.witness);
  auto closed = t;
  closed.insert({Relation::full(2, 1), Relation::full(2, 1)});
  CHECK(union_closure_check(closed).closed);
  CHECK(union_closure_check(ConstraintSet(2, 2)).closed);
}

TEST_CASE("relaxation closure")
{
  const auto t = relaxation_closure(cset({{Relation::full(2, 1), Relation(2, 1)}}));
  CHECK(t.size() == 16);
  CHECK(relaxation_closure(cset({{leq(), Relation::full(2, 2)}})).size() == 8);
}

TEST_CASE("lo_n chain descends and stabilizes at |A|^m")
{
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = 1 + static_cast<std::uint32_t>(trial % 2);
    const auto t = random_constraint_set(2, 2, m, 1 + rng() % 40, rng);
    auto previous = lo_n_closure(t, 1);
    for (std::uint32_t n = 2; n <= 5; ++n) {
      const auto current = lo_n_closure(t, n);
      REQUIRE(current.is_subset_of(previous));
      if (n >= tuple_space(2, m)) {
        REQUIRE(current == t);
      }
      previous = current;
    }
  }
}

TEST_CASE("closure laws for lo_n and the certified cm_m")
{
  std::mt19937_64 rng(59);
  std::vector<std::pair<ConstraintSet, ConstraintSet>> samples;
  for (int i = 0; i < 40; ++i) {
    auto x = random_constraint_set(2, 2, 1, 1 + rng() % 6, rng);
    samples.emplace_back(x, random_superset(x, 3, rng));
  }
  for (std::uint32_t n = 1; n <= 2; ++n) {
    CHECK(check_closure_laws({"lon", [n](const ConstraintSet& t) { return lo_n_closure(t, n); }}, samples)
            .verdict == Verdict::equal);
  }
  CHECK(check_closure_laws({"cmm",
                            [](const ConstraintSet& t) {
                              auto c = certified_cm_m(t, 1);
                              REQUIRE(c.agrees);
                              return c.result.members;
                            }},
                           samples)
          .verdict == Verdict::equal);
}

TEST_CASE("relaxation-closed subsets of Q_1: 1-local iff union-closed")
{
  const auto sets = relaxation_closed_q1();
  CHECK(sets.size() == 168);
  for (const auto& t : sets) {
    REQUIRE((lo_n_closure(t, 1) == t) == union_closure_check(t).closed);
  }
}
