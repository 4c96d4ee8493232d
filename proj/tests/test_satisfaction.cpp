#include "helpers.hpp"

#include "galois/function_closures.hpp"
#include "galois/satisfaction.hpp"

#include <doctest.h>

#include <random>

using namespace galois;
using namespace testing;

namespace {

// Pointwise monotone: x <= y coordinatewise implies f(x) <= f(y).
bool monotone(const FunctionTable& f)
{
  const auto n = f.arity();
  const auto points = tuple_space(2, n);
  for (Rank x = 0; x < points; ++x) {
    for (Rank y = 0; y < points; ++y) {
      if ((x & y) == x && f.at(x) > f.at(y)) {
        return false;
      }
    }
  }
  return true;
}

} // namespace

TEST_CASE("image examples")
{
  CHECK(image(AND(), bool2({{0, 1}, {1, 1}})) == bool2({{0, 1}, {1, 1}}));
  CHECK(image(AND(), Relation(2, 2)).empty());
  CHECK(image(fn(1, {0, 1}), eq2()) == eq2());
}

TEST_CASE("satisfies and preserves examples")
{
  const auto e = canonical_constraint(CanonicalKind::equality, 2, 2, 2);
  for (const auto& f : FunctionEnumerator(2, 2, 2)) {
    CHECK(satisfies(f, e));
  }
  CHECK(satisfies(AND(), {leq(), leq()}));
  CHECK_FALSE(satisfies(fn(1, {1, 0}), {leq(), leq()}));
  CHECK(preserves(AND(), leq()));
  CHECK_FALSE(preserves(fn(1, {1, 0}), leq()));
  CHECK(preserves(fn(1, {1, 0}), Relation::full(2, 3)));
}

TEST_CASE("satisfaction is monotone under relaxation (exhaustive, binary Boolean)")
{
  const auto all = ConstraintSpace(2, 2, 2).all().members();
  std::vector<FunctionTable> fs;
  for (const auto& f : FunctionEnumerator(2, 2, 2)) {
    fs.push_back(f);
  }
  for (const auto& c0 : all) {
    for (const auto& f : fs) {
      if (!satisfies(f, c0)) {
        continue;
      }
      for (const auto& c : all) {
        if (relaxation_of(c, c0)) {
          REQUIRE(satisfies(f, c));
        }
      }
    }
  }
}

TEST_CASE("preserves(f, R) = satisfies(f, (R, R)) at |A| = 2, arity <= 2")
{
  for (std::uint32_t n = 1; n <= 2; ++n) {
    for (const auto& f : FunctionEnumerator(2, 2, n)) {
      for (std::uint32_t m = 1; m <= 2; ++m) {
        const auto universe = tuple_space(2, m);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe); ++mask) {
          const auto r = Relation::from_mask(2, m, mask);
          REQUIRE(preserves(f, r) == satisfies(f, {r, r}));
        }
      }
    }
  }
}

TEST_CASE("fsc_n examples")
{
  const auto t = cset({{leq(), leq()}});
  const auto unary_leq = rel(2, 1, {{0}, {1}});
  CHECK(fsc_n(t, 1) == cls({fn(1, {0, 0}), fn(1, {0, 1}), fn(1, {1, 1})}));
  CHECK(fsc_n(cset({canonical_constraint(CanonicalKind::empty, 2, 2, 2)}), 2).size() == 16);
  CHECK(fsc_n(cset({{unary_leq, Relation(2, 1)}}), 1).empty());
}

TEST_CASE("fsc_4 of (<=,<=) matches an independent monotonicity filter")
{
  std::size_t expected = 0;
  for (const auto& f : FunctionEnumerator(2, 2, 4)) {
    expected += monotone(f);
  }
  CHECK(expected == 168);
  const auto k = fsc_n(cset({{leq(), leq()}}), 4);
  CHECK(k.size() == expected);
  for (const auto& f : k.members()) {
    REQUIRE(monotone(f));
  }
}

TEST_CASE("csf_m examples")
{
  const auto k = cls({AND()});
  const auto t = csf_m(k, 2);
  CHECK(t.contains(canonical_constraint(CanonicalKind::equality, 2, 2, 2)));
  CHECK(t.contains(canonical_constraint(CanonicalKind::trivial, 2, 2, 2)));
  CHECK(t.contains({leq(), leq()}));
  CHECK(csf_m(FunctionClass(2, 2), 2).size() == 256);
}

TEST_CASE("csf_m agrees with a direct scan of Q_m")
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    FunctionClass k(2, 2);
    for (int i = 0; i < 3; ++i) {
      const auto n = 1 + static_cast<std::uint32_t>(rng() % 2);
      k.insert(FunctionTable::from_rank(2, 2, n, rng() % (n == 1 ? 4 : 16)));
    }
    for (std::uint32_t m = 1; m <= 2; ++m) {
      ConstraintSet direct(2, 2);
      for (const auto& c : ConstraintSpace(2, 2, m).all().members()) {
        bool ok = true;
        for (const auto& f : k.members()) {
          ok = ok && satisfies(f, c);
        }
        if (ok) {
          direct.insert(c);
        }
      }
      REQUIRE(csf_m(k, m) == direct);
    }
  }
}

TEST_CASE("trace constraints")
{
  const Tuple col[] = {{0, 1}};
  const auto c = trace_constraint(cls({fn(1, {0, 1})}), col);
  CHECK(c == Constraint(bool2({{0, 1}}), bool2({{0, 1}})));
  CHECK_FALSE(satisfies(fn(1, {1, 0}), c));

  CHECK(trace_constraint(FunctionClass(2, 2), col).consequent().empty());

  const Tuple cols[] = {{0, 0, 1, 1}, {0, 1, 0, 1}};
  const auto k = cls({AND(), projection(2, 1, 2), projection(2, 2, 2)});
  const auto t = trace_constraint(k, cols);
  CHECK(t.consequent() == rel(2, 4, {{0, 0, 0, 1}, {0, 0, 1, 1}, {0, 1, 0, 1}}));
}

TEST_CASE("class composition")
{
  const auto o2 = cls({projection(2, 1, 2), projection(2, 2, 2)});
  CHECK(compose_classes(cls({AND()}), o2, 2).at_arity(2) == cls({AND(), projection(2, 1, 2), projection(2, 2, 2)}).at_arity(2));
  const auto oa = cls({projection(1, 1, 2), projection(2, 1, 2), projection(2, 2, 2)});
  const auto oo = compose_classes(oa, oa, 2);
  CHECK(oo == oa);
  CHECK(compose_classes(FunctionClass(2, 2), oa, 2).empty());
  CHECK(compose_classes(oa, FunctionClass(2, 2), 2).empty());
}

TEST_CASE("associativity inclusion (IJ)K <= I(JK) on random classes")
{
  std::mt19937_64 rng(11);
  auto random_class = [&] {
    FunctionClass k(2, 2);
    const auto size = 1 + rng() % 2;
    for (std::size_t i = 0; i < size; ++i) {
      const auto n = 1 + static_cast<std::uint32_t>(rng() % 2);
      k.insert(FunctionTable::from_rank(2, 2, n, rng() % (n == 1 ? 4 : 16)));
    }
    return k;
  };
  for (int trial = 0; trial < 15; ++trial) {
    const auto i = random_class();
    const auto j = random_class();
    const auto k = random_class();
    const auto lhs = compose_classes(compose_classes(i, j, 2), k, 2);
    const auto rhs = compose_classes(i, compose_classes(j, k, 2), 2);
    REQUIRE(lhs.is_subset_of(rhs));
  }
}

TEST_CASE("Galois maps are order reversing and their composites extensive")
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    FunctionClass k(2, 2);
    FunctionClass k2(2, 2);
    for (int i = 0; i < 3; ++i) {
      const auto f = FunctionTable::from_rank(2, 2, 2, rng() % 16);
      k2.insert(f);
      if (i < 2) {
        k.insert(f);
      }
    }
    REQUIRE(csf_m(k2, 2).is_subset_of(csf_m(k, 2)));
    REQUIRE(k.is_subset_of(fsc_n(csf(k, 2), 2)));

    const ConstraintSpace q(2, 2, 1);
    ConstraintSet t(2, 2);
    ConstraintSet t2(2, 2);
    for (int i = 0; i < 3; ++i) {
      const auto c = q.at(rng() % q.size());
      t2.insert(c);
      if (i < 2) {
        t.insert(c);
      }
    }
    REQUIRE(fsc_n(t2, 2).is_subset_of(fsc_n(t, 2)));
    REQUIRE(t.is_subset_of(csf(fsc(t, 2), 2)));
  }
}

TEST_CASE("trace path equals the materialized composite")
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    FunctionClass k(2, 2);
    const auto size = 1 + rng() % 3;
    for (std::size_t i = 0; i < size; ++i) {
      k.insert(FunctionTable::from_rank(2, 2, 2, rng() % 16));
    }
    for (std::uint32_t m = 1; m <= 2; ++m) {
      REQUIRE(fsc_n_of_csf_m(k, 2, m) == fsc_n(csf_m(k, m), 2));
    }
  }
}

TEST_CASE("Galois query selector")
{
  GaloisQuery q;
  q.side = GaloisQuery::Side::functions_from_constraints;
  q.arity = 1;
  CHECK(run_query(q, cset({{leq(), leq()}})).size() == 3);
  q.selector = GaloisQuery::Selector::cap;
  q.arity = 2;
  CHECK(run_query(q, cset({{leq(), leq()}})).size() == 3 + 6);
  CHECK_THROWS_AS(run_query(q, cls({AND()})), MismatchError);
}
