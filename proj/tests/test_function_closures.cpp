#include "helpers.hpp"

#include "galois/function_closures.hpp"
#include "galois/lab.hpp"

#include <doctest.h>

#include <random>

using namespace galois;
using namespace testing;

TEST_CASE("substitution examples")
{
  CHECK(substitute(AND(), SubstitutionMap(2, {1, 1})) == projection(2, 1, 2));
  CHECK(substitute(AND(), SubstitutionMap(2, {2, 1})) == AND());
  CHECK(substitute(AND(), SubstitutionMap::identity(2)) == AND());
  CHECK(substitute(AND(), SubstitutionMap(1, {1, 1})) == fn(1, {0, 1}));
  CHECK(substitute(fn(1, {1, 0}), SubstitutionMap(2, {2})) == fn(2, {1, 0, 1, 0}));
  CHECK_THROWS_AS(SubstitutionMap(2, {3}), RangeError);
  CHECK_THROWS_AS(substitute(AND(), SubstitutionMap(2, {1})), MismatchError);
  CHECK(all_substitution_maps(2, 3).size() == 9);
}

TEST_CASE("vs_n closure examples")
{
  const auto pr1 = projection(2, 1, 2);
  const auto pr2 = projection(2, 2, 2);
  CHECK(vs_n_closure(cls({AND()})) == cls({AND(), pr1, pr2}));
  CHECK(vs_n_closure(cls({pr1})) == cls({pr1, pr2}));
  CHECK(vs_n_closure(FunctionClass(2, 2)).empty());
  CHECK_THROWS_AS(vs_n_closure(cls({AND(), fn(1, {0, 1})})), MismatchError);
}

TEST_CASE("vs closure examples")
{
  CHECK(vs_closure(cls({AND()}), 1) == cls({fn(1, {0, 1})}));
  CHECK(vs_closure(cls({AND()}), 2) == cls({fn(1, {0, 1}), AND(), projection(2, 1, 2), projection(2, 2, 2)}));
  const auto closed = vs_closure(cls({AND()}), 3);
  FunctionClass truncated(2, 2);
  truncated.insert_all(closed.restricted_to(1));
  truncated.insert_all(closed.restricted_to(2));
  CHECK(vs_closure(closed, 2) == truncated);
}

TEST_CASE("lo_m closure examples")
{
  const auto id = fn(1, {0, 1});
  const auto neg = fn(1, {1, 0});
  CHECK(lo_m_closure(cls({id, neg}), 1).size() == 4);
  CHECK(lo_m_closure(cls({id, neg}), 2) == cls({id, neg}));
  const auto k = cls({AND(), projection(2, 1, 2)});
  CHECK(lo_m_closure(k, 4) == k);
  CHECK(lo_m_closure(k, 9) == k);
  CHECK(lo_closure(cls({AND()})) == cls({AND()}));
}

TEST_CASE("lo_1 of the vs closure of AND adds OR")
{
  const auto rhs = lo_m_closure(vs_n_closure(cls({AND()})), 1);
  CHECK(rhs == cls({AND(), OR(), projection(2, 1, 2), projection(2, 2, 2)}));
}

TEST_CASE("lo_m agrees with a direct definition by restriction")
{
  // g is in Lo_m(K) iff for every D of size <= m some member of K agrees
  // with g on D; checked against all subsets, not only the largest ones.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = random_function_class(2, 2, 2, 1 + rng() % 4, rng);
    for (std::uint32_t m = 1; m <= 4; ++m) {
      FunctionClass expected(2, 2);
      for (const auto& g : FunctionEnumerator(2, 2, 2)) {
        bool ok = true;
        for (std::uint32_t d = 1; d < 16 && ok; ++d) {
          if (static_cast<std::uint32_t>(__builtin_popcount(d)) > m) {
            continue;
          }
          bool agrees = false;
          for (const auto& f : k.members()) {
            bool same = true;
            for (Rank x = 0; x < 4; ++x) {
              if ((d >> x) & 1u) {
                same = same && f.at(x) == g.at(x);
              }
            }
            agrees = agrees || same;
          }
          ok = agrees;
        }
        if (ok) {
          expected.insert(g);
        }
      }
      REQUIRE(lo_m_closure(k, m) == expected);
    }
  }
}

TEST_CASE("lo_m chain descends and stabilizes at |A|^n")
{
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = 1 + static_cast<std::uint32_t>(trial % 2);
    const auto k = random_function_class(2, 2, n, 1 + rng() % 3, rng);
    FunctionClass previous = lo_m_closure(k, 1);
    for (std::uint32_t m = 2; m <= 5; ++m) {
      const auto current = lo_m_closure(k, m);
      REQUIRE(current.is_subset_of(previous));
      if (m >= tuple_space(2, n)) {
        REQUIRE(current == k);
      }
      previous = current;
    }
  }
}

TEST_CASE("vs_n closure is vs closure restricted to arity n")
{
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const auto k = random_function_class(2, 2, 2, 1 + rng() % 3, rng);
    REQUIRE(vs_closure(k, 3).restricted_to(2) == vs_n_closure(k));
  }
}

TEST_CASE("vs_n of lo_m of a vs_n-closed class stays vs_n-closed")
{
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const auto k = vs_n_closure(random_function_class(2, 2, 2, 1 + rng() % 3, rng));
    for (std::uint32_t m = 1; m <= 4; ++m) {
      const auto lo = lo_m_closure(k, m);
      REQUIRE(vs_n_closure(lo) == lo);
    }
  }
}

TEST_CASE("closure laws for vs_n, vs and lo_m on random classes")
{
  std::mt19937_64 rng(31);
  std::vector<std::pair<FunctionClass, FunctionClass>> samples;
  for (int i = 0; i < 60; ++i) {
    auto x = random_function_class(2, 2, 2, 1 + rng() % 3, rng);
    samples.emplace_back(x, random_superset(x, 2, rng));
  }
  CHECK(check_closure_laws({"vsn", [](const FunctionClass& k) { return vs_n_closure(k); }}, samples).verdict ==
        Verdict::equal);
  CHECK(check_closure_laws({"vs", [](const FunctionClass& k) { return vs_closure(k, 2); }}, samples).verdict ==
        Verdict::equal);
  for (std::uint32_t m = 1; m <= 3; ++m) {
    CHECK(check_closure_laws({"lom", [m](const FunctionClass& k) { return lo_m_closure(k, m); }}, samples)
            .verdict == Verdict::equal);
  }
}
