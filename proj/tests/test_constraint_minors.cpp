#include "helpers.hpp"

#include "galois/constraint_minors.hpp"
#include "galois/satisfaction.hpp"

#include <doctest.h>

#include <random>

using namespace galois;
using namespace testing;

namespace {

Scheme swap_scheme()
{
  return {2, 0, {{SchemeEntry::coord(2), SchemeEntry::coord(1)}}};
}

Scheme composition_scheme()
{
  return {2,
          1,
          {{SchemeEntry::coord(1), SchemeEntry::indet(1)}, {SchemeEntry::indet(1), SchemeEntry::coord(2)}}};
}

// Random scheme: `maps` maps with the given source arities into target t
// with v indeterminates.
Scheme random_scheme(std::mt19937_64& rng, std::uint32_t t, std::uint32_t v,
                     const std::vector<std::uint32_t>& sources)
{
  Scheme s;
  s.target = t;
  s.indeterminates = v;
  for (const auto k : sources) {
    SchemeMap h;
    for (std::uint32_t i = 0; i < k; ++i) {
      const auto pick = static_cast<std::uint32_t>(rng() % (t + v));
      h.push_back(pick < t ? SchemeEntry::coord(pick + 1) : SchemeEntry::indet(pick - t + 1));
    }
    s.family.push_back(std::move(h));
  }
  return s;
}

Constraint random_constraint(std::mt19937_64& rng, std::uint32_t m)
{
  const ConstraintSpace q(2, 2, m);
  return q.at(rng() % q.size());
}

} // namespace

TEST_CASE("tight minor examples")
{
  const Constraint mono(leq(), leq());
  const Constraint fam1[] = {mono};
  CHECK(tight_minor(fam1, swap_scheme()) == Constraint(geq(), geq()));

  const Constraint fam2[] = {mono, mono};
  CHECK(tight_minor(fam2, composition_scheme()) == mono);

  const Constraint eq[] = {Constraint(eq2(), eq2())};
  const Scheme diag{2, 0, {{SchemeEntry::coord(1), SchemeEntry::coord(1)}}};
  CHECK(tight_minor(eq, diag) == canonical_constraint(CanonicalKind::trivial, 2, 2, 2));
}

TEST_CASE("Skolem witnesses")
{
  const Relation fam[] = {leq(), leq()};
  const Element a[] = {0, 1};
  const auto sigma = find_skolem(fam, composition_scheme(), a);
  REQUIRE(sigma);
  CHECK(sigma->values.size() == 1);
  const Element b[] = {1, 0};
  CHECK_FALSE(find_skolem(fam, composition_scheme(), b));
}

TEST_CASE("minor_check modes")
{
  const Constraint mono(leq(), leq());
  const Constraint fam[] = {mono};
  const auto s = swap_scheme();
  const auto tight = tight_minor(fam, s);
  for (const auto mode : {MinorMode::tight, MinorMode::restrictive, MinorMode::extensive, MinorMode::conjunctive}) {
    CHECK(minor_check(tight, fam, s, mode));
  }
  const Constraint loosest(Relation(2, 2), Relation::full(2, 2));
  CHECK(minor_check(loosest, fam, s, MinorMode::conjunctive));
  const Constraint bad(Relation::full(2, 2), Relation(2, 2));
  CHECK_FALSE(minor_check(bad, fam, Scheme::identity(2), MinorMode::conjunctive));
}

TEST_CASE("conjunctive minor check is relaxation of the tight minor")
{
  std::mt19937_64 rng(41);
  const auto all = ConstraintSpace(2, 2, 2).all().members();
  for (int trial = 0; trial < 50; ++trial) {
    const auto size = 1 + rng() % 2;
    std::vector<Constraint> fam;
    std::vector<std::uint32_t> sources;
    for (std::size_t j = 0; j < size; ++j) {
      const auto k = 1 + static_cast<std::uint32_t>(rng() % 2);
      fam.push_back(random_constraint(rng, k));
      sources.push_back(k);
    }
    const auto s = random_scheme(rng, 2, static_cast<std::uint32_t>(rng() % 3), sources);
    const auto tight = tight_minor(fam, s);
    for (const auto& c : all) {
      REQUIRE(minor_check(c, fam, s, MinorMode::conjunctive) == relaxation_of(c, tight));
    }
  }
}

TEST_CASE("special minors")
{
  const Constraint mono(leq(), leq());
  const auto sm = special_minor(mono, swap_scheme());
  CHECK(sm.constraint == Constraint(geq(), geq()));
  CHECK(sm.simple);
  CHECK(sm.weak);
  CHECK(special_minor(mono, Scheme::identity(2)).constraint == mono);
  const Scheme with_v{2, 1, {{SchemeEntry::coord(1), SchemeEntry::indet(1)}}};
  CHECK_FALSE(special_minor(mono, with_v).weak);
  CHECK_THROWS_AS(special_minor(mono, composition_scheme()), MismatchError);
}

TEST_CASE("scheme normalization and budget")
{
  const Scheme s{1, 3, {{SchemeEntry::indet(3), SchemeEntry::coord(1)}}};
  const auto n = normalize_scheme(s);
  CHECK(n.indeterminates == 1);
  CHECK(n.family[0][0] == SchemeEntry::indet(1));
  const Scheme wide{1, 3, {{SchemeEntry::indet(1), SchemeEntry::indet(2)}, {SchemeEntry::indet(3)}}};
  const Relation fam[] = {Relation::full(2, 2), Relation::full(2, 1)};
  CHECK_THROWS_AS(tight_minor_relation(fam, wide, MinorOptions{2}), BudgetExceeded);
  CHECK(tight_minor_relation(fam, wide, MinorOptions{3}).size() == 2);
  const Scheme bad{2, 0, {{SchemeEntry::coord(3)}}};
  CHECK_THROWS_AS(bad.validate(), RangeError);
}

TEST_CASE("scheme literal form")
{
  CHECK(to_string(composition_scheme()) == "target=2; V=1; h1=[c1,v1]; h2=[v1,c2]");
}

TEST_CASE("intersection is the identity two-family minor (exhaustive)")
{
  const auto all = ConstraintSpace(2, 2, 2).all().members();
  const auto s = Scheme::identity(2, 2);
  for (std::size_t i = 0; i < all.size(); i += 1) {
    for (std::size_t j = 0; j < all.size(); j += 1) {
      const Constraint fam[] = {all[i], all[j]};
      const Constraint expected(all[i].antecedent() & all[j].antecedent(),
                                all[i].consequent() & all[j].consequent());
      REQUIRE(tight_minor(fam, s) == expected);
    }
  }
}

TEST_CASE("compose_schemes examples")
{
  const Constraint mono(leq(), leq());
  const Constraint fam[] = {mono};

  const Scheme inner[] = {swap_scheme()};
  CHECK(compose_schemes(Scheme::identity(2), inner) == swap_scheme());

  const auto flat = compose_schemes(swap_scheme(), inner);
  CHECK(tight_minor(fam, flat) == mono);

  const Scheme inners[] = {swap_scheme(), swap_scheme()};
  const auto flat2 = compose_schemes(composition_scheme(), inners);
  const Constraint fam2[] = {mono, mono};
  CHECK(tight_minor(fam2, flat2) == Constraint(geq(), geq()));
}

TEST_CASE("flattened and hierarchical minors agree on random stacks")
{
  std::mt19937_64 rng(43);
  const MinorOptions wide{8};
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = 1 + static_cast<std::uint32_t>(rng() % 2);
    const auto outer_size = 1 + rng() % 2;
    std::vector<std::uint32_t> outer_sources;
    for (std::size_t j = 0; j < outer_size; ++j) {
      outer_sources.push_back(1 + static_cast<std::uint32_t>(rng() % 2));
    }
    const auto outer = random_scheme(rng, t, static_cast<std::uint32_t>(rng() % 3), outer_sources);
    std::vector<Scheme> inners;
    std::vector<Constraint> flat_family;
    std::vector<Constraint> middle;
    for (const auto k : outer_sources) {
      const auto size = 1 + rng() % 2;
      std::vector<std::uint32_t> sources;
      std::vector<Constraint> fam;
      for (std::size_t j = 0; j < size; ++j) {
        const auto a = 1 + static_cast<std::uint32_t>(rng() % 2);
        sources.push_back(a);
        fam.push_back(random_constraint(rng, a));
      }
      auto inner = random_scheme(rng, k, static_cast<std::uint32_t>(rng() % 3), sources);
      middle.push_back(tight_minor(fam, inner, wide));
      flat_family.insert(flat_family.end(), fam.begin(), fam.end());
      inners.push_back(std::move(inner));
    }
    const auto flat = compose_schemes(outer, inners);
    REQUIRE(tight_minor(flat_family, flat, wide) == tight_minor(middle, outer, wide));
  }
}

TEST_CASE("satisfaction transports to conjunctive minors")
{
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    const auto size = 1 + rng() % 2;
    std::vector<Constraint> fam;
    std::vector<std::uint32_t> sources;
    for (std::size_t j = 0; j < size; ++j) {
      const auto k = 1 + static_cast<std::uint32_t>(rng() % 2);
      fam.push_back(random_constraint(rng, k));
      sources.push_back(k);
    }
    const auto s = random_scheme(rng, 1 + static_cast<std::uint32_t>(rng() % 2), static_cast<std::uint32_t>(rng() % 3),
                                 sources);
    const auto minor = tight_minor(fam, s);
    for (std::uint32_t n = 1; n <= 3; ++n) {
      for (const auto& f : FunctionEnumerator(2, 2, n)) {
        bool all = true;
        for (const auto& c : fam) {
          all = all && satisfies(f, c);
        }
        if (all) {
          REQUIRE(satisfies(f, minor));
        }
      }
    }
  }
}
