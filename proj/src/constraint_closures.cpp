#include "galois/constraint_closures.hpp"

#include "galois/satisfaction.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>

namespace galois {

namespace {

std::uint64_t low_bits(std::uint64_t n)
{
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// Source-tuple lookup for lifting a k-ary relation along every map
// h: k -> t + v into the space D^(t+v) of (target tuple, Skolem values).
struct LiftTable
{
  std::uint32_t source_arity = 0;
  std::uint32_t target = 0;
  std::uint32_t indets = 0;
  std::uint32_t maps = 0;
  std::uint32_t points_a = 0;
  std::uint32_t points_b = 0;
  std::vector<std::uint32_t> src_a; // maps x points_a
  std::vector<std::uint32_t> src_b; // maps x points_b

  SchemeMap decode(std::uint32_t h) const
  {
    const auto symbols = target + indets;
    SchemeMap out(source_arity);
    for (std::uint32_t i = source_arity; i-- > 0;) {
      const auto digit = h % symbols;
      h /= symbols;
      out[i] = digit < target ? SchemeEntry{SchemeEntry::Kind::coordinate, digit}
                              : SchemeEntry{SchemeEntry::Kind::indeterminate, digit - target};
    }
    return out;
  }
};

std::vector<std::uint32_t> build_sources(std::uint32_t d, std::uint32_t k, std::uint32_t symbols,
                                         std::uint32_t maps, std::uint32_t points)
{
  std::vector<std::uint32_t> out(static_cast<std::size_t>(maps) * points);
  std::vector<std::uint32_t> digits(k);
  for (std::uint32_t h = 0; h < maps; ++h) {
    auto code = h;
    for (std::uint32_t i = k; i-- > 0;) {
      digits[i] = code % symbols;
      code /= symbols;
    }
    for (std::uint32_t p = 0; p < points; ++p) {
      const auto x = unrank_tuple(p, d, symbols);
      Rank r = 0;
      for (const auto s : digits) {
        r = r * d + x[s];
      }
      out[static_cast<std::size_t>(h) * points + p] = static_cast<std::uint32_t>(r);
    }
  }
  return out;
}

LiftTable make_lift_table(std::uint32_t a, std::uint32_t b, std::uint32_t k, std::uint32_t t,
                          std::uint32_t v)
{
  LiftTable lt;
  lt.source_arity = k;
  lt.target = t;
  lt.indets = v;
  const auto symbols = t + v;
  const auto pa = checked_pow(a, symbols);
  const auto pb = checked_pow(b, symbols);
  if (!pa || !pb || *pa > 64 || *pb > 64) {
    throw BudgetExceeded("lifted tuple space D^(" + std::to_string(t) + "+" + std::to_string(v) + ")",
                         pow_string(std::max(a, b), symbols), "64");
  }
  const auto maps = checked_pow(symbols, k);
  if (!maps || *maps > (1u << 16)) {
    throw BudgetExceeded("scheme maps " + std::to_string(k) + " -> " + std::to_string(symbols),
                         pow_string(symbols, k), std::to_string(1u << 16));
  }
  lt.maps = static_cast<std::uint32_t>(*maps);
  lt.points_a = static_cast<std::uint32_t>(*pa);
  lt.points_b = static_cast<std::uint32_t>(*pb);
  lt.src_a = build_sources(a, k, symbols, lt.maps, lt.points_a);
  lt.src_b = build_sources(b, k, symbols, lt.maps, lt.points_b);
  return lt;
}

std::uint64_t lift(std::uint64_t mask, const std::uint32_t* src, std::uint32_t points)
{
  std::uint64_t out = 0;
  for (std::uint32_t p = 0; p < points; ++p) {
    out |= ((mask >> src[p]) & 1u) << p;
  }
  return out;
}

// Existential projection of D^(t+v) onto D^t (Skolem values least significant).
std::uint64_t project(std::uint64_t mask, std::uint32_t target_points, std::uint32_t block)
{
  const auto block_mask = low_bits(block);
  std::uint64_t out = 0;
  for (std::uint32_t x = 0; x < target_points; ++x) {
    if ((mask >> (x * block)) & block_mask) {
      out |= std::uint64_t{1} << x;
    }
  }
  return out;
}

class MinorClosureEngine
{
public:
  MinorClosureEngine(std::uint32_t a, std::uint32_t b, std::vector<std::uint32_t> arities,
                     const CmBounds& bounds, const Budget& budget)
  : a_(a), b_(b), arities_(std::move(arities)), bounds_(bounds)
  {
    if (bounds.max_family == 0 || bounds.max_iterations == 0) {
      throw RangeError("CM bounds must be positive");
    }
    const auto top = *std::max_element(arities_.begin(), arities_.end());
    spaces_.resize(top + 1);
    present_.resize(top + 1);
    for (const auto t : arities_) {
      spaces_[t].emplace(a, b, t, budget);
      present_[t] = Bitset(spaces_[t]->size());
    }
    remaining_ = 0;
    for (const auto t : arities_) {
      remaining_ += spaces_[t]->size();
    }
    block_a_ = static_cast<std::uint32_t>(*checked_pow(a, bounds.max_indets));
    block_b_ = static_cast<std::uint32_t>(*checked_pow(b, bounds.max_indets));
    tables_.resize(top + 1);
    for (const auto k : arities_) {
      tables_[k].resize(top + 1);
      for (const auto t : arities_) {
        tables_[k][t] = make_lift_table(a, b, k, t, bounds.max_indets);
      }
    }
  }

  void seed(const Constraint& c)
  {
    const auto t = c.arity();
    emit(t, c.antecedent().mask(), c.consequent().mask(), [] { return Raw{CmWitness::Kind::seed, {}, 0}; });
  }

  CmResult run()
  {
    CmResult out;
    out.bounds = bounds_;
    std::size_t processed = 0;
    while (processed < members_.size() && remaining_ > 0) {
      if (out.iterations == bounds_.max_iterations) {
        out.converged = false;
        break;
      }
      ++out.iterations;
      const auto end = members_.size();
      for (; processed < end && remaining_ > 0; ++processed) {
        expand(static_cast<std::uint32_t>(processed));
      }
    }
    out.members = ConstraintSet(a_, b_);
    for (std::size_t i = 0; i < members_.size(); ++i) {
      auto c = constraint(static_cast<std::uint32_t>(i));
      out.witnesses.emplace(c, materialize(raw_[i]));
      out.members.insert(std::move(c));
    }
    return out;
  }

private:
  struct Member
  {
    std::uint32_t arity;
    std::uint64_t ant;
    std::uint64_t cons;
    // lifts[t][h] = lifted (antecedent, consequent); distinct[t] lists one
    // map per distinct lift.
    std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> lifts;
    std::vector<std::vector<std::uint32_t>> distinct;
  };

  struct Raw
  {
    CmWitness::Kind kind;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> chain; // (member, map)
    std::uint32_t target;
  };

  Constraint constraint(std::uint32_t i) const
  {
    const auto& m = members_[i];
    return {Relation::from_mask(a_, m.arity, m.ant), Relation::from_mask(b_, m.arity, m.cons)};
  }

  template<typename MakeWitness>
  void emit(std::uint32_t t, std::uint64_t ant, std::uint64_t cons, MakeWitness&& make)
  {
    const auto r = spaces_[t]->rank(ant, cons);
    if (present_[t].test(r)) {
      return;
    }
    present_[t].set(r);
    --remaining_;
    Member m{t, ant, cons, {}, {}};
    m.lifts.resize(tables_.size());
    m.distinct.resize(tables_.size());
    for (const auto target : arities_) {
      const auto& lt = tables_[t][target];
      auto& out = m.lifts[target];
      out.resize(lt.maps);
      for (std::uint32_t h = 0; h < lt.maps; ++h) {
        out[h] = {lift(ant, lt.src_a.data() + std::size_t{h} * lt.points_a, lt.points_a),
                  lift(cons, lt.src_b.data() + std::size_t{h} * lt.points_b, lt.points_b)};
      }
      std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
      for (std::uint32_t h = 0; h < lt.maps; ++h) {
        if (seen.insert(out[h]).second) {
          m.distinct[target].push_back(h);
        }
      }
    }
    members_.push_back(std::move(m));
    raw_.push_back(make());
  }

  void emit_minor(std::uint32_t t, std::uint64_t lifted_a, std::uint64_t lifted_b,
                  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& chain)
  {
    const auto& space = *spaces_[t];
    const auto ant = project(lifted_a, space.a_points(), block_a_);
    const auto cons = project(lifted_b, space.b_points(), block_b_);
    emit(t, ant, cons, [&] { return Raw{CmWitness::Kind::minor, chain, t}; });
  }

  void descend(std::uint32_t t, std::uint64_t acc_a, std::uint64_t acc_b, std::uint32_t upper,
               std::vector<std::pair<std::uint32_t, std::uint32_t>>& chain)
  {
    for (std::uint32_t j = 0; j <= upper && remaining_ > 0; ++j) {
      const auto maps = members_[j].distinct[t].size();
      for (std::size_t d = 0; d < maps; ++d) {
        // members_ may grow during emission; re-read the lift each time.
        const auto h = members_[j].distinct[t][d];
        const auto [la, lb] = members_[j].lifts[t][h];
        chain.emplace_back(j, h);
        emit_minor(t, acc_a & la, acc_b & lb, chain);
        if (chain.size() < bounds_.max_family) {
          descend(t, acc_a & la, acc_b & lb, j, chain);
        }
        chain.pop_back();
      }
    }
  }

  void expand(std::uint32_t i)
  {
    const auto t = members_[i].arity;
    const auto ant = members_[i].ant;
    const auto cons = members_[i].cons;
    const auto& space = *spaces_[t];

    // Single-tuple relaxation steps.
    for (std::uint32_t x = 0; x < space.a_points(); ++x) {
      if ((ant >> x) & 1u) {
        emit(t, ant & ~(std::uint64_t{1} << x), cons,
             [&] { return Raw{CmWitness::Kind::relaxation, {{i, 0}}, t}; });
      }
    }
    for (std::uint32_t y = 0; y < space.b_points(); ++y) {
      if (!((cons >> y) & 1u)) {
        emit(t, ant, cons | (std::uint64_t{1} << y),
             [&] { return Raw{CmWitness::Kind::relaxation, {{i, 0}}, t}; });
      }
    }

    // Pairwise intersections with earlier members of the same arity.
    for (std::uint32_t j = 0; j < i; ++j) {
      if (members_[j].arity == t) {
        const auto ja = members_[j].ant;
        const auto jc = members_[j].cons;
        emit(t, ant & ja, cons & jc, [&] { return Raw{CmWitness::Kind::intersection, {{i, 0}, {j, 0}}, t}; });
      }
    }

    // Tight minors of families whose last member is i.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> chain;
    for (const auto target : arities_) {
      const auto maps = members_[i].distinct[target].size();
      for (std::size_t d = 0; d < maps && remaining_ > 0; ++d) {
        const auto h = members_[i].distinct[target][d];
        const auto [la, lb] = members_[i].lifts[target][h];
        chain.assign(1, {i, h});
        emit_minor(target, la, lb, chain);
        if (bounds_.max_family >= 2) {
          descend(target, la, lb, i, chain);
        }
      }
    }
  }

  CmWitness materialize(const Raw& raw) const
  {
    CmWitness w;
    w.kind = raw.kind;
    for (const auto& [member, h] : raw.chain) {
      w.family.push_back(constraint(member));
    }
    if (raw.kind == CmWitness::Kind::intersection) {
      w.scheme = Scheme::identity(raw.target, 2);
    } else if (raw.kind == CmWitness::Kind::minor) {
      Scheme s;
      s.target = raw.target;
      s.indeterminates = bounds_.max_indets;
      for (const auto& [member, h] : raw.chain) {
        s.family.push_back(tables_[members_[member].arity][raw.target].decode(h));
      }
      w.scheme = std::move(s);
    }
    return w;
  }

  std::uint32_t a_, b_;
  std::vector<std::uint32_t> arities_;
  CmBounds bounds_;
  std::vector<std::optional<ConstraintSpace>> spaces_;
  std::vector<Bitset> present_;
  std::vector<std::vector<LiftTable>> tables_; // [source arity][target]
  std::vector<Member> members_;
  std::vector<Raw> raw_;
  std::uint64_t remaining_ = 0; // points of the materialized spaces not yet present
  std::uint32_t block_a_ = 1, block_b_ = 1;
};

} // namespace

CmResult cm_m_closure(const ConstraintSet& t_m, std::uint32_t m, const CmBounds& bounds, const Budget& budget)
{
  if (m == 0) {
    throw RangeError("constraint arity must be positive");
  }
  for (const auto arity : t_m.arities()) {
    if (arity != m) {
      throw MismatchError("cm_m closure at arity " + std::to_string(m) + " given a constraint of arity " +
                          std::to_string(arity));
    }
  }
  MinorClosureEngine engine(t_m.a_size(), t_m.b_size(), {m}, bounds, budget);
  for (const auto& c : t_m.members()) {
    engine.seed(c);
  }
  engine.seed(canonical_constraint(CanonicalKind::equality, m, t_m.a_size(), t_m.b_size()));
  engine.seed(canonical_constraint(CanonicalKind::empty, m, t_m.a_size(), t_m.b_size()));
  return engine.run();
}

CmResult cm_closure(const ConstraintSet& t, std::uint32_t cap, const CmBounds& bounds, const Budget& budget)
{
  if (cap == 0) {
    throw RangeError("arity cap must be positive");
  }
  std::vector<std::uint32_t> arities;
  for (std::uint32_t k = 1; k <= cap; ++k) {
    arities.push_back(k);
  }
  for (const auto arity : t.arities()) {
    if (arity > cap) {
      throw RangeError("constraint of arity " + std::to_string(arity) + " above cap " + std::to_string(cap));
    }
  }
  MinorClosureEngine engine(t.a_size(), t.b_size(), arities, bounds, budget);
  for (const auto& c : t.members()) {
    engine.seed(c);
  }
  for (const auto k : arities) {
    engine.seed(canonical_constraint(CanonicalKind::equality, k, t.a_size(), t.b_size()));
    engine.seed(canonical_constraint(CanonicalKind::empty, k, t.a_size(), t.b_size()));
  }
  return engine.run();
}

namespace {

std::vector<SchemeMap> all_scheme_maps(std::uint32_t k, std::uint32_t t, std::uint32_t v)
{
  const auto symbols = t + v;
  const auto count = *checked_pow(symbols, k);
  std::vector<SchemeMap> out;
  out.reserve(count);
  for (std::uint64_t h = 0; h < count; ++h) {
    SchemeMap map(k);
    auto code = h;
    for (std::uint32_t i = k; i-- > 0;) {
      const auto digit = static_cast<std::uint32_t>(code % symbols);
      code /= symbols;
      map[i] = digit < t ? SchemeEntry{SchemeEntry::Kind::coordinate, digit}
                         : SchemeEntry{SchemeEntry::Kind::indeterminate, digit - t};
    }
    out.push_back(std::move(map));
  }
  return out;
}

} // namespace

std::optional<Constraint> audit_cm_fixpoint(const CmResult& result, std::size_t pair_samples)
{
  const auto& set = result.members;
  const auto members = set.members();
  const auto arities = set.arities();
  const auto v = result.bounds.max_indets;
  const MinorOptions options{v};

  for (const auto& c : members) {
    for (const auto x : c.antecedent().ranks()) {
      auto ant = c.antecedent();
      ant.erase(x);
      Constraint r(std::move(ant), c.consequent());
      if (!set.contains(r)) {
        return r;
      }
    }
    for (Rank y = 0; y < c.consequent().universe(); ++y) {
      if (!c.consequent().contains(y)) {
        auto cons = c.consequent();
        cons.insert(y);
        Constraint r(c.antecedent(), std::move(cons));
        if (!set.contains(r)) {
          return r;
        }
      }
    }
  }

  for (const auto m : arities) {
    const auto& level = set.at_arity(m);
    for (auto i = level.begin(); i != level.end(); ++i) {
      for (auto j = std::next(i); j != level.end(); ++j) {
        Constraint r(i->antecedent() & j->antecedent(), i->consequent() & j->consequent());
        if (!set.contains(r)) {
          return r;
        }
      }
    }
  }

  for (const auto& c : members) {
    for (const auto t : arities) {
      for (const auto& h : all_scheme_maps(c.arity(), t, v)) {
        Scheme s{t, v, {h}};
        const Constraint family[] = {c};
        auto r = tight_minor(family, s, options);
        if (!set.contains(r)) {
          return r;
        }
      }
    }
  }

  if (result.bounds.max_family >= 2 && !members.empty()) {
    std::mt19937_64 rng(0x5eedc0de);
    for (std::size_t s = 0; s < pair_samples; ++s) {
      const auto& c1 = members[rng() % members.size()];
      const auto& c2 = members[rng() % members.size()];
      const auto t = arities[rng() % arities.size()];
      const auto maps1 = *checked_pow(t + v, c1.arity());
      const auto maps2 = *checked_pow(t + v, c2.arity());
      const auto h1 = all_scheme_maps(c1.arity(), t, v)[rng() % maps1];
      const auto h2 = all_scheme_maps(c2.arity(), t, v)[rng() % maps2];
      Scheme scheme{t, v, {h1, h2}};
      const Constraint family[] = {c1, c2};
      auto r = tight_minor(family, scheme, options);
      if (!set.contains(r)) {
        return r;
      }
    }
  }
  return std::nullopt;
}

std::optional<Constraint> certify_witnesses(const CmResult& result, const ConstraintSet& seeds)
{
  for (const auto& c : result.members.members()) {
    const auto it = result.witnesses.find(c);
    if (it == result.witnesses.end()) {
      return c;
    }
    const auto& w = it->second;
    for (const auto& parent : w.family) {
      if (!result.members.contains(parent)) {
        return c;
      }
    }
    switch (w.kind) {
    case CmWitness::Kind::seed: {
      const auto m = c.arity();
      const bool canonical =
        c == canonical_constraint(CanonicalKind::equality, m, c.a_size(), c.b_size()) ||
        c == canonical_constraint(CanonicalKind::empty, m, c.a_size(), c.b_size());
      if (!canonical && !seeds.contains(c)) {
        return c;
      }
      break;
    }
    case CmWitness::Kind::relaxation:
      if (w.family.size() != 1 || !relaxation_of(c, w.family.front())) {
        return c;
      }
      break;
    case CmWitness::Kind::intersection:
    case CmWitness::Kind::minor: {
      if (!w.scheme) {
        return c;
      }
      const MinorOptions options{w.scheme->indeterminates};
      if (tight_minor(w.family, *w.scheme, options) != c) {
        return c;
      }
      break;
    }
    }
  }
  return std::nullopt;
}

ConstraintSet cm_m_oracle(const ConstraintSet& t_m, std::uint32_t m, const Budget& budget)
{
  for (const auto arity : t_m.arities()) {
    if (arity != m) {
      throw MismatchError("cm_m oracle at arity " + std::to_string(m) + " given a constraint of arity " +
                          std::to_string(arity));
    }
  }
  // Every m-ary antecedent has at most |A|^m tuples, so |A|^m-ary functions
  // separate everything the Galois closure can separate.
  const auto n_star = tuple_space(t_m.a_size(), m);
  if (n_star > 64) {
    throw BudgetExceeded("function arity |A|^" + std::to_string(m), std::to_string(n_star), "64");
  }
  const auto k = fsc_n(t_m, static_cast<std::uint32_t>(n_star), budget);
  return csf_m(k, m, budget);
}

CertifiedCm certified_cm_m(const ConstraintSet& t_m, std::uint32_t m, const CmBounds& bounds,
                           const Budget& budget, std::uint32_t max_escalations)
{
  CertifiedCm out;
  out.oracle = cm_m_oracle(t_m, m, budget);
  auto current = bounds;
  for (std::uint32_t attempt = 0;; ++attempt) {
    out.result = cm_m_closure(t_m, m, current, budget);
    if (!out.result.members.is_subset_of(out.oracle)) {
      out.sound = false;
      out.agrees = false;
      return out;
    }
    if (out.result.members == out.oracle) {
      out.agrees = true;
      return out;
    }
    if (attempt == max_escalations) {
      return out;
    }
    current.max_indets += 1;
    out.escalations.push_back(current);
  }
}

ConstraintSet lo_n_closure(const ConstraintSet& t, std::uint32_t n, const Budget& budget)
{
  if (n == 0) {
    throw RangeError("local closure parameter must be positive");
  }
  ConstraintSet out = t;
  for (const auto m : t.arities()) {
    const ConstraintSpace space(t.a_size(), t.b_size(), m, budget);
    const auto ants = space.antecedent_count();
    const auto conss = space.consequent_count();
    const auto b_points = space.b_points();

    Bitset in_t(space.size());
    for (const auto& c : t.at_arity(m)) {
      in_t.set(space.rank(c));
    }

    // good[R'](S): every (R', S') with S' containing S is in T.
    std::vector<Bitset> good(ants);
    for (std::uint64_t r = 0; r < ants; ++r) {
      if (static_cast<std::uint32_t>(std::popcount(r)) > n) {
        continue;
      }
      Bitset g(conss);
      for (std::uint64_t s = conss; s-- > 0;) {
        if (!in_t.test(space.rank(r, s))) {
          continue;
        }
        bool ok = true;
        for (std::uint32_t y = 0; y < b_points && ok; ++y) {
          const auto bit = std::uint64_t{1} << y;
          if (!(s & bit)) {
            ok = g.test(s | bit);
          }
        }
        if (ok) {
          g.set(s);
        }
      }
      good[r] = std::move(g);
    }

    for (std::uint64_t r = 0; r < ants; ++r) {
      Bitset q(conss);
      q.set_all();
      std::uint64_t sub = r;
      while (true) {
        if (static_cast<std::uint32_t>(std::popcount(sub)) <= n) {
          q &= good[sub];
        }
        if (sub == 0) {
          break;
        }
        sub = (sub - 1) & r;
      }
      q.for_each([&](std::size_t s) { out.insert(space.at(space.rank(r, s))); });
    }
  }
  return out;
}

ConstraintSet lo_constraints_closure(const ConstraintSet& t, const Budget& budget)
{
  std::uint64_t n = 1;
  for (const auto m : t.arities()) {
    n = std::max(n, tuple_space(t.a_size(), m));
  }
  auto out = lo_n_closure(t, static_cast<std::uint32_t>(n), budget);
  if (!(out == t)) {
    throw std::logic_error("local closure changed a constraint set over a finite domain");
  }
  return out;
}

UnionCheck union_closure_check(const ConstraintSet& t)
{
  for (const auto m : t.arities()) {
    const auto& level = t.at_arity(m);
    for (auto i = level.begin(); i != level.end(); ++i) {
      for (auto j = std::next(i); j != level.end(); ++j) {
        Constraint u(i->antecedent() | j->antecedent(), i->consequent() | j->consequent());
        if (!level.contains(u)) {
          return {false, std::make_pair(*i, *j)};
        }
      }
    }
  }
  return {};
}

ConstraintSet relaxation_closure(const ConstraintSet& t, const Budget& budget)
{
  ConstraintSet out(t.a_size(), t.b_size(), t.arity_cap());
  for (const auto m : t.arities()) {
    const ConstraintSpace space(t.a_size(), t.b_size(), m, budget);
    Bitset seen(space.size());
    const auto full_b = low_bits(space.b_points());
    for (const auto& c : t.at_arity(m)) {
      const auto ant = c.antecedent().mask();
      const auto cons = c.consequent().mask();
      const auto free = full_b & ~cons;
      std::uint64_t r = ant;
      while (true) {
        std::uint64_t s = free;
        while (true) {
          const auto rank = space.rank(r, cons | s);
          if (!seen.test(rank)) {
            seen.set(rank);
            out.insert(space.at(rank));
          }
          if (s == 0) {
            break;
          }
          s = (s - 1) & free;
        }
        if (r == 0) {
          break;
        }
        r = (r - 1) & ant;
      }
    }
  }
  return out;
}

} // namespace galois
