#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "mgen/arithmetic.hpp"
#include "mgen/combinatorics.hpp"
#include "mgen/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace mgen;

namespace {

FieldElement el(std::uint32_t v) { return FieldElement{v}; }
Ambient amb(int n, std::uint32_t q) { return oracle::ambient_of(n, q); }

// Every vector of F_q^t, as raw coefficient lists.
std::vector<std::vector<FieldElement>> all_vectors(std::uint32_t q, int t) {
  std::vector<std::vector<FieldElement>> out;
  std::vector<FieldElement> v(static_cast<std::size_t>(t), el(0));
  while (true) {
    out.push_back(v);
    std::size_t i = v.size();
    while (i > 0 && v[i - 1].value == q - 1) v[--i] = el(0);
    if (i == 0) return out;
    ++v[i - 1].value;
  }
}

FieldElement sum_of(const FieldSpec& f, const std::vector<FieldElement>& v) {
  FieldElement s = f.zero();
  for (auto x : v) s = f.add(s, x);
  return s;
}

// No ordered tuple of t distinct points of A is a zero of f_c.
bool avoids_by_tuples(const PointSet& a, const std::vector<FieldElement>& c) {
  const std::size_t t = c.size();
  if (t > a.size()) return true;
  const auto& f = a.field();
  std::vector<std::size_t> pick(t, 0);
  while (true) {
    std::set<std::size_t> distinct(pick.begin(), pick.end());
    if (distinct.size() == t) {
      Point acc = zero_point(a.ambient().n);
      for (std::size_t j = 0; j < t; ++j) acc = point_add(f, acc, point_scale(f, c[j], a[pick[j]]));
      if (is_zero(acc)) return false;
    }
    std::size_t i = t;
    while (i > 0 && pick[i - 1] == a.size() - 1) pick[--i] = 0;
    if (i == 0) return true;
    ++pick[i - 1];
  }
}

// The characterization read literally: A weakly avoids f_c for every c in C_0^m.
bool arithmetic_by_definition(const PointSet& a, int m) {
  const auto& f = a.field();
  for (const auto& c : all_vectors(f.q(), m)) {
    if (sum_of(f, c) != f.zero()) continue;
    if (std::all_of(c.begin(), c.end(), [](FieldElement x) { return x.value == 0; })) continue;
    if (!avoids_by_tuples(a, c)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("apply_form examples") {
  const auto f3 = FieldSpec::make_shared(3, 1);
  const auto c = CoeffVector::sum_zero(*f3, {el(1), el(1), el(1)});  // (1, 1, -2) over F_3
  const Point a = Point::of({2, 1});
  CHECK(is_zero(apply_form(*f3, c, std::vector<Point>{a, a, a})));
  const auto c12 = CoeffVector::sum_zero(*f3, {el(1), el(2)});
  CHECK(apply_form(*f3, c12, std::vector<Point>{Point::of({1, 0}), Point::of({1, 1})}) == Point::of({0, 2}));
  CHECK_THROWS_AS(CoeffVector::sum_zero(*f3, {el(0), el(0), el(0)}), PreconditionError);
  CHECK_THROWS_AS(CoeffVector::sum_zero(*f3, {el(1), el(1)}), PreconditionError);
  CHECK_THROWS_AS(apply_form(*f3, c12, std::vector<Point>{Point::of({1, 0})}), PreconditionError);
}

TEST_CASE("enumerate_c0 examples and counts") {
  const auto f2 = FieldSpec::make(2, 1);
  const auto c = enumerate_c0(f2, 3);
  REQUIRE(c.size() == 3);
  std::set<std::vector<FieldElement>> got;
  for (const auto& v : c) got.insert(std::vector<FieldElement>(v.coeffs().begin(), v.coeffs().end()));
  CHECK(got == std::set<std::vector<FieldElement>>{
                   {el(1), el(1), el(0)}, {el(1), el(0), el(1)}, {el(0), el(1), el(1)}});

  const auto f3 = FieldSpec::make(3, 1);
  const auto c32 = enumerate_c0(f3, 2);
  REQUIRE(c32.size() == 2);
  CHECK(std::vector<FieldElement>(c32[0].coeffs().begin(), c32[0].coeffs().end()) ==
        std::vector<FieldElement>{el(1), el(2)});
  CHECK(std::vector<FieldElement>(c32[1].coeffs().begin(), c32[1].coeffs().end()) ==
        std::vector<FieldElement>{el(2), el(1)});
  CHECK(enumerate_c0(f3, 3).size() == 8);
  CHECK_THROWS_AS(enumerate_c0(f3, 1), PreconditionError);
}

TEST_CASE("|C_0^t| = q^{t-1} - 1 and every member sums to zero") {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const auto f = *oracle::ambient_of(1, q).field;
    for (int t = 2; t <= 4; ++t) {
      std::uint64_t expect = 1;
      for (int i = 1; i < t; ++i) expect *= q;
      const auto all = enumerate_c0(f, t);
      CHECK(all.size() == expect - 1);
      std::set<std::vector<FieldElement>> distinct;
      for (const auto& c : all) {
        std::vector<FieldElement> v(c.coeffs().begin(), c.coeffs().end());
        CHECK(sum_of(f, v) == f.zero());
        CHECK(c.support_size() > 0);
        distinct.insert(v);
      }
      CHECK(distinct.size() == all.size());
    }
  }
}

TEST_CASE("C_gamma^* examples") {
  const auto f5 = FieldSpec::make(5, 1);
  CHECK(enumerate_cgamma_star(f5, 2, el(1)).size() == 3);
  CHECK(enumerate_cgamma_star(f5, 2, el(0)).size() == 4);
  const auto f3 = FieldSpec::make(3, 1);
  // Nonzero (a, b, c) over F_3 summing to 1: the three permutations of (1, 1, 2).
  CHECK(enumerate_cgamma_star(f3, 3, el(1)).size() == 3);
  CHECK_THROWS_AS(enumerate_cgamma_star(f3, 0, el(1)), PreconditionError);
}

TEST_CASE("|C_gamma^*| lower bound and recurrence for q <= 9, k <= 4") {
  for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u}) {
    const auto f = *oracle::ambient_of(1, q).field;
    for (int k = 1; k <= 4; ++k) {
      for (std::uint32_t g = 0; g < q; ++g) {
        const auto all = enumerate_cgamma_star(f, k, el(g));
        // brute count over F_q^k
        std::uint64_t brute = 0;
        for (const auto& v : all_vectors(q, k)) {
          if (std::any_of(v.begin(), v.end(), [](FieldElement x) { return x.value == 0; })) continue;
          if (sum_of(f, v) == el(g)) ++brute;
        }
        CHECK(all.size() == brute);
        CHECK(count_cgamma_star(q, k, g == 0) == brute);
        if (k >= 2 && g != 0) {
          double lower = q - 2.0;
          for (int i = 0; i < k - 2; ++i) lower *= q - 1.0;
          CHECK(static_cast<double>(brute) >= lower);
        }
        for (const auto& c : all) {
          CHECK(c.kind() == CoeffVector::Kind::AllNonzeroSum);
          CHECK(c.support_size() == static_cast<std::size_t>(k));
        }
      }
    }
  }
}

TEST_CASE("weakly_avoids examples") {
  const auto a1 = amb(1, 3);
  const PointSet line(a1, {Point::of({0}), Point::of({1}), Point::of({2})});
  CHECK_FALSE(weakly_avoids(line, CoeffVector::sum_zero(line.field(), {el(1), el(1), el(1)})));

  std::mt19937_64 rng(2);
  const auto a = amb(3, 5);
  for (int rep = 0; rep < 50; ++rep) {
    const PointSet s = gen::random_set(a, 2 + rng() % 6, rng);
    for (std::uint32_t x = 1; x < 5; ++x) {
      CHECK(weakly_avoids(s, CoeffVector::sum_zero(s.field(), {el(x), el(5 - x)})));
      CHECK(weakly_avoids(s, CoeffVector::sum_zero(s.field(), {el(0), el(x), el(0), el(5 - x)})));
    }
  }

  const PointSet frame(amb(2, 3), {Point::of({0, 0}), Point::of({1, 0}), Point::of({0, 1})});
  for (const auto& c : enumerate_c0(frame.field(), 3)) CHECK(weakly_avoids(frame, c));

  const PointSet two(amb(2, 3), {Point::of({0, 0}), Point::of({1, 0})});
  CHECK(weakly_avoids(two, CoeffVector::sum_zero(two.field(), {el(1), el(1), el(1)})));
}

TEST_CASE("weakly_avoids matches ordered-tuple enumeration") {
  std::mt19937_64 rng(29);
  for (auto [n, q] : std::vector<std::pair<int, std::uint32_t>>{{2, 3}, {2, 4}, {2, 5}, {3, 3}}) {
    const auto a = amb(n, q);
    const auto& f = *a.field;
    for (int t = 2; t <= 4; ++t) {
      const auto cs = enumerate_c0(f, t);
      for (int rep = 0; rep < 20; ++rep) {
        const PointSet s = gen::random_set(a, 2 + rng() % 5, rng);
        const auto& c = cs[rng() % cs.size()];
        CHECK(weakly_avoids(s, c) == avoids_by_tuples(s, std::vector<FieldElement>(c.coeffs().begin(), c.coeffs().end())));
      }
    }
  }
}

TEST_CASE("is_m_general_arithmetic examples") {
  const PointSet s124(amb(1, 5), {Point::of({1}), Point::of({2}), Point::of({4})});
  CHECK_FALSE(is_m_general_arithmetic(s124, 3));
  const PointSet frame(amb(2, 3), {Point::of({0, 0}), Point::of({1, 0}), Point::of({0, 1})});
  CHECK(is_m_general_arithmetic(frame, 3));
  CHECK_THROWS_AS(is_m_general_arithmetic(frame, 4), PreconditionError);
  CHECK_THROWS_AS(is_m_general_arithmetic(frame, 5), PreconditionError);
  CHECK(outside_stated_range(frame.ambient(), 3));
  CHECK_FALSE(outside_stated_range(amb(3, 3), 3));
}

namespace {

// Some ordering (x1, x2, x3) of distinct points has x1 + x2 - 2 x3 = 0.
bool has_three_term_progression(const PointSet& s) {
  const auto& f = s.field();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (i == j || j == k || i == k) continue;
        const Point lhs = point_add(f, s[i], s[j]);
        if (lhs == point_scale(f, f.add(f.one(), f.one()), s[k])) return true;
      }
  return false;
}

}  // namespace

TEST_CASE("progression-free does not imply 3-general once q > 3") {
  // {1, 2, 4} in F_5 is not 3-general, but it does contain the progression
  // 1, 4, 2 (1 + 2 - 2*4 = -5). Every 3-subset of F_5 is a progression.
  const PointSet s124(amb(1, 5), {Point::of({1}), Point::of({2}), Point::of({4})});
  CHECK(has_three_term_progression(s124));
  CHECK_FALSE(is_m_general_geometric(s124, 3));
  CHECK_FALSE(is_m_general_arithmetic(s124, 3));
  const PointSet f5(amb(1, 5), {Point::of({0}), Point::of({1}), Point::of({2}), Point::of({3}), Point::of({4})});
  for_each_combination(5, 3, [&](std::span<const std::size_t> idx) {
    CHECK(has_three_term_progression(f5.subset(idx)));
    return true;
  });

  // {0, 1, 3} in F_7: no progression, yet three points on a line.
  const PointSet s013(amb(1, 7), {Point::of({0}), Point::of({1}), Point::of({3})});
  CHECK_FALSE(has_three_term_progression(s013));
  CHECK_FALSE(is_m_general_geometric(s013, 3));
  CHECK_FALSE(is_m_general_arithmetic(s013, 3));
  CHECK(weakly_avoids(s013, CoeffVector::sum_zero(s013.field(), {el(1), el(1), el(5)})));

  // In F_3 the two notions coincide.
  gen::for_each_subset(amb(2, 3), 3, [](const PointSet& s) {
    CHECK(has_three_term_progression(s) == !is_m_general_geometric(s, 3));
  });
}

TEST_CASE("arithmetic predicate matches the literal characterization and the geometric test") {
  std::mt19937_64 rng(31);
  for (auto [n, q] : std::vector<std::pair<int, std::uint32_t>>{{2, 3}, {3, 2}, {2, 4}, {3, 3}, {2, 5}, {4, 2}}) {
    const auto a = amb(n, q);
    for (int m = 3; m <= std::min(n + 2, 5); ++m) {
      for (int rep = 0; rep < 15; ++rep) {
        const std::size_t size = static_cast<std::size_t>(m) + rng() % 3;
        if (size > *a.size()) continue;
        const PointSet s = gen::random_set(a, size, rng);
        const bool ari = is_m_general_arithmetic(s, m);
        CHECK(ari == is_m_general_geometric(s, m));
        if (std::pow(q, m) <= 1024) CHECK(ari == arithmetic_by_definition(s, m));
      }
    }
  }
}

TEST_CASE("restriction closure: avoiding C_0^m implies avoiding C_0^t for 3 <= t <= m") {
  std::mt19937_64 rng(37);
  int general = 0;
  for (auto [n, q] : std::vector<std::pair<int, std::uint32_t>>{{3, 3}, {4, 2}, {3, 4}}) {
    const auto a = amb(n, q);
    for (int m = 4; m <= 5; ++m) {
      for (int rep = 0; rep < 40; ++rep) {
        const PointSet s = gen::random_set(a, static_cast<std::size_t>(m) + rng() % 2, rng);
        const auto all_m = enumerate_c0(s.field(), m);
        const bool avoids_m = std::all_of(all_m.begin(), all_m.end(), [&](const auto& c) { return weakly_avoids(s, c); });
        if (!avoids_m) continue;
        ++general;
        for (int t = 3; t <= m; ++t)
          for (const auto& c : enumerate_c0(s.field(), t)) CHECK(weakly_avoids(s, c));
      }
    }
  }
  CHECK(general > 0);
}

TEST_CASE("weak B_k and B_k examples") {
  const auto a5 = amb(2, 5);
  const PointSet cross(a5, {Point::of({1, 0}), Point::of({0, 1}), Point::of({2, 0}), Point::of({0, 2})});
  CHECK(is_weak_bk(cross, 2));
  CHECK(is_bk(cross, 2));
  CHECK(is_weak_bk(PointSet(a5, {Point::of({1, 0}), Point::of({0, 1})}), 3));
  const PointSet line(amb(1, 3), {Point::of({0}), Point::of({1}), Point::of({2})});
  CHECK(is_weak_bk(line, 2));
  const PointSet pair3(amb(2, 3), {Point::of({1, 0}), Point::of({0, 2})});
  CHECK_FALSE(is_bk(pair3, 3));
  CHECK(is_bk(PointSet(a5, {Point::of({3, 3})}), 4));
  CHECK_THROWS_AS(is_weak_bk(cross, 0), PreconditionError);
}

TEST_CASE("B_k over F_2 treats a + a = b + b as trivial") {
  const PointSet s(amb(3, 2), {Point::of({0, 0, 0}), Point::of({1, 0, 0}), Point::of({0, 1, 0})});
  CHECK(is_bk(s, 2));
  const PointSet dep(amb(3, 2),
                     {Point::of({0, 0, 0}), Point::of({1, 0, 0}), Point::of({0, 1, 0}), Point::of({1, 1, 0})});
  CHECK_FALSE(is_bk(dep, 2));
}

TEST_CASE("weak B_k brute-force cross-check") {
  std::mt19937_64 rng(41);
  const auto a = amb(2, 5);
  for (int rep = 0; rep < 200; ++rep) {
    const PointSet s = gen::random_set(a, 2 + rng() % 6, rng);
    for (int k = 1; k <= 3; ++k) {
      std::map<Point, int> seen;
      bool distinct = true;
      for_each_combination(s.size(), static_cast<std::size_t>(k), [&](std::span<const std::size_t> idx) {
        Point acc = zero_point(2);
        for (auto i : idx) acc = point_add(s.field(), acc, s[i]);
        distinct = distinct && ++seen[acc] == 1;
        return true;
      });
      CHECK(is_weak_bk(s, k) == distinct);
    }
  }
}

TEST_CASE("m-general implies weak B_k for k <= m/2") {
  std::mt19937_64 rng(43);
  int general = 0;
  for (auto [n, q] : std::vector<std::pair<int, std::uint32_t>>{{3, 3}, {4, 2}, {3, 4}, {4, 3}, {5, 2}}) {
    const auto a = amb(n, q);
    for (int m = 3; m <= n + 2; ++m) {
      for (int rep = 0; rep < 60; ++rep) {
        const PointSet s = gen::random_set(a, 2 + rng() % 6, rng);
        if (!is_m_general_geometric(s, m)) continue;
        ++general;
        for (int k = 1; k <= m / 2; ++k) CHECK(is_weak_bk(s, k));
      }
    }
  }
  CHECK(general > 50);
}

TEST_CASE("k-sum injectivity examples") {
  const PointSet frame(amb(2, 5), {Point::of({0, 0}), Point::of({1, 0}), Point::of({0, 1})});
  REQUIRE(is_m_general_geometric(frame, 4));
  CHECK(verify_ksum_injectivity(frame, 2, el(1)));
  const PointSet line(amb(1, 3), {Point::of({0}), Point::of({1}), Point::of({2})});
  CHECK(verify_ksum_injectivity(line, 1, el(1)));
  // 0 + 3 = 1 + 2, so alpha = (3, 3) hits 4 twice.
  const PointSet bad(amb(1, 5), {Point::of({0}), Point::of({1}), Point::of({2}), Point::of({3})});
  CHECK_FALSE(is_weak_bk(bad, 2));
  CHECK_FALSE(verify_ksum_injectivity(bad, 2, el(1)));
  CHECK_THROWS_AS(verify_ksum_injectivity(frame, 2, el(0)), PreconditionError);
}

TEST_CASE("injectivity holds on random 2k-general sets") {
  std::mt19937_64 rng(47);
  int general = 0;
  for (auto [n, q] : std::vector<std::pair<int, std::uint32_t>>{{3, 3}, {4, 3}, {3, 4}, {3, 5}, {5, 2}}) {
    const auto a = amb(n, q);
    for (int rep = 0; rep < 60; ++rep) {
      const PointSet s = gen::random_set(a, 3 + rng() % 5, rng);
      if (!is_m_general_geometric(s, 4)) continue;
      ++general;
      for (std::uint32_t g = q > 2 ? 1 : 0; g < std::min<std::uint32_t>(q, 3); ++g) {
        CHECK(verify_ksum_injectivity(s, 2, el(g)));
      }
    }
  }
  CHECK(general > 20);
}
