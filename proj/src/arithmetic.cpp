#include "mgen/arithmetic.hpp"

#include <map>
#include <string>
#include <unordered_map>

#include "mgen/combinatorics.hpp"
#include "mgen/error.hpp"

namespace mgen {

namespace {

FieldElement sum_of(const FieldSpec& f, std::span<const FieldElement> c) {
  FieldElement s = f.zero();
  for (auto x : c) s = f.add(s, x);
  return s;
}

// Accumulates acc += c * x in place.
void axpy(const FieldSpec& f, FieldElement c, const Point& x, Point& acc) {
  for (std::size_t i = 0; i < acc.coords.size(); ++i) {
    acc.coords[i] = f.add(acc.coords[i], f.mul(c, x.coords[i]));
  }
}

// Odometer over F_q^len, lexicographic, first coordinate most significant.
bool next_tuple(std::vector<FieldElement>& v, std::uint32_t q, std::uint32_t lo) {
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i].value + 1 < q) {
      ++v[i].value;
      return true;
    }
    v[i].value = lo;
  }
  return false;
}

// Does some all-nonzero zero-sum combination of the given t points vanish?
// Depth-first over c_1..c_{t-1}; c_t is forced to minus the running sum.
bool has_full_support_relation(const FieldSpec& f, std::span<const Point> pts) {
  const std::size_t t = pts.size();
  const std::size_t n = pts[0].dim();
  std::vector<Point> partial(t, zero_point(static_cast<int>(n)));
  std::vector<FieldElement> csum(t, f.zero());
  std::vector<std::uint32_t> choice(t, 0);
  std::size_t depth = 0;
  // partial[j] / csum[j]: contribution of the first j chosen coefficients.
  while (true) {
    if (depth == t - 1) {
      const FieldElement last = f.neg(csum[depth]);
      if (last.value != 0) {
        bool zero = true;
        for (std::size_t i = 0; i < n && zero; ++i) {
          zero = f.add(partial[depth].coords[i], f.mul(last, pts[depth].coords[i])).value == 0;
        }
        if (zero) return true;
      }
      if (depth == 0) return false;
      --depth;
      continue;
    }
    if (choice[depth] + 1 >= f.q()) {
      choice[depth] = 0;
      if (depth == 0) return false;
      --depth;
      continue;
    }
    ++choice[depth];
    const FieldElement c{choice[depth]};
    partial[depth + 1] = partial[depth];
    axpy(f, c, pts[depth], partial[depth + 1]);
    csum[depth + 1] = f.add(csum[depth], c);
    ++depth;
  }
}

}  // namespace

CoeffVector CoeffVector::sum_zero(const FieldSpec& f, std::vector<FieldElement> coeffs) {
  for (auto c : coeffs) {
    if (!f.contains(c)) throw PreconditionError("coefficient outside the field");
  }
  if (sum_of(f, coeffs).value != 0) throw PreconditionError("C_0 coefficients must sum to zero");
  bool nonzero = false;
  for (auto c : coeffs) nonzero = nonzero || c.value != 0;
  if (!nonzero) throw PreconditionError("C_0 coefficients must not be identically zero");
  return CoeffVector(Kind::SumZero, std::move(coeffs), f.zero());
}

CoeffVector CoeffVector::all_nonzero_sum(const FieldSpec& f, std::vector<FieldElement> coeffs, FieldElement gamma) {
  for (auto c : coeffs) {
    if (!f.contains(c)) throw PreconditionError("coefficient outside the field");
    if (c.value == 0) throw PreconditionError("C_gamma^* coefficients must all be nonzero");
  }
  if (sum_of(f, coeffs) != gamma) throw PreconditionError("C_gamma^* coefficients must sum to gamma");
  return CoeffVector(Kind::AllNonzeroSum, std::move(coeffs), gamma);
}

std::size_t CoeffVector::support_size() const {
  std::size_t s = 0;
  for (auto c : coeffs_) s += c.value != 0;
  return s;
}

Point apply_form(const FieldSpec& f, const CoeffVector& c, std::span<const Point> xs) {
  if (xs.size() != c.size()) {
    throw PreconditionError("form has " + std::to_string(c.size()) + " coefficients but " +
                            std::to_string(xs.size()) + " points were given");
  }
  if (xs.empty()) throw PreconditionError("empty form");
  Point acc = zero_point(static_cast<int>(xs[0].dim()));
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].dim() != acc.dim()) throw PreconditionError("points of a form must share the ambient");
    axpy(f, c[j], xs[j], acc);
  }
  return acc;
}

void for_each_c0(const FieldSpec& f, int t, const std::function<bool(const CoeffVector&)>& visit) {
  if (t < 2) throw PreconditionError("C_0^t requires t >= 2");
  std::vector<FieldElement> head(static_cast<std::size_t>(t - 1), f.zero());
  while (next_tuple(head, f.q(), 0)) {
    std::vector<FieldElement> c = head;
    c.push_back(f.neg(sum_of(f, head)));
    if (!visit(CoeffVector::sum_zero(f, std::move(c)))) return;
  }
}

std::vector<CoeffVector> enumerate_c0(const FieldSpec& f, int t) {
  std::vector<CoeffVector> out;
  for_each_c0(f, t, [&](const CoeffVector& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

void for_each_cgamma_star(const FieldSpec& f, int k, FieldElement gamma,
                          const std::function<bool(const CoeffVector&)>& visit) {
  if (k < 1) throw PreconditionError("C_gamma^* requires k >= 1");
  if (!f.contains(gamma)) throw PreconditionError("gamma outside the field");
  std::vector<FieldElement> head(static_cast<std::size_t>(k - 1), f.one());
  bool more = true;
  while (more) {
    const FieldElement last = f.sub(gamma, sum_of(f, head));
    if (last.value != 0) {
      std::vector<FieldElement> c = head;
      c.push_back(last);
      if (!visit(CoeffVector::all_nonzero_sum(f, std::move(c), gamma))) return;
    }
    more = !head.empty() && next_tuple(head, f.q(), 1);
  }
}

std::vector<CoeffVector> enumerate_cgamma_star(const FieldSpec& f, int k, FieldElement gamma) {
  std::vector<CoeffVector> out;
  for_each_cgamma_star(f, k, gamma, [&](const CoeffVector& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

std::uint64_t count_cgamma_star(std::uint32_t q, int k, bool gamma_is_zero) {
  if (k < 1) throw PreconditionError("C_gamma^* requires k >= 1");
  // zero_count / fixed_count: all-nonzero tuples of the current length
  // summing to 0 / to one fixed nonzero value.
  std::uint64_t zero_count = 0, fixed_count = 1;
  for (int len = 2; len <= k; ++len) {
    const std::uint64_t z = (q - 1) * fixed_count;
    const std::uint64_t nz = zero_count + (q - 2) * fixed_count;
    zero_count = z;
    fixed_count = nz;
  }
  return gamma_is_zero ? zero_count : fixed_count;
}

bool weakly_avoids(const PointSet& a, const CoeffVector& c) {
  if (c.kind() != CoeffVector::Kind::SumZero) throw PreconditionError("weak avoidance takes a C_0 vector");
  const auto& f = a.field();
  if (c.size() > a.size()) return true;
  std::vector<FieldElement> support;
  for (auto x : c.coeffs()) {
    if (x.value != 0) support.push_back(x);
  }
  // Two nonzero coefficients summing to zero force x = y.
  if (support.size() <= 2) return true;

  const std::size_t s = support.size();
  std::vector<bool> used(a.size(), false);
  std::vector<std::size_t> pick(s, 0);
  std::vector<Point> partial(s + 1, zero_point(a.ambient().n));
  std::size_t depth = 0;
  pick[0] = 0;
  // Every ordered injective s-tuple of A.
  while (true) {
    if (pick[depth] >= a.size()) {
      if (depth == 0) return true;
      --depth;
      used[pick[depth]] = false;
      ++pick[depth];
      continue;
    }
    if (used[pick[depth]]) {
      ++pick[depth];
      continue;
    }
    partial[depth + 1] = partial[depth];
    axpy(f, support[depth], a[pick[depth]], partial[depth + 1]);
    if (depth + 1 == s) {
      if (is_zero(partial[s])) return false;
      ++pick[depth];
      continue;
    }
    used[pick[depth]] = true;
    ++depth;
    pick[depth] = 0;
  }
}

bool outside_stated_range(const Ambient& amb, int m) { return m > amb.n; }

bool is_m_general_arithmetic(const PointSet& a, int m) {
  check_m_range(a.ambient(), m);
  if (a.size() < static_cast<std::size_t>(m)) {
    throw PreconditionError("arithmetic test requires |A| >= m (|A| = " + std::to_string(a.size()) +
                            ", m = " + std::to_string(m) + ")");
  }
  std::vector<Point> sub;
  for (int t = 3; t <= m; ++t) {
    sub.resize(static_cast<std::size_t>(t));
    const bool clean = for_each_combination(a.size(), static_cast<std::size_t>(t), [&](std::span<const std::size_t> idx) {
      for (std::size_t i = 0; i < idx.size(); ++i) sub[i] = a[idx[i]];
      return !has_full_support_relation(a.field(), sub);
    });
    if (!clean) return false;
  }
  return true;
}

bool is_weak_bk(const PointSet& a, int k) {
  if (k < 1) throw PreconditionError("B_k requires k >= 1");
  const auto& f = a.field();
  std::unordered_map<Point, int, PointHash> seen;
  return for_each_combination(a.size(), static_cast<std::size_t>(k), [&](std::span<const std::size_t> idx) {
    Point s = zero_point(a.ambient().n);
    for (auto i : idx) s = point_add(f, s, a[i]);
    return seen.emplace(std::move(s), 0).second;
  });
}

bool is_bk(const PointSet& a, int k) {
  if (k < 1) throw PreconditionError("B_k requires k >= 1");
  const auto& f = a.field();
  const bool char2 = f.p() == 2;
  std::unordered_map<Point, std::vector<std::size_t>, PointHash> seen;
  return for_each_multicombination(a.size(), static_cast<std::size_t>(k), [&](std::span<const std::size_t> idx) {
    Point s = zero_point(a.ambient().n);
    for (auto i : idx) s = point_add(f, s, a[i]);
    std::vector<std::size_t> key(idx.begin(), idx.end());
    if (char2) {
      // Drop pairs of equal indices; idx is sorted.
      std::vector<std::size_t> reduced;
      for (std::size_t i = 0; i < key.size();) {
        std::size_t j = i;
        while (j < key.size() && key[j] == key[i]) ++j;
        if ((j - i) % 2 == 1) reduced.push_back(key[i]);
        i = j;
      }
      key = std::move(reduced);
    }
    auto [it, fresh] = seen.emplace(std::move(s), key);
    return fresh || it->second == key;
  });
}

bool verify_ksum_injectivity(const PointSet& a, int k, FieldElement gamma) {
  const auto& f = a.field();
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (f.q() > 2 && gamma.value == 0) throw PreconditionError("gamma must be nonzero when q > 2");
  const auto alphas = enumerate_cgamma_star(f, k, gamma);
  std::unordered_map<Point, std::pair<std::size_t, std::size_t>, PointHash> images;
  std::vector<Point> xs(static_cast<std::size_t>(k));
  std::size_t tuple_no = 0;
  return for_each_combination(a.size(), static_cast<std::size_t>(k), [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) xs[i] = a[idx[i]];
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      if (!images.emplace(apply_form(f, alphas[ai], xs), std::make_pair(ai, tuple_no)).second) return false;
    }
    ++tuple_no;
    return true;
  });
}

}  // namespace mgen
