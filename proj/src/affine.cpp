#include "mgen/affine.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "mgen/combinatorics.hpp"
#include "mgen/error.hpp"

namespace mgen {

Ambient::Ambient(int n_, std::shared_ptr<const FieldSpec> f) : n(n_), field(std::move(f)) {
  if (n < 1) throw PreconditionError("ambient dimension n must be at least 1");
  if (!field) throw PreconditionError("ambient requires a field");
}

std::optional<std::uint64_t> Ambient::size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < n; ++i) {
    if (s > (std::uint64_t{1} << 62) / q()) return std::nullopt;
    s *= q();
  }
  return s;
}

Point Point::of(std::initializer_list<std::uint32_t> values) {
  Point p;
  p.coords.reserve(values.size());
  for (auto v : values) p.coords.emplace_back(v);
  return p;
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (auto c : p.coords) {
    h ^= c.value;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

Point zero_point(int n) { return Point(std::vector<FieldElement>(static_cast<std::size_t>(n))); }

Point point_add(const FieldSpec& f, const Point& a, const Point& b) {
  Point r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = f.add(a.coords[i], b.coords[i]);
  return r;
}

Point point_sub(const FieldSpec& f, const Point& a, const Point& b) {
  Point r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = f.sub(a.coords[i], b.coords[i]);
  return r;
}

Point point_scale(const FieldSpec& f, FieldElement c, const Point& a) {
  Point r = a;
  for (auto& x : r.coords) x = f.mul(c, x);
  return r;
}

bool is_zero(const Point& a) {
  return std::all_of(a.coords.begin(), a.coords.end(), [](FieldElement x) { return x.value == 0; });
}

std::uint64_t point_index(const Ambient& amb, const Point& p) {
  std::uint64_t idx = 0;
  for (auto c : p.coords) idx = idx * amb.q() + c.value;
  return idx;
}

Point point_at(const Ambient& amb, std::uint64_t index) {
  Point p = zero_point(amb.n);
  for (int i = amb.n; i-- > 0;) {
    p.coords[static_cast<std::size_t>(i)] = FieldElement{static_cast<std::uint32_t>(index % amb.q())};
    index /= amb.q();
  }
  return p;
}

PointSet::PointSet(Ambient amb, std::vector<Point> points) : ambient_(std::move(amb)), points_(std::move(points)) {
  for (const auto& p : points_) {
    if (p.dim() != static_cast<std::size_t>(ambient_.n)) {
      throw PreconditionError("point has " + std::to_string(p.dim()) + " coordinates, ambient n = " +
                              std::to_string(ambient_.n));
    }
    for (auto c : p.coords) {
      if (!ambient_.field->contains(c)) throw PreconditionError("coordinate outside the field");
    }
  }
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
    throw PreconditionError("point set contains a duplicate point");
  }
}

bool PointSet::contains(const Point& p) const { return std::binary_search(points_.begin(), points_.end(), p); }

PointSet PointSet::with(const Point& p) const {
  if (contains(p)) throw PreconditionError("point already in the set");
  std::vector<Point> pts = points_;
  pts.push_back(p);
  return PointSet(ambient_, std::move(pts));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  std::vector<Point> pts;
  pts.reserve(indices.size());
  for (auto i : indices) pts.push_back(points_.at(i));
  return PointSet(ambient_, std::move(pts));
}

int affine_rank(const FieldSpec& f, std::span<const Point> pts) {
  if (pts.empty()) throw PreconditionError("affine rank of an empty set is undefined");
  const std::size_t n = pts[0].dim();
  std::vector<std::vector<FieldElement>> rows;
  rows.reserve(pts.size() - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) rows.push_back(point_sub(f, pts[i], pts[0]).coords);

  // Row reduction; pivot is the first row with a nonzero entry in the column.
  int rank = 0;
  for (std::size_t col = 0; col < n && static_cast<std::size_t>(rank) < rows.size(); ++col) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows.size() && rows[piv][col].value == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(rank)]);
    auto& prow = rows[static_cast<std::size_t>(rank)];
    const FieldElement pinv = f.inv(prow[col]);
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < rows.size(); ++r) {
      if (rows[r][col].value == 0) continue;
      const FieldElement factor = f.mul(rows[r][col], pinv);
      for (std::size_t c = col; c < n; ++c) {
        rows[r][c] = f.sub(rows[r][c], f.mul(factor, prow[c]));
      }
    }
    ++rank;
  }
  return rank;
}

int affine_rank(const PointSet& s) { return affine_rank(s.field(), s.points()); }

bool is_affinely_independent(const FieldSpec& f, std::span<const Point> pts) {
  return affine_rank(f, pts) == static_cast<int>(pts.size()) - 1;
}

bool is_affinely_independent(const PointSet& s) { return is_affinely_independent(s.field(), s.points()); }

void check_m_range(const Ambient& amb, int m) {
  if (m < 3 || m > amb.n + 2) {
    throw PreconditionError("m must satisfy 3 <= m <= n + 2 (m = " + std::to_string(m) +
                            ", n = " + std::to_string(amb.n) + ")");
  }
}

bool is_m_general_geometric_generic(const PointSet& a, int m) {
  check_m_range(a.ambient(), m);
  if (a.empty()) return true;
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m), a.size());
  std::vector<Point> sub(k);
  return for_each_combination(a.size(), k, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < k; ++i) sub[i] = a[idx[i]];
    return is_affinely_independent(a.field(), sub);
  });
}

bool has_distinct_pair_sums(const PointSet& a) {
  const auto& f = a.field();
  const auto size = a.ambient().size();
  if (size && *size <= (std::uint64_t{1} << 26)) {
    std::vector<bool> seen(*size, false);
    std::vector<std::uint64_t> idx;
    idx.reserve(a.size());
    for (const auto& p : a.points()) idx.push_back(point_index(a.ambient(), p));
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        const std::uint64_t s =
            f.p() == 2 ? (idx[i] ^ idx[j]) : point_index(a.ambient(), point_add(f, a[i], a[j]));
        if (seen[s]) return false;
        seen[s] = true;
      }
    }
    return true;
  }
  std::unordered_set<Point, PointHash> sums;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (!sums.insert(point_add(f, a[i], a[j])).second) return false;
    }
  }
  return true;
}

bool is_m_general_geometric(const PointSet& a, int m) {
  check_m_range(a.ambient(), m);
  if (a.field().q() == 2 && m == 4) return has_distinct_pair_sums(a);
  return is_m_general_geometric_generic(a, m);
}

bool add_point_preserves(const PointSet& a, const Point& p, int m) {
  check_m_range(a.ambient(), m);
  if (p.dim() != static_cast<std::size_t>(a.ambient().n)) throw PreconditionError("point dimension mismatch");
  if (a.contains(p)) throw PreconditionError("point already in the set");
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m), a.size() + 1) - 1;
  std::vector<Point> sub(k + 1);
  sub[k] = p;
  return for_each_combination(a.size(), k, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < k; ++i) sub[i] = a[idx[i]];
    return is_affinely_independent(a.field(), sub);
  });
}

}  // namespace mgen
