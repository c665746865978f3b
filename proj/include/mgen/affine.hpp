#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mgen/field.hpp"

namespace mgen {

/// The space F_q^n a point set lives in.
struct Ambient {
  int n = 0;
  std::shared_ptr<const FieldSpec> field;

  Ambient() = default;
  Ambient(int n_, std::shared_ptr<const FieldSpec> f);

  std::uint32_t q() const { return field->q(); }
  /// q^n, or nullopt if it does not fit in 63 bits.
  std::optional<std::uint64_t> size() const;

  bool operator==(const Ambient& o) const { return n == o.n && *field == *o.field; }
};

/// A vector of F_q^n. Lexicographic order on coordinates is the canonical order.
struct Point {
  std::vector<FieldElement> coords;

  Point() = default;
  explicit Point(std::vector<FieldElement> c) : coords(std::move(c)) {}
  /// Coordinates given as canonical integers.
  static Point of(std::initializer_list<std::uint32_t> values);

  std::size_t dim() const { return coords.size(); }
  auto operator<=>(const Point&) const = default;
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

Point zero_point(int n);
Point point_add(const FieldSpec& f, const Point& a, const Point& b);
Point point_sub(const FieldSpec& f, const Point& a, const Point& b);
Point point_scale(const FieldSpec& f, FieldElement c, const Point& a);
bool is_zero(const Point& a);

/// Base-q index of a point with the first coordinate most significant, so
/// index order equals canonical order. Requires Ambient::size() to exist.
std::uint64_t point_index(const Ambient& amb, const Point& p);
Point point_at(const Ambient& amb, std::uint64_t index);

/// A duplicate-free set of points of one ambient, kept in canonical order.
class PointSet {
 public:
  PointSet() = default;
  /// Validates coordinates and sorts. Throws PreconditionError on a
  /// duplicate or on a point outside the ambient.
  PointSet(Ambient amb, std::vector<Point> points);

  const Ambient& ambient() const { return ambient_; }
  const FieldSpec& field() const { return *ambient_.field; }
  std::span<const Point> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  bool contains(const Point& p) const;

  /// Copy with p added. Throws PreconditionError if p is already present.
  PointSet with(const Point& p) const;
  /// Subset selected by indices into points().
  PointSet subset(std::span<const std::size_t> indices) const;

  bool operator==(const PointSet& o) const { return ambient_ == o.ambient_ && points_ == o.points_; }

 private:
  Ambient ambient_;
  std::vector<Point> points_;
};

/// Dimension of the affine hull: rank of {s - s_0}. Works on any nonempty
/// list of points of dimension n over f.
int affine_rank(const FieldSpec& f, std::span<const Point> pts);
int affine_rank(const PointSet& s);

bool is_affinely_independent(const FieldSpec& f, std::span<const Point> pts);
bool is_affinely_independent(const PointSet& s);

/// No m points of A on a common (m-2)-flat. For |A| < m every subset of
/// size |A| is checked, i.e. A itself must be affinely independent.
/// Requires 3 <= m <= n + 2. Dispatches to the pair-sum test for q = 2, m = 4.
bool is_m_general_geometric(const PointSet& a, int m);

/// The subset-enumeration path, with no fast paths.
bool is_m_general_geometric_generic(const PointSet& a, int m);

/// Pair-sum collision test: all sums of two distinct points are distinct.
/// For q = 2 this is equivalent to 4-generality.
bool has_distinct_pair_sums(const PointSet& a);

/// Whether A + {p} is still m-general, checking only subsets that contain p.
/// Assumes A is m-general. Throws PreconditionError if p is in A.
bool add_point_preserves(const PointSet& a, const Point& p, int m);

void check_m_range(const Ambient& amb, int m);

}  // namespace mgen
