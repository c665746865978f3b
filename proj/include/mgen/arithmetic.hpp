#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mgen/affine.hpp"

namespace mgen {

/// A coefficient tuple in F_q^t, either a nonzero vector summing to zero
/// (a member of C_0^t) or an all-nonzero vector summing to gamma (a member
/// of C_gamma^*). The invariant of the kind is checked at construction.
class CoeffVector {
 public:
  enum class Kind { SumZero, AllNonzeroSum };

  static CoeffVector sum_zero(const FieldSpec& f, std::vector<FieldElement> coeffs);
  static CoeffVector all_nonzero_sum(const FieldSpec& f, std::vector<FieldElement> coeffs, FieldElement gamma);

  Kind kind() const { return kind_; }
  FieldElement gamma() const { return gamma_; }
  std::span<const FieldElement> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  FieldElement operator[](std::size_t i) const { return coeffs_[i]; }
  /// Number of nonzero entries.
  std::size_t support_size() const;

  bool operator==(const CoeffVector& o) const { return kind_ == o.kind_ && coeffs_ == o.coeffs_; }

 private:
  CoeffVector(Kind k, std::vector<FieldElement> c, FieldElement g) : kind_(k), coeffs_(std::move(c)), gamma_(g) {}
  Kind kind_;
  std::vector<FieldElement> coeffs_;
  FieldElement gamma_;
};

/// f_c(x_1, ..., x_t) = c_1 x_1 + ... + c_t x_t.
Point apply_form(const FieldSpec& f, const CoeffVector& c, std::span<const Point> xs);

/// Streams C_0^t in lexicographic order of the coefficient tuple. The
/// visitor returns false to stop. Requires t >= 2.
void for_each_c0(const FieldSpec& f, int t, const std::function<bool(const CoeffVector&)>& visit);
std::vector<CoeffVector> enumerate_c0(const FieldSpec& f, int t);

/// Streams C_gamma^* (length k, entries nonzero, sum gamma). Requires k >= 1.
void for_each_cgamma_star(const FieldSpec& f, int k, FieldElement gamma,
                          const std::function<bool(const CoeffVector&)>& visit);
std::vector<CoeffVector> enumerate_cgamma_star(const FieldSpec& f, int k, FieldElement gamma);

/// Exact |C_gamma^*| from the recurrence on the number of all-nonzero
/// tuples summing to zero / to a fixed nonzero value.
std::uint64_t count_cgamma_star(std::uint32_t q, int k, bool gamma_is_zero);

/// No t distinct points of A satisfy f_c = 0. Vacuously true when t > |A|.
bool weakly_avoids(const PointSet& a, const CoeffVector& c);

/// Arithmetic test: A weakly avoids every f_c with c in C_0^m. Works by
/// enumerating sorted t-subsets (3 <= t <= m) against every all-nonzero
/// zero-sum coefficient tuple of length t. Requires |A| >= m and
/// 3 <= m <= n + 2.
bool is_m_general_arithmetic(const PointSet& a, int m);

/// True when m lies outside 3 <= m <= n, the range the arithmetic
/// characterization is stated for; results there are still computed.
bool outside_stated_range(const Ambient& amb, int m);

/// All sums of k distinct elements of A are pairwise distinct.
bool is_weak_bk(const PointSet& a, int k);

/// All size-k multisets of A have distinct sums. In characteristic 2, pairs
/// of equal summands cancel and multisets equal after that cancellation
/// count as the same solution (so a + a = b + b is trivial).
bool is_bk(const PointSet& a, int k);

/// The map (alpha in C_gamma^*, increasing k-tuple of A) -> sum alpha_j x_j
/// is injective. Holds whenever A is 2k-general.
bool verify_ksum_injectivity(const PointSet& a, int k, FieldElement gamma);

}  // namespace mgen
