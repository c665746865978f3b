#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgen/affine.hpp"

namespace mgen {

inline constexpr const char* kToolVersion = "mgen 1.0.0";

struct SearchLimits {
  std::uint64_t max_nodes = 100'000'000;
  double max_seconds = 300.0;
  unsigned workers = 1;
  /// Abandon a branch once |A| + (unblocked candidates left) <= best.
  bool prune_by_count = true;
  /// Stop as soon as a set of size floor(refined bound) is found.
  bool stop_at_bound = true;
  /// Abandon a branch once |A| + (colours in a greedy colouring of the
  /// candidate conflict graph) <= best.
  bool prune_by_coloring = true;
  /// Translate so the origin is always in the set.
  bool fix_origin = true;
  /// Fix the affine frame 0, e_1, ..., e_n and cover sets that do not span
  /// by searching one dimension down. Implies fix_origin.
  bool fix_frame = true;
};

/// A witness set plus what is needed to re-verify it.
struct SearchCertificate {
  Ambient ambient;
  int m = 0;
  PointSet witness;
  std::size_t value = 0;
  bool exact = false;
  std::uint64_t nodes_explored = 0;
  double prune_bound_used = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> restarts;
  std::string method;
  std::string modulus_table = "builtin";
  std::string version = kToolVersion;
  std::vector<std::string> reductions;
};

/// Cap used to stop the search: floor(refined_bound) for m >= 4 (never
/// above q^n), q^n for m = 3.
double search_cap(const Ambient& amb, int m);

/// Depth-first branch and bound over points in canonical order. A point is
/// only added when it lies outside the affine hull of every (m-1)-subset of
/// the current set, which is exactly the add_point_preserves condition.
/// Among maximum sets the witness is the lexicographically least one
/// containing the fixed prefix. exact is false when a node or time limit cut
/// the search short.
SearchCertificate search_exact(const Ambient& amb, int m, const SearchLimits& limits = {});

/// Randomized greedy with restarts; deterministic in (seed, restarts).
SearchCertificate search_greedy(const Ambient& amb, int m, std::uint64_t seed, std::uint64_t restarts);

enum class CertificateStatus {
  Ok,
  Malformed,
  AmbientMismatch,
  NotGeneral,
  ValueMismatch,
  BoundViolation,
};

struct CertificateCheck {
  CertificateStatus status = CertificateStatus::Ok;
  std::string detail;
  bool ok() const { return status == CertificateStatus::Ok; }
};

const char* to_string(CertificateStatus s);

/// Re-runs both m-general tests (the arithmetic one only when |witness| >= m),
/// checks value = |witness| and value <= the search cap.
CertificateCheck check_certificate(const SearchCertificate& cert);
inline bool verify_certificate(const SearchCertificate& cert) { return check_certificate(cert).ok(); }

/// Parses and checks certificate JSON text, reporting malformed input and
/// ambient mismatches with their own status codes.
CertificateCheck check_certificate_json(const std::string& text, const ModulusTable& table = ModulusTable::builtin());

}  // namespace mgen
