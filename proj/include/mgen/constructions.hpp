#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mgen/affine.hpp"

namespace mgen {

/// A map k -> k on a finite field stored as its value table.
struct FunctionTable {
  std::shared_ptr<const FieldSpec> field;
  std::vector<FieldElement> values;  // values[x] = f(x), indexed by canonical encoding

  FunctionTable(std::shared_ptr<const FieldSpec> f, std::vector<FieldElement> v);
  FieldElement operator()(FieldElement x) const { return values[x.value]; }
};

struct ApnReport {
  bool apn = false;
  /// max over a != 0 and b of |{x : f(x + a) - f(x) = b}|.
  std::uint32_t max_count = 0;
};

/// Differential uniformity check. Characteristic 2 only.
ApnReport check_apn(const FunctionTable& f);
inline bool is_apn(const FunctionTable& f) { return check_apn(f).apn; }

/// x -> x^3. Characteristic 2 only.
FunctionTable cube_function(std::shared_ptr<const FieldSpec> field);

/// The graph {(x, f(x))} flattened into F_2^{2d}: the coefficient vector of
/// x (low degree first) followed by that of f(x). Throws PreconditionError
/// if f is not APN or the field is not GF(2^d).
PointSet sidon_graph(const FunctionTable& f);

/// A verified 4-general set in F_2^n of size 2^{floor(n/2)}: the cube graph
/// over GF(2^{n/2}) for even n, the (n-1) construction with a zero
/// coordinate appended for odd n. Requires n >= 2.
PointSet lower_bound_4general(int n, const ModulusTable& table = ModulusTable::builtin());

/// Header comment lines describing how lower_bound_4general(n) was built.
std::vector<std::string> construction_notes(int n, const ModulusTable& table = ModulusTable::builtin());

}  // namespace mgen
