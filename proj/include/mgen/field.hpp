#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mgen {

/// An element of F_q in canonical integer encoding: the class of
/// c_0 + c_1 x + ... + c_{d-1} x^{d-1} is stored as c_0 + c_1 p + ... .
/// The integer order is the canonical total order on the field.
struct FieldElement {
  std::uint32_t value = 0;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const FieldElement&) const = default;
};

/// Largest supported field order.
inline constexpr std::uint32_t kMaxFieldOrder = 1u << 16;

/// The finite field GF(p^d) in a polynomial basis over F_p.
///
/// Immutable after construction. Multiplication and inversion go through
/// log/antilog tables built from a primitive element found at construction.
class FieldSpec {
 public:
  /// Builds GF(p^d). Without an explicit modulus the default table is used
  /// (see default_modulus). Throws PreconditionError if p is not prime,
  /// p^d exceeds kMaxFieldOrder, or the modulus is not a monic irreducible
  /// polynomial of degree d (coefficients low-to-high).
  static FieldSpec make(std::uint32_t p, std::uint32_t d,
                        std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

  /// Convenience for shared ownership, which is how ambients hold fields.
  static std::shared_ptr<const FieldSpec> make_shared(
      std::uint32_t p, std::uint32_t d,
      std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

  std::uint32_t p() const { return p_; }
  std::uint32_t d() const { return d_; }
  std::uint32_t q() const { return q_; }
  /// Monic modulus, coefficients low-to-high, length d + 1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  /// Modulus coefficients low-to-high joined by '.', e.g. "1.1.1" for x^2+x+1.
  std::string modulus_id() const;
  /// "p^d:modulus-id", e.g. "2^2:1.1.1".
  std::string spec_string() const;

  FieldElement zero() const { return FieldElement{0}; }
  FieldElement one() const { return FieldElement{1}; }
  bool contains(FieldElement a) const { return a.value < q_; }

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  /// Throws PreconditionError for a == 0.
  FieldElement inv(FieldElement a) const;
  FieldElement pow(FieldElement a, std::uint64_t e) const;

  /// Element with the given coefficient vector (low-to-high, length <= d).
  FieldElement from_coeffs(std::span<const std::uint32_t> coeffs) const;
  /// Coefficient vector of a, low-to-high, length d.
  std::vector<std::uint32_t> coeffs(FieldElement a) const;

  /// All q elements in canonical order.
  std::vector<FieldElement> elements() const;

  /// Primitive element used for the log tables.
  FieldElement generator() const { return FieldElement{exp_[1]}; }

  bool operator==(const FieldSpec& o) const {
    return p_ == o.p_ && d_ == o.d_ && modulus_ == o.modulus_;
  }

 private:
  FieldSpec() = default;
  void build_tables();

  std::uint32_t p_ = 0;
  std::uint32_t d_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;  // length 2(q-1), exp_[i] = g^i
  std::vector<std::uint32_t> log_;  // length q, log_[0] unused
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint16_t> add_;  // full table when q <= 256
};

bool is_prime(std::uint64_t n);

/// Splits a prime power q into (p, d); nullopt if q is not a prime power.
std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q);

/// True if the monic polynomial (coefficients low-to-high over F_p) has no
/// factor of degree between 1 and deg/2. Exhaustive trial division.
bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly);

/// Built-in default modulus for GF(p^d): the shipped table entry when one
/// exists, otherwise the lexicographically first monic irreducible of degree d.
std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t d);

/// Entries of a modulus table file: one line `p d c_0 c_1 ... c_d` per field.
/// Blank lines and lines starting with '#' are ignored.
struct ModulusTable {
  struct Entry {
    std::uint32_t p;
    std::uint32_t d;
    std::vector<std::uint32_t> modulus;
  };
  std::vector<Entry> entries;
  std::string id = "builtin";

  static ModulusTable builtin();
  static ModulusTable parse(const std::string& text, std::string id);
  static ModulusTable load(const std::string& path);
  std::string serialize() const;

  /// Table entry for (p, d), else default_modulus.
  std::vector<std::uint32_t> lookup(std::uint32_t p, std::uint32_t d) const;
  std::shared_ptr<const FieldSpec> field(std::uint32_t p, std::uint32_t d) const;
};

/// Parses a field description: a prime power ("4") or a full spec string
/// ("2^2:1.1.1"). The table supplies the modulus in the first form.
std::shared_ptr<const FieldSpec> parse_field_spec(const std::string& text,
                                                  const ModulusTable& table = ModulusTable::builtin());

}  // namespace mgen
