#include "mgen/field.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mgen/error.hpp"

namespace mgen {

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t mod_pow_int(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  return static_cast<std::uint32_t>(mod_pow_int(a, p - 2, p));
}

// Remainder of a modulo b over F_p; b nonzero.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint32_t factor =
        static_cast<std::uint32_t>(std::uint64_t{a.back()} * lead_inv % p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = std::uint64_t{factor} * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Shipped defaults. Every entry is checked for irreducibility when used.
const std::vector<ModulusTable::Entry>& builtin_entries() {
  static const std::vector<ModulusTable::Entry> table = {
      {2, 2, {1, 1, 1}},
      {2, 3, {1, 1, 0, 1}},
      {2, 4, {1, 1, 0, 0, 1}},
      {2, 5, {1, 0, 1, 0, 0, 1}},
      {2, 6, {1, 1, 0, 0, 0, 0, 1}},
      {2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
      {2, 8, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
      {2, 9, {1, 0, 0, 0, 1, 0, 0, 0, 0, 1}},
      {2, 10, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1}},
      {2, 11, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
      {2, 12, {1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1}},
      {2, 13, {1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
      {2, 14, {1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}},
      {2, 15, {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
      {2, 16, {1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1}},
      {3, 2, {2, 2, 1}},
      {3, 3, {1, 2, 0, 1}},
      {3, 4, {2, 0, 0, 2, 1}},
      {5, 2, {2, 4, 1}},
      {5, 3, {3, 3, 0, 1}},
      {7, 2, {3, 6, 1}},
  };
  return table;
}

std::uint32_t checked_order(std::uint32_t p, std::uint32_t d) {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) {
      throw PreconditionError("field order p^d must be at most 2^16");
    }
  }
  return static_cast<std::uint32_t>(q);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  for (std::uint64_t f = 2; f <= q; ++f) {
    if (q % f != 0) continue;
    std::uint32_t d = 0;
    while (q % f == 0) {
      q /= f;
      ++d;
    }
    if (q != 1) return std::nullopt;
    return std::make_pair(static_cast<std::uint32_t>(f), d);
  }
  return std::nullopt;
}

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly) {
  Poly f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (std::size_t k = 1; k <= deg / 2; ++k) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(k + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < k; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[k] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t d) {
  if (d == 1) return {0, 1};
  for (const auto& e : builtin_entries()) {
    if (e.p == p && e.d == d) return e.modulus;
  }
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < d; ++i) count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    Poly g(d + 1, 0);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < d; ++i) {
      g[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    g[d] = 1;
    if (is_irreducible(p, g)) return g;
  }
  throw PreconditionError("no irreducible polynomial found");  // unreachable
}

FieldSpec FieldSpec::make(std::uint32_t p, std::uint32_t d,
                          std::optional<std::vector<std::uint32_t>> modulus) {
  if (!is_prime(p)) throw PreconditionError("characteristic p must be prime");
  if (d < 1) throw PreconditionError("extension degree d must be at least 1");
  FieldSpec f;
  f.p_ = p;
  f.d_ = d;
  f.q_ = checked_order(p, d);
  f.modulus_ = modulus ? *modulus : default_modulus(p, d);
  for (auto c : f.modulus_) {
    if (c >= p) throw PreconditionError("modulus coefficients must lie in [0, p)");
  }
  if (f.modulus_.size() != d + 1) throw PreconditionError("modulus must have degree exactly d");
  if (f.modulus_.back() != 1) throw PreconditionError("modulus must be monic");
  if (!is_irreducible(p, f.modulus_)) throw PreconditionError("modulus must be irreducible over F_p");
  f.build_tables();
  return f;
}

std::shared_ptr<const FieldSpec> FieldSpec::make_shared(
    std::uint32_t p, std::uint32_t d, std::optional<std::vector<std::uint32_t>> modulus) {
  return std::make_shared<const FieldSpec>(make(p, d, std::move(modulus)));
}

void FieldSpec::build_tables() {
  const std::uint32_t q = q_;
  // Naive polynomial multiplication modulo the modulus; used only here.
  auto slow_mul = [&](std::uint32_t a, std::uint32_t b) {
    if (d_ == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
    const auto ca = coeffs(FieldElement{a});
    const auto cb = coeffs(FieldElement{b});
    Poly prod(2 * d_ - 1, 0);
    for (std::uint32_t i = 0; i < d_; ++i) {
      for (std::uint32_t j = 0; j < d_; ++j) {
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p_);
      }
    }
    const Poly r = poly_mod(prod, modulus_, p_);
    return from_coeffs(r).value;
  };
  auto slow_pow = [&](std::uint32_t a, std::uint64_t e) {
    std::uint32_t r = 1;
    while (e) {
      if (e & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      e >>= 1;
    }
    return r;
  };

  neg_.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) {
    auto c = coeffs(FieldElement{a});
    for (auto& x : c) x = (p_ - x) % p_;
    neg_[a] = from_coeffs(c).value;
  }
  if (q <= 256 && p_ != 2 && d_ > 1) {
    add_.resize(std::size_t{q} * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      const auto ca = coeffs(FieldElement{a});
      for (std::uint32_t b = 0; b < q; ++b) {
        auto cb = coeffs(FieldElement{b});
        for (std::uint32_t i = 0; i < d_; ++i) cb[i] = (cb[i] + ca[i]) % p_;
        add_[std::size_t{a} * q + b] = static_cast<std::uint16_t>(from_coeffs(cb).value);
      }
    }
  }

  const auto factors = prime_factors(q - 1);
  std::uint32_t g = 0;
  for (std::uint32_t cand = 1; cand < q; ++cand) {
    bool primitive = true;
    for (auto r : factors) {
      if (slow_pow(cand, (q - 1) / r) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      g = cand;
      break;
    }
  }
  exp_.assign(2 * std::size_t{q - 1}, 0);
  log_.assign(q, 0);
  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    exp_[i] = x;
    exp_[i + q - 1] = x;
    log_[x] = i;
    x = slow_mul(x, g);
  }
}

std::string FieldSpec::modulus_id() const {
  std::string s;
  for (std::size_t i = 0; i < modulus_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(modulus_[i]);
  }
  return s;
}

std::string FieldSpec::spec_string() const {
  return std::to_string(p_) + "^" + std::to_string(d_) + ":" + modulus_id();
}

FieldElement FieldSpec::add(FieldElement a, FieldElement b) const {
  if (p_ == 2) return FieldElement{a.value ^ b.value};
  if (d_ == 1) {
    const std::uint32_t s = a.value + b.value;
    return FieldElement{s >= p_ ? s - p_ : s};
  }
  if (!add_.empty()) return FieldElement{add_[std::size_t{a.value} * q_ + b.value]};
  std::uint32_t x = a.value, y = b.value, out = 0, place = 1;
  for (std::uint32_t i = 0; i < d_; ++i) {
    out += ((x % p_ + y % p_) % p_) * place;
    x /= p_;
    y /= p_;
    place *= p_;
  }
  return FieldElement{out};
}

FieldElement FieldSpec::neg(FieldElement a) const { return FieldElement{neg_[a.value]}; }

FieldElement FieldSpec::sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

FieldElement FieldSpec::mul(FieldElement a, FieldElement b) const {
  if (a.value == 0 || b.value == 0) return zero();
  return FieldElement{exp_[log_[a.value] + log_[b.value]]};
}

FieldElement FieldSpec::inv(FieldElement a) const {
  if (a.value == 0) throw PreconditionError("inverse of zero is undefined");
  const std::uint32_t l = log_[a.value];
  return FieldElement{exp_[l == 0 ? 0 : (q_ - 1) - l]};
}

FieldElement FieldSpec::pow(FieldElement a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a.value == 0) return zero();
  const std::uint64_t l = (std::uint64_t{log_[a.value]} * (e % (q_ - 1))) % (q_ - 1);
  return FieldElement{exp_[l]};
}

FieldElement FieldSpec::from_coeffs(std::span<const std::uint32_t> c) const {
  std::uint32_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + c[i];
  return FieldElement{v};
}

std::vector<std::uint32_t> FieldSpec::coeffs(FieldElement a) const {
  std::vector<std::uint32_t> c(d_);
  std::uint32_t v = a.value;
  for (std::uint32_t i = 0; i < d_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

std::vector<FieldElement> FieldSpec::elements() const {
  std::vector<FieldElement> out;
  out.reserve(q_);
  for (std::uint32_t v = 0; v < q_; ++v) out.emplace_back(v);
  return out;
}

ModulusTable ModulusTable::builtin() {
  ModulusTable t;
  t.entries = builtin_entries();
  t.id = "builtin";
  return t;
}

ModulusTable ModulusTable::parse(const std::string& text, std::string id) {
  ModulusTable t;
  t.id = std::move(id);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Entry e{};
    if (!(ls >> e.p >> e.d)) {
      throw FormatError("modulus table line " + std::to_string(lineno) + ": expected `p d c_0 ... c_d`");
    }
    std::uint32_t c;
    while (ls >> c) e.modulus.push_back(c);
    if (!ls.eof()) throw FormatError("modulus table line " + std::to_string(lineno) + ": bad coefficient");
    if (e.modulus.size() != e.d + 1) {
      throw FormatError("modulus table line " + std::to_string(lineno) + ": expected d+1 coefficients");
    }
    t.entries.push_back(std::move(e));
  }
  return t;
}

ModulusTable ModulusTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open modulus table: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string ModulusTable::serialize() const {
  std::string out;
  for (const auto& e : entries) {
    out += std::to_string(e.p) + " " + std::to_string(e.d);
    for (auto c : e.modulus) out += " " + std::to_string(c);
    out += "\n";
  }
  return out;
}

std::vector<std::uint32_t> ModulusTable::lookup(std::uint32_t p, std::uint32_t d) const {
  for (const auto& e : entries) {
    if (e.p == p && e.d == d) return e.modulus;
  }
  return default_modulus(p, d);
}

std::shared_ptr<const FieldSpec> ModulusTable::field(std::uint32_t p, std::uint32_t d) const {
  return FieldSpec::make_shared(p, d, lookup(p, d));
}

std::shared_ptr<const FieldSpec> parse_field_spec(const std::string& text, const ModulusTable& table) {
  const auto caret = text.find('^');
  if (caret == std::string::npos) {
    std::uint64_t q = 0;
    try {
      std::size_t used = 0;
      q = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw PreconditionError("q must be a prime power, got '" + text + "'");
    }
    if (q > kMaxFieldOrder) throw PreconditionError("field order p^d must be at most 2^16");
    const auto pd = prime_power(q);
    if (!pd) throw PreconditionError("q must be a prime power, got '" + text + "'");
    return table.field(pd->first, pd->second);
  }
  const auto colon = text.find(':', caret);
  try {
    const auto p = static_cast<std::uint32_t>(std::stoul(text.substr(0, caret)));
    const auto d = static_cast<std::uint32_t>(
        std::stoul(text.substr(caret + 1, colon == std::string::npos ? std::string::npos : colon - caret - 1)));
    if (colon == std::string::npos) return table.field(p, d);
    std::vector<std::uint32_t> mod;
    std::istringstream ms(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ms, tok, '.')) mod.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    return FieldSpec::make_shared(p, d, mod);
  } catch (const PreconditionError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError("malformed field spec '" + text + "'");
  }
}

}  // namespace mgen
