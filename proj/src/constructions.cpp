#include "mgen/constructions.hpp"

#include <string>

#include "mgen/error.hpp"

namespace mgen {

namespace {

void require_char2(const FieldSpec& f) {
  if (f.p() != 2) throw PreconditionError("APN constructions require characteristic 2");
}

}  // namespace

FunctionTable::FunctionTable(std::shared_ptr<const FieldSpec> f, std::vector<FieldElement> v)
    : field(std::move(f)), values(std::move(v)) {
  if (!field) throw PreconditionError("function table requires a field");
  if (values.size() != field->q()) throw PreconditionError("function table must have exactly q entries");
  for (auto x : values) {
    if (!field->contains(x)) throw PreconditionError("function value outside the field");
  }
}

ApnReport check_apn(const FunctionTable& f) {
  const auto& k = *f.field;
  require_char2(k);
  const std::uint32_t q = k.q();
  ApnReport report;
  std::vector<std::uint32_t> count(q);
  for (std::uint32_t a = 1; a < q; ++a) {
    std::fill(count.begin(), count.end(), 0);
    for (std::uint32_t x = 0; x < q; ++x) {
      const FieldElement xa = k.add(FieldElement{x}, FieldElement{a});
      const FieldElement b = k.sub(f.values[xa.value], f.values[x]);
      const std::uint32_t c = ++count[b.value];
      if (c > report.max_count) report.max_count = c;
    }
  }
  report.apn = report.max_count <= 2;
  return report;
}

FunctionTable cube_function(std::shared_ptr<const FieldSpec> field) {
  require_char2(*field);
  std::vector<FieldElement> v(field->q());
  for (std::uint32_t x = 0; x < field->q(); ++x) v[x] = field->pow(FieldElement{x}, 3);
  return FunctionTable(std::move(field), std::move(v));
}

PointSet sidon_graph(const FunctionTable& f) {
  const auto& k = *f.field;
  require_char2(k);
  if (!is_apn(f)) throw PreconditionError("Sidon graph construction requires an APN function");
  const int d = static_cast<int>(k.d());
  Ambient amb(2 * d, FieldSpec::make_shared(2, 1));
  std::vector<Point> pts;
  pts.reserve(k.q());
  for (std::uint32_t x = 0; x < k.q(); ++x) {
    Point p = zero_point(2 * d);
    const auto cx = k.coeffs(FieldElement{x});
    const auto cy = k.coeffs(f.values[x]);
    for (int i = 0; i < d; ++i) {
      p.coords[static_cast<std::size_t>(i)] = FieldElement{cx[static_cast<std::size_t>(i)]};
      p.coords[static_cast<std::size_t>(d + i)] = FieldElement{cy[static_cast<std::size_t>(i)]};
    }
    pts.push_back(std::move(p));
  }
  return PointSet(std::move(amb), std::move(pts));
}

PointSet lower_bound_4general(int n, const ModulusTable& table) {
  if (n < 2) throw PreconditionError("4-general construction requires n >= 2");
  const int even = n - n % 2;
  const auto field = table.field(2, static_cast<std::uint32_t>(even / 2));
  PointSet base = sidon_graph(cube_function(field));
  PointSet out = base;
  if (even != n) {
    std::vector<Point> pts;
    pts.reserve(base.size());
    for (const auto& p : base.points()) {
      Point e = p;
      e.coords.emplace_back(0);
      pts.push_back(std::move(e));
    }
    out = PointSet(Ambient(n, base.ambient().field), std::move(pts));
  }
  if (!is_m_general_geometric(out, 4)) {
    throw std::logic_error("constructed set failed 4-general verification");
  }
  return out;
}

std::vector<std::string> construction_notes(int n, const ModulusTable& table) {
  const int d = (n - n % 2) / 2;
  const auto field = table.field(2, static_cast<std::uint32_t>(d));
  std::vector<std::string> notes;
  notes.push_back("construction=cube-graph d=" + std::to_string(d) + " modulus=" + field->modulus_id() +
                  " table=" + table.id);
  notes.push_back("flatten=coeffs(x) low-first then coeffs(x^3) low-first");
  if (n % 2) notes.push_back("embedding=append zero coordinate");
  return notes;
}

}  // namespace mgen
