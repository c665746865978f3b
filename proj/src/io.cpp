#include "mgen/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mgen/error.hpp"

namespace mgen {

namespace {

bool skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string point_to_text(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(p.coords[i].value);
  }
  return s;
}

Point point_from_text(const std::string& line) {
  std::istringstream in(line);
  Point p;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      throw FormatError("bad coordinate '" + tok + "'");
    }
    if (used != tok.size()) throw FormatError("bad coordinate '" + tok + "'");
    p.coords.emplace_back(static_cast<std::uint32_t>(v));
  }
  return p;
}

std::string write_set_file(const SetFile& file) {
  std::string out;
  for (const auto& c : file.comments) out += "# " + c + "\n";
  out += "format=1\n";
  const auto& amb = file.set.ambient();
  out += amb.field->spec_string() + " " + std::to_string(amb.n) + " " + std::to_string(file.m) + "\n";
  for (const auto& p : file.set.points()) out += point_to_text(p) + "\n";
  return out;
}

SetFile read_set_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SetFile file;
  int stage = 0;  // 0: expect format line, 1: expect header, 2: points
  std::shared_ptr<const FieldSpec> field;
  int n = 0;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    if (skippable(line)) {
      if (stage == 0) {
        const auto body = strip(line);
        if (body.size() > 1 && body[0] == '#') file.comments.push_back(strip(body.substr(1)));
      }
      continue;
    }
    if (stage == 0) {
      if (strip(line) != "format=1") throw FormatError("set file must start with `format=1`");
      stage = 1;
    } else if (stage == 1) {
      std::istringstream hs(line);
      std::string qspec;
      if (!(hs >> qspec >> n >> file.m)) throw FormatError("set file header must be `q-spec n m`");
      std::string extra;
      if (hs >> extra) throw FormatError("trailing text in set file header");
      field = parse_field_spec(qspec);
      stage = 2;
    } else {
      pts.push_back(point_from_text(line));
    }
  }
  if (stage < 2) throw FormatError("set file is missing its header");
  file.set = PointSet(Ambient(n, field), std::move(pts));
  return file;
}

std::string certificate_to_json(const SearchCertificate& cert) {
  nlohmann::ordered_json j;
  j["format"] = 1;
  j["params"] = {{"n", cert.ambient.n}, {"q_spec", cert.ambient.field->spec_string()}, {"m", cert.m}};
  auto witness = nlohmann::ordered_json::array();
  for (const auto& p : cert.witness.points()) witness.push_back(point_to_text(p));
  j["witness"] = witness;
  j["value"] = cert.value;
  j["exact"] = cert.exact;
  j["nodes_explored"] = cert.nodes_explored;
  j["prune_bound_used"] = cert.prune_bound_used;
  j["seed"] = cert.seed ? nlohmann::ordered_json(*cert.seed) : nlohmann::ordered_json(nullptr);
  j["restarts"] = cert.restarts ? nlohmann::ordered_json(*cert.restarts) : nlohmann::ordered_json(nullptr);
  j["method"] = cert.method;
  j["toolchain"] = {{"modulus_table", cert.modulus_table}, {"version", cert.version}};
  j["reductions"] = cert.reductions;
  return j.dump(2) + "\n";
}

SearchCertificate certificate_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("certificate is not valid JSON: ") + e.what());
  }
  SearchCertificate cert;
  std::vector<Point> pts;
  try {
    if (j.at("format").get<int>() != 1) throw FormatError("unsupported certificate format");
    const auto& params = j.at("params");
    const int n = params.at("n").get<int>();
    cert.m = params.at("m").get<int>();
    const auto field = parse_field_spec(params.at("q_spec").get<std::string>());
    for (const auto& w : j.at("witness")) pts.push_back(point_from_text(w.get<std::string>()));
    cert.value = j.at("value").get<std::size_t>();
    cert.exact = j.at("exact").get<bool>();
    cert.nodes_explored = j.at("nodes_explored").get<std::uint64_t>();
    cert.prune_bound_used = j.at("prune_bound_used").get<double>();
    if (!j.at("seed").is_null()) cert.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("restarts") && !j.at("restarts").is_null()) cert.restarts = j.at("restarts").get<std::uint64_t>();
    cert.method = j.value("method", std::string());
    cert.modulus_table = j.at("toolchain").at("modulus_table").get<std::string>();
    cert.version = j.at("toolchain").at("version").get<std::string>();
    if (j.contains("reductions")) cert.reductions = j.at("reductions").get<std::vector<std::string>>();
    cert.ambient = Ambient(n, field);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("certificate is missing or mistyping a field: ") + e.what());
  }
  cert.witness = PointSet(cert.ambient, std::move(pts));
  return cert;
}

CertificateCheck check_certificate_json(const std::string& text, const ModulusTable&) {
  SearchCertificate cert;
  try {
    cert = certificate_from_json(text);
  } catch (const FormatError& e) {
    return {CertificateStatus::Malformed, e.what()};
  } catch (const PreconditionError& e) {
    return {CertificateStatus::AmbientMismatch, e.what()};
  }
  return check_certificate(cert);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << contents;
}

}  // namespace mgen
