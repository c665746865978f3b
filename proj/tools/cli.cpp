#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "mgen/arithmetic.hpp"
#include "mgen/bounds.hpp"
#include "mgen/constructions.hpp"
#include "mgen/error.hpp"
#include "mgen/io.hpp"
#include "mgen/search.hpp"

namespace mgen::cli {

namespace {

constexpr const char* kTableEnv = "MGEN_MODULUS_TABLE";

struct Config {
  std::string modulus_table;

  // verify
  std::string set_path;
  std::optional<int> m;
  std::string oracle = "both";

  // construct, bounds, search
  int n = 0;
  std::vector<int> ns;
  std::string q;
  std::string out_path;
  bool csv = false;

  // table
  int which = 0;

  // search
  bool exact = false;
  bool greedy = false;
  std::uint64_t seed = 1;
  std::uint64_t restarts = 100;
  SearchLimits limits;

  // check
  std::string cert_path;
};

ModulusTable load_table(const Config& cfg) {
  std::string path = cfg.modulus_table;
  if (path.empty()) {
    if (const char* env = std::getenv(kTableEnv)) path = env;
  }
  return path.empty() ? ModulusTable::builtin() : ModulusTable::load(path);
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    write_file(cfg.out_path, text);
  }
}

std::uint64_t parse_q(const std::string& text) {
  std::size_t used = 0;
  unsigned long long q = 0;
  try {
    q = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw PreconditionError("q must be a prime power, got '" + text + "'");
  }
  if (used != text.size() || !prime_power(q)) throw PreconditionError("q must be a prime power, got '" + text + "'");
  return q;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  const SetFile file = read_set_file(read_file(cfg.set_path));
  const int m = cfg.m.value_or(file.m);
  const PointSet& a = file.set;
  check_m_range(a.ambient(), m);
  const bool want_geo = cfg.oracle != "arithmetic";
  const bool want_ari = cfg.oracle != "geometric";
  const bool ari_ok = a.size() >= static_cast<std::size_t>(m);
  if (cfg.oracle == "arithmetic" && !ari_ok) {
    throw PreconditionError("arithmetic test requires |A| >= m (|A| = " + std::to_string(a.size()) +
                            ", m = " + std::to_string(m) + ")");
  }

  out << "set: " << a.size() << " points in AG(" << a.ambient().n << ", " << a.field().spec_string() << "), m=" << m
      << "\n";
  if (want_ari && outside_stated_range(a.ambient(), m)) {
    out << "note: m > n, outside the range where the arithmetic criterion is proved; computed anyway\n";
  }
  std::optional<bool> geo, ari;
  const std::string label = std::to_string(m) + "-general";
  if (want_geo) {
    geo = is_m_general_geometric(a, m);
    out << "geometric: " << (*geo ? "" : "not ") << label << "\n";
  }
  if (want_ari) {
    if (ari_ok) {
      ari = is_m_general_arithmetic(a, m);
      out << "arithmetic: " << (*ari ? "" : "not ") << label << "\n";
    } else {
      out << "arithmetic: skipped (requires |A| >= m)\n";
    }
  }
  if (geo && ari && *geo != *ari) {
    err << "ORACLE DISAGREEMENT: geometric says " << (*geo ? "" : "not ") << label << ", arithmetic says "
        << (*ari ? "" : "not ") << label << "\n";
    return kFalse;
  }
  const bool general = geo ? *geo : *ari;
  out << "result: " << (general ? "" : "not ") << label << "\n";
  return general ? kOk : kFalse;
}

int cmd_construct(const Config& cfg, std::ostream& out) {
  const ModulusTable table = load_table(cfg);
  SetFile file;
  file.set = lower_bound_4general(cfg.n, table);
  file.m = 4;
  file.comments = construction_notes(cfg.n, table);
  emit(cfg, write_set_file(file), out);
  if (!cfg.out_path.empty()) {
    out << "wrote " << file.set.size() << " points in AG(" << cfg.n << ", 2) to " << cfg.out_path << "\n";
  }
  return kOk;
}

std::string opt_text(const std::optional<double>& v) { return v ? format_real(*v) : std::string("NA"); }

int cmd_bounds(const Config& cfg, std::ostream& out) {
  const std::uint64_t q = parse_q(cfg.q);
  const int m = *cfg.m;
  std::vector<BoundReport> reports;
  for (int n : cfg.ns) reports.push_back(bound_report(n, q, m));
  std::ostringstream s;
  if (cfg.csv) {
    s << "# format=1\n" << bounds_csv_header() << "\n";
    for (const auto& r : reports) s << bounds_csv_row(r) << "\n";
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      if (i) s << "\n";
      s << "q=" << r.q << " m=" << r.m << " n=" << r.n << " k=" << r.k << "\n";
      s << "main_bound=" << opt_text(r.main_bound) << "\n";
      s << "refined_bound=" << opt_text(r.refined) << " (exact |C_gamma*| count, sharper than the stated bound)\n";
      s << "bennett_bound=" << opt_text(r.bennett) << "\n";
      s << "t_star=" << opt_text(r.t_star) << "\n";
      s << "mu_main=" << opt_text(r.mu_main) << "\n";
      s << "mu_bennett=" << opt_text(r.mu_bennett) << "\n";
    }
  }
  emit(cfg, s.str(), out);
  return kOk;
}

int cmd_table(const Config& cfg, std::ostream& out) {
  std::ostringstream s;
  s << "# format=1\n";
  if (cfg.which == 1) {
    s << "# upper bounds on mu_m(q): log_q of min h over (0,1), rounded half up; blank when q is even and m odd\n";
    s << "m";
    for (auto q : table1_qs()) s << "," << q;
    s << "\n";
    for (int m = 3; m <= 8; ++m) {
      s << m;
      for (auto q : table1_qs()) {
        s << ",";
        if (bennett_applicable(q, m)) s << format_table1_cell(mu_upper_bennett(q, m));
      }
      s << "\n";
    }
  } else {
    s << "# upper bounds on mu_m(q) for every prime power q: 1/floor(m/2), rounded up\n";
    s << "m,mu\n";
    for (int m = 4; m <= 8; ++m) s << m << "," << format_table2_cell(mu_upper_main(m)) << "\n";
  }
  emit(cfg, s.str(), out);
  return kOk;
}

int cmd_search(const Config& cfg, std::ostream& out) {
  const ModulusTable table = load_table(cfg);
  const Ambient amb(cfg.n, parse_field_spec(cfg.q, table));
  const int m = *cfg.m;
  SearchCertificate cert = cfg.greedy ? search_greedy(amb, m, cfg.seed, cfg.restarts) : search_exact(amb, m, cfg.limits);
  cert.modulus_table = table.id;
  emit(cfg, certificate_to_json(cert), out);
  if (!cfg.out_path.empty()) {
    out << "value=" << cert.value << " exact=" << (cert.exact ? "true" : "false") << " nodes=" << cert.nodes_explored
        << " written to " << cfg.out_path << "\n";
  }
  if (!cfg.greedy && !cert.exact) return kLimits;
  return kOk;
}

int cmd_check(const Config& cfg, std::ostream& out) {
  const CertificateCheck check = check_certificate_json(read_file(cfg.cert_path), load_table(cfg));
  out << "certificate: " << to_string(check.status);
  if (!check.detail.empty()) out << ": " << check.detail;
  out << "\n";
  if (check.ok()) return kOk;
  return check.status == CertificateStatus::Malformed ? kUsage : kFalse;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Construct, verify, bound and search m-general sets in AG(n, q)", "mgen"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--modulus-table", cfg.modulus_table,
                 std::string("Modulus table file (lines `p d c_0 ... c_d`); default from ") + kTableEnv);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto* verify = app.add_subcommand("verify", "Check whether a set file is m-general");
  verify->add_option("setfile", cfg.set_path, "Set file")->required();
  verify->add_option("-m", cfg.m, "m (defaults to the file header)");
  verify->add_option("--oracle", cfg.oracle, "Which test to run")
      ->check(CLI::IsMember({"geometric", "arithmetic", "both"}));

  auto* construct = app.add_subcommand("construct", "Write the cube-graph 4-general set in F_2^n");
  construct->add_option("--n", cfg.n, "Dimension")->required();
  construct->add_option("--out", cfg.out_path, "Output set file (stdout if absent)");

  auto* bounds = app.add_subcommand("bounds", "Upper bounds on r_m(n, q)");
  bounds->add_option("--q", cfg.q, "Field order")->required();
  bounds->add_option("--m", cfg.m, "m")->required();
  bounds->add_option("--n", cfg.ns, "Dimension(s), comma separated")->required()->delimiter(',');
  bounds->add_flag("--csv", cfg.csv, "CSV output");
  bounds->add_option("--out", cfg.out_path, "Output file (stdout if absent)");

  auto* tbl = app.add_subcommand("table", "Exponent bound tables");
  tbl->add_option("--which", cfg.which, "1: Bennett exponents, 2: q-independent exponents")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  tbl->add_option("--out", cfg.out_path, "Output file (stdout if absent)");

  auto* search = app.add_subcommand("search", "Find a large m-general set and write a certificate");
  search->add_option("--n", cfg.n, "Dimension")->required();
  search->add_option("--q", cfg.q, "Field: prime power or p^d:modulus")->required();
  search->add_option("--m", cfg.m, "m")->required();
  auto* exact_flag = search->add_flag("--exact", cfg.exact, "Exhaustive branch and bound (default)");
  auto* greedy_flag = search->add_flag("--greedy", cfg.greedy, "Randomized greedy with restarts");
  exact_flag->excludes(greedy_flag);
  search->add_option("--seed", cfg.seed, "Greedy seed")->capture_default_str();
  search->add_option("--restarts", cfg.restarts, "Greedy restarts")->capture_default_str();
  search->add_option("--max-nodes", cfg.limits.max_nodes, "Node limit")->capture_default_str();
  search->add_option("--max-seconds", cfg.limits.max_seconds, "Time limit")->capture_default_str();
  search->add_option("--workers", cfg.limits.workers, "Worker threads")->capture_default_str();
  search->add_option("--out", cfg.out_path, "Certificate file (stdout if absent)");

  auto* check = app.add_subcommand("check", "Re-verify a certificate file");
  check->add_option("certfile", cfg.cert_path, "Certificate file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (construct->parsed()) return cmd_construct(cfg, out);
    if (bounds->parsed()) return cmd_bounds(cfg, out);
    if (tbl->parsed()) return cmd_table(cfg, out);
    if (search->parsed()) return cmd_search(cfg, out);
    if (check->parsed()) return cmd_check(cfg, out);
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace mgen::cli
