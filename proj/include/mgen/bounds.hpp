#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mgen {

/// Upper bound from the C_gamma^* counting argument, k = floor(m/2):
///   k q^{n/k} / ((q-1)^{1-2/k} (q-2)^{1/k})   for q > 2,
///   (k!)^{1/k} 2^{n/k} + k                      for q = 2.
/// Requires m >= 4, n >= 1, q a prime power.
double bound_main(int n, std::uint64_t q, int m);

/// Exact |C_gamma^*| for nonzero gamma (q > 2), by enumeration when q^k is
/// small and by recurrence otherwise; 1 for q = 2. Returned as a double
/// because it overflows 64 bits for large q and k.
double exact_cgamma_count(std::uint64_t q, int k);

/// Largest real x with L * binom(x, k) <= q^n, L = exact_cgamma_count.
/// Never exceeds bound_main + k.
double refined_bound(int n, std::uint64_t q, int m);

/// h(t) = t^{-(q-1)/m} (1 - t^q) / (1 - t), for t in (0, 1).
double h_eval(std::uint64_t q, int m, double t);
/// Closed-form derivative of h_eval.
double h_deriv(std::uint64_t q, int m, double t);

struct HMinimum {
  double t_star = 0;
  double value = 0;
  int iterations = 0;
  double final_width = 0;
};

/// Golden-section (ternary) search for min h on (0, 1), stopping once the
/// bracket is narrower than tol.
HMinimum minimize_h(std::uint64_t q, int m, double tol = 1e-12);

/// q odd, or q and m both even.
bool bennett_applicable(std::uint64_t q, int m);

struct BennettBound {
  double bound = 0;  // 2m + m (min h)^n
  double t_star = 0;
  double min_h = 0;
};

/// Requires 3 <= m <= n + 2 and the parity hypothesis; throws
/// PreconditionError naming the hypothesis otherwise.
BennettBound bennett_bound(int n, std::uint64_t q, int m);

/// 1 / floor(m/2). Requires m >= 4.
double mu_upper_main(int m);
/// log_q(min h). Requires the parity hypothesis.
double mu_upper_bennett(std::uint64_t q, int m);

/// m (m/q)^{(q-1)n/m}, valid once h'(1/m) < 0 and h'(q/m) > 0. Throws
/// PreconditionError when those sign conditions fail.
double bennett_lower_estimate(int n, std::uint64_t q, int m);
bool bennett_lower_estimate_applicable(std::uint64_t q, int m);

struct BoundReport {
  int n = 0;
  std::uint64_t q = 0;
  int m = 0;
  int k = 0;
  // Absent for m = 3, where the counting argument gives nothing.
  std::optional<double> main_bound;
  std::optional<double> refined;
  // Absent exactly when the parity hypothesis (or m <= n + 2) fails.
  std::optional<double> bennett;
  std::optional<double> t_star;
  std::optional<double> mu_main;
  std::optional<double> mu_bennett;
};

/// Requires m >= 3, n >= 1, q a prime power.
BoundReport bound_report(int n, std::uint64_t q, int m);

/// Round half up to 3 decimals, printed without a leading zero (".923").
std::string format_table1_cell(double mu);
/// Ceiling to 3 decimals, printed without a leading zero (".334").
std::string format_table2_cell(double mu);

inline const std::vector<std::uint64_t>& table1_qs() {
  static const std::vector<std::uint64_t> qs = {2, 3, 4, 5, 7, 8, 9, 11};
  return qs;
}

/// %.6g, the fixed formatting used in CSV output.
std::string format_real(double x);

std::string bounds_csv_header();
std::string bounds_csv_row(const BoundReport& r);

}  // namespace mgen
