#include "mgen/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "mgen/arithmetic.hpp"
#include "mgen/error.hpp"
#include "mgen/field.hpp"

namespace mgen {

namespace {

void check_main_pre(int n, std::uint64_t q, int m) {
  if (m < 4) throw PreconditionError("counting bound requires m >= 4");
  if (n < 1) throw PreconditionError("n must be at least 1");
  if (!prime_power(q)) throw PreconditionError("q must be a prime power");
}

void check_t(double t) {
  if (!(t > 0.0 && t < 1.0)) throw PreconditionError("t must lie in the open interval (0, 1)");
}

// log binom(x, k) for real x > k - 1.
double log_binom(double x, int k) {
  double s = 0;
  for (int i = 0; i < k; ++i) s += std::log((x - i) / (k - i));
  return s;
}

}  // namespace

double bound_main(int n, std::uint64_t q, int m) {
  check_main_pre(n, q, m);
  const double k = m / 2;
  const double qd = static_cast<double>(q);
  if (q == 2) {
    return std::pow(std::tgamma(k + 1), 1.0 / k) * std::pow(2.0, n / k) + k;
  }
  return k * std::pow(qd, n / k) / (std::pow(qd - 1, 1.0 - 2.0 / k) * std::pow(qd - 2, 1.0 / k));
}

double exact_cgamma_count(std::uint64_t q, int k) {
  if (q == 2) return 1.0;
  double work = 1;
  for (int i = 0; i < k; ++i) work *= static_cast<double>(q);
  if (q <= 16 && work <= 1e6) {
    const auto pd = prime_power(q);
    const auto field = FieldSpec::make(pd->first, pd->second);
    return static_cast<double>(enumerate_cgamma_star(field, k, field.one()).size());
  }
  // Same recurrence as count_cgamma_star, in floating point.
  double zero_count = 0, fixed_count = 1;
  const double qd = static_cast<double>(q);
  for (int len = 2; len <= k; ++len) {
    const double z = (qd - 1) * fixed_count;
    fixed_count = zero_count + (qd - 2) * fixed_count;
    zero_count = z;
  }
  return fixed_count;
}

double refined_bound(int n, std::uint64_t q, int m) {
  check_main_pre(n, q, m);
  const int k = m / 2;
  const double budget = n * std::log(static_cast<double>(q)) - std::log(exact_cgamma_count(q, k));
  // binom(x, k) increases on (k - 1, inf); bisect on its log.
  double lo = k - 1, hi = k;
  while (log_binom(hi, k) <= budget) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_binom(mid, k) <= budget) lo = mid;
    else hi = mid;
  }
  return lo;
}

double h_eval(std::uint64_t q, int m, double t) {
  check_t(t);
  const double qd = static_cast<double>(q);
  const double lt = std::log1p(t - 1.0);
  const double ratio = -std::expm1(qd * lt) / (1.0 - t);
  return std::exp(-(qd - 1) / m * lt) * ratio;
}

double h_deriv(std::uint64_t q, int m, double t) {
  check_t(t);
  const double qd = static_cast<double>(q);
  const double tq = std::pow(t, qd);
  const double bracket = (qd + m - 1) * t - (qd - 1) - tq * ((qd - 1) * (m - 1) * (1 - t) + m);
  return std::pow(t, -(qd - 1) / m - 1) / (m * (1 - t) * (1 - t)) * bracket;
}

HMinimum minimize_h(std::uint64_t q, int m, double tol) {
  static const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = h_eval(q, m, x1), f2 = h_eval(q, m, x2);
  HMinimum r;
  while (hi - lo >= tol && r.iterations < 500) {
    ++r.iterations;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = h_eval(q, m, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = h_eval(q, m, x2);
    }
  }
  r.final_width = hi - lo;
  r.t_star = f1 <= f2 ? x1 : x2;
  r.value = std::min(f1, f2);
  return r;
}

bool bennett_applicable(std::uint64_t q, int m) { return q % 2 == 1 || m % 2 == 0; }

BennettBound bennett_bound(int n, std::uint64_t q, int m) {
  if (!prime_power(q)) throw PreconditionError("q must be a prime power");
  if (m < 3 || m > n + 2) throw PreconditionError("Bennett bound requires 3 <= m <= n + 2");
  if (!bennett_applicable(q, m)) {
    throw PreconditionError("Bennett bound requires q odd, or m and q both even");
  }
  const HMinimum h = minimize_h(q, m);
  return BennettBound{2.0 * m + m * std::pow(h.value, n), h.t_star, h.value};
}

double mu_upper_main(int m) {
  if (m < 4) throw PreconditionError("q-independent exponent bound requires m >= 4");
  return 1.0 / (m / 2);
}

double mu_upper_bennett(std::uint64_t q, int m) {
  if (m < 3) throw PreconditionError("Bennett exponent requires m >= 3");
  if (!bennett_applicable(q, m)) {
    throw PreconditionError("Bennett bound requires q odd, or m and q both even");
  }
  return std::log(minimize_h(q, m).value) / std::log(static_cast<double>(q));
}

bool bennett_lower_estimate_applicable(std::uint64_t q, int m) {
  const double lo = 1.0 / m, hi = static_cast<double>(q) / m;
  if (!(hi < 1.0)) return false;
  return h_deriv(q, m, lo) < 0 && h_deriv(q, m, hi) > 0;
}

double bennett_lower_estimate(int n, std::uint64_t q, int m) {
  if (!bennett_lower_estimate_applicable(q, m)) {
    throw PreconditionError("lower estimate needs h'(1/m) < 0 and h'(q/m) > 0");
  }
  const double qd = static_cast<double>(q);
  return m * std::pow(m / qd, (qd - 1) * n / m);
}

BoundReport bound_report(int n, std::uint64_t q, int m) {
  BoundReport r;
  r.n = n;
  r.q = q;
  r.m = m;
  r.k = m / 2;
  if (m < 3) throw PreconditionError("m must be at least 3");
  if (n < 1) throw PreconditionError("n must be at least 1");
  if (!prime_power(q)) throw PreconditionError("q must be a prime power");
  if (m >= 4) {
    r.main_bound = bound_main(n, q, m);
    r.refined = refined_bound(n, q, m);
    r.mu_main = mu_upper_main(m);
  }
  if (bennett_applicable(q, m) && m <= n + 2) {
    const auto b = bennett_bound(n, q, m);
    r.bennett = b.bound;
    r.t_star = b.t_star;
    r.mu_bennett = std::log(b.min_h) / std::log(static_cast<double>(q));
  }
  return r;
}

std::string format_table1_cell(double mu) {
  const long thousandths = static_cast<long>(std::floor(mu * 1000.0 + 0.5));
  char buf[16];
  std::snprintf(buf, sizeof buf, ".%03ld", thousandths % 1000);
  return thousandths >= 1000 ? std::to_string(thousandths / 1000) + buf : std::string(buf);
}

std::string format_table2_cell(double mu) {
  // Nudge by a relative epsilon so exact thousandths (0.5) are not bumped.
  const long thousandths = static_cast<long>(std::ceil(mu * 1000.0 * (1 - 1e-12)));
  char buf[16];
  std::snprintf(buf, sizeof buf, ".%03ld", thousandths % 1000);
  return thousandths >= 1000 ? std::to_string(thousandths / 1000) + buf : std::string(buf);
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string bounds_csv_header() { return "q,m,n,k,main,refined,bennett,t_star,mu_main,mu_bennett"; }

std::string bounds_csv_row(const BoundReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("NA"); };
  return std::to_string(r.q) + "," + std::to_string(r.m) + "," + std::to_string(r.n) + "," + std::to_string(r.k) +
         "," + opt(r.main_bound) + "," + opt(r.refined) + "," + opt(r.bennett) + "," + opt(r.t_star) + "," +
         opt(r.mu_main) + "," + opt(r.mu_bennett);
}

}  // namespace mgen
