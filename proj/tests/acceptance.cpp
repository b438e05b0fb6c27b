// Acceptance run: one line per criterion, exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "qnr/blockops.hpp"
#include "qnr/bounds.hpp"
#include "qnr/qrange.hpp"
#include "qnr/random.hpp"
#include "qnr/spectral.hpp"

#ifndef QNR_CLI_PATH
#define QNR_CLI_PATH "qnr"
#endif

using namespace qnr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Outcome hermitian_closed_form() {
  Outcome o;
  const auto t = ComplexMatrix::diagonal({5, 4});
  double worst = 0.0, slowest = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double q = k / 10.0;
    const auto t0 = Clock::now();
    const double v = q_radius_estimate(t, q).value;
    slowest = std::max(slowest, seconds_since(t0));
    worst = std::max(worst, std::abs(v - (9 * q + 1) / 2));
  }
  o.pass = worst <= 1e-6 && slowest < 1.0;
  o.detail = fmt("max |estimate - (9q+1)/2| = %.3g, slowest q %.3f s", worst, slowest);
  return o;
}

Outcome product_counterexample() {
  Outcome o;
  const auto a = ComplexMatrix::diagonal({1, 2}), b = ComplexMatrix::diagonal({2, 2});
  double worst = 0.0;
  bool strict = true, scaled = true;
  Evaluator ev;
  for (int k = 1; k <= 9; ++k) {
    const double q = k / 10.0;
    const double wab = q_radius_estimate(a * b, q).value;
    const double wa = q_radius_estimate(a, q).value, wb = q_radius_estimate(b, q).value;
    worst = std::max(worst, std::abs(wab - (3 * q + 1)));
    strict = strict && wab > wa * wb + 1e-6;
    BoundInputs in;
    in.a = a;
    in.b = b;
    in.q = q;
    for (const auto& r : evaluate_bound("B6", in, ev)) {
      if (r.clause == "scaled-product") scaled = scaled && r.passed;
    }
  }
  o.pass = worst <= 1e-6 && strict && scaled;
  o.detail = fmt("max |w_q(AB) - (3q+1)| = %.3g, w_q(AB) > w_q(A)w_q(B): %s, scaled B6: %s", worst,
                 strict ? "yes" : "no", scaled ? "pass" : "fail");
  return o;
}

Outcome inverse_crossover_check() {
  Outcome o;
  const auto q = inverse_crossover(ComplexMatrix::diagonal({1, 2}), make_grid(0.0, 1.0, 0.001));
  if (!q) return {false, "no crossover found"};
  const double ref = (2 * std::sqrt(2.0) - 1) / 3;
  const double rounded = std::round(*q * 1e4) / 1e4;
  o.pass = std::abs(*q - ref) <= 1e-6 && std::abs(rounded - 0.6095) < 1e-12;
  o.detail = fmt("q* = %.10f, exact %.10f, 4 decimals %.4f", *q, ref, rounded);
  return o;
}

Outcome threshold_remarks() {
  Outcome o;
  const auto grid = make_grid(0.0, 1.0, 0.001);
  const auto c90 = threshold_curve(std::numbers::pi / 2, grid);
  const auto c45 = threshold_curve(std::numbers::pi / 4, grid);
  if (!c90.crossover || !c45.crossover) return {false, "missing crossover"};
  // q + sqrt(3(1-q^2)) = sqrt(2) and q + sqrt(2(1-q^2)) = sqrt(3/2), larger roots
  const double r90 = (std::sqrt(2.0) + std::sqrt(6.0)) / 4;
  const double c = std::sqrt(1.5);
  const double r45 = (c + std::sqrt(6 - 2 * c * c)) / 3;
  const double e90 = std::abs(*c90.crossover - r90), e45 = std::abs(*c45.crossover - r45);
  const bool printed = std::abs(*c90.crossover - 0.97) < 0.01 && std::abs(*c45.crossover - 0.98) < 0.01;
  o.pass = e90 <= 1e-6 && e45 <= 1e-6 && printed;
  o.detail = fmt("pi/2: q* = %.8f (err %.2g, printed 0.97); pi/4: q* = %.8f (err %.2g, printed 0.98)",
                 *c90.crossover, e90, *c45.crossover, e45);
  return o;
}

Outcome nilpotent_value() {
  Outcome o;
  const auto j = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
  double e_est = 0.0, e_brute = 0.0;
  bool above = true;
  for (double q : {0.2, 0.5, 0.8}) {
    const double exact = (1 + std::sqrt(1 - q * q)) / 2;
    const double est = q_radius_estimate(j, q).value;
    e_est = std::max(e_est, std::abs(est - exact));
    e_brute = std::max(e_brute, std::abs(q_radius_bruteforce_2x2(j, q) - est));
    above = above && est >= (q + std::sqrt(1 - q * q)) / 2;
  }
  o.pass = e_est <= 1e-6 && e_brute <= 1e-4 && above;
  o.detail = fmt("estimate error %.3g, brute-force gap %.3g, above (q+sqrt(1-q^2))/2: %s", e_est, e_brute,
                 above ? "yes" : "no");
  return o;
}

Outcome block_example() {
  Outcome o;
  const auto d = ComplexMatrix::diagonal({2, 3});
  const auto t = make_offdiag(d, d).assembled;
  double worst = 0.0;
  for (double q : {0.25, 0.5, 0.75, 1.0}) {
    worst = std::max(worst, std::abs(offdiag_hermitian_closed_form(hermitian_eigen(d), q) - 3));
    worst = std::max(worst, std::abs(q_radius_hermitian(t, q) - 3));
    worst = std::max(worst, std::abs(q_radius_estimate(t, q).value - 3));
  }
  o.pass = worst <= 1e-6;
  o.detail = fmt("max deviation from 3 over closed forms and estimator: %.3g", worst);
  return o;
}

Outcome estimator_vs_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0, over = -1e300;
  int count = 0;
  for (int k = 0; k < 200; ++k) {
    Rng rng = make_rng(2024, static_cast<std::uint64_t>(k));
    const auto a = gaussian_matrix(rng, 2);
    for (double q : {0.3, 0.7}) {
      const double est = q_radius_estimate(a, q).value;
      const double brute = q_radius_bruteforce_2x2(a, q);
      worst = std::max(worst, std::abs(est - brute));
      over = std::max(over, est - brute);
      ++count;
    }
  }
  const double secs = seconds_since(t0);
  o.pass = worst <= 1e-4 && over <= 1e-6 && secs < 300.0;
  o.detail = fmt("%d cases, max |diff| %.3g, max excess over oracle %.3g, %.1f s", count, worst, over, secs);
  return o;
}

Outcome fuzz_suite() {
  Outcome o;
  FuzzConfig cfg;
  cfg.bound_ids = bound_registry();
  cfg.trials = 1000;
  const auto t0 = Clock::now();
  const auto res = fuzz(cfg);
  const double secs = seconds_since(t0);
  int pass = 0, fail = 0, indet = 0;
  std::string failing;
  for (const auto& [id, t] : res.summary) {
    pass += t.pass;
    fail += t.fail;
    indet += t.indeterminate;
  }
  for (const auto& id : bound_registry()) {
    const auto& t = res.summary.at(id);
    if (t.fail > 0) failing += fmt(" %s:%d", id.c_str(), t.fail);
  }
  const int counted = pass + fail + indet;
  const double rate = counted ? static_cast<double>(indet) / counted : 0.0;
  o.pass = fail == 0 && rate < 0.01 && secs < 900.0;
  o.detail = fmt("%d checks, %d fail, %d indeterminate (%.3f%%), %.0f s", counted, fail, indet, 100 * rate, secs);
  if (!failing.empty()) o.detail += "; failing:" + failing;
  return o;
}

Outcome transcendental() {
  Outcome o;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Rng rng = make_rng(99, static_cast<std::uint64_t>(k));
    const auto t = gaussian_matrix(rng, 2 + k % 3);
    const double gap = std::abs(transcendental_radius_sup(t) - transcendental_radius_inf(t));
    worst = std::max(worst, gap / (1 + operator_norm(t)));
  }
  const double m54 = transcendental_radius_sup(ComplexMatrix::diagonal({5, 4}));
  const double mj = transcendental_radius_sup(ComplexMatrix::from_rows({{0, 1}, {0, 0}}));
  o.pass = worst <= 1e-5 && std::abs(m54 - 0.5) <= 1e-6 && std::abs(mj - 1) <= 1e-6;
  o.detail = fmt("max relative sup/inf gap %.3g, m(diag(5,4)) = %.9f, m(J) = %.9f", worst, m54, mj);
  return o;
}

Outcome loewner_lemmas() {
  Outcome o;
  Evaluator ev;
  int samples = 0, checks = 0, failures = 0, draws = 0;
  std::uint64_t seed = 0;
  while (samples < 200 && draws < 2000) {
    ++draws;
    Rng rng = make_rng(77, seed);
    const std::size_t n = 2 + static_cast<std::size_t>(seed % 3);
    const double alpha = std::uniform_real_distribution<double>(0.0, 1.4)(rng);
    const auto s = generate_sectorial(n, alpha, 1000 + seed);
    ++seed;
    if (general_eigen(s.matrix).condition > 1e6) continue;
    ++samples;
    for (double t : {0.25, 0.5, 0.75}) {
      for (const auto& [id, tt] : {std::pair{"B18", t}, std::pair{"B19", -t}}) {
        BoundInputs in;
        in.a = s.matrix;
        in.t = tt;
        for (const auto& r : evaluate_bound(id, in, ev)) {
          ++checks;
          if (!r.passed) ++failures;
        }
      }
    }
  }
  o.pass = samples == 200 && failures == 0;
  o.detail = fmt("%d samples, %d chain comparisons, %d failures", samples, checks, failures);
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  const std::string a = "acceptance_fuzz_a.jsonl", b = "acceptance_fuzz_b.jsonl";
  const std::string base = std::string("\"") + QNR_CLI_PATH + "\" fuzz --seed 7 --trials 100 --out ";
  const int ra = std::system((base + a).c_str());
  const int rb = std::system((base + b).c_str());
  const std::string fa = slurp(a), fb = slurp(b);
  o.pass = !fa.empty() && fa == fb;
  o.detail = fmt("exit statuses %d/%d, %zu bytes each, identical: %s", WEXITSTATUS(ra), WEXITSTATUS(rb),
                 fa.size(), fa == fb ? "yes" : "no");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, hermitian_closed_form},   {2, product_counterexample}, {3, inverse_crossover_check},
      {4, threshold_remarks},       {5, nilpotent_value},        {6, block_example},
      {7, estimator_vs_oracle},     {8, fuzz_suite},             {9, transcendental},
      {10, loewner_lemmas},         {11, determinism},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
