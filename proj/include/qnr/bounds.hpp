#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnr/matrix.hpp"
#include "qnr/report.hpp"

namespace qnr {

/// Operands for one registry entry. B-entries read A, B, C, D; K-entries read
/// X = a and Y = b.
struct BoundInputs {
  ComplexMatrix a;
  std::optional<ComplexMatrix> b, c, d;
  cplx q = 0.5;
  std::optional<double> t;
  std::optional<double> alpha;  // user-supplied sector angle (must dominate the certified one)
  std::optional<double> gamma;
  std::vector<double> thetas;   // rotation angles for K1; empty selects {pi/3, pi}
  nlohmann::ordered_json context = nlohmann::ordered_json::object();
};

/// "B1".."B22" followed by "K1".."K14".
const std::vector<std::string>& bound_registry();
/// Comma list of ids and ranges such as "B1..B22,K3"; "all" selects the registry.
/// Throws UnknownBound.
std::vector<std::string> parse_bound_list(const std::string& spec);

/// One report per clause. Throws PreconditionFailed (naming the predicate)
/// when the entry does not apply to the inputs, UnknownBound for bad ids.
std::vector<BoundCheckReport> evaluate_bound(const std::string& id, const BoundInputs& in,
                                             Evaluator& ev);

/// Certified sector angle of A, optionally replaced by a larger user angle.
double effective_alpha(const ComplexMatrix& a, std::optional<double> alpha_override,
                       const Tolerances& tol, const char* name = "A");

struct SectorialSample {
  ComplexMatrix matrix;
  double alpha_target = 0.0;
  double alpha_certified = 0.0;
  std::uint64_t seed = 0;
};

/// A = H + iK with H = G^*G + 0.1 I and ||H^{-1/2} K H^{-1/2}|| = u tan(alpha).
SectorialSample generate_sectorial(std::size_t n, double alpha, std::uint64_t seed);

struct FuzzConfig {
  std::vector<std::string> bound_ids;
  int trials = 100;
  std::size_t n_min = 2, n_max = 4;
  double alpha_min = 0.0, alpha_max = 1.4;
  std::vector<double> q_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::uint64_t seed = 42;
  int restarts = 0;
  Tolerances tol{};
};

struct FuzzTally {
  int pass = 0, fail = 0, indeterminate = 0, skipped = 0, informational = 0;
};

struct FuzzTrial {
  int index = 0;
  std::vector<BoundCheckReport> reports;
  /// Entries whose preconditions failed, with the reason.
  std::vector<std::pair<std::string, std::string>> skipped;
};

/// Single deterministic trial; fuzz() is the ordered concatenation of these.
FuzzTrial fuzz_trial(const FuzzConfig& cfg, int index);

struct FuzzResult {
  std::vector<FuzzTrial> trials;
  std::map<std::string, FuzzTally> summary;
};

FuzzResult fuzz(const FuzzConfig& cfg);
void tally(const FuzzTrial& trial, std::map<std::string, FuzzTally>& summary);
nlohmann::ordered_json summary_json(const std::map<std::string, FuzzTally>& summary);

/// Inclusive arithmetic grid start, start + step, ... <= stop.
std::vector<double> make_grid(double start, double stop, double step);

struct ThresholdCurve {
  double alpha = 0.0;
  std::vector<double> q, f1, f2;
  /// First q where f2 drops below f1, bisected to 1e-14; absent if none in the grid.
  std::optional<double> crossover;
};

/// f1 = sqrt(1 + sin^2 alpha), f2(q) = sqrt((1 - q^2)(1 + 2 sin^2 alpha)) + q.
ThresholdCurve threshold_curve(double alpha, const std::vector<double>& q_grid);

/// Crossing of w_q(A^{-1}) and 1/w_q(A) for hermitian positive definite A.
std::optional<double> inverse_crossover(const ComplexMatrix& a, const std::vector<double>& q_grid);

}  // namespace qnr
