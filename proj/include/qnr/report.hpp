#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnr/matrix.hpp"
#include "qnr/qrange.hpp"
#include "qnr/tolerances.hpp"

namespace qnr {

enum class CheckStatus { Pass, Fail, Indeterminate };
std::string_view to_string(CheckStatus s) noexcept;

struct EstimatorMetadata {
  int estimates = 0;      // estimator calls behind this report
  int max_restarts = 0;
  bool converged = true;  // all of them converged
};

struct BoundCheckReport {
  std::string bound_id;
  std::string clause;
  nlohmann::ordered_json inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  double tolerance_used = 0.0;
  bool passed = false;
  CheckStatus status = CheckStatus::Fail;
  /// An estimated (lower-bound) value sits on the side that makes passing easier.
  bool estimate_based = false;
  /// Reported for context only; excluded from pass/fail tallies.
  bool informational = false;
  EstimatorMetadata estimator;
  std::string note;
};

nlohmann::ordered_json to_json(const BoundCheckReport& r);

/// 1e-6 + 1e-6 max(|lhs|, |rhs|)
double policy_tolerance(double lhs, double rhs);

/// A computed quantity and how it was obtained.
struct Term {
  double value = 0.0;
  bool estimated = false;
  bool converged = true;
  int restarts = 0;
};

struct EvaluatorOptions {
  int restarts = 0;  // 0 selects the estimator default
  std::uint64_t seed = 42;
  Tolerances tol{};
  bool hermitian_fast_path = true;
};

/// Memoizing front end for w_q, w and the operator norm. Hermitian arguments
/// use the closed form unless an estimate is explicitly requested.
class Evaluator {
 public:
  explicit Evaluator(EvaluatorOptions opts = {});

  Term wq(const ComplexMatrix& m, cplx q, bool force_estimator = false);
  Term w(const ComplexMatrix& m);
  double norm(const ComplexMatrix& m);
  const Tolerances& tol() const noexcept { return opts_.tol; }
  const EvaluatorOptions& options() const noexcept { return opts_; }

 private:
  EvaluatorOptions opts_;
  std::map<std::string, Term> cache_;
  std::map<std::string, double> norms_;
};

/// Accumulates clause reports for one bound evaluation.
class ReportBuilder {
 public:
  ReportBuilder(std::string bound_id, nlohmann::ordered_json inputs);

  /// lhs <= rhs under the default tolerance policy.
  BoundCheckReport& leq(const std::string& clause, double lhs, double rhs,
                        std::initializer_list<Term> lhs_terms = {},
                        std::initializer_list<Term> rhs_terms = {});
  /// lhs <= rhs with an explicit tolerance.
  BoundCheckReport& leq_tol(const std::string& clause, double lhs, double rhs, double tol,
                            std::initializer_list<Term> lhs_terms = {},
                            std::initializer_list<Term> rhs_terms = {});
  /// |a - b| <= policy_tolerance(a, b); reported as lhs = |a - b|, rhs = 0.
  BoundCheckReport& equal(const std::string& clause, double a, double b,
                          std::initializer_list<Term> terms = {});

  std::vector<BoundCheckReport> take() { return std::move(reports_); }

 private:
  BoundCheckReport& push(const std::string& clause, double lhs, double rhs, double tol,
                         std::initializer_list<Term> lhs_terms,
                         std::initializer_list<Term> rhs_terms, bool both_estimated);

  std::string id_;
  nlohmann::ordered_json inputs_;
  std::vector<BoundCheckReport> reports_;
};

}  // namespace qnr
