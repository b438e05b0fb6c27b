#include "qnr/report.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "qnr/errors.hpp"
#include "qnr/nrange.hpp"
#include "qnr/spectral.hpp"

namespace qnr {

std::string_view to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Indeterminate: return "indeterminate";
  }
  return "fail";
}

double policy_tolerance(double lhs, double rhs) {
  return 1e-6 + 1e-6 * std::max(std::abs(lhs), std::abs(rhs));
}

nlohmann::ordered_json to_json(const BoundCheckReport& r) {
  nlohmann::ordered_json j;
  j["bound_id"] = r.bound_id;
  j["clause"] = r.clause;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["tolerance_used"] = r.tolerance_used;
  j["passed"] = r.passed;
  j["status"] = std::string(to_string(r.status));
  j["estimate_based"] = r.estimate_based;
  j["informational"] = r.informational;
  j["estimator"] = {{"estimates", r.estimator.estimates},
                    {"max_restarts", r.estimator.max_restarts},
                    {"converged", r.estimator.converged}};
  if (!r.note.empty()) j["note"] = r.note;
  j["inputs"] = r.inputs;
  return j;
}

namespace {

std::string cache_key(const ComplexMatrix& m, double extra) {
  std::string key(sizeof(double) * (2 * m.data().size() + 1), '\0');
  std::memcpy(key.data(), m.data().data(), sizeof(double) * 2 * m.data().size());
  std::memcpy(key.data() + sizeof(double) * 2 * m.data().size(), &extra, sizeof(double));
  return key;
}

}  // namespace

Evaluator::Evaluator(EvaluatorOptions opts) : opts_(std::move(opts)) { opts_.tol.validate(); }

Term Evaluator::wq(const ComplexMatrix& m, cplx q, bool force_estimator) {
  validate_q(q);
  const double qa = std::min(1.0, std::abs(q));
  const bool herm = opts_.hermitian_fast_path && !force_estimator && is_hermitian(m, opts_.tol.eig_tol);
  const std::string key = cache_key(m, herm ? qa : -1.0 - qa);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  Term t;
  if (herm) {
    t.value = q_radius_hermitian(m, qa, opts_.tol);
  } else {
    QEstimateOptions eo;
    eo.restarts = opts_.restarts;
    eo.seed = opts_.seed;
    eo.tol = opts_.tol;
    const QRadiusEstimate est = q_radius_estimate(m, qa, eo);
    t = {est.value, true, est.converged, est.restarts_used};
  }
  cache_.emplace(key, t);
  return t;
}

Term Evaluator::w(const ComplexMatrix& m) {
  const std::string key = cache_key(m, 2.0);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  Term t;
  if (opts_.hermitian_fast_path && is_hermitian(m, opts_.tol.eig_tol)) {
    const auto ev = hermitian_eigenvalues(m, opts_.tol);
    t.value = std::max(std::abs(ev.front()), std::abs(ev.back()));
  } else {
    t = {numerical_radius(m), true, true, 1};
  }
  cache_.emplace(key, t);
  return t;
}

double Evaluator::norm(const ComplexMatrix& m) {
  const std::string key = cache_key(m, 0.0);
  if (auto it = norms_.find(key); it != norms_.end()) return it->second;
  const double v = operator_norm(m);
  norms_.emplace(key, v);
  return v;
}

ReportBuilder::ReportBuilder(std::string bound_id, nlohmann::ordered_json inputs)
    : id_(std::move(bound_id)), inputs_(std::move(inputs)) {}

BoundCheckReport& ReportBuilder::push(const std::string& clause, double lhs, double rhs,
                                      double tol, std::initializer_list<Term> lhs_terms,
                                      std::initializer_list<Term> rhs_terms,
                                      bool both_estimated) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    throw Error(ErrorKind::PreconditionFailed,
                id_ + " " + clause + ": bound is not finite for these inputs");
  }
  BoundCheckReport r;
  r.bound_id = id_;
  r.clause = clause;
  r.inputs = inputs_;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance_used = tol;
  r.passed = r.slack >= -tol;
  for (const auto* side : {&lhs_terms, &rhs_terms}) {
    for (const Term& t : *side) {
      if (!t.estimated) continue;
      ++r.estimator.estimates;
      r.estimator.max_restarts = std::max(r.estimator.max_restarts, t.restarts);
      r.estimator.converged = r.estimator.converged && t.converged;
    }
  }
  for (const Term& t : lhs_terms) r.estimate_based = r.estimate_based || t.estimated;
  r.estimate_based = r.estimate_based || both_estimated;
  if (r.passed) {
    r.status = CheckStatus::Pass;
  } else {
    r.status = r.estimator.converged ? CheckStatus::Fail : CheckStatus::Indeterminate;
  }
  reports_.push_back(std::move(r));
  return reports_.back();
}

BoundCheckReport& ReportBuilder::leq(const std::string& clause, double lhs, double rhs,
                                     std::initializer_list<Term> lhs_terms,
                                     std::initializer_list<Term> rhs_terms) {
  return push(clause, lhs, rhs, policy_tolerance(lhs, rhs), lhs_terms, rhs_terms, false);
}

BoundCheckReport& ReportBuilder::leq_tol(const std::string& clause, double lhs, double rhs,
                                         double tol, std::initializer_list<Term> lhs_terms,
                                         std::initializer_list<Term> rhs_terms) {
  return push(clause, lhs, rhs, tol, lhs_terms, rhs_terms, false);
}

BoundCheckReport& ReportBuilder::equal(const std::string& clause, double a, double b,
                                       std::initializer_list<Term> terms) {
  bool any_est = false;
  for (const Term& t : terms) any_est = any_est || t.estimated;
  auto& r = push(clause, std::abs(a - b), 0.0, policy_tolerance(a, b), {}, terms, any_est);
  char buf[96];
  std::snprintf(buf, sizeof buf, "equality of %.12g and %.12g", a, b);
  r.note = buf;
  return r;
}

}  // namespace qnr
