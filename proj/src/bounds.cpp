#include "qnr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qnr/blockops.hpp"
#include "qnr/errors.hpp"
#include "qnr/funcalc.hpp"
#include "qnr/io.hpp"
#include "qnr/nrange.hpp"
#include "qnr/random.hpp"
#include "qnr/spectral.hpp"

namespace qnr {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPowerCondition = 1e6;

[[noreturn]] void precondition(const std::string& id, const std::string& what) {
  throw Error(ErrorKind::PreconditionFailed, id + ": " + what);
}

const ComplexMatrix& need(const std::optional<ComplexMatrix>& m, const std::string& id,
                          const char* name) {
  if (!m) precondition(id, std::string("operand ") + name + " is required");
  return *m;
}

void require_same_dim(const std::string& id, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) precondition(id, "operands must share one dimension");
}

Json q_json(cplx q) {
  if (q.imag() == 0.0) return q.real();
  return Json::array({q.real(), q.imag()});
}

Json base_inputs(const BoundInputs& in, const char* names = "ABCD") {
  Json j;
  for (auto [k, v] : in.context.items()) j[k] = v;
  j["q"] = q_json(in.q);
  if (in.t) j["t"] = *in.t;
  if (in.gamma) j["gamma"] = *in.gamma;
  j[std::string(1, names[0])] = matrix_to_json(in.a);
  if (in.b) j[std::string(1, names[1])] = matrix_to_json(*in.b);
  if (in.c) j[std::string(1, names[2])] = matrix_to_json(*in.c);
  if (in.d) j[std::string(1, names[3])] = matrix_to_json(*in.d);
  return j;
}

bool is_positive(const ComplexMatrix& m, const Tolerances& tol) {
  return is_hermitian(m, tol.eig_tol) && hermitian_eigenvalues(m, tol).back() >= -tol.psd_tol;
}

ComplexMatrix power_or_fail(const std::string& id, const ComplexMatrix& a, double t,
                            const Tolerances& tol) {
  try {
    return principal_power(a, t, tol, kPowerCondition);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Defective || e.kind() == ErrorKind::SpectrumNotSectorial) {
      precondition(id, std::string("fractional power unavailable: ") + e.what());
    }
    throw;
  }
}

double get_t(const BoundInputs& in, double fallback, double lo, double hi, const std::string& id) {
  const double t = in.t.value_or(fallback);
  if (!(t >= lo && t <= hi)) {
    precondition(id, "t = " + format_double(t) + " outside [" + format_double(lo) + ", " +
                         format_double(hi) + "]");
  }
  return t;
}

struct Ctx {
  const std::string& id;
  const BoundInputs& in;
  Evaluator& ev;
  double qa;
  double sq;  // sqrt(1 - |q|^2)
};

using Handler = std::function<std::vector<BoundCheckReport>(Ctx&)>;

// alpha for A (and optionally B) with the inputs JSON completed.
double sector_alpha(Ctx& c, Json& j, bool include_b = false) {
  double alpha = effective_alpha(c.in.a, c.in.alpha, c.ev.tol(), "A");
  if (include_b) {
    const ComplexMatrix& b = need(c.in.b, c.id, "B");
    alpha = std::max(alpha, effective_alpha(b, c.in.alpha, c.ev.tol(), "B"));
  }
  j["alpha"] = alpha;
  return alpha;
}

std::vector<BoundCheckReport> b1(Ctx& c) {
  if (!is_normaloid(c.in.a, c.ev.tol())) precondition(c.id, "T is not normaloid");
  ReportBuilder rb(c.id, base_inputs(c.in, "TBCD"));
  const Term wq = c.ev.wq(c.in.a, c.qa), w = c.ev.w(c.in.a);
  rb.leq("lower", c.qa * w.value, wq.value, {w}, {wq});
  rb.leq("upper", wq.value, w.value, {wq}, {w});
  return rb.take();
}

std::vector<BoundCheckReport> b2(Ctx& c) {
  ReportBuilder rb(c.id, base_inputs(c.in, "TBCD"));
  for (const auto& [name, part] :
       {std::pair{"R", real_part(c.in.a)}, std::pair{"I", imag_part(c.in.a)}}) {
    const double nrm = c.ev.norm(part);
    const Term wq = c.ev.wq(part, c.qa);
    rb.leq(std::string(name) + "-lower", c.qa * nrm, wq.value, {}, {wq});
    rb.leq(std::string(name) + "-upper", wq.value, nrm, {wq}, {});
  }
  return rb.take();
}

std::vector<BoundCheckReport> b3(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  ReportBuilder rb(c.id, j);
  const double nrm = c.ev.norm(c.in.a);
  const Term wq = c.ev.wq(c.in.a, c.qa);
  const double sector_lower = c.qa * std::cos(alpha) * nrm;
  const double baseline = c.qa / (2.0 * (2.0 - c.qa * c.qa)) * nrm;
  rb.leq("lower", sector_lower, wq.value, {}, {wq});
  rb.leq("upper", wq.value, nrm, {wq}, {});
  auto& r = rb.leq("baseline-lower", baseline, wq.value, {}, {wq});
  r.note = sector_lower > baseline   ? "sector lower bound is larger"
           : sector_lower < baseline ? "baseline lower bound is larger"
                                     : "lower bounds coincide";
  return rb.take();
}

std::vector<BoundCheckReport> b4(Ctx& c) {
  const Tolerances& tol = c.ev.tol();
  const ComplexMatrix a2 = c.in.a * c.in.a;
  const bool both = is_accretive(c.in.a, tol) && is_accretive(a2, tol);
  const bool ad = is_accretive_dissipative(c.in.a, tol);
  if (!both && !ad) precondition(c.id, "neither A and A^2 sectorial nor A accretive-dissipative");
  Json j = base_inputs(c.in);
  j["route"] = both ? "A and A^2 sectorial" : "accretive-dissipative";
  ReportBuilder rb(c.id, j);
  const Term wq = c.ev.wq(c.in.a, c.qa);
  rb.leq("lower", c.qa / std::sqrt(2.0) * c.ev.norm(c.in.a), wq.value, {}, {wq});
  return rb.take();
}

std::vector<BoundCheckReport> b5(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j, true);
  const ComplexMatrix& b = *c.in.b;
  require_same_dim(c.id, c.in.a, b);
  ReportBuilder rb(c.id, j);
  const Term wab = c.ev.wq(c.in.a * b, c.qa), wa = c.ev.wq(c.in.a, c.qa), wb = c.ev.wq(b, c.qa);
  const double sec = 1.0 / std::cos(alpha);
  rb.leq("product", c.qa * c.qa * wab.value, sec * sec * wa.value * wb.value, {wab}, {wa, wb});
  return rb.take();
}

std::vector<BoundCheckReport> b6(Ctx& c) {
  const ComplexMatrix& b = need(c.in.b, c.id, "B");
  require_same_dim(c.id, c.in.a, b);
  if (!is_positive(c.in.a, c.ev.tol())) precondition(c.id, "A is not positive");
  if (!is_positive(b, c.ev.tol())) precondition(c.id, "B is not positive");
  ReportBuilder rb(c.id, base_inputs(c.in));
  const Term wab = c.ev.wq(c.in.a * b, c.qa), wa = c.ev.wq(c.in.a, c.qa), wb = c.ev.wq(b, c.qa);
  rb.leq("scaled-product", c.qa * c.qa * wab.value, wa.value * wb.value, {wab}, {wa, wb});
  auto& r = rb.leq("unscaled-product", wab.value, wa.value * wb.value, {wab}, {wa, wb});
  r.informational = true;
  r.note = "w_q(AB) <= w_q(A) w_q(B) is not claimed; shown for comparison";
  return rb.take();
}

std::vector<BoundCheckReport> b7(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  ReportBuilder rb(c.id, j);
  const Term wq = c.ev.wq(c.in.a, c.qa), w = c.ev.w(c.in.a);
  const double s2 = std::pow(std::sin(alpha), 2);
  const double k = std::sqrt((1.0 - c.qa * c.qa) * (1.0 + 2.0 * s2)) + c.qa;
  rb.leq("upper", wq.value, k * w.value, {wq}, {w});
  return rb.take();
}

std::vector<BoundCheckReport> b8(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  ReportBuilder rb(c.id, j);
  const Term wq = c.ev.wq(c.in.a, c.qa), w = c.ev.w(c.in.a);
  rb.leq("upper", wq.value, std::sqrt(1.0 + std::pow(std::sin(alpha), 2)) * w.value, {wq}, {w});
  return rb.take();
}

std::vector<BoundCheckReport> b9(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  ReportBuilder rb(c.id, j);
  const ComplexMatrix& a = c.in.a;
  const double m = c.ev.norm(a.adjoint() * a + a * a.adjoint());
  const Term wq = c.ev.wq(a, c.qa);
  const double w2 = wq.value * wq.value;
  const double s2 = std::pow(std::sin(alpha), 2);
  const double k = std::sqrt((1.0 - c.qa * c.qa) * (1.0 + 2.0 * s2)) + c.qa;
  rb.leq("lower", c.qa * c.qa * std::pow(std::cos(alpha), 2) / 2.0 * m, w2, {}, {wq});
  rb.leq("upper", w2, k * k * m / 2.0, {wq}, {});
  return rb.take();
}

std::vector<BoundCheckReport> b10(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  const ComplexMatrix& a = c.in.a;
  const ComplexMatrix& b = need(c.in.b, c.id, "B");
  const ComplexMatrix& cm = need(c.in.c, c.id, "C");
  const ComplexMatrix& d = need(c.in.d, c.id, "D");
  require_same_dim(c.id, a, b);
  require_same_dim(c.id, a, cm);
  require_same_dim(c.id, a, d);
  ReportBuilder rb(c.id, j);
  const Term wa = c.ev.wq(a, c.qa);
  const double rhs = 2.0 / std::cos(alpha) * std::max(c.ev.norm(cm), c.ev.norm(d)) * wa.value *
                     c.ev.norm(b);
  const ComplexMatrix acb = a * cm * b, bda = b * d * a;
  const Term plus = c.ev.wq(acb + bda, c.qa), minus = c.ev.wq(acb - bda, c.qa);
  rb.leq("plus", c.qa * plus.value, rhs, {plus}, {wa});
  rb.leq("minus", c.qa * minus.value, rhs, {minus}, {wa});
  return rb.take();
}

std::vector<BoundCheckReport> b11(Ctx& c) {
  if (c.qa == 0.0) precondition(c.id, "q must be nonzero");
  Json j = base_inputs(c.in);
  const double alpha_a = sector_alpha(c, j);
  const ComplexMatrix& a = c.in.a;
  const ComplexMatrix& b = need(c.in.b, c.id, "B");
  require_same_dim(c.id, a, b);
  const Term wa = c.ev.wq(a, c.qa);
  const ComplexMatrix ab = a * b, ba = b * a;
  const Term plus = c.ev.wq(ab + ba, c.qa), minus = c.ev.wq(ab - ba, c.qa);

  std::optional<double> alpha_b;
  try {
    alpha_b = effective_alpha(b, c.in.alpha, c.ev.tol(), "B");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PreconditionFailed) throw;
  }
  if (alpha_b) j["alpha_pair"] = std::max(alpha_a, *alpha_b);
  ReportBuilder rb(c.id, j);

  const double rhs = 2.0 / c.qa / std::cos(alpha_a) * wa.value * c.ev.norm(b);
  rb.leq("plus", plus.value, rhs, {plus}, {wa});
  rb.leq("minus", minus.value, rhs, {minus}, {wa});
  if (alpha_b) {
    const double alpha = std::max(alpha_a, *alpha_b);
    const Term wb = c.ev.wq(b, c.qa);
    const double m = 2.0 / std::cos(alpha) *
                     std::min(wa.value * c.ev.norm(b), wb.value * c.ev.norm(a));
    rb.leq("min-plus", c.qa * plus.value, m, {plus}, {wa, wb});
    rb.leq("min-minus", c.qa * minus.value, m, {minus}, {wa, wb});
  }
  return rb.take();
}

std::vector<BoundCheckReport> b12(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  const double t = get_t(c.in, 0.5, 0.0, 1.0, c.id);
  j["t"] = t;
  const ComplexMatrix at = power_or_fail(c.id, c.in.a, t, c.ev.tol());
  ReportBuilder rb(c.id, j);
  const Term wa = c.ev.wq(c.in.a, c.qa), wat = c.ev.wq(at, c.qa);
  const double wat_scaled = std::pow(c.qa, t) * wat.value;
  const double wa_t = std::pow(wa.value, t);
  rb.leq("lower", std::pow(c.qa, t + 1) * std::pow(std::cos(alpha), t) * wa_t, wat_scaled, {wa},
         {wat});
  rb.leq("upper", wat_scaled,
         std::pow(1.0 / std::cos(alpha), 2 * t) / std::cos(t * alpha) * wa_t, {wat}, {wa});
  return rb.take();
}

std::vector<BoundCheckReport> b13(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  const double t = get_t(c.in, 0.5, 0.0, 1.0, c.id);
  j["t"] = t;
  const ComplexMatrix ainv_t = power_or_fail(c.id, c.in.a, -t, c.ev.tol());
  ReportBuilder rb(c.id, j);
  const Term wa = c.ev.wq(c.in.a, c.qa), wi = c.ev.wq(ainv_t, c.qa);
  const double lhs = std::pow(c.qa, t + 1) * std::cos(t * alpha) *
                     std::pow(std::cos(alpha), 2 * t) * std::pow(wa.value, -t);
  rb.leq("lower", lhs, wi.value, {wa}, {wi});
  return rb.take();
}

std::vector<BoundCheckReport> b14(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  ReportBuilder rb(c.id, j);
  const Term w = c.ev.w(c.in.a);
  rb.leq("imaginary-part", c.ev.norm(imag_part(c.in.a)), std::sin(alpha) * w.value, {}, {w});
  return rb.take();
}

std::vector<BoundCheckReport> b15(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  ReportBuilder rb(c.id, j);
  const Term w = c.ev.w(c.in.a);
  rb.leq("norm", c.ev.norm(c.in.a), std::sqrt(1.0 + 2.0 * std::pow(std::sin(alpha), 2)) * w.value,
         {}, {w});
  return rb.take();
}

std::vector<BoundCheckReport> b16(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  ReportBuilder rb(c.id, j);
  const double na = c.ev.norm(c.in.a), nr = c.ev.norm(real_part(c.in.a));
  rb.leq("lower", std::cos(alpha) * na, nr);
  rb.leq("upper", nr, na);
  return rb.take();
}

std::vector<BoundCheckReport> b17(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  const double t = get_t(c.in, 0.5, 0.0, 1.0, c.id);
  j["t"] = t;
  const ComplexMatrix at = power_or_fail(c.id, c.in.a, t, c.ev.tol());
  ReportBuilder rb(c.id, j);
  double angle = 0.0;
  try {
    angle = sector_angle(at, c.ev.tol()).alpha;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotAccretive) throw;
    angle = std::numbers::pi / 2;
  }
  rb.leq_tol("sector", angle, t * alpha, 1e-6);
  return rb.take();
}

std::vector<BoundCheckReport> loewner_chain(Ctx& c, bool negative) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  const double t = negative ? get_t(c.in, -0.5, -1.0, 0.0, c.id) : get_t(c.in, 0.5, 0.0, 1.0, c.id);
  j["t"] = t;
  const Tolerances& tol = c.ev.tol();
  const ComplexMatrix r_at = real_part(power_or_fail(c.id, c.in.a, t, tol));
  const ComplexMatrix rt = apply_spectral_function(real_part(c.in.a), SpectralFunction::power(t), tol);
  const ComplexMatrix scaled = r_at * cplx(std::pow(std::cos(alpha), 2 * t));
  ReportBuilder rb(c.id, j);
  if (!negative) {
    rb.leq_tol("scaled-below-power", 0.0, loewner_margin(rt, scaled, tol), tol.psd_tol).note =
        "lambda_min((R(A))^t - cos^{2t}(alpha) R(A^t))";
    rb.leq_tol("power-below-real", 0.0, loewner_margin(r_at, rt, tol), tol.psd_tol).note =
        "lambda_min(R(A^t) - (R(A))^t)";
  } else {
    rb.leq_tol("real-below-power", 0.0, loewner_margin(rt, r_at, tol), tol.psd_tol).note =
        "lambda_min((R(A))^t - R(A^t))";
    rb.leq_tol("power-below-scaled", 0.0, loewner_margin(scaled, rt, tol), tol.psd_tol).note =
        "lambda_min(cos^{2t}(alpha) R(A^t) - (R(A))^t)";
  }
  return rb.take();
}

std::vector<BoundCheckReport> b20(Ctx& c) {
  if (!is_positive(c.in.a, c.ev.tol())) precondition(c.id, "A is not positive");
  Json j = base_inputs(c.in);
  const double t = get_t(c.in, 0.5, 0.0, 1.0, c.id);
  j["t"] = t;
  const ComplexMatrix at = apply_spectral_function(c.in.a, SpectralFunction::power(t), c.ev.tol());
  ReportBuilder rb(c.id, j);
  const double nt = std::pow(c.ev.norm(c.in.a), t);
  const Term wat = c.ev.wq(at, c.qa);
  rb.leq("lower", std::pow(c.qa, t + 2) * nt, c.qa * wat.value, {}, {wat});
  rb.leq("upper", c.qa * wat.value, nt, {wat}, {});
  return rb.take();
}

std::vector<BoundCheckReport> b21(Ctx& c) {
  Json j = base_inputs(c.in);
  const double alpha = sector_alpha(c, j);
  const ComplexMatrix ainv = inverse(c.in.a);
  ReportBuilder rb(c.id, j);
  const Term wa = c.ev.wq(c.in.a, c.qa), wi = c.ev.wq(ainv, c.qa);
  rb.leq("lower", c.qa * c.qa * std::pow(std::cos(alpha), 3) / wa.value, wi.value, {wa}, {wi});
  return rb.take();
}

std::vector<BoundCheckReport> b22(Ctx& c) {
  ReportBuilder rb(c.id, base_inputs(c.in, "TBCD"));
  const ComplexMatrix& t = c.in.a;
  const double m = c.ev.norm(t.adjoint() * t + t * t.adjoint());
  const Term wq = c.ev.wq(t, c.qa);
  const double w2 = wq.value * wq.value;
  const double r = c.qa / (2.0 - c.qa * c.qa);
  const double k = c.qa + 2.0 * c.sq;
  rb.leq("lower", 0.25 * r * r * m, w2, {}, {wq});
  rb.leq("upper", w2, k * k / 2.0 * m, {wq}, {});
  return rb.take();
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"B1", b1},   {"B2", b2},   {"B3", b3},   {"B4", b4},   {"B5", b5},   {"B6", b6},
      {"B7", b7},   {"B8", b8},   {"B9", b9},   {"B10", b10}, {"B11", b11}, {"B12", b12},
      {"B13", b13}, {"B14", b14}, {"B15", b15}, {"B16", b16}, {"B17", b17},
      {"B18", [](Ctx& c) { return loewner_chain(c, false); }},
      {"B19", [](Ctx& c) { return loewner_chain(c, true); }},
      {"B20", b20}, {"B21", b21}, {"B22", b22}};
  return h;
}

}  // namespace

const std::vector<std::string>& bound_registry() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (int k = 1; k <= 22; ++k) v.push_back("B" + std::to_string(k));
    for (int k = 1; k <= 14; ++k) v.push_back("K" + std::to_string(k));
    return v;
  }();
  return ids;
}

std::vector<std::string> parse_bound_list(const std::string& spec) {
  const auto& reg = bound_registry();
  auto index_of = [&](const std::string& id) {
    const auto it = std::find(reg.begin(), reg.end(), id);
    if (it == reg.end()) throw Error(ErrorKind::UnknownBound, "unknown bound id '" + id + "'");
    return static_cast<std::size_t>(it - reg.begin());
  };
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    std::string tok = spec.substr(pos, comma - pos);
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok == "all") {
      out.insert(out.end(), reg.begin(), reg.end());
    } else if (const auto dots = tok.find(".."); dots != std::string::npos) {
      const std::size_t lo = index_of(tok.substr(0, dots)), hi = index_of(tok.substr(dots + 2));
      if (hi < lo || reg[lo][0] != reg[hi][0]) {
        throw Error(ErrorKind::UnknownBound, "bad bound range '" + tok + "'");
      }
      for (std::size_t k = lo; k <= hi; ++k) out.push_back(reg[k]);
    } else if (!tok.empty()) {
      out.push_back(reg[index_of(tok)]);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw Error(ErrorKind::UnknownBound, "empty bound list");
  return out;
}

double effective_alpha(const ComplexMatrix& a, std::optional<double> alpha_override,
                       const Tolerances& tol, const char* name) {
  double cert = 0.0;
  try {
    cert = sector_angle(a, tol).alpha;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotAccretive) throw;
    throw Error(ErrorKind::PreconditionFailed, std::string(name) + " is not sectorial: " + e.what());
  }
  if (!alpha_override) return cert;
  const double a_user = *alpha_override;
  if (!(a_user >= 0.0 && a_user < std::numbers::pi / 2)) {
    throw Error(ErrorKind::InvalidInput, "alpha must lie in [0, pi/2)");
  }
  if (a_user + 1e-9 < cert) {
    throw Error(ErrorKind::PreconditionFailed,
                std::string(name) + " is not in S_alpha: certified angle " + format_double(cert) +
                    " exceeds supplied " + format_double(a_user));
  }
  return std::max(a_user, cert);
}

std::vector<BoundCheckReport> evaluate_bound(const std::string& id, const BoundInputs& in,
                                             Evaluator& ev) {
  validate_q(in.q);
  if (!id.empty() && id[0] == 'K') return check_block_bound(id, in, ev);
  const auto& h = handlers();
  const auto it = h.find(id);
  if (it == h.end()) throw Error(ErrorKind::UnknownBound, "unknown bound id '" + id + "'");
  const double qa = std::min(1.0, std::abs(in.q));
  Ctx ctx{id, in, ev, qa, std::sqrt(std::max(0.0, 1.0 - qa * qa))};
  return it->second(ctx);
}

SectorialSample generate_sectorial(std::size_t n, double alpha, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "generate_sectorial needs n >= 2");
  if (!(alpha >= 0.0 && alpha < std::numbers::pi / 2)) {
    throw Error(ErrorKind::InvalidInput, "alpha must lie in [0, pi/2)");
  }
  Rng rng = make_rng(seed);
  const ComplexMatrix g = gaussian_matrix(rng, n);
  ComplexMatrix h = real_part(g.adjoint() * g);
  for (std::size_t i = 0; i < n; ++i) h(i, i) += 0.1;
  ComplexMatrix k = real_part(gaussian_matrix(rng, n));
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

  ComplexMatrix a = h;
  if (alpha > 0.0) {
    const ComplexMatrix hinv = apply_spectral_function(h, SpectralFunction::power(-0.5));
    const auto ev = hermitian_eigenvalues(real_part(hinv * k * hinv));
    const double m = std::max(std::abs(ev.front()), std::abs(ev.back()));
    if (m > 0.0) {
      k *= cplx(u * std::tan(alpha) / m);
      a = h + cplx(0.0, 1.0) * k;
    }
  }
  SectorialSample s;
  s.matrix = std::move(a);
  s.alpha_target = alpha;
  s.alpha_certified = sector_angle(s.matrix).alpha;
  s.seed = seed;
  return s;
}

namespace {

ComplexMatrix normal_companion(const ComplexMatrix& a, Rng& rng) {
  const ComplexMatrix u = random_unitary(rng, a.dim());
  ComplexMatrix d(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Vector ui = column(u, i);
    d(i, i) = inner(a * std::span<const cplx>(ui), ui);
  }
  return u * d * u.adjoint();
}

}  // namespace

FuzzTrial fuzz_trial(const FuzzConfig& cfg, int index) {
  if (cfg.q_grid.empty()) throw Error(ErrorKind::InvalidInput, "q grid is empty");
  Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(index));
  const auto n = std::uniform_int_distribution<std::size_t>(cfg.n_min, cfg.n_max)(rng);
  const double alpha = std::uniform_real_distribution<double>(cfg.alpha_min, cfg.alpha_max)(rng);
  const double q = cfg.q_grid[static_cast<std::size_t>(index) % cfg.q_grid.size()];
  static constexpr double kTs[] = {0.25, 0.5, 0.75};
  const double t = kTs[std::uniform_int_distribution<int>(0, 2)(rng)];
  const double gamma = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const std::uint64_t seed_a = rng(), seed_b = rng(), seed_eval = rng();

  const SectorialSample sa = generate_sectorial(n, alpha, seed_a);
  const SectorialSample sb = generate_sectorial(n, alpha, seed_b);
  const ComplexMatrix gb = gaussian_matrix(rng, n), gc = gaussian_matrix(rng, n),
                      gd = gaussian_matrix(rng, n);
  const ComplexMatrix normal = normal_companion(sa.matrix, rng);
  const ComplexMatrix ra = real_part(sa.matrix), rbm = real_part(sb.matrix);

  EvaluatorOptions eo;
  eo.restarts = cfg.restarts;
  eo.seed = seed_eval;
  eo.tol = cfg.tol;
  Evaluator ev(eo);

  nlohmann::ordered_json ctx;
  ctx["trial"] = index;
  ctx["seed"] = cfg.seed;
  ctx["n"] = n;
  ctx["alpha_target"] = alpha;

  FuzzTrial out;
  out.index = index;
  for (const std::string& id : cfg.bound_ids) {
    BoundInputs in;
    in.q = q;
    in.context = ctx;
    in.gamma = gamma;
    in.a = sa.matrix;
    if (id == "B1") {
      in.a = normal;
    } else if (id == "B6" || id == "B20" || id == "K13") {
      in.a = ra;
      in.b = rbm;
    } else if (id == "B10") {
      in.b = gb;
      in.c = gc;
      in.d = gd;
    } else {
      in.b = sb.matrix;
    }
    if (id == "B19") {
      in.t = -t;
    } else if (id == "B12" || id == "B13" || id == "B17" || id == "B18" || id == "B20") {
      in.t = t;
    }
    try {
      auto reps = evaluate_bound(id, in, ev);
      for (auto& r : reps) out.reports.push_back(std::move(r));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PreconditionFailed) throw;
      out.skipped.emplace_back(id, e.what());
    }
  }
  return out;
}

void tally(const FuzzTrial& trial, std::map<std::string, FuzzTally>& summary) {
  for (const auto& r : trial.reports) {
    FuzzTally& t = summary[r.bound_id];
    if (r.informational) {
      ++t.informational;
    } else if (r.status == CheckStatus::Pass) {
      ++t.pass;
    } else if (r.status == CheckStatus::Fail) {
      ++t.fail;
    } else {
      ++t.indeterminate;
    }
  }
  for (const auto& [id, why] : trial.skipped) ++summary[id].skipped;
}

FuzzResult fuzz(const FuzzConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be >= 1");
  FuzzResult res;
  for (const auto& id : cfg.bound_ids) res.summary[id];
  for (int i = 0; i < cfg.trials; ++i) {
    res.trials.push_back(fuzz_trial(cfg, i));
    tally(res.trials.back(), res.summary);
  }
  return res;
}

nlohmann::ordered_json summary_json(const std::map<std::string, FuzzTally>& summary) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& id : bound_registry()) {
    const auto it = summary.find(id);
    if (it == summary.end()) continue;
    const FuzzTally& t = it->second;
    j[id] = {{"pass", t.pass},
             {"fail", t.fail},
             {"indeterminate", t.indeterminate},
             {"skipped", t.skipped},
             {"informational", t.informational}};
  }
  return j;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw Error(ErrorKind::InvalidInput, "grid needs start <= stop and step > 0");
  }
  std::vector<double> g;
  const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
  if (count > 10'000'000) throw Error(ErrorKind::InvalidInput, "grid is too large");
  for (long long k = 0; k <= count; ++k) g.push_back(start + static_cast<double>(k) * step);
  return g;
}

namespace {

template <class F>
std::optional<double> first_sign_drop(const std::vector<double>& grid, F diff) {
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double d0 = diff(grid[k]), d1 = diff(grid[k + 1]);
    if (d0 >= 0.0 && d1 < 0.0) {
      double lo = grid[k], hi = grid[k + 1];
      while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (diff(mid) >= 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return std::nullopt;
}

}  // namespace

ThresholdCurve threshold_curve(double alpha, const std::vector<double>& q_grid) {
  for (double q : q_grid) {
    if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::InvalidInput, "q grid must lie in [0, 1]");
  }
  const double s2 = std::pow(std::sin(alpha), 2);
  const double f1 = std::sqrt(1.0 + s2);
  auto f2 = [&](double q) { return std::sqrt((1.0 - q * q) * (1.0 + 2.0 * s2)) + q; };
  ThresholdCurve c;
  c.alpha = alpha;
  for (double q : q_grid) {
    c.q.push_back(q);
    c.f1.push_back(f1);
    c.f2.push_back(f2(q));
  }
  c.crossover = first_sign_drop(q_grid, [&](double q) { return f2(q) - f1; });
  return c;
}

std::optional<double> inverse_crossover(const ComplexMatrix& a, const std::vector<double>& q_grid) {
  if (!is_hermitian(a, Tolerances{}.eig_tol) || !(hermitian_eigenvalues(a).back() > 0.0)) {
    throw Error(ErrorKind::PreconditionFailed, "inverse crossover needs a positive definite matrix");
  }
  const auto ev = hermitian_eigenvalues(a);
  const auto evi = hermitian_eigenvalues(inverse(a));
  // sign of 1/w_q(A) - w_q(A^{-1}); positive while w_q(A^{-1}) <= w_q^{-1}(A)
  return first_sign_drop(q_grid, [&](double q) {
    return 1.0 / q_radius_hermitian(ev, q) - q_radius_hermitian(evi, q);
  });
}

}  // namespace qnr
