#include "qnr/blockops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qnr/errors.hpp"
#include "qnr/funcalc.hpp"
#include "qnr/io.hpp"
#include "qnr/nrange.hpp"

namespace qnr {

Block2x2 make_block(const ComplexMatrix& z, const ComplexMatrix& x, const ComplexMatrix& y,
                    const ComplexMatrix& w) {
  return {z, x, y, w, assemble_blocks(z, x, y, w)};
}

Block2x2 make_offdiag(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.dim() != y.dim()) throw Error(ErrorKind::DimensionMismatch, "X and Y differ in size");
  const ComplexMatrix zero(x.dim());
  return make_block(zero, x, y, zero);
}

Block2x2 make_symmetric_pair(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.dim() != y.dim()) throw Error(ErrorKind::DimensionMismatch, "X and Y differ in size");
  return make_block(x, y, y, x);
}

double offdiag_hermitian_closed_form(const std::vector<double>& ev, cplx q) {
  validate_q(q);
  const double qa = std::min(1.0, std::abs(q));
  const double l1 = ev.front(), ln = ev.back();
  const double lmax = std::max(-ln, l1), lmin = std::min(-l1, ln);
  auto generic = [&](double hi, double lo) {
    return 0.5 * qa * std::abs(hi + lo) + 0.5 * std::abs(hi - lo);
  };
  if (lmax == l1 && lmin == ln) return generic(l1, ln);
  if (lmax == -ln && lmin == -l1) return generic(-ln, -l1);
  if (lmax == l1 && lmin == -l1) return std::abs(l1);
  return std::abs(ln);
}

double offdiag_hermitian_closed_form(const HermitianSpectrum& spectrum, cplx q) {
  return offdiag_hermitian_closed_form(spectrum.eigenvalues, q);
}

ComplexMatrix square_zero_from(const ComplexMatrix& x, const Tolerances& tol) {
  const std::size_t n = x.dim();
  if ((x * x).frobenius_norm() <= tol.eig_tol * (1.0 + x.frobenius_norm() * x.frobenius_norm())) {
    return x;
  }
  if (n < 2) throw Error(ErrorKind::DimensionTooSmall, "square-zero construction needs n >= 2");
  Vector u = column(x, 0), v = column(x, 1);
  const double un = norm(u);
  if (un == 0.0) u[0] = 1.0;
  const double uu = norm(u) * norm(u);
  const cplx c = inner(v, u) / uu;
  for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
  if (norm(v) <= 1e-12 * norm(u)) {
    v.assign(n, 0.0);
    v[u[0] == cplx(0.0) ? 0 : 1] = 1.0;
    const cplx c2 = inner(v, u) / uu;
    for (std::size_t i = 0; i < n; ++i) v[i] -= c2 * u[i];
  }
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void precondition(const std::string& id, const std::string& what) {
  throw Error(ErrorKind::PreconditionFailed, id + ": " + what);
}

Json block_inputs(const BoundInputs& in) {
  Json j;
  for (auto [k, v] : in.context.items()) j[k] = v;
  if (in.q.imag() == 0.0) {
    j["q"] = in.q.real();
  } else {
    j["q"] = Json::array({in.q.real(), in.q.imag()});
  }
  if (in.gamma) j["gamma"] = *in.gamma;
  j["X"] = matrix_to_json(in.a);
  if (in.b) j["Y"] = matrix_to_json(*in.b);
  return j;
}

const ComplexMatrix& need_y(const BoundInputs& in, const std::string& id) {
  if (!in.b) precondition(id, "operand Y is required");
  if (in.b->dim() != in.a.dim()) precondition(id, "X and Y must share one dimension");
  return *in.b;
}

bool positive(const ComplexMatrix& m, const Tolerances& tol) {
  return is_hermitian(m, tol.eig_tol) && hermitian_eigenvalues(m, tol).back() >= -tol.psd_tol;
}

// Golden-section maximization of f on [lo, hi].
template <class F>
double golden_max(F f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 >= f2) {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - invphi * (hi - lo), f1 = f(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + invphi * (hi - lo), f2 = f(x2);
    }
  }
  return std::max({f1, f2, f(0.5 * (lo + hi))});
}

// min over lambda in [0, top] of max(||G1 - lambda I||, ||G2 - lambda I||).
double min_over_lambda(const ComplexMatrix& g1, const ComplexMatrix& g2, double top) {
  auto shifted = [](const ComplexMatrix& g, double l) {
    ComplexMatrix m = g;
    for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) -= l;
    return operator_norm(m);
  };
  auto phi = [&](double l) { return std::max(shifted(g1, l), shifted(g2, l)); };
  constexpr int kGrid = 64;
  if (!(top > 0.0)) return phi(0.0);
  double best = phi(0.0);
  int best_k = 0;
  for (int k = 1; k < kGrid; ++k) {
    const double v = phi(top * k / (kGrid - 1));
    if (v < best) best = v, best_k = k;
  }
  const double h = top / (kGrid - 1);
  const double lo = std::max(0.0, h * (best_k - 1)), hi = std::min(top, h * (best_k + 1));
  const double refined = -golden_max([&](double l) { return -phi(l); }, lo, hi, 1e-12 * (1.0 + top));
  return std::min(best, refined);
}

struct FgFamily {
  std::string name;
  SpectralFunction f, g;
};

std::vector<FgFamily> families(const BoundInputs& in) {
  const double gamma = in.gamma.value_or(0.5);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorKind::InvalidInput, "gamma must lie in [0, 1]");
  return {{"power-gamma", SpectralFunction::power(gamma), SpectralFunction::power(1.0 - gamma)},
          {"ratio", SpectralFunction::ratio(), SpectralFunction::shift()}};
}

ComplexMatrix lift(const ComplexMatrix& h, SpectralFunction f, int power, const Tolerances& tol) {
  ComplexMatrix m = apply_spectral_function(h, f, tol);
  ComplexMatrix out = m;
  for (int k = 1; k < power; ++k) out = real_part(out * m);
  return out;
}

std::vector<BoundCheckReport> non_negative(const std::string& id, const BoundInputs& in,
                                           Evaluator& ev, bool squared) {
  const ComplexMatrix& x = in.a;
  const ComplexMatrix& y = need_y(in, id);
  const Tolerances& tol = ev.tol();
  const double qa = std::min(1.0, std::abs(in.q));
  const double s = std::sqrt(std::max(0.0, 1.0 - qa * qa));
  const ComplexMatrix ax = matrix_abs(x, tol), ay = matrix_abs(y, tol);
  const ComplexMatrix axs = matrix_abs(x.adjoint(), tol), ays = matrix_abs(y.adjoint(), tol);
  const Term wt = ev.wq(make_offdiag(x, y).assembled, qa);
  const int p = squared ? 4 : 2;

  Json j = block_inputs(in);
  ReportBuilder rb(id, j);
  for (const FgFamily& fam : families(in)) {
    const ComplexMatrix fy = lift(ay, fam.f, p, tol), fx = lift(ax, fam.f, p, tol);
    const ComplexMatrix gxs = lift(axs, fam.g, p, tol), gys = lift(ays, fam.g, p, tol);
    const double first = 0.5 * std::max(operator_norm(fy + gxs * cplx(qa * qa)),
                                        operator_norm(fx + gys * cplx(qa * qa)));
    const double gx1 = operator_norm(apply_spectral_function(axs, fam.g, tol));
    const double gy1 = operator_norm(apply_spectral_function(ays, fam.g, tol));
    const double second = (1.0 - qa * qa) / 2.0 * std::pow(std::max(gx1, gy1), p);
    const double top = std::max(operator_norm(gxs), operator_norm(gys));
    const double third = qa * s * min_over_lambda(gxs, gys, top);
    const double lhs = squared ? wt.value * wt.value : wt.value;
    auto& r = rb.leq(fam.name, lhs, first + second + third, {wt}, {});
    r.note = "lambda minimized over [0, " + format_double(top) + "]";
  }
  return rb.take();
}

double sup_theta_norm(const ComplexMatrix& x, const ComplexMatrix& ys) {
  auto phi = [&](double th) {
    const cplx e = std::polar(1.0, th);
    return operator_norm(x * e + ys * std::conj(e));
  };
  constexpr int kGrid = kDefaultThetaGrid;
  const double h = 2.0 * std::numbers::pi / kGrid;
  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k < kGrid; ++k) {
    const double v = phi(h * k);
    if (v > best) best = v, best_k = k;
  }
  return std::max(best, golden_max(phi, h * (best_k - 1), h * (best_k + 1), 1e-10));
}

std::vector<BoundCheckReport> k3(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  Json j = block_inputs(in);
  ComplexMatrix a = in.a;
  std::string note;
  if (!is_hermitian(a, ev.tol().eig_tol)) {
    a = real_part(a);
    note = "X is not hermitian; evaluated on R(X)";
    j["X_used"] = matrix_to_json(a);
  }
  const auto spec = hermitian_eigen(a, ev.tol());
  const double closed = offdiag_hermitian_closed_form(spec, in.q);
  const Term est = ev.wq(make_offdiag(a, a).assembled, in.q, true);
  ReportBuilder rb(id, j);
  auto& r1 = rb.equal("closed-form-vs-estimate", closed, est.value, {est});
  if (!note.empty()) r1.note += "; " + note;
  auto& r2 = rb.leq("dominates-hermitian", q_radius_hermitian(spec, in.q), closed);
  r2.note = note;
  return rb.take();
}

std::vector<BoundCheckReport> k4(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& x = in.a;
  const ComplexMatrix& y = need_y(in, id);
  const double qa = std::min(1.0, std::abs(in.q));
  const Term wt = ev.wq(make_symmetric_pair(x, y).assembled, qa);
  const Term wm = ev.wq(x - y, qa), wp = ev.wq(x + y, qa);
  ReportBuilder rb(id, block_inputs(in));
  const double lower = std::max(wm.value, wp.value);
  rb.leq("lower", lower, wt.value, {wm, wp}, {wt});
  rb.leq("upper", wt.value, std::max(ev.norm(x - y), ev.norm(x + y)), {wt}, {}).note =
      "upper bound read as max{||X-Y||, ||X+Y||}";
  return rb.take();
}

std::vector<BoundCheckReport> k5(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& x = in.a;
  const ComplexMatrix& y = need_y(in, id);
  const double qa = std::min(1.0, std::abs(in.q));
  const Term wt = ev.wq(make_offdiag(x, y).assembled, qa);
  const Term wp = ev.wq(x + y, qa), wm = ev.wq(x - y, qa);
  ReportBuilder rb(id, block_inputs(in));
  rb.leq("lower", 0.5 * std::max(wp.value, wm.value), wt.value, {wp, wm}, {wt});
  rb.leq("upper", wt.value, 0.5 * (ev.norm(x + y) + ev.norm(x - y)), {wt}, {});
  return rb.take();
}

std::vector<BoundCheckReport> k6(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& x = in.a;
  const Tolerances& tol = ev.tol();
  const double qa = std::min(1.0, std::abs(in.q));
  const ComplexMatrix rx = real_part(x), ix = imag_part(x);
  const double nr = ev.norm(rx), ni = ev.norm(ix);
  Json j = block_inputs(in);
  ReportBuilder rb(id, j);

  const Term wa = ev.wq(make_offdiag(x, x.adjoint()).assembled, qa);
  rb.leq("a-lower", qa * std::max(nr, ni), wa.value, {}, {wa});
  rb.leq("a-upper", wa.value, nr + ni, {wa}, {});

  const Term wb = ev.wq(make_offdiag(rx, ix).assembled, qa);
  const Term wx = ev.wq(x, qa), wxs = ev.wq(x.adjoint(), qa);
  rb.leq("b-lower", wx.value, wb.value, {wx}, {wb});
  rb.leq("b-lower-halved", 0.5 * std::max(wx.value, wxs.value), wb.value, {wx, wxs}, {wb}).note =
      "(1/2) max{w_q(X), w_q(X^*)} from the rotated midpoint bound";
  rb.leq("b-upper", wb.value, ev.norm(x), {wb}, {});

  ComplexMatrix h = x;
  std::string hnote;
  if (!is_hermitian(x, tol.eig_tol)) {
    h = rx;
    hnote = "X is not hermitian; evaluated on R(X)";
  }
  const Term wc = ev.wq(make_offdiag(h, h).assembled, qa);
  const double nh = ev.norm(h);
  rb.leq("c-lower", qa * nh, wc.value, {}, {wc}).note = hnote;
  rb.leq("c-upper", wc.value, nh, {wc}, {}).note = hnote;

  const ComplexMatrix z = square_zero_from(x, tol);
  const std::string znote = (z == x) ? "" : "X^2 != 0; evaluated on a square-zero matrix built from X";
  const double nrz = ev.norm(real_part(z));
  const Term wd = ev.wq(make_offdiag(z, z.adjoint()).assembled, qa);
  rb.leq("d-lower", qa * nrz, wd.value, {}, {wd}).note = znote;
  rb.leq("d-upper", wd.value, 2.0 * nrz, {wd}, {}).note = znote;
  auto out = rb.take();
  if (!znote.empty()) {
    for (auto& r : out) {
      if (r.clause[0] == 'd') r.inputs["X_square_zero"] = matrix_to_json(z);
    }
  }
  return out;
}

std::vector<BoundCheckReport> k9(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& x = in.a;
  const ComplexMatrix& y = need_y(in, id);
  const double qa = std::min(1.0, std::abs(in.q));
  const Term wt = ev.wq(make_offdiag(x, y).assembled, qa);
  const ComplexMatrix ys = y.adjoint();
  const double lhs = qa / 2.0 * std::max(ev.norm(x), ev.norm(y)) +
                     qa / 4.0 * std::abs(ev.norm(x + ys) - ev.norm(x - ys));
  ReportBuilder rb(id, block_inputs(in));
  rb.leq("lower", lhs, wt.value, {}, {wt}).note = "|q| used in both terms";
  return rb.take();
}

std::vector<BoundCheckReport> k10(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& x = in.a;
  const ComplexMatrix& y = need_y(in, id);
  const double qa = std::min(1.0, std::abs(in.q));
  const Term wt = ev.wq(make_offdiag(x, y).assembled, qa);
  ReportBuilder rb(id, block_inputs(in));
  rb.leq("lower", qa / 2.0 * sup_theta_norm(x, y.adjoint()), wt.value, {}, {wt});
  return rb.take();
}

std::vector<BoundCheckReport> k11(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& x = in.a;
  const ComplexMatrix& y = need_y(in, id);
  const Tolerances& tol = ev.tol();
  const double qa = std::min(1.0, std::abs(in.q));
  const double gamma = in.gamma.value_or(0.5);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorKind::InvalidInput, "gamma must lie in [0, 1]");
  const ComplexMatrix ax = matrix_abs(x, tol), ay = matrix_abs(y, tol);
  const ComplexMatrix axs = matrix_abs(x.adjoint(), tol), ays = matrix_abs(y.adjoint(), tol);
  auto pw = [&](const ComplexMatrix& m, double e) {
    return apply_spectral_function(m, SpectralFunction::power(e), tol);
  };
  const double n1 = operator_norm(pw(ax, 2 * gamma) + pw(ays, 2 * (1 - gamma)));
  const double n2 = operator_norm(pw(axs, 2 * (1 - gamma)) + pw(ay, 2 * gamma));
  const double rhs = qa / 2.0 * std::sqrt(n1) * std::sqrt(n2) +
                     std::sqrt(std::max(0.0, 1.0 - qa * qa)) * std::max(ev.norm(x), ev.norm(y));
  const Term wt = ev.wq(make_offdiag(x, y).assembled, qa);
  Json j = block_inputs(in);
  j["gamma"] = gamma;
  ReportBuilder rb(id, j);
  rb.leq("upper", wt.value, rhs, {wt}, {});
  return rb.take();
}

double block_alpha(const BoundInputs& in, const ComplexMatrix& y, const Tolerances& tol) {
  return std::max(effective_alpha(in.a, in.alpha, tol, "X"), effective_alpha(y, in.alpha, tol, "Y"));
}

double positive_pair_bound(const ComplexMatrix& x, const ComplexMatrix& y, double qa,
                           Evaluator& ev) {
  return qa / 2.0 * std::max(ev.norm(x), ev.norm(y)) +
         qa / 4.0 * std::abs(ev.norm(x + y) - ev.norm(x - y));
}

std::vector<BoundCheckReport> k12(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& x = in.a;
  const ComplexMatrix& y = need_y(in, id);
  const double qa = std::min(1.0, std::abs(in.q));
  const double alpha = block_alpha(in, y, ev.tol());
  Json j = block_inputs(in);
  j["alpha"] = alpha;
  ReportBuilder rb(id, j);
  if (alpha > 0.0) {
    const double cot = 1.0 / std::tan(alpha);
    const ComplexMatrix ys = y.adjoint();
    const double m1 = ev.norm(x * cplx(1.0 + cot) + ys * cplx(1.0 - cot));
    const double m2 = ev.norm(x * cplx(1.0 - cot) + ys * cplx(1.0 + cot));
    const double lhs = qa / 4.0 * std::max(m1, m2) +
                       qa / 4.0 * std::abs(ev.norm(x + ys) - cot * ev.norm(x - ys));
    const Term wt = ev.wq(make_offdiag(x, y).assembled, qa);
    rb.leq("a", lhs, wt.value, {}, {wt});
    const ComplexMatrix rx = real_part(x), ry = real_part(y);
    const Term wr = ev.wq(make_offdiag(rx, ry).assembled, qa);
    rb.leq("b", positive_pair_bound(rx, ry, qa, ev), wr.value, {}, {wr}).note =
        "evaluated on the positive parts R(X), R(Y)";
  } else {
    const Term wt = ev.wq(make_offdiag(x, y).assembled, qa);
    rb.leq("b", positive_pair_bound(x, y, qa, ev), wt.value, {}, {wt});
  }
  return rb.take();
}

std::vector<BoundCheckReport> k13(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& t = in.a;
  const ComplexMatrix& s = need_y(in, id);
  if (!positive(t, ev.tol())) precondition(id, "T is not positive");
  if (!positive(s, ev.tol())) precondition(id, "S is not positive");
  Json j;
  for (auto [k, v] : in.context.items()) j[k] = v;
  j["q"] = 1.0;
  j["T"] = matrix_to_json(t);
  j["S"] = matrix_to_json(s);
  const Term w = ev.w(make_offdiag(t, s).assembled);
  ReportBuilder rb(id, j);
  rb.equal("equality", w.value, 0.5 * ev.norm(t + s), {w}).note += "; evaluated at q = 1";
  return rb.take();
}

std::vector<BoundCheckReport> k14(const std::string& id, const BoundInputs& in, Evaluator& ev) {
  const ComplexMatrix& x = in.a;
  const double qa = std::min(1.0, std::abs(in.q));
  const Term wt = ev.wq(make_offdiag(x, x).assembled, qa);
  const double lhs = qa / 2.0 * ev.norm(x) +
                     qa / 2.0 * std::abs(ev.norm(real_part(x)) - ev.norm(imag_part(x)));
  ReportBuilder rb(id, block_inputs(in));
  rb.leq("lower", lhs, wt.value, {}, {wt});
  return rb.take();
}

}  // namespace

std::vector<BoundCheckReport> check_invariances(const ComplexMatrix& x, const ComplexMatrix& y,
                                                cplx q, const std::vector<double>& thetas,
                                                Evaluator& ev) {
  BoundInputs in;
  in.a = x;
  in.b = y;
  in.q = q;
  in.thetas = thetas;
  auto k1 = check_block_bound("K1", in, ev);
  auto k2 = check_block_bound("K2", in, ev);
  k1.insert(k1.end(), k2.begin(), k2.end());
  return k1;
}

std::vector<BoundCheckReport> check_block_bound(const std::string& id, const BoundInputs& in,
                                                Evaluator& ev) {
  validate_q(in.q);
  const double qa = std::min(1.0, std::abs(in.q));
  if (id == "K1") {
    const ComplexMatrix& y = need_y(in, id);
    const std::vector<double> thetas =
        in.thetas.empty() ? std::vector<double>{std::numbers::pi / 3, std::numbers::pi} : in.thetas;
    const Term base = ev.wq(make_offdiag(in.a, y).assembled, qa);
    Json j = block_inputs(in);
    j["thetas"] = thetas;
    ReportBuilder rb(id, j);
    for (double th : thetas) {
      const Term v = ev.wq(make_offdiag(in.a, y * std::polar(1.0, th)).assembled, qa);
      rb.equal("theta=" + format_double(th), v.value, base.value, {v, base});
    }
    return rb.take();
  }
  if (id == "K2") {
    const ComplexMatrix& y = need_y(in, id);
    const Term base = ev.wq(make_offdiag(in.a, y).assembled, qa);
    const Term swapped = ev.wq(make_offdiag(y, in.a).assembled, qa);
    ReportBuilder rb(id, block_inputs(in));
    rb.equal("swap", swapped.value, base.value, {swapped, base});
    return rb.take();
  }
  if (id == "K3") return k3(id, in, ev);
  if (id == "K4") return k4(id, in, ev);
  if (id == "K5") return k5(id, in, ev);
  if (id == "K6") return k6(id, in, ev);
  if (id == "K7") return non_negative(id, in, ev, false);
  if (id == "K8") return non_negative(id, in, ev, true);
  if (id == "K9") return k9(id, in, ev);
  if (id == "K10") return k10(id, in, ev);
  if (id == "K11") return k11(id, in, ev);
  if (id == "K12") return k12(id, in, ev);
  if (id == "K13") return k13(id, in, ev);
  if (id == "K14") return k14(id, in, ev);
  throw Error(ErrorKind::UnknownBound, "unknown bound id '" + id + "'");
}

}  // namespace qnr
