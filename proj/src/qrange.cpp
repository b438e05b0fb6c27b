#include "qnr/qrange.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qnr/errors.hpp"
#include "qnr/nrange.hpp"
#include "qnr/random.hpp"

namespace qnr {

void validate_q(cplx q) {
  if (!std::isfinite(q.real()) || !std::isfinite(q.imag()) || std::abs(q) > 1.0 + 1e-15) {
    throw Error(ErrorKind::InvalidInput, "q must lie in the closed unit disc");
  }
}

double q_radius_hermitian(const std::vector<double>& ev, cplx q) {
  validate_q(q);
  const double l1 = ev.front(), ln = ev.back();
  return 0.5 * std::min(1.0, std::abs(q)) * std::abs(l1 + ln) + 0.5 * std::abs(l1 - ln);
}

double q_radius_hermitian(const HermitianSpectrum& spectrum, cplx q) {
  return q_radius_hermitian(spectrum.eigenvalues, q);
}

double q_radius_hermitian(const ComplexMatrix& a, cplx q, const Tolerances& tol) {
  return q_radius_hermitian(hermitian_eigenvalues(a, tol), q);
}

namespace {

double q_modulus(cplx q) { return std::min(1.0, std::abs(q)); }

// Unit vector orthogonal to x built from the first usable basis vector.
Vector any_orthogonal(std::span<const cplx> x) {
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    Vector z(n);
    z[k] = 1.0;
    const cplx c = inner(z, x);
    for (std::size_t i = 0; i < n; ++i) z[i] -= c * x[i];
    if (normalize(z) > 0.5) return z;
  }
  Vector z(n);
  z[0] = 1.0;
  return z;
}

// Reusable buffers for evaluating the reduced objective and its gradient.
class Objective {
 public:
  Objective(const ComplexMatrix& a, double qabs)
      : a_(a), n_(a.dim()), qa_(qabs), s_(std::sqrt(std::max(0.0, 1.0 - qabs * qabs))),
        ax_(n_), atx_(n_), atax_(n_), g_(n_) {
    scale_ = std::max(a.frobenius_norm(), std::numeric_limits<double>::min());
  }

  double value(std::span<const cplx> x) {
    multiply_into(a_, x, ax_);
    return finish(x);
  }

  // Tangent ascent direction at x, written into d. Returns f(x).
  double gradient(std::span<const cplx> x, std::span<cplx> d) {
    multiply_into(a_, x, ax_);
    const double f = finish(x);
    adjoint_multiply_into(a_, x, atx_);
    adjoint_multiply_into(a_, ax_, atax_);
    const double amod = std::abs(a_val_);
    const cplx u = amod > 1e-300 ? a_val_ / amod : cplx(0.0);
    const double sq = std::sqrt(h_);
    const bool use_h = s_ > 0.0 && h_ > 1e-28 * scale_ * scale_;
    for (std::size_t i = 0; i < n_; ++i) {
      cplx g = 0.0;
      if (amod > 1e-300) g += qa_ * (std::conj(u) * ax_[i] + u * atx_[i]);
      if (use_h) g += s_ * (atax_[i] - std::conj(a_val_) * ax_[i] - a_val_ * atx_[i]) / sq;
      g_[i] = g;
    }
    const double radial = inner(g_, x).real();
    for (std::size_t i = 0; i < n_; ++i) d[i] = g_[i] - radial * x[i];
    return f;
  }

  double scale() const { return scale_; }

 private:
  double finish(std::span<const cplx> x) {
    a_val_ = inner(ax_, x);
    double axn = 0.0;
    for (const auto& v : ax_) axn += std::norm(v);
    h_ = std::max(0.0, axn - std::norm(a_val_));
    return qa_ * std::abs(a_val_) + s_ * std::sqrt(h_);
  }

  const ComplexMatrix& a_;
  std::size_t n_;
  double qa_, s_, scale_;
  cplx a_val_ = 0.0;
  double h_ = 0.0;
  Vector ax_, atx_, atax_, g_;
};

void retract(std::span<const cplx> x, std::span<const cplx> dir, double angle,
             std::span<cplx> out) {
  const double c = std::cos(angle), s = std::sin(angle);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i] + s * dir[i];
  normalize(out);
}

// Riemannian gradient ascent with Barzilai-Borwein steps, Armijo backtracking
// and random tangent probes at stalls. x is updated in place.
double local_ascent(Objective& obj, Vector& x, Rng& rng, int max_iter) {
  const std::size_t n = x.size();
  Vector d(n), dir(n), trial(n), prev_x(n), prev_d(n), best_probe(n);
  double f = obj.gradient(x, d);
  double step = 1.0 / obj.scale();
  bool have_prev = false;
  int probe_rounds = 0;
  int flat = 0;
  static constexpr std::array<double, 5> kProbeAngles{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

  for (int it = 0; it < max_iter; ++it) {
    const double dn = norm(d);
    bool stalled = dn <= 1e-13 * (1.0 + obj.scale()) || flat >= 4;
    if (!stalled) {
      if (have_prev) {
        double ss = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const cplx sx = x[i] - prev_x[i];
          const cplx yv = d[i] - prev_d[i];
          ss += std::norm(sx);
          sy += (std::conj(sx) * yv).real();
        }
        if (std::abs(sy) > 1e-300) step = ss / std::abs(sy);
        step = std::clamp(step, 1e-8 / obj.scale(), 1e4 / obj.scale());
      }
      for (std::size_t i = 0; i < n; ++i) dir[i] = d[i] / dn;
      double fn = -1.0;
      bool accepted = false;
      for (int bt = 0; bt < 40; ++bt) {
        const double angle = std::min(step * dn, std::numbers::pi / 2);
        retract(x, dir, angle, trial);
        fn = obj.value(trial);
        if (fn >= f + 1e-4 * angle * dn) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (accepted && fn > f) {
        prev_x = x;
        prev_d = d;
        have_prev = true;
        x = trial;
        flat = (fn - f <= 1e-15 * (1.0 + f)) ? flat + 1 : 0;
        f = obj.gradient(x, d);
        continue;
      }
      stalled = true;
    }

    // Derivative-free fallback: random tangent probes at shrinking radii.
    if (++probe_rounds > 8) break;
    double best = f;
    for (int p = 0; p < 50; ++p) {
      Vector t = random_orthogonal_unit(rng, x);
      retract(x, t, kProbeAngles[static_cast<std::size_t>(p) % kProbeAngles.size()], trial);
      const double fp = obj.value(trial);
      if (fp > best) {
        best = fp;
        best_probe = trial;
      }
    }
    if (!(best > f)) break;
    x = best_probe;
    have_prev = false;
    flat = 0;
    f = obj.gradient(x, d);
  }
  return obj.value(x);
}

Vector top_abs_eigenvector(const ComplexMatrix& h) {
  auto spec = hermitian_eigen(h);
  const bool top = std::abs(spec.largest()) >= std::abs(spec.smallest());
  return column(spec.eigenvectors, top ? 0 : h.dim() - 1);
}

QRadiusEstimate full_q_estimate(const ComplexMatrix& a, cplx q) {
  NumericalRadius nr = numerical_radius_witness(a);
  QRadiusEstimate est;
  est.q = q;
  est.witness_x = nr.witness;
  est.value = std::abs(inner(a * std::span<const cplx>(nr.witness), nr.witness));
  est.restarts_used = 1;
  est.converged = true;
  return est;
}

}  // namespace

Vector q_partner(std::span<const cplx> x, std::span<const cplx> z, cplx q) {
  const double s = std::sqrt(std::max(0.0, 1.0 - std::norm(q)));
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = std::conj(q) * x[i] + (z.empty() ? cplx(0.0) : s * z[i]);
  }
  return y;
}

QObjective q_objective(const ComplexMatrix& a, cplx q, std::span<const cplx> x) {
  validate_q(q);
  if (x.size() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "x has the wrong length");
  const double qa = q_modulus(q);
  const bool full = qa >= 1.0;
  if (!full && a.dim() < 2) {
    throw Error(ErrorKind::DimensionTooSmall, "|q| < 1 needs a vector orthogonal to x");
  }
  const Vector ax = a * x;
  const cplx av = inner(ax, x);
  Vector r(ax);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= av * x[i];
  const double h = std::max(0.0, norm(ax) * norm(ax) - std::norm(av));
  const double s = std::sqrt(std::max(0.0, 1.0 - qa * qa));

  QObjective out;
  out.value = qa * std::abs(av) + s * std::sqrt(h);
  if (full) return out;

  // A residual at roundoff level carries no direction; z must still be a unit vector orthogonal to x.
  double rn = normalize(r);
  if (rn > 1e-13 * (1.0 + norm(ax))) {
    const cplx c = inner(r, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * x[i];
    rn = normalize(r) > 0.5 ? rn : 0.0;
  } else {
    rn = 0.0;
  }
  if (rn > 0.0) {
    const cplx target = q * av;
    const cplx phase = std::abs(target) > 0.0 ? std::conj(target / std::abs(target)) : cplx(1.0);
    for (auto& v : r) v *= phase;
    out.z = std::move(r);
  } else {
    out.z = any_orthogonal(x);
  }
  return out;
}

QRadiusEstimate q_radius_estimate(const ComplexMatrix& a, cplx q, const QEstimateOptions& opts) {
  validate_q(q);
  opts.tol.validate();
  const std::size_t n = a.dim();
  const double qa = q_modulus(q);
  if (qa >= 1.0) return full_q_estimate(a, q);
  if (n < 2) throw Error(ErrorKind::DimensionTooSmall, "|q| < 1 needs dim >= 2");
  const int restarts = opts.restarts > 0 ? opts.restarts : static_cast<int>(32 * n);

  std::vector<Vector> fixed;
  if (opts.warm_start && opts.warm_start->size() == n) fixed.push_back(*opts.warm_start);
  fixed.push_back(hermitian_top_eigenpair(real_part(a.adjoint() * a)).second);
  fixed.push_back(top_abs_eigenvector(real_part(a)));
  fixed.push_back(top_abs_eigenvector(imag_part(a)));

  Objective obj(a, qa);
  const int k0 = std::max(1, static_cast<int>(std::floor(0.75 * restarts)));
  double best = -1.0, best_early = -1.0;
  Vector best_x;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(r));
    Vector x = static_cast<std::size_t>(r) < fixed.size() ? fixed[static_cast<std::size_t>(r)]
                                                          : random_unit_vector(rng, n);
    if (normalize(x) == 0.0) x = random_unit_vector(rng, n);
    const double f = local_ascent(obj, x, rng, opts.max_iterations);
    if (f > best) {
      best = f;
      best_x = x;
    }
    if (r + 1 == k0) best_early = best;
  }

  QRadiusEstimate est;
  est.q = q;
  est.restarts_used = restarts;
  est.converged = best - best_early <= opts.tol.opt_tol * (1.0 + best);
  QObjective qo = q_objective(a, q, best_x);
  const Vector y = q_partner(best_x, qo.z, q);
  est.value = std::abs(inner(a * std::span<const cplx>(best_x), y));
  est.witness_x = std::move(best_x);
  est.witness_z = std::move(qo.z);
  return est;
}

double q_radius_bruteforce_2x2(const ComplexMatrix& a, cplx q, int grid) {
  validate_q(q);
  if (a.dim() != 2) throw Error(ErrorKind::WrongDimension, "brute force oracle is 2x2 only");
  if (grid < 500) throw Error(ErrorKind::InvalidInput, "brute force grid must be >= 500");
  Objective obj(a, q_modulus(q));
  const double half_pi = std::numbers::pi / 2, two_pi = 2 * std::numbers::pi;
  Vector x(2);
  auto eval = [&](double t, double phi) {
    t = std::clamp(t, 0.0, half_pi);
    x[0] = std::cos(t);
    x[1] = std::polar(std::sin(t), phi);
    return obj.value(x);
  };

  const double dt = half_pi / (grid - 1), dp = two_pi / grid;
  struct Cell {
    double f, t, p;
  };
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) cells.push_back({eval(i * dt, j * dp), i * dt, j * dp});
  const std::size_t keep = std::min<std::size_t>(8, cells.size());
  std::partial_sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(keep), cells.end(),
                    [](const Cell& l, const Cell& r) { return l.f > r.f; });

  double best = cells.front().f;
  for (std::size_t c = 0; c < keep; ++c) {
    Cell cur = cells[c];
    double ht = dt, hp = dp;
    while (ht > 1e-12 || hp > 1e-12) {
      Cell next = cur;
      for (int i = -5; i <= 5; ++i) {
        for (int j = -5; j <= 5; ++j) {
          const double t = std::clamp(cur.t + ht * i / 5.0, 0.0, half_pi);
          const double p = cur.p + hp * j / 5.0;
          const double f = eval(t, p);
          if (f > next.f) next = {f, t, p};
        }
      }
      cur = next;
      ht *= 0.25;
      hp *= 0.25;
    }
    best = std::max(best, cur.f);
  }
  return best;
}

std::vector<cplx> q_range_sample(const ComplexMatrix& a, cplx q, int samples, std::uint64_t seed) {
  validate_q(q);
  if (samples < 1) throw Error(ErrorKind::InvalidInput, "samples must be >= 1");
  const std::size_t n = a.dim();
  const bool full = q_modulus(q) >= 1.0;
  if (!full && n < 2) throw Error(ErrorKind::DimensionTooSmall, "|q| < 1 needs dim >= 2");
  Rng rng = make_rng(seed);
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const Vector x = random_unit_vector(rng, n);
    const Vector z = full ? Vector{} : random_orthogonal_unit(rng, x);
    const Vector y = q_partner(x, z, q);
    pts.push_back(inner(a * std::span<const cplx>(x), y));
  }
  return pts;
}

double transcendental_radius_sup(const ComplexMatrix& t, int restarts, std::uint64_t seed) {
  if (t.dim() < 2) return 0.0;
  QEstimateOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return q_radius_estimate(t, 0.0, o).value;
}

double transcendental_radius_inf(const ComplexMatrix& t) {
  const std::size_t n = t.dim();
  if (n == 1) return 0.0;
  auto f = [&](double re, double im) {
    ComplexMatrix m = t;
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= cplx(re, im);
    return operator_norm(m);
  };
  const cplx c0 = t.trace() / static_cast<double>(n);
  const double scale = std::max(t.frobenius_norm(), 1e-300);

  struct Vertex {
    double x, y, f;
  };
  std::array<Vertex, 3> s{};
  double cx = c0.real(), cy = c0.imag();
  double delta = std::max(0.1 * scale, 1e-6);
  double best = f(cx, cy);

  for (int round = 0; round < 8; ++round) {
    s[0] = {cx, cy, best};
    s[1] = {cx + delta, cy, f(cx + delta, cy)};
    s[2] = {cx, cy + delta, f(cx, cy + delta)};
    for (int it = 0; it < 2000; ++it) {
      std::sort(s.begin(), s.end(), [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
      const double size = std::max({std::hypot(s[1].x - s[0].x, s[1].y - s[0].y),
                                    std::hypot(s[2].x - s[0].x, s[2].y - s[0].y)});
      if (size < 1e-14 * scale) break;
      const double mx = 0.5 * (s[0].x + s[1].x), my = 0.5 * (s[0].y + s[1].y);
      const double rx = mx + (mx - s[2].x), ry = my + (my - s[2].y);
      const double fr = f(rx, ry);
      if (fr < s[0].f) {
        const double ex = mx + 2 * (mx - s[2].x), ey = my + 2 * (my - s[2].y);
        const double fe = f(ex, ey);
        s[2] = fe < fr ? Vertex{ex, ey, fe} : Vertex{rx, ry, fr};
      } else if (fr < s[1].f) {
        s[2] = {rx, ry, fr};
      } else {
        const bool outside = fr < s[2].f;
        const double kx = outside ? mx + 0.5 * (rx - mx) : mx + 0.5 * (s[2].x - mx);
        const double ky = outside ? my + 0.5 * (ry - my) : my + 0.5 * (s[2].y - my);
        const double fk = f(kx, ky);
        if (fk < std::min(fr, s[2].f)) {
          s[2] = {kx, ky, fk};
        } else {
          for (std::size_t k = 1; k < 3; ++k) {
            s[k].x = s[0].x + 0.5 * (s[k].x - s[0].x);
            s[k].y = s[0].y + 0.5 * (s[k].y - s[0].y);
            s[k].f = f(s[k].x, s[k].y);
          }
        }
      }
    }
    const auto lo = std::min_element(s.begin(), s.end(),
                                     [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
    const bool improved = lo->f < best - 1e-15 * scale;
    if (lo->f < best) {
      best = lo->f;
      cx = lo->x;
      cy = lo->y;
    }
    if (!improved && round > 1) break;
    delta *= 0.1;
  }
  return best;
}

}  // namespace qnr
