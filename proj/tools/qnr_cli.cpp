// qnr: q-numerical radius toolkit.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qnr/blockops.hpp"
#include "qnr/bounds.hpp"
#include "qnr/errors.hpp"
#include "qnr/io.hpp"
#include "qnr/nrange.hpp"
#include "qnr/qrange.hpp"
#include "qnr/spectral.hpp"
#include "qnr/version.hpp"

namespace {

using qnr::ErrorKind;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitPrecondition = 3;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;  // positional matrix files
  std::vector<std::string> matrices;
  std::string x_path, y_path;
  double q = 0.5;
  std::string q_grid;
  std::string alpha;  // single value, or a comma list for curves
  std::string alpha_max = "1.4";
  std::optional<double> t, gamma;
  std::uint64_t seed = 42;
  int restarts = 0;
  int trials = 100;
  std::string bounds;
  std::string out;
  std::string format = "json";
  bool report_passes = false;
  qnr::Tolerances tol{};
};

// "0.5", "pi", "pi/4", "3pi/4", "0.25pi"
double parse_angle(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  const auto p = s.find("pi");
  auto num = [](const std::string& v) {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  };
  try {
    if (p == std::string::npos) return num(s);
    double coef = 1.0, den = 1.0;
    std::string head = s.substr(0, p), tail = s.substr(p + 2);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (!head.empty()) coef = num(head);
    if (!tail.empty()) {
      if (tail[0] != '/') throw std::invalid_argument(tail);
      den = num(tail.substr(1));
    }
    return coef * std::numbers::pi / den;
  } catch (const std::exception&) {
    throw qnr::Error(ErrorKind::InvalidInput, "cannot parse angle '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw qnr::Error(ErrorKind::InvalidInput, "--q-grid expects START:STOP:STEP");
  try {
    return qnr::make_grid(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
  } catch (const std::invalid_argument&) {
    throw qnr::Error(ErrorKind::InvalidInput, "--q-grid expects numbers");
  }
}

std::vector<double> q_values(const RunConfig& cfg) {
  std::vector<double> qs = cfg.q_grid.empty() ? std::vector<double>{cfg.q} : parse_grid(cfg.q_grid);
  for (double q : qs) {
    if (!(q >= 0.0 && q <= 1.0)) throw qnr::Error(ErrorKind::InvalidInput, "q values must lie in [0, 1]");
  }
  return qs;
}

Json tolerances_json(const qnr::Tolerances& t) {
  return {{"eig_tol", t.eig_tol}, {"psd_tol", t.psd_tol}, {"cmp_tol", t.cmp_tol}, {"opt_tol", t.opt_tol}};
}

Json config_echo(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  if (!cfg.inputs.empty()) j["inputs"] = cfg.inputs;
  if (!cfg.matrices.empty()) j["matrices"] = cfg.matrices;
  if (!cfg.x_path.empty()) j["X"] = cfg.x_path;
  if (!cfg.y_path.empty()) j["Y"] = cfg.y_path;
  j["q"] = cfg.q;
  if (!cfg.q_grid.empty()) j["q_grid"] = cfg.q_grid;
  if (!cfg.alpha.empty()) j["alpha"] = cfg.alpha;
  if (cfg.command == "fuzz") {
    j["alpha_max"] = cfg.alpha_max;
    j["trials"] = cfg.trials;
  }
  if (cfg.t) j["t"] = *cfg.t;
  if (cfg.gamma) j["gamma"] = *cfg.gamma;
  j["seed"] = cfg.seed;
  j["restarts"] = cfg.restarts;
  if (!cfg.bounds.empty()) j["bounds"] = cfg.bounds;
  j["format"] = cfg.format;
  return j;
}

Json header(const RunConfig& cfg) {
  return {{"type", "header"},
          {"tool", "qnr"},
          {"version", qnr::kVersion},
          {"config", config_echo(cfg)},
          {"tolerances", tolerances_json(cfg.tol)}};
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw qnr::Error(ErrorKind::InvalidInput, "cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void line(const Json& j) { stream() << j.dump() << '\n'; }

 private:
  std::ofstream file_;
};

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (cfg.format == f) return;
  }
  throw qnr::Error(ErrorKind::InvalidInput, "format '" + cfg.format + "' is not available for " + cfg.command);
}

qnr::ComplexMatrix load(const std::string& path) { return qnr::read_matrix_file(path); }

int run_compute(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  if (cfg.inputs.size() != 1) throw qnr::Error(ErrorKind::InvalidInput, "compute expects one matrix file");
  const qnr::ComplexMatrix a = load(cfg.inputs[0]);
  qnr::QEstimateOptions opts;
  opts.restarts = cfg.restarts;
  opts.seed = cfg.seed;
  opts.tol = cfg.tol;
  Json j;
  j["type"] = "compute";
  j["n"] = a.dim();
  j["w"] = qnr::numerical_radius(a);
  Json wq = Json::array();
  for (double q : q_values(cfg)) {
    Json e;
    e["q"] = q;
    if (qnr::is_hermitian(a, cfg.tol.eig_tol)) {
      e["value"] = qnr::q_radius_hermitian(a, q, cfg.tol);
      e["method"] = "hermitian-closed-form";
    } else {
      const auto est = qnr::q_radius_estimate(a, q, opts);
      e["value"] = est.value;
      e["method"] = "estimate";
      e["restarts"] = est.restarts_used;
      e["converged"] = est.converged;
    }
    wq.push_back(e);
  }
  j["w_q"] = cfg.q_grid.empty() ? wq[0]["value"] : Json(wq);
  if (cfg.q_grid.empty()) j["w_q_detail"] = wq[0];
  j["norm"] = qnr::operator_norm(a);
  j["spectral_radius"] = qnr::spectral_radius(a);
  j["m_T"] = qnr::transcendental_radius_sup(a, cfg.restarts, cfg.seed);
  j["normaloid"] = qnr::is_normaloid(a, cfg.tol);
  Output out(cfg.out);
  out.line(header(cfg));
  out.line(j);
  return kExitOk;
}

int run_sector(const RunConfig& cfg) {
  require_format(cfg, {"json", "csv", "svg"});
  if (cfg.inputs.size() != 1) throw qnr::Error(ErrorKind::InvalidInput, "sector expects one matrix file");
  const qnr::ComplexMatrix a = load(cfg.inputs[0]);
  if (cfg.format == "csv" || cfg.format == "svg") {
    const auto rb = qnr::range_boundary(a);
    Output out(cfg.out);
    if (cfg.format == "csv") {
      out.stream() << qnr::range_boundary_csv(rb);
    } else {
      qnr::SvgSeries s{"boundary of W(A)", {}, {}};
      for (const auto& z : rb.boundary_points) {
        s.x.push_back(z.real());
        s.y.push_back(z.imag());
      }
      if (!rb.boundary_points.empty()) {
        s.x.push_back(rb.boundary_points.front().real());
        s.y.push_back(rb.boundary_points.front().imag());
      }
      out.stream() << qnr::render_svg({s}, "Re", "Im", true);
    }
    return kExitOk;
  }
  Output out(cfg.out);
  out.line(header(cfg));
  try {
    const auto cert = qnr::sector_angle(a, cfg.tol);
    Json j;
    j["type"] = "sector";
    j["alpha"] = cert.alpha;
    j["alpha_degrees"] = cert.alpha * 180.0 / std::numbers::pi;
    j["witness_x"] = qnr::vector_to_json(cert.witness_x);
    j["positive_real_part"] = cert.positive_real_part;
    j["verified"] = qnr::verify_sector_certificate(a, cert, 1e-6, cfg.tol);
    out.line(j);
    return kExitOk;
  } catch (const qnr::Error& e) {
    if (e.kind() != ErrorKind::NotAccretive) throw;
    out.line({{"type", "error"}, {"kind", "NotAccretive"}, {"message", e.what()}});
    return kExitPrecondition;
  }
}

struct Tally {
  int pass = 0, fail = 0, indeterminate = 0, informational = 0, skipped = 0, evaluated = 0;
};

void emit_reports(Output& out, const std::vector<qnr::BoundCheckReport>& reps, Tally& t, bool all) {
  for (const auto& r : reps) {
    if (r.informational) {
      ++t.informational;
    } else if (r.status == qnr::CheckStatus::Pass) {
      ++t.pass;
    } else if (r.status == qnr::CheckStatus::Fail) {
      ++t.fail;
    } else {
      ++t.indeterminate;
    }
    if (all || r.status != qnr::CheckStatus::Pass) {
      Json j = {{"type", "report"}};
      j.update(qnr::to_json(r));
      out.line(j);
    }
  }
}

Json tally_json(const Tally& t) {
  return {{"type", "summary"},         {"pass", t.pass},
          {"fail", t.fail},            {"indeterminate", t.indeterminate},
          {"informational", t.informational}, {"skipped", t.skipped}};
}

int verdict(const Tally& t) {
  if (t.fail > 0) return kExitFailed;
  if (t.evaluated == 0 && t.skipped > 0) return kExitPrecondition;
  return kExitOk;
}

qnr::EvaluatorOptions evaluator_options(const RunConfig& cfg) {
  qnr::EvaluatorOptions eo;
  eo.restarts = cfg.restarts;
  eo.seed = cfg.seed;
  eo.tol = cfg.tol;
  return eo;
}

int run_checks(const RunConfig& cfg, const std::vector<std::string>& ids, qnr::BoundInputs base) {
  qnr::Evaluator ev(evaluator_options(cfg));
  Output out(cfg.out);
  out.line(header(cfg));
  if (!cfg.alpha.empty()) base.alpha = parse_angle(cfg.alpha);
  base.t = cfg.t;
  base.gamma = cfg.gamma;
  Tally t;
  for (double q : q_values(cfg)) {
    for (const auto& id : ids) {
      qnr::BoundInputs in = base;
      in.q = q;
      try {
        const auto reps = qnr::evaluate_bound(id, in, ev);
        ++t.evaluated;
        emit_reports(out, reps, t, true);
      } catch (const qnr::Error& e) {
        if (e.kind() != ErrorKind::PreconditionFailed) throw;
        ++t.skipped;
        out.line({{"type", "skipped"}, {"bound_id", id}, {"q", q}, {"reason", e.what()}});
      }
    }
  }
  out.line(tally_json(t));
  return verdict(t);
}

int run_verify(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  if (cfg.matrices.empty() || cfg.matrices.size() > 4) {
    throw qnr::Error(ErrorKind::InvalidInput, "verify expects one to four --matrices files (A B C D)");
  }
  const auto ids = qnr::parse_bound_list(cfg.bounds.empty() ? "all" : cfg.bounds);
  qnr::BoundInputs in;
  in.a = load(cfg.matrices[0]);
  if (cfg.matrices.size() > 1) in.b = load(cfg.matrices[1]);
  if (cfg.matrices.size() > 2) in.c = load(cfg.matrices[2]);
  if (cfg.matrices.size() > 3) in.d = load(cfg.matrices[3]);
  return run_checks(cfg, ids, in);
}

int run_block(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  if (cfg.x_path.empty()) throw qnr::Error(ErrorKind::InvalidInput, "block expects --X");
  std::vector<std::string> ids;
  for (const auto& id : qnr::parse_bound_list(cfg.bounds.empty() ? "K1..K14" : cfg.bounds)) {
    if (id[0] != 'K') throw qnr::Error(ErrorKind::InvalidInput, "block runs K entries only, got " + id);
    ids.push_back(id);
  }
  qnr::BoundInputs in;
  in.a = load(cfg.x_path);
  if (!cfg.y_path.empty()) in.b = load(cfg.y_path);
  return run_checks(cfg, ids, in);
}

int run_fuzz(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  qnr::FuzzConfig fc;
  fc.bound_ids = qnr::parse_bound_list(cfg.bounds.empty() ? "all" : cfg.bounds);
  fc.trials = cfg.trials;
  fc.alpha_max = parse_angle(cfg.alpha_max);
  if (!(fc.alpha_max >= 0.0 && fc.alpha_max < std::numbers::pi / 2)) {
    throw qnr::Error(ErrorKind::InvalidInput, "--alpha-max must lie in [0, pi/2)");
  }
  if (!cfg.q_grid.empty()) fc.q_grid = q_values(cfg);
  fc.seed = cfg.seed;
  fc.restarts = cfg.restarts;
  fc.tol = cfg.tol;
  if (fc.trials < 1) throw qnr::Error(ErrorKind::InvalidInput, "--trials must be >= 1");

  Output out(cfg.out);
  out.line(header(cfg));
  std::map<std::string, qnr::FuzzTally> summary;
  for (const auto& id : fc.bound_ids) summary[id];
  Tally t;
  for (int i = 0; i < fc.trials; ++i) {
    const auto trial = qnr::fuzz_trial(fc, i);
    qnr::tally(trial, summary);
    emit_reports(out, trial.reports, t, cfg.report_passes);
    t.evaluated += static_cast<int>(fc.bound_ids.size() - trial.skipped.size());
    t.skipped += static_cast<int>(trial.skipped.size());
  }
  Json s = tally_json(t);
  s["trials"] = fc.trials;
  s["bounds"] = qnr::summary_json(summary);
  out.line(s);
  return verdict(t);
}

int run_curves(const RunConfig& cfg) {
  require_format(cfg, {"csv", "svg"});
  std::vector<double> alphas;
  for (const auto& a : split(cfg.alpha.empty() ? "0,pi/4,pi/2" : cfg.alpha, ',')) {
    alphas.push_back(parse_angle(a));
  }
  const std::vector<double> grid = cfg.q_grid.empty() ? qnr::make_grid(0.0, 1.0, 0.001) : q_values(cfg);
  std::vector<qnr::ThresholdCurve> curves;
  for (double a : alphas) curves.push_back(qnr::threshold_curve(a, grid));
  const auto inv = qnr::inverse_crossover(qnr::ComplexMatrix::diagonal({1.0, 2.0}), grid);

  Output out(cfg.out);
  if (cfg.format == "svg") {
    std::vector<qnr::SvgSeries> series;
    for (const auto& c : curves) {
      const std::string tag = "alpha=" + qnr::format_double(c.alpha);
      series.push_back({"f1 " + tag, c.q, c.f1});
      series.push_back({"f2 " + tag, c.q, c.f2});
    }
    out.stream() << qnr::render_svg(series, "q", "f", false);
    return kExitOk;
  }
  std::ostream& os = out.stream();
  os << "# qnr " << qnr::kVersion << " curves\n";
  for (const auto& c : curves) {
    os << "# crossover alpha=" << qnr::format_double(c.alpha) << " q*="
       << (c.crossover ? qnr::format_double(*c.crossover) : std::string("none")) << '\n';
  }
  os << "# inverse_crossover diag(1,2) q*=" << (inv ? qnr::format_double(*inv) : std::string("none"))
     << '\n';
  const bool multi = curves.size() > 1;
  os << (multi ? "alpha,q,f1,f2\n" : "q,f1,f2\n");
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.q.size(); ++k) {
      if (multi) os << qnr::format_double(c.alpha) << ',';
      os << qnr::format_double(c.q[k]) << ',' << qnr::format_double(c.f1[k]) << ','
         << qnr::format_double(c.f2[k]) << '\n';
    }
  }
  return kExitOk;
}

int exit_code_for(ErrorKind k) {
  return k == ErrorKind::PreconditionFailed || k == ErrorKind::NotAccretive ? kExitPrecondition
                                                                             : kExitBadInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-numerical radius toolkit"};
  app.set_version_flag("--version", std::string(qnr::kVersion));
  app.require_subcommand(1);
  RunConfig cfg;

  auto shared = [&](CLI::App* c) {
    c->add_option("--q", cfg.q, "q in [0, 1]")->check(CLI::Range(0.0, 1.0));
    c->add_option("--q-grid", cfg.q_grid, "START:STOP:STEP");
    c->add_option("--alpha", cfg.alpha, "sector angle override (curves: comma list, pi allowed)");
    c->add_option("--t", cfg.t, "power parameter");
    c->add_option("--gamma", cfg.gamma, "exponent for the t^gamma family")->check(CLI::Range(0.0, 1.0));
    c->add_option("--seed", cfg.seed, "random seed");
    c->add_option("--restarts", cfg.restarts, "estimator restarts (0 = 32 n)")->check(CLI::NonNegativeNumber);
    c->add_option("--bounds", cfg.bounds, "comma list of ids or ranges, e.g. B1..B22,K3");
    c->add_option("--out", cfg.out, "output file (default stdout)");
    c->add_option("--format", cfg.format, "json, csv or svg");
    c->add_option("--eig-tol", cfg.tol.eig_tol);
    c->add_option("--psd-tol", cfg.tol.psd_tol);
    c->add_option("--cmp-tol", cfg.tol.cmp_tol);
    c->add_option("--opt-tol", cfg.tol.opt_tol);
  };

  auto* compute = app.add_subcommand("compute", "w, w_q, norm, spectral radius, m(T)");
  compute->add_option("matrix", cfg.inputs)->check(CLI::ExistingFile);
  auto* sector = app.add_subcommand("sector", "sector angle certificate or range boundary");
  sector->add_option("matrix", cfg.inputs)->check(CLI::ExistingFile);
  auto* verify = app.add_subcommand("verify", "evaluate registry bounds on given matrices");
  verify->add_option("--matrices", cfg.matrices, "A [B [C [D]]]")->check(CLI::ExistingFile);
  auto* fuzz = app.add_subcommand("fuzz", "property-based bound suite on random sectorial samples");
  fuzz->add_option("--trials", cfg.trials);
  fuzz->add_option("--alpha-max", cfg.alpha_max);
  fuzz->add_flag("--report-passes", cfg.report_passes, "also write passing reports");
  auto* curves = app.add_subcommand("curves", "threshold curves f1, f2 against q");
  auto* block = app.add_subcommand("block", "2x2 operator matrix suite K1..K14");
  block->add_option("--X", cfg.x_path)->check(CLI::ExistingFile);
  block->add_option("--Y", cfg.y_path)->check(CLI::ExistingFile);
  for (auto* c : {compute, sector, verify, fuzz, curves, block}) shared(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitBadInput;
  }

  try {
    cfg.tol.validate();
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (cfg.command == "curves" && cfg.format == "json") cfg.format = "csv";
    if (cfg.command == "compute") return run_compute(cfg);
    if (cfg.command == "sector") return run_sector(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    if (cfg.command == "fuzz") return run_fuzz(cfg);
    if (cfg.command == "curves") return run_curves(cfg);
    return run_block(cfg);
  } catch (const qnr::Error& e) {
    std::cerr << "qnr: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "qnr: " << e.what() << '\n';
    return kExitBadInput;
  }
}
