#include "qnr/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qnr/errors.hpp"

namespace qnr {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json j;
  j["n"] = m.dim();
  j["rows"] = std::move(rows);
  return j;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& why) { return Error(ErrorKind::InvalidInput, why); };
  if (!j.is_object() || !j.contains("n") || !j.contains("rows")) {
    throw bad("matrix JSON needs keys \"n\" and \"rows\"");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    throw bad("\"n\" must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(j["n"].get<long long>());
  const auto& rows = j["rows"];
  if (!rows.is_array() || rows.size() != n) throw bad("\"rows\" must hold n rows");
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) throw bad("every row must hold n entries");
    for (std::size_t k = 0; k < n; ++k) {
      const auto& e = rows[i][k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw bad("entries must be [re, im] number pairs");
      }
      const double re = e[0].get<double>(), im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw bad("entries must be finite");
      m(i, k) = {re, im};
    }
  }
  return m;
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
  return matrix_from_json(j);
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  out << matrix_to_json(m).dump() << '\n';
}

nlohmann::ordered_json vector_to_json(std::span<const cplx> v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& e : v) a.push_back({e.real(), e.imag()});
  return a;
}

std::string range_boundary_csv(const RangeBoundary& rb) {
  std::ostringstream os;
  os << "theta,re,im,support_value\n";
  for (std::size_t k = 0; k < rb.thetas.size(); ++k) {
    os << format_double(rb.thetas[k]) << ',' << format_double(rb.boundary_points[k].real()) << ','
       << format_double(rb.boundary_points[k].imag()) << ','
       << format_double(rb.support_values[k]) << '\n';
  }
  return os.str();
}

namespace {

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#17becf"};

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::string render_svg(const std::vector<SvgSeries>& series, const std::string& x_label,
                       const std::string& y_label, bool equal_aspect) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  if (equal_aspect) {
    const double span = std::max(x1 - x0, y1 - y0);
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    x0 = cx - span / 2, x1 = cx + span / 2, y0 = cy - span / 2, y1 = cy + span / 2;
  }

  const double W = 640, H = 480, L = 70, R = 160, T = 20, B = 60;
  const double pw = W - L - R, ph = H - T - B;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return T + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
     << "\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph
     << "\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    os << "<line x1=\"" << fixed(sx(xv), 2) << "\" y1=\"" << T + ph << "\" x2=\"" << fixed(sx(xv), 2)
       << "\" y2=\"" << T + ph + 5 << "\"/>\n";
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << fixed(sy(yv), 2) << "\" x2=\"" << L << "\" y2=\""
       << fixed(sy(yv), 2) << "\"/>\n";
  }
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    os << "<text x=\"" << fixed(sx(xv), 2) << "\" y=\"" << T + ph + 18
       << "\" text-anchor=\"middle\">" << fixed(xv) << "</text>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << fixed(sy(yv) + 4, 2)
       << "\" text-anchor=\"end\">" << fixed(yv) << "</text>\n";
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
     << x_label << "</text>\n";
  os << "<text x=\"18\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << T + ph / 2 << ")\">" << y_label << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<text x=\"" << L + pw + 12 << "\" y=\"" << T + 16 + 18 * s << "\" fill=\""
       << kPalette[s % kPalette.size()] << "\">" << series[s].label << "</text>\n";
  }
  os << "</g>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[s % kPalette.size()]
       << "\" points=\"";
    for (std::size_t k = 0; k < series[s].x.size(); ++k) {
      if (k) os << ' ';
      os << fixed(sx(series[s].x[k]), 2) << ',' << fixed(sy(series[s].y[k]), 2);
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qnr
