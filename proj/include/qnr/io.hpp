#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnr/matrix.hpp"
#include "qnr/nrange.hpp"

namespace qnr {

/// {"n": n, "rows": [[[re, im], ...], ...]}
nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m);
/// Throws InvalidInput unless the rows form an n x n grid of finite pairs.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

nlohmann::ordered_json vector_to_json(std::span<const cplx> v);

/// CSV with header theta,re,im,support_value.
std::string range_boundary_csv(const RangeBoundary& rb);

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

/// One polyline per series, with axes, tick labels and axis titles.
std::string render_svg(const std::vector<SvgSeries>& series, const std::string& x_label,
                       const std::string& y_label, bool equal_aspect = false);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace qnr
