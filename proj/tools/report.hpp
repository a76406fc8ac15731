#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "parabgmt/geometry.hpp"
#include "parabgmt/measure.hpp"

namespace parabgmt::cli {

using Json = nlohmann::json;

/// Rounded to 12 significant digits; non-finite values become null.
Json number(double v);
Json numbers(const std::vector<double>& v);
Json point_json(const Point& p);
/// {n, m, includes_t_axis, horiz_basis} with the basis row-major.
Json plane_json(const HomPlane& plane);
Json provenance_json(const Provenance& prov);

/// Pretty JSON with a trailing newline.
std::string dump(const Json& doc);
/// Writes to `path`, or to stdout when path is empty.
void emit(const Json& doc, const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace parabgmt::cli
