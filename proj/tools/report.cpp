#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "settings.hpp"

namespace parabgmt::cli {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (const double x : v) out.push_back(number(x));
  return out;
}

Json point_json(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.x.size(); ++i) out.push_back(number(p.x[i]));
  out.push_back(number(p.t));
  return out;
}

Json plane_json(const HomPlane& plane) {
  Json basis = Json::array();
  for (Eigen::Index r = 0; r < plane.basis().rows(); ++r) {
    for (Eigen::Index c = 0; c < plane.basis().cols(); ++c) basis.push_back(number(plane.basis()(r, c)));
  }
  return {{"n", plane.n()}, {"m", plane.dim()}, {"includes_t_axis", plane.includes_t_axis()}, {"horiz_basis", basis}};
}

Json provenance_json(const Provenance& prov) {
  Json notes = Json::object();
  for (const auto& [k, v] : prov.notes) {
    if (!v.empty() && v.size() < 18 && v.find_first_not_of("0123456789") == std::string::npos) {
      notes[k] = std::stoll(v);
      continue;
    }
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    notes[k] = !v.empty() && end == v.c_str() + v.size() ? number(d) : Json(v);
  }
  return {{"tag", prov.tag}, {"seed", prov.seed}, {"notes", notes}};
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

void emit(const Json& doc, const std::string& path) {
  if (path.empty()) {
    std::cout << dump(doc);
  } else {
    write_text(path, dump(doc));
  }
}

}  // namespace parabgmt::cli
