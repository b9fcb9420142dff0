#include "subreg/json_util.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace subreg {

std::string format_full(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

Json json_number(double v) {
  if (std::isinf(v)) return Json(v > 0 ? "inf" : "-inf");
  return Json(v);
}

double number_from_json(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw std::invalid_argument(std::string(what) + ": expected a number");
}

Json json_vec(const Vec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(json_number(v[i]));
  return arr;
}

Vec vec_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(std::string(what) + ": expected a point array");
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const Json& e : j) v[i++] = number_from_json(e, what);
  return v;
}

NormKind norm_from_string(const std::string& s) {
  if (s == "sup") return NormKind::Sup;
  if (s == "euclidean") return NormKind::Euclidean;
  if (s == "one") return NormKind::One;
  throw std::invalid_argument("unknown norm '" + s + "'");
}

std::string norm_to_string(NormKind norm) {
  switch (norm) {
    case NormKind::Sup: return "sup";
    case NormKind::Euclidean: return "euclidean";
    case NormKind::One: return "one";
  }
  return "sup";
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const char* what) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace subreg
