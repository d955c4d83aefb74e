#pragma once

// JSON helpers shared by the file writers and the CLI reports.

#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "etale/coeff.hpp"

namespace etale::detail {

using Json = nlohmann::ordered_json;

// Integers as numbers, everything else as "p/q" strings.
inline Json scalar_json(const Scalar& v) {
  if (v.get_den() == 1 && v.get_num().fits_slong_p()) return Json(v.get_num().get_si());
  return Json(v.get_str());
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Like dump(2) but arrays of scalars, and flat records inside arrays, stay
// on one line, so matrices read one row per line.
inline void emit(std::ostream& os, const Json& j, int indent, bool in_array = false) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  auto flat = [](const Json& a) {
    for (const auto& e : a) {
      if (e.is_structured()) return false;
    }
    return true;
  };
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    if (in_array && flat(j)) {
      os << "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        os << (first ? "" : ", ") << Json(it.key()).dump() << ": " << it.value().dump();
        first = false;
      }
      os << "}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << pad << Json(it.key()).dump() << ": ";
      emit(os, it.value(), indent + 2);
    }
    os << "\n" << close << "}";
  } else if (j.is_array()) {
    if (flat(j)) {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << j[i].dump();
      os << "]";
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << pad;
      emit(os, j[i], indent + 2, true);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << close << "]";
  } else {
    os << j.dump();
  }
}

inline std::string render(const Json& j) {
  std::ostringstream os;
  emit(os, j, 0);
  os << "\n";
  return os.str();
}

}  // namespace etale::detail
