#ifndef FPDESIGN_REPORT_HPP
#define FPDESIGN_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "fpdesign/design.hpp"
#include "fpdesign/design_io.hpp"

namespace fpdesign {

struct TableRow {
  std::string label;
  Design design;
  double value = 0.0;       // criterion value under the shared draws
  double efficiency = 0.0;  // percent against the reference row
  bool reference = false;
  bool singular = false;
};

//! Comparison table: reference first, other rows in descending efficiency.
struct DesignTable {
  std::string title;
  std::vector<TableRow> rows;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string levels_text(const Design& d) {
  std::string s;
  for (const auto& p : d.points) {
    if (!s.empty()) s += ' ';
    if (p.x.size() == 1) {
      s += format_fixed(p.x[0], 4);
    } else {
      s += '(';
      for (std::size_t i = 0; i < p.x.size(); ++i) {
        if (i) s += ',';
        s += format_fixed(p.x[i], 4);
      }
      s += ')';
    }
  }
  return s;
}

inline std::string reps_text(const Design& d) {
  std::string s;
  for (const auto& p : d.points) {
    if (!s.empty()) s += ' ';
    s += std::to_string(p.rep);
  }
  return s;
}

//! RFC 4180 field quoting: quote when the field contains comma, quote or
//! newline; double embedded quotes.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

//! Levels print at 4 decimals and efficiencies at 2, matching the
//! precision used for reporting throughout.
inline std::string to_text(const DesignTable& t) {
  std::ostringstream os;
  if (!t.title.empty()) os << t.title << '\n';
  std::size_t wl = 6, wd = 6, wr = 4;
  for (const auto& r : t.rows) {
    wl = std::max(wl, r.label.size());
    wd = std::max(wd, detail::levels_text(r.design).size());
    wr = std::max(wr, detail::reps_text(r.design).size());
  }
  os << std::string(wl, ' ') << "  " << "design" << '\n';
  for (const auto& r : t.rows) {
    os << r.label << std::string(wl - r.label.size(), ' ') << "  ";
    const std::string lv = detail::levels_text(r.design);
    const std::string rp = detail::reps_text(r.design);
    os << lv << std::string(wd - lv.size(), ' ') << "  ";
    os << rp << std::string(wr - rp.size(), ' ') << "  ";
    if (r.singular)
      os << "eff   0.00 (singular)";
    else
      os << "eff " << detail::format_fixed(r.efficiency, 2);
    if (r.reference) os << "  (reference)";
    os << '\n';
  }
  for (const auto& n : t.notes) os << "# " << n << '\n';
  return os.str();
}

inline std::string to_csv(const DesignTable& t) {
  std::ostringstream os;
  os << "label,levels,reps,value,efficiency,flag\r\n";
  for (const auto& r : t.rows) {
    os << detail::csv_field(r.label) << ','
       << detail::csv_field(detail::levels_text(r.design)) << ','
       << detail::csv_field(detail::reps_text(r.design)) << ','
       << detail::format_fixed(r.value, 10) << ','
       << detail::format_fixed(r.efficiency, 2) << ','
       << (r.singular ? "singular" : (r.reference ? "reference" : ""))
       << "\r\n";
  }
  return os.str();
}

inline Json table_to_json(const DesignTable& t) {
  Json j;
  j["title"] = t.title;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row;
    row["label"] = r.label;
    row["design"] = design_to_json(r.design, "", Json::object());
    row["design"].erase("model");
    row["design"].erase("range");
    row["value"] = r.value;
    row["efficiency"] = r.efficiency;
    if (r.reference) row["reference"] = true;
    if (r.singular) row["singular"] = true;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (!t.notes.empty()) j["notes"] = t.notes;
  return j;
}

}  // namespace fpdesign

#endif  // FPDESIGN_REPORT_HPP
