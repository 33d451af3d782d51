#ifndef FPDESIGN_DESIGN_IO_HPP
#define FPDESIGN_DESIGN_IO_HPP

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fpdesign/design.hpp"

namespace fpdesign {

using Json = nlohmann::ordered_json;

//! Design file layout: {"model": ..., "range": {...}, "n": ...,
//! "levels": [...], "reps": [...]} with one-factor levels as plain
//! numbers and multi-factor levels as coordinate arrays. Emitters may add
//! a "criterion" object recording how the design was scored.
inline Json design_to_json(const Design& design, const std::string& model,
                           const Json& range) {
  Json j;
  j["model"] = model;
  j["range"] = range;
  j["n"] = design.n();
  Json levels = Json::array();
  Json reps = Json::array();
  for (const auto& p : design.points) {
    if (p.x.size() == 1)
      levels.push_back(p.x[0]);
    else
      levels.push_back(p.x);
    reps.push_back(p.rep);
  }
  j["levels"] = std::move(levels);
  j["reps"] = std::move(reps);
  return j;
}

inline Design design_from_json(const Json& j) {
  if (!j.contains("levels") || !j.contains("reps"))
    throw std::invalid_argument("design: needs 'levels' and 'reps'");
  const auto& levels = j.at("levels");
  const auto& reps = j.at("reps");
  if (levels.size() != reps.size())
    throw std::invalid_argument("design: levels/reps size mismatch");
  Design d;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    DesignPoint pt;
    if (levels[i].is_array())
      pt.x = levels[i].get<std::vector<double>>();
    else
      pt.x = {levels[i].get<double>()};
    pt.rep = reps[i].get<int>();
    d.points.push_back(std::move(pt));
  }
  d.validate();
  if (j.contains("n") && j.at("n").get<int>() != d.n())
    throw std::invalid_argument("design: stated n disagrees with reps");
  return d;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace fpdesign

#endif  // FPDESIGN_DESIGN_IO_HPP
