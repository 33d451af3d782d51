#ifndef FPDESIGN_DESIGN_HPP
#define FPDESIGN_DESIGN_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpdesign {

//! One support point of an exact design: a factor-level vector and its
//! integer replication.
struct DesignPoint {
  std::vector<double> x;
  int rep = 1;
};

//! Exact design: a multiset of support points with replications summing
//! to the run count. Two designs with the same multiset compare equal
//! regardless of point order; equal-level entries merge under
//! normalization.
struct Design {
  std::vector<DesignPoint> points;

  int n() const {
    int total = 0;
    for (const auto& p : points) total += p.rep;
    return total;
  }

  int factors() const { return points.empty() ? 0 : int(points[0].x.size()); }

  int distinct_levels() const { return int(points.size()); }

  void validate() const {
    if (points.empty()) throw std::invalid_argument("Design: empty design");
    const std::size_t f = points[0].x.size();
    for (const auto& p : points) {
      if (p.x.size() != f)
        throw std::invalid_argument("Design: inconsistent factor counts");
      if (p.rep < 1)
        throw std::invalid_argument("Design: replications must be >= 1");
    }
  }

  //! Canonical form: points sorted lexicographically, equal levels merged.
  Design normalized() const {
    Design d = *this;
    std::sort(d.points.begin(), d.points.end(),
              [](const DesignPoint& a, const DesignPoint& b) {
                return a.x < b.x;
              });
    std::vector<DesignPoint> merged;
    for (const auto& p : d.points) {
      if (!merged.empty() && merged.back().x == p.x)
        merged.back().rep += p.rep;
      else
        merged.push_back(p);
    }
    d.points = std::move(merged);
    return d;
  }

  friend bool operator==(const Design& a, const Design& b) {
    const Design na = a.normalized(), nb = b.normalized();
    if (na.points.size() != nb.points.size()) return false;
    for (std::size_t i = 0; i < na.points.size(); ++i)
      if (na.points[i].x != nb.points[i].x ||
          na.points[i].rep != nb.points[i].rep)
        return false;
    return true;
  }
  friend bool operator!=(const Design& a, const Design& b) {
    return !(a == b);
  }
};

//! One-factor convenience constructor.
inline Design make_design(const std::vector<double>& levels,
                          const std::vector<int>& reps) {
  if (levels.size() != reps.size())
    throw std::invalid_argument("make_design: levels/reps size mismatch");
  Design d;
  for (std::size_t i = 0; i < levels.size(); ++i)
    d.points.push_back({{levels[i]}, reps[i]});
  d.validate();
  return d;
}

//! Two-factor convenience constructor.
inline Design make_design2(const std::vector<std::pair<double, double>>& pts,
                           const std::vector<int>& reps) {
  if (pts.size() != reps.size())
    throw std::invalid_argument("make_design2: points/reps size mismatch");
  Design d;
  for (std::size_t i = 0; i < pts.size(); ++i)
    d.points.push_back({{pts[i].first, pts[i].second}, reps[i]});
  d.validate();
  return d;
}

}  // namespace fpdesign

#endif  // FPDESIGN_DESIGN_HPP
