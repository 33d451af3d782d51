#ifndef FPDESIGN_PRIORS_HPP
#define FPDESIGN_PRIORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpdesign/param_point.hpp"
#include "fpdesign/power_transform.hpp"
#include "fpdesign/rng.hpp"

namespace fpdesign {

//! Discrete prior on a power exponent.
struct AlphaPrior {
  std::vector<PowerValue> support;
  std::vector<double> mass;

  void validate() const {
    if (support.empty() || support.size() != mass.size())
      throw std::invalid_argument("AlphaPrior: support/mass size mismatch");
    double total = 0.0;
    for (double m : mass) {
      if (m < 0.0) throw std::invalid_argument("AlphaPrior: negative mass");
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("AlphaPrior: masses must sum to 1, got " +
                                  std::to_string(total));
    for (std::size_t i = 0; i < support.size(); ++i)
      for (std::size_t j = i + 1; j < support.size(); ++j)
        if (support[i] == support[j])
          throw std::invalid_argument("AlphaPrior: duplicate support point");
  }
};

//! Prior on a regression coefficient: normal or point mass.
struct GammaPrior {
  enum class Kind { Normal, Point };
  Kind kind = Kind::Point;
  double mean = 0.0;  // point value when kind == Point
  double sd = 0.0;

  static GammaPrior normal(double mean, double sd) {
    if (!(sd > 0.0))
      throw std::invalid_argument("GammaPrior: normal sd must be positive");
    return {Kind::Normal, mean, sd};
  }
  static GammaPrior point(double value) { return {Kind::Point, value, 0.0}; }
};

//! Full prior specification: one alpha prior per factor, one gamma prior
//! per regression coefficient, a draw count and a seed.
struct PriorSpec {
  std::vector<AlphaPrior> alpha;
  std::vector<GammaPrior> gamma;
  int r = 200;
  std::uint64_t seed = 0;
  std::string rng = kRngName;

  void validate() const {
    if (alpha.empty()) throw std::invalid_argument("PriorSpec: no alpha prior");
    for (const auto& a : alpha) a.validate();
    if (r < 1) throw std::invalid_argument("PriorSpec: r must be >= 1");
    require_known_rng(rng);
  }
};

//! A set of parameter points with weights summing to one. Sampled sets
//! carry equal weights 1/r; quadrature sets carry product rule weights.
struct DrawSet {
  std::vector<ParamPoint> points;
  std::vector<double> weights;
  std::vector<std::string> notes;

  std::size_t size() const { return points.size(); }
};

//! Integer apportionment of r among probabilities by largest remainder;
//! counts deviate from r*p_j by less than 1. Ties go to the lower index.
inline std::vector<int> largest_remainder_counts(int r,
                                                 const std::vector<double>& p) {
  const std::size_t k = p.size();
  std::vector<int> counts(k);
  std::vector<std::pair<double, std::size_t>> rem(k);
  int assigned = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double exact = r * p[j];
    counts[j] = static_cast<int>(std::floor(exact));
    rem[j] = {exact - counts[j], j};
    assigned += counts[j];
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  for (int i = 0; i < r - assigned; ++i) counts[rem[i].second] += 1;
  return counts;
}

namespace detail {

struct AlphaAtom {
  std::vector<PowerValue> alpha;
  double mass;
};

//! Cartesian product of the per-factor alpha supports, first factor
//! varying slowest. Product masses.
inline std::vector<AlphaAtom> alpha_product(
    const std::vector<AlphaPrior>& priors) {
  std::vector<AlphaAtom> atoms{{{}, 1.0}};
  for (const auto& pr : priors) {
    std::vector<AlphaAtom> next;
    next.reserve(atoms.size() * pr.support.size());
    for (const auto& atom : atoms)
      for (std::size_t i = 0; i < pr.support.size(); ++i) {
        AlphaAtom a = atom;
        a.alpha.push_back(pr.support[i]);
        a.mass *= pr.mass[i];
        next.push_back(std::move(a));
      }
    atoms = std::move(next);
  }
  return atoms;
}

}  // namespace detail

//! Monte-Carlo draw set of size r. Alpha values are allocated
//! deterministically across the (product) support by largest remainder,
//! so the atom frequencies match the prior as closely as integers allow;
//! gamma values are sampled independently from their priors with the
//! seeded generator. The intercept is fixed at zero: it never enters the
//! weighted variances and shifts the determinant criterion only by a
//! constant.
inline DrawSet sample_draws(const PriorSpec& spec) {
  spec.validate();
  DrawSet out;
  const auto atoms = detail::alpha_product(spec.alpha);
  std::vector<double> masses;
  masses.reserve(atoms.size());
  int positive = 0;
  for (const auto& a : atoms) {
    masses.push_back(a.mass);
    if (a.mass > 0.0) ++positive;
  }
  if (spec.r < positive)
    out.notes.push_back("draw count r=" + std::to_string(spec.r) +
                        " below the " + std::to_string(positive) +
                        " positive-mass alpha atoms; some atoms unallocated");
  const auto counts = largest_remainder_counts(spec.r, masses);
  for (std::size_t j = 0; j < atoms.size(); ++j)
    if (counts[j] == 0 && atoms[j].mass > 0.0) {
      out.notes.push_back("alpha atom " + std::to_string(j) +
                          " received no draws");
    }

  SeededRng rng(spec.seed);
  out.points.reserve(spec.r);
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    for (int c = 0; c < counts[j]; ++c) {
      ParamPoint pt;
      pt.alpha = atoms[j].alpha;
      pt.gamma.reserve(spec.gamma.size());
      for (const auto& gp : spec.gamma)
        pt.gamma.push_back(gp.kind == GammaPrior::Kind::Point
                               ? gp.mean
                               : rng.normal(gp.mean, gp.sd));
      out.points.push_back(std::move(pt));
    }
  }
  out.weights.assign(out.points.size(), 1.0 / spec.r);
  return out;
}

enum class GammaQuadrature {
  GaussHermite3,  // 3-node rule per normal coefficient
  PointMass       // collapse normals to their means
};

//! Deterministic quadrature over the prior: full product of the discrete
//! alpha atoms with per-coefficient gamma nodes (3-node Gauss-Hermite for
//! normals, or their means under the point-mass fast path). Weights are
//! the product-rule weights and sum to one.
inline DrawSet quadrature_draws(
    const PriorSpec& spec, GammaQuadrature mode = GammaQuadrature::GaussHermite3) {
  spec.validate();
  const auto atoms = detail::alpha_product(spec.alpha);

  struct Node {
    double value, weight;
  };
  std::vector<std::vector<Node>> gamma_nodes;
  for (const auto& gp : spec.gamma) {
    if (gp.kind == GammaPrior::Kind::Point ||
        mode == GammaQuadrature::PointMass) {
      gamma_nodes.push_back({{gp.mean, 1.0}});
    } else {
      const double s = std::sqrt(3.0) * gp.sd;
      gamma_nodes.push_back({{gp.mean - s, 1.0 / 6.0},
                             {gp.mean, 2.0 / 3.0},
                             {gp.mean + s, 1.0 / 6.0}});
    }
  }

  double total_nodes = static_cast<double>(atoms.size());
  for (const auto& g : gamma_nodes) total_nodes *= g.size();
  if (total_nodes > 1e6)
    throw std::invalid_argument(
        "quadrature_draws: product grid exceeds 1e6 nodes");

  std::size_t combos = 1;
  for (const auto& g : gamma_nodes) combos *= g.size();

  DrawSet out;
  out.points.reserve(atoms.size() * combos);
  for (const auto& atom : atoms) {
    // last coefficient varies fastest
    for (std::size_t lin = 0; lin < combos; ++lin) {
      ParamPoint pt;
      pt.alpha = atom.alpha;
      double w = atom.mass;
      std::size_t rest = lin;
      pt.gamma.assign(gamma_nodes.size(), 0.0);
      for (std::size_t g = gamma_nodes.size(); g-- > 0;) {
        const auto& node = gamma_nodes[g][rest % gamma_nodes[g].size()];
        rest /= gamma_nodes[g].size();
        pt.gamma[g] = node.value;
        w *= node.weight;
      }
      out.points.push_back(std::move(pt));
      out.weights.push_back(w);
    }
  }
  return out;
}

}  // namespace fpdesign

#endif  // FPDESIGN_PRIORS_HPP
