#ifndef FPDESIGN_RUN_CONFIG_HPP
#define FPDESIGN_RUN_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpdesign/catalog.hpp"
#include "fpdesign/criterion.hpp"
#include "fpdesign/design_io.hpp"
#include "fpdesign/model_one_factor.hpp"
#include "fpdesign/model_two_factor.hpp"
#include "fpdesign/priors.hpp"
#include "fpdesign/report.hpp"
#include "fpdesign/search.hpp"

namespace fpdesign {

//! Parsed experiment definition. Every physical constant (grids, seeds,
//! priors, weights) comes from the config document, never from code.
struct RunConfig {
  std::string model;  // fp1 | fp2 | fp2x2
  double x_min = 0.1;
  double x1_min = 0.1, x2_min = 0.1;
  CriterionKind kind = CriterionKind::WeightedAs;
  WeightSpec weights;
  PriorSpec prior;
  bool quadrature = false;
  GammaQuadrature gamma_quadrature = GammaQuadrature::GaussHermite3;
  SearchConfig search;
  std::string algorithm = "point-exchange";
  bool refine_enabled = false;
  double refine_window = 0.0, refine_step = 0.0;

  struct DesignSpec {
    std::string label;
    Json spec;
  };
  std::vector<DesignSpec> designs;
  std::string reference = "optimize";

  int gamma_count() const {
    if (model == "fp1") return 1;
    if (model == "fp2") return 2;
    return 5;
  }
  int param_count() const {
    if (model == "fp1") return 3;
    if (model == "fp2") return 4;
    return 8;
  }
  Json range_json() const {
    Json r;
    if (model == "fp2x2") {
      r["x1_min"] = x1_min;
      r["x2_min"] = x2_min;
    } else {
      r["x_min"] = x_min;
    }
    return r;
  }
};

namespace detail {

inline std::vector<double> grid_from_json(const Json& g, double x_min) {
  std::vector<double> out;
  if (g.contains("levels")) {
    out = g.at("levels").get<std::vector<double>>();
  } else if (g.contains("step")) {
    const double step = g.at("step").get<double>();
    if (!(step > 0)) throw std::invalid_argument("grid: step must be positive");
    const int count = static_cast<int>(std::floor((1.0 - x_min) / step + 1e-9));
    for (int i = 0; i <= count; ++i) out.push_back(x_min + i * step);
    if (std::abs(out.back() - 1.0) > 1e-12) out.push_back(1.0);
    out.back() = 1.0;
  } else if (g.contains("count")) {
    const int k = g.at("count").get<int>();
    if (k < 2) throw std::invalid_argument("grid: count must be >= 2");
    for (int i = 0; i < k; ++i) out.push_back(x_min + i * (1.0 - x_min) / (k - 1));
    out.front() = x_min;
    out.back() = 1.0;
  } else {
    throw std::invalid_argument("grid: needs 'levels', 'step' or 'count'");
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline GammaPrior gamma_prior_from_json(const Json& j) {
  const std::string dist = j.at("dist").get<std::string>();
  if (dist == "normal")
    return GammaPrior::normal(j.at("mean").get<double>(),
                              j.at("sd").get<double>());
  if (dist == "point") return GammaPrior::point(j.at("value").get<double>());
  throw std::invalid_argument("gamma prior: unknown dist '" + dist + "'");
}

inline AlphaPrior alpha_prior_from_json(const Json& j) {
  AlphaPrior a;
  for (double v : j.at("support").get<std::vector<double>>())
    a.support.push_back(PowerValue(v));
  a.mass = j.at("mass").get<std::vector<double>>();
  a.validate();
  return a;
}

}  // namespace detail

inline RunConfig parse_run_config(const Json& j) {
  RunConfig rc;
  rc.model = j.at("model").get<std::string>();
  if (rc.model != "fp1" && rc.model != "fp2" && rc.model != "fp2x2")
    throw std::invalid_argument("config: unknown model '" + rc.model + "'");

  const auto& range = j.at("range");
  if (rc.model == "fp2x2") {
    rc.x1_min = range.at("x1_min").get<double>();
    rc.x2_min = range.at("x2_min").get<double>();
    TwoFactorRange{rc.x1_min, rc.x2_min}.validate();
  } else {
    rc.x_min = range.at("x_min").get<double>();
    FactorRange{rc.x_min}.validate();
  }

  const std::string kind = j.value("criterion", std::string("weighted-As"));
  if (kind == "weighted-As")
    rc.kind = CriterionKind::WeightedAs;
  else if (kind == "D")
    rc.kind = CriterionKind::D;
  else
    throw std::invalid_argument("config: unknown criterion '" + kind + "'");

  if (rc.kind == CriterionKind::WeightedAs) {
    if (rc.model == "fp2x2")
      throw std::invalid_argument(
          "config: weighted-As applies to the one-factor models only");
    rc.weights.w = j.at("weights").get<std::vector<double>>();
    rc.weights.validate(rc.model == "fp1" ? 2 : 3);
  }

  const auto& prior = j.at("prior");
  rc.prior.rng = prior.value("rng", std::string(kRngName));
  rc.prior.seed = prior.value("seed", std::uint64_t{0});
  rc.prior.r = prior.value("r", 1);
  for (const auto& a : prior.at("alpha"))
    rc.prior.alpha.push_back(detail::alpha_prior_from_json(a));
  for (const auto& g : prior.at("gamma"))
    rc.prior.gamma.push_back(detail::gamma_prior_from_json(g));
  if (static_cast<int>(rc.prior.alpha.size()) != (rc.model == "fp2x2" ? 2 : 1))
    throw std::invalid_argument("config: one alpha prior per factor required");
  if (static_cast<int>(rc.prior.gamma.size()) != rc.gamma_count())
    throw std::invalid_argument("config: expected " +
                                std::to_string(rc.gamma_count()) +
                                " gamma priors for model " + rc.model);
  const std::string method = prior.value("method", std::string("sample"));
  if (method == "quadrature")
    rc.quadrature = true;
  else if (method != "sample")
    throw std::invalid_argument("config: prior method must be sample|quadrature");
  const std::string gq = prior.value("gamma_quadrature", std::string("gh3"));
  rc.gamma_quadrature = gq == "point" ? GammaQuadrature::PointMass
                                      : GammaQuadrature::GaussHermite3;
  if (!rc.quadrature) rc.prior.validate();

  if (j.contains("search")) {
    const auto& s = j.at("search");
    rc.algorithm = s.value("algorithm", std::string("point-exchange"));
    rc.search.n = s.at("n").get<int>();
    rc.search.level_grid = detail::grid_from_json(
        s.at("grid"), rc.model == "fp2x2" ? rc.x1_min : rc.x_min);
    if (rc.model == "fp2x2")
      rc.search.level_grid2 =
          s.contains("grid2")
              ? detail::grid_from_json(s.at("grid2"), rc.x2_min)
              : detail::grid_from_json(s.at("grid"), rc.x2_min);
    rc.search.tries = s.value("tries", 3);
    rc.search.seed = s.value("seed", std::uint64_t{1});
    rc.search.max_levels = s.value("max_levels", 0);
    rc.search.budget = s.value("budget", 1e8);
    if (s.contains("refine")) {
      rc.refine_enabled = true;
      rc.refine_window = s.at("refine").at("window").get<double>();
      rc.refine_step = s.at("refine").at("step").get<double>();
    }
  }

  if (j.contains("designs"))
    for (const auto& d : j.at("designs"))
      rc.designs.push_back({d.at("label").get<std::string>(), d});
  rc.reference = j.value("reference", std::string("optimize"));
  return rc;
}

//! Dispatches a generic callable over the concrete model type.
template <class Fn>
auto with_model(const RunConfig& rc, Fn&& fn) {
  if (rc.model == "fp1") return fn(FirstOrderModel(FactorRange{rc.x_min}));
  if (rc.model == "fp2") return fn(SecondOrderModel(FactorRange{rc.x_min}));
  return fn(TwoFactorModel(TwoFactorRange{rc.x1_min, rc.x2_min}));
}

inline DrawSet make_draws(const RunConfig& rc) {
  return rc.quadrature ? quadrature_draws(rc.prior, rc.gamma_quadrature)
                       : sample_draws(rc.prior);
}

template <class Model>
SearchResult run_search(const Model& model, const RunConfig& rc,
                        const DrawSet& draws, int threads, bool verbose,
                        std::ostream* log) {
  SearchConfig cfg = rc.search;
  cfg.threads = threads;
  cfg.verbose = verbose;
  cfg.log = log;
  if constexpr (Model::kFactors == 2) {
    if (rc.algorithm != "coordinate-exchange")
      throw std::invalid_argument(
          "config: the two-factor model is searched by coordinate-exchange");
    return coordinate_exchange(model, cfg, draws, rc.kind);
  } else {
    SearchResult res;
    if (rc.algorithm == "point-exchange")
      res = point_exchange(model, cfg, draws, rc.kind, rc.weights);
    else if (rc.algorithm == "complete")
      res = complete_search(model, cfg, draws, rc.kind, rc.weights);
    else
      throw std::invalid_argument("config: unknown algorithm '" +
                                  rc.algorithm + "'");
    if (rc.refine_enabled)
      res = refine(model, res.design, cfg, rc.refine_window, rc.refine_step,
                   draws, rc.kind, rc.weights);
    return res;
  }
}

//! Materializes a design entry: inline levels/reps, an external design
//! file, or a named catalog family.
template <class Model>
Design resolve_design(const Model& model, const RunConfig& rc,
                      const RunConfig::DesignSpec& spec, int threads) {
  const Json& j = spec.spec;
  Design d;
  if (j.contains("file")) {
    d = design_from_json(load_json_file(j.at("file").get<std::string>()));
  } else if (j.contains("catalog")) {
    const auto& c = j.at("catalog");
    const std::string family = c.at("family").get<std::string>();
    if constexpr (Model::kFactors == 1) {
      const FactorRange range = model.range();
      const int n = c.value("n", rc.search.n);
      if (family == "equally-spaced") {
        d = equally_spaced(c.at("k").get<int>(),
                           PowerValue(c.at("metric_alpha").get<double>()), n,
                           range);
      } else if (family == "ccd3" || family == "ccd5") {
        d = ccd_projection(family == "ccd3" ? CcdKind::ThreeLevel
                                            : CcdKind::FiveLevel,
                           PowerValue(c.at("metric_alpha").get<double>()), n,
                           range);
      } else if (family == "locally-optimal") {
        ParamPoint theta;
        theta.gamma = c.at("gamma").get<std::vector<double>>();
        for (double a : c.at("alpha").get<std::vector<double>>())
          theta.alpha.push_back(PowerValue(a));
        SearchConfig cfg = rc.search;
        cfg.threads = threads;
        cfg.n = n;
        cfg.tries = c.value("tries", rc.search.tries);
        d = locally_optimal(model, theta, cfg, rc.kind, rc.weights).design;
      } else {
        throw std::invalid_argument("catalog: unknown family '" + family + "'");
      }
    } else {
      throw std::invalid_argument(
          "catalog families are defined for one-factor designs");
    }
  } else {
    d = design_from_json(j);
  }
  d = d.normalized();
  if (d.factors() != Model::kFactors)
    throw std::invalid_argument("design '" + spec.label +
                                "': factor count does not match the model");
  for (const auto& p : d.points) {
    bool inside;
    if constexpr (Model::kFactors == 1)
      inside = model.range().contains(p.x[0]);
    else
      inside = model.range().contains(p.x[0], p.x[1]);
    if (!inside)
      throw std::invalid_argument("design '" + spec.label +
                                  "': level outside the factor range");
  }
  return d;
}

//! Shared-draw comparison: reference first at 100, remaining rows sorted
//! by descending efficiency. Singular candidates keep a zero efficiency
//! and a flag.
template <class Model>
DesignTable run_compare(const Model& model, const RunConfig& rc,
                        const DrawSet& draws, int threads, bool verbose,
                        std::ostream* log) {
  DesignTable table;
  TableRow ref_row;
  ref_row.reference = true;
  if (rc.reference == "optimize") {
    const auto res = run_search(model, rc, draws, threads, verbose, log);
    ref_row.label = "optimal";
    ref_row.design = res.design;
    ref_row.value = res.value;
  } else {
    bool found = false;
    for (const auto& spec : rc.designs)
      if (spec.label == rc.reference) {
        ref_row.label = spec.label;
        ref_row.design = resolve_design(model, rc, spec, threads);
        ref_row.value =
            bayes_criterion(model, ref_row.design, draws, rc.kind, rc.weights)
                .value;
        found = true;
      }
    if (!found)
      throw std::invalid_argument("config: reference label '" + rc.reference +
                                  "' not among the designs");
  }
  ref_row.efficiency = 100.0;
  table.rows.push_back(ref_row);

  for (const auto& spec : rc.designs) {
    if (spec.label == rc.reference) continue;
    TableRow row;
    row.label = spec.label;
    row.design = resolve_design(model, rc, spec, threads);
    try {
      row.value =
          bayes_criterion(model, row.design, draws, rc.kind, rc.weights).value;
      row.efficiency = efficiency_from_values(row.value, ref_row.value,
                                              rc.kind, Model::kParams);
      row.singular = std::isinf(row.value);
      if (row.singular) row.efficiency = 0.0;
    } catch (const SingularInformation&) {
      row.value = worst_value(rc.kind);
      row.efficiency = 0.0;
      row.singular = true;
    }
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin() + 1, table.rows.end(),
                   [](const TableRow& a, const TableRow& b) {
                     return a.efficiency > b.efficiency;
                   });
  for (const auto& note : draws.notes) table.notes.push_back(note);
  return table;
}

}  // namespace fpdesign

#endif  // FPDESIGN_RUN_CONFIG_HPP
