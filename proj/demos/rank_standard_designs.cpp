// Builds the pseudo-Bayesian optimum for a 12-run first-order experiment
// and ranks a few standard designs against it.
#include <cstdio>
#include <iostream>

#include "fpdesign/catalog.hpp"
#include "fpdesign/criterion.hpp"
#include "fpdesign/priors.hpp"
#include "fpdesign/report.hpp"
#include "fpdesign/search.hpp"

using namespace fpdesign;

int main() {
  FirstOrderModel model(FactorRange{0.1});

  PriorSpec prior;
  AlphaPrior alpha;
  for (double a : kCanonicalPowerSet) alpha.support.push_back(PowerValue(a));
  alpha.mass = {0.15, 0.25, 0.25, 0.15, 0.10, 0.07, 0.03};
  prior.alpha = {alpha};
  prior.gamma = {GammaPrior::normal(2.5, 1.5)};
  prior.r = 200;
  prior.seed = 2002;
  const DrawSet draws = sample_draws(prior);
  const WeightSpec weights{{1.0, 1.0}};

  SearchConfig cfg;
  cfg.n = 12;
  for (int i = 0; i <= 90; ++i) cfg.level_grid.push_back(0.1 + 0.01 * i);
  cfg.level_grid.back() = 1.0;
  cfg.tries = 3;
  cfg.seed = 17;

  auto best = point_exchange(model, cfg, draws, CriterionKind::WeightedAs, weights);
  best = refine(model, best.design, cfg, 0.01, 0.001, draws,
                CriterionKind::WeightedAs, weights);

  DesignTable table;
  table.title = "12-run first-order designs, expected weighted variance";
  TableRow ref{"optimal", best.design, best.value, 100.0, true, false};
  table.rows.push_back(ref);
  const FactorRange range{0.1};
  const std::pair<const char*, Design> rivals[] = {
      {"4 levels, log-spaced", equally_spaced(4, PowerValue(0.0), 12, range)},
      {"4 levels, inverse-root", equally_spaced(4, PowerValue(-0.5), 12, range)},
      {"3-level CCD projection", ccd_projection(CcdKind::ThreeLevel, PowerValue(1.0), 12, range)},
      {"5-level CCD projection", ccd_projection(CcdKind::FiveLevel, PowerValue(1.0), 12, range)},
  };
  for (const auto& [label, d] : rivals) {
    TableRow row;
    row.label = label;
    row.design = d;
    row.value =
        bayes_criterion(model, d, draws, CriterionKind::WeightedAs, weights).value;
    row.efficiency =
        efficiency_from_values(row.value, best.value, CriterionKind::WeightedAs, 3);
    table.rows.push_back(row);
  }
  std::cout << to_text(table);
  return 0;
}
