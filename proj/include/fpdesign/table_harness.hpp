#ifndef FPDESIGN_TABLE_HARNESS_HPP
#define FPDESIGN_TABLE_HARNESS_HPP

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpdesign/run_config.hpp"

namespace fpdesign {

struct CellCheck {
  std::string cell;
  double got = 0.0, want = 0.0, tol = 0.0;
  bool pass = false;
  std::string note;
};

struct TableResult {
  std::string id, title;
  std::string text;     //!< human-readable rendering of the regenerated table
  Json output;          //!< machine-readable rendering
  std::vector<CellCheck> checks;
  bool pass = true;

  void add_check(CellCheck c) {
    pass = pass && c.pass;
    checks.push_back(std::move(c));
  }
  void check_value(const std::string& cell, double got, double want,
                   double tol) {
    add_check({cell, got, want, tol, std::abs(got - want) <= tol, ""});
  }
  void check_flag(const std::string& cell, bool ok, const std::string& note) {
    add_check({cell, ok ? 1.0 : 0.0, 1.0, 0.0, ok, note});
  }
};

namespace detail {

//! Clusters a one-factor design onto target levels: every level must fall
//! within tol of some target; per-target replications are summed.
struct ClusterResult {
  bool within = true;
  std::vector<int> reps;
  std::vector<double> mean_level;
};

inline ClusterResult cluster_design(const Design& d,
                                    const std::vector<double>& targets,
                                    double tol) {
  ClusterResult out;
  out.reps.assign(targets.size(), 0);
  out.mean_level.assign(targets.size(), 0.0);
  std::vector<double> wsum(targets.size(), 0.0);
  for (const auto& p : d.points) {
    int best = 0;
    for (std::size_t t = 1; t < targets.size(); ++t)
      if (std::abs(p.x[0] - targets[t]) < std::abs(p.x[0] - targets[best]))
        best = static_cast<int>(t);
    if (std::abs(p.x[0] - targets[best]) > tol + 1e-12) out.within = false;
    out.reps[best] += p.rep;
    wsum[best] += p.rep * p.x[0];
  }
  for (std::size_t t = 0; t < targets.size(); ++t)
    if (out.reps[t]) out.mean_level[t] = wsum[t] / out.reps[t];
  return out;
}

inline std::string matrix_text(const std::string& title,
                               const std::vector<std::string>& row_labels,
                               const std::vector<std::string>& col_labels,
                               const std::vector<std::vector<double>>& cells) {
  std::ostringstream os;
  os << title << '\n';
  std::size_t wl = 0;
  for (const auto& r : row_labels) wl = std::max(wl, r.size());
  os << std::string(wl, ' ');
  for (const auto& c : col_labels)
    os << std::string(c.size() < 9 ? 9 - c.size() : 1, ' ') << c;
  os << '\n';
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    os << row_labels[r] << std::string(wl - row_labels[r].size(), ' ');
    for (double v : cells[r]) {
      const std::string cell = format_fixed(v, 2);
      os << std::string(cell.size() < 9 ? 9 - cell.size() : 1, ' ') << cell;
    }
    os << '\n';
  }
  return os.str();
}

inline Json matrix_json(const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels,
                        const std::vector<std::vector<double>>& cells) {
  Json j;
  j["row_labels"] = row_labels;
  j["col_labels"] = col_labels;
  j["cells"] = cells;
  return j;
}

//! Quadrature draw set over a two-factor alpha prior product with the
//! coefficients held at point values.
inline DrawSet product_quadrature(const std::vector<double>& support,
                                  const std::vector<double>& mass1,
                                  const std::vector<double>& mass2,
                                  const std::vector<double>& gammas) {
  PriorSpec spec;
  AlphaPrior a1, a2;
  for (double v : support) {
    a1.support.push_back(PowerValue(v));
    a2.support.push_back(PowerValue(v));
  }
  a1.mass = mass1;
  a2.mass = mass2;
  spec.alpha = {a1, a2};
  for (double g : gammas) spec.gamma.push_back(GammaPrior::point(g));
  return quadrature_draws(spec, GammaQuadrature::PointMass);
}

inline DrawSet single_point(const std::vector<double>& gammas,
                            const std::vector<double>& alphas) {
  DrawSet d;
  ParamPoint pt;
  pt.gamma = gammas;
  for (double a : alphas) pt.alpha.push_back(PowerValue(a));
  d.points = {pt};
  d.weights = {1.0};
  return d;
}

}  // namespace detail

//! ---- compare tables (first/second order rosters) ----
inline TableResult run_compare_table(const Json& spec, int threads,
                                     bool verbose, std::ostream* log) {
  TableResult out;
  out.id = spec.at("id").get<std::string>();
  out.title = spec.value("title", out.id);
  const RunConfig rc = parse_run_config(spec.at("config"));
  const DrawSet draws = make_draws(rc);

  const DesignTable table = with_model(rc, [&](const auto& model) {
    return run_compare(model, rc, draws, threads, verbose, log);
  });
  out.text = to_text(table);
  out.output = table_to_json(table);

  if (!spec.contains("fixture")) return out;
  for (const auto& frow : spec.at("fixture").at("rows")) {
    const std::string label = frow.at("label").get<std::string>();
    const TableRow* row = nullptr;
    for (const auto& r : table.rows)
      if (r.label == label) row = &r;
    if (!row) {
      out.check_flag(label, false, "row missing from the regenerated table");
      continue;
    }
    if (frow.contains("efficiency"))
      out.check_value(label + " efficiency", row->efficiency,
                      frow.at("efficiency").get<double>(),
                      frow.value("tol", 5.0));
    if (frow.contains("cluster")) {
      const auto& c = frow.at("cluster");
      const auto targets = c.at("levels").get<std::vector<double>>();
      const auto reps = c.at("reps").get<std::vector<int>>();
      const auto cl = detail::cluster_design(row->design, targets,
                                             c.value("tol_level", 0.011));
      out.check_flag(label + " levels", cl.within,
                     "levels within tolerance of the printed ones");
      out.check_flag(label + " reps", cl.reps == reps,
                     "replications match the printed pattern");
    }
    if (frow.contains("equivalent")) {
      // the printed design must be criterion-equivalent to our row under
      // the shared draws
      const auto& e = frow.at("equivalent");
      Design printed;
      const auto lv = e.at("levels").get<std::vector<double>>();
      const auto rp = e.at("reps").get<std::vector<int>>();
      for (std::size_t i = 0; i < lv.size(); ++i)
        printed.points.push_back({{lv[i]}, rp[i]});
      const double v = with_model(rc, [&](const auto& model) {
        return bayes_criterion(model, printed, draws, rc.kind, rc.weights)
            .value;
      });
      const double eff = efficiency_from_values(v, row->value, rc.kind,
                                                rc.param_count());
      const double min_eff = e.value("min_eff", 97.0);
      out.add_check({label + " printed-design equivalence", eff, 100.0,
                     100.0 - min_eff, eff >= min_eff && eff <= 100.5, ""});
    }
  }
  return out;
}

//! ---- sensitivity tables (prior/weight variations of the optimum) ----
inline TableResult run_sensitivity_table(const Json& spec, int threads,
                                         bool verbose, std::ostream* log) {
  TableResult out;
  out.id = spec.at("id").get<std::string>();
  out.title = spec.value("title", out.id);
  const Json& cfg = spec.at("config");

  DesignTable table;
  std::ostringstream text;
  for (const auto& kase : cfg.at("cases")) {
    Json run = cfg.at("base");
    run["prior"]["gamma"] = kase.at("gamma");
    if (kase.contains("weights")) run["weights"] = kase.at("weights");
    if (kase.contains("n")) run["search"]["n"] = kase.at("n");
    const RunConfig rc = parse_run_config(run);
    const DrawSet draws = make_draws(rc);
    const std::string label = kase.at("label").get<std::string>();
    const auto res = with_model(rc, [&](const auto& model) {
      return run_search(model, rc, draws, threads, verbose, log);
    });
    TableRow row;
    row.label = label;
    row.design = res.design;
    row.value = res.value;
    row.efficiency = 100.0;
    table.rows.push_back(row);

    if (spec.contains("fixture")) {
      for (const auto& frow : spec.at("fixture").at("rows")) {
        if (frow.at("label").get<std::string>() != label) continue;
        const std::string mode = frow.value("mode", std::string("cluster"));
        const auto lv = frow.at("levels").get<std::vector<double>>();
        const auto rp = frow.at("reps").get<std::vector<int>>();
        if (mode == "cluster") {
          const auto cl = detail::cluster_design(res.design, lv,
                                                 frow.value("tol_level", 0.03));
          out.check_flag(label + " levels", cl.within,
                         "levels within tolerance of the printed ones");
          out.check_flag(label + " reps", cl.reps == rp,
                         "replications match the printed pattern");
        } else if (mode == "equivalent") {
          Design printed;
          for (std::size_t i = 0; i < lv.size(); ++i)
            printed.points.push_back({{lv[i]}, rp[i]});
          const double v = with_model(rc, [&](const auto& model) {
            return bayes_criterion(model, printed, draws, rc.kind, rc.weights)
                .value;
          });
          const double eff = efficiency_from_values(v, res.value, rc.kind,
                                                    rc.param_count());
          const double min_eff = frow.value("min_eff", 97.0);
          out.add_check({label + " printed-design equivalence", eff, 100.0,
                         100.0 - min_eff, eff >= min_eff && eff <= 100.5, ""});
        }
      }
    }
  }
  table.title = out.title;
  out.text = to_text(table);
  out.output = table_to_json(table);
  return out;
}

//! ---- prior table echo ----
inline TableResult run_priors_table(const Json& spec) {
  TableResult out;
  out.id = spec.at("id").get<std::string>();
  out.title = spec.value("title", out.id);
  const Json& cfg = spec.at("config");
  out.output["support"] = cfg.at("support");
  out.output["rows"] = cfg.at("rows");
  std::ostringstream os;
  os << out.title << '\n';
  for (const auto& [name, mass] : cfg.at("rows").items()) {
    os << name << ':';
    for (const auto& m : mass) os << ' ' << m.get<double>();
    os << '\n';
  }
  out.text = os.str();
  if (spec.contains("fixture")) {
    const auto& f = spec.at("fixture");
    out.check_flag("support", f.at("support") == cfg.at("support"),
                   "support set echoes the fixture");
    out.check_flag("rows", f.at("rows") == cfg.at("rows"),
                   "prior masses echo the fixture");
    for (const auto& [name, mass] : cfg.at("rows").items()) {
      double s = 0.0;
      for (const auto& m : mass) s += m.get<double>();
      out.check_flag("mass sum " + name, std::abs(s - 1.0) < 1e-12,
                     "masses sum to one");
    }
  }
  return out;
}

//! ---- local D-efficiency grid (two factors) ----
inline TableResult run_local_d_grid(const Json& spec, int threads,
                                    bool verbose, std::ostream* log) {
  TableResult out;
  out.id = spec.at("id").get<std::string>();
  out.title = spec.value("title", out.id);
  const Json& cfg = spec.at("config");
  const TwoFactorModel model(
      TwoFactorRange{cfg.at("range").at("x1_min").get<double>(),
                     cfg.at("range").at("x2_min").get<double>()});
  SearchConfig scfg;
  scfg.n = cfg.at("n").get<int>();
  scfg.level_grid =
      detail::grid_from_json(cfg.at("grid"), model.range().x1_min);
  scfg.level_grid2 =
      detail::grid_from_json(cfg.at("grid"), model.range().x2_min);
  scfg.tries = cfg.value("tries", 24);
  scfg.seed = cfg.value("seed", std::uint64_t{91});
  scfg.threads = threads;
  scfg.verbose = verbose;
  scfg.log = log;

  const auto gammas = cfg.at("gamma").get<std::vector<double>>();
  const auto design_alphas = cfg.at("design_alphas").get<std::vector<double>>();
  std::vector<std::vector<double>> truths;
  for (const auto& t : cfg.at("truths"))
    truths.push_back(t.get<std::vector<double>>());

  std::vector<Design> cols(design_alphas.size());
  std::vector<std::string> col_labels;
  for (std::size_t c = 0; c < design_alphas.size(); ++c) {
    const auto draws =
        detail::single_point(gammas, {design_alphas[c], design_alphas[c]});
    cols[c] = coordinate_exchange(model, scfg, draws, CriterionKind::D).design;
    col_labels.push_back(detail::format_fixed(design_alphas[c], 1));
  }

  std::vector<std::string> row_labels;
  std::vector<std::vector<double>> cells;
  std::vector<double> loss_sum(cols.size(), 0.0), loss_max(cols.size(), 0.0);
  for (const auto& truth : truths) {
    const auto draws = detail::single_point(gammas, truth);
    double ref_value = 0.0;
    bool diagonal = false;
    for (std::size_t c = 0; c < design_alphas.size(); ++c)
      if (truth[0] == design_alphas[c] && truth[1] == design_alphas[c]) {
        ref_value =
            bayes_criterion(model, cols[c], draws, CriterionKind::D).value;
        diagonal = true;
      }
    if (!diagonal)
      ref_value = coordinate_exchange(model, scfg, draws, CriterionKind::D).value;
    std::vector<double> row;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double v =
          bayes_criterion(model, cols[c], draws, CriterionKind::D).value;
      const double eff =
          efficiency_from_values(v, ref_value, CriterionKind::D, 8);
      row.push_back(eff);
      loss_sum[c] += 100.0 - eff;
      loss_max[c] = std::max(loss_max[c], 100.0 - eff);
    }
    cells.push_back(row);
    row_labels.push_back("(" + detail::format_fixed(truth[0], 1) + "," +
                         detail::format_fixed(truth[1], 1) + ")");
  }
  std::vector<double> mean_loss;
  for (std::size_t c = 0; c < cols.size(); ++c)
    mean_loss.push_back(loss_sum[c] / truths.size());

  out.output = detail::matrix_json(row_labels, col_labels, cells);
  out.output["mean_loss"] = mean_loss;
  out.output["max_loss"] = loss_max;
  Json jd = Json::array();
  for (const auto& d : cols)
    jd.push_back(design_to_json(d, "fp2x2", cfg.at("range")));
  out.output["column_designs"] = jd;
  out.text = detail::matrix_text(out.title, row_labels, col_labels, cells);

  if (spec.contains("fixture")) {
    const auto& f = spec.at("fixture");
    const auto want = f.at("matrix").get<std::vector<std::vector<double>>>();
    const double tol = f.value("tol", 2.0);
    for (std::size_t r = 0; r < want.size(); ++r)
      for (std::size_t c = 0; c < want[r].size(); ++c)
        out.check_value(row_labels[r] + " vs " + col_labels[c], cells[r][c],
                        want[r][c], tol);
    for (std::size_t r = 0; r < cells.size(); ++r)
      for (std::size_t c = 0; c < cells[r].size(); ++c)
        if (row_labels[r] ==
            "(" + col_labels[c] + "," + col_labels[c] + ")")
          out.check_flag("diagonal " + col_labels[c], cells[r][c] == 100.0,
                         "self-efficiency exactly 100");

  }
  return out;
}

//! ---- Bayesian D grids over alpha-prior products (two factors) ----
inline TableResult run_bayes_d_grid(const Json& spec, int threads,
                                    bool verbose, std::ostream* log,
                                    bool locals_as_columns) {
  TableResult out;
  out.id = spec.at("id").get<std::string>();
  out.title = spec.value("title", out.id);
  const Json& cfg = spec.at("config");
  const TwoFactorModel model(
      TwoFactorRange{cfg.at("range").at("x1_min").get<double>(),
                     cfg.at("range").at("x2_min").get<double>()});
  SearchConfig scfg;
  scfg.n = cfg.at("n").get<int>();
  scfg.level_grid =
      detail::grid_from_json(cfg.at("grid"), model.range().x1_min);
  scfg.level_grid2 =
      detail::grid_from_json(cfg.at("grid"), model.range().x2_min);
  scfg.tries = cfg.value("tries", 24);
  scfg.seed = cfg.value("seed", std::uint64_t{7});
  scfg.threads = threads;
  scfg.verbose = verbose;
  scfg.log = log;

  const auto support = cfg.at("support").get<std::vector<double>>();
  const auto gammas = cfg.at("gamma").get<std::vector<double>>();
  std::map<std::string, std::vector<double>> prior_rows;
  for (const auto& [name, mass] : cfg.at("prior_rows").items())
    prior_rows[name] = mass.get<std::vector<double>>();
  const auto products = cfg.at("products").get<std::vector<std::string>>();

  auto product_draws = [&](const std::string& label) {
    // e.g. "U1R2": prior U on factor 1, prior R on factor 2
    const std::string p1(1, label[0]), p2(1, label[2]);
    return detail::product_quadrature(support, prior_rows.at(p1),
                                      prior_rows.at(p2), gammas);
  };

  std::vector<DrawSet> draws;
  std::vector<Design> bayes_designs;
  std::vector<double> self_values;
  for (const auto& label : products) {
    draws.push_back(product_draws(label));
    const auto res =
        coordinate_exchange(model, scfg, draws.back(), CriterionKind::D);
    bayes_designs.push_back(res.design);
    self_values.push_back(res.value);
  }

  std::vector<Design> columns;
  std::vector<std::string> col_labels;
  if (locals_as_columns) {
    for (double a : cfg.at("design_alphas").get<std::vector<double>>()) {
      columns.push_back(coordinate_exchange(model, scfg,
                                            detail::single_point(gammas, {a, a}),
                                            CriterionKind::D)
                            .design);
      col_labels.push_back("a=" + detail::format_fixed(a, 1));
    }
  } else {
    columns = bayes_designs;
    col_labels = products;
  }

  std::vector<std::vector<double>> cells;
  std::vector<double> loss_sum(columns.size(), 0.0), loss_max(columns.size(), 0.0);
  for (std::size_t r = 0; r < products.size(); ++r) {
    std::vector<double> row;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const double v =
          bayes_criterion(model, columns[c], draws[r], CriterionKind::D).value;
      const double eff =
          efficiency_from_values(v, self_values[r], CriterionKind::D, 8);
      row.push_back(eff);
      loss_sum[c] += 100.0 - eff;
      loss_max[c] = std::max(loss_max[c], 100.0 - eff);
    }
    cells.push_back(row);
  }
  std::vector<double> mean_loss;
  for (std::size_t c = 0; c < columns.size(); ++c)
    mean_loss.push_back(loss_sum[c] / products.size());

  out.output = detail::matrix_json(products, col_labels, cells);
  out.output["mean_loss"] = mean_loss;
  out.output["max_loss"] = loss_max;
  out.text = detail::matrix_text(out.title, products, col_labels, cells);

  if (spec.contains("fixture")) {
    const auto& f = spec.at("fixture");
    const auto want = f.at("matrix").get<std::vector<std::vector<double>>>();
    const double tol = f.value("tol", 3.0);
    for (std::size_t r = 0; r < want.size(); ++r)
      for (std::size_t c = 0; c < want[r].size(); ++c)
        out.check_value(products[r] + " vs " + col_labels[c], cells[r][c],
                        want[r][c], tol);
    if (f.contains("min_eff")) {
      double lo = 1e9;
      for (const auto& row : cells)
        for (double v : row) lo = std::min(lo, v);
      out.check_flag("all cells at least " +
                         detail::format_fixed(f.at("min_eff").get<double>(), 0),
                     lo >= f.at("min_eff").get<double>(), "");
    }
    if (f.contains("mean_loss_checks"))
      for (const auto& chk : f.at("mean_loss_checks")) {
        const int c = chk.at("col").get<int>();
        out.check_value("mean loss " + col_labels[c], mean_loss[c],
                        chk.at("want").get<double>(),
                        chk.at("tol").get<double>());
      }
    if (f.contains("max_loss_checks"))
      for (const auto& chk : f.at("max_loss_checks")) {
        const int c = chk.at("col").get<int>();
        out.check_value("max loss " + col_labels[c], loss_max[c],
                        chk.at("want").get<double>(),
                        chk.at("tol").get<double>());
      }
    if (f.contains("smallest_mean_loss_col")) {
      const int want_col = f.at("smallest_mean_loss_col").get<int>();
      int got = 0;
      for (std::size_t c = 1; c < mean_loss.size(); ++c)
        if (mean_loss[c] < mean_loss[got]) got = static_cast<int>(c);
      out.check_flag("smallest mean loss at " + col_labels[want_col],
                     got == want_col, "");
    }
    if (f.contains("largest_max_loss_col")) {
      const int want_col = f.at("largest_max_loss_col").get<int>();
      int got = 0;
      for (std::size_t c = 1; c < loss_max.size(); ++c)
        if (loss_max[c] > loss_max[got]) got = static_cast<int>(c);
      out.check_flag("largest max loss at " + col_labels[want_col],
                     got == want_col, "");
    }
  }
  return out;
}

inline TableResult run_table(const Json& spec, int threads = 1,
                             bool verbose = false, std::ostream* log = nullptr) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "compare") return run_compare_table(spec, threads, verbose, log);
  if (kind == "sensitivity")
    return run_sensitivity_table(spec, threads, verbose, log);
  if (kind == "priors") return run_priors_table(spec);
  if (kind == "local-d-grid") return run_local_d_grid(spec, threads, verbose, log);
  if (kind == "bayes-d-grid")
    return run_bayes_d_grid(spec, threads, verbose, log, false);
  if (kind == "bayes-of-local")
    return run_bayes_d_grid(spec, threads, verbose, log, true);
  throw std::invalid_argument("table: unknown kind '" + kind + "'");
}

}  // namespace fpdesign

#endif  // FPDESIGN_TABLE_HARNESS_HPP
