// fpdesign: pseudo-Bayesian optimal design construction and comparison for
// fractional polynomial response surface models.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fpdesign/catalog.hpp"
#include "fpdesign/design_io.hpp"
#include "fpdesign/run_config.hpp"
#include "fpdesign/table_harness.hpp"

using namespace fpdesign;

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("FPDESIGN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void apply_seed_override(RunConfig& rc, std::int64_t seed) {
  if (seed < 0) return;
  rc.prior.seed = static_cast<std::uint64_t>(seed);
  rc.search.seed = static_cast<std::uint64_t>(seed);
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << body;
}

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "text";
  std::int64_t seed = -1;
  int threads = 0;
  bool verbose = false;
};

int cmd_optimize(const CommonOpts& opt) {
  const RunConfig base = parse_run_config(load_json_file(opt.config_path));
  RunConfig rc = base;
  apply_seed_override(rc, opt.seed);
  const int threads = resolve_threads(opt.threads);
  const DrawSet draws = make_draws(rc);
  for (const auto& note : draws.notes) std::cerr << "note: " << note << '\n';

  const SearchResult res = with_model(rc, [&](const auto& model) {
    return run_search(model, rc, draws, threads, opt.verbose, &std::cerr);
  });

  Json design_json = design_to_json(res.design, rc.model, rc.range_json());
  design_json["criterion"] = Json{{"kind", to_string(rc.kind)},
                                  {"value", res.value},
                                  {"n_draws", draws.size()},
                                  {"prior_seed", rc.prior.seed},
                                  {"search_seed", rc.search.seed}};
  if (!opt.out_path.empty()) write_json_file(opt.out_path, design_json);

  if (opt.format == "json") {
    Json j = design_json;
    j["per_try_values"] = res.per_try_values;
    j["evaluations"] = res.evaluations;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "criterion " << to_string(rc.kind) << " value "
              << detail::format_fixed(res.value, 10) << " over " << draws.size()
              << " draws\n";
    std::cout << "levels ";
    for (const auto& p : res.design.points) {
      if (p.x.size() == 1)
        std::cout << detail::format_fixed(p.x[0], 4);
      else
        std::cout << '(' << detail::format_fixed(p.x[0], 4) << ','
                  << detail::format_fixed(p.x[1], 4) << ')';
      std::cout << " x" << p.rep << "  ";
    }
    std::cout << "\nevaluations " << res.evaluations << '\n';
  }
  return 0;
}

int cmd_compare(const CommonOpts& opt) {
  RunConfig rc = parse_run_config(load_json_file(opt.config_path));
  apply_seed_override(rc, opt.seed);
  const int threads = resolve_threads(opt.threads);
  const DrawSet draws = make_draws(rc);
  const DesignTable table = with_model(rc, [&](const auto& model) {
    return run_compare(model, rc, draws, threads, opt.verbose, &std::cerr);
  });
  std::string body;
  if (opt.format == "csv")
    body = to_csv(table);
  else if (opt.format == "json")
    body = table_to_json(table).dump(2) + "\n";
  else
    body = to_text(table);
  if (!opt.out_path.empty())
    write_text_file(opt.out_path, body);
  else
    std::cout << body;
  return 0;
}

int cmd_tables(const std::string& id, const std::string& dir,
               const CommonOpts& opt) {
  const std::string path = dir + "/" + id + ".json";
  Json spec;
  try {
    spec = load_json_file(path);
  } catch (const std::exception&) {
    std::cerr << "error: unknown table id '" << id << "' (no " << path
              << ")\n";
    return 2;
  }
  const int threads = resolve_threads(opt.threads);
  const TableResult res =
      run_table(spec, threads, opt.verbose, opt.verbose ? &std::cerr : nullptr);

  std::string body;
  if (opt.format == "json") {
    Json j;
    j["id"] = res.id;
    j["title"] = res.title;
    j["output"] = res.output;
    Json checks = Json::array();
    for (const auto& c : res.checks)
      checks.push_back(Json{{"cell", c.cell},
                            {"got", c.got},
                            {"want", c.want},
                            {"tol", c.tol},
                            {"pass", c.pass}});
    j["checks"] = checks;
    j["pass"] = res.pass;
    body = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << res.text;
    int failed = 0;
    for (const auto& c : res.checks) {
      if (!c.pass) ++failed;
      os << (c.pass ? "ok   " : "FAIL ") << c.cell << ": got "
         << detail::format_fixed(c.got, 2);
      if (c.tol > 0.0)
        os << " want " << detail::format_fixed(c.want, 2) << " +/- "
           << detail::format_fixed(c.tol, 2);
      if (!c.note.empty()) os << " (" << c.note << ")";
      os << '\n';
    }
    os << (res.pass ? "PASS" : "FAIL") << ": " << res.checks.size() - failed
       << "/" << res.checks.size() << " checks passed\n";
    body = os.str();
  }
  if (!opt.out_path.empty())
    write_text_file(opt.out_path, body);
  else
    std::cout << body;
  return res.pass ? 0 : 1;
}

int cmd_catalog(const std::string& family, int k, double metric_alpha, int n,
                double x_min, const CommonOpts& opt) {
  const FactorRange range{x_min};
  Design d;
  if (family == "equally-spaced")
    d = equally_spaced(k, PowerValue(metric_alpha), n, range);
  else if (family == "ccd3")
    d = ccd_projection(CcdKind::ThreeLevel, PowerValue(metric_alpha), n, range);
  else if (family == "ccd5")
    d = ccd_projection(CcdKind::FiveLevel, PowerValue(metric_alpha), n, range);
  else
    throw std::invalid_argument(
        "catalog: family must be equally-spaced|ccd3|ccd5 "
        "(locally-optimal designs come from a config's designs list)");
  Json range_json;
  range_json["x_min"] = x_min;
  const Json j = design_to_json(d, "", range_json);
  if (!opt.out_path.empty())
    write_json_file(opt.out_path, j);
  else
    std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pseudo-Bayesian optimal exact designs for fractional polynomial "
      "response surface models"};
  app.require_subcommand(1);

  CommonOpts opt;
  std::string table_id, tables_dir = "configs/tables";
  std::string family;
  int cat_k = 4, cat_n = 12;
  double cat_alpha = 0.0, cat_xmin = 0.1;

  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config)
      sub->add_option("--config", opt.config_path, "experiment config (JSON)")
          ->required();
    sub->add_option("--out", opt.out_path, "write the result to this file");
    sub->add_option("--format", opt.format, "text|csv|json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--seed", opt.seed, "override prior and search seeds");
    sub->add_option("--threads", opt.threads,
                    "worker cap (default: FPDESIGN_THREADS or 1)");
    sub->add_flag("--verbose", opt.verbose, "progress traces on stderr");
  };

  auto* optimize = app.add_subcommand("optimize", "search for an optimal design");
  add_common(optimize, true);
  auto* compare =
      app.add_subcommand("compare", "rank candidate designs against a reference");
  add_common(compare, true);
  auto* tables =
      app.add_subcommand("tables", "regenerate a stored table and diff fixtures");
  tables->add_option("--id", table_id, "table id (t1..t18)")->required();
  tables->add_option("--dir", tables_dir, "directory of table definitions");
  add_common(tables, false);
  auto* catalog = app.add_subcommand("catalog", "emit a standard design");
  catalog->add_option("--family", family, "equally-spaced|ccd3|ccd5")
      ->required();
  catalog->add_option("--k", cat_k, "level count (equally-spaced)");
  catalog->add_option("--metric-alpha", cat_alpha, "spacing metric exponent");
  catalog->add_option("--n", cat_n, "run count");
  catalog->add_option("--x-min", cat_xmin, "lower end of the factor range");
  add_common(catalog, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) return cmd_optimize(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (tables->parsed()) return cmd_tables(table_id, tables_dir, opt);
    if (catalog->parsed())
      return cmd_catalog(family, cat_k, cat_alpha, cat_n, cat_xmin, opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
