#ifndef FPDESIGN_SEARCH_HPP
#define FPDESIGN_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fpdesign/criterion.hpp"
#include "fpdesign/design.hpp"
#include "fpdesign/model_two_factor.hpp"
#include "fpdesign/rng.hpp"

namespace fpdesign {

struct SearchConfig {
  int n = 12;
  std::vector<double> level_grid;   //!< candidate levels, ascending
  std::vector<double> level_grid2;  //!< second factor; empty = level_grid
  int max_levels = 0;               //!< complete search: largest level count
  int tries = 3;
  std::uint64_t seed = 1;
  double budget = 1e8;  //!< complete search: max design evaluations
  int threads = 1;
  bool verbose = false;
  std::ostream* log = nullptr;
};

struct SearchResult {
  Design design;
  double value = 0.0;
  std::vector<double> per_try_values;
  std::uint64_t evaluations = 0;
};

namespace detail {

inline std::vector<double> checked_grid(std::vector<double> grid, double x_min,
                                        const char* who) {
  if (grid.empty())
    throw std::invalid_argument(std::string(who) + ": empty level grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < x_min - 1e-12 || grid.back() > 1.0 + 1e-12)
    throw std::invalid_argument(std::string(who) +
                                ": grid levels outside the factor range");
  return grid;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= double(n - k + i) / double(i);
  return v;
}

struct TryOutcome {
  double value = 0.0;
  std::uint64_t evaluations = 0;
  std::vector<std::string> trace;
};

//! Runs one exchange try per initial design, optionally across worker
//! threads. Outcomes are indexed by try, so scheduling cannot change the
//! result; verbose traces are buffered per try and flushed in order.
template <class Engine, class Init>
std::vector<TryOutcome> run_tries(const Engine& engine,
                                  std::vector<Init>& inits,
                                  const SearchConfig& cfg) {
  std::vector<TryOutcome> out(inits.size());
  const int workers =
      std::max(1, std::min<int>(cfg.threads, static_cast<int>(inits.size())));
  if (workers == 1) {
    for (std::size_t t = 0; t < inits.size(); ++t)
      out[t] = engine.run_try(inits[t], static_cast<int>(t), cfg.verbose);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= inits.size()) return;
      out[t] = engine.run_try(inits[t], static_cast<int>(t), cfg.verbose);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return out;
}

inline void flush_traces(const std::vector<TryOutcome>& outcomes,
                         std::ostream* log) {
  if (!log) return;
  for (const auto& o : outcomes)
    for (const auto& line : o.trace) (*log) << line << '\n';
}

}  // namespace detail

//! One-factor candidate-grid criterion engine. Caches the sensitivity
//! vector of every (draw, grid level) pair once, then evaluates designs
//! and single-run exchanges through rank-one information updates.
template <class Model>
class OneFactorEngine {
 public:
  static constexpr int P = Model::kParams;

  OneFactorEngine(const Model& model, std::vector<double> grid,
                  const DrawSet& draws, CriterionKind kind,
                  const WeightSpec& ws)
      : grid_(detail::checked_grid(std::move(grid), model.range().x_min,
                                   "search")),
        kind_(kind),
        weights_(draws.weights) {
    const auto params = typed_draws(model, draws);
    R_ = params.size();
    G_ = grid_.size();
    equal_w_ = detail::all_equal_weights(weights_);
    grads_.resize(R_ * G_);
    for (std::size_t d = 0; d < R_; ++d)
      for (std::size_t g = 0; g < G_; ++g)
        grads_[d * G_ + g] = model.grad(grid_[g], params[d]);
    if (kind_ == CriterionKind::WeightedAs) {
      wdiag_.resize(R_);
      for (std::size_t d = 0; d < R_; ++d)
        wdiag_[d] = weight_diag_for(model, params[d], ws);
    }
  }

  std::size_t grid_size() const { return G_; }
  const std::vector<double>& grid() const { return grid_; }
  CriterionKind kind() const { return kind_; }

  Design design_from_runs(const std::vector<int>& runs) const {
    Design d;
    for (int g : runs) d.points.push_back({{grid_[g]}, 1});
    return d.normalized();
  }

  //! Criterion value of a design given as distinct levels with counts.
  double counts_value(const std::vector<int>& levels,
                      const std::vector<int>& counts) const {
    double acc = 0.0;
    for (std::size_t d = 0; d < R_; ++d) {
      SymMat<P> m;
      for (std::size_t i = 0; i < levels.size(); ++i)
        m.add_outer(grads_[d * G_ + levels[i]], double(counts[i]));
      acc += contribution(d, local_value(m, d));
    }
    return finish(acc);
  }

  //! One exchange try; `runs` is updated in place to the final design.
  detail::TryOutcome run_try(std::vector<int>& runs, int try_index,
                             bool verbose) const {
    auto state = make_state(runs);
    double current = state_value(state);
    detail::TryOutcome out;
    out.evaluations = 1;
    bool improved = true;
    int pass = 0;
    const int kMaxPasses = 1000;  // exchange terminates long before this
    while (improved && pass < kMaxPasses) {
      improved = false;
      ++pass;
      for (std::size_t r = 0; r < runs.size(); ++r) {
        const int old_g = runs[r];
        double best_v = current;
        int best_g = -1;
        for (std::size_t g = 0; g < G_; ++g) {
          if (static_cast<int>(g) == old_g) continue;
          const double v = swapped_value(state, old_g, static_cast<int>(g));
          ++out.evaluations;
          // strict improvement; scanning ascending keeps the smallest level
          // on ties
          if (is_better(kind_, v, best_v)) {
            best_v = v;
            best_g = static_cast<int>(g);
          }
        }
        if (best_g >= 0) {
          runs[r] = best_g;
          state = make_state(runs);  // fresh accumulation, no update drift
          current = state_value(state);
          improved = true;
        }
      }
      if (verbose) {
        std::ostringstream os;
        os << "try " << try_index << " pass " << pass << " value " << current;
        out.trace.push_back(os.str());
      }
    }
    out.value = current;
    return out;
  }

 private:
  struct State {
    std::vector<SymMat<P>> info;
  };

  State make_state(const std::vector<int>& runs) const {
    State st;
    st.info.assign(R_, SymMat<P>{});
    for (std::size_t d = 0; d < R_; ++d)
      for (int g : runs) st.info[d].add_outer(grads_[d * G_ + g], 1.0);
    return st;
  }

  double state_value(const State& st) const {
    double acc = 0.0;
    for (std::size_t d = 0; d < R_; ++d)
      acc += contribution(d, local_value(st.info[d], d));
    return finish(acc);
  }

  double swapped_value(const State& st, int g_old, int g_new) const {
    double acc = 0.0;
    for (std::size_t d = 0; d < R_; ++d) {
      SymMat<P> m = st.info[d];
      m.add_outer(grads_[d * G_ + g_old], -1.0);
      m.add_outer(grads_[d * G_ + g_new], 1.0);
      acc += contribution(d, local_value(m, d));
    }
    return finish(acc);
  }

  double local_value(const SymMat<P>& m, std::size_t d) const {
    return kind_ == CriterionKind::WeightedAs
               ? weighted_trace_value(m, wdiag_[d])
               : log_det_value(m);
  }
  double contribution(std::size_t d, double v) const {
    return equal_w_ ? v : weights_[d] * v;
  }
  double finish(double acc) const {
    return equal_w_ ? acc / static_cast<double>(R_) : acc;
  }

  std::vector<double> grid_;
  CriterionKind kind_;
  std::vector<double> weights_;
  bool equal_w_ = true;
  std::size_t R_ = 0, G_ = 0;
  std::vector<std::array<double, P>> grads_;
  std::vector<WeightDiag<P>> wdiag_;
};

//! Point-exchange search: per try, start from a seeded random n-run design
//! (always containing both range endpoints), then repeatedly pass over the
//! runs replacing each run's level by the best strictly-improving
//! candidate until a full pass makes no change. Deterministic given
//! (config, seed); tries may run in parallel with per-try derived seeds.
template <class Model>
SearchResult point_exchange(const Model& model, const SearchConfig& cfg,
                            const DrawSet& draws, CriterionKind kind,
                            const WeightSpec& ws = {}) {
  static_assert(Model::kFactors == 1,
                "point_exchange drives one-factor models");
  if (cfg.n < Model::kParams)
    throw std::invalid_argument(
        "point_exchange: infeasible run count, n below the parameter count");
  if (cfg.tries < 1)
    throw std::invalid_argument("point_exchange: tries must be >= 1");

  OneFactorEngine<Model> engine(model, cfg.level_grid, draws, kind, ws);
  const int G = static_cast<int>(engine.grid_size());

  std::vector<std::vector<int>> inits(cfg.tries);
  for (int t = 0; t < cfg.tries; ++t) {
    SeededRng rng(cfg.seed + static_cast<std::uint64_t>(t));
    auto& runs = inits[t];
    runs.resize(cfg.n);
    for (int i = 0; i < cfg.n; ++i) runs[i] = rng.uniform_index(G);
    runs[0] = 0;
    runs[1] = G - 1;
  }

  auto outcomes = detail::run_tries(engine, inits, cfg);
  detail::flush_traces(outcomes, cfg.verbose ? cfg.log : nullptr);

  SearchResult res;
  res.per_try_values.resize(cfg.tries);
  int best_t = -1;
  for (int t = 0; t < cfg.tries; ++t) {
    const Design d = engine.design_from_runs(inits[t]);
    double v;
    try {
      v = bayes_criterion(model, d, draws, kind, ws).value;
    } catch (const SingularInformation&) {
      v = worst_value(kind);
    }
    res.per_try_values[t] = v;
    res.evaluations += outcomes[t].evaluations;
    if (best_t < 0 || is_better(kind, v, res.value)) {
      best_t = t;
      res.value = v;
      res.design = d;
    }
  }
  return res;
}

//! Exhaustive search over the combined level/replication grids: every
//! subset of p..max_levels candidate levels crossed with every composition
//! of n runs over the subset. Errors out up front when the enumeration
//! would exceed the evaluation budget.
template <class Model>
SearchResult complete_search(const Model& model, const SearchConfig& cfg,
                             const DrawSet& draws, CriterionKind kind,
                             const WeightSpec& ws = {}) {
  static_assert(Model::kFactors == 1,
                "complete_search drives one-factor models");
  constexpr int p = Model::kParams;
  if (cfg.n < p)
    throw std::invalid_argument(
        "complete_search: infeasible run count, n below the parameter count");
  if (cfg.max_levels < p)
    throw std::invalid_argument(
        "complete_search: max_levels must be set and >= the parameter count");

  OneFactorEngine<Model> engine(model, cfg.level_grid, draws, kind, ws);
  const int G = static_cast<int>(engine.grid_size());
  const int k_hi = std::min(cfg.max_levels, std::min(G, cfg.n));

  double total = 0.0;
  for (int k = p; k <= k_hi; ++k)
    total += detail::binomial(G, k) * detail::binomial(cfg.n - 1, k - 1);
  if (total > cfg.budget) {
    std::ostringstream os;
    os << "complete_search: enumeration of about " << total
       << " designs exceeds the budget of " << cfg.budget
       << " evaluations; coarsen the level grid, lower max_levels, or use "
          "point_exchange";
    throw std::runtime_error(os.str());
  }

  SearchResult res;
  double best = worst_value(kind);
  std::vector<int> best_levels, best_counts;

  std::vector<int> levels, counts;
  std::function<void()> eval_counts = [&]() {
    const double v = engine.counts_value(levels, counts);
    ++res.evaluations;
    if (is_better(kind, v, best)) {
      best = v;
      best_levels = levels;
      best_counts = counts;
    }
  };
  std::function<void(int, int)> compositions = [&](int slot, int remaining) {
    const int k = static_cast<int>(counts.size());
    if (slot == k - 1) {
      counts[slot] = remaining;
      eval_counts();
      return;
    }
    for (int v = 1; v <= remaining - (k - 1 - slot); ++v) {
      counts[slot] = v;
      compositions(slot + 1, remaining - v);
    }
  };
  std::function<void(int, int)> combos = [&](int start, int k_left) {
    if (k_left == 0) {
      counts.assign(levels.size(), 0);
      compositions(0, cfg.n);
      return;
    }
    for (int g = start; g <= G - k_left; ++g) {
      levels.push_back(g);
      combos(g + 1, k_left - 1);
      levels.pop_back();
    }
  };
  for (int k = p; k <= k_hi; ++k) combos(0, k);

  if (best_levels.empty())
    throw std::runtime_error("complete_search: no feasible design");

  Design d;
  for (std::size_t i = 0; i < best_levels.size(); ++i)
    d.points.push_back({{engine.grid()[best_levels[i]]}, best_counts[i]});
  res.design = d.normalized();
  try {
    res.value = bayes_criterion(model, res.design, draws, kind, ws).value;
  } catch (const SingularInformation&) {
    res.value = worst_value(kind);
  }
  res.per_try_values = {res.value};
  return res;
}

//! Local grid refinement: re-runs the exchange over step-spaced
//! neighborhoods of the design's interior levels, keeping both range
//! endpoints available. Try 0 starts from the input design, so the
//! refined value never falls behind it.
template <class Model>
SearchResult refine(const Model& model, const Design& input,
                    const SearchConfig& cfg, double window, double step,
                    const DrawSet& draws, CriterionKind kind,
                    const WeightSpec& ws = {}) {
  static_assert(Model::kFactors == 1, "refine drives one-factor models");
  const Design base = input.normalized();
  double input_value;
  try {
    input_value = bayes_criterion(model, base, draws, kind, ws).value;
  } catch (const SingularInformation&) {
    input_value = worst_value(kind);
  }
  if (window <= 0.0 || step <= 0.0) {
    SearchResult res;
    res.design = base;
    res.value = input_value;
    res.per_try_values = {input_value};
    return res;
  }

  const double x_min = model.range().x_min;
  std::vector<double> cand = {x_min, 1.0};
  const int half = static_cast<int>(std::floor(window / step + 1e-9));
  for (const auto& pt : base.points) {
    const double lvl = pt.x[0];
    if (std::abs(lvl - x_min) < 1e-12 || std::abs(lvl - 1.0) < 1e-12) {
      continue;  // boundary levels stay fixed candidates
    }
    for (int j = -half; j <= half; ++j) {
      const double v = lvl + j * step;
      if (v > x_min - 1e-12 && v < 1.0 + 1e-12)
        cand.push_back(std::clamp(v, x_min, 1.0));
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  OneFactorEngine<Model> engine(model, cand, draws, kind, ws);
  const auto& grid = engine.grid();
  const int G = static_cast<int>(grid.size());

  std::vector<int> input_runs;
  for (const auto& pt : base.points) {
    const auto it = std::min_element(
        grid.begin(), grid.end(), [&](double a, double b) {
          return std::abs(a - pt.x[0]) < std::abs(b - pt.x[0]);
        });
    const int idx = static_cast<int>(it - grid.begin());
    if (std::abs(grid[idx] - pt.x[0]) > 1e-9)
      throw std::logic_error("refine: input level missing from candidates");
    for (int r = 0; r < pt.rep; ++r) input_runs.push_back(idx);
  }

  std::vector<std::vector<int>> inits;
  inits.push_back(input_runs);
  for (int t = 1; t < cfg.tries; ++t) {
    SeededRng rng(cfg.seed + static_cast<std::uint64_t>(t));
    std::vector<int> runs(base.n());
    for (auto& r : runs) r = rng.uniform_index(G);
    runs[0] = 0;
    runs[1] = G - 1;
    inits.push_back(std::move(runs));
  }

  auto outcomes = detail::run_tries(engine, inits, cfg);
  detail::flush_traces(outcomes, cfg.verbose ? cfg.log : nullptr);

  SearchResult res;
  res.per_try_values.resize(inits.size());
  int best_t = -1;
  for (std::size_t t = 0; t < inits.size(); ++t) {
    const Design d = engine.design_from_runs(inits[t]);
    double v;
    try {
      v = bayes_criterion(model, d, draws, kind, ws).value;
    } catch (const SingularInformation&) {
      v = worst_value(kind);
    }
    res.per_try_values[t] = v;
    res.evaluations += outcomes[t].evaluations;
    if (best_t < 0 || is_better(kind, v, res.value)) {
      best_t = static_cast<int>(t);
      res.value = v;
      res.design = d;
    }
  }
  return res;
}

//! Two-factor determinant-criterion engine for the coordinate exchange.
//! Per draw it caches the x-independent context and the per-grid
//! transforms of each factor, so candidate sensitivities assemble with a
//! handful of multiplies.
class TwoFactorEngine {
 public:
  static constexpr int P = 8;
  using RunPoint = std::pair<int, int>;

  TwoFactorEngine(const TwoFactorModel& model, std::vector<double> grid1,
                  std::vector<double> grid2, const DrawSet& draws)
      : model_(model),
        grid1_(detail::checked_grid(std::move(grid1), model.range().x1_min,
                                    "coordinate_exchange")),
        grid2_(detail::checked_grid(std::move(grid2), model.range().x2_min,
                                    "coordinate_exchange")),
        weights_(draws.weights) {
    params_ = typed_draws(model, draws);
    R_ = params_.size();
    equal_w_ = detail::all_equal_weights(weights_);
    G1_ = grid1_.size();
    G2_ = grid2_.size();
    t1_.resize(G1_);
    t2_.resize(G2_);
    for (std::size_t g = 0; g < G1_; ++g) t1_[g] = std::log(grid1_[g]);
    for (std::size_t g = 0; g < G2_; ++g) t2_[g] = std::log(grid2_[g]);
    ctx_.reserve(R_);
    X1_.resize(R_ * G1_);
    X2_.resize(R_ * G2_);
    for (std::size_t d = 0; d < R_; ++d) {
      ctx_.push_back(model.make_context(params_[d]));
      for (std::size_t g = 0; g < G1_; ++g)
        X1_[d * G1_ + g] = fp_transform(grid1_[g], params_[d].alpha1);
      for (std::size_t g = 0; g < G2_; ++g)
        X2_[d * G2_ + g] = fp_transform(grid2_[g], params_[d].alpha2);
    }
  }

  std::size_t grid1_size() const { return G1_; }
  std::size_t grid2_size() const { return G2_; }

  Design design_from_runs(const std::vector<RunPoint>& runs) const {
    Design d;
    for (const auto& r : runs)
      d.points.push_back({{grid1_[r.first], grid2_[r.second]}, 1});
    return d.normalized();
  }

  //! One exchange try; `runs` is updated in place to the final design.
  detail::TryOutcome run_try(std::vector<RunPoint>& runs, int try_index,
                             bool verbose) const {
    auto state = make_state(runs);
    double current = state_value(state);
    detail::TryOutcome out;
    out.evaluations = 1;
    bool improved = true;
    int pass = 0;
    const int kMaxPasses = 1000;
    std::vector<std::array<double, P>> old_grads(R_);
    std::vector<SymMat<P>> reduced(R_);
    while (improved && pass < kMaxPasses) {
      improved = false;
      ++pass;
      for (std::size_t r = 0; r < runs.size(); ++r) {
        for (int coord = 0; coord < 2; ++coord) {
          const RunPoint old_pt = runs[r];
          for (std::size_t d = 0; d < R_; ++d) {
            old_grads[d] = grad_at(d, old_pt);
            reduced[d] = state.info[d];
            reduced[d].add_outer(old_grads[d], -1.0);
          }
          const std::size_t G = coord == 0 ? G1_ : G2_;
          const int old_g = coord == 0 ? old_pt.first : old_pt.second;
          double best_v = current;
          int best_g = -1;
          for (std::size_t g = 0; g < G; ++g) {
            if (static_cast<int>(g) == old_g) continue;
            const RunPoint cand = coord == 0
                                      ? RunPoint{static_cast<int>(g),
                                                 old_pt.second}
                                      : RunPoint{old_pt.first,
                                                 static_cast<int>(g)};
            double acc = 0.0;
            for (std::size_t d = 0; d < R_; ++d) {
              SymMat<P> m = reduced[d];
              m.add_outer(grad_at(d, cand), 1.0);
              acc += contribution(d, log_det_value(m));
            }
            const double v = finish(acc);
            ++out.evaluations;
            if (v > best_v) {
              best_v = v;
              best_g = static_cast<int>(g);
            }
          }
          if (best_g >= 0) {
            if (coord == 0)
              runs[r].first = best_g;
            else
              runs[r].second = best_g;
            state = make_state(runs);
            current = state_value(state);
            improved = true;
          }
        }
      }
      if (verbose) {
        std::ostringstream os;
        os << "try " << try_index << " pass " << pass << " value " << current;
        out.trace.push_back(os.str());
      }
    }
    out.value = current;
    return out;
  }

 private:
  struct State {
    std::vector<SymMat<P>> info;
  };

  std::array<double, P> grad_at(std::size_t d, const RunPoint& pt) const {
    return model_.grad_from_context(ctx_[d], X1_[d * G1_ + pt.first],
                                    t1_[pt.first], X2_[d * G2_ + pt.second],
                                    t2_[pt.second]);
  }

  State make_state(const std::vector<RunPoint>& runs) const {
    State st;
    st.info.assign(R_, SymMat<P>{});
    for (std::size_t d = 0; d < R_; ++d)
      for (const auto& r : runs) st.info[d].add_outer(grad_at(d, r), 1.0);
    return st;
  }

  double state_value(const State& st) const {
    double acc = 0.0;
    for (std::size_t d = 0; d < R_; ++d)
      acc += contribution(d, log_det_value(st.info[d]));
    return finish(acc);
  }

  double contribution(std::size_t d, double v) const {
    return equal_w_ ? v : weights_[d] * v;
  }
  double finish(double acc) const {
    return equal_w_ ? acc / static_cast<double>(R_) : acc;
  }

  const TwoFactorModel& model_;
  std::vector<double> grid1_, grid2_;
  std::vector<double> weights_;
  bool equal_w_ = true;
  std::size_t R_ = 0, G1_ = 0, G2_ = 0;
  std::vector<TwoFactorParams> params_;
  std::vector<TwoFactorModel::DrawContext> ctx_;
  std::vector<double> t1_, t2_, X1_, X2_;
};

//! Coordinate exchange for the two-factor model under the determinant
//! criterion: per try, cycle over runs and coordinates, line-searching
//! each coordinate over its grid with the other held fixed, accepting the
//! best strict improvement, until a full cycle changes nothing.
inline SearchResult coordinate_exchange(const TwoFactorModel& model,
                                        const SearchConfig& cfg,
                                        const DrawSet& draws,
                                        CriterionKind kind,
                                        const WeightSpec& = {}) {
  if (kind != CriterionKind::D)
    throw std::invalid_argument(
        "coordinate_exchange: the determinant criterion is the only "
        "supported objective");
  if (cfg.n < TwoFactorModel::kParams)
    throw std::invalid_argument(
        "coordinate_exchange: infeasible run count, n below the parameter "
        "count");
  if (cfg.tries < 1)
    throw std::invalid_argument("coordinate_exchange: tries must be >= 1");

  TwoFactorEngine engine(
      model, cfg.level_grid,
      cfg.level_grid2.empty() ? cfg.level_grid : cfg.level_grid2, draws);
  const int G1 = static_cast<int>(engine.grid1_size());
  const int G2 = static_cast<int>(engine.grid2_size());

  std::vector<std::vector<TwoFactorEngine::RunPoint>> inits(cfg.tries);
  for (int t = 0; t < cfg.tries; ++t) {
    SeededRng rng(cfg.seed + static_cast<std::uint64_t>(t));
    auto& runs = inits[t];
    runs.resize(cfg.n);
    for (auto& r : runs)
      r = {rng.uniform_index(G1), rng.uniform_index(G2)};
    runs[0] = {0, 0};
    runs[1] = {G1 - 1, G2 - 1};
  }

  auto outcomes = detail::run_tries(engine, inits, cfg);
  detail::flush_traces(outcomes, cfg.verbose ? cfg.log : nullptr);

  SearchResult res;
  res.per_try_values.resize(cfg.tries);
  int best_t = -1;
  for (int t = 0; t < cfg.tries; ++t) {
    const Design d = engine.design_from_runs(inits[t]);
    double v;
    try {
      v = bayes_criterion(model, d, draws, kind).value;
    } catch (const SingularInformation&) {
      v = worst_value(kind);
    }
    res.per_try_values[t] = v;
    res.evaluations += outcomes[t].evaluations;
    if (best_t < 0 || is_better(kind, v, res.value)) {
      best_t = t;
      res.value = v;
      res.design = d;
    }
  }
  return res;
}

}  // namespace fpdesign

#endif  // FPDESIGN_SEARCH_HPP
