#include "dagscale/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "dagscale/errors.hpp"
#include "dagscale/nominal.hpp"
#include "dagscale/rng.hpp"

namespace dagscale {

namespace {

std::string function_name(int index, int n_total) {
  int width = 1;
  for (int v = n_total; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(index + 1);
  return "f" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

synth_result synthesize(const synth_params& params) {
  const int n = params.n_functions;
  const int e = params.n_entrypoints;
  if (n < 1) fail(errc::infeasible_shape, "need at least one function");
  if (e < 1 || e > n)
    fail(errc::infeasible_shape, "entrypoint count must be in [1, n_functions]");
  if (params.avg_out_degree < 0.0 || params.parallel_fraction < 0.0 ||
      params.parallel_fraction > 1.0)
    fail(errc::infeasible_shape, "degree and parallel fraction must be non-negative (fraction <= 1)");
  if (params.nlrt_min_ms <= 0.0 || params.nlrt_max_ms < params.nlrt_min_ms)
    fail(errc::infeasible_shape, "nlrt range must be positive and ordered");

  const long target_edges = std::lround(params.avg_out_degree * n);
  const long max_edges = static_cast<long>(n) * (n - 1) / 2;
  if (target_edges > max_edges)
    fail(errc::infeasible_shape, "out-degree too high for an acyclic graph of this size");
  if (target_edges < n - e)
    fail(errc::infeasible_shape,
         "too few edges to reach every non-entrypoint function (need at least " +
             std::to_string(n - e) + ")");

  splitmix_sequence rng(params.seed);

  // Entrypoints: node 0 always (it can never have a caller), the rest spread
  // across depths, half of them in the deeper part of the index range so
  // that bottlenecked entrypoints can have ancestors.
  std::set<int> entrypoints{0};
  const int deep_quota = (e - 1 + 1) / 2;
  int guard = 0;
  while (static_cast<int>(entrypoints.size()) < e && guard++ < 10000) {
    const bool want_deep = static_cast<int>(entrypoints.size()) - 1 < deep_quota && n > 2;
    int lo = want_deep ? n / 2 : 1;
    int hi = want_deep ? n : std::max(2, n / 2);
    if (lo >= hi) { lo = 1; hi = n; }
    entrypoints.insert(lo + static_cast<int>(rng.next_below(hi - lo)));
  }
  while (static_cast<int>(entrypoints.size()) < e) {  // dense graphs: fill any slot
    for (int i = 1; i < n && static_cast<int>(entrypoints.size()) < e; ++i) entrypoints.insert(i);
  }

  // Edge skeleton with nodes ordered by index, edges only forward (i < j):
  // acyclic by construction.
  std::set<std::pair<int, int>> used;
  std::vector<std::pair<int, int>> raw_edges;
  auto add_edge = [&](int i, int j) {
    if (used.emplace(i, j).second) raw_edges.emplace_back(i, j);
  };

  for (int j = 1; j < n; ++j)
    if (!entrypoints.count(j)) add_edge(static_cast<int>(rng.next_below(j)), j);
  for (int j : entrypoints) {
    if (j == 0 || static_cast<long>(raw_edges.size()) >= target_edges) continue;
    if (rng.next_unit() < 0.5) add_edge(static_cast<int>(rng.next_below(j)), j);
  }
  guard = 0;
  while (static_cast<long>(raw_edges.size()) < target_edges && guard++ < 200000) {
    const int i = static_cast<int>(rng.next_below(n - 1));
    const int j = i + 1 + static_cast<int>(rng.next_below(n - 1 - i));
    add_edge(i, j);
  }
  if (static_cast<long>(raw_edges.size()) < target_edges)
    fail(errc::infeasible_shape, "could not place the requested number of edges");

  // Per-source invocation groups: a parallel_fraction share of each source's
  // out-edges lands in groups of 2-3, the rest stay sequential singletons.
  std::vector<std::vector<int>> by_source(n);  // indices into raw_edges
  for (std::size_t k = 0; k < raw_edges.size(); ++k)
    by_source[raw_edges[k].first].push_back(static_cast<int>(k));

  std::vector<dependency_edge> edges(raw_edges.size());
  for (int src = 0; src < n; ++src) {
    auto& out = by_source[src];
    for (std::size_t k = out.size(); k > 1; --k)
      std::swap(out[k - 1], out[rng.next_below(k)]);

    long parallel_quota = std::lround(params.parallel_fraction * out.size());
    int group_id = 1;
    std::size_t pos = 0;
    while (pos < out.size()) {
      std::size_t size = 1;
      if (parallel_quota >= 2) {
        size = std::min<std::size_t>(2 + rng.next_below(2), static_cast<std::size_t>(parallel_quota));
        size = std::min(size, out.size() - pos);
        if (size < 2) size = 1;
      }
      for (std::size_t s = 0; s < size; ++s) {
        const auto [i, j] = raw_edges[out[pos + s]];
        dependency_edge de;
        de.source = function_name(i, n);
        de.target = function_name(j, n);
        de.group_id = group_id;
        de.multiplier = rng.next_unit() < params.multiplier2_fraction ? 2 : 1;
        edges[out[pos + s]] = de;
      }
      if (size > 1) parallel_quota -= static_cast<long>(size);
      pos += size;
      ++group_id;
    }
  }

  std::map<std::string, double> nlrt;
  for (int i = 0; i < n; ++i) {
    const double v = rng.next_in(params.nlrt_min_ms, params.nlrt_max_ms);
    nlrt[function_name(i, n)] = std::round(v * 100.0) / 100.0;
  }

  std::vector<function_spec> functions;
  for (int i = 0; i < n; ++i) {
    function_spec f;
    f.name = function_name(i, n);
    f.entrypoint = entrypoints.count(i) > 0;
    f.sla_ms = 1.0;  // placeholder until the nominal profile exists
    functions.push_back(f);
  }

  // SLAs are twice the composed nominal response time, for every function so
  // the baseline mode (which needs per-function SLAs) can run the same app.
  const auto profile = compose_nominal(app_graph::build(functions, edges), nlrt);
  for (auto& f : functions) f.sla_ms = 2.0 * profile.nrt(f.name);

  synth_result result;
  result.app.name = "synthetic-" + std::to_string(n) + "f-" + std::to_string(e) + "e-seed" +
                    std::to_string(params.seed);
  result.app.graph = app_graph::build(functions, edges);
  for (const auto& [name, v] : nlrt) result.app.perf[name] = perf_params{v, 0.99};
  result.nlrt_ms = nlrt;
  return result;
}

}  // namespace dagscale
