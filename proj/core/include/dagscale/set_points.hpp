#pragma once

#include <map>
#include <string>
#include <string_view>

#include "dagscale/app_graph.hpp"
#include "dagscale/nominal.hpp"

namespace dagscale {

enum class sp_source {
  user_sla,             // alpha * SLA was the binding constraint
  propagated,           // inherited from the single parent, unmodified
  parallel_max_raised,  // raised to match the slowest member of a parallel group
  multi_parent_min,     // minimum over several competing candidates
};

const char* to_string(sp_source source) noexcept;

struct set_point_entry {
  double sp_ms = 0.0;   // target for the composed response time
  double lsp_ms = 0.0;  // target for the local response time alone
  sp_source source = sp_source::propagated;
};

struct set_point_table {
  double alpha = 0.5;
  std::map<std::string, set_point_entry> rows;

  const set_point_entry& at(std::string_view f) const;
};

// sp = alpha * sla. alpha must be in (0, 1].
double entry_set_point(double sla_ms, double alpha);

// Recursive SLA decomposition, top-down over the topological order:
//  (a) each entrypoint with a user SLA contributes the candidate alpha*SLA;
//  (b) a finalized parent i hands each child j the candidate
//        sp_j = (sp_i / m_ij) * (nrt_j / nrt_i);
//  (c) within a parallel group the per-invocation budgets are raised so
//      every member matches the group's slowest total contribution:
//        sp_j = (sp_i * max_k(m_ik * nrt_k) / nrt_i) / m_ij,
//      which for all-unit multipliers is exactly "raise to the group
//      maximum" and in general keeps the group's composed cost at the
//      budget of its slowest member;
//  (d) a function with several candidates (multiple parents, or a user SLA
//      plus a parent) takes the minimum;
//  (e) lsp_i = sp_i * nlrt_i / nrt_i.
// Leaves end up with lsp = sp.
set_point_table propagate(const app_graph& graph, const nominal_profile& profile,
                          const std::map<std::string, double>& entry_slas_ms, double alpha);

// Recomposes the table bottom-up with the response-time formula, local set
// points in place of local response times:
//   lsp_f + sum over groups of max(m * composed_target(child)).
// If every controller holds its local set point this is the total response
// time the function would exhibit, so composed_target(entrypoint) against
// alpha*SLA is the budget-conservation check.
double composed_target(const app_graph& graph, const set_point_table& table,
                       std::string_view f);

}  // namespace dagscale
