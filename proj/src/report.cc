#include "polarisac/report.hpp"

#include <limits>
#include <ostream>

#include <json.hpp>

namespace polarisac {

void WriteMetricHeader(std::ostream& out, int n_users, int n_targets, bool per_link) {
  out << "trial,iteration,min_sinr_db,min_scnr_db";
  if (per_link) {
    for (int k = 0; k < n_users; ++k) {
      out << ",sinr_db_" << k;
    }
    for (int t = 0; t < n_targets; ++t) {
      out << ",scnr_db_" << t;
    }
  }
  out << '\n';
}

void WriteMetricRow(std::ostream& out, int trial, int iteration, const MetricReport& report,
                    bool per_link) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << trial << ',' << iteration << ',' << LinearToDb(report.min_sinr) << ','
      << LinearToDb(report.min_scnr);
  if (per_link) {
    for (double s : report.sinr) {
      out << ',' << LinearToDb(s);
    }
    for (double s : report.scnr) {
      out << ',' << LinearToDb(s);
    }
  }
  out << '\n';
  out.precision(old_precision);
}

std::string ToJsonLine(const InnerRecord& r) {
  const nlohmann::json j = {{"kind", "inner"},           {"outer", r.outer},
                            {"inner", r.inner},          {"phi_before", r.phi_before},
                            {"phi_after", r.phi_after},  {"grad_norm", r.grad_norm},
                            {"tau", r.tau},              {"backtracks", r.backtracks},
                            {"feasibility", r.feasibility}};
  return j.dump();
}

std::string ToJsonLine(const OuterRecord& r) {
  const nlohmann::json j = {{"kind", "outer"},
                            {"outer", r.outer},
                            {"lambda", r.lambda},
                            {"mu", r.mu},
                            {"eps", r.eps},
                            {"sigma", r.sigma},
                            {"v_max", r.v_max},
                            {"min_sinr", r.min_sinr},
                            {"min_scnr", r.min_scnr},
                            {"a", r.a},
                            {"b", r.b},
                            {"displacement", r.displacement},
                            {"exit_grad_norm", r.exit_grad_norm},
                            {"inner_iterations", r.inner_iterations},
                            {"stalled", r.stalled}};
  return j.dump();
}

void WriteTrace(std::ostream& out, const SolveTrace& trace) {
  // Inner records of outer iteration j precede the outer record j.
  std::size_t next_inner = 0;
  for (const OuterRecord& outer : trace.outer) {
    while (next_inner < trace.inner.size() && trace.inner[next_inner].outer <= outer.outer) {
      out << ToJsonLine(trace.inner[next_inner++]) << '\n';
    }
    out << ToJsonLine(outer) << '\n';
  }
  while (next_inner < trace.inner.size()) {
    out << ToJsonLine(trace.inner[next_inner++]) << '\n';
  }
}

}  // namespace polarisac
