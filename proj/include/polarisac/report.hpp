#pragma once

#include <iosfwd>
#include <string>

#include "polarisac/objective.hpp"
#include "polarisac/solver.hpp"

namespace polarisac {

/// CSV of metric reports: trial, iteration, min_sinr_db, min_scnr_db and, with
/// `per_link`, one sinr_db_k / scnr_db_t column per user and target.
void WriteMetricHeader(std::ostream& out, int n_users, int n_targets, bool per_link);
void WriteMetricRow(std::ostream& out, int trial, int iteration, const MetricReport& report,
                    bool per_link);

/// One JSON object per line; "kind" is "inner" or "outer".
std::string ToJsonLine(const InnerRecord& record);
std::string ToJsonLine(const OuterRecord& record);
void WriteTrace(std::ostream& out, const SolveTrace& trace);

}  // namespace polarisac
