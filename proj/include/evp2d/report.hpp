#pragma once

#include <iosfwd>

#include "json.hpp"

#include "evp2d/classification.hpp"
#include "evp2d/harness.hpp"
#include "evp2d/oracle.hpp"
#include "evp2d/rqi.hpp"

namespace evp2d {

// JSON and CSV views of results. Key order is fixed and numbers are written
// in shortest round-trip form, so equal inputs give byte-identical output.
// Non-finite values become null in JSON and "nan" in CSV.

nlohmann::json verdicts_to_json(const std::vector<Verdict>& verdicts);

nlohmann::json trace_to_json(const RqiTrace& trace, const SolveOptions& opts);
void write_trace_csv(const RqiTrace& trace, std::ostream& out);

nlohmann::json classification_to_json(const Classification& c);

nlohmann::json oracle_to_json(const OracleReport& report, double mu_lo, double mu_hi, int n_grid);
void write_oracle_csv(const OracleReport& report, std::ostream& out);

nlohmann::json study_to_json(const ScalingStudy& study);
void write_study_csv(const ScalingStudy& study, std::ostream& out);

nlohmann::json study_to_json(const ConditioningStudy& study);
void write_study_csv(const ConditioningStudy& study, std::ostream& out);

}  // namespace evp2d
