#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "swarmlimit/dynamics.hpp"
#include "swarmlimit/experiments.hpp"

namespace swarmlimit {

/// Every CSV file starts with this line.
inline constexpr const char* kSchemaLine = "# schema=v1";

inline constexpr const char* kLimitStudyHeader = "m,replicate,sup_gap,slope_global,seed";
inline constexpr const char* kCompareHeader = "t,w2,kl,m,seed,bins";
inline constexpr const char* kLaplaceHeader = "alpha,laplace_value,gap";

/// Extra `# key=value` lines written after the schema line.
using CsvMeta = std::vector<std::pair<std::string, std::string>>;

void write_limit_study_csv(std::ostream& out, const StudyResult& res, const CsvMeta& meta = {});
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows, const CsvMeta& meta = {});
void write_laplace_csv(std::ostream& out, const std::vector<LaplaceRow>& rows, const CsvMeta& meta = {});

/// step,t,c_1..c_d,m2_x,m4_x[,m2_v,m4_v][,m2_y,m4_y]
void write_run_csv(std::ostream& out, const RunRecord& rec, const CsvMeta& meta = {});
std::string run_csv_header(const RunRecord& rec);

}  // namespace swarmlimit
