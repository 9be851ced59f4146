#include "swarmlimit/csv.hpp"

#include "swarmlimit/config.hpp"

namespace swarmlimit {

namespace {

void preamble(std::ostream& out, const CsvMeta& meta)
{
  out << kSchemaLine << "\n";
  for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
}

}  // namespace

void write_limit_study_csv(std::ostream& out, const StudyResult& res, const CsvMeta& meta)
{
  preamble(out, meta);
  for (const auto& row : res.rows)
    out << "# m=" << format_real(row.m) << " mean_gap=" << format_real(row.mean_gap)
        << " stderr=" << format_real(row.stderr_gap) << "\n";
  out << "# intercept=" << format_real(res.intercept) << "\n";
  out << kLimitStudyHeader << "\n";
  const std::string slope = format_real(res.slope);
  for (const auto& row : res.rows)
    for (std::size_t r = 0; r < row.sup_gap.size(); ++r)
      out << format_real(row.m) << "," << r << "," << format_real(row.sup_gap[r]) << "," << slope << ","
          << res.seed << "\n";
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows, const CsvMeta& meta)
{
  preamble(out, meta);
  out << kCompareHeader << "\n";
  for (const auto& r : rows)
    out << format_real(r.t) << "," << format_real(r.w2) << "," << format_real(r.kl) << "," << format_real(r.m)
        << "," << r.seed << "," << r.bins << "\n";
}

void write_laplace_csv(std::ostream& out, const std::vector<LaplaceRow>& rows, const CsvMeta& meta)
{
  preamble(out, meta);
  out << kLaplaceHeader << "\n";
  for (const auto& r : rows)
    out << format_real(r.alpha) << "," << format_real(r.value) << "," << format_real(r.gap) << "\n";
}

std::string run_csv_header(const RunRecord& rec)
{
  std::string h = "step,t";
  for (std::size_t k = 1; k <= rec.final_state.dim(); ++k) h += ",c_" + std::to_string(k);
  h += ",m2_x,m4_x";
  if (!rec.v_moments.empty()) h += ",m2_v,m4_v";
  if (!rec.y_moments.empty()) h += ",m2_y,m4_y";
  return h;
}

void write_run_csv(std::ostream& out, const RunRecord& rec, const CsvMeta& meta)
{
  preamble(out, meta);
  out << run_csv_header(rec) << "\n";
  for (std::size_t j = 0; j < rec.times.size(); ++j) {
    out << j << "," << format_real(rec.times[j]);
    for (double c : rec.consensus_at(j)) out << "," << format_real(c);
    out << "," << format_real(rec.x_moments[j].m2) << "," << format_real(rec.x_moments[j].m4);
    if (!rec.v_moments.empty())
      out << "," << format_real(rec.v_moments[j].m2) << "," << format_real(rec.v_moments[j].m4);
    if (!rec.y_moments.empty())
      out << "," << format_real(rec.y_moments[j].m2) << "," << format_real(rec.y_moments[j].m4);
    out << "\n";
  }
}

}  // namespace swarmlimit
