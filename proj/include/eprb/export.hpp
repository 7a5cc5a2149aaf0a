#pragma once

#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "eprb/coincidence.hpp"
#include "eprb/dataset_analysis.hpp"
#include "eprb/types.hpp"

namespace eprb {

// CSV: m,m_prime,alpha_deg,beta_deg,x,y,count
void write_coincidences_csv(std::ostream& out, const CoincidenceTable& table);
// CSV: m,m_prime,alpha_deg,beta_deg,total,E,E1,E2 (empty fields when undefined)
void write_correlations_csv(std::ostream& out, const CorrelationMatrix& corr);

/// {"settings_1_deg": [...], "settings_2_deg": [...], "pairs": [{"m", "m_prime",
///  "counts": {"++", "+-", "-+", "--"}, "total", "E", "E1", "E2"}]}
/// with null averages for undefined cells. `corr` must come from `table`.
nlohmann::json to_json(const CoincidenceTable& table,
                       const CorrelationMatrix& corr);
nlohmann::json to_json(const ChshResult& result);

// CSV: bin_center,count,normalized
void write_histogram_csv(std::ostream& out, const Histogram& hist);
// CSV: W,S_max,max_abs_S,total_coincidences
void write_scan_csv(std::ostream& out, const std::vector<ScanPoint>& scan);

struct ComparisonRow {
  double alpha = 0.0;
  double beta = 0.0;
  double e_measured = 0.0;
  double e_singlet = 0.0;
  double e_sawtooth = 0.0;
};

/// One row per defined cell of `corr`.
std::vector<ComparisonRow> compare_to_references(const CorrelationMatrix& corr);
// CSV: alpha_deg,beta_deg,E_measured,E_singlet,E_sawtooth,residual_singlet,
//      residual_sawtooth
void write_comparison_csv(std::ostream& out,
                          const std::vector<ComparisonRow>& rows);

}  // namespace eprb
