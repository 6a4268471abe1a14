#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsfw/penalty.hpp"

namespace gsfw {

// One benchmark row: the table columns plus bookkeeping.
struct RunReport {
  std::string dataset;
  ProblemKind kind = ProblemKind::MaxKCut;
  int n = 0;
  std::size_t e_plus = 0;   // |E+| for Max-Agree, |E| for k-cut
  std::size_t e_minus = 0;  // |E-| for Max-Agree, unused for k-cut
  int k = 0;                // parts (k-cut) or samples per rounding (MA)
  long iterations = 0;
  bool converged = false;
  double infeas = 0.0;
  // Relaxation value at the returned covariance: the scaled-Laplacian inner
  // product for k-cut; for Max-Agree the clustering-unit value (each edge
  // counted once, i.e. half the matrix inner product) so that rounded values
  // compare against it directly.
  double sdp_value = 0.0;
  double best_value = 0.0;  // best rounded value over the replications
  double mean_value = 0.0;  // mean rounded value
  double ar = 0.0;          // best / sdp_value
  std::uint64_t memory_words = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

// CSV with one header and one row per report. k-cut batches use an E column,
// Max-Agree batches Eplus/Eminus; mixed batches are rejected.
std::string reports_to_csv(const std::vector<RunReport>& reports);
std::string report_to_json(const RunReport& r);
std::string reports_to_json(const std::vector<RunReport>& reports);
RunReport report_from_json(const std::string& text);
std::vector<RunReport> reports_from_json_file(const std::string& path);

// Flat "key = value" config file; '#' starts a comment. Returned pairs keep
// file order so later CLI overrides can win.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path);

}  // namespace gsfw
