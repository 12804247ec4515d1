#pragma once

#include <string>
#include <vector>

namespace cdafem {

/// Per-step error record of one run.
struct ErrorSeries {
  struct Record {
    int step;
    double time;
    double l2_error;
    double h1_error;
  };
  std::vector<Record> records;
  std::string config_echo;
  double wall_clock_seconds = 0;

  double final_l2() const { return records.back().l2_error; }
};

struct RateTable {
  struct Row {
    double resolution;  // h or dt
    double error;
    double rate;        // NaN on the first row
  };
  std::vector<Row> rows;
};

/// rate_i = log(e_{i-1}/e_i) / log(r_{i-1}/r_i); resolutions must be strictly
/// decreasing and errors positive.
RateTable convergence_rates(const std::vector<std::pair<double, double>>& resolution_error);

struct DecayAnalysis {
  double rate;          // decay rate per unit time (positive)
  double plateau;       // median of the last 10% of records
  int onset_step;       // first step with error <= 1.5 * plateau
};

/// Fits the exponential decay phase of an error series. Throws
/// std::invalid_argument when the series is too short and NumericalError
/// when no decay is detected (non-negative log slope).
DecayAnalysis decay_analysis(const ErrorSeries& series);

/// 17-significant-digit decimal formatting (round-trips doubles exactly).
std::string fmt_g17(double v);

void write_series_csv(const ErrorSeries& s, const std::string& path);
ErrorSeries read_series_csv(const std::string& path);
void write_rate_csv(const RateTable& t, const std::string& path);

}  // namespace cdafem
