#include "cdafem/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cdafem/linalg.hpp"

namespace cdafem {

RateTable convergence_rates(const std::vector<std::pair<double, double>>& resolution_error) {
  if (resolution_error.size() < 2)
    throw std::invalid_argument("convergence_rates: need at least 2 rows");
  RateTable t;
  for (std::size_t i = 0; i < resolution_error.size(); ++i) {
    const auto& [r, e] = resolution_error[i];
    if (e <= 0) throw std::invalid_argument("convergence_rates: errors must be positive");
    if (i > 0 && r >= resolution_error[i - 1].first)
      throw std::invalid_argument("convergence_rates: resolutions must strictly decrease");
    double rate = std::numeric_limits<double>::quiet_NaN();
    if (i > 0) {
      const auto& [rp, ep] = resolution_error[i - 1];
      rate = std::log(ep / e) / std::log(rp / r);
    }
    t.rows.push_back({r, e, rate});
  }
  return t;
}

DecayAnalysis decay_analysis(const ErrorSeries& series) {
  const auto& rec = series.records;
  const int n = static_cast<int>(rec.size());
  if (n < 20) throw std::invalid_argument("decay_analysis: series too short (need >= 20)");

  // plateau: median of the last 10%
  const int tail = std::max(1, n / 10);
  std::vector<double> last(tail);
  for (int i = 0; i < tail; ++i) last[i] = rec[n - tail + i].l2_error;
  std::sort(last.begin(), last.end());
  const double plateau =
      tail % 2 ? last[tail / 2] : 0.5 * (last[tail / 2 - 1] + last[tail / 2]);

  int onset = -1;
  for (int i = 0; i < n; ++i)
    if (rec[i].l2_error <= 1.5 * plateau) {
      onset = i;
      break;
    }

  // least-squares slope of log(error) vs t over [step 2, onset]
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int i = 0; i < n && i <= onset; ++i) {
    if (rec[i].step < 2) continue;
    if (rec[i].l2_error <= 0) continue;
    const double x = rec[i].time, y = std::log(rec[i].l2_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) throw NumericalError("decay_analysis: no decay window before the plateau");
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (slope >= 0) throw NumericalError("decay_analysis: no decay detected (slope >= 0)");
  return {-slope, plateau, onset >= 0 ? rec[onset].step : -1};
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_series_csv(const ErrorSeries& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_series_csv: cannot open " + path);
  out << "step,time,l2_error,h1_error\n";
  for (const auto& r : s.records)
    out << r.step << "," << fmt_g17(r.time) << "," << fmt_g17(r.l2_error) << ","
        << fmt_g17(r.h1_error) << "\n";
}

ErrorSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_series_csv: cannot open " + path);
  ErrorSeries s;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    ErrorSeries::Record r;
    char comma;
    ss >> r.step >> comma >> r.time >> comma >> r.l2_error >> comma >> r.h1_error;
    if (ss.fail()) throw std::runtime_error("read_series_csv: malformed line: " + line);
    s.records.push_back(r);
  }
  return s;
}

void write_rate_csv(const RateTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_rate_csv: cannot open " + path);
  out << "resolution,error,rate\n";
  for (const auto& r : t.rows)
    out << fmt_g17(r.resolution) << "," << fmt_g17(r.error) << ","
        << (std::isnan(r.rate) ? std::string("-") : fmt_g17(r.rate)) << "\n";
}

}  // namespace cdafem
