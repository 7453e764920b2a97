#include "cyic/metrics.hpp"

#include "cyic/io.hpp"
#include "cyic/parallel.hpp"
#include "cyic/text.hpp"

#include <algorithm>
#include <cmath>

namespace cyic {

double compute_ib(double ir, double ic) noexcept {
  const double hi = std::max(ir, ic);
  if (hi <= 0.0) return 0.0;
  return 1.0 - std::abs(ir - ic) / hi;
}

double compute_kf(double ir, double ic) noexcept { return 0.5 * ir + 0.5 * ic; }

MetricSeries compute_metric_series(const PairSeries& series) {
  MetricSeries out;
  out.pair = series.pair;
  out.start_year = series.start_year;
  const std::size_t n = series.size();
  out.ib.resize(n);
  out.kf.resize(n);
  out.z.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double ir = series.ir_at(t);
    const double ic = series.ic_at(t);
    out.ib[t] = compute_ib(ir, ic);
    out.kf[t] = compute_kf(ir, ic);
    out.z[t] = out.ib[t] * out.kf[t];
  }
  return out;
}

std::vector<MetricSeries> compute_metrics(const PairTable& table, unsigned threads) {
  std::vector<MetricSeries> out(table.pairs.size());
  parallel_for(out.size(), threads,
               [&](std::size_t i) { out[i] = compute_metric_series(table.pairs[i]); });
  return out;
}

void write_metric_dump(std::span<const MetricSeries> series, const std::filesystem::path& path) {
  io::Writer out(path);
  out << "a\tb\tyear\tib\tkf\tz\n";
  for (const auto& s : series) {
    for (std::size_t t = 0; t < s.size(); ++t) {
      out << s.pair.a << '\t' << s.pair.b << '\t' << std::to_string(s.year_at(t)) << '\t'
          << text::fixed(s.ib[t], 6) << '\t' << text::fixed(s.kf[t], 6) << '\t'
          << text::fixed(s.z[t], 6) << '\n';
    }
  }
  out.close();
}

}  // namespace cyic
