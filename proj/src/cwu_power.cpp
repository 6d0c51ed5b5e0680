// SPDX-License-Identifier: Apache-2.0
#include <vega/cwu_power.hpp>

#include <algorithm>
#include <cmath>

namespace vega::cwu {

power_table power_table::characterized() {
  return power_table({
      {32'000.0, 0.99, 1.28, 0.70, 150.0, 2.97},
      {200'000.0, 6.21, 8.00, 0.70, 1000.0, 14.90},
  });
}

power_table::power_table(std::vector<power_row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw error("power table needs at least one row");
  if (!std::is_sorted(rows_.begin(), rows_.end(),
                      [](const power_row& a, const power_row& b) { return a.f_hz < b.f_hz; }))
    throw error("power table rows must be sorted by frequency");
  for (const auto& r : rows_)
    if (r.f_hz <= 0.0) throw error("power table frequencies must be positive");
}

power_breakdown power_table::at(double f_hz) const {
  if (!(f_hz > 0.0)) throw error(strf("frequency %g Hz out of range", f_hz));

  for (const auto& r : rows_) {
    if (f_hz == r.f_hz) {
      // characterized point: report the published total verbatim
      return {r.f_hz, r.dyn_datapath_uw, r.dyn_pads_uw, r.leak_uw, r.printed_total_uw,
              r.max_sps_per_channel};
    }
  }

  auto lerp_col = [&](double f, auto col) {
    const power_row& first = rows_.front();
    const power_row& last = rows_.back();
    if (f <= first.f_hz) return col(first) * (f / first.f_hz);  // through origin
    if (f >= last.f_hz) {
      if (rows_.size() == 1) return col(last) * (f / last.f_hz);
      const power_row& prev = rows_[rows_.size() - 2];
      double slope = (col(last) - col(prev)) / (last.f_hz - prev.f_hz);
      return col(last) + slope * (f - last.f_hz);
    }
    for (size_t i = 1; i < rows_.size(); ++i) {
      if (f <= rows_[i].f_hz) {
        const power_row& a = rows_[i - 1];
        const power_row& b = rows_[i];
        double t = (f - a.f_hz) / (b.f_hz - a.f_hz);
        return col(a) + t * (col(b) - col(a));
      }
    }
    return col(last);  // unreachable
  };

  power_breakdown out;
  out.f_hz = f_hz;
  out.dyn_datapath_uw = lerp_col(f_hz, [](const power_row& r) { return r.dyn_datapath_uw; });
  out.dyn_pads_uw = lerp_col(f_hz, [](const power_row& r) { return r.dyn_pads_uw; });
  out.leak_uw = rows_.front().leak_uw;
  out.total_uw = out.dyn_datapath_uw + out.dyn_pads_uw + out.leak_uw;
  out.max_sps_per_channel =
      lerp_col(f_hz, [](const power_row& r) { return r.max_sps_per_channel; });
  return out;
}

}  // namespace vega::cwu
