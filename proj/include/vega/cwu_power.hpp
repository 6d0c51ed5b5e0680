// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <vega/common.hpp>

namespace vega::cwu {

// One characterized operating point of the wake-up unit.
struct power_row {
  double f_hz = 0.0;
  double dyn_datapath_uw = 0.0;  // digital datapath dynamic power
  double dyn_pads_uw = 0.0;      // I/O interface dynamic power
  double leak_uw = 0.0;          // leakage (frequency independent)
  double max_sps_per_channel = 0.0;
  double printed_total_uw = 0.0;  // characterized total as published
};

struct power_breakdown {
  double f_hz = 0.0;
  double dyn_datapath_uw = 0.0;
  double dyn_pads_uw = 0.0;
  double leak_uw = 0.0;
  double total_uw = 0.0;
  double max_sps_per_channel = 0.0;
};

// Characterization table: two measured rows.
class power_table {
 public:
  static power_table characterized();

  explicit power_table(std::vector<power_row> rows);

  const std::vector<power_row>& rows() const { return rows_; }

  // Power at an arbitrary clock. Exact characterized rows reproduce their
  // published totals; other frequencies interpolate the dynamic columns
  // piecewise-linearly (through the origin below the first row, extrapolating
  // the last segment's slope above the top row) and keep leakage constant.
  power_breakdown at(double f_hz) const;

 private:
  std::vector<power_row> rows_;
};

}  // namespace vega::cwu
