#pragma once

#include <array>

namespace semg::tables {

/// Percentage points of D'Agostino's D under normality, expressed in the
/// standardized form y = sqrt(n) * (D - 0.28209479) / 0.02998598.
/// Columns: n, y(0.005), y(0.025), y(0.975), y(0.995).
/// Generated by scripts/gen_dagostino_table.py (Monte Carlo, 4e5 replicates
/// per row for n <= 200 and 1e5 above, seed 1971).
struct DagostinoRow {
  int n;
  double y005;
  double y025;
  double y975;
  double y995;
};

inline constexpr std::array kDagostinoTable = {
    DagostinoRow{10, -4.743, -3.273, 0.302, 0.389},
    DagostinoRow{12, -4.662, -3.221, 0.388, 0.475},
    DagostinoRow{14, -4.568, -3.148, 0.464, 0.551},
    DagostinoRow{16, -4.525, -3.101, 0.526, 0.618},
    DagostinoRow{18, -4.451, -3.075, 0.584, 0.676},
    DagostinoRow{20, -4.406, -3.041, 0.634, 0.730},
    DagostinoRow{22, -4.382, -3.011, 0.680, 0.781},
    DagostinoRow{24, -4.316, -2.980, 0.725, 0.826},
    DagostinoRow{26, -4.266, -2.952, 0.761, 0.870},
    DagostinoRow{28, -4.236, -2.934, 0.795, 0.908},
    DagostinoRow{30, -4.206, -2.922, 0.829, 0.946},
    DagostinoRow{35, -4.102, -2.859, 0.900, 1.033},
    DagostinoRow{40, -4.030, -2.806, 0.962, 1.109},
    DagostinoRow{45, -3.965, -2.770, 1.013, 1.173},
    DagostinoRow{50, -3.910, -2.741, 1.059, 1.230},
    DagostinoRow{60, -3.827, -2.671, 1.131, 1.330},
    DagostinoRow{70, -3.711, -2.631, 1.187, 1.407},
    DagostinoRow{80, -3.677, -2.605, 1.236, 1.474},
    DagostinoRow{90, -3.631, -2.572, 1.281, 1.536},
    DagostinoRow{100, -3.546, -2.526, 1.310, 1.581},
    DagostinoRow{125, -3.454, -2.486, 1.375, 1.680},
    DagostinoRow{150, -3.404, -2.453, 1.426, 1.756},
    DagostinoRow{175, -3.336, -2.403, 1.471, 1.811},
    DagostinoRow{200, -3.294, -2.390, 1.501, 1.858},
    DagostinoRow{250, -3.204, -2.332, 1.549, 1.913},
    DagostinoRow{300, -3.181, -2.306, 1.581, 1.972},
    DagostinoRow{350, -3.138, -2.292, 1.614, 2.032},
    DagostinoRow{400, -3.096, -2.270, 1.646, 2.053},
    DagostinoRow{450, -3.045, -2.249, 1.660, 2.092},
    DagostinoRow{500, -3.040, -2.236, 1.670, 2.103},
    DagostinoRow{600, -3.033, -2.218, 1.698, 2.186},
    DagostinoRow{700, -2.943, -2.191, 1.705, 2.165},
    DagostinoRow{800, -2.927, -2.169, 1.735, 2.197},
    DagostinoRow{900, -2.903, -2.169, 1.727, 2.222},
    DagostinoRow{1000, -2.913, -2.143, 1.756, 2.253},
    DagostinoRow{1500, -2.860, -2.124, 1.796, 2.304},
    DagostinoRow{2000, -2.813, -2.090, 1.807, 2.349},
};

}  // namespace semg::tables
