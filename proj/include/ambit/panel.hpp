#pragma once

#include "ambit/csv.hpp"

#include <vector>

namespace ambit {

struct PanelStats {
    int H = 0;
    int days = 0;
    std::vector<double> corr;  // H x H row-major
    double adjacency = 0.0;    // mean corr of neighbouring slots within a day
    double cyclicality = 0.0;  // corr of slot H on day d with slot 1 on day d+1
    double antipodal = 0.0;    // mean corr of slots half a day apart
    std::vector<double> lag1_autocorr;

    double at(int a, int b) const { return corr[static_cast<std::size_t>(a) * H + b]; }
};

// Keeps the last row of each day, day d being (d*day_length, (d+1)*day_length].
std::vector<std::size_t> daily_rows(const std::vector<double>& times, double day_length);

// Statistics of a days x H panel (row-major).
PanelStats panel_stats(const std::vector<double>& panel, int H);

// From a field CSV (first column t) or a plain panel CSV (one row per day).
PanelStats panel_stats_from_csv(const CsvTable& table, int H = 0, double day_length = 1.0 / 365.0,
                                double burn_in = 0.0);

CsvTable panel_corr_table(const PanelStats& s);
CsvTable panel_score_table(const PanelStats& s);

}  // namespace ambit
