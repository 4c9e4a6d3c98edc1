#include "ambit/panel.hpp"

#include "ambit/errors.hpp"

#include <cmath>

namespace ambit {

std::vector<std::size_t> daily_rows(const std::vector<double>& times, double day_length) {
    if (!(day_length > 0.0)) throw config_error("panel.day_length_years must be > 0");
    std::vector<std::size_t> rows;
    long current = 0;
    bool open = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const long day = static_cast<long>(std::ceil(times[i] / day_length - 1e-9)) - 1;
        if (open && day == current) {
            rows.back() = i;
        } else {
            if (open && day < current) throw config_error("panel: time column is not increasing at row " + std::to_string(i + 2));
            rows.push_back(i);
            current = day;
            open = true;
        }
    }
    return rows;
}

namespace {

double corr(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

PanelStats panel_stats(const std::vector<double>& panel, int H) {
    if (H < 1) throw config_error("panel: H must be >= 1");
    if (panel.size() % H) throw config_error("panel: value count is not a multiple of H");
    const std::size_t D = panel.size() / H;
    if (D < 2) throw config_error("panel: at least 2 days are required");

    std::vector<std::vector<double>> col(H, std::vector<double>(D));
    for (std::size_t d = 0; d < D; ++d)
        for (int h = 0; h < H; ++h) col[h][d] = panel[d * H + h];

    PanelStats s;
    s.H = H;
    s.days = static_cast<int>(D);
    s.corr.assign(static_cast<std::size_t>(H) * H, 0.0);
    for (int a = 0; a < H; ++a) {
        s.corr[static_cast<std::size_t>(a) * H + a] = 1.0;
        for (int b = a + 1; b < H; ++b) {
            const double c = corr(col[a], col[b]);
            s.corr[static_cast<std::size_t>(a) * H + b] = c;
            s.corr[static_cast<std::size_t>(b) * H + a] = c;
        }
    }
    if (H > 1) {
        double adj = 0.0;
        for (int a = 0; a + 1 < H; ++a) adj += s.at(a, a + 1);
        s.adjacency = adj / (H - 1);
        double anti = 0.0;
        for (int a = 0; a < H; ++a) anti += s.at(a, (a + H / 2) % H);
        s.antipodal = anti / H;
    } else {
        s.adjacency = s.antipodal = 1.0;
    }
    // last slot of day d against first slot of day d+1
    std::vector<double> last(col[H - 1].begin(), col[H - 1].end() - 1);
    std::vector<double> first(col[0].begin() + 1, col[0].end());
    s.cyclicality = D > 2 ? corr(last, first) : std::nan("");
    s.lag1_autocorr.resize(H);
    for (int h = 0; h < H; ++h) {
        std::vector<double> x(col[h].begin(), col[h].end() - 1), y(col[h].begin() + 1, col[h].end());
        s.lag1_autocorr[h] = D > 2 ? corr(x, y) : std::nan("");
    }
    return s;
}

PanelStats panel_stats_from_csv(const CsvTable& table, int H, double day_length, double burn_in) {
    const bool timed = !table.header.empty() && table.header[0] == "t";
    const int cols = static_cast<int>(table.header.size()) - (timed ? 1 : 0);
    if (cols < 1) throw config_error("panel: no value columns");
    if (H > 0 && H != cols)
        throw config_error("panel: expected " + std::to_string(H) + " value columns, found " + std::to_string(cols));
    H = cols;

    std::vector<std::size_t> rows;
    if (timed) {
        std::vector<double> times;
        std::vector<std::size_t> kept;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const double t = table.number(r, 0);
            if (t > burn_in) {
                times.push_back(t);
                kept.push_back(r);
            }
        }
        for (std::size_t i : daily_rows(times, day_length)) rows.push_back(kept[i]);
    } else {
        for (std::size_t r = 0; r < table.rows.size(); ++r) rows.push_back(r);
    }
    std::vector<double> panel;
    panel.reserve(rows.size() * H);
    for (std::size_t r : rows)
        for (int h = 0; h < H; ++h) panel.push_back(table.number(r, h + (timed ? 1 : 0)));
    return panel_stats(panel, H);
}

CsvTable panel_corr_table(const PanelStats& s) {
    CsvTable t;
    t.header.push_back("slot");
    for (int h = 0; h < s.H; ++h) t.header.push_back("slot_" + std::to_string(h + 1));
    for (int a = 0; a < s.H; ++a) {
        std::vector<std::string> row{std::to_string(a + 1)};
        for (int b = 0; b < s.H; ++b) row.push_back(format_double(s.at(a, b)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable panel_score_table(const PanelStats& s) {
    CsvTable t;
    t.header = {"metric", "slot", "value"};
    t.rows.push_back({"days", "", std::to_string(s.days)});
    t.rows.push_back({"adjacency", "", format_double(s.adjacency)});
    t.rows.push_back({"cyclicality", "", format_double(s.cyclicality)});
    t.rows.push_back({"antipodal", "", format_double(s.antipodal)});
    for (int h = 0; h < s.H; ++h)
        t.rows.push_back({"lag1_autocorr", std::to_string(h + 1), format_double(s.lag1_autocorr[h])});
    return t;
}

}  // namespace ambit
