#include "ambit/geometry.hpp"

#include "ambit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ambit {

config_error::config_error(std::vector<std::string> violations)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& v : violations) msg += "\n  - " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

double normalize_angle(double theta) {
    double r = std::fmod(theta, two_pi);
    if (r <= 0.0) r += two_pi;
    // fmod can land exactly on 2pi after the shift for tiny negative inputs.
    if (r > two_pi) r = two_pi;
    return r;
}

std::pair<double, double> circle_param(double theta) {
    return {std::cos(theta), std::sin(theta)};
}

double angular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

namespace {

double interval_overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Overlap of two arcs given as [start, start + length], length <= 2pi.
double arc_overlap(double a0, double alen, double b0, double blen) {
    double s = 0.0;
    for (int k = -1; k <= 1; ++k) {
        const double shift = k * two_pi;
        s += interval_overlap(a0, a0 + alen, b0 + shift, b0 + shift + blen);
    }
    return s;
}

double wrap_start(double lo) {
    double r = std::fmod(lo, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

}  // namespace

AngularSet::AngularSet(std::vector<AngularInterval> intervals) {
    constexpr double eps = 1e-12;
    for (auto iv : intervals) {
        const double len = iv.hi - iv.lo;
        if (!(len > 0.0) || len > two_pi + eps) {
            throw domain_error("angular interval must have extent in (0, 2pi]");
        }
        const double lo = wrap_start(iv.lo);
        intervals_.push_back({lo, lo + std::min(len, two_pi)});
    }
    std::sort(intervals_.begin(), intervals_.end(),
              [](const auto& a, const auto& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        for (std::size_t j = i + 1; j < intervals_.size(); ++j) {
            const auto& a = intervals_[i];
            const auto& b = intervals_[j];
            if (arc_overlap(a.lo, a.length(), b.lo, b.length()) > eps) {
                throw domain_error("angular intervals overlap");
            }
        }
    }
    if (measure() > two_pi + eps) throw domain_error("angular set exceeds the full circle");
}

AngularSet AngularSet::full_circle() { return AngularSet({{0.0, two_pi}}); }

double AngularSet::measure() const {
    double m = 0.0;
    for (const auto& iv : intervals_) m += iv.length();
    return m;
}

double AngularSet::overlap(double lo, double hi) const {
    const double len = hi - lo;
    if (len <= 0.0) return 0.0;
    const double start = wrap_start(lo);
    double s = 0.0;
    for (const auto& iv : intervals_) s += arc_overlap(iv.lo, iv.length(), start, len);
    return s;
}

bool AngularSet::contains(double theta) const {
    const double th = wrap_start(theta);
    for (const auto& iv : intervals_) {
        for (int k = -1; k <= 1; ++k) {
            const double x = th + k * two_pi;
            if (x >= iv.lo && x <= iv.hi) return true;
        }
    }
    return false;
}

AngularSet AngularSet::complement() const {
    if (intervals_.empty()) return full_circle();
    std::vector<AngularInterval> gaps;
    constexpr double eps = 1e-14;
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const double end = intervals_[i].hi;
        const double next = (i + 1 < intervals_.size()) ? intervals_[i + 1].lo
                                                        : intervals_.front().lo + two_pi;
        if (next - end > eps) gaps.push_back({end, next});
    }
    if (gaps.empty()) return AngularSet{};
    return AngularSet(std::move(gaps));
}

CylinderPatch::CylinderPatch(double t0, double t1, double th0, double th1)
    : t_lo(t0), t_hi(t1), theta_lo(th0), theta_hi(th1) {
    if (t1 < t0) throw domain_error("patch time bounds reversed");
    double extent = th1 - th0;
    if (extent < 0.0) extent += two_pi;
    if (extent < 0.0 || extent > two_pi * (1.0 + 1e-12)) {
        throw domain_error("patch angular extent outside [0, 2pi]");
    }
    theta_hi = theta_lo + extent;
}

double riemannian_area(const CylinderPatch& patch) {
    return (patch.t_hi - patch.t_lo) * (patch.theta_hi - patch.theta_lo);
}

}  // namespace ambit
