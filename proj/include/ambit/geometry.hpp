#pragma once

#include <numbers>
#include <utility>
#include <vector>

namespace ambit {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Maps any real angle into (0, 2pi]. Idempotent.
double normalize_angle(double theta);

// Point (t, theta) on the unit cylinder R x S^1. Time in years.
struct CylinderPoint {
    double t = 0.0;
    double theta = two_pi;

    CylinderPoint() = default;
    CylinderPoint(double time, double angle) : t(time), theta(normalize_angle(angle)) {}
};

// r(theta) = (cos theta, sin theta)
std::pair<double, double> circle_param(double theta);

// Shortest arc length between two angles, in [0, pi].
double angular_distance(double a, double b);

// Angle of delivery period d out of H periods per day.
inline double delivery_angle(int period, int periods_per_day) {
    return two_pi * static_cast<double>(period) / static_cast<double>(periods_per_day);
}

struct AngularInterval {
    double lo = 0.0;  // radians, lo < hi, hi - lo <= 2pi
    double hi = 0.0;

    double length() const { return hi - lo; }
};

// Finite union of disjoint angular intervals on the circle. Intervals are
// stored with lo in [0, 2pi) and may wrap past 2pi.
class AngularSet {
public:
    AngularSet() = default;
    explicit AngularSet(std::vector<AngularInterval> intervals);

    static AngularSet full_circle();

    const std::vector<AngularInterval>& intervals() const { return intervals_; }
    double measure() const;
    bool empty() const { return intervals_.empty(); }

    // Measure of the intersection with the arc (lo, hi], hi - lo <= 2pi.
    double overlap(double lo, double hi) const;
    bool contains(double theta) const;

    AngularSet complement() const;

private:
    std::vector<AngularInterval> intervals_;
};

// Rectangle [t_lo, t_hi] x [theta_lo, theta_hi] on the cylinder.
struct CylinderPatch {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double theta_lo = 0.0;
    double theta_hi = 0.0;

    CylinderPatch() = default;
    CylinderPatch(double t0, double t1, double th0, double th1);
};

// Riemannian (product Lebesgue) measure of a patch; the cylinder metric has
// unit determinant in (t, theta) coordinates.
double riemannian_area(const CylinderPatch& patch);

}  // namespace ambit
