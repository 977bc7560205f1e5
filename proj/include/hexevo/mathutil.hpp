#pragma once

#include <algorithm>
#include <cmath>

namespace hexevo {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

// Wrap an angle in degrees onto (-180, 180].  Exact for representable
// inputs; wrap_angle(-180) == 180 by convention.
inline double wrap_angle(double deg) {
    double r = std::fmod(deg + 180.0, 360.0);
    if (r <= 0.0)
        r += 360.0;
    return r - 180.0;
}

// Deadband: zero inside the threshold, identity beyond it.
inline double deadband(double x, double limit) {
    return x > limit ? x : 0.0;
}

inline double clamp_abs(double x, double limit) {
    return std::clamp(x, -limit, limit);
}

}  // namespace hexevo
