#pragma once

// Per-individual DE control rates (crossover rate CR and differential
// weight F) with lognormal self-adaptation.

#include <algorithm>
#include <cmath>
#include <limits>

namespace hexevo {

struct Rates {
    double cr = 0.5;
    double f = 0.8;
};

// Bounds are half-open at zero: rates stay strictly positive.
struct RateBounds {
    double cr_max = 1.0;
    double f_max = 2.0;
};

inline Rates static_rates() { return Rates{0.5, 0.8}; }

inline double clamp_rate(double v, double hi) {
    v = std::min(v, hi);
    // Keep the open lower bound: a lognormal walk can underflow to zero.
    return std::max(v, std::numeric_limits<double>::min());
}

// Uniform draw on (0, cr_max] then (0, f_max], in that order.
template <class Rng>
Rates init_rates(const RateBounds& b, Rng& rng) {
    Rates r;
    r.cr = b.cr_max * rng.open_unit();
    r.f = b.f_max * rng.open_unit();
    return r;
}

// Each rate is multiplied by exp(z) with a fresh standard normal z,
// then clamped back into bounds.  Draw order: cr first, then f.
template <class Rng>
Rates mutate_rates(const Rates& parent, const RateBounds& b, Rng& rng) {
    Rates r;
    r.cr = clamp_rate(parent.cr * std::exp(rng.gauss()), b.cr_max);
    r.f = clamp_rate(parent.f * std::exp(rng.gauss()), b.f_max);
    return r;
}

}  // namespace hexevo
