#include "hexevo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hexevo {

namespace {

// Midranks of the pooled samples; first n1 entries belong to `a`.
std::vector<double> pooled_midranks(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size() + b.size();
    std::vector<std::pair<double, std::size_t>> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < a.size(); ++i)
        pool.emplace_back(a[i], i);
    for (std::size_t i = 0; i < b.size(); ++i)
        pool.emplace_back(b[i], a.size() + i);
    std::sort(pool.begin(), pool.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pool[j + 1].first == pool[i].first)
            ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[pool[k].second] = mid;
        i = j + 1;
    }
    return ranks;
}

// Null distribution of the doubled rank sum of the first sample, by
// dynamic programming over the pooled doubled midranks.  Equivalent to
// enumerating all C(n, n1) assignments.
std::vector<double> rank_sum_counts(const std::vector<long>& doubled, int n1, long& max_sum) {
    max_sum = 0;
    for (long d : doubled)
        max_sum += d;
    std::vector<std::vector<double>> f(static_cast<std::size_t>(n1) + 1,
                                       std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    f[0][0] = 1.0;
    for (long d : doubled) {
        for (int k = n1; k >= 1; --k) {
            auto& row = f[static_cast<std::size_t>(k)];
            const auto& prev = f[static_cast<std::size_t>(k - 1)];
            for (long s = max_sum; s >= d; --s)
                row[static_cast<std::size_t>(s)] += prev[static_cast<std::size_t>(s - d)];
        }
    }
    return f[static_cast<std::size_t>(n1)];
}

}  // namespace

UTestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                           double alpha, long exact_limit) {
    const int n1 = static_cast<int>(a.size());
    const int n2 = static_cast<int>(b.size());
    if (n1 == 0 || n2 == 0)
        throw std::invalid_argument("mann_whitney_u: empty sample");
    const int n = n1 + n2;

    const std::vector<double> ranks = pooled_midranks(a, b);
    double r1 = 0.0;
    for (int i = 0; i < n1; ++i)
        r1 += ranks[static_cast<std::size_t>(i)];

    UTestResult res;
    res.u = r1 - 0.5 * n1 * (n1 + 1);

    if (static_cast<long>(n1) * n2 <= exact_limit) {
        // Exact path in doubled-rank units, which are integers even with
        // midrank ties.
        std::vector<long> doubled(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            doubled[static_cast<std::size_t>(i)] = std::lround(2.0 * ranks[static_cast<std::size_t>(i)]);
        long max_sum = 0;
        const std::vector<double> counts = rank_sum_counts(doubled, n1, max_sum);
        // 2U(s) - n1*n2 = s - n1*(n1+1) - n1*n2; deviation from the mean
        // in doubled units stays integral.
        const long dev_obs = std::labs(std::lround(2.0 * res.u) - static_cast<long>(n1) * n2);
        double total = 0.0, tail = 0.0;
        for (long s = 0; s <= max_sum; ++s) {
            const double c = counts[static_cast<std::size_t>(s)];
            if (c == 0.0)
                continue;
            total += c;
            const long dev = std::labs(s - static_cast<long>(n1) * (n1 + 1) -
                                       static_cast<long>(n1) * n2);
            if (dev >= dev_obs)
                tail += c;
        }
        res.p = tail / total;
        res.exact = true;
    } else {
        // Tie-corrected normal approximation with continuity correction.
        std::map<double, int> tie_groups;
        for (double r : ranks)
            ++tie_groups[r];
        double tie_term = 0.0;
        for (const auto& [rank, count] : tie_groups) {
            (void)rank;
            const double t = count;
            tie_term += t * t * t - t;
        }
        const double mu = 0.5 * n1 * n2;
        const double var = (static_cast<double>(n1) * n2 / 12.0) *
                           ((n + 1) - tie_term / (static_cast<double>(n) * (n - 1)));
        if (var <= 0.0) {
            res.p = 1.0;
        } else {
            const double z = std::max(std::abs(res.u - mu) - 0.5, 0.0) / std::sqrt(var);
            res.p = std::min(std::erfc(z / std::sqrt(2.0)), 1.0);
        }
    }
    res.significant = res.p < alpha;
    return res;
}

bool detect_convergence(const Population& pop) {
    if (pop.members.empty())
        return false;
    for (const Individual& m : pop.members)
        if (!m.success)
            return false;
    return true;
}

RunSummary summarize(const std::vector<GenerationStats>& history) {
    if (history.empty())
        throw std::invalid_argument("summarize: empty history");
    RunSummary s;
    const GenerationStats* at = &history.back();
    int restarts = 0;
    for (const GenerationStats& g : history) {
        restarts += g.restarted_slots;
        if (g.all_success) {
            at = &g;
            s.converged = true;
            break;
        }
    }
    s.convergence_generation = at->generation;
    s.high_f = at->high_f;
    s.mean_f = at->mean_f;
    s.low_f = at->low_f;
    s.mean_cr = at->mean_cr;
    s.mean_f_rate = at->mean_f_rate;
    s.restart_count = restarts;
    return s;
}

}  // namespace hexevo
