#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dm {

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline Estimate mean_error(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("need >= 2 samples for an error bar");
    double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    double n = static_cast<double>(x.size());
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

// Jackknife for a statistic that is a nonlinear function of ensemble means
// (Creutz ratios: a log of a ratio of four averaged loops). `samples` holds
// one row per configuration; `f` maps the vector of column means to the
// statistic. Error bars from leave-one-out resampling.
inline Estimate jackknife(const std::vector<std::vector<double>>& samples,
                          const std::function<double(const std::vector<double>&)>& f) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("need >= 2 samples for a jackknife");
    const std::size_t k = samples[0].size();
    std::vector<double> sums(k, 0.0);
    for (const auto& row : samples) {
        if (row.size() != k) throw std::invalid_argument("ragged jackknife samples");
        for (std::size_t j = 0; j < k; ++j) sums[j] += row[j];
    }

    std::vector<double> means(k);
    for (std::size_t j = 0; j < k; ++j) means[j] = sums[j] / static_cast<double>(n);
    const double full = f(means);

    std::vector<double> theta(n);
    std::vector<double> loo(k);
    double tbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            loo[j] = (sums[j] - samples[i][j]) / static_cast<double>(n - 1);
        theta[i] = f(loo);
        tbar += theta[i];
    }
    tbar /= static_cast<double>(n);

    double ss = 0.0;
    for (double t : theta) ss += (t - tbar) * (t - tbar);
    const double nn = static_cast<double>(n);
    return {full, std::sqrt((nn - 1.0) / nn * ss)};
}

}  // namespace dm
