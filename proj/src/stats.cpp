#include "parrondo/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace parrondo::stats {

SampleSummary summarize(std::span<const double> values) {
    SampleSummary s;
    s.n = values.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.standard_error = s.std_dev / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

PairedComparison paired_compare(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("paired_compare: samples must be non-empty and equally long");
    }
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    const auto s = summarize(diff);
    PairedComparison cmp;
    cmp.n = s.n;
    cmp.mean_difference = s.mean;
    cmp.standard_error = s.standard_error;
    cmp.t_statistic = s.standard_error > 0.0 ? s.mean / s.standard_error : 0.0;
    return cmp;
}

double t_critical(double confidence, std::size_t degrees_of_freedom) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("t_critical: confidence must lie in (0, 1)");
    }
    if (degrees_of_freedom == 0) {
        return boost::math::quantile(boost::math::normal_distribution<>(), confidence);
    }
    const boost::math::students_t_distribution<> dist(static_cast<double>(degrees_of_freedom));
    return boost::math::quantile(dist, confidence);
}

bool positive_at(const PairedComparison& cmp, double confidence) {
    if (cmp.mean_difference <= 0.0) return false;
    if (cmp.standard_error == 0.0) return true;
    return cmp.t_statistic > t_critical(confidence, cmp.n - 1);
}

}  // namespace parrondo::stats
