#pragma once

#include <cstddef>
#include <span>

namespace parrondo::stats {

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double std_dev = 0.0;         // sample standard deviation (n - 1); 0 when n < 2
    double standard_error = 0.0;  // std_dev / sqrt(n)
};

/// Summation runs in index order, so results are reproducible bit for bit.
SampleSummary summarize(std::span<const double> values);

/// Paired differences a[i] - b[i].
struct PairedComparison {
    std::size_t n = 0;
    double mean_difference = 0.0;
    double standard_error = 0.0;
    double t_statistic = 0.0;
};

/// Throws std::invalid_argument if the samples differ in length or are empty.
PairedComparison paired_compare(std::span<const double> a, std::span<const double> b);

/// One-sided Student-t critical value for the given confidence and degrees
/// of freedom.
double t_critical(double confidence, std::size_t degrees_of_freedom);

/// True when the mean difference is positive at the given one-sided
/// confidence (paired t-test). A zero-variance positive difference counts.
bool positive_at(const PairedComparison& cmp, double confidence);

}  // namespace parrondo::stats
