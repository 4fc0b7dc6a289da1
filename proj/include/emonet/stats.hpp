#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace emonet {

// Result of a significance test. `underflow` is set when the true p-value is
// below the smallest positive normal double; `p_value` is then clamped to
// that limit instead of flushing to zero.
struct TestResult {
    std::string test;
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    bool underflow = false;
};

// Pearson correlation coefficient. Throws when either input is constant
// (zero variance) or the lengths disagree / are below 2.
double pearson_r(std::span<const double> x, std::span<const double> y);

// Chi-square test of homogeneity for two groups of counts over the same 8
// score categories (df = 7). Categories empty in both groups contribute
// nothing; throws when a whole group has no observations.
TestResult chi_square_homogeneity(const std::array<std::int64_t, 8>& counts_a,
                                  const std::array<std::int64_t, 8>& counts_b);

// Two-sided paired t-test on matched samples (df = n - 1). Throws on length
// mismatch, n < 2, or zero variance of the differences.
TestResult paired_t_test(std::span<const double> x, std::span<const double> y);

namespace special {

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// by series expansion for x < a+1 and continued fraction otherwise.
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);

// log(Q(a,x)); stays finite far into the tail where Q underflows.
double log_reg_upper_gamma(double a, double x);

// Regularized incomplete beta function I_x(a,b) via Lentz's continued
// fraction, and its logarithm for deep tails.
double reg_inc_beta(double a, double b, double x);
double log_reg_inc_beta(double a, double b, double x);

// Tail probabilities built from the above. The `underflow` flag is set when
// the exact value is below the smallest positive normal double.
double chi_square_upper_tail(double statistic, double df, bool* underflow = nullptr);
double t_two_sided_tail(double t, double df, bool* underflow = nullptr);

}  // namespace special

}  // namespace emonet
