#include "emonet/stats.hpp"

#include <cmath>
#include <limits>

#include "emonet/error.hpp"

namespace emonet {

namespace {

const double kTiny = std::numeric_limits<double>::min();
const double kLogTiny = std::log(std::numeric_limits<double>::min());

double clamp_tail(double log_p, bool* underflow) {
    if (underflow) *underflow = false;
    if (log_p >= 0.0) return 1.0;
    if (log_p < kLogTiny) {
        if (underflow) *underflow = true;
        return kTiny;
    }
    return std::exp(log_p);
}

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(Stage::stats, "pearson_r: length mismatch (" + std::to_string(x.size()) +
                                      " vs " + std::to_string(y.size()) + ")");
    }
    const std::size_t n = x.size();
    if (n < 2) throw Error(Stage::stats, "pearson_r: need at least 2 observations");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(Stage::stats, "pearson_r: zero variance input");
    }
    return sxy / std::sqrt(sxx * syy);
}

TestResult chi_square_homogeneity(const std::array<std::int64_t, 8>& counts_a,
                                  const std::array<std::int64_t, 8>& counts_b) {
    double total_a = 0.0, total_b = 0.0;
    for (int i = 0; i < 8; ++i) {
        if (counts_a[static_cast<std::size_t>(i)] < 0 ||
            counts_b[static_cast<std::size_t>(i)] < 0) {
            throw Error(Stage::stats, "chi_square_homogeneity: negative count");
        }
        total_a += static_cast<double>(counts_a[static_cast<std::size_t>(i)]);
        total_b += static_cast<double>(counts_b[static_cast<std::size_t>(i)]);
    }
    if (total_a == 0.0 || total_b == 0.0) {
        throw Error(Stage::stats, "chi_square_homogeneity: a group has no observations");
    }
    const double grand = total_a + total_b;
    double statistic = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double col = static_cast<double>(counts_a[static_cast<std::size_t>(i)] +
                                               counts_b[static_cast<std::size_t>(i)]);
        // A score nobody gave in either group carries no information; it
        // contributes nothing to the statistic (df stays at 7 regardless).
        if (col == 0.0) continue;
        const double ea = total_a * col / grand;
        const double eb = total_b * col / grand;
        const double da = static_cast<double>(counts_a[static_cast<std::size_t>(i)]) - ea;
        const double db = static_cast<double>(counts_b[static_cast<std::size_t>(i)]) - eb;
        statistic += da * da / ea + db * db / eb;
    }
    TestResult result;
    result.test = "chi_square_homogeneity";
    result.statistic = statistic;
    result.df = 7.0;
    result.p_value = special::chi_square_upper_tail(statistic, result.df, &result.underflow);
    return result;
}

TestResult paired_t_test(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(Stage::stats, "paired_t_test: length mismatch");
    }
    const std::size_t n = x.size();
    if (n < 2) throw Error(Stage::stats, "paired_t_test: need at least 2 pairs");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[i] - y[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (x[i] - y[i]) - mean;
        ss += d * d;
    }
    if (ss == 0.0) {
        throw Error(Stage::stats, "paired_t_test: differences have zero variance");
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
    TestResult result;
    result.test = "paired_t_test";
    result.statistic = t;
    result.df = static_cast<double>(n - 1);
    result.p_value = special::t_two_sided_tail(t, result.df, &result.underflow);
    return result;
}

namespace special {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;
constexpr double kFpMin = 1e-300;

// Series for the lower incomplete gamma, valid and fast for x < a + 1.
// Returns log of P(a,x).
double log_lower_gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return std::log(sum) + a * std::log(x) - x - std::lgamma(a);
}

// Lentz continued fraction for the upper incomplete gamma, valid for
// x >= a + 1. Returns log of Q(a,x).
double log_upper_gamma_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::log(h) + a * std::log(x) - x - std::lgamma(a);
}

// Lentz continued fraction for the incomplete beta; requires
// x < (a+1)/(a+b+2) for good convergence.
double beta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double dm = static_cast<double>(m);
        const double m2 = 2.0 * dm;
        double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double log1mexp(double log_p) {
    // log(1 - exp(log_p)) for log_p <= 0, stable in both regimes.
    if (log_p > -M_LN2) return std::log(-std::expm1(log_p));
    return std::log1p(-std::exp(log_p));
}

}  // namespace

double log_reg_upper_gamma(double a, double x) {
    if (a <= 0.0 || x < 0.0) {
        throw Error(Stage::stats, "log_reg_upper_gamma: invalid arguments");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        const double log_p = log_lower_gamma_series(a, x);
        return log1mexp(log_p);
    }
    return log_upper_gamma_cf(a, x);
}

double reg_lower_gamma(double a, double x) {
    if (a <= 0.0 || x < 0.0) {
        throw Error(Stage::stats, "reg_lower_gamma: invalid arguments");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return std::exp(log_lower_gamma_series(a, x));
    return -std::expm1(log_upper_gamma_cf(a, x));
}

double reg_upper_gamma(double a, double x) { return std::exp(log_reg_upper_gamma(a, x)); }

double log_reg_inc_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0 || x < 0.0 || x > 1.0) {
        throw Error(Stage::stats, "log_reg_inc_beta: invalid arguments");
    }
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x == 1.0) return 0.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return log_front + std::log(beta_cf(a, b, x) / a);
    }
    // Use symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    const double log_other = log_front + std::log(beta_cf(b, a, 1.0 - x) / b);
    return log1mexp(log_other);
}

double reg_inc_beta(double a, double b, double x) {
    return std::exp(log_reg_inc_beta(a, b, x));
}

double chi_square_upper_tail(double statistic, double df, bool* underflow) {
    if (df <= 0.0) throw Error(Stage::stats, "chi_square_upper_tail: df must be positive");
    if (statistic < 0.0) {
        throw Error(Stage::stats, "chi_square_upper_tail: negative statistic");
    }
    if (statistic == 0.0) {
        if (underflow) *underflow = false;
        return 1.0;
    }
    return clamp_tail(log_reg_upper_gamma(0.5 * df, 0.5 * statistic), underflow);
}

double t_two_sided_tail(double t, double df, bool* underflow) {
    if (df <= 0.0) throw Error(Stage::stats, "t_two_sided_tail: df must be positive");
    if (t == 0.0) {
        if (underflow) *underflow = false;
        return 1.0;
    }
    // Two-sided tail: P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
    const double x = df / (df + t * t);
    return clamp_tail(log_reg_inc_beta(0.5 * df, 0.5, x), underflow);
}

}  // namespace special

}  // namespace emonet
