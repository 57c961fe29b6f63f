#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "zonal/errors.hpp"

namespace zonal::stats {

// ---------------------------------------------------------------------------
// Distribution plumbing
// ---------------------------------------------------------------------------

namespace detail {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction,
// with the symmetry transform applied outside the convergent region.
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace detail

inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete_beta: a, b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * detail::betacf(a, b, x) / a;
    return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

// Student t CDF. Absolute error below 1e-8 across all finite t, df > 0.
inline double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw ValidationError("student_t_cdf: df must be > 0");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

// Upper tail P(T > t); keeps full relative precision for large t.
inline double student_t_sf(double t, double df) {
    if (!(df > 0.0)) throw ValidationError("student_t_sf: df must be > 0");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? tail : 1.0 - tail;
}

// ---------------------------------------------------------------------------
// Ranking and Spearman's rho
// ---------------------------------------------------------------------------

// Ascending 1-based ranks with ties sharing the average of their positions.
struct RankVector {
    std::vector<double> ranks;
    bool has_ties = false;

    std::size_t size() const { return ranks.size(); }
};

inline RankVector rank(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) throw ValidationError("rank: empty input");
    for (double v : values)
        if (!std::isfinite(v)) throw ValidationError("rank: non-finite input value");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    RankVector rv;
    rv.ranks.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) rv.ranks[order[k]] = avg;
        if (j > i) rv.has_ties = true;
        i = j + 1;
    }
    return rv;
}

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;  // two-tailed, t approximation with n-2 df
    std::size_t n = 0;
};

namespace detail {

inline double pearson_on_ranks(const std::vector<double>& r, const std::vector<double>& s) {
    const std::size_t n = r.size();
    double mr = 0.0, ms = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mr += r[i];
        ms += s[i];
    }
    mr /= static_cast<double>(n);
    ms /= static_cast<double>(n);
    double srr = 0.0, sss = 0.0, srs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dr = r[i] - mr;
        const double ds = s[i] - ms;
        srr += dr * dr;
        sss += ds * ds;
        srs += dr * ds;
    }
    if (srr == 0.0 || sss == 0.0)
        throw DegenerateError("spearman: constant input has no defined correlation");
    return srs / std::sqrt(srr * sss);
}

}  // namespace detail

// Spearman's rank correlation. Tie-free inputs use the exact identity
// rho = 1 - 6*sum(d^2)/(n^3 - n); tied inputs fall back to the Pearson
// correlation of the rank vectors.
inline SpearmanResult spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ValidationError("spearman: length mismatch");
    const std::size_t n = xs.size();
    if (n < 4) throw ValidationError("spearman: need at least 4 pairs");
    const RankVector rx = rank(xs);
    const RankVector ry = rank(ys);

    SpearmanResult res;
    res.n = n;
    if (!rx.has_ties && !ry.has_ties) {
        long long sum_d2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const long long d = static_cast<long long>(rx.ranks[i]) - static_cast<long long>(ry.ranks[i]);
            sum_d2 += d * d;
        }
        const double nn = static_cast<double>(n);
        res.rho = 1.0 - 6.0 * static_cast<double>(sum_d2) / (nn * (nn * nn - 1.0));
    } else {
        res.rho = detail::pearson_on_ranks(rx.ranks, ry.ranks);
    }

    if (res.rho >= 1.0 || res.rho <= -1.0) {
        res.rho = std::clamp(res.rho, -1.0, 1.0);
        res.p_value = 0.0;
    } else {
        const double df = static_cast<double>(n - 2);
        const double t = res.rho * std::sqrt(df / (1.0 - res.rho * res.rho));
        res.p_value = 2.0 * student_t_sf(std::abs(t), df);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk normality test (Royston 1995, AS R94; corrects AS 181)
// ---------------------------------------------------------------------------

namespace detail {

inline double poly(std::span<const double> c, double x) {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

// AS 111 normal quantile, as used inside the original swilk routine.
inline double ppnd_as111(double p) {
    constexpr double split = 0.42;
    const double q = p - 0.5;
    if (std::abs(q) <= split) {
        const double r = q * q;
        return q * (((-25.44106049637 * r + 41.39119773534) * r + -18.61500062529) * r + 2.50662823884) /
               ((((3.13082909833 * r + -21.06224101826) * r + 23.08336743743) * r + -8.47351093090) * r + 1.0);
    }
    double r = q <= 0.0 ? p : 1.0 - p;
    if (r <= 0.0) return 0.0;
    r = std::sqrt(-std::log(r));
    const double val = (((2.32121276858 * r + 4.85014127135) * r + -2.29796479134) * r + -2.78718931138) /
                       ((1.63706781897 * r + 3.54388924762) * r + 1.0);
    return q < 0.0 ? -val : val;
}

// Normal tail area (Adams 1969), good to ~1e-9; matches the reference chain.
inline double alnorm(double x, bool upper) {
    constexpr double ltone = 7.0, utzero = 18.66, con = 1.28;
    bool up = upper;
    double z = x;
    if (z < 0.0) {
        up = !up;
        z = -z;
    }
    double r;
    if (z <= ltone || (up && z <= utzero)) {
        const double y = 0.5 * z * z;
        if (z > con) {
            r = 0.398942280385 * std::exp(-y) /
                (z - 3.8052e-8 +
                 1.00000615302 / (z + 3.98064794e-4 +
                 1.98615381364 / (z - 0.151679116635 +
                 5.29330324926 / (z + 4.8385912808 -
                 15.1508972451 / (z + 0.742380924027 +
                 30.789933034 / (z + 3.99019417011))))));
        } else {
            r = 0.5 - z * (0.398942280444 -
                           0.399903438504 * y / (y + 5.75885480458 -
                           29.8213557808 / (y + 2.62433121679 +
                           48.6959930692 / (y + 5.92885724438))));
        }
    } else {
        r = 0.0;
    }
    return up ? r : 1.0 - r;
}

}  // namespace detail

struct ShapiroResult {
    double w = 0.0;
    double p_value = 0.0;
};

// W statistic and p-value for the null "sample is normally distributed".
// Supports 3 <= n <= 5000 (uncensored samples).
inline ShapiroResult shapiro_wilk(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3 || n > 5000)
        throw ValidationError("shapiro_wilk: sample size must be in [3, 5000], got " +
                              std::to_string(n));
    std::vector<double> x(values.begin(), values.end());
    std::sort(x.begin(), x.end());

    static constexpr double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
    static constexpr double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    static constexpr double c3[4] = {0.5440, -0.39978, 0.025054, -6.714e-4};
    static constexpr double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[3] = {-0.4803, -0.082676, 0.0030302};
    static constexpr double g2[2] = {-2.273, 0.459};

    const double an = static_cast<double>(n);
    const std::size_t n2 = n / 2;
    std::vector<double> a(n2, 0.0);
    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        const double an25 = an + 0.25;
        double summ2 = 0.0;
        for (std::size_t i = 0; i < n2; ++i) {
            a[i] = detail::ppnd_as111((static_cast<double>(i + 1) - 0.375) / an25);
            summ2 += a[i] * a[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        const double a1 = detail::poly(c1, rsn) - a[0] / ssumm2;
        std::size_t i1;
        double fac;
        if (n > 5) {
            i1 = 2;
            const double a2 = -a[1] / ssumm2 + detail::poly(c2, rsn);
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[0] = a1;
            a[1] = a2;
        } else {
            i1 = 1;
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
            a[0] = a1;
        }
        for (std::size_t i = i1; i < n2; ++i) a[i] = -a[i] / fac;
    }

    const double range = x[n - 1] - x[0];
    if (range < 1e-19)
        throw DegenerateError("shapiro_wilk: sample has (near) zero range");

    // W as the squared correlation between data and coefficients, computed on
    // range-scaled data; w1 = 1 - W is carried to limit rounding near W = 1.
    auto coeff = [&](std::size_t i) -> double {
        const std::size_t j = n - 1 - i;
        if (i == j) return 0.0;
        const double sign = i > j ? 1.0 : -1.0;
        return sign * a[std::min(i, j)];
    };
    double sa = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sa += coeff(i);
        sx += x[i] / range;
    }
    sa /= an;
    sx /= an;
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double asa = coeff(i) - sa;
        const double xsx = x[i] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

    ShapiroResult res;
    res.w = 1.0 - w1;

    if (n == 3) {
        constexpr double pi6 = 1.90985931710274;   // 6/pi
        constexpr double stqr = 1.04719755119660;  // asin(sqrt(3/4))
        res.p_value = std::clamp(pi6 * (std::asin(std::sqrt(res.w)) - stqr), 0.0, 1.0);
        return res;
    }
    double y = std::log(w1);
    const double logn = std::log(an);
    double m, s;
    if (n <= 11) {
        const double gamma = detail::poly(g2, an);
        if (y >= gamma) {
            res.p_value = 1e-99;
            return res;
        }
        y = -std::log(gamma - y);
        m = detail::poly(c3, an);
        s = std::exp(detail::poly(c4, an));
    } else {
        m = detail::poly(c5, logn);
        s = std::exp(detail::poly(c6, logn));
    }
    res.p_value = detail::alnorm((y - m) / s, true);
    return res;
}

// ---------------------------------------------------------------------------
// Hypothesis test results
// ---------------------------------------------------------------------------

enum class Tails { one, two };
enum class Verdict { significant, insignificant };

struct TestResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    Tails tails = Tails::two;
    double alpha = 0.05;
    Verdict verdict = Verdict::insignificant;
};

inline Verdict decide(double p_value, double alpha) {
    return p_value < alpha ? Verdict::significant : Verdict::insignificant;
}

inline std::string verdict_label(Verdict v) {
    return v == Verdict::significant ? "Significant" : "Insignificant";
}

// Paired two-sample t-test on the differences a - b, two-tailed.
inline TestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                                double alpha = 0.05) {
    if (a.size() != b.size()) throw ValidationError("paired_t_test: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw ValidationError("paired_t_test: need at least 2 pairs");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    if (ss == 0.0)
        throw DegenerateError("paired_t_test: differences have zero variance");
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    TestResult res;
    res.df = static_cast<double>(n - 1);
    res.statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
    res.tails = Tails::two;
    res.alpha = alpha;
    res.p_value = 2.0 * student_t_sf(std::abs(res.statistic), res.df);
    res.verdict = decide(res.p_value, alpha);
    return res;
}

// Two dependent overlapping correlations sharing variable j:
// r_jk = corr(j, k), r_jh = corr(j, h), r_kh = corr(k, h).
struct CorrelationTriple {
    std::size_t n = 0;
    double r_jk = 0.0;
    double r_jh = 0.0;
    double r_kh = 0.0;

    // det of the 3x3 correlation matrix; >= 0 iff the triple is consistent
    double determinant() const {
        return 1.0 - r_jk * r_jk - r_jh * r_jh - r_kh * r_kh + 2.0 * r_jk * r_jh * r_kh;
    }
};

// Hotelling's (1940) t for the difference of two dependent overlapping
// correlations, df = n - 3. One-tailed p is for the alternative r_jh > r_jk.
inline TestResult hotelling_t(const CorrelationTriple& tr, double alpha = 0.05,
                              Tails tails = Tails::one) {
    if (tr.n < 4) throw ValidationError("hotelling_t: need n >= 4");
    for (double r : {tr.r_jk, tr.r_jh, tr.r_kh})
        if (!(r >= -1.0 && r <= 1.0))
            throw ValidationError("hotelling_t: correlation outside [-1, 1]");
    const double det = tr.determinant();
    if (!(det > 0.0))
        throw DegenerateError("hotelling_t: inconsistent correlations (|R| <= 0)");
    TestResult res;
    res.df = static_cast<double>(tr.n - 3);
    res.statistic = (tr.r_jh - tr.r_jk) * std::sqrt(res.df * (1.0 + tr.r_kh) / (2.0 * det));
    res.tails = tails;
    res.alpha = alpha;
    res.p_value = tails == Tails::one ? student_t_sf(res.statistic, res.df)
                                      : 2.0 * student_t_sf(std::abs(res.statistic), res.df);
    res.verdict = decide(res.p_value, alpha);
    return res;
}

// ---------------------------------------------------------------------------
// Interpretation bands for correlation strength in medical statistics
// ---------------------------------------------------------------------------

enum class Strength { weak = 0, fair = 1, moderately_strong = 2, very_strong = 3 };

inline Strength interpret(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0))
        throw ValidationError("interpret: rho outside [-1, 1]");
    const double m = std::abs(rho);
    if (m >= 0.8) return Strength::very_strong;
    if (m >= 0.6) return Strength::moderately_strong;
    if (m >= 0.3) return Strength::fair;
    return Strength::weak;
}

inline std::string strength_label(Strength s) {
    switch (s) {
        case Strength::very_strong: return "Very Strong";
        case Strength::moderately_strong: return "Moderately Strong";
        case Strength::fair: return "Fair";
        default: return "Weak";
    }
}

}  // namespace zonal::stats
