#include "orlicz/numerics.hpp"

#include "orlicz/errors.hpp"

#include <cmath>
#include <cstddef>

namespace orlicz {

double pairwise_sum(std::span<const double> xs) {
    const size_t n = xs.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double softplus(double x) {
    if (x > 36.0) return x;           // e^-x below double epsilon
    if (x < -745.0) return std::exp(x); // underflows to 0 consistently
    return std::log1p(std::exp(x));
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_spaced: need 0 < lo < hi, n >= 2");
    std::vector<double> out(static_cast<size_t>(n));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

double invert_increasing(const std::function<double(double)>& F, double y, double lo, double hi,
                         double rel_tol) {
    double flo = F(lo), fhi = F(hi);
    if (!(flo <= y && y <= fhi)) throw RangeError("invert_increasing: target not bracketed");
    if (flo == y) return lo;
    double a = lo, b = hi;
    for (int it = 0; it < 200 && (b - a) > rel_tol * (hi - lo); ++it) {
        const double m = 0.5 * (a + b);
        if (F(m) >= y)
            b = m;
        else
            a = m;
    }
    return b; // smallest node seen with F >= y
}

std::vector<double> cumulative_log_simpson(const std::function<double(double)>& f, double lt_lo,
                                           double lt_hi, int n_cells) {
    if (n_cells < 1 || !(lt_hi > lt_lo)) throw DomainError("cumulative_log_simpson: bad grid");
    std::vector<double> cum(static_cast<size_t>(n_cells) + 1, 0.0);
    const double dlt = (lt_hi - lt_lo) / n_cells;
    auto g = [&](double lt) {
        const double t = std::exp(lt);
        return f(t) * t; // d tau = t d(ln tau)
    };
    double left = g(lt_lo);
    for (int i = 0; i < n_cells; ++i) {
        const double l0 = lt_lo + i * dlt;
        const double mid = g(l0 + 0.5 * dlt);
        const double right = g(l0 + dlt);
        cum[static_cast<size_t>(i) + 1] =
            cum[static_cast<size_t>(i)] + dlt / 6.0 * (left + 4.0 * mid + right);
        left = right;
    }
    return cum;
}

namespace {
// Abscissae/weights for 16-point Gauss-Legendre on [-1, 1] (positive half).
constexpr double kGx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                           0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                           0.9445750230732326, 0.9894009349916499};
constexpr double kGw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                           0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                           0.0622535239386479, 0.0271524594117541};
} // namespace

double gauss16(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += kGw[i] * (f(c - r * kGx[i]) + f(c + r * kGx[i]));
    return s * r;
}

} // namespace orlicz
