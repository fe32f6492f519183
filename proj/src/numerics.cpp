#include "spiraldim/numerics.hpp"

#include "spiraldim/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace spiraldim {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw FitDegenerateError("fit_line: x and y differ in length");
    }
    const std::size_t n = x.size();
    if (n < 2) {
        throw FitDegenerateError("fit_line: need at least two points");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw FitDegenerateError("fit_line: abscissae have zero spread");
    }

    LineFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        sse += r * r;
        fit.residual_sup = std::max(fit.residual_sup, std::abs(r));
    }
    fit.slope_stderr = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > 0.0)) {
        throw DomainError("log_space: bounds must be positive");
    }
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    if (b <= a) {
        return 0.0;
    }
    // Panels grow geometrically from a (or from 1 when a <= 0).
    std::vector<double> cuts{a};
    double edge = a > 0.0 ? a : std::min(b, 1.0);
    if (edge > a) {
        cuts.push_back(edge);
    }
    while (edge * 2.0 < b) {
        edge *= 2.0;
        cuts.push_back(edge);
    }
    if (cuts.back() < b) {
        cuts.push_back(b);
    }

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        total += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 15, rel_tol, &err);
    }
    return total;
}

double tail_power_exponent(const std::function<double(double)>& log_g, double t_lo, double t_hi,
                           std::size_t n) {
    const auto ts = log_space(t_lo, t_hi, n);
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(ts[i]);
        ly[i] = log_g(ts[i]);
    }
    return -fit_line(lx, ly).slope;
}

} // namespace spiraldim
