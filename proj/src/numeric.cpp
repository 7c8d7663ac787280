#include "auctionlab/numeric.hpp"

#include "auctionlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace auctionlab::num {

namespace {

// Gauss-Kronrod 15-point nodes on [0,1] (abscissae, K15 weights, G7 weights).
// G7 weights are zero at Kronrod-only nodes.
constexpr int kGk = 8;
constexpr double kGkNode[kGk] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
constexpr double kGkWk[kGk] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGkWg[kGk] = {
    0.417959183673469, 0.000000000000000, 0.381830050505119, 0.000000000000000,
    0.279705391489277, 0.000000000000000, 0.129484966168870, 0.000000000000000};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const Fn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double k15 = kGkWk[0] * f0;
    double g7 = kGkWg[0] * f0;
    for (int i = 1; i < kGk; ++i) {
        const double dx = h * kGkNode[i];
        const double fs = f(c - dx) + f(c + dx);
        k15 += kGkWk[i] * fs;
        g7 += kGkWg[i] * fs;
    }
    k15 *= h;
    g7 *= h;
    const double diff = std::fabs(k15 - g7);
    // Classical QUADPACK-style error inflation.
    const double err = diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::fabs(k15), 1e-300), 1.5)) + diff * 1e-14;
    return {k15, std::max(err, std::fabs(k15) * 1e-15)};
}

double integrate_piece(const Fn& f, double a, double b, double abs_tol, double rel_tol) {
    struct Interval {
        double a, b, value, error;
    };
    PanelResult whole = gk15(f, a, b);
    std::vector<Interval> stack{{a, b, whole.value, whole.error}};
    double total = whole.value;
    double total_err = whole.error;
    const int max_intervals = 4000;
    int splits = 0;
    while (total_err > std::max(abs_tol, rel_tol * std::fabs(total)) && splits < max_intervals) {
        // Split the interval with the largest error estimate.
        auto worst = std::max_element(stack.begin(), stack.end(), [](const Interval& x, const Interval& y) {
            return x.error < y.error;
        });
        Interval iv = *worst;
        stack.erase(worst);
        const double m = 0.5 * (iv.a + iv.b);
        if (m <= iv.a || m >= iv.b) {
            stack.push_back(iv); // interval at floating-point resolution
            break;
        }
        PanelResult left = gk15(f, iv.a, m);
        PanelResult right = gk15(f, m, iv.b);
        total += left.value + right.value - iv.value;
        total_err += left.error + right.error - iv.error;
        stack.push_back({iv.a, m, left.value, left.error});
        stack.push_back({m, iv.b, right.value, right.error});
        ++splits;
    }
    return total;
}

} // namespace

double integrate(const Fn& f, double a, double b, std::span<const double> breakpoints,
                 double abs_tol, double rel_tol) {
    if (!(a < b)) return 0.0;
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double x : breakpoints) {
        if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double sum = 0.0;
    const double piece_tol = abs_tol / static_cast<double>(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        sum += integrate_piece(f, cuts[i], cuts[i + 1], piece_tol, rel_tol);
    }
    return sum;
}

namespace {
// 16-point Gauss-Legendre abscissae/weights on [-1,1], positive half.
constexpr int kGl = 8;
constexpr double kGlNode[kGl] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[kGl] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
} // namespace

double gauss_legendre_32(const Fn& f, double a, double b) {
    // Two 16-point panels; exact enough for the smooth scans this backs.
    double sum = 0.0;
    const double m = 0.5 * (a + b);
    for (int panel = 0; panel < 2; ++panel) {
        const double pa = panel == 0 ? a : m;
        const double pb = panel == 0 ? m : b;
        const double c = 0.5 * (pa + pb);
        const double h = 0.5 * (pb - pa);
        double acc = 0.0;
        for (int i = 0; i < kGl; ++i) {
            const double dx = h * kGlNode[i];
            acc += kGlWeight[i] * (f(c - dx) + f(c + dx));
        }
        sum += acc * h;
    }
    return sum;
}

double find_root(const Fn& f, double lo, double hi, double xtol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw NoRoot("find_root: no sign change on bracket");
    double a = lo, b = hi, fa = flo, fb = fhi;
    for (int iter = 0; iter < 200 && (b - a) > xtol; ++iter) {
        // Secant proposal, clipped into the bracket interior; fall back to
        // bisection when it stalls near an endpoint.
        double m = 0.5 * (a + b);
        double s = m;
        if (fb != fa) {
            s = b - fb * (b - a) / (fb - fa);
            const double margin = 0.01 * (b - a);
            if (!(s > a + margin && s < b - margin)) s = m;
        }
        const double fs = f(s);
        if (fs == 0.0) return s;
        if (fa * fs < 0.0) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
    }
    return 0.5 * (a + b);
}

double golden_max(const Fn& f, double a, double b, double xtol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi, double xtol) {
    while (hi - lo > xtol) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        if (pred(m)) {
            hi = m;
        } else {
            lo = m;
        }
    }
    return hi;
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {
// Acklam's rational approximation to the standard normal quantile,
// polished below with one Halley step against erfc.
double norm_quantile_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}
} // namespace

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw OutOfSupport("norm_quantile: p outside [0,1]");
    }
    double x = norm_quantile_approx(p);
    for (int i = 0; i < 2; ++i) {
        const double e = norm_cdf(x) - p;
        const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

BatchStats batch_stats(std::span<const double> batch_means) {
    BatchStats out;
    const std::size_t m = batch_means.size();
    if (m == 0) return out;
    double sum = 0.0;
    for (double v : batch_means) sum += v;
    out.mean = sum / static_cast<double>(m);
    if (m < 2) return out;
    double ss = 0.0;
    for (double v : batch_means) {
        const double d = v - out.mean;
        ss += d * d;
    }
    out.se = std::sqrt(ss / (static_cast<double>(m) * static_cast<double>(m - 1)));
    return out;
}

} // namespace auctionlab::num
