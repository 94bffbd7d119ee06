#include "bandgap/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "bandgap/errors.hpp"

namespace bandgap {
namespace {

constexpr double epmach = std::numeric_limits<double>::epsilon();
constexpr double uflow = std::numeric_limits<double>::min();

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> xgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> wgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478797, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool at_floor;  // error is the roundoff floor; splitting cannot reduce it
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk21(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 21> fv{};
    const double fc = f(center);
    double resk = fc * wgk[10];
    double resabs = std::abs(resk);
    double resg = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * xgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        resk += wgk[j] * (f1 + f2);
        resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) {
            resg += wg[j / 2] * (f1 + f2);
        }
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j) {
        resasc += wgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
    }
    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    bool at_floor = false;
    if (resabs > uflow / (50.0 * epmach) && epmach * 50.0 * resabs >= err) {
        err = epmach * 50.0 * resabs;
        at_floor = true;
    }
    return {a, b, value, err, at_floor};
}

struct AdaptiveOutcome {
    QuadratureResult result;
    bool converged = false;
};

AdaptiveOutcome adaptive(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol, std::size_t max_panels) {
    std::priority_queue<Panel> heap;
    Panel first = gk21(f, a, b);
    double total = first.value;
    double total_err = first.error;
    std::size_t evaluations = 21;
    heap.push(first);
    std::size_t panels = 1;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (heap.empty() || panels >= max_panels) {
            return {{total, total_err, evaluations}, false};
        }
        const Panel worst = heap.top();
        heap.pop();
        if (worst.at_floor) {
            // Only roundoff is left in the worst panel, hence everywhere.
            return {{total, total_err, evaluations}, true};
        }
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            std::abs(worst.b - worst.a) <= 100.0 * epmach * std::max(std::abs(worst.a), std::abs(worst.b))) {
            // Too narrow to split: retire it, its error stays in the total.
            if (heap.empty()) {
                return {{total, total_err, evaluations}, false};
            }
            continue;
        }
        const Panel left = gk21(f, worst.a, mid);
        const Panel right = gk21(f, mid, worst.b);
        evaluations += 42;
        ++panels;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    return {{total, total_err, evaluations}, true};
}

QuadratureResult must_converge(const AdaptiveOutcome& outcome, const char* where) {
    if (!outcome.converged) {
        throw ConvergenceError(std::string("pv_quadrature: panel budget exhausted in ") + where,
                               outcome.result.value, outcome.result.error);
    }
    return outcome.result;
}

// Tail [start, inf) of an oscillatory integrand: half-period panels, Wynn
// extrapolation of the partial sums, panel count doubled until two successive
// extrapolations agree.
QuadratureResult oscillatory_tail(const PVProblem& p, double start) {
    const double h = *p.half_period;
    std::vector<double> partial;
    partial.reserve(256);
    double running = 0.0;
    double panel_err = 0.0;
    std::size_t evaluations = 0;
    auto extend_to = [&](std::size_t count) {
        while (partial.size() < count) {
            const double lo = start + static_cast<double>(partial.size()) * h;
            const auto piece = adaptive(p.integrand, lo, lo + h, p.abs_tol * 1e-3, p.rel_tol * 1e-2,
                                        p.max_panels);
            if (!piece.converged) {
                throw ConvergenceError("pv_quadrature: tail panel did not converge",
                                       running + piece.result.value, piece.result.error);
            }
            running += piece.result.value;
            panel_err += piece.result.error;
            evaluations += piece.result.evaluations;
            partial.push_back(running);
        }
    };
    constexpr std::size_t window = 32;
    auto estimate = [&]() {
        const std::size_t m = std::min(window, partial.size());
        return wynn_epsilon(partial.data() + (partial.size() - m), m);
    };

    std::size_t count = 16;
    extend_to(count);
    double previous = estimate();
    while (true) {
        count *= 2;
        extend_to(count);
        const double current = estimate();
        const double diff = std::abs(current - previous);
        if (diff <= std::max(p.abs_tol, p.rel_tol * std::abs(current))) {
            return {current, diff + panel_err, evaluations};
        }
        if (count >= p.max_panels) {
            throw ConvergenceError("pv_quadrature: oscillatory tail extrapolation did not settle",
                                   current, diff + panel_err);
        }
        previous = current;
    }
}

QuadratureResult decaying_tail(const PVProblem& p, double start) {
    const auto& f = p.integrand;
    auto mapped = [&f, start](double t) {
        const double s = 1.0 - t;
        return f(start + t / s) / (s * s);
    };
    return must_converge(adaptive(mapped, 0.0, 1.0, p.abs_tol, p.rel_tol, p.max_panels),
                         "mapped tail");
}

void accumulate(QuadratureResult& into, const QuadratureResult& part) {
    into.value += part.value;
    into.error += part.error;
    into.evaluations += part.evaluations;
}

}  // namespace

QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double a,
                                        double b, double abs_tol, double rel_tol,
                                        std::size_t max_panels) {
    if (!(b > a)) {
        if (a == b) return {};
        throw DomainError("adaptive_gauss_kronrod: require a < b");
    }
    return must_converge(adaptive(f, a, b, abs_tol, rel_tol, max_panels), "finite interval");
}

double wynn_epsilon(const double* s, std::size_t n) {
    if (n == 0) return 0.0;
    if (n < 3) return s[n - 1];
    // Column k of the epsilon table: eps_{k+1}[i] = eps_{k-1}[i+1] + 1/(eps_k[i+1] - eps_k[i]).
    // Even columns are the extrapolated estimates.
    std::vector<double> before(n + 1, 0.0);
    std::vector<double> column(s, s + n);
    double best = s[n - 1];
    for (std::size_t k = 0; column.size() > 1; ++k) {
        std::vector<double> next(column.size() - 1);
        for (std::size_t i = 0; i < next.size(); ++i) {
            const double diff = column[i + 1] - column[i];
            if (diff == 0.0) {
                return k % 2 == 0 ? column.back() : best;
            }
            next[i] = before[i + 1] + 1.0 / diff;
        }
        before = std::move(column);
        column = std::move(next);
        if ((k + 1) % 2 == 0) {
            best = column.back();
        }
    }
    return best;
}

QuadratureResult pv_quadrature(const PVProblem& p) {
    if (!p.integrand) {
        throw DomainError("pv_quadrature: missing integrand");
    }
    if (!(p.rel_tol > 0.0) || !(p.abs_tol > 0.0)) {
        throw DomainError("pv_quadrature: tolerances must be > 0");
    }
    if (!(p.upper > p.lower) || std::isinf(p.lower)) {
        throw DomainError("pv_quadrature: require finite lower < upper");
    }
    const bool infinite = std::isinf(p.upper);
    if (p.pole && !(*p.pole > p.lower && *p.pole < p.upper)) {
        throw DomainError("pv_quadrature: pole must lie strictly inside (lower, upper)");
    }
    if (p.half_period && !(*p.half_period > 0.0)) {
        throw DomainError("pv_quadrature: half_period must be > 0");
    }

    QuadratureResult total;
    double finite_end = infinite ? p.lower : p.upper;
    if (p.pole) {
        const double pole = *p.pole;
        const double w = infinite ? pole - p.lower : std::min(pole - p.lower, p.upper - pole);
        const auto& f = p.integrand;
        auto folded = [&f, pole](double t) { return f(pole + t) + f(pole - t); };
        accumulate(total, must_converge(adaptive(folded, 0.0, w, p.abs_tol, p.rel_tol, p.max_panels),
                                        "pole window"));
        if (pole - w > p.lower) {
            accumulate(total, must_converge(adaptive(f, p.lower, pole - w, p.abs_tol, p.rel_tol,
                                                     p.max_panels),
                                            "left of pole"));
        }
        if (!infinite && pole + w < p.upper) {
            accumulate(total, must_converge(adaptive(f, pole + w, p.upper, p.abs_tol, p.rel_tol,
                                                     p.max_panels),
                                            "right of pole"));
        }
        finite_end = pole + w;
    } else if (!infinite) {
        accumulate(total, must_converge(adaptive(p.integrand, p.lower, p.upper, p.abs_tol,
                                                 p.rel_tol, p.max_panels),
                                        "finite interval"));
    }
    if (infinite) {
        accumulate(total, p.half_period ? oscillatory_tail(p, finite_end)
                                        : decaying_tail(p, finite_end));
    }
    return total;
}

}  // namespace bandgap
