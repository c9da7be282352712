#include "slnatlas/interval_field.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "slnatlas/errors.hpp"

namespace slnatlas {
namespace {

constexpr int kExactDepth = 1 << 20;
constexpr double kMergeTol = 1e-8;
constexpr double kResolutionLimit = 1e-5;

int poly_degree(const std::vector<double>& c) {
    for (std::size_t i = c.size(); i-- > 0;)
        if (c[i] != 0.0) return static_cast<int>(i);
    return -1;  // identically zero
}

double poly_eval_deriv(const std::vector<double>& c, double t, int k) {
    // Horner on the k-th derivative's coefficients c[j+k] * (j+k)!/j!.
    const int d = static_cast<int>(c.size()) - 1;
    if (k > d) return 0.0;
    double r = 0.0;
    for (int j = d - k; j >= 0; --j) {
        double fall = 1.0;
        for (int i = 0; i < k; ++i) fall *= static_cast<double>(j + k - i);
        r = r * t + c[j + k] * fall;
    }
    return r;
}

// Taylor coefficients of the polynomial about t0 by repeated synthetic
// division; exact up to rounding.
std::vector<double> poly_taylor(std::vector<double> c, double t0, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count && !c.empty()) {
        double rem = c.back();
        for (std::size_t i = c.size() - 1; i-- > 0;) {
            const double next = c[i] + t0 * rem;
            c[i] = rem;  // quotient coefficient
            rem = next;
        }
        out.push_back(rem);
        c.pop_back();  // quotient occupies c[0 .. old_size-2]
    }
    out.resize(static_cast<std::size_t>(count), 0.0);
    return out;
}

}  // namespace

int IntervalField::depth() const {
    if (exact()) return kExactDepth;
    return std::get<SampledInterval>(repr).depth;
}

double IntervalField::eval(double t, int deriv) const {
    if (exact()) return poly_eval_deriv(std::get<IntervalPoly>(repr).coeffs, t, deriv);
    const auto& s = std::get<SampledInterval>(repr);
    if (deriv > s.depth)
        throw DerivDepthExceeded("interval field: derivative order " +
                                 std::to_string(deriv) + " exceeds depth " +
                                 std::to_string(s.depth));
    return s.jet(t)[static_cast<std::size_t>(deriv)];
}

std::vector<double> IntervalField::taylor(double t, int count) const {
    if (exact()) return poly_taylor(std::get<IntervalPoly>(repr).coeffs, t, count);
    const auto& s = std::get<SampledInterval>(repr);
    if (count - 1 > s.depth)
        throw DerivDepthExceeded("interval field: taylor depth " +
                                 std::to_string(count - 1) + " exceeds depth " +
                                 std::to_string(s.depth));
    std::vector<double> jet = s.jet(t);
    std::vector<double> out(static_cast<std::size_t>(count));
    double fact = 1.0;
    for (int j = 0; j < count; ++j) {
        if (j > 0) fact *= j;
        out[static_cast<std::size_t>(j)] = jet[static_cast<std::size_t>(j)] / fact;
    }
    return out;
}

IntervalField make_poly_field(std::vector<double> coeffs, double lo, double hi) {
    IntervalField X;
    X.domain = {lo, hi};
    X.repr = IntervalPoly{std::move(coeffs)};
    return X;
}

double sup_norm(const IntervalField& X) {
    double m = 0.0;
    for (int i = 0; i <= 1024; ++i) {
        const double t =
            X.domain[0] + (X.domain[1] - X.domain[0]) * i / 1024.0;
        m = std::max(m, std::abs(X.eval(t)));
    }
    return m;
}

namespace {

struct Candidate {
    double t;
    int order;
};

// Order of the zero at t: least j with |X^(j)(t)| >= thresh. Returns 0 when
// X itself is above threshold (not a zero), -1 when every available
// derivative is below threshold.
int order_at(const IntervalField& X, double t, double thresh, int max_order) {
    for (int j = 0; j <= max_order; ++j)
        if (std::abs(X.eval(t, j)) >= thresh) return j;
    return -1;
}

// Newton-polish an approximate zero. Plain damped Newton on X first (it
// converges, if only linearly, for any order), then an order scan, then
// Newton on X^(m-1), which has a simple zero where X has an order-m zero.
bool polish(const IntervalField& X, double thresh, int max_order, double lo,
            double hi, double& t, int& order) {
    const double slack = 1e-7 * (hi - lo);
    const double cap = 0.05 * (hi - lo);
    for (int it = 0; it < 80; ++it) {
        const double g = X.eval(t);
        const double gp = X.eval(t, 1);
        if (gp == 0.0) break;
        const double step = std::clamp(g / gp, -cap, cap);
        t = std::clamp(t - step, lo - slack, hi + slack);
        if (std::abs(step) < 1e-13) break;
    }
    int m = order_at(X, t, thresh, max_order);
    if (m < 0)
        throw DerivDepthExceeded(
            "interval field: zero flat to available derivative depth near t = " +
            std::to_string(t));
    if (m == 0) return false;  // polished onto a non-zero critical point
    if (m >= 2) {
        for (int it = 0; it < 80; ++it) {
            const double g = X.eval(t, m - 1);
            const double gp = X.eval(t, m);
            if (gp == 0.0) break;
            const double step = std::clamp(g / gp, -cap, cap);
            t = std::clamp(t - step, lo - slack, hi + slack);
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) break;
        }
        const int m2 = order_at(X, t, thresh, max_order);
        if (m2 != m) return false;
    }
    if (t < lo - slack || t > hi + slack) return false;
    t = std::clamp(t, lo, hi);
    order = m;
    return std::abs(X.eval(t)) < thresh;
}

}  // namespace

std::vector<IntervalZero> find_interval_zeros(const IntervalField& X,
                                              double tol_zero) {
    const double lo = X.domain[0], hi = X.domain[1];
    const double span = hi - lo;
    const double sup = sup_norm(X);
    const double thresh = tol_zero * std::max(1.0, sup);
    const int max_order = X.exact()
                              ? std::max(1, poly_degree(std::get<IntervalPoly>(X.repr).coeffs))
                              : X.depth();

    if (X.exact()) {
        if (poly_degree(std::get<IntervalPoly>(X.repr).coeffs) < 0)
            throw IdenticallyZero("interval field: all coefficients vanish");
    } else if (sup < tol_zero) {
        throw IdenticallyZero("interval field: below tolerance on probe grid");
    }

    std::vector<Candidate> cands;
    auto try_candidate = [&](double t0) {
        double t = t0;
        int order = 0;
        if (polish(X, thresh, max_order, lo, hi, t, order))
            cands.push_back({t, order});
    };

    if (X.exact()) {
        const auto& c = std::get<IntervalPoly>(X.repr).coeffs;
        const int d = poly_degree(c);
        if (d >= 1) {
            Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
            for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
            for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(d)];
            Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
            for (int i = 0; i < d; ++i) {
                const auto z = solver.eigenvalues()[i];
                if (std::abs(z.imag()) > 0.05 * std::max(1.0, span)) continue;
                const double re = z.real();
                if (re < lo - 0.05 * span || re > hi + 0.05 * span) continue;
                try_candidate(std::clamp(re, lo, hi));
            }
        }
    } else {
        constexpr int kGrid = 2048;
        std::vector<double> v(kGrid + 1);
        for (int i = 0; i <= kGrid; ++i)
            v[static_cast<std::size_t>(i)] = X.eval(lo + span * i / kGrid);
        for (int i = 0; i < kGrid; ++i) {
            const double va = v[static_cast<std::size_t>(i)], vb = v[static_cast<std::size_t>(i) + 1];
            if (va == 0.0) try_candidate(lo + span * i / kGrid);
            if (va * vb < 0.0) {
                // Bisect before polishing so Newton starts inside the bracket.
                double ta = lo + span * i / kGrid, tb = lo + span * (i + 1) / kGrid;
                double fa = va;
                for (int it = 0; it < 50; ++it) {
                    const double tm = 0.5 * (ta + tb);
                    const double fm = X.eval(tm);
                    if (fa * fm <= 0.0)
                        tb = tm;
                    else
                        ta = tm, fa = fm;
                }
                try_candidate(0.5 * (ta + tb));
            } else if (std::abs(va) <= std::abs(vb) && i > 0 &&
                       std::abs(va) <= std::abs(v[static_cast<std::size_t>(i) - 1]) &&
                       std::abs(va) < 0.01 * std::max(1.0, sup)) {
                try_candidate(lo + span * i / kGrid);  // even-order suspect
            }
        }
        if (std::abs(v.back()) < 0.01 * std::max(1.0, sup)) try_candidate(hi);
    }

    // Endpoints checked directly: an endpoint zero must always be reported.
    if (std::abs(X.eval(lo)) < thresh) try_candidate(lo);
    if (std::abs(X.eval(hi)) < thresh) try_candidate(hi);

    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.t < b.t; });
    std::vector<Candidate> zeros;
    for (const auto& c : cands) {
        if (!zeros.empty() && c.t - zeros.back().t < kMergeTol * std::max(1.0, span)) {
            zeros.back().order = std::max(zeros.back().order, c.order);
            continue;
        }
        zeros.push_back(c);
    }
    for (std::size_t i = 1; i < zeros.size(); ++i)
        if (zeros[i].t - zeros[i - 1].t < kResolutionLimit * std::max(1.0, span))
            throw ZeroIsolationFailure(
                "interval field: zeros at t = " + std::to_string(zeros[i - 1].t) +
                " and t = " + std::to_string(zeros[i].t) +
                " are closer than the resolution limit");

    std::vector<IntervalZero> out;
    out.reserve(zeros.size());
    for (const auto& z : zeros) {
        const int count = X.exact() ? z.order + 4
                                    : std::min(z.order + 4, X.depth() + 1);
        out.push_back({z.t, z.order, X.taylor(z.t, count)});
    }
    return out;
}

}  // namespace slnatlas
