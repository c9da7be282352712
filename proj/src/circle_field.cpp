#include "slnatlas/circle_field.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>

#include "slnatlas/errors.hpp"
#include "slnatlas/ode.hpp"
#include "slnatlas/series.hpp"

namespace slnatlas {
namespace {

constexpr int kExactDepth = 1 << 20;
constexpr double kMergeTol = 1e-8;
constexpr double kResolutionLimit = 1e-5;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;  // fmod rounding at the seam
    return t;
}

int TrigPoly::degree() const {
    const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
    for (std::size_t j = n; j-- > 0;) {
        const double a = j < cos_coeffs.size() ? cos_coeffs[j] : 0.0;
        const double b = j < sin_coeffs.size() ? sin_coeffs[j] : 0.0;
        if (a != 0.0 || b != 0.0) return static_cast<int>(j) + 1;
    }
    return 0;
}

double TrigPoly::eval(double theta, int deriv) const {
    double r = deriv == 0 ? a0 : 0.0;
    const int n = degree();
    for (int j = 1; j <= n; ++j) {
        const double a = j <= static_cast<int>(cos_coeffs.size()) ? cos_coeffs[j - 1] : 0.0;
        const double b = j <= static_cast<int>(sin_coeffs.size()) ? sin_coeffs[j - 1] : 0.0;
        if (a == 0.0 && b == 0.0) continue;
        double jk = 1.0;
        for (int i = 0; i < deriv; ++i) jk *= j;
        const double c = std::cos(j * theta), s = std::sin(j * theta);
        // d/dtheta rotates (cos, sin) -> (-sin, cos) and scales by j.
        switch (deriv & 3) {
            case 0: r += jk * (a * c + b * s); break;
            case 1: r += jk * (-a * s + b * c); break;
            case 2: r += jk * (-a * c - b * s); break;
            default: r += jk * (a * s - b * c); break;
        }
    }
    return r;
}

int CircleField::depth() const {
    if (exact()) return kExactDepth;
    return std::get<SampledCircle>(repr).depth;
}

double CircleField::eval(double theta, int deriv) const {
    if (exact()) return std::get<TrigPoly>(repr).eval(theta, deriv);
    const auto& s = std::get<SampledCircle>(repr);
    if (deriv == 0 && s.value) return s.value(theta);
    if (deriv > s.depth)
        throw DerivDepthExceeded("circle field: derivative order " +
                                 std::to_string(deriv) + " exceeds depth " +
                                 std::to_string(s.depth));
    return s.jet(theta)[static_cast<std::size_t>(deriv)];
}

std::vector<double> CircleField::taylor(double theta, int count) const {
    std::vector<double> out(static_cast<std::size_t>(count));
    if (exact()) {
        const auto& p = std::get<TrigPoly>(repr);
        for (int j = 0; j < count; ++j)
            out[static_cast<std::size_t>(j)] = p.eval(theta, j) / factorial(j);
        return out;
    }
    const auto& s = std::get<SampledCircle>(repr);
    if (count - 1 > s.depth)
        throw DerivDepthExceeded("circle field: taylor depth " +
                                 std::to_string(count - 1) + " exceeds depth " +
                                 std::to_string(s.depth));
    const std::vector<double> jet = s.jet(theta);
    for (int j = 0; j < count; ++j)
        out[static_cast<std::size_t>(j)] = jet[static_cast<std::size_t>(j)] / factorial(j);
    return out;
}

CircleField make_trig_field(TrigPoly p) {
    CircleField f;
    f.repr = std::move(p);
    return f;
}

double sup_norm(const CircleField& f) {
    double m = 0.0;
    for (int i = 0; i < 1024; ++i)
        m = std::max(m, std::abs(f.eval(kTwoPi * i / 1024.0)));
    return m;
}

namespace {

struct Candidate {
    double theta;
    int order;
};

int order_at(const CircleField& f, double theta, double thresh, int max_order) {
    for (int j = 0; j <= max_order; ++j)
        if (std::abs(f.eval(theta, j)) >= thresh) return j;
    return -1;
}

bool polish(const CircleField& f, double thresh, int max_order, double& theta,
            int& order) {
    constexpr double kCap = 0.3;
    for (int it = 0; it < 80; ++it) {
        const double g = f.eval(theta);
        const double gp = f.eval(theta, 1);
        if (gp == 0.0) break;
        const double step = std::clamp(g / gp, -kCap, kCap);
        theta -= step;
        if (std::abs(step) < 1e-13) break;
    }
    int m = order_at(f, theta, thresh, max_order);
    if (m < 0)
        throw DerivDepthExceeded(
            "circle field: zero flat to available derivative depth near theta = " +
            std::to_string(wrap_angle(theta)));
    if (m == 0) return false;
    if (m >= 2) {
        for (int it = 0; it < 80; ++it) {
            const double g = f.eval(theta, m - 1);
            const double gp = f.eval(theta, m);
            if (gp == 0.0) break;
            const double step = std::clamp(g / gp, -kCap, kCap);
            theta -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(theta))) break;
        }
        const int m2 = order_at(f, theta, thresh, max_order);
        if (m2 != m) return false;
    }
    theta = wrap_angle(theta);
    order = m;
    return std::abs(f.eval(theta)) < thresh;
}

}  // namespace

std::vector<ZeroDatum> find_zeros(const CircleField& f, double tol_zero) {
    const double sup = sup_norm(f);
    const double thresh = tol_zero * std::max(1.0, sup);
    std::vector<Candidate> cands;

    if (f.exact()) {
        const auto& p = std::get<TrigPoly>(f.repr);
        const int n = p.degree();
        if (n == 0) {
            if (p.a0 == 0.0)
                throw IdenticallyZero("circle field: all coefficients vanish");
            return {};
        }
        const int max_order = 2 * n;
        // f(theta) = sum_{j=-N..N} c_j z^j with z = exp(i theta); multiply by
        // z^N for an ordinary degree-2N polynomial whose unit-circle roots
        // are the real zeros.
        std::vector<std::complex<double>> c(static_cast<std::size_t>(2 * n + 1));
        c[static_cast<std::size_t>(n)] = p.a0;
        for (int j = 1; j <= n; ++j) {
            const double a = j <= static_cast<int>(p.cos_coeffs.size()) ? p.cos_coeffs[j - 1] : 0.0;
            const double b = j <= static_cast<int>(p.sin_coeffs.size()) ? p.sin_coeffs[j - 1] : 0.0;
            c[static_cast<std::size_t>(n + j)] = std::complex<double>(a / 2.0, -b / 2.0);
            c[static_cast<std::size_t>(n - j)] = std::complex<double>(a / 2.0, b / 2.0);
        }
        const int d = 2 * n;
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < d; ++i)
            comp(i, d - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(d)];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
        for (int i = 0; i < d; ++i) {
            const std::complex<double> z = solver.eigenvalues()[i];
            if (std::abs(std::abs(z) - 1.0) > 0.05) continue;
            double theta = wrap_angle(std::atan2(z.imag(), z.real()));
            int order = 0;
            if (polish(f, thresh, max_order, theta, order))
                cands.push_back({theta, order});
        }
    } else {
        if (sup < tol_zero)
            throw IdenticallyZero("circle field: below tolerance on probe grid");
        const int max_order = f.depth();
        constexpr int kGrid = 4096;
        std::vector<double> v(kGrid);
        for (int i = 0; i < kGrid; ++i) v[static_cast<std::size_t>(i)] = f.eval(kTwoPi * i / kGrid);
        auto try_candidate = [&](double theta0) {
            double theta = theta0;
            int order = 0;
            if (polish(f, thresh, max_order, theta, order))
                cands.push_back({theta, order});
        };
        for (int i = 0; i < kGrid; ++i) {
            const double va = v[static_cast<std::size_t>(i)];
            const double vb = v[static_cast<std::size_t>((i + 1) % kGrid)];
            const double ta = kTwoPi * i / kGrid;
            if (va == 0.0) {
                try_candidate(ta);
            } else if (va * vb < 0.0) {
                double a = ta, b = kTwoPi * (i + 1) / kGrid, fa = va;
                for (int it = 0; it < 50; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = f.eval(m);
                    if (fa * fm <= 0.0)
                        b = m;
                    else
                        a = m, fa = fm;
                }
                try_candidate(0.5 * (a + b));
            } else {
                const double prev = std::abs(v[static_cast<std::size_t>((i + kGrid - 1) % kGrid)]);
                if (std::abs(va) <= prev && std::abs(va) <= std::abs(vb) &&
                    std::abs(va) < 0.01 * std::max(1.0, sup))
                    try_candidate(ta);  // even-order suspect
            }
        }
    }

    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.theta < b.theta; });
    std::vector<Candidate> zeros;
    for (const auto& c : cands) {
        if (!zeros.empty() && c.theta - zeros.back().theta < kMergeTol) {
            zeros.back().order = std::max(zeros.back().order, c.order);
            continue;
        }
        zeros.push_back(c);
    }
    if (zeros.size() >= 2 &&
        zeros.front().theta + kTwoPi - zeros.back().theta < kMergeTol) {
        zeros.front().order = std::max(zeros.front().order, zeros.back().order);
        zeros.pop_back();
    }
    for (std::size_t i = 1; i < zeros.size(); ++i)
        if (zeros[i].theta - zeros[i - 1].theta < kResolutionLimit)
            throw ZeroIsolationFailure(
                "circle field: zeros at theta = " + std::to_string(zeros[i - 1].theta) +
                " and theta = " + std::to_string(zeros[i].theta) +
                " are closer than the resolution limit");
    if (zeros.size() >= 2 &&
        zeros.front().theta + kTwoPi - zeros.back().theta < kResolutionLimit)
        throw ZeroIsolationFailure("circle field: zeros straddling theta = 0 are closer than the resolution limit");

    std::vector<ZeroDatum> out;
    out.reserve(zeros.size());
    for (const auto& z : zeros) {
        const int count = f.exact() ? z.order + 4
                                    : std::min(z.order + 4, f.depth() + 1);
        out.push_back({z.theta, z.order, f.taylor(z.theta, count)});
    }
    return out;
}

double flow(const CircleField& f, double theta0, double t) {
    const double y = ode::integrate([&f](double th) { return f.eval(th); },
                                    theta0, t);
    return wrap_angle(y);
}

double CircleDiffeo::eval(double theta) const {
    return theta + displacement.eval(theta);
}

double CircleDiffeo::deriv(double theta, int order) const {
    const double d = displacement.eval(theta, order);
    return order == 1 ? 1.0 + d : d;
}

double CircleDiffeo::inverse(double phi) const {
    // |d| is bounded by the coefficient l1 norm; bracket, bisect, Newton.
    double bound = std::abs(displacement.a0) + 0.1;
    for (double a : displacement.cos_coeffs) bound += std::abs(a);
    for (double b : displacement.sin_coeffs) bound += std::abs(b);
    double lo = phi - bound, hi = phi + bound;
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eval(mid) < phi ? lo : hi) = mid;
    }
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 30; ++it) {
        const double r = eval(u) - phi;
        const double dp = deriv(u);
        if (dp <= 0.0) break;
        const double step = r / dp;
        u -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(u))) break;
    }
    return u;
}

CircleField pushforward(const CircleField& f, const CircleDiffeo& h) {
    for (int i = 0; i < 4096; ++i)
        if (h.deriv(kTwoPi * i / 4096.0) <= 0.0)
            throw NotDiffeomorphism(
                "pushforward: map derivative not positive at theta = " +
                std::to_string(kTwoPi * i / 4096.0));
    if (!f.exact() && f.depth() < 4)
        throw InsufficientDerivativeDepth(
            "pushforward: input field needs derivative depth >= 4");

    SampledCircle s;
    s.depth = 4;
    s.jet = [f, h](double phi) {
        using series::Series;
        const double u = h.inverse(phi);
        // h(u + x) - h(u) as a series in x, to x^5.
        Series ht(6);
        ht[0] = 0.0;
        for (int j = 1; j <= 5; ++j) ht[static_cast<std::size_t>(j)] = h.deriv(u, j) / factorial(j);
        // h'(u + x) to x^4.
        Series hp(5);
        for (int j = 0; j < 5; ++j) hp[static_cast<std::size_t>(j)] = (j + 1) * ht[static_cast<std::size_t>(j) + 1];
        const Series fs = f.taylor(u, 5);
        const Series v = series::mul(hp, fs, 5);   // (h' f)(u + x)
        Series htrunc(ht.begin(), ht.begin() + 5);
        const Series g = series::revert(htrunc, 5);  // u(phi + y) - u
        const Series w = series::compose(v, g, 5);
        std::vector<double> jet(5);
        for (int j = 0; j < 5; ++j) jet[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] * factorial(j);
        return jet;
    };
    s.value = [f, h](double phi) {
        const double u = h.inverse(phi);
        return h.deriv(u) * f.eval(u);
    };
    CircleField out;
    out.repr = std::move(s);
    return out;
}

bool validate_involution(const CircleField& f, const Involution& tau,
                         double tol) {
    if (tau.kind == Involution::Kind::Identity ||
        tau.kind == Involution::Kind::ComponentSwap)
        return true;
    const double scale = tol * std::max(1.0, sup_norm(f));
    for (int i = 0; i < 1024; ++i) {
        const double th = kTwoPi * i / 1024.0;
        double mismatch;
        if (tau.kind == Involution::Kind::FreeRotation)
            mismatch = f.eval(th + kTwoPi / 2.0) - f.eval(th);
        else
            mismatch = f.eval(2.0 * tau.axis - th) + f.eval(th);
        if (std::abs(mismatch) > scale) return false;
    }
    return true;
}

CircleField double_interval(const IntervalField& X) {
    using series::Series;
    if (std::abs(X.domain[0] + 1.0) > 1e-9 || std::abs(X.domain[1] - 1.0) > 1e-9)
        throw EndpointConstraintViolated("double_interval: domain must be [-1, 1]");
    const double etol = 1e-7 * std::max(1.0, sup_norm(X));
    if (std::abs(X.eval(-1.0)) > etol || std::abs(X.eval(1.0)) > etol)
        throw EndpointConstraintViolated(
            "double_interval: field must vanish at both endpoints");
    if (std::abs(X.eval(-1.0, 1) - 1.0) > etol || std::abs(X.eval(1.0, 1) - 1.0) > etol)
        throw EndpointConstraintViolated(
            "double_interval: field needs first derivative 1 at both endpoints");

    const bool exact_in = X.exact();
    const int len = exact_in ? 32 : X.depth() + 1;
    const double band = exact_in ? 0.3 : 0.12;
    const int depth_out = exact_in ? 6 : std::min(6, X.depth());

    // Series of -cos x and of sin(x)/x about each pole image.
    Series e0(static_cast<std::size_t>(len), 0.0), epi(static_cast<std::size_t>(len), 0.0);
    Series s0(static_cast<std::size_t>(len), 0.0), spi(static_cast<std::size_t>(len), 0.0);
    for (int k = 0; 2 * k < len; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        e0[static_cast<std::size_t>(2 * k)] = -sign / factorial(2 * k);
        epi[static_cast<std::size_t>(2 * k)] = sign / factorial(2 * k);
        s0[static_cast<std::size_t>(2 * k)] = sign / factorial(2 * k + 1);
        spi[static_cast<std::size_t>(2 * k)] = -sign / factorial(2 * k + 1);
    }
    auto pole_series = [&](double t0, const Series& e, const Series& ssin) {
        Series xs = X.taylor(t0, len);
        Series ez = e;
        ez[0] = 0.0;
        Series num = series::compose(xs, ez, static_cast<std::size_t>(len));
        num[0] = 0.0;  // X vanishes at the endpoint; kill the residual
        num.erase(num.begin());  // divide by x
        return series::mul(num, series::recip(ssin, static_cast<std::size_t>(len) - 1),
                           static_cast<std::size_t>(len) - 1);
    };
    const Series f0 = pole_series(-1.0, e0, s0);
    const Series fpi = pole_series(1.0, epi, spi);

    SampledCircle s;
    s.depth = depth_out;
    s.jet = [X, f0, fpi, band, depth_out](double theta) {
        using series::Series;
        const double th = wrap_angle(theta);
        std::vector<double> jet(static_cast<std::size_t>(depth_out) + 1);
        const double pi = kTwoPi / 2.0;
        if (th <= band || kTwoPi - th <= band) {
            const double x = th <= band ? th : th - kTwoPi;
            for (int j = 0; j <= depth_out; ++j)
                jet[static_cast<std::size_t>(j)] = series::eval_deriv(f0, static_cast<std::size_t>(j), x);
        } else if (std::abs(th - pi) <= band) {
            const double x = th - pi;
            for (int j = 0; j <= depth_out; ++j)
                jet[static_cast<std::size_t>(j)] = series::eval_deriv(fpi, static_cast<std::size_t>(j), x);
        } else {
            const std::size_t n = static_cast<std::size_t>(depth_out) + 1;
            const double t0 = -std::cos(th);
            Series tser(n), sser(n);
            for (std::size_t j = 0; j < n; ++j) {
                const double fj = factorial(static_cast<int>(j));
                switch (j & 3) {
                    case 0: tser[j] = -std::cos(th) / fj; sser[j] = std::sin(th) / fj; break;
                    case 1: tser[j] = std::sin(th) / fj; sser[j] = std::cos(th) / fj; break;
                    case 2: tser[j] = std::cos(th) / fj; sser[j] = -std::sin(th) / fj; break;
                    default: tser[j] = -std::sin(th) / fj; sser[j] = -std::cos(th) / fj; break;
                }
            }
            tser[0] = 0.0;  // expand X about t0
            const Series xs = X.taylor(t0, static_cast<int>(n));
            const Series num = series::compose(xs, tser, n);
            const Series w = series::mul(num, series::recip(sser, n), n);
            for (std::size_t j = 0; j < n; ++j)
                jet[j] = w[j] * factorial(static_cast<int>(j));
        }
        return jet;
    };
    s.value = [X, f0, fpi, band](double theta) {
        const double th = wrap_angle(theta);
        const double pi = kTwoPi / 2.0;
        if (th <= band || kTwoPi - th <= band)
            return series::eval(f0, th <= band ? th : th - kTwoPi);
        if (std::abs(th - pi) <= band) return series::eval(fpi, th - pi);
        return X.eval(-std::cos(th)) / std::sin(th);
    };
    CircleField out;
    out.repr = std::move(s);
    return out;
}

}  // namespace slnatlas
