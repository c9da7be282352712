#include "slnatlas/series.hpp"

#include <cassert>
#include <cmath>

namespace slnatlas::series {

Series mul(const Series& a, const Series& b, std::size_t n) {
    Series c(n, 0.0);
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        if (a[i] == 0.0) continue;
        const std::size_t jmax = std::min(b.size(), n - i);
        for (std::size_t j = 0; j < jmax; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

Series recip(const Series& a, std::size_t n) {
    assert(!a.empty() && a[0] != 0.0);
    Series u(n, 0.0);
    u[0] = 1.0 / a[0];
    for (std::size_t k = 1; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i <= k && i < a.size(); ++i) s += a[i] * u[k - i];
        u[k] = -s / a[0];
    }
    return u;
}

Series compose(const Series& f, const Series& g, std::size_t n) {
    assert(g.empty() || g[0] == 0.0);
    // Horner on series: r = f[m-1]; r = r*g + f[i].
    Series r(n, 0.0);
    if (f.empty()) return r;
    r[0] = f.back();
    for (std::size_t i = f.size() - 1; i-- > 0;) {
        r = mul(r, g, n);
        r[0] += f[i];
    }
    return r;
}

Series revert(const Series& f, std::size_t n) {
    assert(f.size() >= 2 && f[0] == 0.0 && f[1] != 0.0);
    // Fixed point g = (x - tail(f)(g)) / f[1], where tail(f) = f - f[1] x.
    // Each sweep fixes one more coefficient, so n sweeps suffice.
    Series tail = f;
    tail.resize(std::max<std::size_t>(n, 2), 0.0);
    tail[1] = 0.0;
    Series g(n, 0.0);
    if (n > 1) g[1] = 1.0 / f[1];
    for (std::size_t sweep = 2; sweep < n; ++sweep) {
        Series t = compose(tail, g, n);
        for (std::size_t j = 0; j < n; ++j) g[j] = -t[j] / f[1];
        if (n > 1) g[1] += 1.0 / f[1];
    }
    return g;
}

Series derive(const Series& a) {
    if (a.size() <= 1) return {};
    Series d(a.size() - 1);
    for (std::size_t j = 1; j < a.size(); ++j) d[j - 1] = a[j] * static_cast<double>(j);
    return d;
}

double eval(const Series& s, double x) {
    double r = 0.0;
    for (std::size_t i = s.size(); i-- > 0;) r = r * x + s[i];
    return r;
}

double eval_deriv(const Series& s, std::size_t k, double x) {
    if (k == 0) return eval(s, x);
    if (k >= s.size()) return 0.0;
    // Coefficients of the k-th derivative: s[j+k] * (j+k)!/j!.
    double r = 0.0;
    for (std::size_t j = s.size() - k; j-- > 0;) {
        double fall = 1.0;
        for (std::size_t i = 0; i < k; ++i) fall *= static_cast<double>(j + k - i);
        r = r * x + s[j + k] * fall;
    }
    return r;
}

}  // namespace slnatlas::series
