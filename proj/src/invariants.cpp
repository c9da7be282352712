#include "slnatlas/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slnatlas/errors.hpp"
#include "slnatlas/quadrature.hpp"
#include "slnatlas/series.hpp"

namespace slnatlas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRegularizationTol = 1e-6;  // window-halving agreement
constexpr double kAmbiguityFactor = 4.0;     // buffer zone above tol_match
constexpr int kExactLaurentDepth = 14;

// |x - y| relative to max(1, |x|, |y|).
double rel_dist(double x, double y) {
    return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

// Laurent coefficients c_{-m}..c_{depth} of 1/f from Taylor coefficients of
// f about the zero. The leading m Taylor entries are the (numerically tiny)
// sub-threshold terms; inversion starts at T_m.
std::vector<double> invert_taylor(const std::vector<double>& taylor, int m,
                                  int depth) {
    const std::size_t need = static_cast<std::size_t>(m + depth + 1);
    series::Series v(taylor.begin() + m, taylor.end());
    v.resize(std::max<std::size_t>(need, 1), 0.0);
    if (v[0] == 0.0)
        throw InsufficientDerivativeDepth(
            "laurent: leading Taylor coefficient vanishes at the stated order");
    return series::recip(v, need);
}

// Inner core radius per pole order: small enough that the series tail is
// negligible for any plausible convergence radius, large enough that
// 1/f - model stays evaluable just outside it.
double core_radius(int m, double delta) {
    const double cap = m <= 1 ? 1e-6 : (m == 2 ? 1e-3 : 1e-2);
    return std::min(delta / 4.0, cap);
}

struct QuadCfg {
    double tol;
    int max_intervals;
};

QuadCfg quad_cfg(bool exact) {
    return exact ? QuadCfg{5e-14, 4000} : QuadCfg{1e-10, 1500};
}

// Singular model sum_{j=1..m} c_{-j} x^{-j} evaluated by Horner in 1/x.
double singular_model(const LaurentData& lau, double x) {
    double r = 0.0;
    const double inv = 1.0 / x;
    for (int j = lau.order; j >= 1; --j) r = (r + lau.c(-j)) * inv;
    return r;
}

// Symmetric-window finite part around a circle zero: closed-form even
// singular terms + even regular series over the core + quadrature of the
// regular remainder over both rings. Odd powers (the residue term included)
// cancel by symmetry and never appear.
double circle_window(const std::function<double(double)>& inv_f, double theta0,
                     const LaurentData& lau, double delta, const QuadCfg& q) {
    const int m = lau.order;
    const double eta = core_radius(m, delta);
    double value = 0.0;
    for (int j = 2; j <= m; j += 2)
        value += 2.0 * lau.c(-j) * std::pow(delta, 1 - j) / (1 - j);
    const int jmax = static_cast<int>(lau.coeffs.size()) - 1 - m;
    for (int l = 0; l <= jmax; l += 2)
        value += 2.0 * lau.c(l) * std::pow(eta, l + 1) / (l + 1);
    auto g = [&](double x) { return inv_f(theta0 + x) - singular_model(lau, x); };
    value += quadrature::integrate(g, eta, delta, q.tol, q.tol, q.max_intervals).value;
    value += quadrature::integrate(g, -delta, -eta, q.tol, q.tol, q.max_intervals).value;
    return value;
}

// One-sided finite part over [z, z+delta] (side=+1) or [z-delta, z]
// (side=-1) at one end of an interval gap of length gap_len. The log
// divergence is normalized by the gap length.
double gap_window(const std::function<double(double)>& inv_f, double z,
                  const LaurentData& lau, double delta, double gap_len,
                  int side, const QuadCfg& q) {
    const int m = lau.order;
    const double eta = core_radius(m, delta);
    const double s = static_cast<double>(side);
    double value = s * lau.c(-1) * std::log(delta / gap_len);
    for (int j = 2; j <= m; ++j)
        value += lau.c(-j) * std::pow(s * delta, 1 - j) / (1 - j) * s;
    const int jmax = static_cast<int>(lau.coeffs.size()) - 1 - m;
    for (int l = 0; l <= jmax; ++l)
        value += lau.c(l) * std::pow(s * eta, l + 1) / (l + 1) * s;
    auto g = [&](double x) { return inv_f(z + x) - singular_model(lau, x); };
    const double lo = side > 0 ? eta : -delta;
    const double hi = side > 0 ? delta : -eta;
    value += quadrature::integrate(g, lo, hi, q.tol, q.tol, q.max_intervals).value;
    return value;
}

}  // namespace

LaurentData laurent_at_zero(const CircleField& f, const ZeroDatum& z,
                            int depth) {
    const int m = z.order;
    const int need = 2 * m + depth + 1;
    if (!f.exact() && need - 1 > f.depth())
        throw InsufficientDerivativeDepth(
            "laurent: order-" + std::to_string(m) + " zero needs Taylor depth " +
            std::to_string(need - 1) + ", field carries " +
            std::to_string(f.depth()));
    LaurentData out;
    out.order = m;
    out.coeffs = invert_taylor(f.taylor(z.theta, need), m, depth);
    return out;
}

double residue(const CircleField& f, const ZeroDatum& z) {
    return laurent_at_zero(f, z, -1).c(-1);
}

double global_invariant(const CircleField& f,
                        const std::vector<ZeroDatum>& zeros) {
    const QuadCfg q = quad_cfg(f.exact());
    auto inv_f = [&f](double th) { return 1.0 / f.eval(th); };
    if (zeros.empty())
        return quadrature::integrate(inv_f, 0.0, kTwoPi, q.tol, q.tol,
                                     q.max_intervals).value;

    const int k = static_cast<int>(zeros.size());
    std::vector<LaurentData> lau;
    lau.reserve(zeros.size());
    for (const auto& z : zeros) {
        const int depth = f.exact()
                              ? kExactLaurentDepth
                              : f.depth() - 2 * z.order;
        if (depth < 0)
            throw InsufficientDerivativeDepth(
                "global invariant: sampled depth too small at an order-" +
                std::to_string(z.order) + " zero");
        lau.push_back(laurent_at_zero(f, z, depth));
    }
    std::vector<double> delta(zeros.size());
    for (int i = 0; i < k; ++i) {
        const double prev = zeros[static_cast<std::size_t>((i + k - 1) % k)].theta;
        const double next = zeros[static_cast<std::size_t>((i + 1) % k)].theta;
        double gap_prev = zeros[static_cast<std::size_t>(i)].theta - prev;
        double gap_next = next - zeros[static_cast<std::size_t>(i)].theta;
        if (k == 1) gap_prev = gap_next = kTwoPi;
        if (gap_prev <= 0.0) gap_prev += kTwoPi;
        if (gap_next <= 0.0) gap_next += kTwoPi;
        delta[static_cast<std::size_t>(i)] = std::min(0.1, 0.5 * std::min(gap_prev, gap_next));
    }
    auto total = [&](double scale) {
        double mu = 0.0;
        for (int i = 0; i < k; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            mu += circle_window(inv_f, zeros[iu].theta, lau[iu],
                                delta[iu] * scale, q);
            const auto ju = static_cast<std::size_t>((i + 1) % k);
            const double a = zeros[iu].theta + delta[iu] * scale;
            double b = zeros[ju].theta - delta[ju] * scale;
            if (ju <= iu) b += kTwoPi;  // arc wraps through theta = 0
            if (b > a)
                mu += quadrature::integrate(inv_f, a, b, q.tol, q.tol,
                                            q.max_intervals).value;
        }
        return mu;
    };
    const double mu = total(1.0);
    const double mu_half = total(0.5);
    if (std::abs(mu - mu_half) > kRegularizationTol * std::max(1.0, std::abs(mu)))
        throw NonconvergentRegularization(
            "global invariant: window-halving check moved the value by " +
            std::to_string(std::abs(mu - mu_half)));
    return mu;
}

HitchinInvariants invariants(const CircleField& f, double tol_zero) {
    HitchinInvariants inv;
    inv.tol_zero = tol_zero;
    std::vector<ZeroDatum> zeros = find_zeros(f, tol_zero);
    inv.k = static_cast<int>(zeros.size());
    if (inv.k == 0) {
        inv.sigma = f.eval(0.0) > 0.0 ? 1 : -1;
    } else {
        inv.sigma = 1;  // counterclockwise reading convention
        for (const auto& z : zeros) {
            inv.zero_data.push_back({z.order, residue(f, z)});
            inv.thetas.push_back(z.theta);
        }
    }
    inv.mu = global_invariant(f, zeros);
    return inv;
}

namespace {

struct DihedralImage {
    int sigma;
    std::vector<ZeroInvariant> seq;
};

std::vector<DihedralImage> dihedral_orbit(const HitchinInvariants& inv) {
    const int k = inv.k;
    std::vector<DihedralImage> orbit;
    orbit.reserve(static_cast<std::size_t>(2 * k));
    for (int r = 0; r < k; ++r) {
        DihedralImage rot{inv.sigma, {}};
        DihedralImage ref{-inv.sigma, {}};
        rot.seq.reserve(static_cast<std::size_t>(k));
        ref.seq.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            rot.seq.push_back(inv.zero_data[static_cast<std::size_t>((r + i) % k)]);
            ref.seq.push_back(inv.zero_data[static_cast<std::size_t>((r - i + 2 * k) % k)]);
        }
        orbit.push_back(std::move(rot));
        orbit.push_back(std::move(ref));
    }
    return orbit;
}

bool exact_less(const DihedralImage& a, const DihedralImage& b) {
    for (std::size_t i = 0; i < a.seq.size(); ++i) {
        if (a.seq[i].order != b.seq[i].order)
            return a.seq[i].order < b.seq[i].order;
        if (a.seq[i].residue != b.seq[i].residue)
            return a.seq[i].residue < b.seq[i].residue;
    }
    return a.sigma > b.sigma;  // +1 ahead of -1
}

// Tolerance-aware "strictly earlier": residues within relative tol compare
// as ties and defer to the next entry.
bool tol_less(const DihedralImage& a, const DihedralImage& b, double tol) {
    for (std::size_t i = 0; i < a.seq.size(); ++i) {
        if (a.seq[i].order != b.seq[i].order)
            return a.seq[i].order < b.seq[i].order;
        if (rel_dist(a.seq[i].residue, b.seq[i].residue) > tol)
            return a.seq[i].residue < b.seq[i].residue;
    }
    return a.sigma > b.sigma;
}

}  // namespace

CanonicalKey canonical_key(const HitchinInvariants& inv, double tol_match) {
    CanonicalKey key;
    key.k = inv.k;
    key.mu = inv.mu;
    if (inv.k == 0) {
        key.sigma = inv.sigma;
        return key;
    }
    std::vector<DihedralImage> orbit = dihedral_orbit(inv);
    std::sort(orbit.begin(), orbit.end(), exact_less);
    std::size_t best = 0;
    for (std::size_t i = 1; i < orbit.size(); ++i)
        if (tol_less(orbit[i], orbit[best], tol_match)) best = i;
    key.sigma = orbit[best].sigma;
    key.zero_data = orbit[best].seq;
    return key;
}

namespace {

// Max componentwise relative distance between (sigma1, seq1) and a dihedral
// image (sigma2, seq2); infinite on any sigma or order mismatch.
double image_distance(int sigma1, const std::vector<ZeroInvariant>& seq1,
                      int sigma2, const std::vector<ZeroInvariant>& seq2) {
    if (sigma1 != sigma2) return kInf;
    double d = 0.0;
    for (std::size_t i = 0; i < seq1.size(); ++i) {
        if (seq1[i].order != seq2[i].order) return kInf;
        d = std::max(d, rel_dist(seq1[i].residue, seq2[i].residue));
    }
    return d;
}

}  // namespace

bool equivalent_invariants(const HitchinInvariants& a,
                           const HitchinInvariants& b, double tol_match) {
    if (a.k != b.k) return false;
    const double d_mu = rel_dist(a.mu, b.mu);
    if (a.k == 0) {
        if (a.sigma != b.sigma) return false;
        if (d_mu <= tol_match) return true;
        if (d_mu < kAmbiguityFactor * tol_match)
            throw AmbiguousMatch("invariants: mu values straddle tolerance " +
                                 std::to_string(tol_match));
        return false;
    }
    const CanonicalKey ka = canonical_key(a, tol_match);
    const CanonicalKey kb = canonical_key(b, tol_match);
    const double d_key = image_distance(ka.sigma, ka.zero_data, kb.sigma,
                                        kb.zero_data);
    if (std::max(d_mu, d_key) <= tol_match) return true;
    // A near-tie can canonicalize two nearly equal tuples to different orbit
    // representatives; scan the whole orbit before declaring a mismatch.
    double best = kInf;
    for (const DihedralImage& img : dihedral_orbit(b))
        best = std::min(best, image_distance(ka.sigma, ka.zero_data,
                                             img.sigma, img.seq));
    const double d = std::max(d_mu, best);
    if (d < kAmbiguityFactor * tol_match)
        throw AmbiguousMatch(
            "invariants: dihedral-orbit distance " + std::to_string(d) +
            " too close to tolerance " + std::to_string(tol_match) +
            " to decide");
    return false;
}

IntervalInvariants interval_invariants(const IntervalField& X,
                                       double tol_zero) {
    IntervalInvariants out;
    out.tol_zero = tol_zero;
    const std::vector<IntervalZero> zeros = find_interval_zeros(X, tol_zero);
    const QuadCfg q = quad_cfg(X.exact());
    auto inv_x = [&X](double t) { return 1.0 / X.eval(t); };

    std::vector<LaurentData> lau;
    for (const auto& z : zeros) {
        const int depth = X.exact() ? kExactLaurentDepth : X.depth() - 2 * z.order;
        if (depth < -1)
            throw InsufficientDerivativeDepth(
                "interval invariants: sampled depth too small at an order-" +
                std::to_string(z.order) + " zero");
        LaurentData ld;
        ld.order = z.order;
        ld.coeffs = invert_taylor(X.taylor(z.t, 2 * z.order + depth + 1),
                                  z.order, depth);
        out.positions.push_back(z.t);
        out.zero_data.push_back({z.order, ld.c(-1)});
        lau.push_back(std::move(ld));
    }

    // Segments of the domain between consecutive zeros; a domain endpoint
    // that is not a zero bounds its segment with a plain integrable end.
    struct End {
        double t;
        const LaurentData* lau;  // nullptr: no singularity at this end
    };
    std::vector<End> ends;
    if (zeros.empty() || zeros.front().t > X.domain[0] + 1e-12)
        ends.push_back({X.domain[0], nullptr});
    for (std::size_t i = 0; i < zeros.size(); ++i)
        ends.push_back({zeros[i].t, &lau[i]});
    if (zeros.empty() || zeros.back().t < X.domain[1] - 1e-12)
        ends.push_back({X.domain[1], nullptr});

    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const End& l = ends[i];
        const End& r = ends[i + 1];
        const double len = r.t - l.t;
        auto one = [&](double scale) {
            double v = 0.0;
            double a = l.t, b = r.t;
            if (l.lau) {
                const double d = std::min(0.1, len / 2.0) * scale;
                v += gap_window(inv_x, l.t, *l.lau, d, len, +1, q);
                a = l.t + d;
            }
            if (r.lau) {
                const double d = std::min(0.1, len / 2.0) * scale;
                v += gap_window(inv_x, r.t, *r.lau, d, len, -1, q);
                b = r.t - d;
            }
            if (b > a)
                v += quadrature::integrate(inv_x, a, b, q.tol, q.tol,
                                           q.max_intervals).value;
            return v;
        };
        const double g1 = one(1.0);
        const double g2 = one(0.5);
        if (std::abs(g1 - g2) > kRegularizationTol * std::max(1.0, std::abs(g1)))
            throw NonconvergentRegularization(
                "gap integral: window-halving check moved the value by " +
                std::to_string(std::abs(g1 - g2)));
        out.gap_integrals.push_back(g1);
    }
    return out;
}

double interval_invariants_distance(const IntervalInvariants& a,
                                    const IntervalInvariants& b,
                                    bool flipped) {
    if (a.zero_data.size() != b.zero_data.size() ||
        a.gap_integrals.size() != b.gap_integrals.size())
        return kInf;
    const std::size_t nz = b.zero_data.size();
    const std::size_t ng = b.gap_integrals.size();
    double d = 0.0;
    for (std::size_t i = 0; i < nz; ++i) {
        const auto& zb = flipped ? b.zero_data[nz - 1 - i] : b.zero_data[i];
        if (a.zero_data[i].order != zb.order) return kInf;
        d = std::max(d, rel_dist(a.zero_data[i].residue, zb.residue));
    }
    for (std::size_t i = 0; i < ng; ++i) {
        // Pushing forward by t -> -t reverses the gap order and negates each
        // finite-part value (the substitution flips the sign of 1/X dt);
        // residues are untouched, as in the circle reflection computation.
        const double gb = flipped ? -b.gap_integrals[ng - 1 - i]
                                  : b.gap_integrals[i];
        d = std::max(d, rel_dist(a.gap_integrals[i], gb));
    }
    return d;
}

bool decide_match(double dist, double tol_match) {
    if (dist <= tol_match) return true;
    if (dist < kAmbiguityFactor * tol_match)
        throw AmbiguousMatch(
            "invariant distance " + std::to_string(dist) +
            " straddles tolerance " + std::to_string(tol_match));
    return false;
}

bool equivalent_interval(const IntervalField& a, const IntervalField& b,
                         double tol_match, bool allow_flip, double tol_zero) {
    const IntervalInvariants ia = interval_invariants(a, tol_zero);
    const IntervalInvariants ib = interval_invariants(b, tol_zero);
    double dist = interval_invariants_distance(ia, ib, false);
    if (allow_flip)
        dist = std::min(dist, interval_invariants_distance(ia, ib, true));
    return decide_match(dist, tol_match);
}

}  // namespace slnatlas
