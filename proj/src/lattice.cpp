#include "slnatlas/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "slnatlas/errors.hpp"
#include "slnatlas/invariants.hpp"

namespace slnatlas {

namespace {

constexpr double kTolZero = 1e-9;

std::string site_str(const Site& s) {
    std::ostringstream os;
    os << "(" << s.node << "," << s.point << ")";
    return os.str();
}

const char* kind_name(Attachment::Kind k) {
    switch (k) {
        case Attachment::Kind::Disk: return "disk";
        case Attachment::Kind::Tube: return "tube";
        case Attachment::Kind::BlowUp: return "blow-up";
        case Attachment::Kind::TwoSidedBlowUp: return "two-sided blow-up";
    }
    return "?";
}

bool is_pair_kind(Attachment::Kind k) {
    return k == Attachment::Kind::Tube || k == Attachment::Kind::TwoSidedBlowUp;
}

bool reduced_in_unit(const Rational& q) {
    return q.den >= 1 && q.num >= 0 && q.num < q.den &&
           std::gcd(q.num, q.den) == 1;
}

// Fraction order; assumes both reduced with positive denominator.
bool rat_less(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
}

bool point_less(const MarkedPoint& a, const MarkedPoint& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        rat_less);
}

bool point_eq(const MarkedPoint& a, const MarkedPoint& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool domain_is_unit(const IntervalField& X) {
    return std::abs(X.domain[0] + 1.0) < 1e-12 &&
           std::abs(X.domain[1] - 1.0) < 1e-12;
}

// Odd symmetry probe: X(-t) = -X(t) on a fixed grid, relative to scale.
bool field_is_odd(const IntervalField& X, double scale) {
    for (int i = 1; i <= 16; ++i) {
        const double t = static_cast<double>(i) / 16.0;
        if (std::abs(X.eval(-t) + X.eval(t)) > 1e-8 * scale) return false;
    }
    return true;
}

void check_attachment_field(const Attachment& att, int index,
                            std::vector<std::string>& out) {
    std::ostringstream os;
    os << "attachment " << index << " (" << kind_name(att.kind) << "): ";
    const std::string head = os.str();
    const IntervalField& X = att.field;
    const double scale = std::max(1.0, sup_norm(X));

    if (att.kind == Attachment::Kind::Disk ||
        att.kind == Attachment::Kind::Tube) {
        if (!domain_is_unit(X)) {
            out.push_back(head + "field domain must be [-1,1]");
            return;
        }
        if (std::abs(X.eval(-1.0)) > kTolZero * scale ||
            std::abs(X.eval(1.0)) > kTolZero * scale)
            out.push_back(head + "field must vanish at both endpoints");
        if (att.kind == Attachment::Kind::Disk) {
            if (std::abs(X.eval(0.0, 1) - 1.0) > 1e-7)
                out.push_back(head + "disk field must have derivative 1 at 0");
            if (!field_is_odd(X, scale))
                out.push_back(head + "disk field must be odd");
        }
        return;
    }

    // Blow-up germs: the only zero sits at 0 and its derivative is the weight.
    try {
        const auto zeros = find_interval_zeros(X, kTolZero);
        if (zeros.size() != 1 || std::abs(zeros[0].t) > kTolZero)
            out.push_back(head + "germ must vanish only at 0");
    } catch (const Error& e) {
        out.push_back(head + "germ zero analysis failed: " + e.what());
        return;
    }
    if (std::abs(X.eval(0.0, 1)) <= kTolZero)
        out.push_back(head + "germ must have nonzero derivative at 0");
}

struct NodeSignature {
    std::vector<MarkedPoint> points;  // sorted
    std::array<int, 4> site_use{};    // site count per attachment kind

    bool operator==(const NodeSignature& o) const {
        if (site_use != o.site_use || points.size() != o.points.size())
            return false;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (!point_eq(points[i], o.points[i])) return false;
        return true;
    }
};

std::vector<NodeSignature> node_signatures(const GluingGraph& g) {
    std::vector<NodeSignature> sig(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        sig[i].points = g.nodes[i].marked_points;
        std::sort(sig[i].points.begin(), sig[i].points.end(), point_less);
    }
    for (const Attachment& att : g.attachments)
        for (const Site& s : att.sites)
            sig[s.node].site_use[static_cast<int>(att.kind)] += 1;
    return sig;
}

// (node, point) -> attachment index, exploiting single-use of sites.
std::vector<std::vector<int>> site_owner(const GluingGraph& g) {
    std::vector<std::vector<int>> owner(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        owner[i].assign(g.nodes[i].marked_points.size(), -1);
    for (std::size_t a = 0; a < g.attachments.size(); ++a)
        for (const Site& s : g.attachments[a].sites)
            owner[s.node][s.point] = static_cast<int>(a);
    return owner;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ParseError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    num %= den;
    if (num < 0) num += den;
    const std::int64_t d = std::gcd(num, den);
    return Rational{num / d, den / d};
}

bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
}

bool operator<(const Rational& a, const Rational& b) { return rat_less(a, b); }

std::vector<std::string> validate_graph(const GluingGraph& g) {
    std::vector<std::string> out;
    if (g.n < 3) out.push_back("graph dimension must be at least 3");

    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const MarkedTorus& node = g.nodes[i];
        std::ostringstream os;
        os << "node " << i << " (" << node.id << "): ";
        const std::string head = os.str();
        if (node.n != g.n)
            out.push_back(head + "dimension differs from graph dimension");
        for (std::size_t p = 0; p < node.marked_points.size(); ++p) {
            const MarkedPoint& pt = node.marked_points[p];
            if (static_cast<int>(pt.size()) != g.n)
                out.push_back(head + "marked point " + std::to_string(p) +
                              " has wrong coordinate count");
            for (const Rational& q : pt)
                if (!reduced_in_unit(q)) {
                    out.push_back(head + "marked point " + std::to_string(p) +
                                  " has a coordinate not reduced into [0,1)");
                    break;
                }
            for (std::size_t r = p + 1; r < node.marked_points.size(); ++r)
                if (point_eq(pt, node.marked_points[r]))
                    out.push_back(head + "marked points " + std::to_string(p) +
                                  " and " + std::to_string(r) + " coincide");
        }
    }

    std::vector<std::vector<bool>> used(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        used[i].assign(g.nodes[i].marked_points.size(), false);

    for (std::size_t a = 0; a < g.attachments.size(); ++a) {
        const Attachment& att = g.attachments[a];
        std::ostringstream os;
        os << "attachment " << a << " (" << kind_name(att.kind) << "): ";
        const std::string head = os.str();

        const std::size_t want = is_pair_kind(att.kind) ? 2 : 1;
        if (att.sites.size() != want) {
            out.push_back(head + "expected " + std::to_string(want) +
                          " site(s), got " + std::to_string(att.sites.size()));
            continue;
        }
        bool sites_ok = true;
        for (const Site& s : att.sites) {
            if (s.node < 0 || s.node >= static_cast<int>(g.nodes.size())) {
                out.push_back(head + "site " + site_str(s) +
                              " references a missing node");
                sites_ok = false;
            } else if (s.point < 0 ||
                       s.point >= static_cast<int>(
                                      g.nodes[s.node].marked_points.size())) {
                out.push_back(head + "site " + site_str(s) +
                              " references a missing marked point");
                sites_ok = false;
            }
        }
        if (!sites_ok) continue;

        if (is_pair_kind(att.kind) && att.sites[0].node == att.sites[1].node &&
            att.sites[0].point == att.sites[1].point)
            out.push_back(head +
                          "tube endpoints must be distinct marked points");

        for (const Site& s : att.sites) {
            if (used[s.node][s.point])
                out.push_back(head + "site " + site_str(s) +
                              " is already used by another attachment");
            used[s.node][s.point] = true;
        }

        check_attachment_field(att, static_cast<int>(a), out);
    }
    return out;
}

std::int64_t level(const GluingGraph& g) {
    std::int64_t N = 1;
    for (const MarkedTorus& node : g.nodes)
        for (const MarkedPoint& pt : node.marked_points)
            for (const Rational& q : pt) N = std::lcm(N, q.den);
    return N;
}

bool is_volume_preserving(const GluingGraph& g, double tol_zero) {
    for (const Attachment& att : g.attachments) {
        if (att.kind == Attachment::Kind::Disk ||
            att.kind == Attachment::Kind::Tube)
            return false;
        if (std::abs(att.field.eval(0.0, 1) - static_cast<double>(g.n)) >=
            tol_zero)
            return false;
    }
    return true;
}

TopologySummary summarize_topology(const GluingGraph& g) {
    const int N = static_cast<int>(g.nodes.size());
    UnionFind uf(N);
    for (const Attachment& att : g.attachments)
        if (is_pair_kind(att.kind))
            uf.unite(att.sites[0].node, att.sites[1].node);

    std::vector<std::vector<int>> members(N);
    for (int i = 0; i < N; ++i) members[uf.find(i)].push_back(i);
    std::vector<int> edge_count(N, 0);
    for (const Attachment& att : g.attachments)
        if (is_pair_kind(att.kind)) edge_count[uf.find(att.sites[0].node)] += 1;

    TopologySummary summary;
    for (int root = 0; root < N; ++root) {
        if (members[root].empty()) continue;
        TopologyComponent comp;
        comp.nodes = members[root];
        comp.edges = edge_count[root];
        const int t = static_cast<int>(comp.nodes.size());
        if (comp.edges == t - 1) {
            comp.label = (t == 1) ? "torus"
                                  : "connected sum of " + std::to_string(t) +
                                        " tori";
        } else {
            const int rank = comp.edges - t + 1;
            comp.label =
                "connected sum with handles (cycle rank " +
                std::to_string(rank) + ")";
        }
        summary.components.push_back(std::move(comp));
    }
    std::sort(summary.components.begin(), summary.components.end(),
              [](const TopologyComponent& a, const TopologyComponent& b) {
                  return a.nodes.front() < b.nodes.front();
              });
    return summary;
}

namespace {

// State for the bijection search. Field invariants are computed once per
// attachment; each candidate node map then only does forced lookups.
struct MatchContext {
    const GluingGraph& a;
    const GluingGraph& b;
    double tol;
    std::vector<NodeSignature> sig_a, sig_b;
    std::vector<std::vector<int>> owner_b;  // (node, point) -> b attachment
    std::vector<IntervalInvariants> inv_a, inv_b;
    bool ambiguous = false;  // some bijection ended in the buffer zone
};

// Index of the marked point of b-node `bn` equal to `pt`, or -1. Marked
// points are pairwise distinct, so the match is unique.
int matching_point(const GluingGraph& b, int bn, const MarkedPoint& pt) {
    const auto& pts = b.nodes[bn].marked_points;
    for (std::size_t q = 0; q < pts.size(); ++q)
        if (point_eq(pts[q], pt)) return static_cast<int>(q);
    return -1;
}

// Check the attachment correspondence forced by the node map. Throws
// AmbiguousMatch when a field comparison lands in the buffer zone.
bool attachments_match(const MatchContext& ctx, const std::vector<int>& pi) {
    std::vector<bool> hit(ctx.b.attachments.size(), false);
    for (std::size_t ai = 0; ai < ctx.a.attachments.size(); ++ai) {
        const Attachment& att = ctx.a.attachments[ai];
        std::vector<Site> mapped;
        for (const Site& s : att.sites) {
            const int bn = pi[s.node];
            const int bp = matching_point(
                ctx.b, bn, ctx.a.nodes[s.node].marked_points[s.point]);
            if (bp < 0) return false;
            mapped.push_back(Site{bn, bp});
        }
        const int bi = ctx.owner_b[mapped[0].node][mapped[0].point];
        if (bi < 0 || hit[bi]) return false;
        const Attachment& batt = ctx.b.attachments[bi];
        if (batt.kind != att.kind || batt.sites.size() != mapped.size())
            return false;

        bool flipped = false;
        if (is_pair_kind(att.kind)) {
            const Site& b0 = batt.sites[0];
            const Site& b1 = batt.sites[1];
            if (b0.node == mapped[0].node && b0.point == mapped[0].point &&
                b1.node == mapped[1].node && b1.point == mapped[1].point) {
                flipped = false;
            } else if (b1.node == mapped[0].node &&
                       b1.point == mapped[0].point &&
                       b0.node == mapped[1].node &&
                       b0.point == mapped[1].point) {
                flipped = true;
            } else {
                return false;
            }
        } else {
            const Site& b0 = batt.sites[0];
            if (b0.node != mapped[0].node || b0.point != mapped[0].point)
                return false;
        }

        const double dist = interval_invariants_distance(
            ctx.inv_a[ai], ctx.inv_b[static_cast<std::size_t>(bi)], flipped);
        if (!decide_match(dist, ctx.tol)) return false;
        hit[bi] = true;
    }
    return true;
}

bool search(MatchContext& ctx, std::vector<int>& pi, std::vector<bool>& taken,
            std::size_t next) {
    if (next == ctx.a.nodes.size()) {
        try {
            return attachments_match(ctx, pi);
        } catch (const AmbiguousMatch&) {
            ctx.ambiguous = true;
            return false;
        }
    }
    for (std::size_t j = 0; j < ctx.b.nodes.size(); ++j) {
        if (taken[j] || !(ctx.sig_a[next] == ctx.sig_b[j])) continue;
        taken[j] = true;
        pi[next] = static_cast<int>(j);
        if (search(ctx, pi, taken, next + 1)) return true;
        taken[j] = false;
    }
    return false;
}

}  // namespace

bool equivalent_graphs(const GluingGraph& a, const GluingGraph& b,
                       double tol_match) {
    if (a.n != b.n || a.nodes.size() != b.nodes.size() ||
        a.attachments.size() != b.attachments.size())
        return false;

    std::array<int, 4> kinds_a{}, kinds_b{};
    for (const Attachment& att : a.attachments)
        kinds_a[static_cast<int>(att.kind)] += 1;
    for (const Attachment& att : b.attachments)
        kinds_b[static_cast<int>(att.kind)] += 1;
    if (kinds_a != kinds_b) return false;

    MatchContext ctx{a, b, tol_match, node_signatures(a), node_signatures(b),
                     site_owner(b), {}, {}, false};
    ctx.inv_a.reserve(a.attachments.size());
    for (const Attachment& att : a.attachments)
        ctx.inv_a.push_back(interval_invariants(att.field));
    ctx.inv_b.reserve(b.attachments.size());
    for (const Attachment& att : b.attachments)
        ctx.inv_b.push_back(interval_invariants(att.field));

    std::vector<int> pi(a.nodes.size(), -1);
    std::vector<bool> taken(b.nodes.size(), false);
    if (search(ctx, pi, taken, 0)) return true;
    if (ctx.ambiguous)
        throw AmbiguousMatch(
            "graph comparison: no clean match, and at least one node "
            "bijection fell inside the tolerance buffer");
    return false;
}

std::vector<GluingGraph> gen_disk_family(const std::vector<double>& residues) {
    std::vector<GluingGraph> out;
    out.reserve(residues.size());
    for (const double r : residues) {
        if (!std::isfinite(r) || r == 0.0)
            throw InadmissibleParameter(
                "disk family residue parameter must be finite and nonzero");
        const double a = 1.0 / r - 1.0;
        GluingGraph g;
        g.n = 3;
        MarkedTorus node;
        node.id = "T0";
        node.n = 3;
        node.marked_points = {
            {make_rational(0, 1), make_rational(0, 1), make_rational(0, 1)}};
        g.nodes.push_back(std::move(node));
        Attachment att;
        att.kind = Attachment::Kind::Disk;
        att.field = make_poly_field({0.0, 1.0, 0.0, a - 1.0, 0.0, -a});
        att.sites = {Site{0, 0}};
        g.attachments.push_back(std::move(att));
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace slnatlas
