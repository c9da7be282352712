#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slnatlas/interval_field.hpp"

namespace slnatlas {

// Reduced fraction in [0, 1): one coordinate of a marked point on the torus.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

// Reduce num/den modulo 1 into [0, 1). ParseError when den = 0.
Rational make_rational(std::int64_t num, std::int64_t den);

bool operator==(const Rational& a, const Rational& b);
bool operator<(const Rational& a, const Rational& b);

using MarkedPoint = std::vector<Rational>;

// A torus node with its finite set of rational marked points (the finite
// orbits the gluing surgery operates at).
struct MarkedTorus {
    std::string id;
    int n = 3;
    std::vector<MarkedPoint> marked_points;
};

struct Site {
    int node = 0;   // index into GluingGraph::nodes
    int point = 0;  // index into that node's marked_points
};

// One surgery: a G-disk or blow-up at a single site, or a G-tube or
// two-sided blow-up joining an ordered pair of sites. The interval field is
// the disk/tube field resp. the blow-up germ (whose derivative at 0 is the
// weight).
struct Attachment {
    enum class Kind { Disk, Tube, BlowUp, TwoSidedBlowUp };
    Kind kind = Kind::Disk;
    IntervalField field;
    std::vector<Site> sites;  // 1 entry (Disk/BlowUp) or 2 (Tube/TwoSidedBlowUp)
};

struct GluingGraph {
    int n = 3;
    std::vector<MarkedTorus> nodes;
    std::vector<Attachment> attachments;
};

// Every structural and field-level constraint, reported as human-readable
// diagnostics naming the offending node or attachment; empty means valid.
// Never throws.
std::vector<std::string> validate_graph(const GluingGraph& g);

// Least N such that the principal congruence subgroup of level N fixes every
// marked point mod Z^n: the lcm of all coordinate denominators.
std::int64_t level(const GluingGraph& g);

// True iff the graph has no Disk or Tube attachments and every blow-up germ
// has derivative n at 0 within tol_zero.
bool is_volume_preserving(const GluingGraph& g, double tol_zero = 1e-9);

struct TopologyComponent {
    std::vector<int> nodes;  // node indices, ascending
    int edges = 0;           // Tube/TwoSidedBlowUp attachments inside
    std::string label;
};

// Connected components under Tube/TwoSidedBlowUp edges (Disk/BlowUp modify a
// torus in place and do not connect). A tree of t tori is the connected sum
// of t tori ("torus" when t = 1); components with cycles are labeled with
// their cycle rank.
struct TopologySummary {
    std::vector<TopologyComponent> components;
};

TopologySummary summarize_topology(const GluingGraph& g);

// Graph equivalence: a bijection of nodes and attachments preserving kinds,
// incidence, exact marked-point multisets, and per-attachment interval
// invariants; a Tube or TwoSidedBlowUp may match with its ends swapped when
// the field matches reflected. Exhaustive over node bijections with
// signature pruning (intended scale <= 8 nodes). AmbiguousMatch propagates
// only when no bijection matches cleanly.
bool equivalent_graphs(const GluingGraph& a, const GluingGraph& b,
                       double tol_match = 1e-6);

// One single-torus, single-disk graph per parameter r: the disk field
//   X_r(t) = t (1 - t^2) (1 + (1/r - 1) t^2)
// is odd, vanishes at +-1, has derivative 1 at 0, and endpoint residues
// -r/2, so distinct parameters give non-equivalent graphs. Interior zeros
// beyond 0 appear only for r < 0 (at t^2 = r/(r-1), outside [-1,1] for
// r > 0). InadmissibleParameter when some r is 0 or not finite.
std::vector<GluingGraph> gen_disk_family(const std::vector<double>& residues);

}  // namespace slnatlas
