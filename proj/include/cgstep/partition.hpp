#ifndef CGSTEP_PARTITION_HPP
#define CGSTEP_PARTITION_HPP

#include <vector>

namespace cgstep {

// Temporal mesh 0 = t_0 < t_1 < ... < t_N = T together with the local
// polynomial degree r_n >= 1 assigned to each subinterval (t_{n-1}, t_n).
// Nodes are stored explicitly (rather than widths) so that bisection of a
// dyadic mesh keeps every node exactly representable.
//
// Immutable by convention after construction; safe to share across
// concurrent solves.
struct TimePartition {
    std::vector<double> nodes;   // N+1 strictly increasing values, nodes[0] == 0
    std::vector<int> degrees;    // N entries, all >= 1

    int intervals() const { return static_cast<int>(degrees.size()); }
    double horizon() const { return nodes.back(); }
    double width(int n) const { return nodes[n + 1] - nodes[n]; }
    double max_width() const;
};

// Checks the structural invariants (ordering, matching lengths, r_n >= 1);
// throws std::invalid_argument on violation.
void validate(const TimePartition& p);

// N equal steps of width T/N, all of degree r.
TimePartition uniform(double horizon, int intervals, int degree);

// Splits every interval at its midpoint; degrees are duplicated.
TimePartition bisect(const TimePartition& p);

// Keeps the nodes and raises every degree by delta >= 1.
TimePartition raise_order(const TimePartition& p, int delta);

}  // namespace cgstep

#endif
