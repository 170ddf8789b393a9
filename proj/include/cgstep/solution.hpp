#ifndef CGSTEP_SOLUTION_HPP
#define CGSTEP_SOLUTION_HPP

#include <vector>

#include "cgstep/linalg.hpp"
#include "cgstep/partition.hpp"

namespace cgstep {

// Globally continuous piecewise polynomial of degree r_n per interval:
// blocks[n] is the (r_n+1) x d array of values at the mapped Gauss-Lobatto
// nodes of interval n. Continuity is by construction: row 0 of block n is a
// bitwise copy of the last row of block n-1, and row 0 of block 0 carries the
// initial value.
struct CgSolution {
    TimePartition partition;
    std::vector<Matrix> blocks;

    int dim() const { return blocks.empty() ? 0 : blocks.front().cols(); }

    // Index of the interval containing t (points at a shared node resolve to
    // the right interval). Throws std::domain_error outside [0, T].
    int find_interval(double t) const;
};

}  // namespace cgstep

#endif
