#ifndef CGSTEP_ANALYSIS_HPP
#define CGSTEP_ANALYSIS_HPP

#include <optional>
#include <string>

#include "cgstep/problem.hpp"
#include "cgstep/solution.hpp"

namespace cgstep {

// One refinement step of a convergence study.
struct ConvergenceRow {
    int elements = 0;
    int degree = 0;
    long dof = 0;
    double l2_error = 0.0;
    double linf_error = 0.0;
    std::optional<double> eoc;   // empty on the first row of a sweep
    long total_iterations = 0;
    std::string scheme;
    std::string problem;
};

// Degrees of freedom of the scheme: d * sum_n r_n.
long dof(const TimePartition& partition, int dim);

// L2(0,T) error against the exact solution, by Gauss quadrature with
// r_n + quad_boost points per interval.
double l2_error(const CgSolution& sol, const ExactFn& exact, int quad_boost = 5);

// Max Euclidean-norm error over a dense uniform sample grid.
double linf_error(const CgSolution& sol, const ExactFn& exact, int samples_per_interval = 50);

// Empirical order of convergence log(e_prev/e_curr) / log(dof_curr/dof_prev).
// Returns nullopt for zero or non-finite errors (rendered "--" downstream);
// requires curr.dof > prev.dof.
std::optional<double> eoc(const ConvergenceRow& prev, const ConvergenceRow& curr);

}  // namespace cgstep

#endif
