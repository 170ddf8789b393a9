#ifndef CGSTEP_POLYSPACE_HPP
#define CGSTEP_POLYSPACE_HPP

#include <span>
#include <vector>

#include "cgstep/linalg.hpp"
#include "cgstep/solution.hpp"

namespace cgstep {

// Quadrature rule on the reference interval [-1, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

// q-point Gauss-Legendre rule, exact for polynomials of degree <= 2q-1.
// Nodes by Newton iteration on the three-term recurrence (tolerance 1e-15),
// falling back to the Golub-Welsch eigenvalue route if Newton stalls.
QuadratureRule gauss_legendre(int q);

// Golub-Welsch route: eigen-decomposition of the symmetric Jacobi matrix.
// Exposed separately as the fallback path and as a cross-check.
QuadratureRule gauss_legendre_golub_welsch(int q);

// Legendre polynomial P_k and its derivative, by the three-term recurrence.
double legendre_eval(int degree, double x);
double legendre_deriv(int degree, double x);

// The degree+1 Gauss-Lobatto points on [-1, 1] (endpoints included);
// interior points are the roots of P'_degree.
std::vector<double> gauss_lobatto_nodes(int degree);

// Lagrange cardinal function j for the given node set, and its derivative,
// evaluated at x. Exact (0/1) when x coincides with a node.
double lagrange_value(std::span<const double> nodes, int j, double x);
double lagrange_deriv(std::span<const double> nodes, int j, double x);

// Precomputed reference-interval machinery for one trial degree r:
// a Lagrange trial basis on the r+1 Gauss-Lobatto points (so the value matrix
// at the trial nodes is the identity and both endpoints carry a nodal degree
// of freedom), and the Legendre test basis P_0..P_{r-1}.
struct ReferenceBasis {
    int order = 0;                    // trial degree r
    QuadratureRule quad;
    std::vector<double> trial_nodes;  // r+1 Gauss-Lobatto points
    Matrix trial_values_at_quad;      // (r+1) x q
    Matrix trial_derivs_at_quad;      // (r+1) x q
    Matrix test_values_at_quad;       // r x q

    int quad_size() const { return quad.size(); }
};

// Requires quad_points >= order+1; fewer points under-integrate the
// derivative/test coupling.
ReferenceBasis build_basis(int order, int quad_points);
ReferenceBasis build_basis(int order);  // quad_points = order + 2

// Evaluates a piecewise-polynomial solution at t in [0, T]. At an interior
// mesh node both neighbouring intervals give the identical value (the nodal
// coefficient is shared).
std::vector<double> eval_piecewise(const CgSolution& sol, double t);

}  // namespace cgstep

#endif
