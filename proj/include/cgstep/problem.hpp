#ifndef CGSTEP_PROBLEM_HPP
#define CGSTEP_PROBLEM_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgstep/linalg.hpp"

namespace cgstep {

using RhsFn = std::function<void(double t, std::span<const double> u, std::span<double> out)>;
using JacobianFn = std::function<void(double t, std::span<const double> u, Matrix& out)>;
using ExactFn = std::function<void(double t, std::span<double> out)>;

// Initial value problem u' = F(t, u), u(0) = u0 on [0, T]. The Jacobian,
// exact solution and stability constants are optional: benchmark problems
// without global Lipschitz/derivative bounds must still solve, with the
// admissibility checks skipped.
struct OdeProblem {
    std::string name;
    int dim = 1;
    RhsFn rhs;
    JacobianFn jacobian;  // empty if unavailable
    ExactFn exact;        // empty if unavailable
    std::vector<double> initial_value;
    double horizon = 1.0;
    std::optional<double> lipschitz_constant;  // L, Lipschitz bound of F in u
    std::optional<double> derivative_bound;    // C_A, uniform bound of the linearization map

    bool has_jacobian() const { return static_cast<bool>(jacobian); }
    bool has_exact() const { return static_cast<bool>(exact); }

    std::vector<double> rhs_at(double t, std::span<const double> u) const;
    std::vector<double> exact_at(double t) const;
};

// Benchmark problems on [0, 1]:
//   example1: u' = -sin(u),   u(0) = pi/2,       exact 2*atan(exp(-t)), L = C_A = 1
//   example2: u' = -2 t u^2,  u(0) = 1,          exact 1/(1+t^2), no global constants
//   example3: 2d system u1' = -u2/(1+u2^2), u2' = -tan(u1),
//             u(0) = (pi/4, 1), exact (atan(exp(-t)), exp(-t)), no global constants
OdeProblem example1();
OdeProblem example2();
OdeProblem example3();

// Lookup by CLI id "ex1" | "ex2" | "ex3"; throws std::invalid_argument.
OdeProblem make_problem(std::string_view id);

}  // namespace cgstep

#endif
