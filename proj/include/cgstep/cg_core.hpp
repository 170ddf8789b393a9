#ifndef CGSTEP_CG_CORE_HPP
#define CGSTEP_CG_CORE_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cgstep/linalg.hpp"
#include "cgstep/partition.hpp"
#include "cgstep/polyspace.hpp"
#include "cgstep/problem.hpp"
#include "cgstep/solution.hpp"

namespace cgstep {

// Iteration scheme for the local nonlinear systems. All three solve
//   -<G_A delta, phi> = <G(U_j), phi>,  U_{j+1} = U_j + delta,
// and differ only in the linearization map A:
//   Picard           A == 0                (Banach fixed-point iteration)
//   SimplifiedNewton A = F_u frozen at the interval's initial iterate;
//                    the operator is assembled and factored once per interval
//   FullNewton       A = F_u at the current iterate; refactored every step
enum class Scheme { Picard, SimplifiedNewton, FullNewton };

std::string_view scheme_name(Scheme s);            // "picard" | "snewton" | "newton"
Scheme parse_scheme(std::string_view name);        // throws std::invalid_argument

struct IterationConfig {
    Scheme scheme = Scheme::SimplifiedNewton;
    double tol_abs = 1e-14;
    double tol_rel = 0.0;
    int max_iter = 100;
    int quad_points = 0;             // 0 = automatic (r + 2)
    bool enforce_step_bound = false; // warn when a step violates the admissible bound
};

// Per-interval iteration record. `interval` is the 1-based interval number.
struct StepReport {
    int interval = 0;
    int iterations = 0;
    double final_update_norm = 0.0;      // nodal max norm of the last update
    bool converged = false;
    std::vector<double> update_ratios;   // L2 ratios |delta_{j+1}| / |delta_j|, j >= 1
    std::vector<double> update_norms;    // nodal max norm per iteration (diagnostics)
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& msg, int interval) : std::runtime_error(msg), interval_(interval) {}
    int interval() const { return interval_; }

private:
    int interval_ = 0;
};

// Sharp Poincare constant for H^1 functions vanishing at one endpoint of the
// interval: |x|_{L2} <= k * (2/pi) * |x'|_{L2}. Used as the default in the
// admissibility estimates below; overridable per call.
inline constexpr double kSharpPoincare = 0.6366197723675814;  // 2/pi

// Largest admissible step 1 / ((2*C_A + L) * C_P) below which the local
// fixed-point map is a contraction (+infinity when 2*C_A + L == 0).
// Picard callers pass deriv_bound = 0, which gives 1 / (L * C_P).
double step_bound(double lipschitz, double deriv_bound, double poincare = kSharpPoincare);

// Lipschitz constant (C_A + L) / (1/(k*C_P) - C_A) of the local fixed-point
// map for step size k. Requires k < 1/(C_A*C_P), the invertibility condition
// of the frozen operator; the result is < 1 exactly when k < step_bound.
double contraction_bound(double lipschitz, double deriv_bound, double poincare, double step);

// Residual vector of the local cG equation for one interval: entry i*d + s is
//   int_{I_n} (du/dt - F(t, u))_s P_i dt
// for test polynomials P_0..P_{r-1}, evaluated with the basis quadrature
// mapped to (t_left, t_left + width). Non-finite F values raise a SolverError
// naming the interval and the offending time.
std::vector<double> assemble_residual(const ReferenceBasis& basis, double t_left, double width,
                                      const Matrix& block, const OdeProblem& problem,
                                      int interval = 1);

// Matrix of the linearized operator on the zero-initial-value trial space
// (the r nodal functions vanishing at the left endpoint):
//   M[i*d+s, (m-1)*d+s'] = int_{I_n} (dpsi_m/dt * delta_ss' - A_ss' psi_m) P_i dt.
// An empty a_eval means A == 0 and assembles the pure derivative coupling.
Matrix assemble_linearized(const ReferenceBasis& basis, double t_left, double width,
                           const JacobianFn& a_eval, const Matrix& block);

// Solves one interval: starts from the constant extension of u_left, iterates
// the configured scheme until the nodal max norm of the update drops below
// tol_abs + tol_rel * |U_j|, and returns the (r+1) x d coefficient block with
// its first row pinned to u_left. converged == false means max_iter ran out
// (the sweep driver turns that into an abort).
std::pair<Matrix, StepReport> solve_interval(const ReferenceBasis& basis, double t_left,
                                             double width, std::span<const double> u_left,
                                             const OdeProblem& problem,
                                             const IterationConfig& config, int interval = 1);

struct SolveResult {
    CgSolution solution;
    std::vector<StepReport> reports;
    std::vector<std::string> warnings;

    long total_iterations() const;
};

// Sequential left-to-right sweep over the partition; interval n starts from
// interval n-1's right nodal value, so continuity holds exactly. Aborts with
// a SolverError on the first non-converged interval. Step-bound violations
// are warnings, not errors: the admissibility condition is sufficient only.
SolveResult solve(const OdeProblem& problem, const TimePartition& partition,
                  const IterationConfig& config = {});

}  // namespace cgstep

#endif
