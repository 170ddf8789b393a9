#include "cgstep/cg_core.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace cgstep {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void check_config(const IterationConfig& config) {
    if (config.tol_abs < 0.0 || config.tol_rel < 0.0)
        throw std::invalid_argument("tolerances must be non-negative");
    if (config.tol_abs == 0.0 && config.tol_rel == 0.0)
        throw std::invalid_argument("at least one of tol_abs, tol_rel must be positive");
    if (config.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (config.quad_points < 0) throw std::invalid_argument("quad_points must be non-negative");
}

// Values of the current iterate at one quadrature column.
void iterate_at_quad(const ReferenceBasis& basis, const Matrix& block, int a,
                     std::span<double> u, std::span<double> du) {
    const int r = basis.order;
    const int d = block.cols();
    for (int s = 0; s < d; ++s) {
        u[s] = 0.0;
        du[s] = 0.0;
    }
    for (int m = 0; m <= r; ++m) {
        const double tv = basis.trial_values_at_quad(m, a);
        const double td = basis.trial_derivs_at_quad(m, a);
        for (int s = 0; s < d; ++s) {
            u[s] += tv * block(m, s);
            du[s] += td * block(m, s);
        }
    }
}

}  // namespace

std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Picard: return "picard";
        case Scheme::SimplifiedNewton: return "snewton";
        case Scheme::FullNewton: return "newton";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "picard") return Scheme::Picard;
    if (name == "snewton") return Scheme::SimplifiedNewton;
    if (name == "newton") return Scheme::FullNewton;
    throw std::invalid_argument("unknown scheme '" + std::string(name) +
                                "' (expected picard, snewton or newton)");
}

double step_bound(double lipschitz, double deriv_bound, double poincare) {
    if (lipschitz < 0.0 || deriv_bound < 0.0)
        throw std::invalid_argument("stability constants must be non-negative");
    if (poincare <= 0.0) throw std::invalid_argument("Poincare constant must be positive");
    const double denom = (2.0 * deriv_bound + lipschitz) * poincare;
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / denom;
}

double contraction_bound(double lipschitz, double deriv_bound, double poincare, double step) {
    if (lipschitz < 0.0 || deriv_bound < 0.0)
        throw std::invalid_argument("stability constants must be non-negative");
    if (poincare <= 0.0) throw std::invalid_argument("Poincare constant must be positive");
    if (step <= 0.0) throw std::invalid_argument("step size must be positive");
    const double inv = 1.0 / (step * poincare);
    if (!(inv > deriv_bound))
        throw std::domain_error(
            "contraction factor undefined: step " + format_double(step) +
            " violates the operator invertibility condition k < 1/(C_A*C_P) = " +
            format_double(1.0 / (deriv_bound * poincare)));
    return (deriv_bound + lipschitz) / (inv - deriv_bound);
}

std::vector<double> assemble_residual(const ReferenceBasis& basis, double t_left, double width,
                                      const Matrix& block, const OdeProblem& problem,
                                      int interval) {
    const int r = basis.order;
    const int d = problem.dim;
    const int q = basis.quad_size();
    std::vector<double> residual(static_cast<size_t>(r) * d, 0.0);
    std::vector<double> u(d), du(d), f(d);

    for (int a = 0; a < q; ++a) {
        const double t = t_left + width * 0.5 * (basis.quad.points[a] + 1.0);
        iterate_at_quad(basis, block, a, u, du);
        problem.rhs(t, u, f);
        for (int s = 0; s < d; ++s) {
            if (!std::isfinite(f[s]))
                throw SolverError("non-finite right side on interval " +
                                      std::to_string(interval) + " at t = " + format_double(t) +
                                      " (component " + std::to_string(s) + ")",
                                  interval);
        }
        const double w = basis.quad.weights[a];
        // int u' P_i dt is width-free after mapping; the F term carries k/2.
        for (int i = 0; i < r; ++i) {
            const double wi = w * basis.test_values_at_quad(i, a);
            for (int s = 0; s < d; ++s)
                residual[static_cast<size_t>(i) * d + s] += wi * (du[s] - 0.5 * width * f[s]);
        }
    }
    return residual;
}

Matrix assemble_linearized(const ReferenceBasis& basis, double t_left, double width,
                           const JacobianFn& a_eval, const Matrix& block) {
    const int r = basis.order;
    const int d = block.cols();
    const int q = basis.quad_size();
    Matrix m(r * d, r * d);
    std::vector<double> u(d), du(d);
    Matrix a(d, d);

    for (int qa = 0; qa < q; ++qa) {
        const double w = basis.quad.weights[qa];
        if (a_eval) {
            const double t = t_left + width * 0.5 * (basis.quad.points[qa] + 1.0);
            iterate_at_quad(basis, block, qa, u, du);
            a_eval(t, u, a);
        }
        for (int i = 0; i < r; ++i) {
            const double pi = basis.test_values_at_quad(i, qa);
            for (int mm = 1; mm <= r; ++mm) {
                const double stiff = w * basis.trial_derivs_at_quad(mm, qa) * pi;
                for (int s = 0; s < d; ++s) m(i * d + s, (mm - 1) * d + s) += stiff;
                if (a_eval) {
                    const double mass = 0.5 * width * w * basis.trial_values_at_quad(mm, qa) * pi;
                    for (int s = 0; s < d; ++s)
                        for (int sp = 0; sp < d; ++sp)
                            m(i * d + s, (mm - 1) * d + sp) -= mass * a(s, sp);
                }
            }
        }
    }
    return m;
}

std::pair<Matrix, StepReport> solve_interval(const ReferenceBasis& basis, double t_left,
                                             double width, std::span<const double> u_left,
                                             const OdeProblem& problem,
                                             const IterationConfig& config, int interval) {
    check_config(config);
    const int r = basis.order;
    const int d = problem.dim;
    for (double v : u_left)
        if (!std::isfinite(v))
            throw SolverError("non-finite initial value on interval " + std::to_string(interval),
                              interval);
    if (static_cast<int>(u_left.size()) != d)
        throw std::invalid_argument("initial value dimension mismatch");
    if ((config.scheme == Scheme::SimplifiedNewton || config.scheme == Scheme::FullNewton) &&
        !problem.has_jacobian())
        throw std::invalid_argument("scheme '" + std::string(scheme_name(config.scheme)) +
                                    "' requires a Jacobian for problem '" + problem.name + "'");

    // Initial iterate: constant extension of the left value. Row 0 stays
    // untouched below, which pins the block to u_left bitwise.
    Matrix block(r + 1, d);
    for (int m = 0; m <= r; ++m)
        for (int s = 0; s < d; ++s) block(m, s) = u_left[s];

    const std::vector<double> frozen(u_left.begin(), u_left.end());
    JacobianFn a_eval;  // empty for Picard
    if (config.scheme == Scheme::SimplifiedNewton) {
        a_eval = [&problem, &frozen](double t, std::span<const double>, Matrix& out) {
            problem.jacobian(t, frozen, out);
        };
    } else if (config.scheme == Scheme::FullNewton) {
        a_eval = problem.jacobian;
    }

    auto factor = [&](const Matrix& at_block) {
        try {
            return LuFactorization(assemble_linearized(basis, t_left, width, a_eval, at_block));
        } catch (const SingularMatrixError& e) {
            throw SolverError("singular linearized operator on interval " +
                                  std::to_string(interval) + " (k = " + format_double(width) +
                                  "): " + e.what(),
                              interval);
        }
    };

    // Picard and simplified Newton factor once; full Newton refactors below.
    LuFactorization lu = factor(block);

    StepReport report;
    report.interval = interval;

    double prev_l2 = -1.0;
    for (int j = 0; j < config.max_iter; ++j) {
        if (config.scheme == Scheme::FullNewton && j > 0) lu = factor(block);

        std::vector<double> rhs =
            assemble_residual(basis, t_left, width, block, problem, interval);
        for (double& v : rhs) v = -v;
        lu.solve_in_place(rhs);  // rhs now holds the update

        double update_inf = 0.0;
        for (int m = 1; m <= r; ++m)
            for (int s = 0; s < d; ++s) {
                const double dv = rhs[static_cast<size_t>(m - 1) * d + s];
                block(m, s) += dv;
                update_inf = std::max(update_inf, std::abs(dv));
            }

        // L2(I_n) norm of the update polynomial, for the contraction record.
        double l2sq = 0.0;
        for (int a = 0; a < basis.quad_size(); ++a) {
            for (int s = 0; s < d; ++s) {
                double v = 0.0;
                for (int m = 1; m <= r; ++m)
                    v += rhs[static_cast<size_t>(m - 1) * d + s] *
                         basis.trial_values_at_quad(m, a);
                l2sq += 0.5 * width * basis.quad.weights[a] * v * v;
            }
        }
        const double l2 = std::sqrt(l2sq);
        if (j >= 1 && prev_l2 > 0.0) report.update_ratios.push_back(l2 / prev_l2);
        prev_l2 = l2;

        report.iterations = j + 1;
        report.final_update_norm = update_inf;
        report.update_norms.push_back(update_inf);

        double iterate_inf = 0.0;
        for (int m = 0; m <= r; ++m)
            for (int s = 0; s < d; ++s) iterate_inf = std::max(iterate_inf, std::abs(block(m, s)));
        if (!std::isfinite(update_inf))
            throw SolverError("iteration diverged to non-finite values on interval " +
                                  std::to_string(interval),
                              interval);
        if (update_inf <= config.tol_abs + config.tol_rel * iterate_inf) {
            report.converged = true;
            break;
        }
    }
    return {std::move(block), std::move(report)};
}

long SolveResult::total_iterations() const {
    long total = 0;
    for (const StepReport& r : reports) total += r.iterations;
    return total;
}

SolveResult solve(const OdeProblem& problem, const TimePartition& partition,
                  const IterationConfig& config) {
    check_config(config);
    validate(partition);
    if (static_cast<int>(problem.initial_value.size()) != problem.dim)
        throw std::invalid_argument("initial value dimension mismatch for '" + problem.name + "'");
    if (std::abs(partition.horizon() - problem.horizon) >
        1e-12 * std::max(1.0, problem.horizon))
        throw std::invalid_argument("partition horizon " + format_double(partition.horizon()) +
                                    " does not match problem horizon " +
                                    format_double(problem.horizon));

    SolveResult result;
    result.solution.partition = partition;
    const int n_intervals = partition.intervals();

    if (config.enforce_step_bound) {
        const bool picard = config.scheme == Scheme::Picard;
        const bool have = problem.lipschitz_constant &&
                          (picard || problem.derivative_bound);
        if (!have) {
            result.warnings.push_back("admissibility check skipped for '" + problem.name +
                                      "': Lipschitz/derivative bounds unavailable");
        } else {
            const double bound = step_bound(*problem.lipschitz_constant,
                                            picard ? 0.0 : *problem.derivative_bound);
            for (int n = 0; n < n_intervals; ++n) {
                if (partition.width(n) > bound)
                    result.warnings.push_back(
                        "interval " + std::to_string(n + 1) + ": step " +
                        format_double(partition.width(n)) + " exceeds the admissible bound " +
                        format_double(bound) + "; contraction is not guaranteed");
            }
        }
    }

    // One reference basis per distinct degree.
    std::unordered_map<int, ReferenceBasis> bases;
    for (int r : partition.degrees) {
        if (!bases.contains(r))
            bases.emplace(r, build_basis(r, config.quad_points > 0 ? config.quad_points : r + 2));
    }

    std::vector<double> u_left = problem.initial_value;
    result.solution.blocks.reserve(n_intervals);
    result.reports.reserve(n_intervals);
    for (int n = 0; n < n_intervals; ++n) {
        const ReferenceBasis& basis = bases.at(partition.degrees[n]);
        auto [block, report] = solve_interval(basis, partition.nodes[n], partition.width(n),
                                              u_left, problem, config, n + 1);
        if (!report.converged) {
            std::string history;
            const size_t first =
                report.update_norms.size() > 8 ? report.update_norms.size() - 8 : 0;
            for (size_t i = first; i < report.update_norms.size(); ++i)
                history += " " + format_double(report.update_norms[i]);
            throw SolverError("no convergence on interval " + std::to_string(n + 1) + " after " +
                                  std::to_string(report.iterations) +
                                  " iterations; trailing update norms:" + history,
                              n + 1);
        }
        u_left.assign(block.row(basis.order).begin(), block.row(basis.order).end());
        result.solution.blocks.push_back(std::move(block));
        result.reports.push_back(std::move(report));
    }
    return result;
}

}  // namespace cgstep
