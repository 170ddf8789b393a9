#ifndef CGSTEP_HARNESS_HPP
#define CGSTEP_HARNESS_HPP

#include <string>
#include <vector>

#include "cgstep/analysis.hpp"
#include "cgstep/cg_core.hpp"
#include "cgstep/problem.hpp"

namespace cgstep {

enum class OutputFormat { Csv, Markdown };

OutputFormat parse_format(std::string_view name);  // "csv" | "md"

// Experiment description shared by the sweep drivers and the CLI.
struct ExperimentSpec {
    std::string problem_id = "ex1";
    std::vector<int> orders = {1, 2, 3, 4, 5};              // h sweep / comparison columns
    int max_order = 8;                                      // p sweep ceiling
    std::vector<int> element_counts = {2, 5, 10, 20, 50};   // p sweep meshes
    int elements = 16;                                      // single solve
    int max_elements = 8192;                                // h sweep refinement cap
    Scheme scheme = Scheme::SimplifiedNewton;
    double tol_abs = 1e-14;
    double tol_rel = 0.0;
    int quad_points = 0;                                    // 0 = automatic (r + 2)
    double error_floor = 5e-14;                             // stop refining below this error
    bool check_step_bound = false;

    IterationConfig iteration_config() const;
};

// One solve at (spec.elements, first order).
std::vector<ConvergenceRow> run_single(const OdeProblem& problem, const ExperimentSpec& spec);

// h-version: fixed degree, mesh bisection starting from a single element;
// a column stops once its error drops below the floor or the element cap is
// reached. Requires an exact solution.
std::vector<ConvergenceRow> run_h_sweep(const OdeProblem& problem, const ExperimentSpec& spec);

// p-version: degree escalation r = 1..max_order on each fixed mesh of
// spec.element_counts, stopping at the error floor. Meshes are independent
// cells and run concurrently when CG_STEPPER_THREADS allows.
std::vector<ConvergenceRow> run_p_sweep(const OdeProblem& problem, const ExperimentSpec& spec);

// The h sweep under the simplified Newton scheme and, on the identical grids,
// under Picard; rows come out paired (SimplifiedNewton, Picard) per cell.
// Requires a Jacobian.
std::vector<ConvergenceRow> run_scheme_comparison(const OdeProblem& problem,
                                                  const ExperimentSpec& spec);

// Convenience overloads resolving the problem from spec.problem_id.
std::vector<ConvergenceRow> run_h_sweep(const ExperimentSpec& spec);
std::vector<ConvergenceRow> run_p_sweep(const ExperimentSpec& spec);
std::vector<ConvergenceRow> run_scheme_comparison(const ExperimentSpec& spec);

// CSV with header elements,degree,dof,l2_error,linf_error,eoc,iterations,
// scheme,problem; full-precision values, LF line endings, deterministic.
std::string emit_csv(const std::vector<ConvergenceRow>& rows);

// Markdown table pivoted by element count with one (error, Ord.) column pair
// per degree (per degree and scheme for comparison data); errors rendered in
// %.2e form and absent cells as "--".
std::string emit_markdown(const std::vector<ConvergenceRow>& rows);

std::string emit(const std::vector<ConvergenceRow>& rows, OutputFormat format);

// Parallelism cap from CG_STEPPER_THREADS; 0 or unset means sequential.
int sweep_thread_cap();

}  // namespace cgstep

#endif
