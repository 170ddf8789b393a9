// cg-stepper: experiment CLI around the hp continuous Galerkin time stepper.
//
// Subcommands:
//   solve    one run at a fixed mesh and order
//   h-sweep  mesh bisection at fixed order(s)
//   p-sweep  order escalation on fixed meshes
//   compare  simplified Newton vs Picard iteration counts on the h protocol
//
// Exit codes: 0 success, 1 usage error, 2 solver non-convergence.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cgstep/harness.hpp"

namespace {

struct CliOptions {
    cgstep::ExperimentSpec spec;
    std::string scheme = "snewton";
    std::string format = "csv";
    std::string out_path;
    int order = 3;
};

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--problem", opts.spec.problem_id, "problem id")
        ->required()
        ->check(CLI::IsMember({"ex1", "ex2", "ex3"}));
    cmd->add_option("--scheme", opts.scheme, "iteration scheme")
        ->check(CLI::IsMember({"picard", "snewton", "newton"}))
        ->capture_default_str();
    cmd->add_option("--tol", opts.spec.tol_abs, "absolute update tolerance")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--quad", opts.spec.quad_points,
                    "quadrature points per interval (0 = automatic r+2)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "md"}))
        ->capture_default_str();
    cmd->add_option("--out", opts.out_path, "write output to this file instead of stdout");
    cmd->add_flag("--check-bounds", opts.spec.check_step_bound,
                  "warn when a step exceeds the admissible bound");
}

int write_output(const std::vector<cgstep::ConvergenceRow>& rows, const CliOptions& opts) {
    const std::string text = cgstep::emit(rows, cgstep::parse_format(opts.format));
    if (opts.out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) {
        std::cerr << "cannot open '" << opts.out_path << "' for writing\n";
        return 1;
    }
    file << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hp continuous Galerkin time stepping for nonlinear initial value problems"};
    app.require_subcommand(1);

    CliOptions solve_opts, h_opts, p_opts, cmp_opts;

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve once on a uniform mesh");
    add_common_options(solve_cmd, solve_opts);
    solve_cmd->add_option("--order", solve_opts.order, "polynomial degree r")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_option("--elements", solve_opts.spec.elements, "number of mesh elements")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI::App* h_cmd = app.add_subcommand("h-sweep", "bisection sweep at fixed order(s)");
    add_common_options(h_cmd, h_opts);
    h_cmd->add_option("--order", h_opts.spec.orders, "polynomial degrees to sweep")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    h_cmd->add_option("--elements", h_opts.spec.max_elements, "element cap for the sweep")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    h_cmd->add_option("--floor", h_opts.spec.error_floor, "stop refining below this L2 error")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI::App* p_cmd = app.add_subcommand("p-sweep", "order escalation on fixed meshes");
    add_common_options(p_cmd, p_opts);
    p_cmd->add_option("--elements", p_opts.spec.element_counts, "fixed mesh sizes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    p_cmd->add_option("--max-order", p_opts.spec.max_order, "highest degree to try")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    p_cmd->add_option("--floor", p_opts.spec.error_floor, "stop escalating below this L2 error")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI::App* cmp_cmd = app.add_subcommand("compare", "simplified Newton vs Picard iterations");
    add_common_options(cmp_cmd, cmp_opts);
    cmp_cmd->add_option("--order", cmp_opts.spec.orders, "polynomial degrees to sweep")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmp_cmd->add_option("--elements", cmp_opts.spec.max_elements, "element cap for the sweep")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmp_cmd->add_option("--floor", cmp_opts.spec.error_floor, "stop refining below this L2 error")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (solve_cmd->parsed()) {
            solve_opts.spec.scheme = cgstep::parse_scheme(solve_opts.scheme);
            solve_opts.spec.orders = {solve_opts.order};
            const cgstep::OdeProblem problem = cgstep::make_problem(solve_opts.spec.problem_id);
            const cgstep::TimePartition partition =
                cgstep::uniform(problem.horizon, solve_opts.spec.elements, solve_opts.order);
            const cgstep::SolveResult result =
                cgstep::solve(problem, partition, solve_opts.spec.iteration_config());
            for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';

            cgstep::ConvergenceRow row;
            row.elements = partition.intervals();
            row.degree = solve_opts.order;
            row.dof = cgstep::dof(partition, problem.dim);
            row.l2_error = cgstep::l2_error(result.solution, problem.exact);
            row.linf_error = cgstep::linf_error(result.solution, problem.exact);
            row.total_iterations = result.total_iterations();
            row.scheme = std::string(cgstep::scheme_name(solve_opts.spec.scheme));
            row.problem = problem.name;
            return write_output({row}, solve_opts);
        }
        if (h_cmd->parsed()) {
            h_opts.spec.scheme = cgstep::parse_scheme(h_opts.scheme);
            return write_output(cgstep::run_h_sweep(h_opts.spec), h_opts);
        }
        if (p_cmd->parsed()) {
            p_opts.spec.scheme = cgstep::parse_scheme(p_opts.scheme);
            return write_output(cgstep::run_p_sweep(p_opts.spec), p_opts);
        }
        cmp_opts.spec.scheme = cgstep::parse_scheme(cmp_opts.scheme);
        return write_output(cgstep::run_scheme_comparison(cmp_opts.spec), cmp_opts);
    } catch (const cgstep::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
