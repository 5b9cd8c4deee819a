#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dot_export.hpp"
#include "errors.hpp"
#include "moduli.hpp"
#include "report_io.hpp"

namespace curvemoduli {

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error("cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace detail

// Command line front end, separated from main() so tests can drive it.
// args excludes the program name. Exit codes: 0 success, 1 bad input or
// usage, 2 broken internal invariant.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"number of moduli of a plane curve germ that is a union of smooth branches"};
    app.require_subcommand(1);

    std::string input;
    std::string format = "text";
    bool oracle = false;
    int max_brute = 20;
    std::string output;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", input, "curve description file (JSON)")->required();
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
        sub->add_flag("--oracle", oracle,
                      "cross-check every solve against the exhaustive reference "
                      "(applies to trees within the --max-brute bound)");
        sub->add_option("--max-brute", max_brute, "node bound for exhaustive checks")
            ->envname("MODULI_MAX_BRUTE")
            ->capture_default_str();
        sub->add_option("--output", output, "write the result to this file instead of stdout");
    };

    CLI::App* cmd_moduli =
        app.add_subcommand("moduli", "number of moduli with the per-center breakdown");
    CLI::App* cmd_solve = app.add_subcommand("solve", "admissible flags of the global tree");
    CLI::App* cmd_tree = app.add_subcommand("tree", "cluster tree and proximity matrix");
    CLI::App* cmd_dot = app.add_subcommand("dot", "annotated tree in Graphviz format");
    for (CLI::App* sub : {cmd_moduli, cmd_solve, cmd_tree, cmd_dot})
        add_common(sub);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        const CurveSpec spec = parse_curve_file(detail::read_file(input));
        const ClusterTree tree = tree_from_curve_spec(spec);
        const SolveOptions solve_options{oracle, max_brute};
        const bool json = format == "json";

        std::string result;
        if (cmd_moduli->parsed()) {
            const ModuliReport report = moduli_count(tree, solve_options);
            result = json ? report_to_json(report).dump(2) + "\n"
                          : render_text_report(tree, report);
        } else if (cmd_solve->parsed()) {
            const SaitoSolution sol = oracle ? find_admissible_checked(tree, max_brute)
                                             : find_admissible(tree);
            result = json ? solution_to_json(tree, sol).dump(2) + "\n"
                          : render_text_solution(tree, sol);
        } else if (cmd_tree->parsed()) {
            result = json ? tree_to_json(tree).dump(2) + "\n" : render_text_tree(tree);
        } else {
            result = export_dot(tree, moduli_count(tree, solve_options));
        }

        if (!output.empty()) {
            std::ofstream file(output, std::ios::binary);
            if (!file)
                throw input_error("cannot write \"" + output + "\"");
            file << result;
        } else {
            out << result;
        }
        return 0;
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const invariant_error& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace curvemoduli
