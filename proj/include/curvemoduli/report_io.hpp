#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "branch.hpp"
#include "cluster_tree.hpp"
#include "errors.hpp"
#include "moduli.hpp"
#include "rational.hpp"
#include "saito.hpp"

namespace curvemoduli {

// Insertion-ordered JSON keeps the output key order fixed, making runs byte
// for byte reproducible.
using Json = nlohmann::ordered_json;

// A curve description file holds exactly one of the two views: the branches
// themselves (jets with exact rational coefficients) or the bare resolution
// tree by attachment counts.
struct CurveSpec {
    std::optional<std::vector<Branch>> branches;  // as given, not yet normalized
    std::optional<NestedCounts> tree;
};

namespace detail {

inline void reject_unknown_keys(const Json& j, std::initializer_list<const char*> known,
                                const std::string& path)
{
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || item.key() == k;
        if (!ok)
            throw input_error(path + ": unknown key \"" + item.key() + "\"");
    }
}

inline Branch parse_branch(const Json& j, const std::string& path)
{
    if (!j.is_object())
        throw input_error(path + ": expected an object");
    reject_unknown_keys(j, {"form", "coeffs"}, path);
    if (!j.contains("form") || !j["form"].is_string())
        throw input_error(path + ".form: expected \"y_of_x\" or \"x_of_y\"");
    const std::string form = j["form"].get<std::string>();
    Branch b;
    if (form == "y_of_x")
        b.orientation = Orientation::y_of_x;
    else if (form == "x_of_y")
        b.orientation = Orientation::x_of_y;
    else
        throw input_error(path + ".form: expected \"y_of_x\" or \"x_of_y\", got \"" + form + "\"");
    if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty())
        throw input_error(path + ".coeffs: expected a non-empty array of strings");
    for (std::size_t i = 0; i < j["coeffs"].size(); ++i) {
        const Json& c = j["coeffs"][i];
        const std::string cpath = path + ".coeffs[" + std::to_string(i) + "]";
        if (c.is_number())
            throw input_error(cpath + ": coefficients must be strings holding exact "
                                      "rationals, e.g. \"1/2\", not JSON numbers");
        if (!c.is_string())
            throw input_error(cpath + ": expected a string");
        try {
            b.coeffs.push_back(parse_rational(c.get<std::string>()));
        } catch (const input_error& e) {
            throw input_error(cpath + ": " + e.what());
        }
    }
    return b;
}

inline NestedCounts parse_counts(const Json& j, const std::string& path)
{
    if (!j.is_object())
        throw input_error(path + ": expected an object");
    reject_unknown_keys(j, {"n", "children"}, path);
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw input_error(path + ".n: expected an integer");
    NestedCounts out;
    out.n = j["n"].get<std::int64_t>();
    if (out.n < 0)
        throw input_error(path + ".n: must be nonnegative");
    if (j.contains("children")) {
        if (!j["children"].is_array())
            throw input_error(path + ".children: expected an array");
        for (std::size_t i = 0; i < j["children"].size(); ++i)
            out.children.push_back(
                parse_counts(j["children"][i], path + ".children[" + std::to_string(i) + "]"));
    }
    return out;
}

}  // namespace detail

inline CurveSpec parse_curve_file(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw input_error(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw input_error("top level must be an object");
    detail::reject_unknown_keys(j, {"branches", "tree"}, "top level");
    const bool has_branches = j.contains("branches");
    const bool has_tree = j.contains("tree");
    if (has_branches == has_tree)
        throw input_error("exactly one of \"branches\" or \"tree\" is required");

    CurveSpec spec;
    if (has_branches) {
        const Json& arr = j["branches"];
        if (!arr.is_array() || arr.empty())
            throw input_error("\"branches\" must be a non-empty array");
        std::vector<Branch> branches;
        for (std::size_t i = 0; i < arr.size(); ++i)
            branches.push_back(
                detail::parse_branch(arr[i], "branches[" + std::to_string(i) + "]"));
        spec.branches = std::move(branches);
    } else {
        spec.tree = detail::parse_counts(j["tree"], "tree");
    }
    return spec;
}

inline ClusterTree tree_from_curve_spec(const CurveSpec& spec)
{
    if (spec.branches.has_value() == spec.tree.has_value())
        throw invariant_error("curve spec must hold exactly one view");
    if (spec.branches) {
        std::vector<Branch> normalized;
        normalized.reserve(spec.branches->size());
        for (const Branch& b : *spec.branches)
            normalized.push_back(normalize_branch(b));
        return build_tree(normalized);
    }
    return tree_from_counts(*spec.tree);
}

// --- JSON output -----------------------------------------------------------

inline Json solution_to_json(const ClusterTree& tree, const SaitoSolution& sol)
{
    Json out;
    out["delta"] = sol.delta;
    out["small_delta"] = sol.small_delta;
    out["S"] = sol.S_vec;
    out["E"] = sol.E_vec;
    out["admissible"] = sol.admissible;
    out["checks"] = admissibility_checks(tree, sol);
    return out;
}

inline Json report_to_json(const ModuliReport& report)
{
    Json out;
    out["centers"] = Json::array();
    for (const CenterReport& c : report.centers) {
        Json jc;
        jc["center"] = c.center;
        jc["nu"] = c.nu;
        jc["type"] = curve_type_name(c.curve_type);
        jc["delta"] = c.solution.delta;
        jc["small_delta"] = c.solution.small_delta;
        jc["S"] = c.solution.S_vec;
        jc["E"] = c.solution.E_vec;
        jc["saito_number"] = c.saito;
        jc["sigma"] = c.sigma;
        out["centers"].push_back(std::move(jc));
    }
    out["total"] = report.total;
    out["generic_caveat"] = true;
    return out;
}

// Rebuilds a report from its JSON form. The local trees are not part of the
// serialization; the solutions come back marked admissible with no recorded
// violations, which is the only state a report ever serializes from.
inline ModuliReport report_from_json(const Json& j)
{
    if (!j.is_object())
        throw input_error("report: expected an object");
    detail::reject_unknown_keys(j, {"centers", "total", "generic_caveat"}, "report");
    if (!j.contains("centers") || !j["centers"].is_array())
        throw input_error("report.centers: expected an array");
    if (!j.contains("total") || !j["total"].is_number_integer())
        throw input_error("report.total: expected an integer");
    if (!j.contains("generic_caveat") || !j["generic_caveat"].is_boolean() ||
        !j["generic_caveat"].get<bool>())
        throw input_error("report.generic_caveat: expected true");

    ModuliReport report;
    report.total = j["total"].get<std::int64_t>();
    for (std::size_t i = 0; i < j["centers"].size(); ++i) {
        const Json& jc = j["centers"][i];
        const std::string path = "report.centers[" + std::to_string(i) + "]";
        detail::reject_unknown_keys(jc,
                                    {"center", "nu", "type", "delta", "small_delta", "S", "E",
                                     "saito_number", "sigma"},
                                    path);
        for (const char* key : {"center", "nu", "saito_number", "sigma"})
            if (!jc.contains(key) || !jc[key].is_number_integer())
                throw input_error(path + "." + key + ": expected an integer");
        if (!jc.contains("type") || !jc["type"].is_string())
            throw input_error(path + ".type: expected a string");
        CenterReport c;
        c.center = jc["center"].get<int>();
        c.nu = jc["nu"].get<std::int64_t>();
        c.curve_type = curve_type_from_name(jc["type"].get<std::string>());
        c.saito = jc["saito_number"].get<std::int64_t>();
        c.sigma = jc["sigma"].get<std::int64_t>();
        for (const char* key : {"delta", "small_delta", "S", "E"})
            if (!jc.contains(key) || !jc[key].is_array())
                throw input_error(path + "." + key + ": expected an array");
        c.solution.delta = jc["delta"].get<DeltaVector>();
        c.solution.small_delta = jc["small_delta"].get<DeltaVector>();
        c.solution.S_vec = jc["S"].get<IntVector>();
        c.solution.E_vec = jc["E"].get<IntVector>();
        c.solution.admissible = true;
        report.centers.push_back(std::move(c));
    }
    return report;
}

inline Json tree_to_json(const ClusterTree& tree)
{
    Json out;
    out["nodes"] = Json::array();
    for (const Node& v : tree.nodes()) {
        Json jv;
        jv["id"] = v.id;
        if (v.parent == 0)
            jv["parent"] = nullptr;
        else
            jv["parent"] = v.parent;
        jv["children"] = v.children;
        jv["m"] = v.m;
        jv["n"] = v.n;
        out["nodes"].push_back(std::move(jv));
    }
    const IntMatrix p = proximity_matrix(tree);
    out["proximity"] = p.rows;
    return out;
}

// --- plain text output ------------------------------------------------------

namespace detail {

inline std::string join_ints(const std::vector<std::int64_t>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

inline std::string join_ints(const std::vector<int>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

inline std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width)
        s.append(width - s.size(), ' ');
    return s;
}

}  // namespace detail

// Table with one column per center: the germ at the origin first, then each
// infinitely near center together with the divisor branch through it.
inline std::string render_text_report(const ClusterTree& tree, const ModuliReport& report)
{
    std::vector<std::vector<std::string>> columns;
    std::vector<std::string> labels = {"",        "type", "nu", "nu(S_k)",      "n_k", "Delta",
                                       "delta",   "S",    "E",  "saito number", "sigma"};
    columns.push_back(labels);
    for (const CenterReport& c : report.centers) {
        std::vector<std::string> col;
        col.push_back(c.center == 1 ? "S_1"
                                    : "S_" + std::to_string(c.center) + " u D_" +
                                          std::to_string(tree.node(c.center).parent));
        col.push_back(curve_type_name(c.curve_type));
        col.push_back(std::to_string(c.nu));
        std::vector<std::int64_t> ms, ns;
        for (const Node& v : c.local_tree.nodes()) {
            ms.push_back(v.m);
            ns.push_back(v.n);
        }
        col.push_back(detail::join_ints(ms));
        col.push_back(detail::join_ints(ns));
        col.push_back(detail::join_ints(c.solution.delta));
        col.push_back(detail::join_ints(c.solution.small_delta));
        col.push_back(detail::join_ints(c.solution.S_vec));
        col.push_back(detail::join_ints(c.solution.E_vec));
        col.push_back(std::to_string(c.saito));
        col.push_back(std::to_string(c.sigma));
        columns.push_back(std::move(col));
    }

    std::string out;
    for (std::size_t row = 0; row < labels.size(); ++row) {
        std::string line;
        for (std::size_t col = 0; col < columns.size(); ++col) {
            std::size_t width = 0;
            for (const std::string& cell : columns[col])
                width = std::max(width, cell.size());
            line += detail::pad(columns[col][row], width + 2);
        }
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        out += line + "\n";
    }
    out += "\n";
    out += "total = " + std::to_string(report.total) +
           " (number of moduli of a curve generic among those with this resolution tree)\n";
    return out;
}

inline std::string render_text_solution(const ClusterTree& tree, const SaitoSolution& sol)
{
    std::string out;
    out += "Delta       " + detail::join_ints(sol.delta) + "\n";
    out += "delta       " + detail::join_ints(sol.small_delta) + "\n";
    out += "S           " + detail::join_ints(sol.S_vec) + "\n";
    out += "E           " + detail::join_ints(sol.E_vec) + "\n";
    out += std::string("admissible  ") + (sol.admissible ? "yes" : "no") + "\n";
    for (const std::string& line : admissibility_checks(tree, sol))
        out += line + "\n";
    return out;
}

inline std::string render_text_tree(const ClusterTree& tree)
{
    std::string out = "cluster tree (" + std::to_string(tree.size()) + " node" +
                      (tree.size() == 1 ? "" : "s") + ", " +
                      std::to_string(tree.total_branches()) + " branch" +
                      (tree.total_branches() == 1 ? "" : "es") + ")\n";
    for (const Node& v : tree.nodes()) {
        out += "  " + std::to_string(v.id) + ": parent " +
               (v.parent == 0 ? std::string("-") : std::to_string(v.parent)) + ", m " +
               std::to_string(v.m) + ", n " + std::to_string(v.n) + ", children [" +
               detail::join_ints(v.children) + "]\n";
    }
    if (tree.empty()) {
        out += "  (smooth branch, nothing to blow up)\n";
        return out;
    }
    const IntMatrix p = proximity_matrix(tree);
    std::size_t width = 1;
    for (const auto& row : p.rows)
        for (std::int64_t x : row)
            width = std::max(width, std::to_string(x).size());
    out += "proximity matrix\n";
    for (const auto& row : p.rows) {
        std::string line = " ";
        for (std::int64_t x : row) {
            std::string cell = std::to_string(x);
            line += std::string(width + 1 - cell.size(), ' ') + cell;
        }
        out += line + "\n";
    }
    return out;
}

}  // namespace curvemoduli
