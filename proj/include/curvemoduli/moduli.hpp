#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cluster_tree.hpp"
#include "errors.hpp"
#include "saito.hpp"

namespace curvemoduli {

// Saito type of a curve germ: parity of the branch count nu crossed with the
// flag of the first exceptional component. E / O are the even / odd cases
// with invariant first component, Ed / Od the dicritical ones.
enum class CurveType { E, O, Ed, Od };

inline const char* curve_type_name(CurveType t)
{
    switch (t) {
        case CurveType::E: return "E";
        case CurveType::O: return "O";
        case CurveType::Ed: return "Ed";
        case CurveType::Od: return "Od";
    }
    throw invariant_error("unknown curve type");
}

inline CurveType curve_type_from_name(const std::string& name)
{
    if (name == "E")
        return CurveType::E;
    if (name == "O")
        return CurveType::O;
    if (name == "Ed")
        return CurveType::Ed;
    if (name == "Od")
        return CurveType::Od;
    throw input_error("unknown curve type \"" + name + "\"");
}

inline CurveType classify_type(std::int64_t nu, int delta1)
{
    if (nu < 1)
        throw invariant_error("classify_type: nu must be positive");
    if (nu % 2 == 0)
        return delta1 == 1 ? CurveType::E : CurveType::Ed;
    return delta1 == 1 ? CurveType::O : CurveType::Od;
}

// Saito number: the smaller of the two valuations in an optimal Saito basis
// of the module of tangent vector fields.
//   E:  (nu/2, nu/2)            O:  ((nu-1)/2, (nu+1)/2)
//   Ed: (nu/2 - 1, nu/2)        Od: ((nu-1)/2, (nu-1)/2)
inline std::int64_t saito_number(std::int64_t nu, int delta1)
{
    if (nu < 1)
        throw invariant_error("saito_number: nu must be positive");
    return parity_bracket<std::int64_t>(nu, nu / 2 - (1 - delta1), (nu - 1) / 2);
}

// Dimension of the cohomological obstruction space attached to one curve:
// the number of moduli the germ contributes at this center. The leading term
// depends only on nu; the dicritical types get a correction from the excess
// at the root and the flags next to it.
inline std::int64_t sigma_of_curve(const ClusterTree& local, const SaitoSolution& sol)
{
    if (local.empty())
        return 0;
    if (!sol.admissible || static_cast<int>(sol.delta.size()) != local.size())
        throw invariant_error("sigma_of_curve needs the admissible solution of the same tree");
    const std::int64_t nu = local.node(1).m;
    const CurveType type = classify_type(nu, sol.delta[0]);

    const std::int64_t product = (type == CurveType::E || type == CurveType::Ed)
                                     ? (nu - 2) * (nu - 4)
                                     : (nu - 3) * (nu - 3);
    if (product % 4 != 0)
        throw invariant_error("sigma_of_curve: parity broken, leading term not divisible by 4");
    std::int64_t sigma = product / 4;

    if (type == CurveType::Ed || type == CurveType::Od) {
        std::int64_t root_child_flags = 0;
        for (int c : local.node(1).children)
            root_child_flags += sol.delta[static_cast<std::size_t>(c) - 1];
        sigma += (type == CurveType::Ed ? -1 : -2) + sol.E_vec[0] + root_child_flags;
    }
    if (sigma < 0)
        throw invariant_error("sigma_of_curve: negative dimension");
    return sigma;
}

struct CenterReport {
    int center = 0;
    ClusterTree local_tree;
    SaitoSolution solution;
    std::int64_t nu = 0;
    CurveType curve_type = CurveType::E;
    std::int64_t saito = 0;
    std::int64_t sigma = 0;
};

struct ModuliReport {
    std::vector<CenterReport> centers;
    std::int64_t total = 0;
};

struct SolveOptions {
    bool cross_check = false;  // re-derive every solution exhaustively
    int max_brute = 20;        // node bound for the exhaustive reference
};

inline CenterReport analyze_center(const ClusterTree& tree, int k, const SolveOptions& opt = {})
{
    CenterReport r;
    r.center = k;
    r.local_tree = local_curve(tree, k);
    r.solution = opt.cross_check ? find_admissible_checked(r.local_tree, opt.max_brute)
                                 : find_admissible(r.local_tree);
    r.nu = r.local_tree.node(1).m;
    r.curve_type = classify_type(r.nu, r.solution.delta[0]);
    r.saito = saito_number(r.nu, r.solution.delta[0]);
    r.sigma = sigma_of_curve(r.local_tree, r.solution);
    return r;
}

// The number of moduli of the curve: each center contributes the sigma of
// its local curve (the germ there together with the divisor branch), and the
// contributions add up. Valid for a curve generic among those with this
// resolution tree.
inline ModuliReport moduli_count(const ClusterTree& tree, const SolveOptions& opt = {})
{
    ModuliReport report;
    for (int k = 1; k <= tree.size(); ++k) {
        report.centers.push_back(analyze_center(tree, k, opt));
        report.total += report.centers.back().sigma;
    }
    return report;
}

}  // namespace curvemoduli
