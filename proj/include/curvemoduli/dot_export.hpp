#pragma once

#include <string>

#include "cluster_tree.hpp"
#include "moduli.hpp"

namespace curvemoduli {

// Graphviz view of the resolution: one record per exceptional component with
// its multiplicities, the solved flag and excess, and the sigma contributed
// by the local curve at that center. Invariant components are drawn bold.
// Output is deterministic, nodes and edges in id order.
inline std::string export_dot(const ClusterTree& tree, const ModuliReport& report)
{
    std::string out = "digraph cluster_tree {\n";
    out += "  label=\"total = " + std::to_string(report.total) + " (generic)\";\n";
    out += "  node [shape=record];\n";
    if (!tree.empty()) {
        const SaitoSolution& global = report.centers.front().solution;
        for (const Node& v : tree.nodes()) {
            const std::size_t i = static_cast<std::size_t>(v.id) - 1;
            out += "  d" + std::to_string(v.id) + " [label=\"D_" + std::to_string(v.id) +
                   " | m=" + std::to_string(v.m) + ",n=" + std::to_string(v.n) +
                   " | Delta=" + std::to_string(global.delta[i]) +
                   ",eps=" + std::to_string(global.E_vec[i]) +
                   " | sigma=" + std::to_string(report.centers[i].sigma) + "\"";
            if (global.delta[i] == 1)
                out += ", style=bold";
            out += "];\n";
        }
        for (const Node& v : tree.nodes())
            if (v.parent != 0)
                out += "  d" + std::to_string(v.parent) + " -> d" + std::to_string(v.id) + ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace curvemoduli
