#include "hsi/graph_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

namespace hsi {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

nlohmann::json graph_to_json(const CausalGraph& graph) {
    nlohmann::json j;
    j["variables"] = graph.variables;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : graph.edges) {
        j["edges"].push_back({
            {"source", graph.variables.at(static_cast<std::size_t>(e.source.var))},
            {"lag", e.source.lag},
            {"target", graph.variables.at(static_cast<std::size_t>(e.target))},
            {"statistic", e.statistic},
            {"p_value", e.p_value},
        });
    }
    return j;
}

CausalGraph graph_from_json(const nlohmann::json& j) {
    CausalGraph g;
    g.variables = j.at("variables").get<std::vector<std::string>>();
    auto index_of = [&](const std::string& name) {
        for (std::size_t i = 0; i < g.variables.size(); ++i)
            if (g.variables[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("graph_from_json: unknown variable '" + name + "'");
    };
    for (const auto& je : j.at("edges")) {
        CausalEdge e;
        e.source.var = index_of(je.at("source").get<std::string>());
        e.source.lag = je.at("lag").get<int>();
        if (e.source.lag < 1) throw std::invalid_argument("graph_from_json: lag must be >= 1");
        e.target = index_of(je.at("target").get<std::string>());
        e.statistic = je.at("statistic").get<double>();
        e.p_value = je.at("p_value").get<double>();
        g.edges.push_back(e);
    }
    return g;
}

std::string graph_to_dot(const CausalGraph& graph) {
    std::ostringstream os;
    os << "digraph causal_model {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle, fontsize=12];\n";
    for (std::size_t i = 0; i < graph.variables.size(); ++i) {
        const auto strength = graph.auto_strength(static_cast<int>(i));
        const double width = strength ? 1.0 + 4.0 * std::min(1.0, std::abs(*strength)) : 1.0;
        os << "  \"" << graph.variables[i] << "\" [penwidth=" << fmt(width, "%.2f");
        if (strength) os << ", xlabel=\"" << fmt(*strength, "%.3f") << "\"";
        os << "];\n";
    }
    for (const auto& e : graph.edges) {
        if (e.source.var == e.target) continue;  // self-links drawn as node borders
        const double width = 0.5 + 4.0 * std::min(1.0, std::abs(e.statistic));
        os << "  \"" << graph.variables.at(static_cast<std::size_t>(e.source.var)) << "\" -> \""
           << graph.variables.at(static_cast<std::size_t>(e.target)) << "\" [label=\"τ="
           << e.source.lag << " | stat=" << fmt(e.statistic, "%.3f")
           << "\", penwidth=" << fmt(width, "%.2f") << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace hsi
