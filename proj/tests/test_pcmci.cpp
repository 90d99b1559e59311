#include "hsi/pcmci.hpp"

#include "hsi/graph_io.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>
#include <set>

using namespace hsi;

namespace {

/// Linear VAR(1) generator over named coefficient entries (target, source).
TimeSeriesDataset var1(const std::vector<std::string>& names,
                       const std::vector<std::tuple<int, int, double>>& coeffs, int n,
                       unsigned seed, double noise = 1.0) {
    const int N = static_cast<int>(names.size());
    std::mt19937 gen(seed);
    std::normal_distribution<double> g(0.0, noise);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, N);
    for (int c = 0; c < N; ++c) V(0, c) = g(gen);
    for (int t = 1; t < n; ++t)
        for (int c = 0; c < N; ++c) {
            double v = g(gen);
            for (const auto& [tgt, src, w] : coeffs)
                if (tgt == c) v += w * V(t - 1, src);
            V(t, c) = v;
        }
    TimeSeriesDataset ds;
    ds.variable_names = names;
    ds.values = V;
    ds.dt = 1.0;
    return ds;
}

std::set<std::tuple<int, int, int>> edge_set(const CausalGraph& g) {
    std::set<std::tuple<int, int, int>> out;
    for (const auto& e : g.edges) out.insert({e.source.var, e.source.lag, e.target});
    return out;
}

bool has_parent(const std::vector<CandidateParents>& cands, int target, int var, int lag) {
    for (const auto& p : cands[static_cast<std::size_t>(target)].parents)
        if (p.var == var && p.lag == lag) return true;
    return false;
}

DiscoveryConfig parcorr_cfg(std::uint64_t seed = 0) {
    DiscoveryConfig cfg;
    cfg.test = IndependenceTest::ParCorr;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("pc1 keeps the true driver and removes the unrelated variable") {
    // X -> Y, Z unrelated; X and Z autocorrelated. The preselection is
    // deliberately liberal (alpha_pc = 0.2), so a null candidate survives
    // roughly that often per seed; the true driver must survive always.
    int z_kept = 0;
    for (unsigned seed = 0; seed < 10; ++seed) {
        const TimeSeriesDataset ds = var1(
            {"X", "Y", "Z"}, {{0, 0, 0.7}, {1, 0, 0.8}, {2, 2, 0.6}}, 2000, 12345 + seed);
        const auto cands = pc1_parents(ds, parcorr_cfg(seed));
        CHECK(has_parent(cands, 1, 0, 1));  // Y <- X at lag 1, every seed
        if (has_parent(cands, 1, 2, 1)) ++z_kept;
    }
    CHECK(z_kept <= 4);  // unrelated Z mostly removed
}

TEST_CASE("pc1 on a single strongly autocorrelated variable") {
    std::mt19937 gen(7);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(1200);
    x[0] = g(gen);
    for (std::size_t i = 1; i < x.size(); ++i) x[i] = 0.8 * x[i - 1] + g(gen);
    const TimeSeriesDataset ds = to_dataset({{"x", x}}, 1.0);
    const auto cands = pc1_parents(ds, parcorr_cfg());
    REQUIRE(cands.size() == 1);
    REQUIRE(cands[0].parents.size() == 1);
    CHECK(cands[0].parents[0].var == 0);
    CHECK(cands[0].parents[0].lag == 1);
}

TEST_CASE("pc1 prunes near-everything on independent noise (seed-averaged)") {
    int kept = 0, total = 0;
    for (unsigned seed = 0; seed < 40; ++seed) {
        const TimeSeriesDataset ds = var1({"a", "b", "c"}, {}, 400, 1000 + seed);
        const auto cands = pc1_parents(ds, parcorr_cfg());
        for (const auto& c : cands) {
            kept += static_cast<int>(c.parents.size());
            total += 3;
        }
    }
    // Per-link survival should be near alpha_pc = 0.2.
    CHECK(static_cast<double>(kept) / total < 0.3);
}

TEST_CASE("mci recovers a VAR(1) chain exactly on most seeds") {
    const std::set<std::tuple<int, int, int>> truth{
        {0, 1, 0}, {0, 1, 1}, {1, 1, 1}, {1, 1, 2}, {2, 1, 2}};
    int exact = 0;
    for (unsigned seed = 0; seed < 25; ++seed) {
        const TimeSeriesDataset ds =
            var1({"X", "Y", "Z"},
                 {{0, 0, 0.7}, {1, 1, 0.5}, {1, 0, 0.6}, {2, 2, 0.5}, {2, 1, 0.6}}, 2000,
                 999 + seed);
        const CausalGraph g = run_pcmci(ds, parcorr_cfg(seed));
        if (edge_set(g) == truth) ++exact;
    }
    CHECK(exact >= 20);  // >= 80% of 25 seeds
}

TEST_CASE("mci per-link false positive rate stays near alpha on null data") {
    int false_edges = 0, links = 0;
    for (unsigned seed = 0; seed < 100; ++seed) {
        const TimeSeriesDataset ds = var1({"a", "b", "c"}, {}, 500, 5000 + seed);
        const CausalGraph g = run_pcmci(ds, parcorr_cfg(seed));
        false_edges += static_cast<int>(g.edges.size());
        links += 9;
    }
    CHECK(static_cast<double>(false_edges) / links <= 0.05 + 0.02);
}

TEST_CASE("mci with empty candidate lists yields no edges") {
    const TimeSeriesDataset ds = var1({"a", "b"}, {}, 200, 77);
    std::vector<CandidateParents> empty(2);
    const CausalGraph g = mci_validate(ds, empty, parcorr_cfg());
    // Unconditional tests may still fire on noise; with this fixed seed the
    // dataset is genuinely independent, so demand a clean graph.
    CHECK(g.edges.empty());
}

TEST_CASE("run_pcmci is deterministic") {
    const TimeSeriesDataset ds =
        var1({"X", "Y"}, {{0, 0, 0.6}, {1, 0, 0.7}}, 600, 31);
    DiscoveryConfig cfg = parcorr_cfg(42);
    const CausalGraph a = run_pcmci(ds, cfg);
    const CausalGraph b = run_pcmci(ds, cfg);
    CHECK(graph_to_json(a).dump() == graph_to_json(b).dump());

    cfg.test = IndependenceTest::Gpdc;
    cfg.permutations = 100;
    const CausalGraph c = run_pcmci(ds, cfg);
    const CausalGraph d = run_pcmci(ds, cfg);
    CHECK(graph_to_json(c).dump() == graph_to_json(d).dump());
}

TEST_CASE("graph edges satisfy the significance contract") {
    const TimeSeriesDataset ds =
        var1({"X", "Y", "Z"}, {{0, 0, 0.7}, {1, 0, 0.6}, {2, 1, 0.5}}, 1500, 404);
    const DiscoveryConfig cfg = parcorr_cfg(1);
    const CausalGraph g = run_pcmci(ds, cfg);
    CHECK(!g.edges.empty());
    for (const auto& e : g.edges) {
        CHECK(e.p_value >= 0.0);
        CHECK(e.p_value <= cfg.alpha);
        CHECK(e.source.lag >= 1);
        CHECK(std::isfinite(e.statistic));
    }
}

TEST_CASE("lowering alpha never adds edges") {
    const TimeSeriesDataset ds =
        var1({"X", "Y", "Z"}, {{0, 0, 0.6}, {1, 0, 0.4}, {2, 1, 0.3}}, 1000, 52);
    DiscoveryConfig strict = parcorr_cfg(9);
    strict.alpha = 0.01;
    DiscoveryConfig loose = parcorr_cfg(9);
    loose.alpha = 0.05;
    const auto strict_edges = edge_set(run_pcmci(ds, strict));
    const auto loose_edges = edge_set(run_pcmci(ds, loose));
    for (const auto& e : strict_edges) CHECK(loose_edges.count(e) == 1);
}

TEST_CASE("pcmci rejects bad inputs") {
    const TimeSeriesDataset tiny = var1({"a", "b", "c"}, {}, 25, 1);
    CHECK_THROWS_WITH_AS(run_pcmci(tiny, parcorr_cfg()), doctest::Contains("insufficient"),
                         std::invalid_argument);

    DiscoveryConfig bad = parcorr_cfg();
    bad.tau_max = 0;
    const TimeSeriesDataset ok = var1({"a", "b"}, {}, 200, 2);
    CHECK_THROWS(run_pcmci(ok, bad));

    DiscoveryConfig bad_alpha = parcorr_cfg();
    bad_alpha.alpha = 0.5;
    bad_alpha.alpha_pc = 0.2;  // violates alpha <= alpha_pc
    CHECK_THROWS(run_pcmci(ok, bad_alpha));
}

TEST_CASE("graph JSON and DOT round trip") {
    CausalGraph g;
    g.variables = {"theta_g", "d_g", "v"};
    g.edges.push_back({{1, 1}, 0, -0.62, 0.001});
    g.edges.push_back({{0, 1}, 0, 0.80, 0.0});
    g.edges.push_back({{2, 1}, 1, 0.45, 0.01});

    const nlohmann::json j = graph_to_json(g);
    const CausalGraph back = graph_from_json(j);
    CHECK(back.variables == g.variables);
    REQUIRE(back.edges.size() == g.edges.size());
    CHECK(back.has_edge(1, 1, 0));
    CHECK(back.auto_strength(0) == doctest::Approx(0.80));
    CHECK(!back.auto_strength(2).has_value());
    CHECK(back.parents_of(0).size() == 2);

    const std::string dot = graph_to_dot(g);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("τ=1") != std::string::npos);
    CHECK(dot.find("stat=") != std::string::npos);
    CHECK(dot.find("\"d_g\" -> \"theta_g\"") != std::string::npos);
    // Self-links are node-border thickness, not arrows.
    CHECK(dot.find("\"theta_g\" -> \"theta_g\"") == std::string::npos);
}
