#include "hsi/velocity_obstacle.hpp"

#include <doctest.h>

#include <random>

using namespace hsi;

namespace {

AgentDisc disc(double x, double y, double vx, double vy, double r = 0.25) {
    return AgentDisc{Vec2(x, y), Vec2(vx, vy), r};
}

Vec2 rot(const Vec2& v, double a) {
    return Vec2(std::cos(a) * v.x() - std::sin(a) * v.y(),
                std::cos(a) * v.y() + std::sin(a) * v.x());
}

}  // namespace

TEST_CASE("build_vo closed-form tangent geometry") {
    const AgentDisc a = disc(0, 0, 0, 0);
    const AgentDisc b = disc(2, 0, 0, 0);
    const VOGeometry vo = build_vo(a, b);
    CHECK(vo.apex.norm() == doctest::Approx(0.0));
    CHECK(vo.half_angle == doctest::Approx(std::asin(0.5 / 2.0)).epsilon(1e-12));
    CHECK(vo.axis.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vo.axis.y() == doctest::Approx(0.0).epsilon(1e-12));
    // Boundary rays symmetric about the axis.
    CHECK(vo.left_boundary.y() == doctest::Approx(-vo.right_boundary.y()).epsilon(1e-12));
    CHECK(vo.left_boundary.x() == doctest::Approx(vo.right_boundary.x()).epsilon(1e-12));
}

TEST_CASE("build_vo translates the apex by the obstacle velocity") {
    const AgentDisc a = disc(0, 0, 0, 0);
    const AgentDisc b_still = disc(2, 0, 0, 0);
    const AgentDisc b_move = disc(2, 0, 0, 1);
    const VOGeometry vo1 = build_vo(a, b_still);
    const VOGeometry vo2 = build_vo(a, b_move);
    CHECK(vo2.apex.x() == doctest::Approx(0.0));
    CHECK(vo2.apex.y() == doctest::Approx(1.0));
    CHECK(vo2.half_angle == doctest::Approx(vo1.half_angle));
    CHECK((vo2.axis - vo1.axis).norm() == doctest::Approx(0.0));
}

TEST_CASE("build_vo rejects overlapping discs") {
    CHECK_THROWS_WITH_AS(build_vo(disc(0, 0, 0, 0), disc(0.3, 0, 0, 0)),
                         doctest::Contains("overlap"), std::invalid_argument);
}

TEST_CASE("build_vo half-angle approaches pi/2 near tangency") {
    const AgentDisc a = disc(0, 0, 0, 0);
    double prev = 0.0;
    for (double dist : {1.0, 0.7, 0.55, 0.501, 0.5001}) {
        const VOGeometry vo = build_vo(a, disc(dist, 0, 0, 0));
        CHECK(vo.half_angle > prev);
        prev = vo.half_angle;
    }
    CHECK(prev > kPi / 2 - 0.05);
}

TEST_CASE("evaluate_vo axis-aligned closed forms") {
    const VOGeometry vo = build_vo(disc(0, 0, 0, 0), disc(2, 0, 0, 0));
    const double beta = std::asin(0.25);

    SUBCASE("on-axis point") {
        const VOEvaluation ev = evaluate_vo(vo, Vec2(1.0, 0.0));
        CHECK(ev.inside);
        CHECK(ev.d_op == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ev.d_bp == doctest::Approx(std::sin(beta)).epsilon(1e-9));
    }
    SUBCASE("off-axis family: d_bp = r * sin(beta - |phi|)") {
        for (double phi : {-0.2, -0.1, 0.05, 0.15, 0.24}) {
            for (double r : {0.5, 1.0, 2.0}) {
                const VOEvaluation ev = evaluate_vo(vo, rot(Vec2(r, 0.0), phi));
                CHECK(ev.inside);
                CHECK(ev.d_op == doctest::Approx(r).epsilon(1e-9));
                CHECK(ev.d_bp ==
                      doctest::Approx(r * std::sin(beta - std::abs(phi))).epsilon(1e-9));
            }
        }
    }
    SUBCASE("zero relative velocity is outside") {
        const VOEvaluation ev = evaluate_vo(vo, Vec2(0.0, 0.0));
        CHECK(!ev.inside);
        CHECK(ev.d_op == 0.0);
        CHECK(ev.d_bp == 0.0);
    }
    SUBCASE("back side is outside") {
        CHECK(!evaluate_vo(vo, Vec2(-3.0, 0.0)).inside);
        CHECK(!evaluate_vo(vo, Vec2(0.0, 2.0)).inside);
    }
    SUBCASE("boundary counts as outside") {
        const Vec2 on_boundary = 1.0 * vo.left_boundary;
        CHECK(!evaluate_vo(vo, on_boundary).inside);
    }
}

TEST_CASE("evaluate_vo with a translated cone") {
    const VOGeometry vo = build_vo(disc(0, 0, 0, 0), disc(2, 0, 0, 1));
    // Relative velocity (1, 0) relative to apex (0, 1).
    const VOEvaluation ev = evaluate_vo(vo, Vec2(1.0, 1.0));
    CHECK(ev.inside);
    CHECK(ev.d_op == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collision_oracle basics") {
    CHECK(collision_oracle(disc(0, 0, 1, 0), disc(2, 0, -1, 0), 20.0, 2000));
    CHECK(!collision_oracle(disc(0, 0, 1, 0), disc(0, 3, 1, 0), 20.0, 2000));
}

TEST_CASE("evaluate_vo agrees with the rollout oracle on random configurations") {
    std::mt19937 gen(101);
    std::uniform_real_distribution<double> upos(-5.0, 5.0);
    std::uniform_real_distribution<double> uvel(-1.5, 1.5);
    std::uniform_real_distribution<double> urad(0.2, 0.5);

    int total = 0, agree = 0;
    while (total < 1000) {
        AgentDisc a{Vec2(upos(gen), upos(gen)), Vec2(uvel(gen), uvel(gen)), urad(gen)};
        AgentDisc b{Vec2(upos(gen), upos(gen)), Vec2(uvel(gen), uvel(gen)), urad(gen)};
        const double dist = (b.position - a.position).norm();
        if (dist <= (a.radius + b.radius) * 1.05) continue;  // non-overlapping only
        ++total;
        const bool inside = evaluate_vo(build_vo(a, b), a.velocity).inside;
        const bool collides = collision_oracle(a, b, 20.0, 2000);
        if (inside == collides) ++agree;
    }
    CHECK(agree >= 990);
}

TEST_CASE("closest_obstacle picks the minimum distance, ties to lowest index") {
    const AgentDisc a = disc(0, 0, 0, 0);
    std::vector<AgentDisc> others{disc(3, 0, 0, 0), disc(1, 0, 0, 0)};
    CHECK(closest_obstacle(a, others) == std::size_t{1});
    CHECK(!closest_obstacle(a, {}).has_value());

    std::vector<AgentDisc> tie{disc(0, 2, 0, 0), disc(2, 0, 0, 0)};
    CHECK(closest_obstacle(a, tie) == std::size_t{0});

    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<AgentDisc> obs;
        const int n = 1 + static_cast<int>(gen() % 20);
        for (int i = 0; i < n; ++i) obs.push_back(disc(u(gen), u(gen), 0, 0));
        // Brute-force argmin oracle.
        std::size_t best = 0;
        for (std::size_t i = 1; i < obs.size(); ++i)
            if ((obs[i].position - a.position).norm() <
                (obs[best].position - a.position).norm())
                best = i;
        CHECK(closest_obstacle(a, obs) == best);
    }
}

TEST_CASE("risk branches") {
    SUBCASE("stationary agent, no obstacles") {
        const RiskSample r = risk(disc(0, 0, 0, 0), {});
        CHECK(r.risk == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("moving agent, no interaction") {
        const RiskSample r = risk(disc(0, 0, 1, 0), {disc(0, 50, 0, 0)});
        CHECK(r.risk == std::exp(1.0));  // exact: contributions are literally zero
        CHECK(r.d_op == 0.0);
        CHECK(r.d_bp == 0.0);
    }
    SUBCASE("inside-cone case chains the geometry into the exponent") {
        // d_op = 1, d_bp = sin(asin(0.25)) = 0.25, v_a = 1.
        const RiskSample r = risk(disc(0, 0, 1, 0), {disc(2, 0, 0, 0)});
        const double oracle = std::exp(1.0 + 0.25 + 1.0);
        CHECK(r.risk == doctest::Approx(oracle).epsilon(1e-6));
        CHECK(r.d_op == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.d_bp == doctest::Approx(0.25).epsilon(1e-9));
    }
    SUBCASE("overlapping discs are clamped, not an error") {
        const RiskSample r = risk(disc(0, 0, 1, 0), {disc(0.1, 0, 0, 0)});
        CHECK(std::isfinite(r.risk));
        CHECK(r.risk > std::exp(1.0));  // maximal interaction keeps contributions
    }
}

TEST_CASE("risk_value is monotone non-decreasing in each argument") {
    std::mt19937 gen(13);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double d_op = u(gen), d_bp = u(gen), v_a = u(gen), bump = u(gen);
        const double base = risk_value(d_op, d_bp, v_a);
        CHECK(risk_value(d_op + bump, d_bp, v_a) >= base);
        CHECK(risk_value(d_op, d_bp + bump, v_a) >= base);
        CHECK(risk_value(d_op, d_bp, v_a + bump) >= base);
        CHECK(base > 0.0);
    }
}

TEST_CASE("evaluate_vo is invariant under rigid world motion") {
    std::mt19937 gen(31);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int trial = 0; trial < 300; ++trial) {
        AgentDisc a{Vec2(u(gen), u(gen)), Vec2(u(gen), u(gen)), 0.3};
        AgentDisc b{Vec2(u(gen), u(gen)), Vec2(u(gen), u(gen)), 0.3};
        if ((b.position - a.position).norm() <= 0.7) continue;

        const double phi = ang(gen);
        const Vec2 shift(u(gen), u(gen));
        AgentDisc a2{rot(a.position, phi) + shift, rot(a.velocity, phi), a.radius};
        AgentDisc b2{rot(b.position, phi) + shift, rot(b.velocity, phi), b.radius};

        const VOEvaluation e1 = evaluate_vo(build_vo(a, b), a.velocity);
        const VOEvaluation e2 = evaluate_vo(build_vo(a2, b2), a2.velocity);
        CHECK(e1.inside == e2.inside);
        CHECK(std::abs(e1.d_op - e2.d_op) <= 1e-9);
        CHECK(std::abs(e1.d_bp - e2.d_bp) <= 1e-9);
    }
}

TEST_CASE("VO membership is covariant under uniform scaling") {
    std::mt19937 gen(37);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 300; ++trial) {
        AgentDisc a{Vec2(u(gen), u(gen)), Vec2(u(gen), u(gen)), 0.3};
        AgentDisc b{Vec2(u(gen), u(gen)), Vec2(u(gen), u(gen)), 0.4};
        if ((b.position - a.position).norm() <= 0.8) continue;
        const double c = scale(gen);
        AgentDisc a2{c * a.position, c * a.velocity, c * a.radius};
        AgentDisc b2{c * b.position, c * b.velocity, c * b.radius};
        CHECK(evaluate_vo(build_vo(a, b), a.velocity).inside ==
              evaluate_vo(build_vo(a2, b2), a2.velocity).inside);
    }
}
