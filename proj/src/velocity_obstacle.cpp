#include "hsi/velocity_obstacle.hpp"

namespace hsi {

namespace {

Vec2 rotated(const Vec2& v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

/// Distance from point p to the ray {t * dir : t >= 0} from the origin.
double point_to_ray(const Vec2& p, const Vec2& dir) {
    const double along = p.dot(dir);
    if (along <= 0.0) return p.norm();
    return (p - along * dir).norm();
}

void check_finite(const AgentDisc& d, const char* what) {
    if (!d.position.allFinite() || !d.velocity.allFinite() || !std::isfinite(d.radius))
        throw std::invalid_argument(std::string(what) + ": non-finite disc");
    if (d.radius <= 0.0) throw std::invalid_argument(std::string(what) + ": radius must be > 0");
}

}  // namespace

VOGeometry build_vo(const AgentDisc& agent, const AgentDisc& obstacle) {
    check_finite(agent, "build_vo");
    check_finite(obstacle, "build_vo");
    const Vec2 rel = obstacle.position - agent.position;
    const double dist = rel.norm();
    const double r = agent.radius + obstacle.radius;
    if (dist <= r)
        throw std::invalid_argument("build_vo: discs overlap (collision already occurring)");

    VOGeometry vo;
    vo.apex = obstacle.velocity;
    vo.axis = rel / dist;
    vo.half_angle = std::asin(r / dist);
    vo.left_boundary = rotated(vo.axis, vo.half_angle);
    vo.right_boundary = rotated(vo.axis, -vo.half_angle);
    return vo;
}

VOEvaluation evaluate_vo(const VOGeometry& vo, const Vec2& velocity) {
    VOEvaluation ev;
    ev.point = velocity;
    const Vec2 w = velocity - vo.apex;
    const double wn = w.norm();
    if (wn == 0.0) return ev;  // apex itself: boundary, counts as outside
    // Strict interior: angle to the axis strictly below the half-angle.
    const double cos_angle = w.dot(vo.axis) / wn;
    if (!(cos_angle > std::cos(vo.half_angle))) return ev;
    ev.inside = true;
    ev.d_op = wn;
    ev.d_bp = std::min(point_to_ray(w, vo.left_boundary), point_to_ray(w, vo.right_boundary));
    return ev;
}

bool collision_oracle(const AgentDisc& agent, const AgentDisc& obstacle, double horizon,
                      int steps) {
    if (horizon <= 0.0) throw std::invalid_argument("collision_oracle: horizon must be > 0");
    if (steps < 1) throw std::invalid_argument("collision_oracle: steps must be >= 1");
    const double r = agent.radius + obstacle.radius;
    for (int k = 0; k <= steps; ++k) {
        const double t = horizon * static_cast<double>(k) / static_cast<double>(steps);
        const Vec2 pa = agent.position + t * agent.velocity;
        const Vec2 pb = obstacle.position + t * obstacle.velocity;
        if ((pb - pa).norm() < r) return true;
    }
    return false;
}

std::optional<std::size_t> closest_obstacle(const AgentDisc& agent,
                                            const std::vector<AgentDisc>& others) {
    if (others.empty()) return std::nullopt;
    std::size_t best = 0;
    double best_d = (others[0].position - agent.position).norm();
    for (std::size_t i = 1; i < others.size(); ++i) {
        const double d = (others[i].position - agent.position).norm();
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

RiskSample risk(const AgentDisc& agent, const std::vector<AgentDisc>& others) {
    check_finite(agent, "risk");
    RiskSample out;
    out.v_a = agent.velocity.norm();
    if (const auto idx = closest_obstacle(agent, others)) {
        AgentDisc obstacle = others[*idx];
        check_finite(obstacle, "risk");
        const double r = agent.radius + obstacle.radius;
        const Vec2 rel = obstacle.position - agent.position;
        const double dist = rel.norm();
        const double clamped = r * (1.0 + 1e-6);
        if (dist <= clamped) {
            // Collision in progress: push the center just outside the
            // combined radius so the cone stays defined.
            const Vec2 dir = dist > 0.0 ? Vec2(rel / dist) : Vec2(1.0, 0.0);
            obstacle.position = agent.position + clamped * dir;
        }
        const VOGeometry vo = build_vo(agent, obstacle);
        const VOEvaluation ev = evaluate_vo(vo, agent.velocity);
        if (ev.inside) {
            out.d_op = ev.d_op;
            out.d_bp = ev.d_bp;
        }
    }
    out.risk = risk_value(out.d_op, out.d_bp, out.v_a);
    return out;
}

}  // namespace hsi
