#include "roam/dynamics.hpp"

#include "roam/rotation_algebra.hpp"

#include <cmath>

namespace roam {

namespace {

Vector spiral_center(const SpiralDynamics& s, double t) {
    Vector c = s.center;
    if (s.motion) {
        c(s.motion->axis) += s.motion->amplitude * std::sin(s.motion->omega * t);
    }
    return c;
}

Vector limit_cycle_field(const Vector& rel, double radius) {
    Vector out(2);
    out(0) = rel(1) + 2.0 * (radius - rel.norm()) * rel(0);
    out(1) = -rel(0) + 2.0 * (radius - rel.norm()) * rel(1);
    return out;
}

}  // namespace

DynamicsSpec::DynamicsSpec(DynamicsKind kind, double v_max)
    : kind_(std::move(kind)), v_max_(v_max) {
    if (v_max_ <= 0.0) throw ScenarioError("speed cap must be positive");
    if (const auto* s = std::get_if<SpiralDynamics>(&kind_)) {
        if (s->basis.rows() != 2 || s->basis.cols() != 3) {
            throw ScenarioError("spiral dynamics need a 2x3 projection basis");
        }
    }
}

int DynamicsSpec::dimension() const {
    return std::visit(
        [](const auto& k) -> int {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, StraightDynamics>) return static_cast<int>(k.attractor.size());
            else if constexpr (std::is_same_v<T, LinearMatrixDynamics>) return static_cast<int>(k.attractor.size());
            else if constexpr (std::is_same_v<T, LimitCycleDynamics>) return 2;
            else if constexpr (std::is_same_v<T, SpiralDynamics>) return 3;
            else if constexpr (std::is_same_v<T, WavyDynamics>) return 2;
            else if constexpr (std::is_same_v<T, LineFollowingDynamics>) return 2;
            else if constexpr (std::is_same_v<T, LocalPathFollowing>) return static_cast<int>(k.segments.front().attractor.size());
            else return static_cast<int>(k.attractor.size());
        },
        kind_);
}

Vector local_pf_field(const PathSegment& segment, const Vector& xi) {
    const Vector delta = xi - segment.attractor;
    return segment.direction.vec() + delta.dot(segment.direction.vec()) * segment.direction.vec() -
           delta;
}

double segment_distance(const PathSegment& segment, const Vector& xi) {
    const Vector start = segment.attractor - segment.length * segment.direction.vec();
    const Vector delta = xi - start;
    const double along = std::clamp(delta.dot(segment.direction.vec()), 0.0, segment.length);
    return (xi - (start + along * segment.direction.vec())).norm();
}

UnitVector global_pf_direction(const GlobalPathFollowing& pf, const Vector& xi) {
    const Vector to_goal = pf.attractor - xi;
    if (to_goal.norm() < 1e-12) {
        throw RoamError("global path following is undefined at the attractor");
    }
    RotationTree tree;
    tree.add_node(0, UnitVector(to_goal));

    std::map<int, double> weights;
    double total = 0.0;
    int prev_nominal = 0;
    for (std::size_t s = 0; s < pf.segments.size(); ++s) {
        const PathSegment& seg = pf.segments[s];
        const int nominal_id = static_cast<int>(2 * s + 1);
        const int field_id = static_cast<int>(2 * s + 2);
        tree.add_node(nominal_id, seg.direction, prev_nominal);
        Vector field = local_pf_field(seg, xi);
        tree.add_node(field_id, UnitVector(field), nominal_id);
        weights[nominal_id] = 0.0;

        const double d = segment_distance(seg, xi);
        // Fades out within one length unit past the segment's local attractor.
        const double fade = 1.0 + std::min(seg.direction.vec().dot(seg.attractor - xi), 0.0);
        double w = 0.0;
        if (d < 1e-9) {
            w = 1.0;
        } else {
            w = std::min(1.0, (1.0 / d) * std::max(fade, 0.0));
        }
        weights[field_id] = w;
        total += w;
        prev_nominal = nominal_id;
    }
    if (total > 1.0) {
        for (auto& [id, w] : weights) w /= total;
        total = 1.0;
    }
    weights[0] = 1.0 - total;
    return reduce_tree(tree, weights);
}

Vector DynamicsSpec::evaluate(const Vector& xi, double t) const {
    Vector out = std::visit(
        [&](const auto& k) -> Vector {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, StraightDynamics>) {
                return k.scaling * (k.attractor - xi);
            } else if constexpr (std::is_same_v<T, LinearMatrixDynamics>) {
                return k.matrix * (xi - k.attractor);
            } else if constexpr (std::is_same_v<T, LimitCycleDynamics>) {
                return limit_cycle_field(xi - k.center, k.radius);
            } else if constexpr (std::is_same_v<T, SpiralDynamics>) {
                const Vector center = spiral_center(k, t);
                const Vector rel = xi - center;
                const Vector planar = k.basis * rel;
                const Vector planar_vel = limit_cycle_field(planar, k.radius);
                Vector out3 = k.basis.transpose() * planar_vel;
                if (k.perpendicular) {
                    out3 += *k.perpendicular;
                } else {
                    // Attract along the direction orthogonal to the spiral plane.
                    const Vector off_plane =
                        rel - k.basis.transpose() * (k.basis * rel);
                    out3 -= off_plane;
                }
                return out3;
            } else if constexpr (std::is_same_v<T, WavyDynamics>) {
                const Vector delta = k.attractor - xi;
                const double angle = std::sin(delta.norm());
                Vector out2(2);
                out2(0) = std::cos(angle) * delta(0) - std::sin(angle) * delta(1);
                out2(1) = std::sin(angle) * delta(0) + std::cos(angle) * delta(1);
                return out2;
            } else if constexpr (std::is_same_v<T, LineFollowingDynamics>) {
                Vector out2(2);
                out2 << 1.0, -xi(1);
                return out2;
            } else if constexpr (std::is_same_v<T, LocalPathFollowing>) {
                // Active segment: the closest one; switching happens on the
                // equidistance lines between segments.
                const PathSegment* best = &k.segments.front();
                double best_d = segment_distance(*best, xi);
                for (const auto& seg : k.segments) {
                    const double d = segment_distance(seg, xi);
                    if (d < best_d) {
                        best_d = d;
                        best = &seg;
                    }
                }
                return local_pf_field(*best, xi);
            } else {  // GlobalPathFollowing
                const Vector to_goal = k.attractor - xi;
                if (to_goal.norm() < 1e-12) return Vector::Zero(xi.size());
                const UnitVector dir = global_pf_direction(k, xi);
                // Magnitude: weighted blend of the straight-to-goal magnitude
                // and the local fields, capped below.
                double mag = to_goal.norm();
                for (const auto& seg : k.segments) {
                    const double d = segment_distance(seg, xi);
                    if (d < 1.0) {
                        mag = std::max(mag, local_pf_field(seg, xi).norm());
                    }
                }
                return mag * dir.vec();
            }
        },
        kind_);
    const double n = out.norm();
    if (n > v_max_) {
        out *= v_max_ / n;
    }
    return out;
}

std::optional<Vector> DynamicsSpec::attractor(double t) const {
    return std::visit(
        [&](const auto& k) -> std::optional<Vector> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, StraightDynamics>) return k.attractor;
            else if constexpr (std::is_same_v<T, LinearMatrixDynamics>) return k.attractor;
            else if constexpr (std::is_same_v<T, LimitCycleDynamics>) return k.center;
            else if constexpr (std::is_same_v<T, SpiralDynamics>) return spiral_center(k, t);
            else if constexpr (std::is_same_v<T, WavyDynamics>) return k.attractor;
            else if constexpr (std::is_same_v<T, GlobalPathFollowing>) return k.attractor;
            else return std::nullopt;
        },
        kind_);
}

}  // namespace roam
