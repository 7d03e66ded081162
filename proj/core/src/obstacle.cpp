#include "roam/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace roam {

namespace {

constexpr double kTinyDistance = 1e-12;

Vector shape_center(const ObstacleShape& shape) {
    if (const auto* e = std::get_if<Ellipse>(&shape)) return e->center;
    if (const auto* s = std::get_if<Sphere>(&shape)) return s->center;
    const auto& poly = std::get<StarPolygon2D>(shape);
    Vector c = Vector::Zero(2);
    for (const auto& v : poly.vertices) c += v;
    return c / static_cast<double>(poly.vertices.size());
}

double polygon_cross(const Vector& a, const Vector& b) {
    return a(0) * b(1) - a(1) * b(0);
}

bool polygon_is_ccw(const std::vector<Vector>& verts) {
    double area2 = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const Vector& a = verts[i];
        const Vector& b = verts[(i + 1) % verts.size()];
        area2 += polygon_cross(a, b);
    }
    return area2 > 0.0;
}

bool point_in_kernel(const std::vector<Vector>& ccw_verts, const Vector& p) {
    for (std::size_t i = 0; i < ccw_verts.size(); ++i) {
        const Vector& a = ccw_verts[i];
        const Vector& b = ccw_verts[(i + 1) % ccw_verts.size()];
        if (polygon_cross(b - a, p - a) < -1e-12) return false;
    }
    return true;
}

}  // namespace

Obstacle::Obstacle(Config config) : config_(std::move(config)), reference_(0), velocity_(0) {
    if (auto* poly = std::get_if<StarPolygon2D>(&config_.shape)) {
        if (poly->vertices.size() < 3) {
            throw ScenarioError("star polygon needs at least 3 vertices");
        }
        if (!polygon_is_ccw(poly->vertices)) {
            std::reverse(poly->vertices.begin(), poly->vertices.end());
        }
    }

    reference_ = config_.reference_point ? *config_.reference_point : shape_center(config_.shape);
    velocity_ = config_.linear_velocity ? *config_.linear_velocity
                                        : Vector::Zero(reference_.size());

    if (const auto* e = std::get_if<Ellipse>(&config_.shape)) {
        if (e->semi_axes.minCoeff() <= 0.0) throw ScenarioError("ellipse semi-axes must be positive");
        if (e->orientation.rows() != e->center.size() || e->orientation.cols() != e->center.size()) {
            throw ScenarioError("ellipse orientation must be a square N x N matrix");
        }
        Vector local = e->orientation.transpose() * (reference_ - e->center);
        if ((local.array() / e->semi_axes.array()).matrix().norm() >= 1.0) {
            throw ScenarioError("reference point must lie inside the ellipse");
        }
        diameter_ = 2.0 * e->semi_axes.maxCoeff();
    } else if (const auto* s = std::get_if<Sphere>(&config_.shape)) {
        if (s->radius <= 0.0) throw ScenarioError("sphere radius must be positive");
        if ((reference_ - s->center).norm() >= s->radius) {
            throw ScenarioError("reference point must lie inside the sphere");
        }
        diameter_ = 2.0 * s->radius;
    } else {
        const auto& poly = std::get<StarPolygon2D>(config_.shape);
        if (!point_in_kernel(poly.vertices, reference_)) {
            throw ScenarioError("reference point must lie in the star-polygon kernel");
        }
        double max_r = 0.0;
        for (const auto& v : poly.vertices) max_r = std::max(max_r, (v - reference_).norm());
        diameter_ = 2.0 * max_r;
    }

    if (config_.gamma_scaling <= 0.0) throw ScenarioError("gamma scaling d0 must be positive");
    if (config_.margin < 0.0) throw ScenarioError("margin must be non-negative");
    if (config_.influence_radius && *config_.influence_radius <= 0.0) {
        throw ScenarioError("influence radius must be positive");
    }
}

double Obstacle::boundary_radius(const UnitVector& dir) const {
    // A margin grows the obstacle region: outward for standard obstacles,
    // inward for inverted hulls.
    const double signed_margin = config_.inverted ? -config_.margin : config_.margin;
    if (const auto* e = std::get_if<Ellipse>(&config_.shape)) {
        // Solve |D^-1 R^T (xi_r + b dir - c)| = 1 for b > 0 (margin on axes).
        const Vector axes = e->semi_axes.array() + signed_margin;
        const Vector u = (e->orientation.transpose() * dir.vec()).array() / axes.array();
        const Vector v = (e->orientation.transpose() * (reference_ - e->center)).array() / axes.array();
        const double a = u.squaredNorm();
        const double b_half = u.dot(v);
        const double c = v.squaredNorm() - 1.0;
        const double disc = b_half * b_half - a * c;
        return (-b_half + std::sqrt(std::max(disc, 0.0))) / a;
    }
    if (const auto* s = std::get_if<Sphere>(&config_.shape)) {
        const double radius = s->radius + signed_margin;
        const Vector v = reference_ - s->center;
        const double b_half = dir.vec().dot(v);
        const double c = v.squaredNorm() - radius * radius;
        const double disc = b_half * b_half - c;
        return -b_half + std::sqrt(std::max(disc, 0.0));
    }
    const auto& poly = std::get<StarPolygon2D>(config_.shape);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        const Vector& a = poly.vertices[i];
        const Vector& b = poly.vertices[(i + 1) % poly.vertices.size()];
        const Vector edge = b - a;
        const double denom = polygon_cross(dir.vec(), edge);
        if (std::abs(denom) < 1e-14) continue;
        const Vector rel = a - reference_;
        const double t = polygon_cross(rel, edge) / denom;
        const double s = polygon_cross(rel, dir.vec()) / denom;
        if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::min(best, t);
    }
    if (!std::isfinite(best)) {
        throw RoamError("star polygon boundary ray intersection failed");
    }
    return best + signed_margin;
}

double Obstacle::gamma(const Vector& xi) const {
    const Vector delta = xi - reference_;
    const double d = delta.norm();
    if (config_.inverted) {
        if (d < kTinyDistance) throw AtReferencePointError();
        const double radius = boundary_radius(UnitVector(delta));
        const double ratio = radius / d;
        return ratio * ratio;
    }
    if (d < kTinyDistance) return 0.0;
    const double radius = boundary_radius(UnitVector(delta));
    if (d < radius) {
        return d / radius;
    }
    if (config_.influence_radius) {
        const double dist = d - radius;
        if (dist >= *config_.influence_radius) {
            return std::numeric_limits<double>::infinity();
        }
        return *config_.influence_radius / (*config_.influence_radius - dist);
    }
    return (d - radius) / config_.gamma_scaling + 1.0;
}

UnitVector Obstacle::shape_normal(const Vector& xi) const {
    if (const auto* e = std::get_if<Ellipse>(&config_.shape)) {
        const Vector axes =
            e->semi_axes.array() + (config_.inverted ? -config_.margin : config_.margin);
        Vector local = e->orientation.transpose() * (xi - e->center);
        Vector grad_local = local.array() / axes.array().square();
        Vector grad = e->orientation * grad_local;
        if (grad.norm() < kTinyDistance) {
            return UnitVector(xi - reference_);
        }
        return UnitVector(grad);
    }
    if (const auto* s = std::get_if<Sphere>(&config_.shape)) {
        Vector grad = xi - s->center;
        if (grad.norm() < kTinyDistance) return UnitVector(xi - reference_);
        return UnitVector(grad);
    }
    // Star polygon: outward normal of the edge hit by the reference ray, with
    // linear rounding across a small angular window around each vertex.
    const auto& poly = std::get<StarPolygon2D>(config_.shape);
    const std::size_t m = poly.vertices.size();
    const Vector delta = xi - reference_;
    const double theta = std::atan2(delta(1), delta(0));

    auto vertex_angle = [&](std::size_t i) {
        const Vector rel = poly.vertices[i] - reference_;
        return std::atan2(rel(1), rel(0));
    };
    auto edge_normal = [&](std::size_t i) {
        const Vector edge = poly.vertices[(i + 1) % m] - poly.vertices[i];
        Vector n(2);
        n << edge(1), -edge(0);  // outward for CCW order
        return n / n.norm();
    };
    auto angle_diff = [](double a, double b) {
        double d = a - b;
        while (d > M_PI) d -= 2.0 * M_PI;
        while (d < -M_PI) d += 2.0 * M_PI;
        return d;
    };

    // Edge whose angular sector contains theta.
    std::size_t sector = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double a0 = vertex_angle(i);
        const double a1 = vertex_angle((i + 1) % m);
        const double span = angle_diff(a1, a0);
        const double off = angle_diff(theta, a0);
        if (span > 0.0 ? (off >= 0.0 && off <= span) : (off <= 0.0 && off >= span)) {
            sector = i;
            break;
        }
    }

    constexpr double kRounding = 1e-3;  // radians
    const double to_start = std::abs(angle_diff(theta, vertex_angle(sector)));
    const double to_end = std::abs(angle_diff(theta, vertex_angle((sector + 1) % m)));
    Vector n = edge_normal(sector);
    if (to_start < kRounding) {
        const double t = 0.5 + 0.5 * (to_start / kRounding);
        n = (t * n + (1.0 - t) * edge_normal((sector + m - 1) % m)).eval();
    } else if (to_end < kRounding) {
        const double t = 0.5 + 0.5 * (to_end / kRounding);
        n = (t * n + (1.0 - t) * edge_normal((sector + 1) % m)).eval();
    }
    return UnitVector(n);
}

ObstacleDirections Obstacle::directions(const Vector& xi) const {
    const Vector delta = xi - reference_;
    if (delta.norm() < kTinyDistance) throw AtReferencePointError();
    const UnitVector r_out(delta);
    const UnitVector r_in(-delta);
    const UnitVector n_shape = shape_normal(xi);
    if (config_.inverted) {
        return ObstacleDirections{UnitVector(-n_shape.vec()), r_in, r_out};
    }
    return ObstacleDirections{n_shape, r_out, r_in};
}

Vector Obstacle::boundary_point(const Vector& xi) const {
    const Vector delta = xi - reference_;
    if (delta.norm() < kTinyDistance) throw AtReferencePointError();
    const UnitVector dir(delta);
    return reference_ + boundary_radius(dir) * dir.vec();
}

void Obstacle::translate(const Vector& delta) {
    reference_ += delta;
    if (auto* e = std::get_if<Ellipse>(&config_.shape)) {
        e->center += delta;
    } else if (auto* s = std::get_if<Sphere>(&config_.shape)) {
        s->center += delta;
    } else {
        auto& poly = std::get<StarPolygon2D>(config_.shape);
        for (auto& v : poly.vertices) v += delta;
    }
}

std::size_t ObstacleTree::root() const {
    for (std::size_t i = 0; i < parents.size(); ++i) {
        if (!parents[i]) return i;
    }
    throw RoamError("obstacle tree has no root");
}

std::vector<std::size_t> ObstacleTree::path_to_root(std::size_t component) const {
    std::vector<std::size_t> path{component};
    std::size_t walk = component;
    while (parents[walk]) {
        walk = *parents[walk];
        path.push_back(walk);
        if (path.size() > components.size()) {
            throw RoamError("obstacle tree contains a cycle");
        }
    }
    return path;
}

int ObstacleTree::level(std::size_t component) const {
    return static_cast<int>(path_to_root(component).size()) - 1;
}

std::vector<std::string> validate_tree(const ObstacleTree& tree) {
    std::vector<std::string> violations;
    auto name = [&](std::size_t i) {
        const std::string& id = tree.components[i].id();
        return id.empty() ? "component " + std::to_string(i) : id;
    };

    if (tree.components.size() != tree.parents.size()) {
        violations.push_back("component/parent list size mismatch");
        return violations;
    }

    std::size_t roots = 0;
    for (const auto& p : tree.parents) {
        if (!p) ++roots;
    }
    if (roots != 1) {
        violations.push_back("tree must have exactly one root, found " + std::to_string(roots));
        return violations;
    }
    for (std::size_t i = 0; i < tree.components.size(); ++i) {
        if (tree.parents[i] && *tree.parents[i] >= tree.components.size()) {
            violations.push_back(name(i) + ": parent index out of range");
            return violations;
        }
        std::size_t walk = i;
        std::size_t hops = 0;
        while (tree.parents[walk]) {
            walk = *tree.parents[walk];
            if (++hops > tree.components.size()) {
                violations.push_back(name(i) + ": cycle in parent chain");
                return violations;
            }
        }
    }

    for (std::size_t i = 0; i < tree.components.size(); ++i) {
        const Obstacle& comp = tree.components[i];
        if (!tree.parents[i]) continue;
        const Obstacle& parent = tree.components[*tree.parents[i]];

        if (parent.gamma(comp.reference_point()) >= 1.0) {
            violations.push_back(name(i) + ": reference point lies outside its parent");
        }
        if (comp.gamma(parent.reference_point()) < 1.0) {
            violations.push_back(name(i) + ": parent reference point lies inside the component");
        }

        // Sampled child-parent intersection check on 64 boundary points.
        bool intersects = false;
        for (int k = 0; k < 64 && !intersects; ++k) {
            const double angle = 2.0 * M_PI * k / 64.0;
            Vector dir = Vector::Zero(comp.dimension());
            dir(0) = std::cos(angle);
            dir(1) = std::sin(angle);
            const Vector pt =
                comp.reference_point() + comp.boundary_radius(UnitVector(dir)) * dir;
            if (parent.gamma(pt) < 1.0) intersects = true;
        }
        if (!intersects) {
            violations.push_back(name(i) + ": no intersection with its parent");
        }

        if (tree.parents[*tree.parents[i]]) {
            const Obstacle& grand = tree.components[*tree.parents[*tree.parents[i]]];
            const Vector a = parent.reference_point() - comp.reference_point();
            const Vector b = grand.reference_point() - parent.reference_point();
            if (a.norm() > 1e-12 && b.norm() > 1e-12 &&
                a.dot(b) / (a.norm() * b.norm()) <= -1.0 + kAntiCollinearTol) {
                violations.push_back(name(i) + ": parent direction opposes the grandparent direction");
            }
        }
    }
    return violations;
}

}  // namespace roam
