#pragma once

#include "roam/direction_space.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace roam {

struct Ellipse {
    Vector center;
    Vector semi_axes;
    Matrix orientation;  // N x N rotation; identity when defaulted
};

struct Sphere {
    Vector center;
    double radius = 1.0;
};

// 2D star polygon, vertices counter-clockwise. The reference point must lie
// in the kernel (every vertex visible along an interior segment).
struct StarPolygon2D {
    std::vector<Vector> vertices;
};

using ObstacleShape = std::variant<Ellipse, Sphere, StarPolygon2D>;

// ROAM frame at a query point. For both standard and inverted obstacles the
// pair (normal, r_in) satisfies <n, r_in> < 0, which the tangent and weight
// formulas rely on. `reference` is the reference direction in the obstacle's
// own convention (flipped for inverted obstacles).
struct ObstacleDirections {
    UnitVector normal;
    UnitVector reference;
    UnitVector r_in;
};

class Obstacle {
  public:
    struct Config {
        ObstacleShape shape;
        std::optional<Vector> reference_point;  // defaults to center / centroid
        double gamma_scaling = 1.0;             // d0
        double margin = 0.0;
        bool inverted = false;
        std::optional<double> influence_radius;  // d_max, standard obstacles only
        std::optional<Vector> linear_velocity;
        std::string id;
    };

    explicit Obstacle(Config config);

    Eigen::Index dimension() const { return reference_.size(); }
    const Vector& reference_point() const { return reference_; }
    bool inverted() const { return config_.inverted; }
    double margin() const { return config_.margin; }
    const std::string& id() const { return config_.id; }
    const Vector& linear_velocity() const { return velocity_; }
    void set_linear_velocity(const Vector& v) { velocity_ = v; }
    std::optional<double> influence_radius() const { return config_.influence_radius; }
    void set_influence_radius(std::optional<double> r) { config_.influence_radius = r; }
    const ObstacleShape& shape() const { return config_.shape; }

    // Largest shape extent; used for root-find brackets and influence defaults.
    double diameter() const { return diameter_; }

    // Distance along the ray from the reference point in unit direction `dir`
    // to the (margin-inflated) boundary.
    double boundary_radius(const UnitVector& dir) const;

    // Distance field: 1 on the boundary, > 1 in free space, < 1 in the
    // obstacle interior. Inverted obstacles use (R/d)^2 and are undefined at
    // the reference point.
    double gamma(const Vector& xi) const;

    ObstacleDirections directions(const Vector& xi) const;

    // Boundary point on the ray from the reference point through xi.
    Vector boundary_point(const Vector& xi) const;

    // Moves the whole obstacle (used for dynamic scenes).
    void translate(const Vector& delta);

  private:
    UnitVector shape_normal(const Vector& xi) const;

    Config config_;
    Vector reference_;
    Vector velocity_;
    double diameter_ = 0.0;
};

struct ObstacleTree {
    std::vector<Obstacle> components;
    // Parent index per component; exactly one root (no parent).
    std::vector<std::optional<std::size_t>> parents;

    std::size_t root() const;
    std::vector<std::size_t> path_to_root(std::size_t component) const;
    int level(std::size_t component) const;
};

// Structural and geometric checks from the tree-of-stars preconditions.
// Returns human-readable violations; empty means the tree is valid.
std::vector<std::string> validate_tree(const ObstacleTree& tree);

}  // namespace roam
