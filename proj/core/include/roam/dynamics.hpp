#pragma once

#include "roam/direction_space.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace roam {

struct StraightDynamics {
    Vector attractor;
    double scaling = 1.0;  // q(xi), constant
};

struct LinearMatrixDynamics {
    Matrix matrix;
    Vector attractor;
};

struct LimitCycleDynamics {
    double radius = 2.0;
    Vector center;
};

// Sinusoidal attractor motion along one axis: base + amplitude sin(omega t) e_axis.
struct AttractorMotion {
    int axis = 1;
    double amplitude = 0.0;
    double omega = 0.0;
};

// 3D spiral: limit-cycle rotation in the plane picked out by the 2x3 basis,
// plus a perpendicular drift (constant, or attraction along the off-plane axis).
struct SpiralDynamics {
    double radius = 0.1;
    Vector center;
    Matrix basis;  // 2 x 3
    std::optional<Vector> perpendicular;  // constant drift; attraction along the
                                          // off-plane axis when absent
    std::optional<AttractorMotion> motion;
};

struct WavyDynamics {
    Vector attractor;
};

struct LineFollowingDynamics {};

struct PathSegment {
    Vector attractor;      // local attractor at the goal end of the segment
    UnitVector direction;  // nominal direction u_s along the segment
    double length = 1.0;
};

struct LocalPathFollowing {
    std::vector<PathSegment> segments;
};

struct GlobalPathFollowing {
    std::vector<PathSegment> segments;
    Vector attractor;
};

using DynamicsKind = std::variant<StraightDynamics, LinearMatrixDynamics, LimitCycleDynamics,
                                  SpiralDynamics, WavyDynamics, LineFollowingDynamics,
                                  LocalPathFollowing, GlobalPathFollowing>;

class DynamicsSpec {
  public:
    explicit DynamicsSpec(DynamicsKind kind, double v_max = 10.0);

    // f(xi) with the magnitude saturated at v_max. t only matters for
    // time-varying kinds (moving spiral attractor).
    Vector evaluate(const Vector& xi, double t = 0.0) const;

    // Directional singularity point, when the field has exactly one.
    std::optional<Vector> attractor(double t = 0.0) const;

    double v_max() const { return v_max_; }
    const DynamicsKind& kind() const { return kind_; }
    int dimension() const;

  private:
    DynamicsKind kind_;
    double v_max_;
};

// Local path-following field of one segment (Results section form).
Vector local_pf_field(const PathSegment& segment, const Vector& xi);

// Distance from xi to the segment (the attractor is the segment's end point).
double segment_distance(const PathSegment& segment, const Vector& xi);

// Direction-tree averaged global path following: nominal directions chained
// from the root (toward the attractor), each carrying its local PF field.
UnitVector global_pf_direction(const GlobalPathFollowing& pf, const Vector& xi);

}  // namespace roam
