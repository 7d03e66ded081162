#pragma once

#include "roam/common.hpp"

namespace roam {

// Unit-length direction in R^N. The constructor normalizes; a zero vector is
// rejected.
class UnitVector {
  public:
    explicit UnitVector(Vector v);

    const Vector& vec() const { return v_; }
    Eigen::Index size() const { return v_.size(); }
    double dot(const UnitVector& other) const { return v_.dot(other.v_); }

  private:
    Vector v_;
};

// Direction-space image kappa in R^(N-1). Forward images satisfy |kappa| < pi;
// intermediate sums and line intersections may exceed pi, but the inverse map
// is only bijective below pi.
using DirectionPoint = Vector;

// Orthonormal N x N basis whose first column is the anchor direction.
using OrthonormalBasis = Matrix;

// Plane rotation spanned by the orthonormal pair (b_i, b_o) with angle beta.
struct VectorRotation {
    UnitVector b_i;
    UnitVector b_o;
    double beta = 0.0;
};

// Deterministic orthonormal completion: the standard axis least aligned with b
// is orthogonalized as second column, remaining axes follow by sequential
// orthogonalization; the last column sign is fixed so det = +1.
OrthonormalBasis complete_basis(const UnitVector& b);

// kappa = k(b, v): magnitude equals the angle between b and v, components are
// the direction of v in the non-anchor columns of complete_basis(b).
// Throws AntiCollinearError when <b, v> <= -1 + kAntiCollinearTol.
DirectionPoint to_direction_space(const UnitVector& b, const UnitVector& v);

// Inverse map k_bar(b, kappa). kappa = 0 yields b. Values with |kappa| >= pi
// are evaluated directly but are outside the bijective range.
UnitVector from_direction_space(const UnitVector& b, const DirectionPoint& kappa);

// Rotation taking v_i to v_o: b_i = v_i, b_o is the normalized Gram-Schmidt
// residual of v_o, beta = arccos<v_i, v_o>. For beta = 0 the (inactive) b_o is
// taken from complete_basis(v_i).
VectorRotation rotation_from_pair(const UnitVector& v_i, const UnitVector& v_o);

// Rotates v by `angle` in the plane of rot, conserving the orthogonal part.
// v need not be unit; partial rotation and over-rotation are permitted.
Vector apply_rotation(const VectorRotation& rot, const Vector& v, double angle);

}  // namespace roam
