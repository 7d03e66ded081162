#include "roam/direction_space.hpp"

#include <cmath>

namespace roam {

namespace {
constexpr double kDegenerateNorm = 1e-12;

double clamped_acos(double d) {
    return std::acos(std::clamp(d, -1.0, 1.0));
}
}  // namespace

UnitVector::UnitVector(Vector v) : v_(std::move(v)) {
    const double n = v_.norm();
    if (!(n > kDegenerateNorm)) {
        throw RoamError("cannot normalize a zero-length vector");
    }
    v_ /= n;
}

OrthonormalBasis complete_basis(const UnitVector& b) {
    const Eigen::Index n = b.size();
    Matrix basis(n, n);
    basis.col(0) = b.vec();

    Eigen::Index least_aligned = 0;
    b.vec().cwiseAbs().minCoeff(&least_aligned);

    Eigen::Index filled = 1;
    auto try_axis = [&](Eigen::Index axis) {
        if (filled == n) return;
        Vector r = Vector::Zero(n);
        r(axis) = 1.0;
        // Orthogonalize twice against the accumulated columns.
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index c = 0; c < filled; ++c) {
                r -= basis.col(c).dot(r) * basis.col(c);
            }
        }
        const double rn = r.norm();
        if (rn > 1e-7) {
            basis.col(filled++) = r / rn;
        }
    };

    try_axis(least_aligned);
    for (Eigen::Index axis = 0; axis < n; ++axis) {
        if (axis != least_aligned) try_axis(axis);
    }
    if (filled != n) {
        throw RoamError("basis completion failed");
    }
    if (n > 1 && basis.determinant() < 0.0) {
        basis.col(n - 1) *= -1.0;
    }
    return basis;
}

DirectionPoint to_direction_space(const UnitVector& b, const UnitVector& v) {
    const double d = b.dot(v);
    if (d <= -1.0 + kAntiCollinearTol) {
        throw AntiCollinearError();
    }
    const OrthonormalBasis basis = complete_basis(b);
    const Vector v_hat = basis.transpose() * v.vec();
    const Eigen::Index n = b.size();
    Vector tail = v_hat.tail(n - 1);
    const double tail_norm = tail.norm();
    if (tail_norm < kDegenerateNorm) {
        return Vector::Zero(n - 1);
    }
    return clamped_acos(v_hat(0)) / tail_norm * tail;
}

UnitVector from_direction_space(const UnitVector& b, const DirectionPoint& kappa) {
    const double angle = kappa.norm();
    if (angle < kDegenerateNorm) {
        return b;
    }
    const OrthonormalBasis basis = complete_basis(b);
    const Eigen::Index n = b.size();
    Vector local(n);
    local(0) = std::cos(angle);
    local.tail(n - 1) = std::sin(angle) / angle * kappa;
    return UnitVector(basis * local);
}

VectorRotation rotation_from_pair(const UnitVector& v_i, const UnitVector& v_o) {
    const double d = v_i.dot(v_o);
    if (d <= -1.0 + kAntiCollinearTol) {
        throw AntiCollinearError();
    }
    const double beta = clamped_acos(d);
    Vector residual = v_o.vec() - d * v_i.vec();
    const double rn = residual.norm();
    if (rn < 1e-9) {
        // beta ~ 0; the output base never contributes but must stay orthonormal.
        return VectorRotation{v_i, UnitVector(complete_basis(v_i).col(1)), beta};
    }
    return VectorRotation{v_i, UnitVector(residual / rn), beta};
}

Vector apply_rotation(const VectorRotation& rot, const Vector& v, double angle) {
    const double c_i = rot.b_i.vec().dot(v);
    const double c_o = rot.b_o.vec().dot(v);
    const double p0 = std::hypot(c_i, c_o);
    if (p0 < kDegenerateNorm) {
        return v;
    }
    const double phi = std::atan2(c_o, c_i) + angle;
    return v - c_i * rot.b_i.vec() - c_o * rot.b_o.vec() +
           p0 * std::cos(phi) * rot.b_i.vec() + p0 * std::sin(phi) * rot.b_o.vec();
}

}  // namespace roam
