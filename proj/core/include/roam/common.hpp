#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace roam {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Dot-product tolerance below which two unit vectors are treated as
// anti-collinear and direction-space operations are rejected.
inline constexpr double kAntiCollinearTol = 1e-6;

struct RoamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AntiCollinearError : RoamError {
    AntiCollinearError() : RoamError("vectors are anti-collinear, mapping is not unique") {}
};

struct AtReferencePointError : RoamError {
    AtReferencePointError() : RoamError("query coincides with the obstacle reference point") {}
};

struct AtAttractorError : RoamError {
    AtAttractorError() : RoamError("query coincides with the attractor") {}
};

struct FoldSingularityError : RoamError {
    FoldSingularityError() : RoamError("point lies on the folding singularity ray") {}
};

struct DegenerateSaddleError : RoamError {
    DegenerateSaddleError() : RoamError("convergence direction coincides with the reference direction") {}
};

struct IncompatibleChainError : RoamError {
    IncompatibleChainError() : RoamError("rotation chain is not compatible") {}
};

struct WeightSumInvalidError : RoamError {
    using RoamError::RoamError;
};

struct DegenerateRayError : RoamError {
    using RoamError::RoamError;
};

struct AllBoundariesViolatedError : RoamError {
    AllBoundariesViolatedError() : RoamError("position is outside every boundary hull") {}
};

struct ScenarioError : RoamError {
    using RoamError::RoamError;
};

}  // namespace roam
