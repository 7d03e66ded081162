#pragma once

#include "roam/direction_space.hpp"

#include <map>
#include <optional>
#include <vector>

namespace roam {

struct WeightedRotation {
    VectorRotation rotation;
    double weight = 0.0;  // in [0, 1]
};

// One summand of a shared-base rotation average: output base, angle, weight.
struct SharedBaseTerm {
    UnitVector b_o;
    double beta = 0.0;
    double weight = 0.0;
};

// Weighted average of rotations sharing the input base b_i. The summed angle
// is |sum_v w_v beta_v b_{o,v}|; a zero sum yields the identity rotation with
// a degenerate output base from complete_basis.
VectorRotation weighted_sum_shared_base(const UnitVector& b_i,
                                        const std::vector<SharedBaseTerm>& terms);

struct WeightedDirection {
    double weight = 0.0;
    UnitVector direction;
};

// Rotational sum v0 (+) sum_v w_v v_v: each pair (v0, v_v) becomes a rotation,
// the rotations are averaged in the shared v0 frame and the result is applied
// to v0. Requires sum of weights <= 1 and no v_v anti-collinear to v0.
UnitVector rotational_sum(const UnitVector& v0, const std::vector<WeightedDirection>& terms);

// Weighted rotation sequence: chain elements must satisfy b_{o,n} = b_{i,n+1}
// (within 1e-6, IncompatibleChainError otherwise). Downstream bases are
// counter-rotated by (w_n - 1) beta_n, then the partial rotations w_n beta_n
// are composed onto b_{i,1}; the returned rotation maps b_{i,1} onto the
// weighted endpoint.
VectorRotation weighted_sequence(const std::vector<VectorRotation>& chain,
                                 const std::vector<double>& weights);

// Direction tree: one root, every other node has a single parent. Node-parent
// direction pairs must not be anti-collinear.
class RotationTree {
  public:
    static constexpr int kMaxLevels = 16;

    // Nodes may be added in any order as long as parents are added first.
    void add_node(int id, const UnitVector& direction, std::optional<int> parent_id = std::nullopt);

    bool contains(int id) const { return index_.count(id) != 0; }
    std::size_t size() const { return nodes_.size(); }
    const UnitVector& direction(int id) const;
    std::optional<int> parent(int id) const;
    int level(int id) const;
    std::vector<int> ids() const;

  private:
    struct Node {
        int id;
        std::optional<int> parent;
        UnitVector direction;
        int level;
    };
    std::vector<Node> nodes_;
    std::map<int, std::size_t> index_;

    friend UnitVector reduce_tree(const RotationTree&, const std::map<int, double>&);
};

// Two-pass weighted tree reduction: cumulative weights are accumulated from
// the leaves, then levels are averaged against the running direction with the
// subtrees carried along. Weights must lie in [0, 1] and sum to 1 (1e-9).
UnitVector reduce_tree(const RotationTree& tree, const std::map<int, double>& weights);

}  // namespace roam
