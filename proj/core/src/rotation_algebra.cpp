#include "roam/rotation_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace roam {

VectorRotation weighted_sum_shared_base(const UnitVector& b_i,
                                        const std::vector<SharedBaseTerm>& terms) {
    Vector sum = Vector::Zero(b_i.size());
    for (const auto& t : terms) {
        sum += t.weight * t.beta * t.b_o.vec();
    }
    const double beta_hat = sum.norm();
    if (beta_hat < 1e-12) {
        return VectorRotation{b_i, UnitVector(complete_basis(b_i).col(1)), 0.0};
    }
    return VectorRotation{b_i, UnitVector(sum / beta_hat), beta_hat};
}

UnitVector rotational_sum(const UnitVector& v0, const std::vector<WeightedDirection>& terms) {
    if (terms.empty()) {
        return v0;
    }
    std::vector<SharedBaseTerm> shared;
    shared.reserve(terms.size());
    for (const auto& t : terms) {
        VectorRotation rot = rotation_from_pair(v0, t.direction);
        shared.push_back(SharedBaseTerm{rot.b_o, rot.beta, t.weight});
    }
    const VectorRotation avg = weighted_sum_shared_base(v0, shared);
    if (avg.beta < 1e-15) {
        return v0;
    }
    return UnitVector(apply_rotation(avg, v0.vec(), avg.beta));
}

VectorRotation weighted_sequence(const std::vector<VectorRotation>& chain,
                                 const std::vector<double>& weights) {
    if (chain.empty() || chain.size() != weights.size()) {
        throw IncompatibleChainError();
    }
    for (std::size_t n = 0; n + 1 < chain.size(); ++n) {
        if ((chain[n].b_o.vec() - chain[n + 1].b_i.vec()).norm() > 1e-6) {
            throw IncompatibleChainError();
        }
    }

    std::vector<VectorRotation> adapted = chain;
    // Counter-rotate downstream bases by the un-applied part of each element.
    for (std::size_t n = 0; n + 1 < adapted.size(); ++n) {
        const double deficit = (weights[n] - 1.0) * adapted[n].beta;
        if (std::abs(deficit) < 1e-15) continue;
        for (std::size_t c = n + 1; c < adapted.size(); ++c) {
            adapted[c].b_i = UnitVector(apply_rotation(adapted[n], adapted[c].b_i.vec(), deficit));
            adapted[c].b_o = UnitVector(apply_rotation(adapted[n], adapted[c].b_o.vec(), deficit));
        }
    }

    Vector endpoint = chain.front().b_i.vec();
    for (std::size_t n = 0; n < adapted.size(); ++n) {
        endpoint = apply_rotation(adapted[n], endpoint, weights[n] * adapted[n].beta);
    }
    return rotation_from_pair(chain.front().b_i, UnitVector(endpoint));
}

void RotationTree::add_node(int id, const UnitVector& direction, std::optional<int> parent_id) {
    if (contains(id)) {
        throw RoamError("duplicate rotation-tree node id");
    }
    int lvl = 0;
    if (parent_id) {
        auto it = index_.find(*parent_id);
        if (it == index_.end()) {
            throw RoamError("rotation-tree parent must be added before its children");
        }
        const Node& p = nodes_[it->second];
        if (p.direction.dot(direction) <= -1.0 + kAntiCollinearTol) {
            throw AntiCollinearError();
        }
        lvl = p.level + 1;
        if (lvl >= kMaxLevels) {
            throw RoamError("rotation tree exceeds the supported depth");
        }
    } else if (!nodes_.empty()) {
        throw RoamError("rotation tree must have exactly one root");
    }
    index_[id] = nodes_.size();
    nodes_.push_back(Node{id, parent_id, direction, lvl});
}

const UnitVector& RotationTree::direction(int id) const {
    return nodes_[index_.at(id)].direction;
}

std::optional<int> RotationTree::parent(int id) const {
    return nodes_[index_.at(id)].parent;
}

int RotationTree::level(int id) const {
    return nodes_[index_.at(id)].level;
}

std::vector<int> RotationTree::ids() const {
    std::vector<int> out;
    out.reserve(nodes_.size());
    for (const auto& [id, idx] : index_) out.push_back(id);
    return out;
}

UnitVector reduce_tree(const RotationTree& tree, const std::map<int, double>& weights) {
    if (tree.size() == 0) {
        throw RoamError("cannot reduce an empty rotation tree");
    }
    double total = 0.0;
    for (const auto& node : tree.nodes_) {
        auto it = weights.find(node.id);
        const double w = it == weights.end() ? 0.0 : it->second;
        if (w < -1e-12 || w > 1.0 + 1e-12) {
            throw WeightSumInvalidError("rotation-tree weights must lie in [0, 1]");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw WeightSumInvalidError("rotation-tree weights must sum to one");
    }

    // Scratch copy: cumulative subtree weights, accumulated leaf-to-root.
    std::map<int, double> cumulative;
    int max_level = 0;
    for (const auto& node : tree.nodes_) {
        auto it = weights.find(node.id);
        cumulative[node.id] = it == weights.end() ? 0.0 : it->second;
        max_level = std::max(max_level, node.level);
    }
    for (int level = max_level; level >= 1; --level) {
        for (const auto& node : tree.nodes_) {
            if (node.level == level) {
                cumulative[*node.parent] += cumulative[node.id];
            }
        }
    }

    std::map<int, Vector> current;
    int root_id = 0;
    for (const auto& node : tree.nodes_) {
        current[node.id] = node.direction.vec();
        if (!node.parent) root_id = node.id;
    }

    // Descendants sorted by id for a deterministic reduction order.
    auto descendants_of = [&](int id) {
        std::vector<int> out;
        for (const auto& [cand, dir] : current) {
            int walk = cand;
            while (auto p = tree.parent(walk)) {
                if (*p == id) {
                    out.push_back(cand);
                    break;
                }
                walk = *p;
            }
        }
        return out;
    };

    UnitVector running(current[root_id]);
    for (int level = 1; level <= max_level; ++level) {
        std::vector<int> level_ids;
        for (const auto& [id, dir] : current) {
            if (tree.level(id) == level) level_ids.push_back(id);
        }
        std::vector<WeightedDirection> terms;
        terms.reserve(level_ids.size());
        for (int id : level_ids) {
            terms.push_back(WeightedDirection{cumulative[id], UnitVector(current[id])});
        }
        UnitVector next = rotational_sum(running, terms);

        // Carry each subtree with the motion of its level anchor.
        for (int id : level_ids) {
            const UnitVector anchor(current[id]);
            if (std::abs(anchor.dot(next) - 1.0) < 1e-15) continue;
            const VectorRotation carry = rotation_from_pair(anchor, next);
            if (carry.beta < 1e-15) continue;
            for (int d : descendants_of(id)) {
                current[d] = apply_rotation(carry, current[d], carry.beta);
            }
        }
        running = next;
    }
    return running;
}

}  // namespace roam
