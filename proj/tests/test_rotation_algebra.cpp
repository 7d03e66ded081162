#include <doctest.h>

#include <roam/rotation_algebra.hpp>

#include "test_helpers.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <vector>

using namespace roam;
using namespace roam_test;

namespace {

// Hand-composed evaluation of a weighted direction tree: cumulative weights
// via recursive subtree sums, per-level averaging through
// weighted_sum_shared_base, subtree carry through apply_rotation. Kept free of
// RotationTree/reduce_tree so it can serve as an independent oracle.
struct OracleNode {
    int id;
    int parent;  // -1 for root
    UnitVector direction;
};

Vector oracle_reduce(const std::vector<OracleNode>& nodes, std::map<int, double> weights) {
    std::function<double(int)> subtree_weight = [&](int id) {
        double w = weights.at(id);
        for (const auto& n : nodes) {
            if (n.parent == id) w += subtree_weight(n.id);
        }
        return w;
    };
    std::function<int(int)> depth = [&](int id) {
        for (const auto& n : nodes) {
            if (n.id == id) return n.parent < 0 ? 0 : 1 + depth(n.parent);
        }
        return -1;
    };
    std::function<bool(int, int)> is_descendant = [&](int id, int ancestor) {
        for (const auto& n : nodes) {
            if (n.id != id) continue;
            if (n.parent < 0) return false;
            return n.parent == ancestor || is_descendant(n.parent, ancestor);
        }
        return false;
    };

    std::map<int, Vector> dirs;
    int max_depth = 0;
    Vector running;
    for (const auto& n : nodes) {
        dirs[n.id] = n.direction.vec();
        max_depth = std::max(max_depth, depth(n.id));
        if (n.parent < 0) running = n.direction.vec();
    }

    for (int level = 1; level <= max_depth; ++level) {
        const UnitVector anchor_before{running};
        std::vector<SharedBaseTerm> terms;
        std::vector<int> level_ids;
        for (const auto& n : nodes) {
            if (depth(n.id) != level) continue;
            level_ids.push_back(n.id);
            VectorRotation rot = rotation_from_pair(anchor_before, UnitVector(dirs[n.id]));
            terms.push_back(SharedBaseTerm{rot.b_o, rot.beta, subtree_weight(n.id)});
        }
        VectorRotation avg = weighted_sum_shared_base(anchor_before, terms);
        Vector next = apply_rotation(avg, running, avg.beta);
        for (int id : level_ids) {
            const UnitVector pre{dirs[id]};
            VectorRotation carry = rotation_from_pair(pre, UnitVector(next));
            for (const auto& n : nodes) {
                if (is_descendant(n.id, id)) {
                    dirs[n.id] = apply_rotation(carry, dirs[n.id], carry.beta);
                }
            }
        }
        running = next;
    }
    return running;
}

}  // namespace

TEST_CASE("weighted_sum_shared_base: single term, zero weights, cancellation") {
    UnitVector b_i = axis(3, 0);
    VectorRotation single =
        weighted_sum_shared_base(b_i, {SharedBaseTerm{axis(3, 1), M_PI / 3, 1.0}});
    CHECK(single.beta == doctest::Approx(M_PI / 3));
    CHECK((single.b_o.vec() - axis(3, 1).vec()).norm() < 1e-12);

    VectorRotation zero = weighted_sum_shared_base(
        b_i, {SharedBaseTerm{axis(3, 1), M_PI / 3, 0.0}, SharedBaseTerm{axis(3, 2), 0.5, 0.0}});
    CHECK(zero.beta == doctest::Approx(0.0));

    VectorRotation cancel = weighted_sum_shared_base(
        b_i, {SharedBaseTerm{axis(3, 1), M_PI / 3, 0.5}, SharedBaseTerm{axis(3, 1, -1.0), M_PI / 3, 0.5}});
    CHECK(cancel.beta == doctest::Approx(0.0));
}

TEST_CASE("rotational_sum: empty, full weight, symmetric cancellation") {
    UnitVector v0 = axis(3, 0);
    CHECK((rotational_sum(v0, {}).vec() - v0.vec()).norm() == doctest::Approx(0.0));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        UnitVector v1 = random_unit(rng, 3);
        if (v0.dot(v1) <= -1.0 + 1e-6) continue;
        UnitVector res = rotational_sum(v0, {WeightedDirection{1.0, v1}});
        CHECK((res.vec() - v1.vec()).norm() < 1e-9);
    }

    // Two symmetric terms about v0 at equal angle and weight cancel out.
    const double angle = 0.9;
    UnitVector up(vec3(std::cos(angle), std::sin(angle), 0.0));
    UnitVector down(vec3(std::cos(angle), -std::sin(angle), 0.0));
    UnitVector res = rotational_sum(v0, {WeightedDirection{0.5, up}, WeightedDirection{0.5, down}});
    CHECK((res.vec() - v0.vec()).norm() < 1e-9);
}

TEST_CASE("weighted_sequence: single element and degenerate weights") {
    VectorRotation elem{axis(3, 0), axis(3, 1), 1.1};

    VectorRotation full = weighted_sequence({elem}, {1.0});
    CHECK(full.beta == doctest::Approx(1.1));
    CHECK((full.b_o.vec() - elem.b_o.vec()).norm() < 1e-9);
    CHECK((full.b_i.vec() - elem.b_i.vec()).norm() < 1e-12);

    VectorRotation none = weighted_sequence({elem}, {0.0});
    CHECK(none.beta == doctest::Approx(0.0));
}

TEST_CASE("weighted_sequence: all-one and all-zero weights on a chain") {
    // Orthogonally linked chain e1 -> e2 -> e3 -> e4 with assorted angles.
    const int n = 4;
    std::vector<VectorRotation> chain{
        VectorRotation{axis(n, 0), axis(n, 1), M_PI / 2},
        VectorRotation{axis(n, 1), axis(n, 2), M_PI / 3},
        VectorRotation{axis(n, 2), axis(n, 3), 0.8},
    };

    VectorRotation all_one = weighted_sequence(chain, {1.0, 1.0, 1.0});
    Vector endpoint = axis(n, 0).vec();
    for (const auto& r : chain) endpoint = apply_rotation(r, endpoint, r.beta);
    Vector mapped = apply_rotation(all_one, all_one.b_i.vec(), all_one.beta);
    CHECK((mapped - endpoint).norm() < 1e-9);

    VectorRotation all_zero = weighted_sequence(chain, {0.0, 0.0, 0.0});
    CHECK(all_zero.beta == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("weighted_sequence: incompatible chain is rejected") {
    std::vector<VectorRotation> chain{
        VectorRotation{axis(3, 0), axis(3, 1), 0.5},
        VectorRotation{axis(3, 0), axis(3, 2), 0.5},
    };
    CHECK_THROWS_AS(weighted_sequence(chain, {0.5, 0.5}), IncompatibleChainError);
}

TEST_CASE("reduce_tree: weight concentration on root and child") {
    RotationTree tree;
    tree.add_node(0, UnitVector(vec3(1, 0, 0)));
    tree.add_node(1, UnitVector(vec3(0, 1, 0)), 0);

    UnitVector child = reduce_tree(tree, {{0, 0.0}, {1, 1.0}});
    CHECK((child.vec() - vec3(0, 1, 0)).norm() < 1e-12);

    UnitVector root = reduce_tree(tree, {{0, 1.0}, {1, 0.0}});
    CHECK((root.vec() - vec3(1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("reduce_tree: invalid weights are rejected") {
    RotationTree tree;
    tree.add_node(0, UnitVector(vec3(1, 0, 0)));
    tree.add_node(1, UnitVector(vec3(0, 1, 0)), 0);
    CHECK_THROWS_AS(reduce_tree(tree, {{0, 0.4}, {1, 0.4}}), WeightSumInvalidError);
    CHECK_THROWS_AS(reduce_tree(tree, {{0, 1.4}, {1, -0.4}}), WeightSumInvalidError);
}

TEST_CASE("reduce_tree: pure star equals rotational_sum") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        UnitVector root = random_unit(rng, n);
        RotationTree tree;
        tree.add_node(0, root);
        std::vector<WeightedDirection> terms;
        std::map<int, double> weights;
        double remaining = 1.0;
        for (int leaf = 1; leaf <= 3; ++leaf) {
            UnitVector dir = random_unit(rng, n);
            if (root.dot(dir) <= -1.0 + 1e-5) {
                dir = UnitVector(-dir.vec());
            }
            const double w = remaining * 0.3;
            remaining -= w;
            tree.add_node(leaf, dir, 0);
            terms.push_back(WeightedDirection{w, dir});
            weights[leaf] = w;
        }
        weights[0] = remaining;
        UnitVector via_tree = reduce_tree(tree, weights);
        UnitVector via_sum = rotational_sum(root, terms);
        CHECK((via_tree.vec() - via_sum.vec()).norm() < 1e-9);
    }
}

TEST_CASE("reduce_tree: pure chain equals weighted_sequence") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 5;
        // Chain of mutually orthogonal consecutive directions, so the
        // pairwise rotations satisfy the sequence chaining condition exactly.
        std::vector<UnitVector> dirs{random_unit(rng, n)};
        for (int k = 0; k < 3; ++k) {
            Vector cand = random_vector(rng, n);
            cand -= cand.dot(dirs.back().vec()) * dirs.back().vec();
            if (cand.norm() < 1e-6) {
                --k;
                continue;
            }
            dirs.push_back(UnitVector(cand));
        }

        RotationTree tree;
        std::map<int, double> node_weights;
        std::vector<double> cumulative(dirs.size(), 0.0);
        double remaining = 1.0;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            tree.add_node(static_cast<int>(i), dirs[i],
                          i == 0 ? std::nullopt : std::optional<int>(static_cast<int>(i - 1)));
            if (i + 1 == dirs.size()) {
                node_weights[static_cast<int>(i)] = remaining;
            } else {
                const double w = remaining * 0.4;
                node_weights[static_cast<int>(i)] = w;
                remaining -= w;
            }
        }
        for (std::size_t i = 1; i < dirs.size(); ++i) {
            double u = 0.0;
            for (std::size_t j = i; j < dirs.size(); ++j) u += node_weights[static_cast<int>(j)];
            cumulative[i] = u;
        }

        std::vector<VectorRotation> chain;
        std::vector<double> seq_weights;
        for (std::size_t i = 0; i + 1 < dirs.size(); ++i) {
            chain.push_back(rotation_from_pair(dirs[i], dirs[i + 1]));
            seq_weights.push_back(cumulative[i + 1]);
        }

        UnitVector via_tree = reduce_tree(tree, node_weights);
        VectorRotation seq = weighted_sequence(chain, seq_weights);
        Vector endpoint = apply_rotation(seq, seq.b_i.vec(), seq.beta);
        CHECK((via_tree.vec() - endpoint).norm() < 1e-9);
    }
}

TEST_CASE("reduce_tree: matches the hand-composed oracle on shallow trees") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 2);
        std::vector<OracleNode> nodes;
        RotationTree tree;

        UnitVector root_dir = random_unit(rng, n);
        nodes.push_back(OracleNode{0, -1, root_dir});
        tree.add_node(0, root_dir);

        std::vector<int> added{0};
        const int extra = 2 + static_cast<int>(rng() % 5);
        for (int id = 1; id <= extra; ++id) {
            const int parent = added[rng() % added.size()];
            if (tree.level(parent) >= 3) {
                continue;
            }
            UnitVector dir = random_unit(rng, n);
            if (tree.direction(parent).dot(dir) <= -1.0 + 1e-4) {
                dir = UnitVector(-dir.vec());
            }
            nodes.push_back(OracleNode{id, parent, dir});
            tree.add_node(id, dir, parent);
            added.push_back(id);
        }

        std::map<int, double> weights;
        double total = 0.0;
        for (const auto& node : nodes) {
            const double w = uni(rng);
            weights[node.id] = w;
            total += w;
        }
        for (auto& [id, w] : weights) w /= total;

        UnitVector via_tree = reduce_tree(tree, weights);
        Vector via_oracle = oracle_reduce(nodes, weights);
        CHECK((via_tree.vec() - via_oracle).norm() < 1e-9);
    }
}

TEST_CASE("reduce_tree: weight concentration limit on random trees") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3;
        RotationTree tree;
        UnitVector root_dir = random_unit(rng, n);
        tree.add_node(0, root_dir);
        std::vector<int> added{0};
        for (int id = 1; id <= 5; ++id) {
            const int parent = added[rng() % added.size()];
            if (tree.level(parent) >= 3) continue;
            UnitVector dir = random_unit(rng, n);
            if (tree.direction(parent).dot(dir) <= -1.0 + 1e-4) dir = UnitVector(-dir.vec());
            tree.add_node(id, dir, parent);
            added.push_back(id);
        }
        const int count = static_cast<int>(added.size());
        const int focus = added[rng() % added.size()];
        std::map<int, double> weights;
        for (int id : added) {
            weights[id] = id == focus ? 1.0 - 1e-6 : 1e-6 / (count - 1);
        }
        UnitVector reduced = reduce_tree(tree, weights);
        CHECK((reduced.vec() - tree.direction(focus).vec()).norm() < 1e-3);
    }
}

TEST_CASE("reduce_tree: output is continuous in the weights") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        RotationTree tree;
        UnitVector root_dir = random_unit(rng, 3);
        tree.add_node(0, root_dir);
        std::vector<int> added{0};
        for (int id = 1; id <= 5; ++id) {
            const int parent = added[rng() % added.size()];
            if (tree.level(parent) >= 3) continue;
            UnitVector dir = random_unit(rng, 3);
            if (tree.direction(parent).dot(dir) <= -1.0 + 1e-4) dir = UnitVector(-dir.vec());
            tree.add_node(id, dir, parent);
            added.push_back(id);
        }
        const int count = static_cast<int>(added.size());
        std::map<int, double> weights;
        double total = 0.0;
        for (int id : added) {
            weights[id] = uni(rng);
            total += weights[id];
        }
        for (auto& [id, w] : weights) w /= total;

        std::map<int, double> perturbed = weights;
        double ptotal = 0.0;
        for (auto& [id, w] : perturbed) {
            w += 1e-4;
            ptotal += w;
        }
        for (auto& [id, w] : perturbed) w /= ptotal;

        UnitVector a = reduce_tree(tree, weights);
        UnitVector b = reduce_tree(tree, perturbed);
        CHECK((a.vec() - b.vec()).norm() < 1e-2);
    }
}
