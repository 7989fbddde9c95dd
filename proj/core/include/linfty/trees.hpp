#pragma once

#include <memory>
#include <string>
#include <vector>

namespace linfty {

/// Planar rooted binary tree; canonical serialization "*" / "(L R)".
struct PlanarBinaryTree {
    std::shared_ptr<const PlanarBinaryTree> left, right;  // both null for a leaf

    bool is_leaf() const { return !left; }
    int leaf_count() const;
    std::string serialize() const;
};

using TreePtr = std::shared_ptr<const PlanarBinaryTree>;

TreePtr tree_leaf();
TreePtr tree_node(TreePtr l, TreePtr r);

/// All planar binary trees with k leaves, sorted by canonical serialization.
/// Count is the Catalan number (2(k-1))! / ((k-1)! k!).
std::vector<TreePtr> enumerate_trees(int k);

/// Catalan recurrence, the independent count oracle.
unsigned long catalan_rec(int k);

/// Edge colors of decorated transfer trees. 'b' carries i o p (heat: K_t),
/// 'h' the homotopy (heat: h_t), '.' nothing, 'u' the one blue edge of an
/// S-tree, 'p' the projection at a P-tree root.
struct DecoratedTree {
    char color = '.';  // color of the edge above this vertex
    std::shared_ptr<const DecoratedTree> left, right;

    bool is_leaf() const { return !left; }
    int leaf_count() const;
    int black_count() const;  // 'b' edges in the whole tree
    std::string serialize() const;
};

using DecoTreePtr = std::shared_ptr<const DecoratedTree>;

DecoTreePtr deco_leaf(char color);
DecoTreePtr deco_node(DecoTreePtr l, DecoTreePtr r, char color);
DecoTreePtr recolor_root(const DecoTreePtr& t, char color);

}  // namespace linfty
