#include <linfty/trees.hpp>

#include <algorithm>
#include <stdexcept>

namespace linfty {

int PlanarBinaryTree::leaf_count() const {
    if (is_leaf()) return 1;
    return left->leaf_count() + right->leaf_count();
}

std::string PlanarBinaryTree::serialize() const {
    if (is_leaf()) return "*";
    return "(" + left->serialize() + right->serialize() + ")";
}

TreePtr tree_leaf() {
    static TreePtr leaf = std::make_shared<PlanarBinaryTree>();
    return leaf;
}

TreePtr tree_node(TreePtr l, TreePtr r) {
    auto n = std::make_shared<PlanarBinaryTree>();
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

std::vector<TreePtr> enumerate_trees(int k) {
    if (k < 1) throw std::invalid_argument("enumerate_trees: k must be >= 1");
    if (k == 1) return {tree_leaf()};
    std::vector<TreePtr> out;
    for (int a = 1; a < k; ++a)
        for (auto& l : enumerate_trees(a))
            for (auto& r : enumerate_trees(k - a)) out.push_back(tree_node(l, r));
    std::sort(out.begin(), out.end(),
              [](const TreePtr& a, const TreePtr& b) { return a->serialize() < b->serialize(); });
    return out;
}

unsigned long catalan_rec(int k) {
    if (k <= 2) return 1;
    unsigned long total = 0;
    for (int a = 1; a < k; ++a) total += catalan_rec(a) * catalan_rec(k - a);
    return total;
}

int DecoratedTree::leaf_count() const {
    if (is_leaf()) return 1;
    return left->leaf_count() + right->leaf_count();
}

int DecoratedTree::black_count() const {
    int n = color == 'b' ? 1 : 0;
    if (!is_leaf()) n += left->black_count() + right->black_count();
    return n;
}

std::string DecoratedTree::serialize() const {
    if (is_leaf()) return std::string(1, color);
    return "(" + left->serialize() + right->serialize() + ")" + color;
}

DecoTreePtr deco_leaf(char color) {
    auto n = std::make_shared<DecoratedTree>();
    n->color = color;
    return n;
}

DecoTreePtr deco_node(DecoTreePtr l, DecoTreePtr r, char color) {
    auto n = std::make_shared<DecoratedTree>();
    n->left = std::move(l);
    n->right = std::move(r);
    n->color = color;
    return n;
}

DecoTreePtr recolor_root(const DecoTreePtr& t, char color) {
    auto n = std::make_shared<DecoratedTree>(*t);
    n->color = color;
    return n;
}

}  // namespace linfty
