#include <algorithm>
#include <numeric>

#include "inkgrain/error.hpp"
#include "inkgrain/kernels.hpp"
#include "inkgrain/segmentation.hpp"

namespace inkgrain {
namespace {

constexpr int kLeafSize = 32;

// Exact k-d tree over 3-D exemplars. Leaves hold contiguous SoA runs so the
// distance kernel can sweep them. Pruning keeps every subtree whose lower
// bound does not exceed the current k-th distance, so equal-distance
// candidates with a smaller input position are never lost.
class KdTree {
public:
    explicit KdTree(std::span<const Exemplar> pts) {
        const std::size_t n = pts.size();
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        nodes_.reserve(2 * n / kLeafSize + 2);
        build(pts, idx, 0, static_cast<int>(n));
        xs_.resize(n);
        ys_.resize(n);
        zs_.resize(n);
        pos_.resize(n);
        label_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Exemplar& e = pts[static_cast<std::size_t>(idx[i])];
            xs_[i] = e.feature[0];
            ys_[i] = e.feature[1];
            zs_[i] = e.feature[2];
            pos_[i] = idx[i];
            label_[i] = e.label;
        }
    }

    struct Candidate {
        double dist;
        int pos;
        int label;
        bool operator<(const Candidate& o) const noexcept {
            return dist < o.dist || (dist == o.dist && pos < o.pos);
        }
    };

    // Fills `best` with the k nearest candidates, sorted ascending.
    void query(const Feature& q, int k, std::vector<Candidate>& best,
               std::vector<double>& scratch) const {
        best.clear();
        search(0, q, static_cast<std::size_t>(k), best, scratch);
        std::sort_heap(best.begin(), best.end());
    }

private:
    struct Node {
        int begin, end;
        int axis;  // -1 for leaves
        double split;
        int left, right;
    };

    int build(std::span<const Exemplar> pts, std::vector<int>& idx, int begin, int end) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(Node{begin, end, -1, 0.0, -1, -1});
        if (end - begin <= kLeafSize) return id;

        int axis = 0;
        double widest = -1.0;
        for (int a = 0; a < 3; ++a) {
            double lo = pts[idx[begin]].feature[a], hi = lo;
            for (int i = begin + 1; i < end; ++i) {
                const double v = pts[idx[i]].feature[a];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > widest) {
                widest = hi - lo;
                axis = a;
            }
        }
        if (widest <= 0.0) return id;  // all coincident, keep as one leaf

        const int mid = begin + (end - begin) / 2;
        std::nth_element(idx.begin() + begin, idx.begin() + mid, idx.begin() + end,
                         [&](int a, int b) { return pts[a].feature[axis] < pts[b].feature[axis]; });
        const double split = pts[idx[mid]].feature[axis];
        const int left = build(pts, idx, begin, mid);
        const int right = build(pts, idx, mid, end);
        nodes_[id].axis = axis;
        nodes_[id].split = split;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(int id, const Feature& q, std::size_t k, std::vector<Candidate>& best,
                std::vector<double>& scratch) const {
        const Node& node = nodes_[id];
        if (node.axis < 0) {
            const auto n = static_cast<std::size_t>(node.end - node.begin);
            scratch.resize(n);
            kernels::active().squared_distances_3d(q.data(), xs_.data() + node.begin,
                                                   ys_.data() + node.begin,
                                                   zs_.data() + node.begin, n, scratch.data());
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = static_cast<std::size_t>(node.begin) + i;
                const Candidate c{scratch[i], pos_[j], label_[j]};
                if (best.size() < k) {
                    best.push_back(c);
                    std::push_heap(best.begin(), best.end());
                } else if (c < best.front()) {
                    std::pop_heap(best.begin(), best.end());
                    best.back() = c;
                    std::push_heap(best.begin(), best.end());
                }
            }
            return;
        }
        const double diff = q[static_cast<std::size_t>(node.axis)] - node.split;
        const int near = diff < 0.0 ? node.left : node.right;
        const int far = diff < 0.0 ? node.right : node.left;
        search(near, q, k, best, scratch);
        const double bound = diff * diff;
        if (best.size() < k || bound <= best.front().dist) search(far, q, k, best, scratch);
    }

    std::vector<Node> nodes_;
    std::vector<double> xs_, ys_, zs_;
    std::vector<int> pos_, label_;
};

}  // namespace

std::vector<int> knn_refine(std::span<const Feature> ambiguous, std::span<const Exemplar> confident,
                            int k) {
    if (confident.empty()) throw CannotRefineError("KNN refinement needs at least one exemplar");
    if (k < 1 || static_cast<std::size_t>(k) > confident.size())
        throw ParameterError("k must lie in [1, number of exemplars]");

    const KdTree tree(confident);
    std::vector<int> out(ambiguous.size());
    std::vector<KdTree::Candidate> best;
    std::vector<double> scratch;
    std::vector<std::pair<int, int>> votes;  // (label, count)

    for (std::size_t i = 0; i < ambiguous.size(); ++i) {
        tree.query(ambiguous[i], k, best, scratch);
        votes.clear();
        for (const auto& c : best) {
            auto it = std::find_if(votes.begin(), votes.end(),
                                   [&](const auto& v) { return v.first == c.label; });
            if (it == votes.end())
                votes.emplace_back(c.label, 1);
            else
                ++it->second;
        }
        int top = 0;
        for (const auto& v : votes) top = std::max(top, v.second);
        // `best` is ranked, so the first neighbour whose class reaches the top
        // count decides ties.
        for (const auto& c : best) {
            auto it = std::find_if(votes.begin(), votes.end(),
                                   [&](const auto& v) { return v.first == c.label; });
            if (it->second == top) {
                out[i] = c.label;
                break;
            }
        }
    }
    return out;
}

}  // namespace inkgrain
