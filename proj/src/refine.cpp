#include "ldls/refine.hpp"

#include <numeric>
#include <string>
#include <unordered_map>

#include "ldls/error.hpp"

namespace ldls {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

    std::size_t size_of(std::size_t x) { return size_[find(x)]; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace

std::vector<InstanceId> remove_outliers(std::span<const InstanceId> labels,
                                        const KnnSubgraph& knn) {
    if (labels.size() != knn.n) {
        throw DataError("label count " + std::to_string(labels.size()) +
                        " does not match neighbor graph size " + std::to_string(knn.n));
    }
    const std::size_t n = labels.size();
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == 0) continue;
        for (std::uint32_t j : knn.weights.row_cols(i)) {
            if (labels[j] == labels[i]) sets.unite(i, j);
        }
    }

    // Winning root per instance. Scanning in index order means the first root
    // seen for a given size is the one containing the lowest index.
    std::unordered_map<InstanceId, std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == 0) continue;
        const std::size_t root = sets.find(i);
        auto [it, inserted] = keep.try_emplace(labels[i], root);
        if (!inserted && sets.size_of(root) > sets.size_of(it->second)) it->second = root;
    }

    std::vector<InstanceId> out(labels.begin(), labels.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (out[i] != 0 && sets.find(i) != keep.at(out[i])) out[i] = 0;
    }
    return out;
}

SegmentationResult remove_outliers(const SegmentationResult& result, const KnnSubgraph& knn,
                                   std::span<const std::size_t> fov) {
    if (fov.size() != knn.n) throw DataError("in-view index list does not match neighbor graph");
    std::vector<InstanceId> local(fov.size());
    for (std::size_t i = 0; i < fov.size(); ++i) local[i] = result.instance_ids.at(fov[i]);
    const auto kept = remove_outliers(local, knn);

    SegmentationResult out = result;
    for (std::size_t i = 0; i < fov.size(); ++i) {
        if (kept[i] == 0) {
            out.instance_ids[fov[i]] = 0;
            out.class_ids[fov[i]] = 0;
        }
    }
    recount_instances(out);
    return out;
}

}  // namespace ldls
