#include "ldls/metrics.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "ldls/assignment.hpp"
#include "ldls/error.hpp"

namespace ldls {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

const ClassMetrics* SemanticReport::find(ClassId c) const {
    for (const auto& m : classes) {
        if (m.class_id == c) return &m;
    }
    return nullptr;
}

const InstanceRow* InstanceReport::find(ClassId c) const {
    for (const auto& r : rows) {
        if (r.class_id == c) return &r;
    }
    return nullptr;
}

SemanticReport semantic_metrics(std::span<const ClassId> pred, std::span<const ClassId> truth,
                                std::span<const ClassId> classes) {
    if (pred.size() != truth.size()) {
        throw DataError("prediction has " + std::to_string(pred.size()) +
                        " points but truth has " + std::to_string(truth.size()));
    }
    SemanticReport report;
    for (ClassId c : classes) {
        ClassMetrics m;
        m.class_id = c;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            const bool p = pred[i] == c;
            const bool g = truth[i] == c;
            m.predicted += p;
            m.truth += g;
            m.intersection += p && g;
        }
        m.precision = ratio(m.intersection, m.predicted);
        m.recall = ratio(m.intersection, m.truth);
        m.iou = ratio(m.intersection, m.predicted + m.truth - m.intersection);
        report.classes.push_back(m);
    }
    return report;
}

std::map<InstanceId, ClassId> instance_classes(const InstanceLabeling& labels) {
    if (labels.instance_ids.size() != labels.class_ids.size()) {
        throw DataError("instance and class label arrays differ in length");
    }
    std::map<InstanceId, ClassId> out;
    for (std::size_t i = 0; i < labels.instance_ids.size(); ++i) {
        const InstanceId id = labels.instance_ids[i];
        if (id == 0) continue;
        auto [it, inserted] = out.try_emplace(id, labels.class_ids[i]);
        if (!inserted && it->second != labels.class_ids[i]) {
            throw DataError("instance " + std::to_string(id) + " has points of classes " +
                            std::to_string(it->second) + " and " +
                            std::to_string(labels.class_ids[i]));
        }
    }
    return out;
}

std::vector<MatchedPair> match_instances(const InstanceLabeling& pred,
                                         const InstanceLabeling& truth) {
    if (pred.instance_ids.size() != truth.instance_ids.size()) {
        throw DataError("prediction and truth differ in point count");
    }
    const auto pred_cls = instance_classes(pred);
    const auto truth_cls = instance_classes(truth);

    std::map<InstanceId, std::size_t> pred_size, truth_size;
    std::map<std::pair<InstanceId, InstanceId>, std::size_t> overlap;
    for (std::size_t i = 0; i < pred.instance_ids.size(); ++i) {
        const InstanceId p = pred.instance_ids[i];
        const InstanceId t = truth.instance_ids[i];
        if (p != 0) ++pred_size[p];
        if (t != 0) ++truth_size[t];
        if (p != 0 && t != 0) ++overlap[{p, t}];
    }

    std::set<ClassId> classes;
    for (const auto& [id, c] : pred_cls) classes.insert(c);

    std::vector<MatchedPair> out;
    for (ClassId c : classes) {
        std::vector<InstanceId> ps, ts;
        for (const auto& [id, cls] : pred_cls) {
            if (cls == c) ps.push_back(id);
        }
        for (const auto& [id, cls] : truth_cls) {
            if (cls == c) ts.push_back(id);
        }
        if (ts.empty()) continue;
        std::vector<std::vector<double>> iou(ps.size(), std::vector<double>(ts.size(), 0.0));
        for (std::size_t a = 0; a < ps.size(); ++a) {
            for (std::size_t b = 0; b < ts.size(); ++b) {
                const auto it = overlap.find({ps[a], ts[b]});
                if (it == overlap.end()) continue;
                const std::size_t inter = it->second;
                iou[a][b] = static_cast<double>(inter) /
                            static_cast<double>(pred_size[ps[a]] + truth_size[ts[b]] - inter);
            }
        }
        const auto assign = max_weight_assignment(iou);
        for (std::size_t a = 0; a < ps.size(); ++a) {
            if (assign[a] >= 0) out.push_back({ps[a], ts[assign[a]], c, iou[a][assign[a]]});
        }
    }
    std::sort(out.begin(), out.end(), [](const MatchedPair& x, const MatchedPair& y) {
        return std::pair{x.pred, x.truth} < std::pair{y.pred, y.truth};
    });
    return out;
}

InstanceReport instance_pr(std::span<const MatchedPair> matching,
                           const std::map<InstanceId, ClassId>& pred_instances,
                           const std::map<InstanceId, ClassId>& truth_instances,
                           double iou_threshold, std::optional<std::vector<ClassId>> classes) {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
        throw DataError("IoU threshold must lie in (0, 1]");
    }
    std::set<ClassId> class_set;
    if (classes) {
        class_set.insert(classes->begin(), classes->end());
    } else {
        for (const auto& [id, c] : pred_instances) class_set.insert(c);
        for (const auto& [id, c] : truth_instances) class_set.insert(c);
    }

    InstanceReport report;
    report.iou_threshold = iou_threshold;
    report.matching.assign(matching.begin(), matching.end());
    for (ClassId c : class_set) {
        InstanceRow row;
        row.class_id = c;
        row.iou_threshold = iou_threshold;
        std::size_t n_pred = 0, n_truth = 0;
        for (const auto& [id, cls] : pred_instances) n_pred += cls == c;
        for (const auto& [id, cls] : truth_instances) n_truth += cls == c;
        for (const auto& m : matching) {
            if (m.class_id == c && m.iou >= iou_threshold) ++row.tp;
        }
        row.fp = n_pred - row.tp;
        row.fn = n_truth - row.tp;
        row.precision = ratio(row.tp, row.tp + row.fp);
        row.recall = ratio(row.tp, row.tp + row.fn);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace ldls
