#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ldls/types.hpp"

namespace ldls {

// Undefined ratios (empty denominators) are std::nullopt, never 0 or 1.

struct ClassMetrics {
    ClassId class_id = 0;
    std::size_t predicted = 0;     // |P_c|
    std::size_t truth = 0;         // |G_c|
    std::size_t intersection = 0;  // |P_c n G_c|
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> iou;
};

struct SemanticReport {
    std::vector<ClassMetrics> classes;

    const ClassMetrics* find(ClassId c) const;
};

/// Per-class point precision, recall and IoU over the listed classes.
SemanticReport semantic_metrics(std::span<const ClassId> pred, std::span<const ClassId> truth,
                                std::span<const ClassId> classes);

/// Per-point instance and class labels for one side of an evaluation.
struct InstanceLabeling {
    std::span<const InstanceId> instance_ids;
    std::span<const ClassId> class_ids;
};

struct MatchedPair {
    InstanceId pred = 0;
    InstanceId truth = 0;
    ClassId class_id = 0;
    double iou = 0.0;
};

/// Instance id -> class id for every nonzero instance present in the labeling.
/// Throws DataError if an instance carries more than one class.
std::map<InstanceId, ClassId> instance_classes(const InstanceLabeling& labels);

/// Same-class one-to-one matching maximizing total point-set IoU. Zero-IoU
/// pairs are never matched. Sorted by (pred, truth).
std::vector<MatchedPair> match_instances(const InstanceLabeling& pred,
                                         const InstanceLabeling& truth);

struct InstanceRow {
    ClassId class_id = 0;
    double iou_threshold = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
};

struct InstanceReport {
    double iou_threshold = 0.0;
    std::vector<InstanceRow> rows;  // one per class, ascending class id
    std::vector<MatchedPair> matching;

    const InstanceRow* find(ClassId c) const;
};

/// Counts matched pairs with IoU >= threshold as true positives. Rows cover
/// `classes` when given, otherwise every class present on either side.
InstanceReport instance_pr(std::span<const MatchedPair> matching,
                           const std::map<InstanceId, ClassId>& pred_instances,
                           const std::map<InstanceId, ClassId>& truth_instances,
                           double iou_threshold,
                           std::optional<std::vector<ClassId>> classes = std::nullopt);

}  // namespace ldls
