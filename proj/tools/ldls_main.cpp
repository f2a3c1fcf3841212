// ldls: lidar instance segmentation by label diffusion from 2D masks.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ldls/error.hpp"
#include "ldls/io.hpp"
#include "ldls/metrics.hpp"
#include "ldls/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct SegmentArgs {
    std::string cloud, calib, masks, out;
    ldls::DiffusionParams params;
    bool no_outlier_removal = false;
    bool direct_projection = false;
    bool timing = false;
};

struct EvaluateArgs {
    std::string pred, truth;
    std::vector<double> thresholds;
    std::vector<ldls::ClassId> classes;
    bool json = false;
};

int run_segment(const SegmentArgs& args) {
    const auto cloud = ldls::io::read_point_cloud(args.cloud);
    const auto masks = ldls::io::read_masks(args.masks);
    const ldls::CameraCalibration calib(ldls::io::read_calibration(args.calib), masks.width(),
                                        masks.height());

    ldls::PipelineOptions options;
    options.params = args.params;
    options.params.outlier_removal = !args.no_outlier_removal;
    options.mode = args.direct_projection ? ldls::LabelingMode::kDirectProjection
                                          : ldls::LabelingMode::kDiffusion;

    const auto output = ldls::segment_frame(cloud, calib, masks, options);
    ldls::io::write_labels(output.result, args.out);

    if (args.timing) {
        double total = 0.0;
        for (const auto& t : output.timings) {
            std::cout << std::left << std::setw(18) << t.stage << std::fixed
                      << std::setprecision(4) << t.seconds << " s\n";
            total += t.seconds;
        }
        std::cout << std::left << std::setw(18) << "total" << std::fixed << std::setprecision(4)
                  << total << " s\n";
    }
    return kExitOk;
}

std::string fmt_ratio(const std::optional<double>& v) {
    if (!v) return "-";
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << 100.0 * *v;
    return os.str();
}

nlohmann::json json_ratio(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

int run_evaluate(const EvaluateArgs& args) {
    const auto pred = ldls::io::read_labels(args.pred);
    const auto truth = ldls::io::read_labels(args.truth);
    if (pred.size() != truth.size()) {
        throw ldls::DataError("prediction has " + std::to_string(pred.size()) +
                              " points but truth has " + std::to_string(truth.size()));
    }

    std::map<ldls::ClassId, std::string> names;
    for (const auto* r : {&truth, &pred}) {
        for (const auto& [id, info] : r->instance_table) names.try_emplace(info.class_id, info.class_name);
    }
    std::vector<ldls::ClassId> classes = args.classes;
    if (classes.empty()) {
        std::set<ldls::ClassId> seen;
        for (ldls::ClassId c : pred.class_ids) if (c != 0) seen.insert(c);
        for (ldls::ClassId c : truth.class_ids) if (c != 0) seen.insert(c);
        classes.assign(seen.begin(), seen.end());
    }
    auto name_of = [&](ldls::ClassId c) {
        const auto it = names.find(c);
        return it == names.end() || it->second.empty() ? std::to_string(c) : it->second;
    };

    const auto semantic = ldls::semantic_metrics(pred.class_ids, truth.class_ids, classes);
    const ldls::InstanceLabeling pl{pred.instance_ids, pred.class_ids};
    const ldls::InstanceLabeling tl{truth.instance_ids, truth.class_ids};
    const auto matching = ldls::match_instances(pl, tl);
    const auto pred_inst = ldls::instance_classes(pl);
    const auto truth_inst = ldls::instance_classes(tl);

    std::vector<ldls::InstanceReport> reports;
    for (double t : args.thresholds) {
        reports.push_back(ldls::instance_pr(matching, pred_inst, truth_inst, t, classes));
    }

    if (args.json) {
        nlohmann::json doc;
        doc["points"] = pred.size();
        for (const auto& m : semantic.classes) {
            doc["semantic"].push_back({{"class_id", m.class_id},
                                       {"class_name", name_of(m.class_id)},
                                       {"predicted", m.predicted},
                                       {"truth", m.truth},
                                       {"intersection", m.intersection},
                                       {"precision", json_ratio(m.precision)},
                                       {"recall", json_ratio(m.recall)},
                                       {"iou", json_ratio(m.iou)}});
        }
        for (const auto& rep : reports) {
            for (const auto& r : rep.rows) {
                doc["instance"].push_back({{"iou_threshold", r.iou_threshold},
                                           {"class_id", r.class_id},
                                           {"class_name", name_of(r.class_id)},
                                           {"tp", r.tp},
                                           {"fp", r.fp},
                                           {"fn", r.fn},
                                           {"precision", json_ratio(r.precision)},
                                           {"recall", json_ratio(r.recall)}});
            }
        }
        for (const auto& m : matching) {
            doc["matching"].push_back(
                {{"pred", m.pred}, {"truth", m.truth}, {"class_id", m.class_id}, {"iou", m.iou}});
        }
        std::cout << doc.dump(2) << '\n';
        return kExitOk;
    }

    std::cout << "Semantic segmentation (" << pred.size() << " points)\n";
    std::cout << std::left << std::setw(16) << "class" << std::right << std::setw(10) << "precision"
              << std::setw(10) << "recall" << std::setw(10) << "IoU" << '\n';
    for (const auto& m : semantic.classes) {
        std::cout << std::left << std::setw(16) << name_of(m.class_id) << std::right
                  << std::setw(10) << fmt_ratio(m.precision) << std::setw(10)
                  << fmt_ratio(m.recall) << std::setw(10) << fmt_ratio(m.iou) << '\n';
    }
    std::cout << "\nInstance segmentation\n";
    std::cout << std::left << std::setw(8) << "IoU" << std::setw(16) << "class" << std::right
              << std::setw(10) << "precision" << std::setw(10) << "recall" << std::setw(6) << "TP"
              << std::setw(6) << "FP" << std::setw(6) << "FN" << '\n';
    for (const auto& rep : reports) {
        for (const auto& r : rep.rows) {
            std::ostringstream thr;
            thr << std::fixed << std::setprecision(2) << r.iou_threshold;
            std::cout << std::left << std::setw(8) << thr.str() << std::setw(16)
                      << name_of(r.class_id) << std::right << std::setw(10)
                      << fmt_ratio(r.precision) << std::setw(10) << fmt_ratio(r.recall)
                      << std::setw(6) << r.tp << std::setw(6) << r.fp << std::setw(6) << r.fn
                      << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lidar instance segmentation by label diffusion from 2D masks"};
    app.require_subcommand(1);

    SegmentArgs seg;
    auto* segment = app.add_subcommand("segment", "Label a point cloud from 2D instance masks");
    segment->add_option("--cloud", seg.cloud, "KITTI velodyne .bin point cloud")->required();
    segment->add_option("--calib", seg.calib, "Calibration text (KITTI or single P:)")->required();
    segment->add_option("--masks", seg.masks, "Instance mask JSON")->required();
    segment->add_option("--out", seg.out, "Output label file")->required();
    segment->add_option("--k", seg.params.k_neighbors, "Nearest neighbors per point")
        ->capture_default_str();
    segment->add_option("--sigma", seg.params.sigma, "Neighbor kernel scale")->capture_default_str();
    segment->add_option("--lambda", seg.params.lambda, "Pixel-to-point weight")
        ->capture_default_str();
    segment->add_option("--box", seg.params.box_size, "Pixel box side (odd)")->capture_default_str();
    segment->add_option("--max-iters", seg.params.max_iters, "Diffusion iteration cap")
        ->capture_default_str();
    segment->add_option("--tol", seg.params.tolerance, "Convergence tolerance (bound on max abs error)")
        ->capture_default_str();
    segment->add_flag("--no-outlier-removal", seg.no_outlier_removal,
                      "Skip largest-component filtering");
    segment->add_flag("--direct-projection", seg.direct_projection,
                      "Label by projected mask membership only (no diffusion)");
    segment->add_flag("--timing", seg.timing, "Print per-stage wall-clock time");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Score predicted labels against ground truth");
    evaluate->add_option("--pred", ev.pred, "Predicted label file")->required();
    evaluate->add_option("--truth", ev.truth, "Ground-truth label file")->required();
    evaluate->add_option("--iou-threshold", ev.thresholds, "Instance IoU threshold (repeatable)")
        ->check(CLI::Range(0.0, 1.0));
    evaluate->add_option("--classes", ev.classes, "Class ids to report (comma separated)")
        ->delimiter(',');
    evaluate->add_flag("--json", ev.json, "Emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (ev.thresholds.empty()) ev.thresholds = {0.5, 0.7};

    try {
        if (*segment) return run_segment(seg);
        return run_evaluate(ev);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
