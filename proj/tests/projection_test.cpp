#include "ldls/projection.hpp"

#include <random>

#include <gtest/gtest.h>

#include "ldls/error.hpp"

namespace ldls {
namespace {

constexpr Matrix34 kIdentity = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0};
constexpr Matrix34 kIntrinsics = {100, 0, 50, 0, 0, 100, 50, 0, 0, 0, 1, 0};

TEST(ProjectPoints, IdentityMatrixOnAxis) {
    const auto out = project_points(PointCloud({{0, 0, 5}}), CameraCalibration(kIdentity, 10, 10));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_DOUBLE_EQ(out.points[0].u, 0.0);
    EXPECT_DOUBLE_EQ(out.points[0].v, 0.0);
    EXPECT_DOUBLE_EQ(out.points[0].depth, 5.0);
    EXPECT_TRUE(out.points[0].in_fov);
}

TEST(ProjectPoints, BehindCameraIsOutOfView) {
    const auto out = project_points(PointCloud({{0, 0, -5}}), CameraCalibration(kIdentity, 10, 10));
    EXPECT_DOUBLE_EQ(out.points[0].depth, -5.0);
    EXPECT_FALSE(out.points[0].in_fov);
}

TEST(ProjectPoints, HandComputedIntrinsics) {
    // u = (100*1 + 50*10)/10, v = (100*2 + 50*10)/10
    const auto out =
        project_points(PointCloud({{1, 2, 10}}), CameraCalibration(kIntrinsics, 100, 100));
    EXPECT_DOUBLE_EQ(out.points[0].u, 60.0);
    EXPECT_DOUBLE_EQ(out.points[0].v, 70.0);
    EXPECT_DOUBLE_EQ(out.points[0].depth, 10.0);
    EXPECT_TRUE(out.points[0].in_fov);
}

TEST(ProjectPoints, DegenerateScaleFlaggedNotThrown) {
    const auto out = project_points(PointCloud({{1, 1, 0}}), CameraCalibration(kIdentity, 10, 10));
    EXPECT_FALSE(out.points[0].in_fov);
}

TEST(ProjectPoints, RoundingAtImageEdges) {
    // u = x/z: 9.49 rounds to 9 (inside width 10), 9.5 rounds to 10 (outside),
    // -0.49 rounds to -0 (inside), -0.5 rounds to -1 (outside).
    const auto out = project_points(
        PointCloud({{9.49, 0, 1}, {9.5, 0, 1}, {-0.49, 0, 1}, {-0.5, 0, 1}}),
        CameraCalibration(kIdentity, 10, 10));
    EXPECT_TRUE(out.points[0].in_fov);
    EXPECT_FALSE(out.points[1].in_fov);
    EXPECT_TRUE(out.points[2].in_fov);
    EXPECT_FALSE(out.points[3].in_fov);
}

TEST(ProjectPoints, PositiveScaleInvariance) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-20, 20), s(0.01, 100);
    std::vector<Point3> pts;
    for (int i = 0; i < 500; ++i) pts.push_back({d(rng), d(rng), d(rng)});
    const PointCloud cloud(pts);
    for (int trial = 0; trial < 20; ++trial) {
        const double k = s(rng);
        Matrix34 scaled = kIntrinsics;
        for (double& x : scaled) x *= k;
        const auto a = project_points(cloud, CameraCalibration(kIntrinsics, 100, 100));
        const auto b = project_points(cloud, CameraCalibration(scaled, 100, 100));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            EXPECT_EQ(a.points[i].in_fov, b.points[i].in_fov);
            EXPECT_NEAR(a.points[i].u, b.points[i].u, 1e-9 * (1 + std::abs(a.points[i].u)));
            EXPECT_NEAR(a.points[i].v, b.points[i].v, 1e-9 * (1 + std::abs(a.points[i].v)));
        }
    }
}

TEST(FovIndices, AllBehindIsEmpty) {
    const auto out = project_points(PointCloud({{0, 0, -1}, {1, 1, -2}}),
                                    CameraCalibration(kIdentity, 10, 10));
    EXPECT_TRUE(fov_indices(out).empty());
}

TEST(FovIndices, AllInsideIsEveryIndex) {
    const auto out = project_points(PointCloud({{0, 0, 1}, {1, 1, 1}, {5, 5, 1}}),
                                    CameraCalibration(kIdentity, 10, 10));
    EXPECT_EQ(fov_indices(out), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(FovIndices, MixedKeepsOnlyInImage) {
    const auto out = project_points(PointCloud({{0, 0, -5}, {1, 2, 10}}),
                                    CameraCalibration(kIntrinsics, 100, 100));
    const auto idx = fov_indices(out);
    EXPECT_EQ(idx, (std::vector<std::size_t>{1}));
    EXPECT_EQ(fov_indices(out), idx);
}

TEST(CoreTypes, RejectInvalidInput) {
    EXPECT_THROW(PointCloud({{0, 0, std::nan("")}}), DataError);
    EXPECT_THROW(PointCloud({{0, 0, 1}}, std::vector<float>{}), DataError);
    EXPECT_THROW(CameraCalibration(kIdentity, 0, 10), DataError);
    Matrix34 bad = kIdentity;
    bad[3] = INFINITY;
    EXPECT_THROW(CameraCalibration(bad, 10, 10), DataError);
    EXPECT_THROW(MaskSet(2, 2, {{2, 1, "x", {}, {0, 0, 0, 0}}}), DataError);
    EXPECT_THROW(MaskSet(2, 2, {{1, 0, "x", {}, {0, 0, 0, 0}}}), DataError);
    EXPECT_THROW(MaskSet(2, 2, {{1, 1, "x", {}, {0, 0, 0}}}), DataError);
}

TEST(CoreTypes, DefaultParameters) {
    const DiffusionParams p;
    EXPECT_EQ(p.lambda, 0.001);
    EXPECT_EQ(p.k_neighbors, 10);
    EXPECT_EQ(p.sigma, 1.0);
    EXPECT_EQ(p.box_size, 5);
    EXPECT_EQ(p.max_iters, 200);
    EXPECT_TRUE(p.outlier_removal);
    EXPECT_NO_THROW(p.validate());
    DiffusionParams even = p;
    even.box_size = 4;
    EXPECT_THROW(even.validate(), DataError);
}

}  // namespace
}  // namespace ldls
