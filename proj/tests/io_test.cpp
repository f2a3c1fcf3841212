#include "ldls/io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "ldls/error.hpp"

namespace ldls::io {
namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("ldls_io_" + std::to_string(std::random_device{}()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

TEST(ReadPointCloud, EmptyFile) {
    TempDir dir;
    write_bytes(dir / "a.bin", {});
    EXPECT_EQ(read_point_cloud(dir / "a.bin").size(), 0u);
}

TEST(ReadPointCloud, HandAssembledRecord) {
    // IEEE-754 little-endian: 1.0 = 00 00 80 3f, 2.0 = 00 00 00 40,
    // 3.0 = 00 00 40 40, 0.5 = 00 00 00 3f.
    TempDir dir;
    write_bytes(dir / "a.bin", {0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0x40,
                                0x00, 0x00, 0x40, 0x40, 0x00, 0x00, 0x00, 0x3f});
    const auto cloud = read_point_cloud(dir / "a.bin");
    ASSERT_EQ(cloud.size(), 1u);
    EXPECT_EQ(cloud[0].x, 1.0);
    EXPECT_EQ(cloud[0].y, 2.0);
    EXPECT_EQ(cloud[0].z, 3.0);
    ASSERT_TRUE(cloud.intensity().has_value());
    EXPECT_EQ((*cloud.intensity())[0], 0.5f);
}

TEST(ReadPointCloud, TruncatedFileRejected) {
    TempDir dir;
    write_bytes(dir / "a.bin", std::vector<unsigned char>(17, 0));
    EXPECT_THROW(read_point_cloud(dir / "a.bin"), DataError);
}

TEST(ReadPointCloud, NonFiniteRejectedWithRecordIndex) {
    TempDir dir;
    std::vector<unsigned char> bytes(32, 0);
    const float nan = std::nanf("");
    std::memcpy(bytes.data() + 16 + 4, &nan, 4);
    write_bytes(dir / "a.bin", bytes);
    try {
        read_point_cloud(dir / "a.bin");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("record 1"), std::string::npos);
    }
}

TEST(ReadPointCloud, WriteReadRoundTrip) {
    TempDir dir;
    const PointCloud cloud({{1.5, -2.25, 3}, {0, 0, 0}}, std::vector<float>{0.25f, 1.0f});
    write_point_cloud(cloud, dir / "c.bin");
    const auto back = read_point_cloud(dir / "c.bin");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].y, -2.25);
    EXPECT_EQ((*back.intensity())[1], 1.0f);
}

std::string kitti_calib(const std::vector<double>& p2, const std::vector<double>& r0,
                        const std::vector<double>& tr) {
    std::ostringstream os;
    os.precision(17);
    os << "P0: 1 0 0 0 0 1 0 0 0 0 1 0\n";
    os << "P2:";
    for (double v : p2) os << ' ' << v;
    os << "\nR0_rect:";
    for (double v : r0) os << ' ' << v;
    os << "\nTr_velo_to_cam:";
    for (double v : tr) os << ' ' << v;
    os << "\nTr_imu_to_velo: 1 0 0 0 0 1 0 0 0 0 1 0\n";
    return os.str();
}

TEST(ReadCalibration, IdentityChain) {
    std::istringstream in(kitti_calib({1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0},
                                      {1, 0, 0, 0, 1, 0, 0, 0, 1},
                                      {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0}));
    const Matrix34 expected{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0};
    EXPECT_EQ(parse_calibration(in), expected);
}

TEST(ReadCalibration, ComposesProductEntrywise) {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> p2(12), r0(9), tr(12);
        for (auto* v : {&p2, &r0, &tr}) {
            for (auto& x : *v) x = d(rng);
        }
        Eigen::Matrix<double, 3, 4, Eigen::RowMajor> P(p2.data());
        Eigen::Matrix4d R = Eigen::Matrix4d::Identity();
        R.topLeftCorner<3, 3>() = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>(r0.data());
        Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
        T.topRows<3>() = Eigen::Matrix<double, 3, 4, Eigen::RowMajor>(tr.data());
        const Eigen::Matrix<double, 3, 4> expected = P * R * T;

        std::istringstream in(kitti_calib(p2, r0, tr));
        const auto got = parse_calibration(in);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 4; ++j) EXPECT_NEAR(got[i * 4 + j], expected(i, j), 1e-12);
        }
    }
}

TEST(ReadCalibration, MissingKeyIsNamed) {
    std::istringstream in("P2: 1 0 0 0 0 1 0 0 0 0 1 0\nR0_rect: 1 0 0 0 1 0 0 0 1\n");
    try {
        parse_calibration(in);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("Tr_velo_to_cam"), std::string::npos);
    }
}

TEST(ReadCalibration, WrongValueCount) {
    std::istringstream in("P2: 1 0 0\nR0_rect: 1 0 0 0 1 0 0 0 1\nTr_velo_to_cam: 1 0 0 0 0 1 0 0 0 0 1 0\n");
    EXPECT_THROW(parse_calibration(in), DataError);
}

TEST(ReadCalibration, MinimalSingleMatrix) {
    std::istringstream in("P: 700 0 600 0 0 700 180 0 0 0 1 0\n");
    const auto m = parse_calibration(in);
    EXPECT_EQ(m[0], 700.0);
    EXPECT_EQ(m[6], 180.0);
    EXPECT_EQ(m[10], 1.0);
}

TEST(Rle, AllOnes) {
    const std::vector<std::uint8_t> mask{1, 1, 1, 1};
    EXPECT_EQ(encode_rle(mask), (std::vector<std::size_t>{0, 4}));
}

TEST(Rle, LastPixelOnly) {
    // 2x2, row 1 col 1 is row-major index 3.
    const std::vector<std::uint8_t> mask{0, 0, 0, 1};
    EXPECT_EQ(encode_rle(mask), (std::vector<std::size_t>{3, 1}));
    EXPECT_EQ(decode_rle(std::vector<std::size_t>{3, 1}, 4), mask);
}

TEST(Rle, SumMismatchRejected) {
    EXPECT_THROW(decode_rle(std::vector<std::size_t>{3, 2}, 4), DataError);
    EXPECT_THROW(decode_rle(std::vector<std::size_t>{1, 1}, 4), DataError);
}

MaskSet random_masks(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(1, 30), count(0, 5), cls(1, 80);
    std::uniform_real_distribution<double> p(0.0, 1.0);
    const int w = dim(rng), h = dim(rng);
    std::vector<MaskInstance> inst;
    const int m = count(rng);
    for (int k = 1; k <= m; ++k) {
        MaskInstance mi;
        mi.instance_index = k;
        mi.class_id = cls(rng);
        mi.class_name = k % 2 ? "potted plant" : "car";
        if (p(rng) < 0.7) mi.score = p(rng);
        const double density = p(rng);
        mi.mask.resize(static_cast<std::size_t>(w) * h);
        for (auto& b : mi.mask) b = p(rng) < density;
        inst.push_back(std::move(mi));
    }
    return MaskSet(w, h, std::move(inst));
}

TEST(Masks, RoundTripProperty) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const auto masks = random_masks(rng);
        std::stringstream ss;
        format_masks(masks, ss);
        EXPECT_EQ(parse_masks(ss), masks);
    }
}

TEST(Masks, FileRoundTrip) {
    TempDir dir;
    std::mt19937_64 rng(73);
    const auto masks = random_masks(rng);
    write_masks(masks, dir / "m.json");
    EXPECT_EQ(read_masks(dir / "m.json"), masks);
}

TEST(Masks, AdapterStyleDocument) {
    // Instances listed out of order, no score on one of them.
    std::istringstream in(R"({"height": 2, "width": 2, "instances": [
        {"instance_index": 2, "class_id": 1, "class_name": "person", "score": 0.7, "counts": [0, 1, 3]},
        {"instance_index": 1, "class_id": 3, "class_name": "car", "counts": [3, 1]}]})");
    const auto m = parse_masks(in);
    ASSERT_EQ(m.instance_count(), 2u);
    EXPECT_EQ(m.instance(1).class_name, "car");
    EXPECT_FALSE(m.instance(1).score.has_value());
    EXPECT_EQ(m.instance(1).mask, (std::vector<std::uint8_t>{0, 0, 0, 1}));
    EXPECT_EQ(m.instance(2).mask, (std::vector<std::uint8_t>{1, 0, 0, 0}));
}

TEST(Masks, MalformedDocumentsRejected) {
    const char* bad[] = {
        R"({"height": 2, "width": 2, "instances": [{"instance_index": 1, "class_id": 1, "counts": [0, 3]}]})",
        R"({"height": 2, "width": 2, "instances": [{"instance_index": 1, "class_id": 1, "counts": [4]},
                                                   {"instance_index": 1, "class_id": 2, "counts": [4]}]})",
        R"({"height": 2, "width": 2, "instances": [{"instance_index": 1, "class_id": 0, "counts": [4]}]})",
        R"({"height": 2, "width": 2, "instances": [{"instance_index": 2, "class_id": 1, "counts": [4]}]})",
        R"({"height": 2, "instances": []})",
        R"(not json)",
    };
    for (const char* doc : bad) {
        std::istringstream in(doc);
        EXPECT_THROW(parse_masks(in), DataError) << doc;
    }
}

SegmentationResult random_result(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nd(0, 300), md(0, 4), cd(1, 9);
    SegmentationResult r;
    const int m = md(rng);
    std::vector<ClassId> cls(m + 1, 0);
    for (int k = 1; k <= m; ++k) cls[k] = cd(rng);
    std::uniform_int_distribution<int> ld(0, m);
    const int n = nd(rng);
    for (int i = 0; i < n; ++i) {
        const InstanceId id = ld(rng);
        r.instance_ids.push_back(id);
        r.class_ids.push_back(cls[id]);
        if (id != 0) r.instance_table[id] = {cls[id], "name " + std::to_string(cls[id]), 0};
    }
    recount_instances(r);
    r.diagnostics = {nd(rng), n % 2 == 0, static_cast<std::size_t>(n)};
    return r;
}

TEST(Labels, AllBackgroundLines) {
    SegmentationResult r;
    r.instance_ids.assign(3, 0);
    r.class_ids.assign(3, 0);
    std::stringstream ss;
    format_labels(r, ss);
    std::string line;
    std::vector<std::string> body;
    while (std::getline(ss, line)) {
        if (!line.empty() && line[0] != '#') body.push_back(line);
    }
    EXPECT_EQ(body, (std::vector<std::string>{"0,0", "0,0", "0,0"}));
}

TEST(Labels, RoundTripProperty) {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = random_result(rng);
        std::stringstream ss;
        format_labels(r, ss);
        EXPECT_EQ(parse_labels(ss, r.size()), r);
    }
}

TEST(Labels, HeaderCountsMustMatchBody) {
    std::istringstream in("# points 3\n# instance 1 2 5 car\n1,2\n1,2\n0,0\n");
    EXPECT_THROW(parse_labels(in), DataError);
    std::istringstream ok("# points 3\n# instance 1 2 2 car\n1,2\n1,2\n0,0\n");
    EXPECT_EQ(parse_labels(ok).instance_table.at(1).point_count, 2u);
}

TEST(Labels, ExpectedCountEnforced) {
    std::istringstream in("0,0\n0,0\n");
    EXPECT_THROW(parse_labels(in, 3), DataError);
}

TEST(Labels, MalformedLineNamesPosition) {
    std::istringstream in("# points 2\n0,0\nx,1\n");
    try {
        parse_labels(in);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

}  // namespace
}  // namespace ldls::io
