#include "ldls/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ldls/error.hpp"

namespace ldls::io {

namespace {

using nlohmann::json;

static_assert(sizeof(float) == 4);
static_assert(std::endian::native == std::endian::little,
              "velodyne reader assumes a little-endian host");

constexpr std::size_t kRecordBytes = 16;

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ifstream in(path, mode | std::ios::in);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ofstream out(path, mode | std::ios::out | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

// 4x4 row-major product.
using Matrix44 = std::array<double, 16>;

Matrix44 multiply(const Matrix44& a, const Matrix44& b) {
    Matrix44 c{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += a[i * 4 + k] * b[k * 4 + j];
            c[i * 4 + j] = s;
        }
    }
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Point clouds

PointCloud read_point_cloud(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % kRecordBytes != 0) {
        throw DataError(path.string() + ": length " + std::to_string(bytes.size()) +
                        " bytes is not a multiple of " + std::to_string(kRecordBytes) +
                        " (truncated record at byte " +
                        std::to_string(bytes.size() - bytes.size() % kRecordBytes) + ")");
    }
    const std::size_t n = bytes.size() / kRecordBytes;
    std::vector<Point3> points(n);
    std::vector<float> intensity(n);
    for (std::size_t i = 0; i < n; ++i) {
        float rec[4];
        std::memcpy(rec, bytes.data() + i * kRecordBytes, kRecordBytes);
        for (float v : rec) {
            if (!std::isfinite(v)) {
                throw DataError(path.string() + ": record " + std::to_string(i) + " (byte " +
                                std::to_string(i * kRecordBytes) + ") has a non-finite value");
            }
        }
        points[i] = {rec[0], rec[1], rec[2]};
        intensity[i] = rec[3];
    }
    return PointCloud(std::move(points), std::move(intensity));
}

void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::binary);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& p = cloud[i];
        const float rec[4] = {static_cast<float>(p.x), static_cast<float>(p.y),
                              static_cast<float>(p.z),
                              cloud.intensity() ? (*cloud.intensity())[i] : 0.0f};
        out.write(reinterpret_cast<const char*>(rec), sizeof(rec));
    }
    if (!out) throw DataError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Calibration

Matrix34 parse_calibration(std::istream& in) {
    std::map<std::string, std::pair<std::vector<double>, int>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto colon = line.find(':');
        if (trim(line).empty()) continue;
        if (colon == std::string::npos) {
            throw DataError("calibration line " + std::to_string(line_no) + ": expected 'KEY: values'");
        }
        const std::string key = trim(std::string_view(line).substr(0, colon));
        std::istringstream values(line.substr(colon + 1));
        std::vector<double> nums;
        std::string tok;
        while (values >> tok) {
            double v = 0.0;
            if (!parse_number(tok, v) || !std::isfinite(v)) {
                // Non-numeric values are only an error for keys we use.
                nums.clear();
                nums.push_back(std::nan(""));
                break;
            }
            nums.push_back(v);
        }
        entries[key] = {std::move(nums), line_no};
    }

    auto get = [&](const std::string& key, std::size_t count) {
        const auto it = entries.find(key);
        if (it == entries.end()) throw DataError("calibration is missing key " + key);
        const auto& [vals, at] = it->second;
        if (vals.size() != count || std::any_of(vals.begin(), vals.end(),
                                                [](double v) { return std::isnan(v); })) {
            throw DataError("calibration line " + std::to_string(at) + ": key " + key +
                            " needs " + std::to_string(count) + " numeric values, got " +
                            std::to_string(vals.size()));
        }
        return vals;
    };

    Matrix34 result{};
    if (!entries.contains("P2") && entries.contains("P")) {
        const auto p = get("P", 12);
        std::copy(p.begin(), p.end(), result.begin());
        return result;
    }
    const auto p2 = get("P2", 12);
    const auto r0 = get("R0_rect", 9);
    const auto tr = get("Tr_velo_to_cam", 12);

    Matrix44 rect{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) rect[i * 4 + j] = r0[i * 3 + j];
    }
    rect[15] = 1.0;
    Matrix44 velo{};
    std::copy(tr.begin(), tr.end(), velo.begin());
    velo[15] = 1.0;
    Matrix44 cam{};
    std::copy(p2.begin(), p2.end(), cam.begin());
    const Matrix44 full = multiply(multiply(cam, rect), velo);
    std::copy(full.begin(), full.begin() + 12, result.begin());
    return result;
}

Matrix34 read_calibration(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return parse_calibration(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Masks

std::vector<std::size_t> encode_rle(std::span<const std::uint8_t> mask) {
    std::vector<std::size_t> counts;
    std::uint8_t current = 0;
    std::size_t run = 0;
    for (std::uint8_t px : mask) {
        const std::uint8_t bit = px ? 1 : 0;
        if (bit != current) {
            counts.push_back(run);
            run = 0;
            current = bit;
        }
        ++run;
    }
    counts.push_back(run);
    return counts;
}

std::vector<std::uint8_t> decode_rle(std::span<const std::size_t> counts, std::size_t pixel_count) {
    std::size_t total = 0;
    for (std::size_t c : counts) {
        if (c > pixel_count - total) {
            throw DataError("RLE counts exceed the image size of " + std::to_string(pixel_count));
        }
        total += c;
    }
    if (total != pixel_count) {
        throw DataError("RLE counts sum to " + std::to_string(total) + ", expected " +
                        std::to_string(pixel_count));
    }
    std::vector<std::uint8_t> mask;
    mask.reserve(pixel_count);
    std::uint8_t bit = 0;
    for (std::size_t c : counts) {
        mask.insert(mask.end(), c, bit);
        bit ^= 1;
    }
    return mask;
}

MaskSet parse_masks(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("mask file is not valid JSON: ") + e.what());
    }
    try {
        const int width = doc.at("width").get<int>();
        const int height = doc.at("height").get<int>();
        if (width <= 0 || height <= 0) throw DataError("mask file has nonpositive dimensions");
        const std::size_t pixels = static_cast<std::size_t>(width) * height;

        std::map<InstanceId, MaskInstance> by_index;
        std::size_t pos = 0;
        for (const auto& item : doc.at("instances")) {
            const std::string where = "instances[" + std::to_string(pos++) + "]";
            MaskInstance inst;
            inst.instance_index = item.at("instance_index").get<InstanceId>();
            inst.class_id = item.at("class_id").get<ClassId>();
            inst.class_name = item.value("class_name", std::string{});
            if (item.contains("score") && !item.at("score").is_null()) {
                inst.score = item.at("score").get<double>();
            }
            if (inst.class_id == 0) {
                throw DataError(where + ": class_id 0 is reserved for background");
            }
            const auto counts = item.at("counts").get<std::vector<std::size_t>>();
            try {
                inst.mask = decode_rle(counts, pixels);
            } catch (const DataError& e) {
                throw DataError(where + ": " + e.what());
            }
            const InstanceId idx = inst.instance_index;
            if (!by_index.try_emplace(idx, std::move(inst)).second) {
                throw DataError(where + ": duplicate instance_index " + std::to_string(idx));
            }
        }
        std::vector<MaskInstance> instances;
        for (auto& [idx, inst] : by_index) instances.push_back(std::move(inst));
        return MaskSet(width, height, std::move(instances));
    } catch (const json::exception& e) {
        throw DataError(std::string("mask file is malformed: ") + e.what());
    }
}

void format_masks(const MaskSet& masks, std::ostream& out) {
    json doc;
    doc["width"] = masks.width();
    doc["height"] = masks.height();
    doc["instances"] = json::array();
    for (const auto& inst : masks.instances()) {
        json item;
        item["instance_index"] = inst.instance_index;
        item["class_id"] = inst.class_id;
        item["class_name"] = inst.class_name;
        item["score"] = inst.score ? json(*inst.score) : json(nullptr);
        item["counts"] = encode_rle(inst.mask);
        doc["instances"].push_back(std::move(item));
    }
    out << doc.dump(2) << '\n';
}

MaskSet read_masks(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return parse_masks(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_masks(const MaskSet& masks, const std::filesystem::path& path) {
    auto out = open_out(path);
    format_masks(masks, out);
    if (!out) throw DataError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Labels

void format_labels(const SegmentationResult& result, std::ostream& out) {
    if (result.class_ids.size() != result.instance_ids.size()) {
        throw DataError("result instance and class arrays differ in length");
    }
    out << "# ldls labels v1\n";
    out << "# points " << result.size() << '\n';
    out << "# iterations " << result.diagnostics.iterations_run << '\n';
    out << "# converged " << (result.diagnostics.converged ? 1 : 0) << '\n';
    out << "# in_fov " << result.diagnostics.points_in_fov << '\n';
    for (const auto& [id, info] : result.instance_table) {
        out << "# instance " << id << ' ' << info.class_id << ' ' << info.point_count << ' '
            << info.class_name << '\n';
    }
    for (std::size_t i = 0; i < result.size(); ++i) {
        out << result.instance_ids[i] << ',' << result.class_ids[i] << '\n';
    }
}

SegmentationResult parse_labels(std::istream& in, std::optional<std::size_t> expected_points) {
    SegmentationResult result;
    std::optional<std::size_t> declared_points;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) -> DataError {
        return DataError("labels line " + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "points") {
                std::size_t n = 0;
                if (!(hs >> n)) throw fail("bad points header");
                declared_points = n;
            } else if (key == "iterations") {
                if (!(hs >> result.diagnostics.iterations_run)) throw fail("bad iterations header");
            } else if (key == "converged") {
                int c = 0;
                if (!(hs >> c)) throw fail("bad converged header");
                result.diagnostics.converged = c != 0;
            } else if (key == "in_fov") {
                if (!(hs >> result.diagnostics.points_in_fov)) throw fail("bad in_fov header");
            } else if (key == "instance") {
                InstanceId id = 0;
                InstanceInfo info;
                if (!(hs >> id >> info.class_id >> info.point_count) || id <= 0) {
                    throw fail("bad instance header");
                }
                std::getline(hs, info.class_name);
                if (!info.class_name.empty() && info.class_name.front() == ' ') {
                    info.class_name.erase(0, 1);
                }
                if (!result.instance_table.emplace(id, std::move(info)).second) {
                    throw fail("duplicate instance " + std::to_string(id));
                }
            }
            continue;
        }
        const auto comma = line.find(',');
        InstanceId id = 0;
        ClassId cls = 0;
        if (comma == std::string::npos || !parse_number(std::string_view(line).substr(0, comma), id) ||
            !parse_number(std::string_view(line).substr(comma + 1), cls) || id < 0 || cls < 0) {
            throw fail("expected 'instance_id,class_id', got '" + line + "'");
        }
        if ((id == 0) != (cls == 0)) throw fail("background instance must have class 0 and vice versa");
        result.instance_ids.push_back(id);
        result.class_ids.push_back(cls);
    }

    if (declared_points && *declared_points != result.size()) {
        throw DataError("labels header declares " + std::to_string(*declared_points) +
                        " points but body has " + std::to_string(result.size()));
    }
    if (expected_points && *expected_points != result.size()) {
        throw DataError("labels have " + std::to_string(result.size()) + " points, expected " +
                        std::to_string(*expected_points));
    }

    std::map<InstanceId, std::size_t> counts;
    for (std::size_t i = 0; i < result.size(); ++i) {
        const InstanceId id = result.instance_ids[i];
        if (id == 0) continue;
        const auto it = result.instance_table.find(id);
        if (it == result.instance_table.end()) {
            throw DataError("point " + std::to_string(i) + " has instance " + std::to_string(id) +
                            " absent from the header table");
        }
        if (it->second.class_id != result.class_ids[i]) {
            throw DataError("point " + std::to_string(i) + " class disagrees with instance " +
                            std::to_string(id) + " in the header table");
        }
        ++counts[id];
    }
    for (const auto& [id, info] : result.instance_table) {
        if (counts[id] != info.point_count) {
            throw DataError("instance " + std::to_string(id) + " header count " +
                            std::to_string(info.point_count) + " but body has " +
                            std::to_string(counts[id]));
        }
    }
    return result;
}

void write_labels(const SegmentationResult& result, const std::filesystem::path& path) {
    auto out = open_out(path);
    format_labels(result, out);
    if (!out) throw DataError("failed writing " + path.string());
}

SegmentationResult read_labels(const std::filesystem::path& path,
                               std::optional<std::size_t> expected_points) {
    auto in = open_in(path);
    try {
        return parse_labels(in, expected_points);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace ldls::io
