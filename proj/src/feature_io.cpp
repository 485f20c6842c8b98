/**
 * @file feature_io.cpp
 * @brief CSV / FVEC feature files and JSON heads
 */
#include "cxraug/feature_io.hpp"
#include "cxraug/error.hpp"
#include "cxraug/text.hpp"

#include "json.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace cxraug {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'F', 'V', 'E', 'C'};

class ByteReader {
public:
    ByteReader(std::vector<char> data, const fs::path& path) : data_(std::move(data)), path_(path) {}

    const char* take(std::size_t n) {
        if (data_.size() - pos_ < n) {
            throw DataError("truncated feature file '" + path_.string() + "'");
        }
        const char* p = data_.data() + pos_;
        pos_ += n;
        return p;
    }

    std::uint32_t u32() {
        const auto* p = reinterpret_cast<const unsigned char*>(take(4));
        return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
               static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
    }

    std::uint8_t u8() { return static_cast<std::uint8_t>(*take(1)); }

    float f32() { return std::bit_cast<float>(u32()); }

    bool done() const { return pos_ == data_.size(); }

private:
    std::vector<char> data_;
    std::size_t pos_ = 0;
    fs::path path_;
};

void put_u32(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

std::size_t common_dim(const std::vector<FeatureVector>& features) {
    if (features.empty()) return 0;
    const std::size_t dim = features.front().values.size();
    for (const auto& f : features) {
        if (f.values.size() != dim) {
            throw InvalidArgument("feature vectors have inconsistent dimensions");
        }
    }
    return dim;
}

std::vector<FeatureVector> read_binary(std::vector<char> data, const fs::path& path) {
    ByteReader in(std::move(data), path);
    in.take(4);
    const std::uint32_t dim = in.u32();
    const std::uint32_t count = in.u32();
    std::vector<FeatureVector> out;
    out.reserve(count);
    for (std::uint32_t r = 0; r < count; ++r) {
        FeatureVector fv;
        const std::uint32_t id_len = in.u32();
        const char* id = in.take(id_len);
        fv.id.assign(id, id_len);
        const std::uint8_t label = in.u8();
        if (label > 1) {
            throw DataError("record " + std::to_string(r) + " of '" + path.string() + "' has label byte " +
                            std::to_string(label));
        }
        fv.label = static_cast<Label>(label);
        fv.values.resize(dim);
        for (auto& v : fv.values) {
            v = in.f32();
            if (!std::isfinite(v)) {
                throw DataError("non-finite value in record " + std::to_string(r) + " of '" + path.string() + "'");
            }
        }
        out.push_back(std::move(fv));
    }
    if (!in.done()) {
        throw DataError("trailing bytes after " + std::to_string(count) + " records in '" + path.string() + "'");
    }
    return out;
}

std::vector<FeatureVector> read_csv(const std::string& text, const fs::path& path) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("feature file '" + path.string() + "' is empty");
    }
    const std::vector<std::string> header = split_csv_line(strip_cr(line));
    if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
        throw DataError("feature file '" + path.string() + "' lacks the id,label,d0,... header");
    }
    const std::size_t dim = header.size() - 2;
    for (std::size_t d = 0; d < dim; ++d) {
        if (header[d + 2] != "d" + std::to_string(d)) {
            throw DataError("feature file '" + path.string() + "' has unexpected column '" + header[d + 2] + "'");
        }
    }

    std::vector<FeatureVector> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        const std::string where = "'" + path.string() + "' row " + std::to_string(row);
        if (cells.size() != header.size()) {
            throw DataError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(cells.size()));
        }
        FeatureVector fv;
        fv.id = cells[0];
        try {
            fv.label = parse_label(cells[1]);
        } catch (const InvalidArgument& e) {
            throw DataError(where + ": " + e.what());
        }
        fv.values.reserve(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const auto v = parse_double(cells[d + 2]);
            if (!v || !std::isfinite(*v)) {
                throw DataError(where + ": bad value '" + cells[d + 2] + "'");
            }
            fv.values.push_back(*v);
        }
        out.push_back(std::move(fv));
    }
    return out;
}

}  // namespace

std::vector<FeatureVector> read_features(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open feature file '" + path.string() + "'");
    }
    std::vector<char> data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (data.size() >= 4 && std::memcmp(data.data(), kMagic, 4) == 0) {
        return read_binary(std::move(data), path);
    }
    return read_csv(std::string(data.begin(), data.end()), path);
}

void write_features_csv(const std::vector<FeatureVector>& features, const fs::path& path) {
    const std::size_t dim = common_dim(features);
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << "id,label";
    for (std::size_t d = 0; d < dim; ++d) out << ",d" << d;
    out << '\n';
    for (const auto& f : features) {
        out << f.id << ',' << to_string(f.label);
        for (double v : f.values) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) {
        throw DataError("failed writing '" + path.string() + "'");
    }
}

void write_features_binary(const std::vector<FeatureVector>& features, const fs::path& path) {
    const std::size_t dim = common_dim(features);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(dim));
    put_u32(out, static_cast<std::uint32_t>(features.size()));
    for (const auto& f : features) {
        put_u32(out, static_cast<std::uint32_t>(f.id.size()));
        out.write(f.id.data(), static_cast<std::streamsize>(f.id.size()));
        out.put(static_cast<char>(f.label));
        for (double v : f.values) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    if (!out) {
        throw DataError("failed writing '" + path.string() + "'");
    }
}

void write_features(const std::vector<FeatureVector>& features, const fs::path& path) {
    if (path.extension() == ".fvec") {
        write_features_binary(features, path);
    } else {
        write_features_csv(features, path);
    }
}

void save_head(const LinearHead& head, const fs::path& path) {
    nlohmann::json j;
    j["dim"] = head.dim();
    j["params"] = std::vector<double>(head.params().begin(), head.params().end());
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << j.dump(1) << '\n';
}

LinearHead load_head(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open head file '" + path.string() + "'");
    }
    try {
        const nlohmann::json j = nlohmann::json::parse(in);
        LinearHead head(j.at("dim").get<std::size_t>());
        const auto params = j.at("params").get<std::vector<double>>();
        if (params.size() != head.params().size()) {
            throw DataError("head file '" + path.string() + "' has " + std::to_string(params.size()) +
                            " parameters, expected " + std::to_string(head.params().size()));
        }
        std::copy(params.begin(), params.end(), head.params().begin());
        return head;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed head file '" + path.string() + "': " + e.what());
    }
}

}  // namespace cxraug
