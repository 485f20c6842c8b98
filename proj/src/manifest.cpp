/**
 * @file manifest.cpp
 */
#include "cxraug/manifest.hpp"
#include "cxraug/error.hpp"
#include "cxraug/text.hpp"

#include <fstream>

namespace cxraug {

namespace fs = std::filesystem;

std::string_view to_string(Split split) {
    return split == Split::train ? "train" : "test";
}

Split parse_split(std::string_view token) {
    if (token == "train") return Split::train;
    if (token == "test") return Split::test;
    throw InvalidArgument("unknown split '" + std::string(token) + "' (expected train|test)");
}

void Manifest::add(ManifestEntry entry) {
    if (!index_.emplace(entry.path, entries_.size()).second) {
        throw InvalidArgument("duplicate manifest path '" + entry.path + "'");
    }
    entries_.push_back(std::move(entry));
}

fs::path Manifest::resolve(const ManifestEntry& entry) const {
    const fs::path p(entry.path);
    return p.is_absolute() ? p : base_dir_ / p;
}

Manifest Manifest::rebased(const fs::path& new_base) const {
    if (fs::weakly_canonical(fs::absolute(new_base)) == fs::weakly_canonical(fs::absolute(base_dir_))) {
        Manifest copy = *this;
        copy.base_dir_ = new_base;
        return copy;
    }
    Manifest out(new_base);
    for (const auto& e : entries_) {
        ManifestEntry moved = e;
        if (!fs::path(e.path).is_absolute()) {
            moved.path = fs::proximate(fs::absolute(resolve(e)).lexically_normal(), fs::absolute(new_base))
                             .generic_string();
        }
        out.add(std::move(moved));
    }
    return out;
}

std::ptrdiff_t Manifest::find(std::string_view path) const {
    const auto it = index_.find(std::string(path));
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open manifest '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "path,label,split") {
        throw DataError("manifest '" + path.string() + "' must start with the header 'path,label,split'");
    }
    Manifest manifest(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = "manifest '" + path.string() + "' row " + std::to_string(row);
        const auto cells = split_csv_line(line);
        if (cells.size() != 3 || cells[0].empty()) {
            throw DataError(where + ": expected 'path,label,split'");
        }
        try {
            manifest.add({cells[0], parse_label(cells[1]), parse_split(cells[2])});
        } catch (const InvalidArgument& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    return manifest;
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
    const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    const Manifest rebased = manifest.rebased(dir);
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << "path,label,split\n";
    for (const auto& e : rebased.entries()) {
        out << e.path << ',' << to_string(e.label) << ',' << to_string(e.split) << '\n';
    }
    if (!out) {
        throw DataError("failed writing '" + path.string() + "'");
    }
}

ClassCounts class_counts(const Manifest& manifest, Split split) {
    ClassCounts counts;
    for (const auto& e : manifest.entries()) {
        if (e.split != split) continue;
        ++(e.label == Label::covid ? counts.positives : counts.negatives);
    }
    return counts;
}

}  // namespace cxraug
