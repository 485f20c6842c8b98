/**
 * @file manifest.hpp
 * @brief Dataset manifest: image path, label and split per entry
 *
 * File format is CSV with the header `path,label,split`. Relative paths are
 * resolved against the directory holding the manifest.
 */
#pragma once

#include "cxraug/image.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cxraug {

enum class Split : std::uint8_t { train, test };

std::string_view to_string(Split split);
Split parse_split(std::string_view token);

struct ManifestEntry {
    std::string path;
    Label label = Label::normal;
    Split split = Split::train;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

class Manifest {
public:
    Manifest() = default;
    explicit Manifest(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

    /// Throws InvalidArgument on a duplicate path.
    void add(ManifestEntry entry);

    const std::vector<ManifestEntry>& entries() const { return entries_; }
    const std::filesystem::path& base_dir() const { return base_dir_; }

    std::filesystem::path resolve(const ManifestEntry& entry) const;

    /// Copy whose relative paths are rewritten to resolve identically from new_base.
    Manifest rebased(const std::filesystem::path& new_base) const;

    /// Index of the entry with this path, or -1.
    std::ptrdiff_t find(std::string_view path) const;

private:
    std::filesystem::path base_dir_;
    std::vector<ManifestEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct ClassCounts {
    std::size_t positives = 0;
    std::size_t negatives = 0;

    friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// Throws DataError (with the offending row number) on malformed content.
Manifest load_manifest(const std::filesystem::path& path);

/// Writes entries with paths rebased onto the destination directory.
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

ClassCounts class_counts(const Manifest& manifest, Split split);

}  // namespace cxraug
