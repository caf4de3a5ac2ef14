#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace regrowth {

const char* version();

/// Provenance written as '#' lines at the top of every artifact.
struct ArtifactMeta {
    std::string config_hash;
    std::string solve_hash;
    std::uint64_t seed = 0;
    /// Extra key=value lines, written in order after the fixed ones.
    std::vector<std::pair<std::string, std::string>> extra;
};

using CsvRow = std::vector<std::string>;

std::string render_csv(const ArtifactMeta& meta, const CsvRow& header, const std::vector<CsvRow>& rows);

struct CsvFile {
    std::map<std::string, std::string> meta;
    CsvRow header;
    std::vector<CsvRow> rows;

    /// Index of a header column; throws Error{MissingArtifact}.
    std::size_t column(const std::string& name) const;
};

/// Throws Error{MissingArtifact} when the file is absent or has no header.
CsvFile read_csv(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/**
 * Files produced by one command. Nothing reaches the disk until commit(),
 * which writes each file atomically; if any write fails, the files already
 * written by that commit are removed before the error propagates.
 */
class ArtifactSet {
public:
    explicit ArtifactSet(std::filesystem::path directory) : directory_(std::move(directory)) {}

    void add(const std::string& name, std::string content);
    std::vector<std::filesystem::path> commit() const;

private:
    std::filesystem::path directory_;
    std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace regrowth
