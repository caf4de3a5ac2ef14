#include "regrowth/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "regrowth/error.hpp"

#ifndef REGROWTH_VERSION
#define REGROWTH_VERSION "0.0.0"
#endif

namespace regrowth {

namespace fs = std::filesystem;

const char* version() { return REGROWTH_VERSION; }

namespace {

void append_row(std::string& out, const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += row[i];
    }
    out += '\n';
}

CsvRow split(const std::string& line) {
    CsvRow out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string render_csv(const ArtifactMeta& meta, const CsvRow& header, const std::vector<CsvRow>& rows) {
    std::string out;
    out += "# regrowth ";
    out += version();
    out += "\n# config_hash=" + meta.config_hash + "\n";
    out += "# solve_hash=" + meta.solve_hash + "\n";
    out += "# seed=" + std::to_string(meta.seed) + "\n";
    for (const auto& [key, value] : meta.extra) out += "# " + key + "=" + value + "\n";
    append_row(out, header);
    for (const auto& row : rows) append_row(out, row);
    return out;
}

std::size_t CsvFile::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw Error(ErrorCode::MissingArtifact, "column '" + name + "' not found");
}

CsvFile read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingArtifact, "cannot open " + path.string());
    CsvFile file;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                const auto key_start = line.find_first_not_of(" #");
                file.meta[line.substr(key_start, eq - key_start)] = line.substr(eq + 1);
            }
            continue;
        }
        if (file.header.empty()) {
            file.header = split(line);
        } else {
            file.rows.push_back(split(line));
        }
    }
    if (file.header.empty()) throw Error(ErrorCode::MissingArtifact, path.string() + " has no header row");
    return file;
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(temp, ignored);
            throw std::runtime_error("failed to write " + temp.string());
        }
    }
    std::error_code ec;
    fs::rename(temp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(temp, ignored);
        throw std::runtime_error("failed to move " + temp.string() + " into place: " + ec.message());
    }
}

void ArtifactSet::add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
}

std::vector<fs::path> ArtifactSet::commit() const {
    fs::create_directories(directory_);
    std::vector<fs::path> written;
    try {
        for (const auto& [name, content] : files_) {
            const fs::path target = directory_ / name;
            write_atomic(target, content);
            written.push_back(target);
        }
    } catch (...) {
        for (const auto& path : written) {
            std::error_code ignored;
            fs::remove(path, ignored);
        }
        throw;
    }
    return written;
}

}  // namespace regrowth
