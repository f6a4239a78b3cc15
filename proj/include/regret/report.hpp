// Deterministic report emission: CSV tables with fixed column order,
// doubles printed to nine significant digits, atomic file replacement,
// and a config digest for the JSON metadata block.
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "regret/errors.hpp"
#include "regret/money.hpp"

namespace regret::io {

inline constexpr std::string_view kVersion = "0.1.0";

/// %.9g formatting; integral doubles keep a plain form.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// FNV-1a 64-bit over the raw config text, as a hex string.
inline std::string digest(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Writes via a temporary file in the same directory plus rename, so a
/// crash never leaves a half-written report behind.
inline void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

/// Row-oriented CSV builder with a fixed header.
class Csv {
public:
    explicit Csv(std::vector<std::string> header) : columns_(header.size()) {
        append_row(header);
    }

    Csv& cell(std::string value) {
        row_.push_back(std::move(value));
        if (row_.size() == columns_) {
            flush_row();
        }
        return *this;
    }

    Csv& cell(double v) { return cell(fmt_double(v)); }
    Csv& cell(int v) { return cell(std::to_string(v)); }
    Csv& cell(std::int64_t v) { return cell(std::to_string(v)); }
    Csv& cell(Money m) { return cell(m.str()); }

    const std::string& text() const {
        if (!row_.empty()) throw IoError("CSV row incomplete");
        return text_;
    }

    void write(const std::filesystem::path& path) const { write_text_atomic(path, text()); }

private:
    void append_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += escape(cells[i]);
        }
        text_ += '\n';
    }

    void flush_row() {
        append_row(row_);
        row_.clear();
    }

    static std::string escape(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    std::size_t columns_;
    std::vector<std::string> row_;
    std::string text_;
};

/// Reader for the CSVs this library writes; handles quoted separators,
/// doubled quotes, and newlines inside quoted cells.
inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    bool row_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                row_started = true;
                break;
            case ',':
                cells.push_back(std::move(cell));
                cell.clear();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_started || !cell.empty() || !cells.empty()) {
                    cells.push_back(std::move(cell));
                    cell.clear();
                    rows.push_back(std::move(cells));
                    cells.clear();
                    row_started = false;
                }
                break;
            default:
                cell += c;
                row_started = true;
                break;
        }
    }
    if (row_started || !cell.empty() || !cells.empty()) {
        cells.push_back(std::move(cell));
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace regret::io
