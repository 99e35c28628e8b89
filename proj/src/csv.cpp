#include "orlicz/csv.hpp"

#include "orlicz/errors.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace orlicz {

std::string csv_field(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    bool needs_quote = s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quote) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw DomainError("csv header must be nonempty");
}

void CsvWriter::add_row(std::vector<std::string> fields) {
    if (fields.size() != header_.size())
        throw DomainError("csv row arity does not match the header");
    rows_.push_back(std::move(fields));
}

std::string CsvWriter::str() const {
    std::string out;
    auto append_line = [&](const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    append_line(header_);
    for (const auto& r : rows_) append_line(r);
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw ConfigError("cannot create directory " + target.parent_path().string());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw ConfigError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw ConfigError("cannot rename " + tmp.string() + " to " + path);
}

std::pair<std::vector<double>, std::vector<double>> load_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::vector<double> t, a;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string f1, f2;
        if (!std::getline(row, f1, ',') || !std::getline(row, f2, ','))
            throw ConfigError(path + ": line " + std::to_string(lineno) +
                              " needs two comma-separated columns");
        char* end1 = nullptr;
        char* end2 = nullptr;
        errno = 0;
        double tv = std::strtod(f1.c_str(), &end1);
        double av = std::strtod(f2.c_str(), &end2);
        bool parsed = end1 != f1.c_str() && *end1 == '\0' && end2 != f2.c_str() && *end2 == '\0' &&
                      errno == 0;
        if (!parsed) {
            if (lineno == 1 && t.empty()) continue; // header row
            throw ConfigError(path + ": line " + std::to_string(lineno) + " is not numeric");
        }
        t.push_back(tv);
        a.push_back(av);
    }
    if (t.empty()) throw ConfigError(path + ": no data rows");
    return {std::move(t), std::move(a)};
}

} // namespace orlicz
