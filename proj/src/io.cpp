#include "rectiplan/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rectiplan {

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // %.17g always round-trips but pads pretty values; try shorter forms and
    // keep the first that reads back exactly.
    for (int prec = 1; prec < 17; ++prec) {
        char trial[40];
        std::snprintf(trial, sizeof trial, "%.*g", prec, v);
        if (std::strtod(trial, nullptr) == v) return trial;
    }
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) fail(Errc::IoError, "cannot create " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(Errc::IoError, "short write to " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::BadCsv, "cannot open " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;

        if (first) {
            first = false;
            bool has_alpha = false;
            for (char c : line)
                if (std::isalpha(static_cast<unsigned char>(c)) && c != 'e' && c != 'E' &&
                    c != 'x' && c != 'X')
                    has_alpha = true;
            if (has_alpha) continue;  // header
        }

        std::vector<double> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string cell = line.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
            if (end == cell.c_str() || (end && *end != '\0'))
                fail(Errc::BadCsv, "non-numeric field '" + cell + "' in " + path.string());
            fields.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && fields.size() != rows.front().size())
            fail(Errc::BadCsv, "ragged row in " + path.string());
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) fail(Errc::BadCsv, path.string() + " holds no samples");
    return rows;
}

std::vector<double> read_csv_values(const std::filesystem::path& path) {
    const auto rows = read_csv_rows(path);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.back());
    return out;
}

} // namespace rectiplan
