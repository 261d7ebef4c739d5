#include "render.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace wdmcqf::cli {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.5e", v);
    return buf;
}

double quantize(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(fmt_double(v).c_str(), nullptr);
}

nlohmann::ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return quantize(v);
}

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

std::string fmt_bool(bool v) { return v ? "1" : "0"; }

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append_row(header);
    for (const auto& row : rows) append_row(row);
    return out;
}

std::string json_document(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument(out_path + ": cannot open output file");
    out << content;
    out.flush();
    if (!out) throw std::invalid_argument(out_path + ": write failed");
}

} // namespace wdmcqf::cli
