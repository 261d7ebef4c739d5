#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wdmcqf::cli {

// All floating-point output goes through one formatter: scientific notation
// with 6 significant digits. Identical inputs therefore produce identical
// bytes across runs, which keeps golden files and diffs meaningful.
std::string fmt_double(double v); // "nan" / "inf" / "-inf" for non-finite

// The double that fmt_double's text parses back to. JSON output carries
// quantized values so the two formats agree on every digit they print.
double quantize(double v);

// Quantized JSON number; non-finite values become null (JSON has no NaN).
nlohmann::ordered_json json_number(double v);

std::string fmt_u64(std::uint64_t v);
std::string fmt_bool(bool v); // "1" / "0"

// UTF-8 CSV with a header row, comma separators, LF line endings. Cells are
// pre-formatted; caller guarantees they contain no commas or line breaks.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

// Serialized JSON document with a trailing newline.
std::string json_document(const nlohmann::ordered_json& doc);

// Writes to the path, or to stdout when the path is empty or "-".
void write_output(const std::string& out_path, const std::string& content);

} // namespace wdmcqf::cli
