#include "config.hpp"

#include <wdmcqf/optimizer.hpp>

#include "json.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wdmcqf::cli {
namespace {

const std::set<std::string> kKnownSections = {
    "protocol", "channel", "sweep", "classical", "montecarlo", "fiber", "table1"};

constexpr std::uint64_t kGuardCeiling = 100'000'000;
constexpr std::uint64_t kMaxGridPoints = 100'000;

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    std::size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool parse_u64_text(const std::string& text, std::uint64_t& out) {
    std::string t = trim(text);
    if (t.empty() || t[0] == '-' || t[0] == '+') return false;
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (errno == 0 && end && *end == '\0') {
        out = v;
        return true;
    }
    // integers are also accepted in decimal/scientific spelling (1e8, 2.5e6)
    errno = 0;
    double d = std::strtod(t.c_str(), &end);
    if (errno != 0 || !end || *end != '\0') return false;
    if (!(d >= 0.0) || d >= 1.8446744073709552e19) return false;
    if (d != std::floor(d)) return false;
    out = static_cast<std::uint64_t>(d);
    return true;
}

bool parse_double_text(const std::string& text, double& out) {
    std::string t = trim(text);
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    double d = std::strtod(t.c_str(), &end);
    if (errno != 0 || !end || *end != '\0') return false;
    if (!std::isfinite(d)) return false;
    out = d;
    return true;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string t = trim(text);
    if (t.empty()) return parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = t.find(',', pos);
        parts.push_back(trim(t.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return parts;
}

// One config value, abstracted over the INI and JSON sources so the schema
// below is written once. Every getter throws std::invalid_argument with a
// source-anchored message on a type or range problem.
class ValueReader {
  public:
    virtual ~ValueReader() = default;
    virtual std::uint64_t as_u64() = 0;
    virtual double as_double() = 0;
    virtual std::string as_string() = 0;
    virtual std::vector<std::uint64_t> as_u64_list() = 0;
    virtual std::vector<double> as_double_list() = 0;
    [[noreturn]] virtual void fail(const std::string& why) = 0;

    std::uint32_t as_u32() {
        std::uint64_t v = as_u64();
        if (v > 0xFFFFFFFFull) fail("value does not fit in 32 bits");
        return static_cast<std::uint32_t>(v);
    }
    std::vector<std::uint32_t> as_u32_list() {
        std::vector<std::uint32_t> out;
        for (std::uint64_t v : as_u64_list()) {
            if (v > 0xFFFFFFFFull) fail("list element does not fit in 32 bits");
            out.push_back(static_cast<std::uint32_t>(v));
        }
        return out;
    }
    std::optional<std::uint64_t> as_threshold() {
        std::string s = as_string();
        if (s == "auto") return std::nullopt;
        std::uint64_t v = 0;
        if (!parse_u64_text(s, v)) fail("expected \"auto\" or an unsigned integer");
        return v;
    }
};

class IniValue final : public ValueReader {
  public:
    IniValue(const std::string& src, int line, const std::string& section,
             const std::string& key, const std::string& value)
        : src_(src), line_(line), section_(section), key_(key), value_(value) {}

    std::uint64_t as_u64() override {
        std::uint64_t v = 0;
        if (!parse_u64_text(value_, v)) fail("expected an unsigned integer");
        return v;
    }
    double as_double() override {
        double v = 0;
        if (!parse_double_text(value_, v)) fail("expected a finite number");
        return v;
    }
    std::string as_string() override { return value_; }
    std::vector<std::uint64_t> as_u64_list() override {
        std::vector<std::uint64_t> out;
        for (const std::string& part : split_list(value_)) {
            std::uint64_t v = 0;
            if (!parse_u64_text(part, v))
                fail("list element '" + part + "' is not an unsigned integer");
            out.push_back(v);
        }
        return out;
    }
    std::vector<double> as_double_list() override {
        std::vector<double> out;
        for (const std::string& part : split_list(value_)) {
            double v = 0;
            if (!parse_double_text(part, v))
                fail("list element '" + part + "' is not a finite number");
            out.push_back(v);
        }
        return out;
    }
    [[noreturn]] void fail(const std::string& why) override {
        throw std::invalid_argument(src_ + ":" + std::to_string(line_) +
                                    ": invalid value for '" + key_ + "' in [" + section_ +
                                    "]: " + why);
    }

  private:
    const std::string& src_;
    int line_;
    const std::string& section_;
    const std::string& key_;
    const std::string& value_;
};

class JsonValue final : public ValueReader {
  public:
    JsonValue(const std::string& src, const std::string& section, const std::string& key,
              const nlohmann::json& value)
        : src_(src), section_(section), key_(key), value_(value) {}

    std::uint64_t as_u64() override { return element_u64(value_); }
    double as_double() override {
        if (!value_.is_number()) fail("expected a number");
        double v = value_.get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }
    std::string as_string() override {
        if (!value_.is_string()) fail("expected a string");
        return value_.get<std::string>();
    }
    std::vector<std::uint64_t> as_u64_list() override {
        if (!value_.is_array()) fail("expected an array");
        std::vector<std::uint64_t> out;
        for (const auto& e : value_) out.push_back(element_u64(e));
        return out;
    }
    std::vector<double> as_double_list() override {
        if (!value_.is_array()) fail("expected an array");
        std::vector<double> out;
        for (const auto& e : value_) {
            if (!e.is_number()) fail("array elements must be numbers");
            double v = e.get<double>();
            if (!std::isfinite(v)) fail("array elements must be finite");
            out.push_back(v);
        }
        return out;
    }
    [[noreturn]] void fail(const std::string& why) override {
        throw std::invalid_argument(src_ + ": /" + section_ + "/" + key_ + ": " + why);
    }

  private:
    std::uint64_t element_u64(const nlohmann::json& e) {
        if (e.is_number_unsigned()) return e.get<std::uint64_t>();
        if (e.is_number_integer()) {
            std::int64_t v = e.get<std::int64_t>();
            if (v < 0) fail("expected an unsigned integer");
            return static_cast<std::uint64_t>(v);
        }
        if (e.is_number_float()) {
            double d = e.get<double>();
            if (d >= 0.0 && d < 1.8446744073709552e19 && d == std::floor(d))
                return static_cast<std::uint64_t>(d);
        }
        fail("expected an unsigned integer");
    }

    const std::string& src_;
    const std::string& section_;
    const std::string& key_;
    const nlohmann::json& value_;
};

// Values that need whole-file context to resolve: the sweep n-grid has two
// mutually exclusive spellings, and the [classical] fields interact with the
// built-in placeholder curve (see resolve_classical).
struct RawFields {
    std::optional<std::vector<std::uint64_t>> n_values;
    std::optional<std::uint64_t> n_min;
    std::optional<std::uint64_t> n_max;
    std::optional<std::uint64_t> n_points;
    bool classical_formula_set = false;
    bool classical_coefficients_set = false;
    bool classical_provenance_set = false;
};

// Returns false when the key is not part of the section's schema.
bool assign_key(RunConfig& cfg, RawFields& raw, const std::string& section,
                const std::string& key, ValueReader& v) {
    if (section == "protocol") {
        if (key == "n") return cfg.protocol.input_bits = v.as_u64(), true;
        if (key == "code_rate") return cfg.protocol.code_rate = v.as_double(), true;
        if (key == "code_distance") return cfg.protocol.code_distance = v.as_double(), true;
        if (key == "channels") return cfg.protocol.channels = v.as_u32(), true;
        if (key == "mu") return cfg.protocol.mu = v.as_double(), true;
        if (key == "visibility") return cfg.protocol.visibility = v.as_double(), true;
        if (key == "dark_count") return cfg.protocol.dark_count = v.as_double(), true;
        if (key == "epsilon") return cfg.protocol.epsilon = v.as_double(), true;
        return false;
    }
    if (section == "channel") {
        if (key == "distance_km") return cfg.channel.distance_km = v.as_double(), true;
        if (key == "loss_db_per_km") return cfg.channel.loss_db_per_km = v.as_double(), true;
        if (key == "detector_efficiency")
            return cfg.channel.detector_efficiency = v.as_double(), true;
        return false;
    }
    if (section == "sweep") {
        if (key == "n_values") return raw.n_values = v.as_u64_list(), true;
        if (key == "n_min") return raw.n_min = v.as_u64(), true;
        if (key == "n_max") return raw.n_max = v.as_u64(), true;
        if (key == "n_points") return raw.n_points = v.as_u64(), true;
        if (key == "k_values") return cfg.sweep.k_values = v.as_u32_list(), true;
        if (key == "distances_km") return cfg.sweep.distances_km = v.as_double_list(), true;
        return false;
    }
    if (section == "classical") {
        if (key == "limit_formula") {
            std::string id = v.as_string();
            if (id != "best_known" && id != "sqrt_affine")
                v.fail("unknown limit_formula '" + id +
                       "' (supported: best_known, sqrt_affine)");
            cfg.classical.formula_id = id;
            cfg.classical.kind =
                id == "best_known" ? CurveKind::best_known : CurveKind::classical_limit;
            raw.classical_formula_set = true;
            return true;
        }
        if (key == "limit_coefficients") {
            cfg.classical.coefficients = v.as_double_list();
            raw.classical_coefficients_set = true;
            return true;
        }
        if (key == "provenance") {
            cfg.classical.provenance = v.as_string();
            raw.classical_provenance_set = true;
            return true;
        }
        return false;
    }
    if (section == "montecarlo") {
        if (key == "trials") return cfg.montecarlo.trials = v.as_u64(), true;
        if (key == "seed") return cfg.montecarlo.seed = v.as_u64(), true;
        if (key == "scenario") {
            std::string s = v.as_string();
            if (s != "equal" && s != "different" && s != "both")
                v.fail("scenario must be one of equal, different, both");
            cfg.montecarlo.scenario = s;
            return true;
        }
        if (key == "threshold") return cfg.montecarlo.threshold = v.as_threshold(), true;
        if (key == "guard_max_pulses") {
            std::uint64_t g = v.as_u64();
            if (g == 0 || g > kGuardCeiling)
                v.fail("guard_max_pulses must be in [1, 100000000] (the simulator's "
                       "hard ceiling)");
            cfg.montecarlo.guard_max_pulses = g;
            return true;
        }
        if (key == "trials_out") return cfg.montecarlo.trials_out = v.as_string(), true;
        return false;
    }
    if (section == "fiber") {
        if (key == "smf_a_km") return cfg.fiber.smf_a_km = v.as_double(), true;
        if (key == "smf_b_km") return cfg.fiber.smf_b_km = v.as_double(), true;
        if (key == "dcf_km") return cfg.fiber.dcf_km = v.as_double(), true;
        if (key == "d_smf_ps_nm_km") return cfg.fiber.d_smf_ps_nm_km = v.as_double(), true;
        if (key == "d_dcf_ps_nm_km") return cfg.fiber.d_dcf_ps_nm_km = v.as_double(), true;
        if (key == "spacing_nm") return cfg.fiber.spacing_nm = v.as_double(), true;
        if (key == "channels") return cfg.fiber.channels = v.as_u32(), true;
        if (key == "rep_rate_mhz") {
            double mhz = v.as_double();
            if (!(mhz > 0.0)) v.fail("repetition rate must be positive");
            cfg.fiber.rep_rate_hz = mhz * 1e6;
            return true;
        }
        if (key == "mod_window_ps") return cfg.fiber.mod_window_ps = v.as_double(), true;
        if (key == "group_delay_us_per_km")
            return cfg.fiber.group_delay_us_per_km = v.as_double(), true;
        if (key == "recombination_tolerance_ps")
            return cfg.fiber.recombination_tolerance_ps = v.as_double(), true;
        return false;
    }
    if (section == "table1") {
        if (key == "fixture_csv") return cfg.table1.fixture_csv = v.as_string(), true;
        return false;
    }
    return false;
}

// Touching [classical] replaces the built-in placeholder curve, so fields the
// file did not spell out must not leak from it: best_known takes no
// coefficients, and the provenance text must describe what will actually be
// evaluated.
void resolve_classical(RunConfig& cfg, const RawFields& raw) {
    if (!raw.classical_formula_set && !raw.classical_coefficients_set) return;
    if (cfg.classical.formula_id == "best_known" && !raw.classical_coefficients_set)
        cfg.classical.coefficients.clear();
    if (!raw.classical_provenance_set)
        cfg.classical.provenance = cfg.classical.formula_id == "best_known"
                                       ? "32*sqrt(n), the best-known classical protocol"
                                       : "sqrt_affine coefficients from [classical]";
}

void resolve_sweep(RunConfig& cfg, const RawFields& raw, const std::string& src) {
    if (!cfg.sweep.present) return;
    bool range_part = raw.n_min || raw.n_max || raw.n_points;
    if (raw.n_values && range_part)
        throw std::invalid_argument(
            src + ": [sweep] gives both n_values and an n_min/n_max/n_points range");
    if (raw.n_values) {
        cfg.sweep.n_values = *raw.n_values;
    } else if (range_part) {
        if (!(raw.n_min && raw.n_max && raw.n_points))
            throw std::invalid_argument(
                src + ": [sweep] range needs all three of n_min, n_max, n_points");
        if (*raw.n_points > kMaxGridPoints)
            throw std::invalid_argument(src + ": [sweep] n_points exceeds " +
                                        std::to_string(kMaxGridPoints));
        try {
            cfg.sweep.n_values = log_spaced_grid(*raw.n_min, *raw.n_max,
                                                 static_cast<std::size_t>(*raw.n_points));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(src + ": [sweep]: " + e.what());
        }
    } else {
        throw std::invalid_argument(
            src + ": [sweep] needs either n_values or the n_min/n_max/n_points range");
    }
    for (std::uint32_t k : cfg.sweep.k_values)
        if (k == 0)
            throw std::invalid_argument(src + ": [sweep] k_values entries must be positive");
}

RunConfig parse_ini(const std::string& src, const std::string& text) {
    RunConfig cfg;
    cfg.classical = default_limit_curve();
    cfg.source = src;
    RawFields raw;
    std::set<std::string> seen;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    auto anchored = [&](int at, const std::string& msg) {
        return std::invalid_argument(src + ":" + std::to_string(at) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++ln;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw anchored(ln, "expected '[section]'");
            section = trim(t.substr(1, t.size() - 2));
            if (!kKnownSections.count(section))
                throw anchored(ln, "unknown section '[" + section + "]'");
            if (section == "sweep") cfg.sweep.present = true;
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw anchored(ln, "expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw anchored(ln, "key '" + key + "' appears before any [section]");
        if (key.empty()) throw anchored(ln, "empty key");
        if (!seen.insert(section + "." + key).second)
            throw anchored(ln, "duplicate key '" + key + "' in [" + section + "]");
        IniValue v(src, ln, section, key, value);
        if (!assign_key(cfg, raw, section, key, v))
            throw anchored(ln, "unknown key '" + key + "' in [" + section + "]");
    }
    resolve_classical(cfg, raw);
    resolve_sweep(cfg, raw, src);
    return cfg;
}

RunConfig parse_json_config(const std::string& src, const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(src + ": invalid JSON: " + std::string(e.what()));
    }
    if (!root.is_object())
        throw std::invalid_argument(src + ": top level must be a JSON object");
    RunConfig cfg;
    cfg.classical = default_limit_curve();
    cfg.source = src;
    RawFields raw;
    for (const auto& [section, body] : root.items()) {
        if (!kKnownSections.count(section))
            throw std::invalid_argument(src + ": /" + section + ": unknown section");
        if (!body.is_object())
            throw std::invalid_argument(src + ": /" + section + ": must be an object");
        if (section == "sweep") cfg.sweep.present = true;
        for (const auto& [key, value] : body.items()) {
            JsonValue v(src, section, key, value);
            if (!assign_key(cfg, raw, section, key, v))
                throw std::invalid_argument(src + ": /" + section + "/" + key +
                                            ": unknown key");
        }
    }
    resolve_classical(cfg, raw);
    resolve_sweep(cfg, raw, src);
    return cfg;
}

} // namespace

ClassicalCurve default_limit_curve() {
    ClassicalCurve curve;
    curve.kind = CurveKind::classical_limit;
    curve.formula_id = "sqrt_affine";
    curve.coefficients = {2.0, 0.0};
    curve.provenance =
        "built-in placeholder 2*sqrt(n); supply the published optimized bound via "
        "[classical]";
    return curve;
}

bool parse_unsigned_text(const std::string& text, std::uint64_t& out) {
    return parse_u64_text(text, out);
}

bool parse_number_text(const std::string& text, double& out) {
    return parse_double_text(text, out);
}

std::string trim_text(const std::string& text) { return trim(text); }

std::vector<std::string> split_csv_line(const std::string& line) {
    return split_list(line);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument(path + ": cannot read config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    bool looks_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    if (!looks_json) {
        std::size_t first = text.find_first_not_of(" \t\r\n");
        looks_json = first != std::string::npos && text[first] == '{';
    }
    return looks_json ? parse_json_config(path, text) : parse_ini(path, text);
}

} // namespace wdmcqf::cli
