#include "commands.hpp"

#include "render.hpp"
#include "table1_fixture.hpp"

#include <wdmcqf/baselines.hpp>
#include <wdmcqf/fiber_plan.hpp>
#include <wdmcqf/montecarlo.hpp>
#include <wdmcqf/optimizer.hpp>
#include <wdmcqf/protocol.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace wdmcqf::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw != 0 ? hw : 1;
}

std::string pick_format(const CommandOptions& opt, const char* fallback) {
    return opt.format.empty() ? std::string(fallback) : opt.format;
}

// Builds the library parameter set from the config, requiring [protocol] n.
ProtocolParams params_from(const RunConfig& cfg, const char* command) {
    if (!cfg.protocol.input_bits) {
        throw std::invalid_argument(std::string(command) + ": " + cfg.source +
                                    " must set 'n' in [protocol]");
    }
    ProtocolParams p;
    p.input_bits = *cfg.protocol.input_bits;
    p.code_rate = cfg.protocol.code_rate;
    p.code_distance = cfg.protocol.code_distance;
    p.channel_count = cfg.protocol.channels;
    p.mean_photon_number = cfg.protocol.mu.value_or(0.0);
    p.visibility = cfg.protocol.visibility;
    p.dark_count_prob = cfg.protocol.dark_count;
    p.error_tolerance = cfg.protocol.epsilon;
    p.channel.distance_km = cfg.channel.distance_km;
    p.channel.loss_db_per_km = cfg.channel.loss_db_per_km;
    p.channel.detector_efficiency = cfg.channel.detector_efficiency;
    return p;
}

const char* scenario_label(Scenario s) {
    return s == Scenario::equal_inputs ? "equal" : "different";
}

const char* verdict_label(Verdict v) {
    return v == Verdict::equal ? "equal" : "different";
}

}  // namespace

int cmd_optimize(const RunConfig& cfg, const CommandOptions& opt) {
    ProtocolParams p = params_from(cfg, "optimize");
    OptimizationResult best = minimize_photon_number(p);

    // gamma_q compares against the single-channel optimum at the same n and
    // distance; with one channel the ratio is 1 by definition.
    OptimizationResult base = best;
    if (p.channel_count != 1) {
        ProtocolParams single = p;
        single.channel_count = 1;
        base = minimize_photon_number(single);
    }
    GammaRatios gammas = gamma_ratios(best.q_bits_both, p.input_bits,
                                      base.feasible ? base.q_bits_both : kNaN);
    double best_known = classical_best_known(p.input_bits);
    double limit = classical_limit(p.input_bits, p.error_tolerance, cfg.classical);

    std::string format = pick_format(opt, "json");
    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["command"] = "optimize";
        doc["n"] = p.input_bits;
        doc["channels"] = p.channel_count;
        doc["distance_km"] = json_number(p.channel.distance_km);
        doc["feasible"] = best.feasible;
        doc["mu_star"] = json_number(best.mu_star);
        doc["mu_cap"] = json_number(best.mu_cap);
        doc["c1_threshold"] = best.decision.c1_threshold;
        doc["p_error"] = json_number(best.decision.p_error);
        doc["p_err_equal"] = json_number(best.decision.p_err_equal);
        doc["p_err_diff"] = json_number(best.decision.p_err_diff);
        doc["q_bits"] = json_number(best.q_bits);
        doc["q_bits_both"] = json_number(best.q_bits_both);
        doc["q_single_channel_both"] = json_number(base.feasible ? base.q_bits_both : kNaN);
        doc["classical_best_known"] = json_number(best_known);
        doc["classical_limit"] = json_number(limit);
        doc["classical_limit_provenance"] = cfg.classical.provenance;
        doc["gamma_c"] = json_number(gammas.vs_classical);
        doc["gamma_q"] = json_number(gammas.vs_single_channel);
        write_output(opt.out_path, json_document(doc));
    } else {
        std::vector<std::string> header = {
            "n",           "channels",      "distance_km",
            "feasible",    "mu_star",       "mu_cap",
            "c1_threshold", "p_error",      "p_err_equal",
            "p_err_diff",  "q_bits",        "q_bits_both",
            "q_single_channel_both", "classical_best_known", "classical_limit",
            "gamma_c",     "gamma_q"};
        std::vector<std::string> row = {
            fmt_u64(p.input_bits),
            fmt_u64(p.channel_count),
            fmt_double(p.channel.distance_km),
            fmt_bool(best.feasible),
            fmt_double(best.mu_star),
            fmt_double(best.mu_cap),
            fmt_u64(best.decision.c1_threshold),
            fmt_double(best.decision.p_error),
            fmt_double(best.decision.p_err_equal),
            fmt_double(best.decision.p_err_diff),
            fmt_double(best.q_bits),
            fmt_double(best.q_bits_both),
            fmt_double(base.feasible ? base.q_bits_both : kNaN),
            fmt_double(best_known),
            fmt_double(limit),
            fmt_double(gammas.vs_classical),
            fmt_double(gammas.vs_single_channel)};
        write_output(opt.out_path, csv_table(header, {row}));
    }
    return best.feasible ? 0 : 2;
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt) {
    if (!cfg.sweep.present) {
        throw std::invalid_argument("sweep: " + cfg.source + " has no [sweep] section");
    }
    SweepGrid grid;
    grid.input_sizes = cfg.sweep.n_values;
    grid.channel_counts = cfg.sweep.k_values;
    grid.distances_km = cfg.sweep.distances_km;

    SweepFixed fixed;
    fixed.code_rate = cfg.protocol.code_rate;
    fixed.code_distance = cfg.protocol.code_distance;
    fixed.visibility = cfg.protocol.visibility;
    fixed.dark_count_prob = cfg.protocol.dark_count;
    fixed.error_tolerance = cfg.protocol.epsilon;
    fixed.loss_db_per_km = cfg.channel.loss_db_per_km;
    fixed.detector_efficiency = cfg.channel.detector_efficiency;

    // An empty grid dimension is a valid request for zero rows.
    std::vector<SweepRow> rows;
    const bool empty_grid = grid.input_sizes.empty() || grid.channel_counts.empty() ||
                            grid.distances_km.empty();
    if (!empty_grid) {
        rows = sweep(grid, fixed, cfg.classical, resolve_threads(opt.threads));
    }

    std::string format = pick_format(opt, "csv");
    if (format == "csv") {
        std::vector<std::string> header = {
            "n",        "k",        "distance_km", "feasible",
            "mu_star",  "c1_threshold", "p_error", "q_bits",
            "q_bits_both", "q_single_channel", "classical_best_known",
            "classical_limit", "gamma_c", "gamma_q"};
        std::vector<std::vector<std::string>> cells;
        cells.reserve(rows.size());
        for (const SweepRow& r : rows) {
            cells.push_back({fmt_u64(r.input_bits), fmt_u64(r.channel_count),
                             fmt_double(r.distance_km), fmt_bool(r.feasible),
                             fmt_double(r.mu_star), fmt_u64(r.c1_threshold),
                             fmt_double(r.p_error), fmt_double(r.q_bits),
                             fmt_double(r.q_bits_both), fmt_double(r.q_single_channel),
                             fmt_double(r.classical_best_known),
                             fmt_double(r.classical_limit), fmt_double(r.gamma_c),
                             fmt_double(r.gamma_q)});
        }
        write_output(opt.out_path, csv_table(header, cells));
    } else {
        nlohmann::ordered_json doc;
        doc["command"] = "sweep";
        doc["classical_limit_provenance"] = cfg.classical.provenance;
        doc["rows"] = nlohmann::ordered_json::array();
        for (const SweepRow& r : rows) {
            nlohmann::ordered_json jr;
            jr["n"] = r.input_bits;
            jr["k"] = r.channel_count;
            jr["distance_km"] = json_number(r.distance_km);
            jr["feasible"] = r.feasible;
            jr["mu_star"] = json_number(r.mu_star);
            jr["c1_threshold"] = r.c1_threshold;
            jr["p_error"] = json_number(r.p_error);
            jr["q_bits"] = json_number(r.q_bits);
            jr["q_bits_both"] = json_number(r.q_bits_both);
            jr["q_single_channel"] = json_number(r.q_single_channel);
            jr["classical_best_known"] = json_number(r.classical_best_known);
            jr["classical_limit"] = json_number(r.classical_limit);
            jr["gamma_c"] = json_number(r.gamma_c);
            jr["gamma_q"] = json_number(r.gamma_q);
            doc["rows"].push_back(std::move(jr));
        }
        write_output(opt.out_path, json_document(doc));
    }
    return 0;
}

namespace {

// Re-derives every trial of an experiment from its per-trial seed and writes
// one CSV row each. simulate_trial is deterministic in (params, geometry,
// mask, threshold, seed), so the rows reproduce the summarized run exactly.
void write_trials_csv(const std::string& path, const ProtocolParams& p,
                      const CodeGeometry& geometry, const std::vector<Scenario>& scenarios,
                      const std::vector<ExperimentSummary>& summaries,
                      std::uint64_t master_seed, std::uint64_t trials) {
    std::vector<std::string> header = {"scenario", "trial", "seed", "c0", "c1", "verdict"};
    std::vector<std::vector<std::string>> cells;
    cells.reserve(scenarios.size() * trials);
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        CodewordDiffMask mask = build_codeword_pair(p.input_bits, p.code_rate,
                                                    p.code_distance, scenarios[s],
                                                    master_seed);
        for (std::uint64_t i = 0; i < trials; ++i) {
            TrialRecord rec = simulate_trial(p, geometry, mask, summaries[s].threshold,
                                             SplitRng::trial_seed(master_seed, i));
            cells.push_back({scenario_label(scenarios[s]), fmt_u64(i), fmt_u64(rec.seed),
                             fmt_u64(rec.c0), fmt_u64(rec.c1), verdict_label(rec.verdict)});
        }
    }
    write_output(path, csv_table(header, cells));
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt) {
    ProtocolParams p = params_from(cfg, "simulate");
    const MonteCarloConfig& mc = cfg.montecarlo;

    std::string mu_source = "config";
    if (!cfg.protocol.mu) {
        OptimizationResult best = minimize_photon_number(p);
        if (!best.feasible) {
            std::cerr << "simulate: no feasible mean photon number at these parameters"
                      << " (p_error " << fmt_double(best.decision.p_error)
                      << " at the search cap mu = " << fmt_double(best.mu_cap)
                      << "); set 'mu' in [protocol] to force one\n";
            return 2;
        }
        p.mean_photon_number = best.mu_star;
        mu_source = "optimized";
    }

    CodeGeometry geometry = derive_code_geometry(p);
    if (geometry.pulse_count > mc.guard_max_pulses) {
        throw std::domain_error(
            "simulate: the geometry needs " + fmt_u64(geometry.pulse_count) +
            " pulses per trial, above guard_max_pulses = " + fmt_u64(mc.guard_max_pulses) +
            "; raise the guard in [montecarlo] to confirm the run is intentional");
    }

    std::uint64_t seed = opt.seed_override.value_or(mc.seed);
    unsigned threads = resolve_threads(opt.threads);

    std::vector<Scenario> scenarios;
    if (mc.scenario == "equal") {
        scenarios = {Scenario::equal_inputs};
    } else if (mc.scenario == "different") {
        scenarios = {Scenario::worst_case_different};
    } else {
        scenarios = {Scenario::equal_inputs, Scenario::worst_case_different};
    }

    std::vector<ExperimentSummary> summaries;
    summaries.reserve(scenarios.size());
    for (Scenario s : scenarios) {
        summaries.push_back(
            run_experiment(p, geometry, s, mc.trials, seed, threads, mc.threshold));
    }

    if (!mc.trials_out.empty()) {
        write_trials_csv(mc.trials_out, p, geometry, scenarios, summaries, seed, mc.trials);
    }

    std::string format = pick_format(opt, "json");
    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["command"] = "simulate";
        doc["seed"] = seed;
        doc["n"] = p.input_bits;
        doc["channels"] = p.channel_count;
        doc["pulses"] = geometry.pulse_count;
        doc["distance_km"] = json_number(p.channel.distance_km);
        doc["mu"] = json_number(p.mean_photon_number);
        doc["mu_source"] = mu_source;
        doc["scenarios"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            const ExperimentSummary& sum = summaries[i];
            nlohmann::ordered_json js;
            js["scenario"] = scenario_label(scenarios[i]);
            js["trials"] = sum.trials;
            js["threshold"] = sum.threshold;
            js["mean_c1"] = json_number(sum.mean_c1_equal ? *sum.mean_c1_equal
                                                          : sum.mean_c1_diff.value_or(kNaN));
            js["mean_c0"] = json_number(sum.mean_c0);
            js["empirical_error_rate"] = json_number(sum.empirical_error_rate);
            js["ci_halfwidth"] = json_number(sum.ci_halfwidth);
            js["analytic_click_prob"] = json_number(sum.analytic_click_prob);
            js["analytic_error"] = json_number(sum.analytic_error);
            doc["scenarios"].push_back(std::move(js));
        }
        write_output(opt.out_path, json_document(doc));
    } else {
        std::vector<std::string> header = {
            "scenario", "trials", "seed", "threshold", "mu", "mean_c1", "mean_c0",
            "empirical_error_rate", "ci_halfwidth", "analytic_click_prob", "analytic_error"};
        std::vector<std::vector<std::string>> cells;
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            const ExperimentSummary& sum = summaries[i];
            double mean_c1 = sum.mean_c1_equal ? *sum.mean_c1_equal
                                               : sum.mean_c1_diff.value_or(kNaN);
            cells.push_back({scenario_label(scenarios[i]), fmt_u64(sum.trials),
                             fmt_u64(seed), fmt_u64(sum.threshold),
                             fmt_double(p.mean_photon_number), fmt_double(mean_c1),
                             fmt_double(sum.mean_c0), fmt_double(sum.empirical_error_rate),
                             fmt_double(sum.ci_halfwidth),
                             fmt_double(sum.analytic_click_prob),
                             fmt_double(sum.analytic_error)});
        }
        write_output(opt.out_path, csv_table(header, cells));
    }
    return 0;
}

int cmd_plan_fiber(const RunConfig& cfg, const CommandOptions& opt) {
    if (!opt.format.empty() && opt.format != "json") {
        throw std::invalid_argument(
            "plan-fiber: the report is hierarchical and only renders as json");
    }
    const FiberConfig& f = cfg.fiber;
    FiberSegment smf_a{f.smf_a_km, f.d_smf_ps_nm_km};
    FiberSegment smf_b{f.smf_b_km, f.d_smf_ps_nm_km};
    FiberSegment dcf{f.dcf_km, f.d_dcf_ps_nm_km};
    ChannelGrid grid{f.channels, f.spacing_nm};
    TimingPlan plan{f.rep_rate_hz, f.mod_window_ps};
    PlanSettings settings;
    settings.recombination_tolerance_ps = f.recombination_tolerance_ps;
    settings.group_delay_us_per_km = f.group_delay_us_per_km;

    PlanReport report = validate_plan(smf_a, smf_b, dcf, grid, plan, settings);

    nlohmann::ordered_json doc;
    doc["command"] = "plan-fiber";
    doc["pass"] = report.pass;
    doc["channels_requested"] = f.channels;
    doc["max_channel_count"] = report.max_channel_count;
    doc["separation_a_ps"] = json_number(report.separation_a_ps);
    doc["separation_b_ps"] = json_number(report.separation_b_ps);
    doc["recombination_offset_ps"] = json_number(report.recombination_offset_ps);
    doc["recombination_tolerance_ps"] = json_number(f.recombination_tolerance_ps);
    doc["collision_clearance_a_ps"] = json_number(report.collision_clearance_a_ps);
    doc["collision_clearance_b_ps"] = json_number(report.collision_clearance_b_ps);
    doc["issues"] = nlohmann::ordered_json::array();
    for (const PlanIssue& issue : report.issues) {
        nlohmann::ordered_json ji;
        ji["code"] = issue.code;
        ji["detail"] = issue.detail;
        doc["issues"].push_back(std::move(ji));
    }
    write_output(opt.out_path, json_document(doc));
    return report.pass ? 0 : 2;
}

namespace {

struct FixtureRow {
    std::string label;
    std::uint64_t n = 0;
    std::uint64_t pulses = 0;
    double mu_a = 0.0;
    double mu_b = 0.0;
    double q_published = 0.0;
    double gamma_c_published = 0.0;
    double gamma_c_tolerance = 0.0;
    std::uint32_t channels = 0;
};

const char* kFixtureHeader =
    "label,n,pulses,mu_a,mu_b,q_published,gamma_c_published,gamma_c_tolerance,channels";

std::vector<FixtureRow> load_fixture(const std::string& path) {
    std::vector<FixtureRow> rows;
    if (path.empty()) {
        rows.reserve(kReferenceRowCount);
        for (const Table1Row& r : kReferenceRows) {
            rows.push_back({r.label, r.n, r.pulses, r.mu_a, r.mu_b, r.q_published,
                            r.gamma_c_published, r.gamma_c_tolerance, r.channels});
        }
        return rows;
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("table1: cannot read fixture " + path);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    auto fail = [&](const std::string& why) -> std::invalid_argument {
        return std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim_text(line);
        if (t.empty()) continue;
        if (!header_seen) {
            if (t != kFixtureHeader) {
                throw fail("fixture header must be exactly '" + std::string(kFixtureHeader) +
                           "'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells = split_csv_line(t);
        if (cells.size() != 9) {
            throw fail("expected 9 comma-separated cells, got " +
                       std::to_string(cells.size()));
        }
        FixtureRow row;
        row.label = cells[0];
        std::uint64_t channels = 0;
        if (row.label.empty()) throw fail("empty label");
        if (!parse_unsigned_text(cells[1], row.n) || row.n == 0) {
            throw fail("invalid n '" + cells[1] + "'");
        }
        if (!parse_unsigned_text(cells[2], row.pulses) || row.pulses == 0) {
            throw fail("invalid pulses '" + cells[2] + "'");
        }
        if (!parse_number_text(cells[3], row.mu_a) || row.mu_a <= 0) {
            throw fail("invalid mu_a '" + cells[3] + "'");
        }
        if (!parse_number_text(cells[4], row.mu_b) || row.mu_b <= 0) {
            throw fail("invalid mu_b '" + cells[4] + "'");
        }
        if (!parse_number_text(cells[5], row.q_published) || row.q_published <= 0) {
            throw fail("invalid q_published '" + cells[5] + "'");
        }
        if (!parse_number_text(cells[6], row.gamma_c_published) ||
            row.gamma_c_published <= 0) {
            throw fail("invalid gamma_c_published '" + cells[6] + "'");
        }
        if (!parse_number_text(cells[7], row.gamma_c_tolerance) ||
            row.gamma_c_tolerance < 0) {
            throw fail("invalid gamma_c_tolerance '" + cells[7] + "'");
        }
        if (!parse_unsigned_text(cells[8], channels) || channels == 0 ||
            channels > 0xffffffffULL) {
            throw fail("invalid channels '" + cells[8] + "'");
        }
        row.channels = static_cast<std::uint32_t>(channels);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

int cmd_table1(const RunConfig& cfg, const CommandOptions& opt) {
    std::vector<FixtureRow> fixture = load_fixture(cfg.table1.fixture_csv);
    if (fixture.empty()) {
        throw std::invalid_argument("table1: fixture " + cfg.table1.fixture_csv +
                                    " has no data rows");
    }

    struct Computed {
        double q_recomputed = 0.0;
        double q_rel_deviation = 0.0;
        double gamma_c_recomputed = 0.0;
        double gamma_c_deviation = 0.0;
        bool within_band = false;
    };
    std::vector<Computed> computed;
    computed.reserve(fixture.size());
    for (const FixtureRow& r : fixture) {
        CodeGeometry geometry = geometry_from_pulses(r.pulses, r.channels);
        Computed c;
        c.q_recomputed = communication_cost(r.mu_a, r.mu_b, geometry.codeword_bits);
        c.q_rel_deviation = relative_deviation(c.q_recomputed, r.q_published);
        c.gamma_c_recomputed = gamma_ratios(c.q_recomputed, r.n, c.q_recomputed).vs_classical;
        c.gamma_c_deviation = absolute_deviation(c.gamma_c_recomputed, r.gamma_c_published);
        c.within_band = std::fabs(c.gamma_c_deviation) <= r.gamma_c_tolerance;
        computed.push_back(c);
    }

    std::string format = pick_format(opt, "csv");
    if (format == "csv") {
        std::vector<std::string> header = {
            "label", "n", "pulses", "mu_a", "mu_b",
            "q_published", "q_recomputed", "q_rel_deviation",
            "gamma_c_published", "gamma_c_tolerance", "gamma_c_recomputed",
            "gamma_c_deviation", "gamma_within_band"};
        std::vector<std::vector<std::string>> cells;
        cells.reserve(fixture.size());
        for (std::size_t i = 0; i < fixture.size(); ++i) {
            const FixtureRow& r = fixture[i];
            const Computed& c = computed[i];
            cells.push_back({r.label, fmt_u64(r.n), fmt_u64(r.pulses), fmt_double(r.mu_a),
                             fmt_double(r.mu_b), fmt_double(r.q_published),
                             fmt_double(c.q_recomputed), fmt_double(c.q_rel_deviation),
                             fmt_double(r.gamma_c_published), fmt_double(r.gamma_c_tolerance),
                             fmt_double(c.gamma_c_recomputed), fmt_double(c.gamma_c_deviation),
                             fmt_bool(c.within_band)});
        }
        write_output(opt.out_path, csv_table(header, cells));
    } else {
        nlohmann::ordered_json doc;
        doc["command"] = "table1";
        doc["rows"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < fixture.size(); ++i) {
            const FixtureRow& r = fixture[i];
            const Computed& c = computed[i];
            nlohmann::ordered_json jr;
            jr["label"] = r.label;
            jr["n"] = r.n;
            jr["pulses"] = r.pulses;
            jr["mu_a"] = json_number(r.mu_a);
            jr["mu_b"] = json_number(r.mu_b);
            jr["q_published"] = json_number(r.q_published);
            jr["q_recomputed"] = json_number(c.q_recomputed);
            jr["q_rel_deviation"] = json_number(c.q_rel_deviation);
            jr["gamma_c_published"] = json_number(r.gamma_c_published);
            jr["gamma_c_tolerance"] = json_number(r.gamma_c_tolerance);
            jr["gamma_c_recomputed"] = json_number(c.gamma_c_recomputed);
            jr["gamma_c_deviation"] = json_number(c.gamma_c_deviation);
            jr["gamma_within_band"] = c.within_band;
            doc["rows"].push_back(std::move(jr));
        }
        write_output(opt.out_path, json_document(doc));
    }
    return 0;
}

}  // namespace wdmcqf::cli
