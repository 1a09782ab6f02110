#include "bmfield/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include <CLI11.hpp>

#include "bmfield/chaos.hpp"
#include "bmfield/config.hpp"
#include "bmfield/covariance.hpp"
#include "bmfield/errors.hpp"
#include "bmfield/field.hpp"
#include "bmfield/harness.hpp"
#include "bmfield/jsonw.hpp"
#include "bmfield/quadrature.hpp"
#include "bmfield/second_chaos.hpp"
#include "bmfield/stats.hpp"
#include "bmfield/variance.hpp"

namespace bm {

namespace fs = std::filesystem;

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Workspace {
    Config cfg;
    fs::path out_dir;

    void write(const std::string& name, const std::string& content) const {
        fs::create_directories(out_dir);
        std::ofstream f(out_dir / name);
        if (!f) throw Error("cannot write " + (out_dir / name).string());
        f << content;
        if (!content.empty() && content.back() != '\n') f << "\n";
    }
};

Functional build_functional(const Config& cfg) {
    const std::string name = cfg.get_string("functional", "name");
    const int m = cfg.get_int("functional", "m", 1);
    auto params = cfg.section_doubles("functional");
    Functional g = make_functional(name, m, params);
    if (cfg.has("functional", "integrability"))
        g.integrability = cfg.get_double("functional", "integrability");
    return g;
}

CovarianceModel build_covariance(const Config& cfg) {
    const std::string kind = cfg.get_string("model", "kind");
    const int n = cfg.get_int("model", "n", 1);
    const int m = cfg.get_int("model", "m", 1);
    return make_covariance(kind, n, m, cfg.section_doubles("model"),
                           cfg.section_double_lists("model"));
}

std::shared_ptr<SpectralModel> build_spectral(const Config& cfg) {
    const std::string kind = cfg.get_string("model", "kind");
    if (kind.rfind("spectral:", 0) != 0)
        throw ConfigError("model.kind: this subcommand needs a spectral model "
                          "(kind = spectral:<name>), got '" +
                          kind + "'");
    auto params = cfg.section_doubles("model");
    params["n"] = double(cfg.get_int("model", "n", 1));
    auto spec = std::make_shared<SpectralModel>(make_spectral(kind.substr(9), params));
    const int m = cfg.get_int("model", "m", spec->m());
    if (m != spec->m())
        throw ConfigError("model.m: spectral kind '" + kind + "' has m=" +
                          std::to_string(spec->m()));
    return spec;
}

void check_dimensions(const Functional& g, int model_m) {
    if (g.m != model_m)
        throw ConfigError("functional.m: functional has m=" + std::to_string(g.m) +
                          " but the model has m=" + std::to_string(model_m));
}

ChaosOptions chaos_options(const Config& cfg) {
    ChaosOptions opts;
    opts.q_max = cfg.get_int("chaos", "q_max", 8);
    opts.quadrature_order = cfg.get_int("chaos", "quadrature_order", 64);
    opts.drop_threshold = cfg.get_double("chaos", "drop_threshold", 1e-12);
    return opts;
}

GridSpec grid_spec(const Config& cfg, int n) {
    GridSpec grid;
    grid.n = n;
    grid.s = cfg.get_double("grid", "s", 50.0);
    grid.points_per_axis = cfg.get_int("grid", "points_per_axis", 1024);
    grid.validate();
    return grid;
}

BoxQuadratureOptions quad_options(const Config& cfg) {
    BoxQuadratureOptions opts;
    opts.rel_tol = cfg.get_double("quadrature", "rel_tol", 1e-6);
    opts.start_level = cfg.get_int("quadrature", "start_level", 6);
    opts.max_level = cfg.get_int("quadrature", "max_level", 13);
    return opts;
}

void begin_report(JsonWriter& w, const std::string& command, const Config& cfg) {
    w.begin_object();
    w.kv("command", command);
    w.kv("timestamp", iso_timestamp());
    w.kv("config", cfg.canonical());
}

void clt_section(JsonWriter& w, const CltReport& r) {
    w.kv("replicates", std::uint64_t(r.replicates));
    w.kv("target_variance", r.target_variance);
    w.kv("sample_mean", r.sample_mean);
    w.kv("sample_variance", r.sample_variance);
    w.kv("variance_band", r.variance_band);
    w.kv("variance_band_factor", r.options.variance_band_factor);
    w.kv("variance_pass", r.variance_pass);
    w.kv("ks_statistic", r.ks_statistic);
    w.kv("ks_critical", r.ks_critical);
    w.kv("ks_level_critical", r.options.ks_level_critical);
    w.kv("ks_pvalue", r.ks_pvalue);
    w.kv("ks_pass", r.ks_pass);
    w.kv("pass", r.pass);
}

// Whitened model, composed functional, its expansion, certificate and limit
// variance: shared by the variance-flavoured subcommands.
struct VariancePipeline {
    CovarianceModel model;
    Functional g;
    ChaosExpansion expansion;
    int rank = 0;
    C1Report c1;
    VarianceReport report;
};

VariancePipeline run_variance_pipeline(const Config& cfg, std::span<const double> window_s) {
    VariancePipeline pipe;
    const CovarianceModel raw_model = build_covariance(cfg);
    const Functional raw_g = build_functional(cfg);
    check_dimensions(raw_g, raw_model.m);
    std::tie(pipe.model, pipe.g) = whiten(raw_model, raw_g);
    pipe.expansion = chaos_coefficients(pipe.g, pipe.model.m, chaos_options(cfg));
    pipe.rank = hermite_rank(pipe.expansion);
    const double radius = cfg.get_double("verify", "box_radius", pipe.model.decay_radius);
    pipe.c1 = check_c1(pipe.model, pipe.rank, radius,
                       cfg.get_int("verify", "c1_resolution", 1025));
    pipe.report = limit_variance(pipe.expansion, pipe.model, radius, pipe.c1,
                                 quad_options(cfg), window_s);
    return pipe;
}

int cmd_expand(const Workspace& ws, std::ostream& out) {
    const Functional g = build_functional(ws.cfg);
    const ChaosExpansion e = chaos_coefficients(g, g.m, chaos_options(ws.cfg));
    ws.write("expansion.json", expansion_to_json(e));
    std::size_t terms = 0;
    for (const auto& [q, level] : e.levels) terms += level.size();
    out << "expand: functional=" << g.label << " levels=" << e.levels.size()
        << " terms=" << terms << " captured_mass=" << JsonWriter::number(e.captured_mass)
        << " total_mass=" << JsonWriter::number(e.total_mass_estimate) << "\n";
    return 0;
}

int cmd_rank(const Workspace& ws, std::ostream& out) {
    const Functional g = build_functional(ws.cfg);
    const ChaosExpansion e = chaos_coefficients(g, g.m, chaos_options(ws.cfg));
    const int rank = hermite_rank(e, ws.cfg.get_double("chaos", "rank_tol", 1e-9));
    JsonWriter w;
    begin_report(w, "rank", ws.cfg);
    w.kv("functional", g.label);
    w.kv("rank", rank);
    w.end_object();
    ws.write("report.json", w.str());
    out << rank << "\n";
    return 0;
}

int cmd_variance(const Workspace& ws, std::ostream& out) {
    const std::vector<double> window_s =
        ws.cfg.get_double_list("verify", "s_values", {5.0, 20.0, 50.0});
    const VariancePipeline pipe = run_variance_pipeline(ws.cfg, window_s);
    JsonWriter w;
    begin_report(w, "variance", ws.cfg);
    w.kv("functional", pipe.g.label);
    w.kv("model", pipe.model.id);
    w.kv("rank", pipe.rank);
    w.kv("c1_pass", pipe.c1.pass);
    // Inline the full variance report document.
    w.begin_object("variance");
    w.kv("V", pipe.report.total);
    w.begin_array("per_level");
    for (const auto& [q, v] : pipe.report.per_level) {
        w.begin_object();
        w.kv("q", q);
        w.kv("V_q", v);
        w.end_object();
    }
    w.end_array();
    w.kv("chaos_tail_bound", pipe.report.chaos_tail_bound);
    w.kv("quadrature_tail_note", pipe.report.quadrature_tail_note);
    w.kv("quadrature_error", pipe.report.quadrature_error);
    w.end_object();
    w.begin_array("windows");
    for (const auto& row : pipe.report.windows) {
        w.begin_object();
        w.kv("s", row.s);
        w.kv("V_s", row.total);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    ws.write("report.json", w.str());
    ws.write("c1.json", c1_report_to_json(pipe.c1));
    ws.write("vs.csv", variance_windows_to_csv(pipe.report));
    out << "variance: V=" << JsonWriter::number(pipe.report.total) << " rank=" << pipe.rank
        << " levels=" << pipe.report.per_level.size() << "\n";
    return 0;
}

int cmd_second_chaos(const Workspace& ws, std::ostream& out) {
    const CovarianceModel raw_model = build_covariance(ws.cfg);
    const Functional raw_g = build_functional(ws.cfg);
    auto [model, g] = whiten(raw_model, raw_g);
    const SecondChaosMatrix cm =
        c_matrix(g, model.m, ws.cfg.get_int("chaos", "quadrature_order", 64));
    const double radius = ws.cfg.get_double("verify", "box_radius", model.decay_radius);
    const double trace_value = v2_trace(model, cm, radius, quad_options(ws.cfg));

    double spectral_value = std::nan("");
    const std::string kind = ws.cfg.get_string("model", "kind");
    if (kind.rfind("spectral:", 0) == 0) {
        auto spec = build_spectral(ws.cfg);
        spectral_value = v2_spectral(*spec, cm);
    }

    const ChaosExpansion e = chaos_coefficients(g, model.m, chaos_options(ws.cfg));
    double chaos_value = std::nan("");
    if (e.has_level(2)) {
        const FunctionalCovariance cov(e, model);
        chaos_value = integrate_box(
                          model.n, radius,
                          [&](std::span<const double> x) { return cov.level(2, x); },
                          quad_options(ws.cfg))
                          .value;
    }
    ws.write("report.json", second_chaos_report_json(trace_value, spectral_value, chaos_value, cm));
    out << "second-chaos: V2_trace=" << JsonWriter::number(trace_value)
        << " V2_spectral=" << JsonWriter::number(spectral_value)
        << " V2_chaos=" << JsonWriter::number(chaos_value) << "\n";
    return 0;
}

int cmd_simulate(const Workspace& ws, std::ostream& out) {
    auto spec = build_spectral(ws.cfg);
    const GridSpec grid = grid_spec(ws.cfg, spec->n());
    const std::uint64_t base_seed = ws.cfg.get_u64("verify", "base_seed", 1);
    const int replicates = ws.cfg.get_int("verify", "replicates", 1);
    fs::create_directories(ws.out_dir / "fields");
    for (int rep = 0; rep < replicates; ++rep) {
        const std::uint64_t seed = base_seed + std::uint64_t(rep);
        const FieldSample sample = simulate(*spec, grid, seed);
        const std::string stem = "field_" + std::to_string(seed) + ".bin";
        write_field(sample, ws.out_dir / "fields" / stem,
                    ws.out_dir / "fields" / (stem + ".json"));
    }
    out << "simulate: wrote " << replicates << " field(s) under "
        << (ws.out_dir / "fields").string() << "\n";
    return 0;
}

int cmd_covcheck(const Workspace& ws, std::ostream& out) {
    auto spec = build_spectral(ws.cfg);
    const GridSpec grid = grid_spec(ws.cfg, spec->n());
    const CovarianceModel target = covariance_from_spectral(
        spec, ws.cfg.get_int("model", "freq_points", 4096),
        ws.cfg.get_double("model", "decay_radius", 12.0));
    const std::uint64_t base_seed = ws.cfg.get_u64("verify", "base_seed", 1);
    const int replicates = ws.cfg.get_int("verify", "replicates", 200);

    std::vector<FieldSample> samples;
    samples.reserve(std::size_t(replicates));
    for (int rep = 0; rep < replicates; ++rep)
        samples.push_back(simulate(*spec, grid, base_seed + std::uint64_t(rep)));

    const std::vector<double> lag_values =
        ws.cfg.get_double_list("verify", "lags", {0.0, 0.5, 1.0, 2.0, 3.0});
    std::vector<std::vector<double>> lags;
    for (double v : lag_values) {
        std::vector<double> lag(std::size_t(grid.n), 0.0);
        lag[0] = v;
        lags.push_back(lag);
    }
    const CovarianceEstimate est = empirical_covariance(samples, lags);

    const double band = ws.cfg.get_double("verify", "stderr_band", 3.0);
    bool pass = true;
    JsonWriter w;
    begin_report(w, "covcheck", ws.cfg);
    w.kv("model", spec->id());
    w.kv("replicates", replicates);
    w.kv("stderr_band", band);
    w.begin_array("lags");
    for (std::size_t li = 0; li < est.lags.size(); ++li) {
        const Mat target_r = eval_r(target, est.lags[li]);
        w.begin_object();
        w.begin_array("lag");
        for (double v : est.lags[li]) w.value(v);
        w.end_array();
        w.begin_array("entries");
        for (int j = 0; j < target.m; ++j)
            for (int k = 0; k < target.m; ++k) {
                const double diff = est.mean[li](j, k) - target_r(j, k);
                const double se = est.stderr_jack[li](j, k);
                const bool entry_pass = std::abs(diff) <= band * se;
                pass = pass && entry_pass;
                w.begin_object();
                w.kv("j", j + 1);
                w.kv("k", k + 1);
                w.kv("estimate", est.mean[li](j, k));
                w.kv("target", target_r(j, k));
                w.kv("stderr", se);
                w.kv("pass", entry_pass);
                w.end_object();
            }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.kv("pass", pass);
    w.end_object();
    ws.write("report.json", w.str());
    out << "covcheck: " << (pass ? "pass" : "FAIL") << " (" << est.lags.size() << " lags, "
        << replicates << " replicates)\n";
    return pass ? 0 : 2;
}

int cmd_verify_clt(const Workspace& ws, std::ostream& out) {
    auto spec = build_spectral(ws.cfg);
    const GridSpec grid = grid_spec(ws.cfg, spec->n());
    const VariancePipeline pipe = run_variance_pipeline(ws.cfg, {});
    const double target_v = pipe.report.total;

    const std::uint64_t base_seed = ws.cfg.get_u64("verify", "base_seed", 1);
    const int replicates = ws.cfg.get_int("verify", "replicates", 1000);
    CltOptions clt_opts;
    clt_opts.min_replicates = std::size_t(ws.cfg.get_int("verify", "min_replicates", 500));
    clt_opts.variance_band_factor = ws.cfg.get_double("verify", "variance_band_factor", 5.0);
    clt_opts.ks_level_critical = ws.cfg.get_double("verify", "ks_level_critical", 1.628);

    const double g0 = pipe.expansion.mean;
    std::vector<Observation> observations;
    observations.reserve(std::size_t(replicates));
    std::string csv = "seed,s,L_s\n";
    for (int rep = 0; rep < replicates; ++rep) {
        const std::uint64_t seed = base_seed + std::uint64_t(rep);
        const FieldSample sample = simulate(*spec, grid, seed);
        const Observation obs = window_functional(sample, pipe.g, g0);
        observations.push_back(obs);
        csv += std::to_string(seed) + "," + JsonWriter::number(obs.s) + "," +
               JsonWriter::number(obs.value) + "\n";
    }
    const CltReport report = clt_test(observations, target_v, clt_opts);

    JsonWriter w;
    begin_report(w, "verify-clt", ws.cfg);
    w.kv("functional", pipe.g.label);
    w.kv("model", pipe.model.id);
    w.kv("V", target_v);
    w.begin_object("clt");
    clt_section(w, report);
    w.end_object();
    w.end_object();
    ws.write("report.json", w.str());
    ws.write("observations.csv", csv);
    out << "verify-clt: " << (report.pass ? "pass" : "FAIL")
        << " sample_variance=" << JsonWriter::number(report.sample_variance)
        << " V=" << JsonWriter::number(target_v)
        << " ks=" << JsonWriter::number(report.ks_statistic) << "\n";
    return report.pass ? 0 : 2;
}

int cmd_verify_fclt(const Workspace& ws, std::ostream& out) {
    auto spec = build_spectral(ws.cfg);
    const GridSpec grid = grid_spec(ws.cfg, spec->n());
    const VariancePipeline pipe = run_variance_pipeline(ws.cfg, {});
    const double target_v = pipe.report.total;

    const std::uint64_t base_seed = ws.cfg.get_u64("verify", "base_seed", 1);
    const int replicates = ws.cfg.get_int("verify", "replicates", 1000);
    const std::vector<double> y_grid = ws.cfg.get_double_list(
        "verify", "y_grid", {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0});
    const double p = ws.cfg.get_double("verify", "p", 3.0);
    const bool write_paths = ws.cfg.get_bool("output", "paths_csv", true);

    CltOptions clt_opts;
    clt_opts.min_replicates = std::size_t(ws.cfg.get_int("verify", "min_replicates", 500));
    clt_opts.variance_band_factor = ws.cfg.get_double("verify", "variance_band_factor", 5.0);
    clt_opts.ks_level_critical = ws.cfg.get_double("verify", "ks_level_critical", 1.628);
    IncrementOptions inc_opts;
    inc_opts.min_replicates = clt_opts.min_replicates;
    inc_opts.spread_factor = ws.cfg.get_double("verify", "spread_factor", 3.0);

    const double g0 = pipe.expansion.mean;
    std::vector<PathObservation> paths;
    paths.reserve(std::size_t(replicates));
    std::string csv = "seed,s,y,Z\n";
    for (int rep = 0; rep < replicates; ++rep) {
        const std::uint64_t seed = base_seed + std::uint64_t(rep);
        const FieldSample sample = simulate(*spec, grid, seed);
        PathObservation path = window_path(sample, pipe.g, g0, y_grid);
        if (write_paths)
            for (std::size_t k = 0; k < path.y.size(); ++k)
                csv += std::to_string(seed) + "," + JsonWriter::number(path.s) + "," +
                       JsonWriter::number(path.y[k]) + "," + JsonWriter::number(path.z[k]) + "\n";
        paths.push_back(std::move(path));
    }

    bool pass = true;
    JsonWriter w;
    begin_report(w, "verify-fclt", ws.cfg);
    w.kv("functional", pipe.g.label);
    w.kv("model", pipe.model.id);
    w.kv("V", target_v);
    w.kv("y_note", "functional convergence checked on the finite y grid only");

    // Marginal CLT at each positive y: Z_y should be close to N(0, V y).
    w.begin_array("marginals");
    for (std::size_t k = 0; k < y_grid.size(); ++k) {
        if (y_grid[k] <= 0.0) continue;
        std::vector<Observation> obs(paths.size());
        for (std::size_t i = 0; i < paths.size(); ++i)
            obs[i] = {paths[i].seed, paths[i].s, paths[i].z[k]};
        const CltReport rep = clt_test(obs, target_v * y_grid[k], clt_opts);
        pass = pass && rep.pass;
        w.begin_object();
        w.kv("y", y_grid[k]);
        clt_section(w, rep);
        w.end_object();
    }
    w.end_array();

    // Finite-dimensional covariance table against V * min(y1, y2).
    const double band = ws.cfg.get_double("verify", "stderr_band", 3.0);
    w.begin_array("covariances");
    for (std::size_t i = 0; i < y_grid.size(); ++i)
        for (std::size_t j = i + 1; j < y_grid.size(); ++j) {
            if (y_grid[i] <= 0.0) continue;
            std::vector<double> zi(paths.size()), zj(paths.size());
            for (std::size_t r = 0; r < paths.size(); ++r) {
                zi[r] = paths[r].z[i];
                zj[r] = paths[r].z[j];
            }
            const CovEstimate est = jackknife_covariance(zi, zj);
            const double expected = target_v * std::min(y_grid[i], y_grid[j]);
            const bool entry_pass =
                std::abs(est.value - expected) <= band * est.stderr_jackknife;
            pass = pass && entry_pass;
            w.begin_object();
            w.kv("y1", y_grid[i]);
            w.kv("y2", y_grid[j]);
            w.kv("estimate", est.value);
            w.kv("expected", expected);
            w.kv("stderr", est.stderr_jackknife);
            w.kv("stderr_band", band);
            w.kv("pass", entry_pass);
            w.end_object();
        }
    w.end_array();

    // Increment moment spread over dyadic pairs available on the grid.
    std::vector<std::pair<double, double>> pairs;
    for (const auto& pr : dyadic_pairs(ws.cfg.get_int("verify", "dyadic_levels", 3))) {
        bool have1 = false, have2 = false;
        for (double y : y_grid) {
            have1 = have1 || std::abs(y - pr.first) < 1e-12;
            have2 = have2 || std::abs(y - pr.second) < 1e-12;
        }
        if (have1 && have2) pairs.push_back(pr);
    }
    const IncrementReport inc = increment_test(paths, p, pairs, pipe.g, inc_opts);
    pass = pass && inc.pass;
    w.begin_object("increments");
    w.kv("p", inc.p);
    w.kv("spread", inc.spread);
    w.kv("spread_factor", inc.options.spread_factor);
    w.kv("max_ratio", inc.max_ratio);
    w.kv("median_ratio", inc.median_ratio);
    w.begin_array("pairs");
    for (const auto& pr : inc.pairs) {
        w.begin_object();
        w.kv("y1", pr.y1);
        w.kv("y2", pr.y2);
        w.kv("ratio", pr.ratio);
        w.end_object();
    }
    w.end_array();
    w.kv("pass", inc.pass);
    w.end_object();

    w.kv("pass", pass);
    w.end_object();
    ws.write("report.json", w.str());
    if (write_paths) ws.write("paths.csv", csv);
    out << "verify-fclt: " << (pass ? "pass" : "FAIL")
        << " V=" << JsonWriter::number(target_v)
        << " increment_spread=" << JsonWriter::number(inc.spread) << "\n";
    return pass ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"chaos expansions, limit variances and statistical verification for "
                 "functionals of stationary Gaussian vector fields"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "bmfield_out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int replicates = 0;
    bool replicates_set = false;
    int threads = 0;

    const std::vector<std::string> commands = {"expand",   "rank",       "variance",
                                               "second-chaos", "simulate", "covcheck",
                                               "verify-clt", "verify-fclt"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--override", overrides, "section.key=value config override");
        sub->add_option("--seed", seed, "base seed override")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--replicates", replicates, "replicate count override")
            ->each([&](const std::string&) { replicates_set = true; });
        sub->add_option("--threads", threads, "worker threads (0 = library default)");
    }

    try {
        std::vector<const char*> argv;
        argv.push_back("bmfield");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        Workspace ws;
        ws.cfg = Config::load(config_path);
        for (const auto& o : overrides) ws.cfg.apply_override(o);
        if (seed_set) ws.cfg.apply_override("verify.base_seed=" + std::to_string(seed));
        if (replicates_set)
            ws.cfg.apply_override("verify.replicates=" + std::to_string(replicates));
        ws.out_dir = out_dir;
        if (threads > 0) set_threads(threads);

        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "expand") return cmd_expand(ws, out);
        if (sub == "rank") return cmd_rank(ws, out);
        if (sub == "variance") return cmd_variance(ws, out);
        if (sub == "second-chaos") return cmd_second_chaos(ws, out);
        if (sub == "simulate") return cmd_simulate(ws, out);
        if (sub == "covcheck") return cmd_covcheck(ws, out);
        if (sub == "verify-clt") return cmd_verify_clt(ws, out);
        if (sub == "verify-fclt") return cmd_verify_fclt(ws, out);
        err << "error: unknown subcommand\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bm
