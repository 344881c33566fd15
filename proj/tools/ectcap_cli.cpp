// SPDX-License-Identifier: Apache-2.0
//
// ectcap - capacity bounds for noncoherent underspread OFDM WSSUS fading channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ectcap/bounds.hpp"
#include "ectcap/channel.hpp"
#include "ectcap/coherence.hpp"
#include "ectcap/errors.hpp"
#include "ectcap/io.hpp"
#include "ectcap/mc.hpp"

using namespace ectcap;

namespace {

struct CliChannel {
    int n_bins = 30;
    int num_taps = 5;
    std::vector<double> tap_powers;
    std::vector<double> los_mean; // [re, im]
    std::string corr = "ar1";
    double gamma = 0.9672;
    double fd_ts = 0.02;
    int block_symbols = 31;
    std::vector<double> rho;
};

struct CliArgs {
    std::string config_path;
    CliChannel ch;
    std::string constraint = "quad";
    double alpha = 10.0;
    double snr_start = -40.0, snr_stop = 0.0;
    int snr_points = 21;
    int k_max = 0;
    double rel_tol = 0.0;
    int quad_order = 0;
    std::uint64_t seed = 0;
    bool have_seed = false;
    int n_symbols = 0, n_trials = 0, window = 0;
    bool strict = false, bits = false;
    std::string format, plot, out_path;
    std::string engine = "dense";
    int threads = 0;
};

void add_common_flags(CLI::App *cmd, CliArgs &a) {
    cmd->add_option("--config", a.config_path, "JSON run configuration file");
    cmd->add_option("--n-bins", a.ch.n_bins, "OFDM subcarriers N");
    cmd->add_option("--num-taps", a.ch.num_taps, "equal-power taps L");
    cmd->add_option("--tap-powers", a.ch.tap_powers, "explicit tap powers (sum 1)");
    cmd->add_option("--los-mean", a.ch.los_mean, "LOS mean of tap 0 as re im")->expected(2);
    cmd->add_option("--corr", a.ch.corr, "correlation kind: ar1|clarke|block|custom");
    cmd->add_option("--gamma", a.ch.gamma, "AR1 forgetting factor");
    cmd->add_option("--fdts", a.ch.fd_ts, "Clarke normalized Doppler fd*Ts");
    cmd->add_option("--block-symbols", a.ch.block_symbols, "block length in symbols (odd)");
    cmd->add_option("--rho", a.ch.rho, "custom correlation sequence rho(0) rho(1) ...");
    cmd->add_option("--constraint", a.constraint, "power constraint: peak|quad");
    cmd->add_option("--alpha", a.alpha, "quadratic peakiness alpha");
    cmd->add_option("--snr-start", a.snr_start, "grid start, dB");
    cmd->add_option("--snr-stop", a.snr_stop, "grid stop, dB");
    cmd->add_option("--snr-points", a.snr_points, "grid points");
    cmd->add_option("--k-max", a.k_max, "coherence-time truncation cap");
    cmd->add_option("--rel-tol", a.rel_tol, "coherence-time convergence tolerance");
    cmd->add_option("--quad-order", a.quad_order, "Gauss-Hermite order");
    cmd->add_option("--seed", a.seed, "seed for all stochastic outputs")
        ->each([&a](const std::string &) { a.have_seed = true; });
    cmd->add_option("--n-symbols", a.n_symbols, "Monte Carlo horizon");
    cmd->add_option("--n-trials", a.n_trials, "Monte Carlo trials");
    cmd->add_option("--window", a.window, "estimation window / burn-in override");
    cmd->add_option("--threads", a.threads, "worker threads (0: all cores)");
    cmd->add_flag("--strict", a.strict, "fail on any per-point error");
    cmd->add_flag("--bits", a.bits, "emit rates in bits instead of nats");
    cmd->add_option("--format", a.format, "output format: csv|json");
    cmd->add_option("--plot", a.plot, "emit a plot: none|svg");
    cmd->add_option("--out", a.out_path, "output path ('' = stdout)");
    cmd->add_option("--engine", a.engine, "coherence-time solver: dense|toeplitz");
}

ChannelSpec channel_from_cli(const CliChannel &c) {
    TemporalCorrelation corr = TemporalCorrelation::ar1(c.gamma);
    if (c.corr == "clarke")
        corr = TemporalCorrelation::clarke(c.fd_ts);
    else if (c.corr == "block")
        corr = TemporalCorrelation::block_fading_middle(c.block_symbols);
    else if (c.corr == "custom")
        corr = TemporalCorrelation::custom(c.rho);
    else if (c.corr != "ar1")
        throw Error(ErrorCode::InvalidArgument, "unknown --corr kind '" + c.corr + "'");
    TapProfile taps;
    if (!c.tap_powers.empty()) {
        taps.powers =
            Eigen::Map<const Eigen::VectorXd>(c.tap_powers.data(), long(c.tap_powers.size()));
    } else {
        taps = TapProfile::equal(c.num_taps);
    }
    if (!c.los_mean.empty()) taps.los_mean = cplx(c.los_mean[0], c.los_mean[1]);
    return ChannelSpec(c.n_bins, std::move(taps), corr);
}

RunConfig build_config(const CliArgs &a) {
    RunConfig cfg;
    if (!a.config_path.empty()) cfg = run_config_from_json_text(read_file(a.config_path));
    if (!cfg.channel) cfg.channel = channel_from_cli(a.ch);
    if (a.constraint == "peak")
        cfg.constraint = PowerConstraint::peak();
    else if (a.constraint == "quad")
        cfg.constraint = PowerConstraint::quadratic(a.alpha);
    else
        throw Error(ErrorCode::InvalidArgument, "constraint must be peak or quad");
    cfg.snr.start_db = a.snr_start;
    cfg.snr.stop_db = a.snr_stop;
    cfg.snr.points = a.snr_points;
    if (a.k_max > 0) cfg.ect.k_max = a.k_max;
    if (a.rel_tol > 0) cfg.ect.rel_tol = a.rel_tol;
    if (a.quad_order > 0) cfg.quadrature.order = a.quad_order;
    if (a.have_seed) cfg.mc.seed = a.seed;
    if (a.n_symbols > 0) cfg.mc.n_symbols = a.n_symbols;
    if (a.n_trials > 0) cfg.mc.n_trials = a.n_trials;
    if (a.window > 0) cfg.mc.window = a.window;
    if (a.threads > 0) cfg.threads = a.threads;
    cfg.strict = cfg.strict || a.strict;
    cfg.bits = cfg.bits || a.bits;
    if (!a.format.empty()) cfg.output.format = a.format;
    if (!a.plot.empty()) cfg.output.plot = a.plot;
    if (!a.out_path.empty()) cfg.output.path = a.out_path;
    return cfg;
}

void emit(const RunConfig &cfg, const Table &t, const std::vector<PlotSeries> &series,
          const std::string &title, const std::string &xlabel, const std::string &ylabel,
          bool log_y) {
    std::string text = cfg.output.format == "json" ? table_to_json(t) : table_to_csv(t);
    if (cfg.output.path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_file_atomic(cfg.output.path, text);
        std::fprintf(stderr, "wrote %s\n", cfg.output.path.c_str());
    }
    if (cfg.output.plot == "svg") {
        std::string base = cfg.output.path.empty() ? "plot" : cfg.output.path;
        size_t dot = base.find_last_of('.');
        if (dot != std::string::npos) base = base.substr(0, dot);
        std::string svg_path = base + ".svg";
        write_file_atomic(svg_path, render_svg_plot(title, xlabel, ylabel, series, log_y));
        std::fprintf(stderr, "wrote %s\n", svg_path.c_str());
    }
}

std::string channel_summary(const ChannelSpec &spec) {
    char buf[160];
    snprintf(buf, sizeof buf, "n_bins=%d n_taps=%d corr=%s los=%g", spec.n_bins,
             spec.taps.n_taps(), spec.corr.describe().c_str(), spec.taps.los_power());
    return buf;
}

int cmd_ect_with_engine(RunConfig cfg, const std::string &engine) {
    const ChannelSpec &spec = *cfg.channel;
    EctEngine eng = engine == "toeplitz" ? EctEngine::Toeplitz : EctEngine::Dense;
    auto pts = tc_sweep(spec.corr, spec.n_bins, cfg.snr.linear_values(), cfg.ect, eng);
    Table t;
    t.preamble.push_back(channel_summary(spec));
    t.header = {"snr_db", "tc_hat", "converged", "k_used", "error"};
    auto dbs = cfg.snr.db_values();
    PlotSeries s{"tc_hat", {}, {}};
    int failures = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto &p = pts[i];
        if (p.error) ++failures;
        t.rows.push_back({format_double(dbs[i]),
                          p.error ? "" : format_double(p.result.value),
                          p.error ? "" : (p.result.converged ? "1" : "0"),
                          p.error ? "" : std::to_string(p.result.k_used),
                          p.error ? *p.error : ""});
        if (!p.error) {
            s.x.push_back(dbs[i]);
            s.y.push_back(p.result.value);
        }
    }
    emit(cfg, t, {s}, "effective coherence time", "SNR [dB]", "T_c [samples]", true);
    return cfg.strict && failures > 0 ? 1 : 0;
}

void bound_rows(Table &t, const std::vector<BoundPoint> &curve, double unit) {
    for (const auto &bp : curve) {
        t.rows.push_back({format_double(bp.snr_db), format_double(bp.ub_coh * unit),
                          format_double(bp.ub_low * unit), format_double(bp.lb_qpsk_nw * unit),
                          format_double(bp.lb_qpsk_wd * unit), format_double(bp.lb_tg_wd * unit),
                          format_double(bp.lb * unit), format_double(bp.ub * unit),
                          family_name(bp.argmax.family), std::to_string(bp.argmax.r),
                          format_double(bp.argmax.beta), format_double(bp.argmax.eta),
                          std::isinf(bp.argmax.xi) ? "inf" : format_double(bp.argmax.xi)});
    }
}

std::vector<PlotSeries> bound_series(const std::vector<BoundPoint> &curve, double unit) {
    PlotSeries ubc{"UB_coh", {}, {}}, ubl{"UB_low", {}, {}}, nw{"LB_QPSK_nw", {}, {}},
        wd{"LB_QPSK_wd", {}, {}}, tg{"LB_TG_wd", {}, {}}, lb{"LB", {}, {}};
    for (const auto &bp : curve) {
        ubc.x.push_back(bp.snr_db);
        ubc.y.push_back(bp.ub_coh * unit);
        ubl.x.push_back(bp.snr_db);
        ubl.y.push_back(bp.ub_low * unit);
        nw.x.push_back(bp.snr_db);
        nw.y.push_back(bp.lb_qpsk_nw * unit);
        wd.x.push_back(bp.snr_db);
        wd.y.push_back(bp.lb_qpsk_wd * unit);
        tg.x.push_back(bp.snr_db);
        tg.y.push_back(bp.lb_tg_wd * unit);
        lb.x.push_back(bp.snr_db);
        lb.y.push_back(bp.lb * unit);
    }
    return {ubc, ubl, nw, wd, tg, lb};
}

const std::vector<std::string> kBoundHeader = {
    "snr_db", "ub_coh", "ub_low", "lb_qpsk_nw", "lb_qpsk_wd", "lb_tg_wd",
    "lb",     "ub",     "argmax_family", "argmax_r", "argmax_beta", "argmax_eta", "argmax_xi"};

int cmd_bounds(const RunConfig &cfg, const std::string &preset_note = "") {
    const ChannelSpec &spec = *cfg.channel;
    double unit = cfg.bits ? 1.0 / std::log(2.0) : 1.0;
    auto curve = bound_curve(spec, cfg.constraint, cfg.snr.db_values(), cfg.ect, cfg.quadrature,
                             {}, cfg.threads);
    Table t;
    if (!preset_note.empty()) t.preamble.push_back(preset_note);
    t.preamble.push_back(channel_summary(spec));
    t.preamble.push_back(std::string("constraint=") +
                         (cfg.constraint.is_peak() ? "peak" : "quad") +
                         " alpha=" + format_double(cfg.constraint.alpha) +
                         (cfg.bits ? " unit=bits" : " unit=nats"));
    t.header = kBoundHeader;
    bound_rows(t, curve, unit);
    emit(cfg, t, bound_series(curve, unit), "capacity bounds", "SNR [dB]",
         cfg.bits ? "rate [bit/sample]" : "rate [nat/sample]", true);
    return 0;
}

int cmd_simulate(const RunConfig &cfg, const std::string &preset_note = "") {
    const ChannelSpec &spec = *cfg.channel;
    double unit = cfg.bits ? 1.0 / std::log(2.0) : 1.0;
    TcFn tc = make_interp_tc(spec.corr, spec.n_bins, cfg.ect);
    Table t;
    if (!preset_note.empty()) t.preamble.push_back(preset_note);
    t.preamble.push_back(channel_summary(spec));
    char mcline[128];
    snprintf(mcline, sizeof mcline, "mc: n_symbols=%d n_trials=%d seed=%llu", cfg.mc.n_symbols,
             cfg.mc.n_trials, static_cast<unsigned long long>(cfg.mc.seed));
    t.preamble.push_back(mcline);
    t.header = {"snr_db", "mc_rate", "mc_stderr", "approx_rate", "error"};
    PlotSeries sim{"mc_rate", {}, {}}, app{"approx_rate", {}, {}};
    int failures = 0;
    for (double db : cfg.snr.db_values()) {
        double p = std::pow(10.0, db / 10.0);
        try {
            McConfig mc = cfg.mc;
            mc.n_threads = cfg.threads;
            McRate r = gaussian_rate_simulation(spec, p, mc);
            double a = gaussian_rate_approximation(spec, p, tc);
            t.rows.push_back({format_double(db), format_double(r.rate * unit),
                              format_double(r.std_err * unit), format_double(a * unit), ""});
            sim.x.push_back(db);
            sim.y.push_back(r.rate * unit);
            app.x.push_back(db);
            app.y.push_back(a * unit);
        } catch (const Error &e) {
            ++failures;
            t.rows.push_back({format_double(db), "", "", "",
                              std::string(Error::code_name(e.code())) + ": " + e.what()});
        }
    }
    emit(cfg, t, {sim, app}, "Gaussian-input achievable rate", "SNR [dB]",
         cfg.bits ? "rate [bit/sample]" : "rate [nat/sample]", true);
    return cfg.strict && failures > 0 ? 1 : 0;
}

// Paper-study presets: N=30, L=5 equal taps, zero mean.
int cmd_figure(const CliArgs &args, const std::string &name) {
    RunConfig cfg = build_config(args);
    auto ar1_spec = [&](double gamma) {
        return ChannelSpec(30, TapProfile::equal(5), TemporalCorrelation::ar1(gamma));
    };
    if (name == "figure1") {
        cfg.ect.k_max = std::max(cfg.ect.k_max, 16384);
        cfg.snr = {-60.0, 10.0, 36};
        Table t;
        t.preamble.push_back("preset figure1: n_bins=30 n_taps=5 ar1 gamma in "
                             "{0.9672,0.9851,0.997,0.9994}");
        t.header = {"gamma", "snr_db", "tc_hat", "converged", "k_used"};
        std::vector<PlotSeries> series;
        for (double g : {0.9672, 0.9851, 0.997, 0.9994}) {
            auto spec = ar1_spec(g);
            auto pts =
                tc_sweep(spec.corr, 30, cfg.snr.linear_values(), cfg.ect, EctEngine::Toeplitz);
            PlotSeries s{"gamma=" + format_double(g), {}, {}};
            auto dbs = cfg.snr.db_values();
            for (size_t i = 0; i < pts.size(); ++i) {
                if (pts[i].error) continue;
                t.rows.push_back({format_double(g), format_double(dbs[i]),
                                  format_double(pts[i].result.value),
                                  pts[i].result.converged ? "1" : "0",
                                  std::to_string(pts[i].result.k_used)});
                s.x.push_back(dbs[i]);
                s.y.push_back(pts[i].result.value);
            }
            series.push_back(std::move(s));
        }
        if (cfg.output.path.empty()) cfg.output.path = "figure1.csv";
        emit(cfg, t, series, "effective coherence time, AR1", "SNR [dB]", "T_c [samples]", true);
        return 0;
    }
    if (name == "figure2") {
        cfg.channel = ar1_spec(0.9672);
        cfg.constraint = PowerConstraint::quadratic(10.0);
        cfg.ect.k_max = std::max(cfg.ect.k_max, 8192);
        cfg.snr = {-50.0, 5.0, 56};
        if (cfg.output.path.empty()) cfg.output.path = "figure2.csv";
        return cmd_bounds(cfg, "preset figure2: n_bins=30 n_taps=5 ar1 gamma=0.9672 alpha=10 "
                               "quad zero-mean");
    }
    if (name == "figure3") {
        cfg.constraint = PowerConstraint::quadratic(2.0);
        cfg.ect.k_max = std::max(cfg.ect.k_max, 32768);
        cfg.snr = {-55.0, 0.0, 56};
        Table t;
        t.preamble.push_back("preset figure3: n_bins=30 n_taps=5 ar1 gamma in "
                             "{0.9851,0.997,0.9994} alpha=2 quad zero-mean");
        t.header = kBoundHeader;
        t.header.insert(t.header.begin(), "gamma");
        double unit = cfg.bits ? 1.0 / std::log(2.0) : 1.0;
        std::vector<PlotSeries> series;
        for (double g : {0.9851, 0.997, 0.9994}) {
            auto curve = bound_curve(ar1_spec(g), cfg.constraint, cfg.snr.db_values(), cfg.ect,
                                     cfg.quadrature, {}, cfg.threads);
            Table part;
            bound_rows(part, curve, unit);
            for (auto &row : part.rows) {
                row.insert(row.begin(), format_double(g));
                t.rows.push_back(row);
            }
            PlotSeries ub{"UB gamma=" + format_double(g), {}, {}};
            PlotSeries lb{"LB gamma=" + format_double(g), {}, {}};
            for (const auto &bp : curve) {
                ub.x.push_back(bp.snr_db);
                ub.y.push_back(bp.ub * unit);
                lb.x.push_back(bp.snr_db);
                lb.y.push_back(bp.lb * unit);
            }
            series.push_back(std::move(ub));
            series.push_back(std::move(lb));
        }
        if (cfg.output.path.empty()) cfg.output.path = "figure3.csv";
        emit(cfg, t, series, "capacity bounds, AR1, alpha=2", "SNR [dB]",
             cfg.bits ? "rate [bit/sample]" : "rate [nat/sample]", true);
        return 0;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown figure '" + name + "'");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"capacity bounds and effective coherence time for noncoherent OFDM WSSUS "
                 "fading channels"};
    app.require_subcommand(1);

    CliArgs a_ect, a_bounds, a_sim, a_fig;
    auto *c_ect = app.add_subcommand("ect", "effective coherence time sweep");
    add_common_flags(c_ect, a_ect);
    auto *c_bounds = app.add_subcommand("bounds", "upper/lower capacity bound curve");
    add_common_flags(c_bounds, a_bounds);
    auto *c_sim = app.add_subcommand("simulate", "Monte Carlo Gaussian-input rate");
    add_common_flags(c_sim, a_sim);
    auto *c_fig = app.add_subcommand("figure", "reproduce a numerical-study figure");
    std::string figure_name;
    c_fig->add_option("name", figure_name, "figure1|figure2|figure3")->required();
    add_common_flags(c_fig, a_fig);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_ect->parsed()) return cmd_ect_with_engine(build_config(a_ect), a_ect.engine);
        if (c_bounds->parsed()) return cmd_bounds(build_config(a_bounds));
        if (c_sim->parsed()) return cmd_simulate(build_config(a_sim));
        if (c_fig->parsed()) return cmd_figure(a_fig, figure_name);
    } catch (const Error &e) {
        std::fprintf(stderr, "{\"error\":\"%s\",\"message\":\"%s\"}\n",
                     Error::code_name(e.code()), e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "{\"error\":\"Exception\",\"message\":\"%s\"}\n", e.what());
        return 2;
    }
    return 0;
}
