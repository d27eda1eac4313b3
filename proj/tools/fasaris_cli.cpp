// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: parameter sweeps over the evaluation engines
// (Monte Carlo, exact block integral, IAE bound, rate optimizer) and a
// standalone throughput-optimization run. JSON config in, CSV/JSON out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fasaris/channel.hpp"
#include "fasaris/corrmodel.hpp"
#include "fasaris/ctrl.hpp"
#include "fasaris/mcsim.hpp"
#include "fasaris/outage.hpp"
#include "fasaris/ratemax.hpp"

namespace {

using json = nlohmann::json;
using namespace fasaris;

constexpr int kExitConfig = 2;
constexpr int kExitEngine = 3;

struct RunConfig {
    channel::SystemConfig system;
    double rate = 2.0;
    std::string sweep_variable;          // one of P N R M W Nb
    std::vector<double> sweep_values;
    std::vector<std::string> engines;    // subset of mc bdma iae ratemax
    long trials = 10000;
    std::uint64_t seed = 1;
    int threads = 0;
    outage::QuadratureSpec quad;
    ratemax::RateOptOptions ropt;
};

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();

    RunConfig rc;
    rc.system = channel::config_from_json_text(ss.str());

    json j = json::parse(ss.str());
    if (j.contains("rate")) rc.rate = j.at("rate").get<double>();
    if (j.contains("trials")) rc.trials = j.at("trials").get<long>();
    if (j.contains("seed")) rc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) rc.threads = j.at("threads").get<int>();
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        rc.sweep_variable = s.at("variable").get<std::string>();
        rc.sweep_values = s.at("values").get<std::vector<double>>();
    }
    if (j.contains("engines")) rc.engines = j.at("engines").get<std::vector<std::string>>();
    if (j.contains("quadrature")) {
        const auto& q = j.at("quadrature");
        if (q.contains("nodes_per_dim")) rc.quad.nodes_per_dim = q.at("nodes_per_dim").get<int>();
        if (q.contains("tail_mass")) rc.quad.tail_mass = q.at("tail_mass").get<double>();
        if (q.contains("inner_nodes")) rc.quad.inner_nodes = q.at("inner_nodes").get<int>();
    }
    if (j.contains("ratemax")) {
        const auto& r = j.at("ratemax");
        if (r.contains("grid_points")) rc.ropt.grid_points = r.at("grid_points").get<int>();
        if (r.contains("max_gradient_iters")) rc.ropt.max_gradient_iters = r.at("max_gradient_iters").get<int>();
        if (r.contains("max_newton_iters")) rc.ropt.max_newton_iters = r.at("max_newton_iters").get<int>();
        if (r.contains("u_cap_norm")) rc.ropt.u_cap_norm = r.at("u_cap_norm").get<double>();
        if (r.contains("u_tail_mass")) rc.ropt.u_tail_mass = r.at("u_tail_mass").get<double>();
        if (r.contains("omega_x_ref_scale")) rc.ropt.omega_x_ref_scale = r.at("omega_x_ref_scale").get<double>();
    }
    rc.quad.validate();
    return rc;
}

struct SweepPoint {
    channel::SystemConfig cfg;
    channel::DerivedParams params;
    corrmodel::BlockPartition partition;
    double rate;
};

SweepPoint apply_sweep(const RunConfig& rc, const std::string& var, double value)
{
    SweepPoint pt{rc.system, {}, {}, rc.rate};
    int nb = 1;
    if (var == "P") {
        pt.cfg.tx_power = channel::dbm_to_watt(value);
    } else if (var == "N") {
        pt.cfg.n_ports = static_cast<int>(value);
    } else if (var == "R") {
        pt.rate = value;
    } else if (var == "M") {
        pt.cfg.m_elements = static_cast<int>(value);
    } else if (var == "W") {
        pt.cfg.aperture = value;
    } else if (var == "Nb") {
        nb = static_cast<int>(value);
    } else {
        throw std::invalid_argument("unknown sweep variable: " + var);
    }
    pt.cfg.validate();
    pt.partition = corrmodel::bdma_partition(pt.cfg.correlation_spec());
    pt.params = channel::derive_params(pt.cfg);
    if (nb > 1) pt.params = ctrl::nb_transform(pt.params, pt.cfg, nb);
    return pt;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void emit_row(std::ostream& os, const std::string& var, double value, const std::string& mode,
              const std::string& engine, double outage, double thr, double std_err,
              long trials, std::uint64_t seed)
{
    os << var << ',' << fmt(value) << ',' << mode << ',' << engine << ',' << fmt(outage) << ','
       << fmt(thr) << ',' << fmt(std_err) << ',' << trials << ',' << seed << '\n';
}

int cmd_run(const RunConfig& rc, const std::string& out_path)
{
    if (rc.sweep_variable.empty() || rc.sweep_values.empty()) {
        std::cerr << "config error: run requires a sweep with at least one value\n";
        return kExitConfig;
    }
    std::vector<std::string> engines = rc.engines;
    if (engines.empty()) engines = {"mc", "bdma", "iae"};
    for (const auto& e : engines) {
        if (e != "mc" && e != "bdma" && e != "iae" && e != "ratemax") {
            std::cerr << "config error: unknown engine '" << e << "'\n";
            return kExitConfig;
        }
    }

    std::ostringstream os;
    os << "sweep_var,sweep_value,mode,engine,outage,throughput,std_err,trials,seed\n";
    for (double value : rc.sweep_values) {
        SweepPoint pt;
        try {
            pt = apply_sweep(rc, rc.sweep_variable, value);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        }
        for (const auto& engine : engines) {
            try {
                if (engine == "mc") {
                    for (auto mode : {mcsim::SimMode::FAS_ARIS, mcsim::SimMode::FAS_PRIS,
                                      mcsim::SimMode::SINGLE_FPA, mcsim::SimMode::PERFECT_CSI}) {
                        const auto est = mcsim::mc_outage(pt.cfg, pt.params, pt.partition, pt.rate,
                                                          mode, rc.trials, rc.seed, rc.threads);
                        emit_row(os, rc.sweep_variable, value, mcsim::to_string(mode), "mc",
                                 est.value, pt.rate * (1.0 - est.value), est.std_err,
                                 est.trials, rc.seed);
                    }
                } else if (engine == "bdma") {
                    const double v = outage::outage_bdma(pt.cfg, pt.params, pt.partition, pt.rate, rc.quad);
                    emit_row(os, rc.sweep_variable, value, "FAS_ARIS", "bdma", v,
                             pt.rate * (1.0 - v), 0.0, 0, rc.seed);
                } else if (engine == "iae") {
                    const double v = outage::outage_iae(pt.cfg, pt.params, pt.partition, pt.rate, rc.quad);
                    emit_row(os, rc.sweep_variable, value, "FAS_ARIS", "iae", v,
                             pt.rate * (1.0 - v), 0.0, 0, rc.seed);
                } else {
                    const auto res = ratemax::optimize_rate(pt.cfg, pt.params, pt.partition,
                                                            rc.quad, rc.ropt);
                    const double pout = res.r_final > 0.0 ? 1.0 - res.t_final / res.r_final : 0.0;
                    emit_row(os, rc.sweep_variable, value, "FAS_ARIS", "ratemax", pout,
                             res.t_final, 0.0, 0, rc.seed);
                }
            } catch (const std::exception& e) {
                std::cerr << "engine failure in " << engine << " at " << rc.sweep_variable << "="
                          << value << ": " << e.what() << "\n";
                return kExitEngine;
            }
        }
    }

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "config error: cannot open output file " << out_path << "\n";
        return kExitConfig;
    }
    out << os.str();
    return 0;
}

int cmd_optimize(const RunConfig& rc, const std::string& out_path)
{
    json j;
    try {
        const auto partition = corrmodel::bdma_partition(rc.system.correlation_spec());
        const auto params = channel::derive_params(rc.system);
        const auto res = ratemax::optimize_rate(rc.system, params, partition, rc.quad, rc.ropt);
        j["lambda0"] = res.lambda0;
        j["lambda1"] = res.lambda1;
        j["u_cap"] = res.u_cap;
        j["omega"] = res.omega;
        if (res.x_omega) j["x_omega"] = *res.x_omega;
        else j["x_omega"] = nullptr;
        j["interval_bits"] = std::log2((1.0 + res.lambda1) / (1.0 + res.lambda0));
        j["candidates"] = {
            {{"region", 1}, {"rate", res.r_star}, {"throughput", res.t_star}},
            {{"region", 2}, {"rate", res.r_star2}, {"throughput", res.t_star2}},
            {{"region", 3}, {"rate", res.r_star3}, {"throughput", res.t_star3}},
        };
        j["rate"] = res.r_final;
        j["throughput"] = res.t_final;
        j["outage_evals"] = res.outage_evals;
        j["gradient_iters"] = res.gradient_iters;
        j["newton_iters"] = res.newton_iters;
        j["block_count"] = partition.block_count();
    } catch (const std::exception& e) {
        std::cerr << "engine failure in ratemax: " << e.what() << "\n";
        return kExitEngine;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "config error: cannot open output file " << out_path << "\n";
        return kExitConfig;
    }
    out << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Outage and throughput evaluation for a fluid-antenna receiver "
                 "served through an active reconfigurable surface"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<long> trials_override;
    std::optional<int> threads_override;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "output file")->required();
        sub->add_option("--seed", seed_override, "override the Monte Carlo seed");
        sub->add_option("--trials", trials_override, "override the Monte Carlo trial count");
        sub->add_option("--threads", threads_override, "worker threads (0 = hardware)");
    };
    auto* run = app.add_subcommand("run", "run the configured sweep, emit CSV");
    auto* opt = app.add_subcommand("optimize", "maximize throughput over the rate, emit JSON");
    add_common(run);
    add_common(opt);

    CLI11_PARSE(app, argc, argv);

    RunConfig rc;
    try {
        rc = parse_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (seed_override) rc.seed = *seed_override;
    if (trials_override) rc.trials = *trials_override;
    if (threads_override) rc.threads = *threads_override;

    if (run->parsed()) return cmd_run(rc, out_path);
    return cmd_optimize(rc, out_path);
}
