// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo ground truth for outage and throughput under four
// receiver/surface modes. Trials run on counter-based substreams so the
// estimate is bit-identical for any thread count.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fasaris/channel.hpp"
#include "fasaris/corrmodel.hpp"

namespace fasaris::mcsim {

enum class SimMode { FAS_ARIS, FAS_PRIS, SINGLE_FPA, PERFECT_CSI };

const char* to_string(SimMode mode);
SimMode sim_mode_from_string(const std::string& name);

struct McEstimate {
    double value = 0.0;
    long trials = 0;
    double std_err = 0.0;
};

// Per-port SNRs for one realization. FAS modes return all N ports; the
// restricted modes return a single entry (port 1, or the full-CSI port).
std::vector<double> snr_per_port(const channel::ChannelSample& sample,
                                 const channel::DerivedParams& params,
                                 const channel::SystemConfig& cfg, SimMode mode);

McEstimate mc_outage(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                     const corrmodel::BlockPartition& partition, double rate, SimMode mode,
                     long trials, std::uint64_t seed, int threads = 0);

McEstimate mc_throughput(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                         const corrmodel::BlockPartition& partition, double rate, SimMode mode,
                         long trials, std::uint64_t seed, int threads = 0);

}  // namespace fasaris::mcsim
