#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dmcmc/metrics.hpp"
#include "dmcmc/problems.hpp"
#include "dmcmc/samplers.hpp"

namespace dmcmc {

/// Shortest round-trip decimal rendering, so CSV bytes are stable across
/// runs and platforms with the same binary semantics.
std::string format_double(double value);

/// Fixed column order: iteration,metric_name,agent_or_avg,value.
void write_series_csv(const ConvergenceSeries& series, std::ostream& os);
std::string series_csv_string(const ConvergenceSeries& series);

/// One record per data point: agent id, z components, y.
void write_dataset_csv(const std::vector<AgentData>& data, std::ostream& os);
std::vector<AgentData> read_dataset_csv(std::istream& is, int d);

/// Raw iterate dump: trial,iteration,agent,component,value.
void write_iterates_csv(const std::vector<ChainHistory>& histories, std::ostream& os);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace dmcmc
