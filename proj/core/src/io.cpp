#include "dmcmc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace dmcmc {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

void write_series_csv(const ConvergenceSeries& series, std::ostream& os) {
  os << "iteration,metric_name,agent_or_avg,value\n";
  for (const auto& row : series.rows)
    os << row.iteration << ',' << row.metric << ',' << row.agent << ','
       << format_double(row.value) << '\n';
}

std::string series_csv_string(const ConvergenceSeries& series) {
  std::ostringstream os;
  write_series_csv(series, os);
  return os.str();
}

void write_dataset_csv(const std::vector<AgentData>& data, std::ostream& os) {
  const int d = data.empty() ? 0 : static_cast<int>(data.front().z.cols());
  os << "agent";
  for (int r = 0; r < d; ++r) os << ",z" << r;
  os << ",y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (Eigen::Index l = 0; l < data[i].z.rows(); ++l) {
      os << i;
      for (int r = 0; r < d; ++r) os << ',' << format_double(data[i].z(l, r));
      os << ',' << format_double(data[i].y[l]) << '\n';
    }
  }
}

std::vector<AgentData> read_dataset_csv(std::istream& is, int d) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("dataset csv: missing header");
  std::vector<std::vector<std::pair<Eigen::VectorXd, double>>> per_agent;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    const std::size_t agent = std::stoul(field);
    if (agent >= per_agent.size()) per_agent.resize(agent + 1);
    Eigen::VectorXd z(d);
    for (int r = 0; r < d; ++r) {
      std::getline(ss, field, ',');
      z[r] = std::stod(field);
    }
    std::getline(ss, field, ',');
    per_agent[agent].emplace_back(std::move(z), std::stod(field));
  }
  std::vector<AgentData> out(per_agent.size());
  for (std::size_t i = 0; i < per_agent.size(); ++i) {
    const auto rows = static_cast<Eigen::Index>(per_agent[i].size());
    out[i].z.resize(rows, d);
    out[i].y.resize(rows);
    for (Eigen::Index l = 0; l < rows; ++l) {
      out[i].z.row(l) = per_agent[i][l].first.transpose();
      out[i].y[l] = per_agent[i][l].second;
    }
  }
  return out;
}

void write_iterates_csv(const std::vector<ChainHistory>& histories, std::ostream& os) {
  os << "trial,iteration,agent,component,value\n";
  for (std::size_t t = 0; t < histories.size(); ++t) {
    const auto& h = histories[t];
    for (std::size_t r = 0; r < h.iterations.size(); ++r) {
      for (std::size_t i = 0; i < h.states[r].size(); ++i) {
        const auto& x = h.states[r][i];
        for (Eigen::Index comp = 0; comp < x.size(); ++comp)
          os << t << ',' << h.iterations[r] << ',' << i << ',' << comp << ','
             << format_double(x[comp]) << '\n';
      }
    }
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace dmcmc
