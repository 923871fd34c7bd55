#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wordeq/problem_io.hpp"
#include "wordeq/search.hpp"

namespace wordeq {

struct BatchRow {
  std::string id;
  Status status = Status::Unknown;
  std::uint64_t splits = 0;
  double wall_millis = 0;
  int max_depth = 0;
  /// Non-empty when the problem could not be loaded or solved.
  std::string error;
};

struct BatchAggregates {
  std::size_t sat = 0;
  std::size_t unsat = 0;
  std::size_t unknown = 0;
  std::size_t errors = 0;
  double mean_wall_millis_solved = 0;
  double mean_splits_solved = 0;
};

struct BatchReport {
  std::vector<BatchRow> rows;

  BatchAggregates aggregates() const {
    BatchAggregates a;
    double wall = 0, splits = 0;
    for (const auto& r : rows) {
      if (!r.error.empty()) {
        ++a.errors;
        continue;
      }
      switch (r.status) {
        case Status::Sat: ++a.sat; break;
        case Status::Unsat: ++a.unsat; break;
        case Status::Unknown: ++a.unknown; break;
      }
      if (r.status != Status::Unknown) {
        wall += r.wall_millis;
        splits += static_cast<double>(r.splits);
      }
    }
    const auto solved = a.sat + a.unsat;
    if (solved != 0) {
      a.mean_wall_millis_solved = wall / static_cast<double>(solved);
      a.mean_splits_solved = splits / static_cast<double>(solved);
    }
    return a;
  }
};

/// Mean splits per report over the problem ids every report solved.
inline std::vector<double> mean_splits_commonly_solved(const std::vector<BatchReport>& reports) {
  std::map<std::string, std::size_t> solved_count;
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      if (r.error.empty() && r.status != Status::Unknown) ++solved_count[r.id];
  std::set<std::string> common;
  for (const auto& [id, n] : solved_count)
    if (n == reports.size()) common.insert(id);
  std::vector<double> out;
  for (const auto& rep : reports) {
    double total = 0;
    for (const auto& r : rep.rows)
      if (common.count(r.id) != 0) total += static_cast<double>(r.splits);
    out.push_back(common.empty() ? 0.0 : total / static_cast<double>(common.size()));
  }
  return out;
}

/// `*.eq` files of a directory, sorted by file name.
inline std::vector<std::filesystem::path> list_problem_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".eq") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

/// Solves every problem of `dir` with up to `jobs` worker threads. Rows come
/// back in file-name order whatever the completion order.
inline BatchReport batch_eval(const std::filesystem::path& dir, const SearchConfig& cfg, const ModelWeights* model,
                              unsigned jobs = 1) {
  const auto files = list_problem_files(dir);
  BatchReport report;
  report.rows.resize(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      BatchRow& row = report.rows[i];
      row.id = files[i].filename().string();
      try {
        const Problem p = load_problem(files[i].string());
        const SearchResult r = solve(p, cfg, model);
        row.status = r.status;
        row.splits = r.stats.splits;
        row.wall_millis = r.stats.wall_millis;
        row.max_depth = r.stats.max_depth;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

/// Tab-separated rows, a blank line, then the aggregates as one JSON object.
/// Wall times print as `-` when `include_timing` is false so that reports
/// from repeated runs compare byte for byte.
inline std::string format_report(const BatchReport& report, bool include_timing = true) {
  std::ostringstream out;
  out << "id\tstatus\tsplits\twallMillis\tmaxDepth\terror\n";
  for (const auto& r : report.rows) {
    out << r.id << '\t' << (r.error.empty() ? to_string(r.status) : std::string_view("ERROR")) << '\t' << r.splits
        << '\t';
    if (include_timing) {
      out << r.wall_millis;
    } else {
      out << '-';
    }
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '\t', ' ');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << '\t' << r.max_depth << '\t' << err << '\n';
  }
  const auto a = report.aggregates();
  nlohmann::ordered_json j;
  j["problems"] = report.rows.size();
  j["sat"] = a.sat;
  j["unsat"] = a.unsat;
  j["unknown"] = a.unknown;
  j["errors"] = a.errors;
  j["meanWallMillisSolved"] = include_timing ? nlohmann::ordered_json(a.mean_wall_millis_solved) : nlohmann::ordered_json();
  j["meanSplitsSolved"] = a.mean_splits_solved;
  out << '\n' << j.dump() << '\n';
  return out.str();
}

}  // namespace wordeq
