#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "contassort/harness.hpp"
#include "contassort/policies.hpp"

namespace contassort {

/// Shortest round-trip decimal text for a double.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  }
  return std::string(buf, ptr);
}

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
}

inline std::string regret_csv_text(const RegretTrace& trace, const std::string& config_hash) {
  std::ostringstream out;
  out << "# contassort regret trace config=" << config_hash;
  if (trace.single_rep) out << " single_rep=1";
  out << "\n";
  out << "T,mean_regret,stderr,reps\n";
  for (std::size_t i = 0; i < trace.horizons.size(); ++i) {
    out << trace.horizons[i] << ',' << format_double(trace.mean[i]) << ','
        << format_double(trace.stderr_[i]) << ',' << trace.reps[i] << "\n";
  }
  return out.str();
}

inline std::string dat_text(const std::vector<double>& xs, const std::vector<double>& ys,
                            const std::string& config_hash) {
  std::ostringstream out;
  out << "# contassort config=" << config_hash << "\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << format_double(xs[i]) << ' ' << format_double(ys[i]) << "\n";
  return out.str();
}

inline std::string grid_csv_text(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::string& config_hash, const std::string& x_name,
                                 const std::string& y_name) {
  std::ostringstream out;
  out << "# contassort config=" << config_hash << "\n";
  out << x_name << ',' << y_name << "\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << format_double(xs[i]) << ',' << format_double(ys[i]) << "\n";
  return out.str();
}

inline std::string sales_log_csv_text(const SalesLog& log, const std::string& config_hash) {
  std::ostringstream out;
  out << "# contassort sales log config=" << config_hash << "\n";
  out << "t,assortment,outcome,inst_regret\n";
  for (const auto& rec : log) {
    out << rec.t << ',';
    for (std::size_t i = 0; i < rec.offered.intervals().size(); ++i) {
      const auto& iv = rec.offered.intervals()[i];
      if (i) out << ';';
      out << format_double(iv.lo) << '-' << format_double(iv.hi);
    }
    out << ',';
    if (rec.outcome.purchased)
      out << format_double(rec.outcome.product);
    else
      out << "nopurchase";
    out << ',' << format_double(rec.inst_regret) << "\n";
  }
  return out.str();
}

/// Reads numeric rows from a CSV, skipping '#' comments and a header line if
/// the first field is not numeric. Returns rows of doubles.
inline std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    bool numeric = true;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        const double value = std::stod(field, &used);
        row.push_back(value);
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (numeric && !row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace contassort
