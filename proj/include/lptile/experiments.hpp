#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lptile {

/// Flat key=value configuration with experiment-scoped [sections]; section
/// values override global ones.
class Config {
public:
    Config() = default;
    static Config parse(std::istream& is);
    static Config load(const std::filesystem::path& file);

    void set(const std::string& section, const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& section, const std::string& key) const;

    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    /// Deterministic flat echo "section.key=value" for reports.
    std::vector<std::pair<std::string, std::string>> echo() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct ExperimentResult {
    std::string csv;          // full CSV text, deterministic bytes
    std::string json;         // full JSON text; wall_time_ms varies between runs
    bool numerical_ok = true; // false -> exit code 3, partial results kept
};

/// Names accepted by run_experiment, in canonical order.
const std::vector<std::string>& experiment_names();

/// Runs one experiment and renders its report; throws std::invalid_argument
/// on unknown names or bad parameters (usage errors).
ExperimentResult run_experiment(const std::string& name, const Config& cfg,
                                std::uint64_t seed, std::optional<std::size_t> n_override);

/// Writes <name>.csv and <name>.json under out_dir.
/// Returns 0 on success, 3 on numerical failure (files still written).
int emit_report(const std::string& name, const ExperimentResult& result,
                const std::filesystem::path& out_dir);

}  // namespace lptile
