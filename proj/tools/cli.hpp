#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace speccode::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kConfigError = 2, kDomainError = 3, kNumericalError = 4 };

/// Schema violation; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what) {}
};

/// Typed access to one JSON object. Every key must be consumed before
/// `finish`, which rejects the rest as unknown.
class Fields {
public:
    Fields(const json& object, std::string path);

    [[nodiscard]] bool has(const std::string& key) const { return object_.contains(key); }
    [[nodiscard]] std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    template <class T>
    T get(const std::string& key);
    template <class T>
    T get_or(const std::string& key, T fallback) {
        return has(key) ? get<T>(key) : fallback;
    }
    Fields object(const std::string& key);
    void finish() const;

private:
    const json& object_;
    std::string path_;
    std::set<std::string> seen_;
};

extern template double Fields::get<double>(const std::string&);
extern template int Fields::get<int>(const std::string&);
extern template std::int64_t Fields::get<std::int64_t>(const std::string&);
extern template bool Fields::get<bool>(const std::string&);
extern template std::string Fields::get<std::string>(const std::string&);
extern template std::vector<double> Fields::get<std::vector<double>>(const std::string&);
extern template std::vector<int> Fields::get<std::vector<int>>(const std::string&);
extern template std::vector<std::string> Fields::get<std::vector<std::string>>(const std::string&);

struct RunOptions {
    std::string command;
    json config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
};

/// Runs one command and writes its files into `out`. Returns the exit code;
/// diagnostics go to `err`.
int run(const RunOptions& options, std::ostream& err);

/// Parses argv, loads the config file and calls `run`.
int main_entry(int argc, char** argv);

} // namespace speccode::cli
