#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace molliclt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInvalidConfig = 2;

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string f, const std::string& msg) : std::runtime_error(f + ": " + msg), field(std::move(f)) {}
};

struct RunConfig {
    std::string command;
    std::optional<std::uint64_t> q;
    std::string mode = "desk";
    std::optional<double> eta;
    double c0 = 1;
    std::vector<double> theta;
    std::uint64_t seed = 0;
    std::size_t mc_samples = 20000;
    std::string output_dir = "out";
    unsigned threads = 1;
    // command-specific
    std::string method = "afe";   // lvalues, clt
    bool compare = false;         // lvalues: also run the other method
    double delta = 0;             // clt: 0 picks the default bandwidth
    std::size_t length = 60;      // second-moment: x_n taken from the mollifier for n <= length
};

// Throws ConfigError naming the offending field.
void validate(const RunConfig& c);
// key=value lines in a fixed order; hashed into every output.
std::string canonical(const RunConfig& c);
std::string config_hash(const RunConfig& c);

int cmd_characters(const RunConfig& c);
int cmd_lvalues(const RunConfig& c);
int cmd_clt(const RunConfig& c);
int cmd_random(const RunConfig& c);
int cmd_second_moment(const RunConfig& c);

// Validates, then dispatches on c.command. Config errors print to stderr and return 2.
int run(const RunConfig& c);

}  // namespace molliclt::cli
