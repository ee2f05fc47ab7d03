#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace plap::io {

/// %.17g.
std::string fmt17(double x);

std::uint64_t fnv1a64(std::string_view bytes);

/// Command, parameters and seed of one CLI run. Output paths are not part of
/// the configuration, so relocating outputs keeps the hash.
struct RunConfig {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;

    [[nodiscard]] nlohmann::json to_json() const;
    /// 16 hex digits of FNV-1a over the canonical (sorted-key) JSON dump.
    [[nodiscard]] std::string hash() const;
    /// `# plap <version> config=<hash> seed=<seed>` followed by a newline.
    [[nodiscard]] std::string csv_comment() const;
    /// {"version", "config", "seed", "command"} for embedding in JSON outputs.
    [[nodiscard]] nlohmann::json meta() const;
};

/// Writes bytes exactly; throws Validation when the file cannot be written.
void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

/// Uniform doubles in [0, 1) from mt19937_64 (whose sequence the standard
/// fixes), converted by hand since std distributions vary between libraries.
class Random {
public:
    explicit Random(std::uint64_t seed);
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

struct RenderWindow {
    double xmin = -1.1, xmax = 1.1, ymin = -1.1, ymax = 1.1;
    int width = 220;
    int height = 220;
};

inline constexpr int kRenderLevels = 12;

/// Filled-band SVG of f over the window. NaN samples are left blank. Levels
/// are 12 equal bands between the 2nd and 98th percentiles of the finite
/// samples; a constant field gives a single band.
std::string render_svg(const std::function<double(double, double)>& f, const RenderWindow& window,
                       const RunConfig& config, std::string_view title);

}  // namespace plap::io
